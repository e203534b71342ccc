// Independent reference implementations used to cross-check the library.
// Everything here deliberately takes a different algebraic route from the
// code under test.
#ifndef WAVEGEN_TESTS_ORACLES_HPP
#define WAVEGEN_TESTS_ORACLES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "wavegen/fourier.hpp"

namespace oracles {

// Least squares on the full Kronecker system: the basis is expanded to
// Psi = Phi (x) I_D acting on the stacked trajectory, and the flat weight
// vector is recovered with a rank-revealing QR. No per-joint shortcut, no
// orthogonality assumption.
inline Eigen::MatrixXcd kron_least_squares(const Eigen::MatrixXd& trajectory,
                                           int harmonics) {
  const Eigen::Index samples = trajectory.rows();
  const Eigen::Index dofs = trajectory.cols();
  const Eigen::Index cols = 2 * harmonics + 1;
  const std::complex<double> i_unit(0.0, 1.0);

  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(samples * dofs, cols * dofs);
  for (Eigen::Index t = 0; t < samples; ++t)
    for (Eigen::Index j = 0; j < cols; ++j) {
      const std::complex<double> phi = std::exp(
          i_unit * (2.0 * M_PI * static_cast<double>(t) *
                    static_cast<double>(j - harmonics) / static_cast<double>(samples)));
      for (Eigen::Index d = 0; d < dofs; ++d) psi(t * dofs + d, j * dofs + d) = phi;
    }

  Eigen::VectorXcd stacked(samples * dofs);
  for (Eigen::Index t = 0; t < samples; ++t)
    for (Eigen::Index d = 0; d < dofs; ++d) stacked[t * dofs + d] = trajectory(t, d);

  Eigen::VectorXcd flat = psi.colPivHouseholderQr().solve(stacked);

  Eigen::MatrixXcd coeffs(dofs, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index d = 0; d < dofs; ++d) coeffs(d, j) = flat[j * dofs + d];
  return coeffs;
}

// Per-joint normal equations (Phi^H Phi) w = Phi^H y solved by LU, without
// assuming the Gram matrix is a multiple of the identity.
inline Eigen::MatrixXcd normal_equation_fit(const Eigen::MatrixXd& trajectory,
                                            int harmonics) {
  const wavegen::BasisMatrix basis =
      wavegen::build_basis(static_cast<int>(trajectory.rows()), harmonics);
  const Eigen::MatrixXcd gram = basis.entries.adjoint() * basis.entries;
  const Eigen::MatrixXcd rhs = basis.entries.adjoint() * trajectory;
  return gram.fullPivLu().solve(rhs).transpose();
}

struct ConditionalGaussian {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

// Gaussian conditioning through the precision matrix: invert the full
// covariance, read the conditional precision of the free block directly, and
// invert it back. Avoids the Schur-complement route used by the library.
inline ConditionalGaussian precision_conditioning(const Eigen::VectorXd& mean,
                                                  const Eigen::MatrixXd& sigma,
                                                  const std::vector<int>& pinned,
                                                  const Eigen::VectorXd& values) {
  const Eigen::Index dim = mean.size();
  std::vector<bool> is_pinned(dim, false);
  for (int idx : pinned) is_pinned[idx] = true;
  std::vector<int> free_index;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (!is_pinned[i]) free_index.push_back(static_cast<int>(i));

  const Eigen::MatrixXd precision = sigma.inverse();
  const Eigen::Index na = static_cast<Eigen::Index>(free_index.size());
  const Eigen::Index nb = static_cast<Eigen::Index>(pinned.size());

  Eigen::MatrixXd lambda_aa(na, na);
  Eigen::MatrixXd lambda_ab(na, nb);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < na; ++j)
      lambda_aa(i, j) = precision(free_index[i], free_index[j]);
    for (Eigen::Index j = 0; j < nb; ++j)
      lambda_ab(i, j) = precision(free_index[i], pinned[j]);
  }

  Eigen::VectorXd residual(nb);
  for (Eigen::Index j = 0; j < nb; ++j) residual[j] = values[j] - mean[pinned[j]];

  ConditionalGaussian out;
  out.covariance = lambda_aa.inverse();
  Eigen::VectorXd mu_a(na);
  for (Eigen::Index i = 0; i < na; ++i) mu_a[i] = mean[free_index[i]];
  out.mean = mu_a - out.covariance * (lambda_ab * residual);
  return out;
}

// Forward kinematics by explicit 4x4 homogeneous transforms with a
// hand-rolled Rodrigues rotation.
inline Eigen::Matrix3d rodrigues(const Eigen::Vector3d& axis, double angle) {
  Eigen::Matrix3d skew;
  skew << 0.0, -axis.z(), axis.y(),
      axis.z(), 0.0, -axis.x(),
      -axis.y(), axis.x(), 0.0;
  return Eigen::Matrix3d::Identity() + std::sin(angle) * skew +
         (1.0 - std::cos(angle)) * skew * skew;
}

inline std::vector<Eigen::Vector3d> homogeneous_fk(
    const Eigen::Vector3d& base_position, const Eigen::Matrix3d& base_rotation,
    const std::vector<Eigen::Vector3d>& axes, const std::vector<Eigen::Vector3d>& offsets,
    const Eigen::VectorXd& q) {
  Eigen::Matrix4d transform = Eigen::Matrix4d::Identity();
  transform.topLeftCorner<3, 3>() = base_rotation;
  transform.topRightCorner<3, 1>() = base_position;

  std::vector<Eigen::Vector3d> points;
  points.push_back(transform.topRightCorner<3, 1>());
  for (size_t i = 0; i < axes.size(); ++i) {
    Eigen::Matrix4d step = Eigen::Matrix4d::Identity();
    step.topLeftCorner<3, 3>() = rodrigues(axes[i], q[static_cast<Eigen::Index>(i)]);
    step.topRightCorner<3, 1>() = Eigen::Vector3d::Zero();
    Eigen::Matrix4d shift = Eigen::Matrix4d::Identity();
    shift.topRightCorner<3, 1>() = offsets[i];
    transform = transform * step * shift;
    points.push_back(transform.topRightCorner<3, 1>());
  }
  return points;
}

// --- generators -----------------------------------------------------------

inline Eigen::MatrixXd random_pd_covariance(int dim, std::mt19937_64& rng,
                                            double ridge = 0.5) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd a(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) a(r, c) = normal(rng);
  Eigen::MatrixXd sigma = a * a.transpose() / static_cast<double>(dim);
  sigma.diagonal().array() += ridge;
  return 0.5 * (sigma + sigma.transpose());
}

inline wavegen::ComplexWeights random_symmetric_weights(int dofs, int harmonics,
                                                        std::mt19937_64& rng,
                                                        double duration = 1.0) {
  std::uniform_real_distribution<double> log_mod(-2.0, 0.7);
  std::uniform_real_distribution<double> phase(-3.1, 3.1);
  std::uniform_real_distribution<double> dc(-2.0, 2.0);

  wavegen::ComplexWeights weights;
  weights.harmonics = harmonics;
  weights.duration = duration;
  weights.coeffs.resize(dofs, 2 * harmonics + 1);
  for (int d = 0; d < dofs; ++d) {
    weights.at(d, 0) = dc(rng);
    for (int k = 1; k <= harmonics; ++k) {
      const std::complex<double> w = std::polar(std::exp(log_mod(rng)), phase(rng));
      weights.at(d, k) = w;
      weights.at(d, -k) = std::conj(w);
    }
  }
  return weights;
}

inline int count_sign_changes(const Eigen::VectorXd& signal) {
  int count = 0;
  for (Eigen::Index i = 1; i < signal.size(); ++i)
    if ((signal[i - 1] < 0.0) != (signal[i] < 0.0)) ++count;
  return count;
}

inline double rmse(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return std::sqrt((a - b).squaredNorm() / static_cast<double>(a.size()));
}

}  // namespace oracles

#endif  // WAVEGEN_TESTS_ORACLES_HPP
