#ifndef WAVEGEN_FOURIER_HPP
#define WAVEGEN_FOURIER_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "wavegen/circular.hpp"
#include "wavegen/demonstration.hpp"

namespace wavegen {

/// Complex exponential basis over one trajectory period.
///
/// entries(t, j) = exp(i * 2*pi * t * k_j / T) with t = 0..T-1 and
/// k_j = j - K running over the harmonics -K..K. With 2K+1 <= T the columns
/// are orthogonal: entries^H * entries = T * I.
struct BasisMatrix {
  Eigen::MatrixXcd entries;  // T x (2K+1)
  int harmonics = 0;         // K

  int length() const { return static_cast<int>(entries.rows()); }
};

/// Per-joint complex Fourier coefficients for harmonics -K..K.
///
/// Row d holds the coefficients of joint d; column j holds harmonic j - K.
/// Weights fitted to real data satisfy coeffs(d, K+k) = conj(coeffs(d, K-k)).
struct ComplexWeights {
  Eigen::MatrixXcd coeffs;  // D x (2K+1)
  int harmonics = 0;        // K
  double duration = 0.0;    // seconds spanned by one basis period

  int dofs() const { return static_cast<int>(coeffs.rows()); }
  std::complex<double> at(int dof, int harmonic) const {
    return coeffs(dof, harmonic + harmonics);
  }
  std::complex<double>& at(int dof, int harmonic) {
    return coeffs(dof, harmonic + harmonics);
  }
};

namespace detail {

/// Evaluate the 2K+1 harmonics at arbitrary phases (units of one period).
inline Eigen::MatrixXcd basis_at_phases(const Eigen::VectorXd& phases, int harmonics) {
  const std::complex<double> i_unit(0.0, 1.0);
  Eigen::MatrixXcd basis(phases.size(), 2 * harmonics + 1);
  for (Eigen::Index t = 0; t < phases.size(); ++t)
    for (int k = -harmonics; k <= harmonics; ++k)
      basis(t, k + harmonics) = std::exp(i_unit * (two_pi * k * phases[t]));
  return basis;
}

inline Eigen::VectorXd uniform_phases(int samples) {
  Eigen::VectorXd phases(samples);
  for (int t = 0; t < samples; ++t)
    phases[t] = static_cast<double>(t) / samples;
  return phases;
}

}  // namespace detail

/// Build the basis for T samples and K harmonics. Requires 2K+1 <= T so the
/// least-squares fit is determined and the columns orthogonal.
inline BasisMatrix build_basis(int samples, int harmonics) {
  if (samples < 2)
    throw std::invalid_argument("build_basis: need at least 2 samples");
  if (harmonics < 0)
    throw std::invalid_argument("build_basis: harmonic count must be >= 0");
  if (2 * harmonics + 1 > samples)
    throw std::invalid_argument("build_basis: 2K+1 = " +
                                std::to_string(2 * harmonics + 1) +
                                " exceeds sample count " + std::to_string(samples));
  return {detail::basis_at_phases(detail::uniform_phases(samples), harmonics), harmonics};
}

/// Least-squares fit of complex weights to one demonstration.
///
/// Solved per joint against the shared basis; with t = 0..T-1 the basis is
/// orthogonal and the projection w = Phi^H y / T is the exact minimizer.
inline ComplexWeights fit_weights(const Demonstration& demo, int harmonics) {
  const int samples = demo.length();
  if (2 * harmonics + 1 > samples)
    throw std::invalid_argument("fit_weights: 2K+1 = " +
                                std::to_string(2 * harmonics + 1) +
                                " exceeds trajectory length " + std::to_string(samples));
  if (!demo.samples.allFinite())
    throw std::invalid_argument("fit_weights: trajectory contains non-finite values");

  BasisMatrix basis = build_basis(samples, harmonics);
  ComplexWeights weights;
  weights.harmonics = harmonics;
  weights.duration = demo.duration();
  weights.coeffs =
      (basis.entries.adjoint() * demo.samples).transpose() / static_cast<double>(samples);
  return weights;
}

/// Evaluate the weighted basis on a uniform grid of `samples` points per
/// period and return the real T x D trajectory matrix. The imaginary part is
/// discarded; its largest magnitude is reported through `max_imag` when given.
inline Eigen::MatrixXd reconstruct(const ComplexWeights& weights, int samples,
                                   double* max_imag = nullptr) {
  if (samples < 2)
    throw std::invalid_argument("reconstruct: need at least 2 output samples");
  Eigen::MatrixXcd basis =
      detail::basis_at_phases(detail::uniform_phases(samples), weights.harmonics);
  Eigen::MatrixXcd traj = basis * weights.coeffs.transpose();
  if (max_imag) *max_imag = traj.imag().cwiseAbs().maxCoeff();
  return traj.real();
}

}  // namespace wavegen

#endif  // WAVEGEN_FOURIER_HPP
