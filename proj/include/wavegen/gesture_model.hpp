#ifndef WAVEGEN_GESTURE_MODEL_HPP
#define WAVEGEN_GESTURE_MODEL_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wavegen/demonstration.hpp"
#include "wavegen/fourier.hpp"
#include "wavegen/log_polar.hpp"

namespace wavegen {

inline constexpr double default_lambda = 1e-6;
inline constexpr int model_schema_version = 1;

/// Multivariate Gaussian over the log-polar gesture coordinates.
///
/// `mean` and `covariance` live in the space described by `layout`:
/// per joint [dc, ln r(1..K), theta(1..K)]. `ref_duration` is the wall-clock
/// length of one basis period (the mean duration of the training demos),
/// `lambda` the diagonal-loading weight applied at fit time, and `phase_ref`
/// the circular means the training phases were aligned to.
struct GestureModel {
  WeightIndexMap layout;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  double ref_duration = 0.0;  // seconds
  double lambda = 0.0;
  Eigen::VectorXd phase_ref;  // D*K
};

/// A single pinned coordinate for Gaussian conditioning. `value` is given in
/// natural units: amplitude in radians (> 0) for log-amplitude targets, phase
/// in (-pi, pi], dc offset in radians.
struct ConditioningConstraint {
  Coordinate target;
  double value = 0.0;
};

namespace detail {

/// Diagonal entries at or below this fraction of the mean variance are
/// treated as exactly pinned (zero-variance) coordinates.
inline double degeneracy_threshold(const Eigen::MatrixXd& sigma) {
  const double mean_var = sigma.trace() / static_cast<double>(sigma.rows());
  return 1e-12 * (mean_var > 0.0 ? mean_var : 1.0);
}

}  // namespace detail

/// Fit the gesture Gaussian to a dataset.
///
/// Per demonstration: least-squares complex weights, log-polar decomposition
/// (moduli clamped at `floor`), then phase alignment across the set. The
/// Gaussian uses the 1/M-normalized covariance, loaded with
/// lambda * (trace/dim) on the diagonal so conditioning stays solvable even
/// when M is far below the model dimension. A dataset with zero spread gets
/// a plain lambda-scaled identity.
inline GestureModel fit_model(const Dataset& data, int harmonics,
                              double lambda = default_lambda,
                              double floor = default_amplitude_floor,
                              std::vector<std::string>* warnings = nullptr) {
  if (data.demos.empty()) throw std::invalid_argument("fit_model: empty dataset");
  if (harmonics < 0) throw std::invalid_argument("fit_model: harmonic count must be >= 0");
  if (lambda < 0.0) throw std::invalid_argument("fit_model: lambda must be >= 0");

  std::vector<LogPolarVector> points;
  points.reserve(data.demos.size());
  double duration_sum = 0.0;
  for (size_t m = 0; m < data.demos.size(); ++m) {
    const Demonstration& demo = data.demos[m];
    if (2 * harmonics + 1 > demo.length())
      throw std::invalid_argument("fit_model: demo " + std::to_string(m) + " (" +
                                  demo.name + ") has " + std::to_string(demo.length()) +
                                  " samples, need at least " +
                                  std::to_string(2 * harmonics + 1));
    points.push_back(to_logpolar(fit_weights(demo, harmonics), floor, warnings));
    duration_sum += demo.duration();
  }

  PhaseAlignment aligned = align_phases(std::move(points));

  const int dim = aligned.vectors.front().layout.dimension();
  const double count = static_cast<double>(aligned.vectors.size());

  GestureModel model;
  model.layout = aligned.vectors.front().layout;
  model.phase_ref = aligned.reference;
  model.ref_duration = duration_sum / count;
  model.lambda = lambda;

  model.mean = Eigen::VectorXd::Zero(dim);
  for (const auto& v : aligned.vectors) model.mean += v.values;
  model.mean /= count;

  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& v : aligned.vectors) {
    Eigen::VectorXd centered = v.values - model.mean;
    sigma.noalias() += centered * centered.transpose();
  }
  sigma /= count;
  sigma = 0.5 * (sigma + sigma.transpose()).eval();

  const double raw_scale = sigma.trace() / static_cast<double>(dim);
  const double load = lambda * (raw_scale > 0.0 ? raw_scale : 1.0);
  sigma.diagonal().array() += load;
  model.covariance = std::move(sigma);
  return model;
}

/// Draw one gesture vector: x = mean + L z with L the symmetric square root
/// of the covariance and z standard normal. Deterministic per seed. Exactly
/// pinned coordinates (zero rows) come back exactly at the mean.
inline LogPolarVector sample_model(const GestureModel& model, std::uint64_t seed) {
  const Eigen::Index dim = model.mean.size();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(model.covariance);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("sample_model: eigendecomposition failed");

  Eigen::VectorXd lambdas = eig.eigenvalues();
  const double scale = std::max(1.0, lambdas.cwiseAbs().maxCoeff());
  if (lambdas.minCoeff() < -1e-9 * scale)
    throw std::runtime_error("sample_model: covariance is not positive semidefinite "
                             "(eigenvalue " + std::to_string(lambdas.minCoeff()) + ")");
  lambdas = lambdas.cwiseMax(0.0).cwiseSqrt();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(dim);
  for (Eigen::Index i = 0; i < dim; ++i) z[i] = normal(rng);

  LogPolarVector x;
  x.layout = model.layout;
  x.values = model.mean +
             eig.eigenvectors() * lambdas.asDiagonal() * (eig.eigenvectors().transpose() * z);
  return x;
}

/// Condition the Gaussian on pinned coordinate values.
///
/// The free block receives the standard update
///   mu' = mu_a + S_ab S_bb^-1 (v - mu_b),  S' = S_aa - S_ab S_bb^-1 S_ba,
/// and the result is embedded back at full dimension: pinned coordinates keep
/// mean = value with zero covariance rows, so sampling and synthesis need no
/// special casing. Amplitude values are converted to ln(value) and phase
/// values unwrapped to within pi of the stored phase reference first.
///
/// Re-conditioning an already pinned coordinate on the same value is a no-op;
/// pinning it to a different value is contradictory and throws, as does a
/// numerically singular S_bb (a sign the model needs more diagonal loading).
inline GestureModel condition(const GestureModel& model,
                              const std::vector<ConditioningConstraint>& constraints) {
  const int dim = model.layout.dimension();
  if (static_cast<int>(constraints.size()) >= dim)
    throw std::invalid_argument("condition: at least one coordinate must stay free");

  // Convert targets to model-space indices and values.
  std::vector<int> pinned_index;
  std::vector<double> pinned_value;
  std::set<int> seen;
  for (const auto& c : constraints) {
    const int idx = model.layout.index_of(c.target);
    if (!seen.insert(idx).second)
      throw std::invalid_argument("condition: duplicate constraint target at index " +
                                  std::to_string(idx));
    double value = c.value;
    switch (c.target.component) {
      case Component::LogAmplitude:
        if (!(value > 0.0))
          throw std::invalid_argument("condition: amplitude value must be > 0, got " +
                                      std::to_string(value));
        value = std::log(value);
        break;
      case Component::Phase: {
        if (!(value > -std::numbers::pi && value <= std::numbers::pi))
          throw std::invalid_argument("condition: phase value must lie in (-pi, pi]");
        const double ref =
            model.phase_ref[model.layout.phase_ref_index(c.target.dof, c.target.harmonic)];
        value = unwrap_near(value, ref);
        break;
      }
      case Component::Dc:
        break;
    }
    pinned_index.push_back(idx);
    pinned_value.push_back(value);
  }

  const double deg_tol = detail::degeneracy_threshold(model.covariance);

  // Split constraints into live coordinates (positive variance, conditioned
  // through the Gaussian) and already-pinned ones (zero variance, only value
  // consistency to check).
  std::vector<int> active;
  std::vector<double> active_value;
  for (size_t i = 0; i < pinned_index.size(); ++i) {
    const int idx = pinned_index[i];
    if (model.covariance(idx, idx) > deg_tol) {
      active.push_back(idx);
      active_value.push_back(pinned_value[i]);
    } else {
      const double mu = model.mean[idx];
      if (std::abs(pinned_value[i] - mu) > 1e-9 * std::max(1.0, std::abs(mu)))
        throw std::invalid_argument(
            "condition: coordinate " + std::to_string(idx) +
            " has zero variance at mean " + std::to_string(mu) +
            "; conditioning it on " + std::to_string(pinned_value[i]) +
            " is contradictory");
    }
  }

  GestureModel out = model;
  if (!active.empty()) {
    std::vector<int> free_index;
    free_index.reserve(dim - pinned_index.size());
    for (int i = 0; i < dim; ++i)
      if (!seen.count(i)) free_index.push_back(i);

    const Eigen::Index na = static_cast<Eigen::Index>(free_index.size());
    const Eigen::Index nb = static_cast<Eigen::Index>(active.size());

    Eigen::MatrixXd sigma_bb(nb, nb);
    Eigen::MatrixXd sigma_ab(na, nb);
    Eigen::MatrixXd sigma_aa(na, na);
    Eigen::VectorXd residual(nb);
    for (Eigen::Index j = 0; j < nb; ++j) {
      residual[j] = active_value[j] - model.mean[active[j]];
      for (Eigen::Index i = 0; i < nb; ++i)
        sigma_bb(i, j) = model.covariance(active[i], active[j]);
      for (Eigen::Index i = 0; i < na; ++i)
        sigma_ab(i, j) = model.covariance(free_index[i], active[j]);
    }
    for (Eigen::Index i = 0; i < na; ++i)
      for (Eigen::Index j = 0; j < na; ++j)
        sigma_aa(i, j) = model.covariance(free_index[i], free_index[j]);

    Eigen::LLT<Eigen::MatrixXd> llt(sigma_bb);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error(
          "condition: constrained covariance block is numerically singular; "
          "refit with a larger lambda");

    Eigen::VectorXd mu_update = sigma_ab * llt.solve(residual);
    Eigen::MatrixXd sigma_cond = sigma_aa - sigma_ab * llt.solve(sigma_ab.transpose());
    sigma_cond = 0.5 * (sigma_cond + sigma_cond.transpose()).eval();

    // Reload the diagonal of coordinates that still carry variance; leave
    // previously pinned ones exactly at zero.
    if (model.lambda > 0.0) {
      double live_trace = 0.0;
      int live_count = 0;
      for (Eigen::Index i = 0; i < na; ++i) {
        if (model.covariance(free_index[i], free_index[i]) > deg_tol) {
          live_trace += sigma_cond(i, i);
          ++live_count;
        }
      }
      if (live_count > 0 && live_trace > 0.0) {
        const double load = model.lambda * live_trace / live_count;
        for (Eigen::Index i = 0; i < na; ++i)
          if (model.covariance(free_index[i], free_index[i]) > deg_tol)
            sigma_cond(i, i) += load;
      }
    }

    for (Eigen::Index i = 0; i < na; ++i) {
      out.mean[free_index[i]] = model.mean[free_index[i]] + mu_update[i];
      for (Eigen::Index j = 0; j < na; ++j)
        out.covariance(free_index[i], free_index[j]) = sigma_cond(i, j);
    }
  }

  for (size_t i = 0; i < pinned_index.size(); ++i) {
    const int idx = pinned_index[i];
    out.mean[idx] = pinned_value[i];
    out.covariance.row(idx).setZero();
    out.covariance.col(idx).setZero();
  }
  return out;
}

inline void save_model(const GestureModel& model, const std::filesystem::path& path) {
  const int dim = model.layout.dimension();
  if (model.mean.size() != dim || model.covariance.rows() != dim ||
      model.covariance.cols() != dim ||
      model.phase_ref.size() != model.layout.dofs * model.layout.harmonics)
    throw std::invalid_argument("save_model: inconsistent model dimensions");

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());

  auto write_array = [&out](const char* key, const double* data, Eigen::Index n) {
    out << "  \"" << key << "\": [";
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i) out << ", ";
      out << detail::format_double(data[i]);
    }
    out << "]";
  };

  // Row-major sigma, full precision, so a load reproduces the model bit-exactly.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> sigma_rm =
      model.covariance;

  out << "{\n";
  out << "  \"schema_version\": " << model_schema_version << ",\n";
  out << "  \"D\": " << model.layout.dofs << ",\n";
  out << "  \"K\": " << model.layout.harmonics << ",\n";
  out << "  \"ref_duration_s\": " << detail::format_double(model.ref_duration) << ",\n";
  out << "  \"lambda\": " << detail::format_double(model.lambda) << ",\n";
  write_array("mu", model.mean.data(), model.mean.size());
  out << ",\n";
  write_array("sigma", sigma_rm.data(), sigma_rm.size());
  out << ",\n";
  write_array("phase_ref", model.phase_ref.data(), model.phase_ref.size());
  out << ",\n";
  out << "  \"index_layout\": \"dc,lnr[1..K],theta[1..K] per dof\"\n";
  out << "}\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline GestureModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path.string());

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": invalid JSON: " + e.what());
  }

  try {
    const int version = doc.at("schema_version").get<int>();
    if (version != model_schema_version)
      throw std::runtime_error(path.string() + ": unsupported schema_version: expected " +
                               std::to_string(model_schema_version) + ", found " +
                               std::to_string(version));

    GestureModel model;
    model.layout.dofs = doc.at("D").get<int>();
    model.layout.harmonics = doc.at("K").get<int>();
    if (model.layout.dofs < 1 || model.layout.harmonics < 0)
      throw std::runtime_error(path.string() + ": invalid D or K");
    model.ref_duration = doc.at("ref_duration_s").get<double>();
    model.lambda = doc.at("lambda").get<double>();
    if (doc.at("index_layout").get<std::string>() != "dc,lnr[1..K],theta[1..K] per dof")
      throw std::runtime_error(path.string() + ": unknown index_layout");

    const int dim = model.layout.dimension();
    const auto& mu = doc.at("mu");
    const auto& sigma = doc.at("sigma");
    const auto& phase_ref = doc.at("phase_ref");
    if (static_cast<int>(mu.size()) != dim)
      throw std::runtime_error(path.string() + ": mu has " + std::to_string(mu.size()) +
                               " entries, expected " + std::to_string(dim));
    if (static_cast<int>(sigma.size()) != dim * dim)
      throw std::runtime_error(path.string() + ": sigma has " +
                               std::to_string(sigma.size()) + " entries, expected " +
                               std::to_string(dim * dim));
    const int phase_dim = model.layout.dofs * model.layout.harmonics;
    if (static_cast<int>(phase_ref.size()) != phase_dim)
      throw std::runtime_error(path.string() + ": phase_ref has " +
                               std::to_string(phase_ref.size()) + " entries, expected " +
                               std::to_string(phase_dim));

    model.mean.resize(dim);
    for (int i = 0; i < dim; ++i) model.mean[i] = mu[i].get<double>();
    model.covariance.resize(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c)
        model.covariance(r, c) = sigma[r * dim + c].get<double>();
    model.phase_ref.resize(phase_dim);
    for (int i = 0; i < phase_dim; ++i) model.phase_ref[i] = phase_ref[i].get<double>();

    const double asym =
        (model.covariance - model.covariance.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12)
      throw std::runtime_error(path.string() + ": sigma is not symmetric (max asymmetry " +
                               std::to_string(asym) + ")");
    if (!model.mean.allFinite() || !model.covariance.allFinite() ||
        !model.phase_ref.allFinite() || !std::isfinite(model.ref_duration))
      throw std::runtime_error(path.string() + ": non-finite model entries");
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": bad model file: " + e.what());
  }
}

}  // namespace wavegen

#endif  // WAVEGEN_GESTURE_MODEL_HPP
