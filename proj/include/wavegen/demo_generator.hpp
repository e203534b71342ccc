#ifndef WAVEGEN_DEMO_GENERATOR_HPP
#define WAVEGEN_DEMO_GENERATOR_HPP

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wavegen/circular.hpp"
#include "wavegen/demonstration.hpp"

namespace wavegen {

/// Log-amplitude correlation between two joints' dominant oscillation.
struct DofCoupling {
  int dof_a = 0;
  int dof_b = 0;
  double rho = 0.0;
};

/// Protocol for synthesizing a waving dataset: each demo is one dominant
/// cosine per joint (shared frequency, per-joint offset/amplitude/phase) plus
/// Gaussian sample noise. Coupled joint pairs draw correlated log-amplitudes.
struct GeneratorSpec {
  int dofs = 5;
  int demos = 15;
  std::array<double, 2> duration_range_s{6.0, 10.0};
  double rate_hz = 100.0;
  std::array<double, 2> offset_range_rad{-0.5, 0.5};
  std::array<double, 2> amplitude_range_rad{0.1, 0.8};
  std::array<double, 2> frequency_range_hz{1.5, 3.0};
  double max_cycles = 20.0;
  double phase_jitter_std_rad = 0.3;
  double noise_std_rad = 0.005;
  std::vector<DofCoupling> coupling;

  /// Marginal of ln(amplitude) used for coupled joints: centered on the
  /// log-midpoint of the amplitude range, with +-2 sigma spanning it.
  double coupled_log_amplitude_mean() const {
    return 0.5 * (std::log(amplitude_range_rad[0]) + std::log(amplitude_range_rad[1]));
  }
  double coupled_log_amplitude_sigma() const {
    return 0.25 * (std::log(amplitude_range_rad[1]) - std::log(amplitude_range_rad[0]));
  }
};

/// Per-demo draw record, useful for tests and debugging.
struct DemoDraw {
  double duration = 0.0;
  double frequency = 0.0;
  Eigen::VectorXd offsets;
  Eigen::VectorXd amplitudes;
  Eigen::VectorXd phases;
};

inline void validate(const GeneratorSpec& spec) {
  auto range_ok = [](const std::array<double, 2>& r) {
    return std::isfinite(r[0]) && std::isfinite(r[1]) && r[0] <= r[1];
  };
  if (spec.dofs < 1) throw std::invalid_argument("generator: dofs must be >= 1");
  if (spec.demos < 1) throw std::invalid_argument("generator: demos must be >= 1");
  if (!(spec.rate_hz > 0.0)) throw std::invalid_argument("generator: rate must be > 0");
  if (!range_ok(spec.duration_range_s) || !(spec.duration_range_s[0] > 0.0))
    throw std::invalid_argument("generator: bad duration range");
  if (!range_ok(spec.offset_range_rad))
    throw std::invalid_argument("generator: bad offset range");
  if (!range_ok(spec.amplitude_range_rad) || spec.amplitude_range_rad[0] < 0.0)
    throw std::invalid_argument("generator: bad amplitude range");
  if (!range_ok(spec.frequency_range_hz) || !(spec.frequency_range_hz[0] > 0.0))
    throw std::invalid_argument("generator: bad frequency range");
  if (!(spec.frequency_range_hz[1] < 0.5 * spec.rate_hz))
    throw std::invalid_argument("generator: frequency range must stay below rate/2");
  if (!(spec.max_cycles > 0.0))
    throw std::invalid_argument("generator: max cycles must be > 0");
  if (spec.phase_jitter_std_rad < 0.0 || spec.noise_std_rad < 0.0)
    throw std::invalid_argument("generator: jitter and noise std must be >= 0");
  for (const auto& c : spec.coupling) {
    if (c.dof_a < 0 || c.dof_a >= spec.dofs || c.dof_b < 0 || c.dof_b >= spec.dofs ||
        c.dof_a == c.dof_b)
      throw std::invalid_argument("generator: bad coupling joint pair");
    if (!(std::abs(c.rho) <= 1.0))
      throw std::invalid_argument("generator: |rho| must be <= 1");
    if (!(spec.amplitude_range_rad[0] > 0.0))
      throw std::invalid_argument(
          "generator: coupling requires a strictly positive amplitude range");
  }
}

/// Generate a synthetic dataset. Deterministic per (spec, seed); draw records
/// are appended to `draws` when given.
inline Dataset generate_dataset(const GeneratorSpec& spec, std::uint64_t seed,
                                std::vector<DemoDraw>* draws = nullptr) {
  validate(spec);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  auto uniform_in = [&](const std::array<double, 2>& r) {
    return r[0] + (r[1] - r[0]) * unit(rng);
  };

  const double dt = 1.0 / spec.rate_hz;
  Dataset data;
  data.dofs = spec.dofs;

  for (int m = 0; m < spec.demos; ++m) {
    DemoDraw draw;
    draw.duration = uniform_in(spec.duration_range_s);
    draw.frequency =
        std::min(uniform_in(spec.frequency_range_hz), spec.max_cycles / draw.duration);

    draw.offsets.resize(spec.dofs);
    draw.amplitudes.resize(spec.dofs);
    draw.phases.resize(spec.dofs);
    for (int d = 0; d < spec.dofs; ++d) draw.offsets[d] = uniform_in(spec.offset_range_rad);
    for (int d = 0; d < spec.dofs; ++d)
      draw.amplitudes[d] = uniform_in(spec.amplitude_range_rad);
    for (int d = 0; d < spec.dofs; ++d)
      draw.phases[d] =
          spec.phase_jitter_std_rad > 0.0 ? spec.phase_jitter_std_rad * normal(rng) : 0.0;

    // Coupled pairs override the uniform draw with correlated log-normals.
    const double ln_mu = spec.coupling.empty() ? 0.0 : spec.coupled_log_amplitude_mean();
    const double ln_sigma =
        spec.coupling.empty() ? 0.0 : spec.coupled_log_amplitude_sigma();
    for (const auto& c : spec.coupling) {
      const double z_a = normal(rng);
      const double z_b = c.rho * z_a + std::sqrt(1.0 - c.rho * c.rho) * normal(rng);
      draw.amplitudes[c.dof_a] = std::exp(ln_mu + ln_sigma * z_a);
      draw.amplitudes[c.dof_b] = std::exp(ln_mu + ln_sigma * z_b);
    }

    const int samples = std::max<int>(2, static_cast<int>(std::llround(
                                             draw.duration * spec.rate_hz)));
    Demonstration demo;
    demo.dt = dt;
    char name[32];
    std::snprintf(name, sizeof(name), "demo_%03d", m);
    demo.name = name;
    demo.samples.resize(samples, spec.dofs);
    for (int t = 0; t < samples; ++t) {
      for (int d = 0; d < spec.dofs; ++d) {
        double value = draw.offsets[d] +
                       draw.amplitudes[d] *
                           std::cos(two_pi * draw.frequency * t * dt + draw.phases[d]);
        if (spec.noise_std_rad > 0.0) value += spec.noise_std_rad * normal(rng);
        demo.samples(t, d) = value;
      }
    }
    data.demos.push_back(std::move(demo));
    if (draws) draws->push_back(std::move(draw));
  }
  return data;
}

inline GeneratorSpec load_generator_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open generator spec: " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": invalid JSON: " + e.what());
  }

  try {
    GeneratorSpec spec;
    spec.dofs = doc.at("dofs").get<int>();
    spec.demos = doc.at("demos").get<int>();
    spec.duration_range_s = doc.at("duration_range_s").get<std::array<double, 2>>();
    spec.rate_hz = doc.at("rate_hz").get<double>();
    spec.offset_range_rad = doc.at("offset_range_rad").get<std::array<double, 2>>();
    spec.amplitude_range_rad = doc.at("amplitude_range_rad").get<std::array<double, 2>>();
    spec.frequency_range_hz = doc.at("frequency_range_hz").get<std::array<double, 2>>();
    spec.max_cycles = doc.at("max_cycles").get<double>();
    spec.phase_jitter_std_rad = doc.at("phase_jitter_std_rad").get<double>();
    spec.noise_std_rad = doc.at("noise_std_rad").get<double>();
    if (doc.contains("coupling")) {
      for (const auto& entry : doc.at("coupling")) {
        DofCoupling c;
        c.dof_a = entry.at("dof_a").get<int>();
        c.dof_b = entry.at("dof_b").get<int>();
        c.rho = entry.at("rho").get<double>();
        spec.coupling.push_back(c);
      }
    }
    validate(spec);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": bad generator spec: " + e.what());
  }
}

}  // namespace wavegen

#endif  // WAVEGEN_DEMO_GENERATOR_HPP
