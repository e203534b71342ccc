#ifndef WAVEGEN_LOG_POLAR_HPP
#define WAVEGEN_LOG_POLAR_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavegen/circular.hpp"
#include "wavegen/fourier.hpp"

namespace wavegen {

inline constexpr double default_amplitude_floor = 1e-8;

/// Which scalar a model coordinate carries.
enum class Component { Dc, LogAmplitude, Phase };

/// One coordinate of the model space: joint index, harmonic, and component.
struct Coordinate {
  int dof = 0;
  int harmonic = 0;  // 0 for Dc, 1..K otherwise
  Component component = Component::Dc;

  bool operator==(const Coordinate&) const = default;
};

/// Bijection between flat model indices and coordinates.
///
/// Layout per joint: [dc, ln r(k=1..K), theta(k=1..K)], joints stacked in
/// order, giving dimension D*(2K+1). Only non-negative harmonics appear;
/// k < 0 is recovered by conjugation.
struct WeightIndexMap {
  int dofs = 0;       // D
  int harmonics = 0;  // K

  int block() const { return 2 * harmonics + 1; }
  int dimension() const { return dofs * block(); }

  int dc_index(int dof) const { return check_dof(dof) * block(); }
  int log_amplitude_index(int dof, int harmonic) const {
    return check_dof(dof) * block() + check_harmonic(harmonic);
  }
  int phase_index(int dof, int harmonic) const {
    return check_dof(dof) * block() + harmonics + check_harmonic(harmonic);
  }

  int index_of(const Coordinate& c) const {
    switch (c.component) {
      case Component::Dc:
        if (c.harmonic != 0)
          throw std::out_of_range("index_of: dc component requires harmonic 0");
        return dc_index(c.dof);
      case Component::LogAmplitude:
        return log_amplitude_index(c.dof, c.harmonic);
      case Component::Phase:
        return phase_index(c.dof, c.harmonic);
    }
    throw std::logic_error("index_of: bad component");
  }

  Coordinate coordinate_of(int index) const {
    if (index < 0 || index >= dimension())
      throw std::out_of_range("coordinate_of: index " + std::to_string(index) +
                              " outside dimension " + std::to_string(dimension()));
    const int d = index / block();
    const int offset = index % block();
    if (offset == 0) return {d, 0, Component::Dc};
    if (offset <= harmonics) return {d, offset, Component::LogAmplitude};
    return {d, offset - harmonics, Component::Phase};
  }

  /// Index into a phase-reference vector of length D*K (joints stacked,
  /// harmonics 1..K within each joint).
  int phase_ref_index(int dof, int harmonic) const {
    return check_dof(dof) * harmonics + check_harmonic(harmonic) - 1;
  }

 private:
  int check_dof(int dof) const {
    if (dof < 0 || dof >= dofs)
      throw std::out_of_range("joint index " + std::to_string(dof) +
                              " outside 0.." + std::to_string(dofs - 1));
    return dof;
  }
  int check_harmonic(int harmonic) const {
    if (harmonic < 1 || harmonic > harmonics)
      throw std::out_of_range("harmonic " + std::to_string(harmonic) +
                              " outside 1.." + std::to_string(harmonics));
    return harmonic;
  }
};

/// A point of the model space: the flattened [dc, ln r, theta] coordinates of
/// one gesture.
struct LogPolarVector {
  WeightIndexMap layout;
  Eigen::VectorXd values;
};

/// Decompose fitted weights into log-polar coordinates.
///
/// For k = 1..K the entries are ln|w_k| and Arg(w_k) in (-pi, pi]; the k = 0
/// weight is kept raw since joint-angle offsets carry either sign. Moduli
/// below `floor` are clamped to it (the logarithm must stay finite); each
/// clamp is reported through `warnings` when given.
inline LogPolarVector to_logpolar(const ComplexWeights& weights,
                                  double floor = default_amplitude_floor,
                                  std::vector<std::string>* warnings = nullptr,
                                  double symmetry_tol = 1e-9) {
  const int dofs = weights.dofs();
  const int harmonics = weights.harmonics;

  for (int d = 0; d < dofs; ++d) {
    if (std::abs(weights.at(d, 0).imag()) > symmetry_tol)
      throw std::invalid_argument("to_logpolar: dc weight of joint " +
                                  std::to_string(d) + " is not real");
    for (int k = 1; k <= harmonics; ++k) {
      const double dev = std::abs(weights.at(d, k) - std::conj(weights.at(d, -k)));
      if (dev > symmetry_tol)
        throw std::invalid_argument(
            "to_logpolar: conjugate symmetry broken at joint " + std::to_string(d) +
            ", harmonic " + std::to_string(k) + " (|w_k - conj(w_-k)| = " +
            std::to_string(dev) + ")");
    }
  }

  LogPolarVector x;
  x.layout = {dofs, harmonics};
  x.values.resize(x.layout.dimension());
  for (int d = 0; d < dofs; ++d) {
    x.values[x.layout.dc_index(d)] = weights.at(d, 0).real();
    for (int k = 1; k <= harmonics; ++k) {
      const std::complex<double> w = weights.at(d, k);
      double modulus = std::abs(w);
      if (modulus < floor) {
        if (warnings)
          warnings->push_back("joint " + std::to_string(d) + ", harmonic " +
                              std::to_string(k) + ": modulus " +
                              std::to_string(modulus) + " below floor, clamped");
        modulus = floor;
      }
      x.values[x.layout.log_amplitude_index(d, k)] = std::log(modulus);
      x.values[x.layout.phase_index(d, k)] = std::arg(w);
    }
  }
  return x;
}

/// Rebuild complex weights from log-polar coordinates: w_k = exp(ln r + i*theta)
/// for k = 1..K, w_0 = dc, and w_{-k} = conj(w_k) filled exactly.
inline ComplexWeights from_logpolar(const LogPolarVector& x, double duration) {
  if (!x.values.allFinite())
    throw std::invalid_argument("from_logpolar: non-finite coordinates");
  if (x.values.size() != x.layout.dimension())
    throw std::invalid_argument("from_logpolar: vector length " +
                                std::to_string(x.values.size()) +
                                " does not match layout dimension " +
                                std::to_string(x.layout.dimension()));

  ComplexWeights weights;
  weights.harmonics = x.layout.harmonics;
  weights.duration = duration;
  weights.coeffs.resize(x.layout.dofs, 2 * x.layout.harmonics + 1);
  for (int d = 0; d < x.layout.dofs; ++d) {
    weights.at(d, 0) = x.values[x.layout.dc_index(d)];
    for (int k = 1; k <= x.layout.harmonics; ++k) {
      const double modulus = std::exp(x.values[x.layout.log_amplitude_index(d, k)]);
      const double phase = x.values[x.layout.phase_index(d, k)];
      const std::complex<double> w = std::polar(modulus, phase);
      weights.at(d, k) = w;
      weights.at(d, -k) = std::conj(w);
    }
  }
  return weights;
}

/// Result of phase alignment: the shifted vectors plus the per-coordinate
/// circular means they were aligned to (length D*K).
struct PhaseAlignment {
  std::vector<LogPolarVector> vectors;
  Eigen::VectorXd reference;
};

/// Shift every phase coordinate by a multiple of 2*pi so it lies within pi of
/// that coordinate's circular mean across the set. Gaussian statistics over
/// raw principal values would smear mass across the +-pi cut; amplitudes and
/// dc entries pass through untouched.
inline PhaseAlignment align_phases(std::vector<LogPolarVector> vectors) {
  if (vectors.empty())
    throw std::invalid_argument("align_phases: need at least one vector");
  const WeightIndexMap layout = vectors.front().layout;
  for (const auto& v : vectors)
    if (!(v.layout.dofs == layout.dofs && v.layout.harmonics == layout.harmonics))
      throw std::invalid_argument("align_phases: mixed layouts");

  PhaseAlignment out;
  out.reference.resize(layout.dofs * layout.harmonics);
  std::vector<double> angles(vectors.size());
  for (int d = 0; d < layout.dofs; ++d) {
    for (int k = 1; k <= layout.harmonics; ++k) {
      const int idx = layout.phase_index(d, k);
      for (size_t m = 0; m < vectors.size(); ++m) angles[m] = vectors[m].values[idx];
      const double ref = circular_mean(angles);
      out.reference[layout.phase_ref_index(d, k)] = ref;
      for (auto& v : vectors) v.values[idx] = unwrap_near(v.values[idx], ref);
    }
  }
  out.vectors = std::move(vectors);
  return out;
}

}  // namespace wavegen

#endif  // WAVEGEN_LOG_POLAR_HPP
