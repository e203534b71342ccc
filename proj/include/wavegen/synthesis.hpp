#ifndef WAVEGEN_SYNTHESIS_HPP
#define WAVEGEN_SYNTHESIS_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "wavegen/demonstration.hpp"
#include "wavegen/fourier.hpp"
#include "wavegen/gesture_model.hpp"
#include "wavegen/log_polar.hpp"

namespace wavegen {

inline constexpr double default_rate = 100.0;

/// How to sample a synthesized trajectory. `period_scale` stretches the basis
/// period (gamma > 1 slows every harmonic down by gamma); durations other
/// than one period tile or truncate the waveform.
struct SynthesisRequest {
  double duration = 0.0;       // seconds, > 0
  double rate = default_rate;  // samples per second
  double period_scale = 1.0;   // gamma

  int sample_count() const {
    return static_cast<int>(std::llround(duration * rate));
  }
};

inline void validate(const SynthesisRequest& req) {
  if (!(req.duration > 0.0) || !(req.rate > 0.0))
    throw std::invalid_argument("synthesis: duration and rate must be > 0");
  if (!(req.period_scale > 0.0))
    throw std::invalid_argument("synthesis: period scale must be > 0");
  if (req.sample_count() < 2)
    throw std::invalid_argument("synthesis: duration * rate must give at least 2 samples");
}

/// Stretch or compress the request's effective period by gamma.
inline SynthesisRequest time_scale(SynthesisRequest req, double gamma) {
  if (!(gamma > 0.0))
    throw std::invalid_argument("time_scale: gamma must be > 0, got " +
                                std::to_string(gamma));
  req.period_scale *= gamma;
  return req;
}

/// Render a gesture vector as a joint trajectory.
///
/// One basis period spans ref_duration * period_scale seconds; the output is
/// sampled at req.rate for req.duration seconds. The reconstruction sums the
/// full conjugate pair per harmonic, so the result is real up to roundoff;
/// the largest pre-truncation imaginary magnitude is reported via `max_imag`.
inline Demonstration synthesize(const LogPolarVector& x, double ref_duration,
                                const SynthesisRequest& req,
                                double* max_imag = nullptr) {
  validate(req);
  if (!(ref_duration > 0.0))
    throw std::invalid_argument("synthesize: reference duration must be > 0");
  if (x.values.size() != x.layout.dimension())
    throw std::invalid_argument("synthesize: vector length does not match layout");

  const ComplexWeights weights = from_logpolar(x, ref_duration);
  const int samples = req.sample_count();
  const double period = ref_duration * req.period_scale;
  const double dt = 1.0 / req.rate;

  Eigen::VectorXd phases(samples);
  for (int t = 0; t < samples; ++t) phases[t] = (t * dt) / period;

  Eigen::MatrixXcd traj =
      detail::basis_at_phases(phases, weights.harmonics) * weights.coeffs.transpose();
  if (max_imag) *max_imag = traj.imag().cwiseAbs().maxCoeff();

  Demonstration demo;
  demo.samples = traj.real();
  demo.dt = dt;
  return demo;
}

/// Draw one gesture from the model and render it. Deterministic per seed.
inline Demonstration sample_gesture(const GestureModel& model, std::uint64_t seed,
                                    const SynthesisRequest& req,
                                    double* max_imag = nullptr) {
  return synthesize(sample_model(model, seed), model.ref_duration, req, max_imag);
}

/// Multiply the oscillation amplitude of the selected joints (all joints when
/// `dofs` is empty) by `factor`: adds ln(factor) to every log-amplitude
/// coordinate. Offsets and phases are untouched.
inline LogPolarVector scale_amplitude(LogPolarVector x, double factor,
                                      const std::vector<int>& dofs = {}) {
  if (!(factor > 0.0))
    throw std::invalid_argument("scale_amplitude: factor must be > 0, got " +
                                std::to_string(factor));
  const double shift = std::log(factor);
  std::vector<int> selected = dofs;
  if (selected.empty())
    for (int d = 0; d < x.layout.dofs; ++d) selected.push_back(d);
  for (int d : selected)
    for (int k = 1; k <= x.layout.harmonics; ++k)
      x.values[x.layout.log_amplitude_index(d, k)] += shift;
  return x;
}

/// Add `delta` to the phase of one harmonic of one joint. The value is not
/// re-wrapped; the basis is 2*pi-periodic so synthesis is unaffected by whole
/// turns.
inline LogPolarVector shift_phase(LogPolarVector x, double delta, int harmonic, int dof) {
  x.values[x.layout.phase_index(dof, harmonic)] += delta;
  return x;
}

/// Geometric-mean amplitude per joint and harmonic: exp of the model mean at
/// each log-amplitude coordinate. With `include_dc` the raw k = 0 mean is
/// prepended, making the columns k = 0..K instead of k = 1..K.
inline Eigen::MatrixXd spectrum_amplitudes(const GestureModel& model, bool include_dc) {
  const int dofs = model.layout.dofs;
  const int harmonics = model.layout.harmonics;
  Eigen::MatrixXd table(dofs, harmonics + (include_dc ? 1 : 0));
  for (int d = 0; d < dofs; ++d) {
    int col = 0;
    if (include_dc) table(d, col++) = model.mean[model.layout.dc_index(d)];
    for (int k = 1; k <= harmonics; ++k)
      table(d, col++) = std::exp(model.mean[model.layout.log_amplitude_index(d, k)]);
  }
  return table;
}

/// Spectrum table as `dof,k,amplitude` CSV text.
inline std::string spectrum_csv(const GestureModel& model, bool include_dc) {
  const Eigen::MatrixXd table = spectrum_amplitudes(model, include_dc);
  const int first_k = include_dc ? 0 : 1;
  std::ostringstream out;
  out << "dof,k,amplitude\n";
  for (int d = 0; d < table.rows(); ++d)
    for (int c = 0; c < table.cols(); ++c)
      out << d << "," << (first_k + c) << "," << detail::format_double(table(d, c))
          << "\n";
  return out.str();
}

}  // namespace wavegen

#endif  // WAVEGEN_SYNTHESIS_HPP
