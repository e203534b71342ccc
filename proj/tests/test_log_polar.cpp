#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "wavegen/log_polar.hpp"

#include "oracles.hpp"

using Catch::Matchers::ContainsSubstring;
using namespace wavegen;

TEST_CASE("index map is a bijection over the model space", "[logpolar]") {
  WeightIndexMap layout{3, 4};
  CHECK(layout.block() == 9);
  CHECK(layout.dimension() == 27);

  std::vector<int> dc_seen(3, 0);
  std::vector<int> lnr_seen(3, 0);
  std::vector<int> phase_seen(3, 0);
  for (int i = 0; i < layout.dimension(); ++i) {
    const Coordinate c = layout.coordinate_of(i);
    CHECK(layout.index_of(c) == i);
    switch (c.component) {
      case Component::Dc: ++dc_seen[c.dof]; break;
      case Component::LogAmplitude: ++lnr_seen[c.dof]; break;
      case Component::Phase: ++phase_seen[c.dof]; break;
    }
  }
  for (int d = 0; d < 3; ++d) {
    CHECK(dc_seen[d] == 1);
    CHECK(lnr_seen[d] == 4);
    CHECK(phase_seen[d] == 4);
  }
}

TEST_CASE("index map places each component where the layout says", "[logpolar]") {
  WeightIndexMap layout{2, 3};
  // per joint: [dc, lnr 1..3, theta 1..3]
  CHECK(layout.dc_index(0) == 0);
  CHECK(layout.log_amplitude_index(0, 1) == 1);
  CHECK(layout.log_amplitude_index(0, 3) == 3);
  CHECK(layout.phase_index(0, 1) == 4);
  CHECK(layout.phase_index(0, 3) == 6);
  CHECK(layout.dc_index(1) == 7);
  CHECK(layout.phase_ref_index(0, 1) == 0);
  CHECK(layout.phase_ref_index(1, 3) == 5);
}

TEST_CASE("index map rejects out-of-range coordinates", "[logpolar]") {
  WeightIndexMap layout{2, 3};
  CHECK_THROWS_AS(layout.dc_index(2), std::out_of_range);
  CHECK_THROWS_AS(layout.log_amplitude_index(0, 0), std::out_of_range);
  CHECK_THROWS_AS(layout.log_amplitude_index(0, 4), std::out_of_range);
  CHECK_THROWS_AS(layout.phase_index(-1, 1), std::out_of_range);
  CHECK_THROWS_AS(layout.coordinate_of(14), std::out_of_range);
  CHECK_THROWS_AS(layout.index_of({0, 1, Component::Dc}), std::out_of_range);
}

TEST_CASE("unit-modulus weight decomposes to zero log-amplitude", "[logpolar]") {
  ComplexWeights weights;
  weights.harmonics = 5;
  weights.duration = 1.0;
  weights.coeffs = Eigen::MatrixXcd::Zero(1, 11);
  const std::complex<double> w = std::polar(1.0, 0.7);
  weights.at(0, 5) = w;
  weights.at(0, -5) = std::conj(w);

  std::vector<std::string> warnings;
  LogPolarVector x = to_logpolar(weights, 1e-8, &warnings);
  CHECK(x.values[x.layout.log_amplitude_index(0, 5)] == Catch::Approx(0.0).margin(1e-15));
  CHECK(x.values[x.layout.phase_index(0, 5)] == Catch::Approx(0.7).margin(1e-15));
  // the zero harmonics were clamped to the floor
  CHECK(warnings.size() == 4);
  CHECK(x.values[x.layout.log_amplitude_index(0, 1)] ==
        Catch::Approx(std::log(1e-8)).margin(1e-12));
  CHECK(x.values[x.layout.phase_index(0, 1)] == 0.0);
}

TEST_CASE("negative offsets stay raw in the dc slot", "[logpolar]") {
  ComplexWeights weights;
  weights.harmonics = 1;
  weights.duration = 1.0;
  weights.coeffs = Eigen::MatrixXcd::Zero(1, 3);
  weights.at(0, 0) = -2.0;
  weights.at(0, 1) = std::polar(0.5, 0.2);
  weights.at(0, -1) = std::conj(weights.at(0, 1));

  LogPolarVector x = to_logpolar(weights);
  CHECK(x.values[x.layout.dc_index(0)] == -2.0);
}

TEST_CASE("broken conjugate symmetry is rejected", "[logpolar]") {
  ComplexWeights weights;
  weights.harmonics = 2;
  weights.duration = 1.0;
  weights.coeffs = Eigen::MatrixXcd::Zero(1, 5);
  weights.at(0, 2) = {0.3, 0.4};
  weights.at(0, -2) = {0.3, 0.4};  // should be the conjugate
  CHECK_THROWS_WITH(to_logpolar(weights), ContainsSubstring("conjugate symmetry"));

  ComplexWeights complex_dc;
  complex_dc.harmonics = 0;
  complex_dc.duration = 1.0;
  complex_dc.coeffs = Eigen::MatrixXcd::Constant(1, 1, {1.0, 0.5});
  CHECK_THROWS_WITH(to_logpolar(complex_dc), ContainsSubstring("not real"));
}

TEST_CASE("zero coordinates map to unit weights", "[logpolar]") {
  LogPolarVector x;
  x.layout = {2, 3};
  x.values = Eigen::VectorXd::Zero(x.layout.dimension());
  ComplexWeights weights = from_logpolar(x, 2.0);
  CHECK(weights.duration == 2.0);
  for (int d = 0; d < 2; ++d) {
    CHECK(weights.at(d, 0) == std::complex<double>(0.0, 0.0));
    for (int k = 1; k <= 3; ++k) {
      CHECK(std::abs(weights.at(d, k) - 1.0) <= 1e-15);
      CHECK(weights.at(d, -k) == std::conj(weights.at(d, k)));
    }
  }
}

TEST_CASE("log-polar entries rebuild the stated complex weight", "[logpolar]") {
  LogPolarVector x;
  x.layout = {1, 5};
  x.values = Eigen::VectorXd::Zero(x.layout.dimension());
  x.values[x.layout.log_amplitude_index(0, 5)] = std::log(2.0);
  x.values[x.layout.phase_index(0, 5)] = 0.7;

  ComplexWeights weights = from_logpolar(x, 1.0);
  CHECK(std::abs(weights.at(0, 5) - std::polar(2.0, 0.7)) <= 1e-15);
  CHECK(std::abs(weights.at(0, -5) - std::polar(2.0, -0.7)) <= 1e-15);
}

TEST_CASE("decomposition and rebuild are mutually inverse", "[logpolar]") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    ComplexWeights source = oracles::random_symmetric_weights(3, 6, rng, 1.5);
    LogPolarVector x = to_logpolar(source);
    ComplexWeights back = from_logpolar(x, source.duration);
    CHECK((back.coeffs - source.coeffs).cwiseAbs().maxCoeff() <= 1e-12);

    LogPolarVector x2 = to_logpolar(back);
    CHECK((x2.values - x.values).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("from_logpolar validates its input", "[logpolar]") {
  LogPolarVector x;
  x.layout = {1, 2};
  x.values = Eigen::VectorXd::Zero(3);  // wrong length
  CHECK_THROWS_AS(from_logpolar(x, 1.0), std::invalid_argument);
  x.values = Eigen::VectorXd::Zero(5);
  x.values[1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(from_logpolar(x, 1.0), std::invalid_argument);
}

namespace {

LogPolarVector vector_with_phase(const WeightIndexMap& layout, int dof, int harmonic,
                                 double phase) {
  LogPolarVector x;
  x.layout = layout;
  x.values = Eigen::VectorXd::Zero(layout.dimension());
  x.values[layout.phase_index(dof, harmonic)] = phase;
  return x;
}

}  // namespace

TEST_CASE("phases already within pi of their mean stay put", "[logpolar]") {
  WeightIndexMap layout{1, 1};
  PhaseAlignment aligned = align_phases(
      {vector_with_phase(layout, 0, 1, 0.1), vector_with_phase(layout, 0, 1, 0.2)});
  CHECK(aligned.vectors[0].values[layout.phase_index(0, 1)] == 0.1);
  CHECK(aligned.vectors[1].values[layout.phase_index(0, 1)] == 0.2);
}

TEST_CASE("phases straddling the cut are unwrapped to one side", "[logpolar]") {
  WeightIndexMap layout{1, 1};
  PhaseAlignment aligned = align_phases(
      {vector_with_phase(layout, 0, 1, 3.1), vector_with_phase(layout, 0, 1, -3.1)});
  const int idx = layout.phase_index(0, 1);
  CHECK(aligned.vectors[0].values[idx] == Catch::Approx(3.1).margin(1e-12));
  CHECK(aligned.vectors[1].values[idx] ==
        Catch::Approx(3.1831853071795862).margin(1e-12));
  // reference is the circular mean, here the cut itself
  CHECK(aligned.reference[0] == Catch::Approx(std::numbers::pi).margin(1e-12));
}

TEST_CASE("alignment is invariant to whole turns in the input", "[logpolar]") {
  WeightIndexMap layout{2, 2};
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);

  std::vector<LogPolarVector> base;
  for (int m = 0; m < 4; ++m) {
    LogPolarVector x;
    x.layout = layout;
    x.values = Eigen::VectorXd::Zero(layout.dimension());
    for (int d = 0; d < 2; ++d)
      for (int k = 1; k <= 2; ++k)
        x.values[layout.phase_index(d, k)] = angle(rng);
    base.push_back(x);
  }
  std::vector<LogPolarVector> shifted = base;
  for (int d = 0; d < 2; ++d)
    for (int k = 1; k <= 2; ++k)
      shifted[1].values[layout.phase_index(d, k)] += two_pi;

  PhaseAlignment a = align_phases(base);
  PhaseAlignment b = align_phases(shifted);
  for (int m = 0; m < 4; ++m)
    CHECK((a.vectors[m].values - b.vectors[m].values).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("alignment leaves amplitudes and offsets untouched", "[logpolar]") {
  std::mt19937_64 rng(31);
  ComplexWeights w1 = oracles::random_symmetric_weights(2, 3, rng);
  ComplexWeights w2 = oracles::random_symmetric_weights(2, 3, rng);
  LogPolarVector x1 = to_logpolar(w1);
  LogPolarVector x2 = to_logpolar(w2);

  PhaseAlignment aligned = align_phases({x1, x2});
  const WeightIndexMap& layout = x1.layout;
  for (int d = 0; d < 2; ++d) {
    CHECK(aligned.vectors[0].values[layout.dc_index(d)] ==
          x1.values[layout.dc_index(d)]);
    for (int k = 1; k <= 3; ++k) {
      CHECK(aligned.vectors[0].values[layout.log_amplitude_index(d, k)] ==
            x1.values[layout.log_amplitude_index(d, k)]);
      CHECK(aligned.vectors[1].values[layout.log_amplitude_index(d, k)] ==
            x2.values[layout.log_amplitude_index(d, k)]);
    }
  }
}

TEST_CASE("aligned phases sit within pi of the stored reference", "[logpolar]") {
  WeightIndexMap layout{1, 2};
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> angle(-3.14, 3.14);
  std::vector<LogPolarVector> vectors;
  for (int m = 0; m < 20; ++m) {
    LogPolarVector x;
    x.layout = layout;
    x.values = Eigen::VectorXd::Zero(layout.dimension());
    for (int k = 1; k <= 2; ++k) x.values[layout.phase_index(0, k)] = angle(rng);
    vectors.push_back(x);
  }
  PhaseAlignment aligned = align_phases(vectors);
  for (const auto& v : aligned.vectors)
    for (int k = 1; k <= 2; ++k) {
      const double phase = v.values[layout.phase_index(0, k)];
      const double ref = aligned.reference[layout.phase_ref_index(0, k)];
      CHECK(std::abs(phase - ref) <= std::numbers::pi + 1e-12);
    }
}

TEST_CASE("alignment rejects empty and mixed-layout input", "[logpolar]") {
  CHECK_THROWS_AS(align_phases({}), std::invalid_argument);
  LogPolarVector a;
  a.layout = {1, 1};
  a.values = Eigen::VectorXd::Zero(3);
  LogPolarVector b;
  b.layout = {1, 2};
  b.values = Eigen::VectorXd::Zero(5);
  CHECK_THROWS_AS(align_phases({a, b}), std::invalid_argument);
}
