// Copyright 2026 The qudit-ion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qudit/benchmark.hpp"
#include "qudit/gate_library.hpp"

using namespace qudit;

namespace {

std::vector<int> multiples(int period, int count) {
  std::vector<int> v;
  for (int k = 0; k < count; ++k) v.push_back(period * k);
  return v;
}

// Average error of one depolarizing channel, from its process fidelity.
double oracle_average_error(double p, int d) {
  const double f_pro = 1 - p * (d * d - 1.0) / (d * d);
  return 1 - (d * f_pro + 1) / (d + 1);
}

}  // namespace

TEST(DecayFit, SyntheticDataWithinThreeSigma) {
  std::mt19937_64 rng(5);
  const double p = 0.99;
  const int shots = 10000;
  int inside = 0;
  const int trials = 40;
  for (int t = 0; t < trials; ++t) {
    DecayData data;
    for (int m : {1, 5, 10, 20, 40, 80, 160}) {
      const double f = 0.9 * std::pow(p, m) + 0.1;
      std::binomial_distribution<int> draw(shots, f);
      const double y = double(draw(rng)) / shots;
      data.x.push_back(m);
      data.y.push_back(y);
      data.sigma.push_back(std::sqrt(std::max(f * (1 - f), 1.0 / shots) / shots));
    }
    const auto fit = fit_decay(data, std::nullopt, 0.1);
    EXPECT_TRUE(fit.converged);
    if (std::abs(fit.p - p) < 3 * fit.p_sigma()) ++inside;
  }
  EXPECT_GE(inside, trials - 2);
}

TEST(DecayFit, ConstantDataGivesUnitRate) {
  DecayData data{{1, 5, 10}, {1, 1, 1}, {1e-3, 1e-3, 1e-3}};
  const auto fit = fit_decay(data, 1.0 / 3, 1.0 / 3);
  EXPECT_EQ(fit.p, 1.0);
  EXPECT_NEAR(fit.A, 2.0 / 3, 1e-15);
}

TEST(DecayFit, RejectsBadInput) {
  EXPECT_THROW(fit_decay(DecayData{{1}, {1}, {1}}, std::nullopt, 0.5), std::invalid_argument);
  EXPECT_THROW(fit_decay(DecayData{{1, 2}, {1, 0.9}, {0, 1}}, 0.5, 0.5), std::invalid_argument);
}

TEST(RB, SequencesCloseToIdentity) {
  for (int d : {2, 3, 5}) {
    const auto group = enumerate_clifford(d);
    RBSequenceSpec spec;
    spec.dim = d;
    spec.lengths = {1, 7};
    spec.seed = 11;
    for (const auto& seq : generate_rb_sequences(spec, group)) {
      ASSERT_EQ(seq.elements.size(), std::size_t(seq.length + 1));
      Matrix prod = Matrix::Identity(d, d);
      for (auto g : seq.elements) prod = group[g].unitary * prod;
      EXPECT_LT(phase_distance(prod, Matrix::Identity(d, d)), 1e-9);
    }
  }
}

TEST(RB, SequencesAreSeeded) {
  const auto group = enumerate_clifford(3);
  RBSequenceSpec spec;
  spec.lengths = {4};
  const auto a = generate_rb_sequences(spec, group);
  const auto b = generate_rb_sequences(spec, group);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].elements, b[k].elements);
  spec.seed = 2;
  EXPECT_NE(generate_rb_sequences(spec, group)[0].elements, a[0].elements);
}

TEST(RB, ZeroNoiseGivesUnitSurvival) {
  RBSequenceSpec spec;
  spec.lengths = {1, 5, 10};
  const auto res = run_rb(spec, NoiseModel{}, 1000);
  for (const auto& pt : res.points) EXPECT_NEAR(pt.survival, 1.0, 1e-12);
  EXPECT_EQ(res.fit.p, 1.0);
  EXPECT_EQ(res.error_per_clifford, 0.0);
}

TEST(RB, RejectsTooFewSequences) {
  RBSequenceSpec spec;
  spec.sequences_per_length = 5;
  EXPECT_THROW(run_rb(spec, NoiseModel{}, 0), std::invalid_argument);
}

TEST(RB, ErrorConventionMatchesDepolarizingComposition) {
  // One depolarizing channel of strength p per Clifford: survival decays
  // with rate 1 - p and r equals the channel's average error.
  for (int d : {2, 3, 5}) {
    const double p = 0.02;
    DecayData data;
    for (int m : {1, 2, 4, 8, 16}) {
      data.x.push_back(m);
      data.y.push_back((1 - 1.0 / d) * std::pow(1 - p, m) + 1.0 / d);
      data.sigma.push_back(1e-3);
    }
    const auto fit = fit_decay(data, 1.0 / d, 1.0 / d);
    EXPECT_NEAR(fit.p, 1 - p, 1e-9);
    EXPECT_NEAR(rb_error_per_clifford(fit.p, d), oracle_average_error(p, d), 1e-9);
  }
}

TEST(RB, PerPulseErrorComposesPerClifford) {
  const double r_pulse = 2.0e-4;
  NoiseModel noise;
  noise.pulse_depolarizing = depolarizing_from_error_rate(r_pulse, 3);
  RBSequenceSpec spec;
  spec.lengths = {1, 5, 10, 20, 40};
  spec.seed = 3;
  const auto res = run_rb(spec, noise, 10000);
  const double expected = r_pulse * res.mean_pulses;
  EXPECT_NEAR(res.error_per_clifford / expected, 1.0, 0.15);
  EXPECT_NEAR(res.error_per_pulse / r_pulse, 1.0, 0.15);
  EXPECT_GT(res.mean_pulses, 1.0);
}

TEST(GateDecay, NoiselessPeriodicity) {
  for (auto gate : {DecayGate::kCex, DecayGate::kCinc}) {
    GateDecaySpec spec;
    spec.gate = gate;
    spec.repetitions = multiples(spec.period(), 4);
    const auto res = run_gate_decay(spec, NoiseModel{}, 0);
    for (const auto& pt : res.points) {
      EXPECT_NEAR(pt.population, 1.0, 1e-9);
      EXPECT_NEAR(pt.contrast, 1.0, 1e-9);
    }
    EXPECT_EQ(res.fidelity, 1.0);
  }
}

TEST(GateDecay, CincCubedReturnsInput) {
  const auto seq = decay_gate_sequence(DecayGate::kCinc);
  const Matrix u = sequence_matrix(seq);
  EXPECT_LT(phase_distance(u * u * u, Matrix::Identity(9, 9)), 1e-9);
  EXPECT_LT(phase_distance(u, cinc(3).matrix()), 1e-9);
}

TEST(GateDecay, RejectsOffPeriodRepetitions) {
  GateDecaySpec spec;
  spec.gate = DecayGate::kCinc;
  spec.repetitions = {0, 2};
  EXPECT_THROW(run_gate_decay(spec, NoiseModel{}, 0), std::invalid_argument);
}

TEST(GateDecay, CalibratedFidelityIsRecovered) {
  const std::pair<DecayGate, double> anchors[] = {{DecayGate::kCex, 0.975},
                                                  {DecayGate::kCinc, 0.938}};
  for (const auto& [gate, fidelity] : anchors) {
    GateDecaySpec spec;
    spec.gate = gate;
    spec.repetitions = multiples(spec.period(), 12);
    spec.gate_depolarizing = gate_depolarizing_for_fidelity(fidelity);
    spec.seed = 17;
    const auto exact = run_gate_decay(spec, NoiseModel{}, 0);
    EXPECT_NEAR(exact.fidelity, fidelity, 1e-9);
    const auto sampled = run_gate_decay(spec, NoiseModel{}, 10000);
    EXPECT_NEAR(sampled.fidelity, fidelity, 0.005);
  }
}
