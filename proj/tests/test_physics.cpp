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
#include "qudit/circuit.hpp"
#include "qudit/physics.hpp"

using namespace qudit;

namespace {

// Relative shift of an S-D pair written directly from the summed-transition formula.
double pair_shift_oracle(const StarkModel& m, int i, int j, double delta) {
  double sum = 0.0;
  for (const auto& t : m.transitions) {
    int gamma = 0;
    if (t.lower == i || t.lower == j) ++gamma;
    if (t.upper == i || t.upper == j) ++gamma;
    sum += t.coupling * t.coupling * gamma / (delta - t.detuning_hz);
  }
  return m.rabi_hz * m.rabi_hz / 4.0 * (2.0 * m.background - sum);
}

double transition_detuning(const StarkModel& m, int s, int d) {
  for (const auto& t : m.transitions) {
    if (t.lower == s && t.upper == d) return t.detuning_hz;
  }
  ADD_FAILURE() << "no transition " << s << "<->" << d;
  return 0.0;
}

}  // namespace

TEST(Stark, IllustrativeModelIsConsistent) {
  const StarkModel m = StarkModel::illustrative();
  EXPECT_NO_THROW(m.validate());
  EXPECT_EQ(m.levels(), 8);
  EXPECT_EQ(m.transitions.size(), 10u);
  EXPECT_NEAR(transition_detuning(m, 0, 1), 0.0, 1e-6);
  for (const auto& t : m.transitions) {
    EXPECT_EQ(m.manifolds[t.lower], Manifold::S);
    EXPECT_EQ(m.manifolds[t.upper], Manifold::D);
  }
}

TEST(Stark, GammaCoefficients) {
  const StarkTransition t{0, 1, 0.0, 1.0};
  EXPECT_EQ(gamma_coefficient(t, 0, 1), 2);
  EXPECT_EQ(gamma_coefficient(t, 1, 0), 2);
  EXPECT_EQ(gamma_coefficient(t, 0, 3), 1);
  EXPECT_EQ(gamma_coefficient(t, 2, 1), 1);
  EXPECT_EQ(gamma_coefficient(t, 2, 3), 0);
}

TEST(Stark, PairShiftMatchesSummedFormula) {
  const StarkModel m = StarkModel::illustrative();
  for (double delta : {-12.3e6, -4.1e6, 0.77e6, 3.3e6, 25e6}) {
    for (const auto& t : m.transitions) {
      const double want = pair_shift_oracle(m, t.lower, t.upper, delta);
      EXPECT_NEAR(stark_shift(m, t.lower, t.upper, delta), want,
                  1e-9 * std::abs(want) + 1e-12);
    }
  }
}

TEST(Stark, BackgroundDominatesFarFromResonance) {
  StarkModel m = StarkModel::illustrative();
  const double far = stark_shift(m, 0, 1, 1e12);
  EXPECT_NEAR(far, m.rabi_hz * m.rabi_hz / 4.0 * 2.0 * m.background,
              1e-3 * std::abs(far));
}

TEST(Stark, GuardBandThrows) {
  const StarkModel m = StarkModel::illustrative();
  const double d06 = transition_detuning(m, 0, 6);
  EXPECT_THROW(stark_shift(m, 0, 6, d06 + 10.0), ResonanceError);
  EXPECT_NO_THROW(stark_shift(m, 0, 6, d06 + 5e4));
}

TEST(Stark, LinearInToneWeights) {
  const StarkModel m = StarkModel::illustrative();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> w(0.0, 3.0);
  std::uniform_real_distribution<double> det(-20e6, 20e6);
  for (int trial = 0; trial < 20; ++trial) {
    const double d1 = det(rng), d2 = det(rng);
    const double w1 = w(rng), w2 = w(rng);
    const ToneSet both{{d1, w1}, {d2, w2}};
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        const double sum = w1 * stark_shift(m, i, j, d1) + w2 * stark_shift(m, i, j, d2);
        EXPECT_NEAR(stark_shift(m, i, j, both), sum, 1e-9 * (std::abs(sum) + 1.0));
      }
    }
  }
}

TEST(Compensation, SingleToneScalesInversely) {
  const StarkModel m = StarkModel::illustrative();
  for (double delta : {-3e6, 1.7e6, 9e6}) {
    const auto r = solve_compensation(m, {0, 1}, {delta}, {0, 1}, 250.0);
    ASSERT_EQ(r.tones.size(), 1u);
    EXPECT_NEAR(r.tones[0].weight, 250.0 / stark_shift(m, 0, 1, delta), 1e-12);
    EXPECT_EQ(r.feasible, r.tones[0].weight >= 0);
  }
}

TEST(Compensation, QutritNullsUnwantedShifts) {
  const StarkModel m = StarkModel::illustrative();
  const std::vector<int> occ{0, 1, 2};
  const auto r = solve_compensation(m, occ, {-7e6, 2.5e6}, {2, 0}, 1000.0);
  const auto eps = level_shifts(m, r.tones);
  EXPECT_LT(std::abs(eps[1] - eps[0]) / 1000.0, 1e-9);
  EXPECT_NEAR(eps[2] - eps[0], 1000.0, 1e-6);
  EXPECT_LT(r.relative_residual, 1e-9);
}

TEST(Compensation, RandomConfigurationsMeetResidual) {
  const StarkModel m = StarkModel::illustrative();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> det(-30e6, 30e6);
  for (int d : {3, 4, 5}) {
    std::vector<int> occ(d);
    for (int k = 0; k < d; ++k) occ[k] = k;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> tones;
      while (static_cast<int>(tones.size()) < d - 1) {
        const double t = det(rng);
        bool ok = true;
        for (const auto& tr : m.transitions) {
          if (std::abs(t - tr.detuning_hz) < 2e5) ok = false;
        }
        if (ok) tones.push_back(t);
      }
      const auto r = solve_compensation(m, occ, tones, {d - 1, 0}, 1.0);
      const auto eps = level_shifts(m, r.tones);
      double worst = 0.0;
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
          if (a == b || a == d - 1 || b == d - 1) continue;
          worst = std::max(worst, std::abs(eps[a] - eps[b]));
        }
      }
      EXPECT_LT(worst, 1e-9) << "d=" << d << " trial " << trial;
      EXPECT_LT(r.relative_residual, 1e-9);
    }
  }
}

TEST(Compensation, RejectsBadInput) {
  const StarkModel m = StarkModel::illustrative();
  EXPECT_THROW(solve_compensation(m, {0, 1, 2}, {1e6}, {0, 1}), std::invalid_argument);
  EXPECT_THROW(solve_compensation(m, {0, 1, 2}, {1e6, 1e6}, {0, 1}),
               std::invalid_argument);
  EXPECT_THROW(solve_compensation(m, {0, 1, 2}, {1e6, 2e6}, {0, 5}),
               std::invalid_argument);
  const double d01 = transition_detuning(m, 0, 1);
  EXPECT_THROW(solve_compensation(m, {0, 1}, {d01 + 1.0}, {0, 1}), ResonanceError);
}

TEST(Compensation, QuquartBichromaticPattern) {
  const StarkModel m = StarkModel::illustrative();
  const double d06 = transition_detuning(m, 0, 6);
  const std::vector<int> occ{0, 1, 2, 3};
  const auto r =
      solve_manifold_equalization(m, occ, {d06 - 10e6, d06 - 0.5e6}, 1000.0);
  const auto eps = level_shifts(m, r.tones);
  // S levels move together, D levels move together, opposite directions.
  EXPECT_GT(eps[0] * eps[2], 0.0);
  EXPECT_GT(eps[1] * eps[3], 0.0);
  EXPECT_LT(eps[0] * eps[1], 0.0);
  EXPECT_NEAR(eps[0] - eps[1], 1000.0, 100.0);
  EXPECT_LT(std::abs(eps[0] - eps[2]), 100.0);
  EXPECT_LT(std::abs(eps[1] - eps[3]), 100.0);
}

TEST(Refocus, CompositeEqualsRotation) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const double theta = ang(rng), phi = ang(rng);
    const Matrix u = sequence_matrix(refocused_rotation(theta, phi));
    const oracle::M want = oracle::rotation(2, 0, 1, theta, phi);
    EXPECT_LT(oracle::max_abs(u - want), 1e-12);
  }
  const Matrix u3 = sequence_matrix(refocused_rotation(0.7, 0.3, 0, 2, 3));
  EXPECT_LT(oracle::max_abs(u3 - oracle::rotation(3, 0, 2, 0.7, 0.3)), 1e-12);
}

TEST(Refocus, QuadraticSuppression) {
  std::vector<double> xs, ys;
  for (int k = 1; k <= 8; ++k) {
    const double eps = 0.01 * k;
    xs.push_back(std::log(eps));
    ys.push_back(std::log(refocused_neighbor_error(kPi, 0.0, eps)));
    EXPECT_NEAR(resonant_neighbor_error(kPi, 0.0, eps), eps, 1e-12);
  }
  const double n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    sxx += xs[k] * xs[k];
    sxy += xs[k] * ys[k];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  EXPECT_NEAR(slope, 2.0, 0.1);
  const double at4 = refocused_neighbor_error(kPi, 0.0, 0.04);
  EXPECT_GT(at4, 1e-3);
  EXPECT_LT(at4, 4e-3);
}

TEST(Readout, QutritBudgetNearThreePerMille) {
  const ReadoutModel m;
  const auto b = readout_error_budget(m, 3);
  ASSERT_EQ(b.per_state_error.size(), 3u);
  EXPECT_GT(b.worst_case, 3e-3 / 1.5);
  EXPECT_LT(b.worst_case, 3e-3 * 1.5);
  EXPECT_DOUBLE_EQ(b.per_state_error[0], 1.0 - (1.0 - m.discrimination(m.t_detect).bright_error));
}

TEST(Readout, TotalTimeAndMonotonicity) {
  ReadoutModel m;
  m.t_shelve = 40e-6;
  double prev = 0.0;
  for (int d = 2; d <= 7; ++d) {
    const auto b = readout_error_budget(m, d);
    EXPECT_DOUBLE_EQ(b.total_time, (d - 1) * m.t_detect + (d - 2) * m.t_cool + m.t_shelve);
    EXPECT_GT(b.worst_case, prev);
    prev = b.worst_case;
  }
}

TEST(Readout, PerfectDiscriminationLeavesDecayOnly) {
  ReadoutModel m;
  m.discrimination = [](double) { return Discrimination{}; };
  const auto b = readout_error_budget(m, 3);
  EXPECT_DOUBLE_EQ(b.per_state_error[0], 0.0);
  EXPECT_NEAR(b.per_state_error[1], 1.0 - std::exp(-3000e-6 / 1.1), 1e-15);
  EXPECT_NEAR(b.per_state_error[2], 1.0 - std::exp(-3500e-6 / 1.1), 1e-15);
}

TEST(Readout, InvalidModelThrows) {
  ReadoutModel m;
  m.tau1 = -1.0;
  EXPECT_THROW(readout_error_budget(m, 3), std::invalid_argument);
  EXPECT_THROW(readout_error_budget(ReadoutModel{}, 1), std::exception);
}

TEST(Readout, MonteCarloAgreesWithBudget) {
  const ReadoutModel m;
  const PoissonDiscriminator disc;
  std::mt19937_64 rng(99);
  const auto b = readout_error_budget(m, 3);
  const auto s = sample_readout(m, disc, 3, 100000, rng);
  for (int k = 0; k < 3; ++k) {
    EXPECT_LT(std::abs(s.per_state_error[k] - b.per_state_error[k]),
              3 * s.standard_error[k] + 1e-12)
        << "state " << k;
  }
}
