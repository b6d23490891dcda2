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
#include "qudit/compiler.hpp"
#include "qudit/gate_library.hpp"
#include "qudit/simulator.hpp"

using namespace qudit;

namespace {

Circuit random_circuit(std::mt19937_64& rng, std::vector<int> dims, int length) {
  Circuit c;
  c.dims = dims;
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int k = 0; k < length; ++k) {
    const int site = static_cast<int>(rng() % dims.size());
    const int d = dims[site];
    const int i = static_cast<int>(rng() % d);
    int j = static_cast<int>(rng() % (d - 1));
    if (j >= i) ++j;
    switch (rng() % 3) {
      case 0:
        c.ops.push_back(RotationOp{site, TwoLevelRotation{i, j, ang(rng), ang(rng), 1}});
        break;
      case 1:
        c.ops.push_back(StarkOp{site, StarkPhaseGate{i, ang(rng)}});
        break;
      default:
        if (dims.size() > 1) {
          c.ops.push_back(MSOp{MSGateSpec{0, 1, ang(rng), ang(rng), 0, 1, 1, 1}});
        }
    }
  }
  return c;
}

}  // namespace

TEST(RunPure, EmptyCircuitKeepsInput) {
  Circuit c;
  c.dims = {3, 2};
  std::mt19937_64 rng(1);
  const Matrix u = haar_unitary(6, rng);
  const QuditState in({3, 2}, u.col(0));
  const auto out = run_pure(c, in);
  EXPECT_LT((out.amplitudes() - in.amplitudes()).norm(), 1e-15);
}

TEST(RunPure, CincMapsTwoZeroToTwoOne) {
  const auto seq = synth_cinc(3);
  const std::vector<int> lv{2, 0};
  const auto out = run_pure(seq, QuditState::basis({3, 3}, lv));
  const std::vector<int> want{2, 1};
  EXPECT_NEAR(std::abs(out.amplitudes()(2 * 3 + 1)), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(out, QuditState::basis({3, 3}, want)), 1.0, 1e-12);
}

TEST(RunPure, HadamardPulsesGiveUniformSuperposition) {
  const auto seq = decompose_su_d(hadamard(3), CouplingGraph::ladder(3));
  const std::vector<int> lv{0};
  const auto out = run_pure(seq, QuditState::basis({3}, lv));
  Vector want = Vector::Constant(3, 1.0 / std::sqrt(3.0));
  EXPECT_NEAR(std::abs(want.dot(out.amplitudes())), 1.0, 1e-12);
  const Vector direct = hadamard(3).matrix() * QuditState::basis({3}, lv).amplitudes();
  EXPECT_LT(oracle::phase_free_distance(out.amplitudes(), direct), 1e-12);
}

TEST(RunPure, DimensionMismatchThrows) {
  Circuit c;
  c.dims = {3};
  const std::vector<int> lv{0};
  EXPECT_THROW(run_pure(c, QuditState::basis({4}, lv)), DimensionError);
}

TEST(RunNoisy, NoiselessMatchesPure) {
  std::mt19937_64 rng(3);
  const Circuit c = random_circuit(rng, {3, 3}, 30);
  const Matrix u = haar_unitary(9, rng);
  const QuditState in({3, 3}, u.col(0));
  const auto pure = run_pure(c, in);
  const auto mixed = run_noisy(c, DensityState::from_pure(in), NoiseModel{});
  const Matrix want = pure.amplitudes() * pure.amplitudes().adjoint();
  EXPECT_LT(oracle::max_abs(mixed.matrix() - want), 1e-12);
}

TEST(Channels, DepolarizingFidelities) {
  for (int d : {2, 3, 5}) {
    const double p = 0.07;
    const auto kraus = depolarizing_kraus(d, p);
    EXPECT_NO_THROW(check_channel(kraus, d));
    const ChoiOperator choi = choi_of_kraus(kraus);
    EXPECT_NEAR(process_fidelity(choi, UnitaryOp::identity(d)),
                1.0 - p * (d * d - 1.0) / (d * d), 1e-12);

    Circuit c;
    c.dims = {d};
    c.ops.push_back(RotationOp{0, TwoLevelRotation{0, 1, 0.9, 0.2, 1}});
    NoiseModel noise;
    noise.pulse_depolarizing = p;
    const std::vector<int> lv{0};
    const auto in = QuditState::basis({d}, lv);
    const auto out = run_noisy(c, DensityState::from_pure(in), noise);
    const auto ideal = run_pure(c, in);
    EXPECT_NEAR(fidelity(out, ideal), 1.0 - p * (d - 1.0) / d, 1e-12);
  }
}

TEST(Channels, FastDepolarizeMatchesKraus) {
  std::mt19937_64 rng(5);
  const std::vector<int> dims{3, 2, 3};
  const Matrix u = haar_unitary(18, rng);
  Matrix rho = u.leftCols(3) * u.leftCols(3).adjoint() / 3.0;
  for (const std::vector<int>& sites :
       {std::vector<int>{1}, std::vector<int>{0, 2}, std::vector<int>{2, 0}}) {
    int d = 1;
    for (int s : sites) d *= dims[s];
    const auto kraus = depolarizing_kraus(d, 0.3);
    const Matrix slow = apply_local_kraus(rho, kraus, sites, dims);
    const Matrix fast = depolarize(rho, 0.3, sites, dims);
    EXPECT_LT(oracle::max_abs(slow - fast), 1e-12);
  }
}

TEST(Channels, AllConfiguredChannelsArePositive) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 6;
    const double t = unit(rng) * 1e-3;
    for (const auto& kraus :
         {depolarizing_kraus(d, unit(rng)), dephasing_kraus(d, unit(rng) * 100, t),
          amplitude_decay_kraus(d, 0.5 + unit(rng), t)}) {
      EXPECT_GE(min_eigenvalue(choi_of_kraus(kraus).matrix()), -1e-10);
      EXPECT_NO_THROW(check_channel(kraus, d));
    }
  }
}

TEST(Channels, InvalidModelsRejected) {
  NoiseModel m;
  m.pulse_depolarizing = 1.2;
  EXPECT_THROW(m.validate(), std::invalid_argument);
  m = NoiseModel{};
  m.tau1 = -1.0;
  EXPECT_THROW(m.validate(), std::invalid_argument);
  m = NoiseModel{};
  m.durations.ms = -1.0;
  EXPECT_THROW(m.validate(), std::invalid_argument);
  std::vector<Matrix> broken{2.0 * Matrix::Identity(2, 2)};
  EXPECT_THROW(check_channel(broken, 2), InvariantError);
}

TEST(Channels, AmplitudeDecayMovesDToS) {
  const double tau = 1.1, t = 0.3;
  const auto kraus = amplitude_decay_kraus(4, tau, t);
  Matrix rho = Matrix::Zero(4, 4);
  rho(3, 3) = 1.0;  // D(+1/2) decays to S(+1/2) = level 2
  Matrix out = Matrix::Zero(4, 4);
  for (const auto& k : kraus) out += k * rho * k.adjoint();
  EXPECT_NEAR(out(3, 3).real(), std::exp(-t / tau), 1e-14);
  EXPECT_NEAR(out(2, 2).real(), 1.0 - std::exp(-t / tau), 1e-14);
  rho.setZero();
  rho(1, 1) = 1.0;
  out.setZero();
  for (const auto& k : kraus) out += k * rho * k.adjoint();
  EXPECT_NEAR(out(0, 0).real(), 1.0 - std::exp(-t / tau), 1e-14);
}

TEST(RunNoisy, TracePreservedForRandomModels) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Circuit c = random_circuit(rng, {4, 4}, 15);
    NoiseModel m;
    m.pulse_depolarizing = 0.1 * unit(rng);
    m.ms_depolarizing = 0.1 * unit(rng);
    m.dephasing_rate = 100 * unit(rng);
    m.tau1 = 0.01 + unit(rng);
    const auto out = run_noisy(c, DensityState::maximally_mixed({4, 4}), m);
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-10);
    EXPECT_GE(min_eigenvalue(out.matrix()), -1e-10);
  }
}

TEST(RunNoisy, SpectatorInstructionsLeaveStateInvariant) {
  Circuit c;
  c.dims = {4, 4};
  c.ops.push_back(RotationOp{0, TwoLevelRotation{2, 3, 1.1, 0.4, 1}});
  c.ops.push_back(MSOp{MSGateSpec{2, 3, kPi / 2, 0.3, 0, 1, 1, 1}});
  c.ops.push_back(StarkOp{1, StarkPhaseGate{3, 0.8}});
  Vector amp = Vector::Zero(16);
  amp(0) = 1.0 / std::sqrt(2.0);
  amp(5) = Complex(0.0, 1.0 / std::sqrt(2.0));
  const QuditState in({4, 4}, amp);
  const auto out = run_pure(c, in);
  EXPECT_EQ((out.amplitudes() - amp).cwiseAbs().maxCoeff(), 0.0);
}

TEST(RunNoisy, RepeatedPulsesFollowDepolarizingDecay) {
  const double r = 2e-4;
  const int d = 3;
  Circuit c;
  c.dims = {d};
  for (int k = 0; k < 100; ++k) c.ops.push_back(RotationOp{0, TwoLevelRotation{0, 1, kPi, 0, 1}});
  NoiseModel m;
  m.pulse_depolarizing = depolarizing_from_error_rate(r, d);
  const std::vector<int> lv{0};
  const auto out = run_noisy(c, DensityState::from_pure(QuditState::basis({d}, lv)), m);
  const double f = std::pow(1.0 - m.pulse_depolarizing, 100);
  const double want = f + (1.0 - f) / d;
  EXPECT_NEAR(out.populations()(0), want, 1e-12);
  EXPECT_NEAR(want, 1.0 - (1.0 - std::pow(1.0 - r * d / (d - 1.0), 100)) * (d - 1.0) / d, 1e-15);

  const int shots = 10000;
  const auto rec = sample_readout(out, ideal_readout(), 17, shots);
  int survived = 0;
  for (const auto& s : rec) survived += s.outcome[0] == 0;
  const double sigma = std::sqrt(want * (1 - want) / shots);
  EXPECT_LT(std::abs(survived / double(shots) - want), 3 * sigma + 1.0 / shots);
}

TEST(ShotReadout, ZeroNoiseIsDeterministic) {
  const std::vector<int> lv{1};
  const auto rec =
      sample_readout(DensityState::from_pure(QuditState::basis({3}, lv)), ideal_readout(), 1, 500);
  for (const auto& s : rec) EXPECT_EQ(s.outcome[0], 1);
}

TEST(ShotReadout, BornRuleFrequencies) {
  Vector amp = Vector::Zero(3);
  amp(0) = amp(2) = 1.0 / std::sqrt(2.0);
  const int shots = 100000;
  const auto rec =
      sample_readout(DensityState::from_pure(QuditState({3}, amp)), ideal_readout(), 2, shots);
  int zeros = 0, twos = 0;
  for (const auto& s : rec) {
    zeros += s.outcome[0] == 0;
    twos += s.outcome[0] == 2;
  }
  EXPECT_EQ(zeros + twos, shots);
  EXPECT_LT(std::abs(zeros / double(shots) - 0.5), 5 * std::sqrt(0.25 / shots));
}

TEST(ShotReadout, LastLevelMatchesBudget) {
  const ReadoutModel model;
  const std::vector<int> lv{2};
  const int shots = 100000;
  const auto rec =
      sample_readout(DensityState::from_pure(QuditState::basis({3}, lv)), model, 23, shots);
  int errors = 0;
  for (const auto& s : rec) errors += s.outcome[0] != 2;
  const double p = errors / double(shots);
  const double want = readout_error_budget(model, 3).per_state_error[2];
  EXPECT_LT(std::abs(p - want), 3 * std::sqrt(want * (1 - want) / shots));
}

TEST(ShotReadout, SeededStreamsRepeat) {
  std::mt19937_64 rng(4);
  const Matrix u = haar_unitary(9, rng);
  const DensityState state = DensityState::from_pure(QuditState({3, 3}, u.col(0)));
  const auto a = sample_readout(state, ReadoutModel{}, 77, 2000);
  const auto b = sample_readout(state, ReadoutModel{}, 77, 2000);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].outcome, b[k].outcome);
    EXPECT_EQ(a[k].timeline, b[k].timeline);
  }
}

TEST(ShotReadout, CascadeTimelineOnTwoIons) {
  const std::vector<int> lv{2, 1};
  const auto rec = sample_readout(DensityState::from_pure(QuditState::basis({3, 3}, lv)),
                                  ideal_readout(), 5, 1);
  ASSERT_EQ(rec.size(), 1u);
  EXPECT_EQ(rec[0].outcome, lv);
  ASSERT_EQ(rec[0].timeline.size(), 2u);
  EXPECT_EQ(rec[0].timeline[0], (std::vector<bool>{false, false}));
  EXPECT_EQ(rec[0].timeline[1], (std::vector<bool>{false, true}));
}
