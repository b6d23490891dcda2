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

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "qudit/circuit.hpp"
#include "qudit/clifford.hpp"
#include "qudit/core.hpp"
#include "qudit/simulator.hpp"

namespace qudit {

// ---------------------------------------------------------------------------
// Exponential decay fit F(m) = A p^m + B

struct DecayFit {
  double A = 0.0;
  double B = 0.0;
  double p = 1.0;
  /// Covariance of (A, p, B); the B row and column are zero when B is fixed.
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  double chi2 = 0.0;
  bool converged = false;
  bool floor_fixed = false;

  double p_sigma() const;
};

struct DecayData {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> sigma;  // per point; must be positive
};

/// Weighted Levenberg-Marquardt fit. `fixed_floor` pins B; otherwise B is
/// free and starts at `floor_guess`. Constant data returns p = 1.
DecayFit fit_decay(const DecayData& data, std::optional<double> fixed_floor,
                   double floor_guess);

// ---------------------------------------------------------------------------
// Randomized benchmarking

struct RBSequenceSpec {
  int dim = 3;
  std::vector<int> lengths{1, 5, 10, 20, 40};
  int sequences_per_length = 20;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Group indices of one sequence: m random elements followed by the inverse.
struct RBSequence {
  int length = 0;
  std::vector<std::size_t> elements;
};

std::vector<RBSequence> generate_rb_sequences(const RBSequenceSpec& spec,
                                              const CliffordGroup& group);

/// Clifford elements compiled on the ladder coupling graph, built on demand.
class CompiledCliffords {
 public:
  explicit CompiledCliffords(const CliffordGroup& group);

  const CliffordGroup& group() const { return group_; }
  const PulseSequence& operator[](std::size_t k);
  /// Rotations plus Stark pulses of element k.
  int pulses(std::size_t k);
  /// Average of pulses() over the whole group.
  double mean_pulses();

 private:
  const CliffordGroup& group_;
  std::vector<std::optional<PulseSequence>> cache_;
};

struct RBPoint {
  int length = 0;
  double survival = 0.0;  // mean over sequences
  double sigma = 0.0;     // standard error of the mean
  std::vector<double> per_sequence;
};

struct RBResult {
  DecayFit fit;
  std::vector<RBPoint> points;
  double error_per_clifford = 0.0;  // r = (1 - p)(d - 1)/d
  double error_per_clifford_sigma = 0.0;
  double mean_pulses = 0.0;  // group average of compiled pulses
  double error_per_pulse = 0.0;
};

/// Survival of |0> after each sequence under `noise`, sampled with `shots`
/// per length split evenly over sequences (shots = 0: exact probabilities).
/// Every sequence's noiseless product is checked against the identity.
RBResult run_rb(const RBSequenceSpec& spec, const NoiseModel& noise, int shots,
                bool fix_floor = true);

/// r = (1 - p)(d - 1)/d.
double rb_error_per_clifford(double p, int d);

// ---------------------------------------------------------------------------
// Entangling-gate fidelity decay

enum class DecayGate { kCex, kCinc };

struct GateDecaySpec {
  DecayGate gate = DecayGate::kCex;
  /// Gate applications; each must be a multiple of the gate's period.
  std::vector<int> repetitions;
  int fringe_points = 8;
  /// Extra depolarizing on both sites after every application.
  double gate_depolarizing = 0.0;
  std::uint64_t seed = 1;

  int period() const;
  void validate() const;
};

struct GateDecayPoint {
  int repetitions = 0;
  double population = 0.0;
  double contrast = 0.0;
  double signal = 0.0;  // (population + contrast) / 2
  double sigma = 0.0;
};

struct GateDecayResult {
  DecayFit fit;
  double fidelity = 0.0;  // fitted decay per application
  double fidelity_sigma = 0.0;
  std::vector<GateDecayPoint> points;
};

/// Synthesized qutrit gate used by run_gate_decay.
PulseSequence decay_gate_sequence(DecayGate gate);
/// Input (|a> + |b>)|0>/sqrt2 on site 0 levels (a, b).
std::pair<int, int> decay_input_levels(DecayGate gate);

/// Repeats the synthesized gate on its input, measures the population of
/// the ideal support and the fringe contrast from an analysis rotation with
/// swept phase, and fits the decay of their mean with floor 1/D.
/// shots = 0 uses exact probabilities.
GateDecayResult run_gate_decay(const GateDecaySpec& spec, const NoiseModel& noise,
                               int shots);

/// Gate-level depolarizing strength whose decay parameter equals `fidelity`.
double gate_depolarizing_for_fidelity(double fidelity);

}  // namespace qudit
