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
#include <limits>
#include <span>
#include <vector>

#include "qudit/circuit.hpp"
#include "qudit/core.hpp"
#include "qudit/native_gates.hpp"
#include "qudit/physics.hpp"

namespace qudit {

// ---------------------------------------------------------------------------
// Channels

/// Kraus operators of rho -> (1 - p) rho + p Tr(rho) 1/d, written as a Weyl
/// twirl: weight 1 - p + p/d^2 on the identity and p/d^2 on every other X^a Z^b.
/// State fidelity of a pure input is 1 - p (d-1)/d, process fidelity
/// 1 - p (d^2-1)/d^2.
std::vector<Matrix> depolarizing_kraus(int d, double p);
/// Depolarizing strength for an average error rate r = p (d-1)/d.
double depolarizing_from_error_rate(double r, int d);

/// Off-diagonal elements decay by exp(-rate t).
std::vector<Matrix> dephasing_kraus(int d, double rate, double t);

/// Each D level decays to its S partner with probability 1 - exp(-t/tau1).
/// D levels with negative m decay to level 0, positive m to level 2 when present.
std::vector<Matrix> amplitude_decay_kraus(int d, double tau1, double t,
                                          const LevelMap& map = LevelMap::standard());

/// Throws InvariantError if the Choi operator of the Kraus set is not PSD or
/// the set is not trace preserving.
void check_channel(std::span<const Matrix> kraus, int d);

/// Applies a Kraus set acting on `sites` of a register.
Matrix apply_local_kraus(const Matrix& rho, std::span<const Matrix> kraus,
                         std::span<const int> sites, std::span<const int> dims);

/// Depolarizes the joint space of `sites`: (1-p) rho + p Tr_sites(rho) (x) 1/D.
Matrix depolarize(const Matrix& rho, double p, std::span<const int> sites,
                  std::span<const int> dims);

// ---------------------------------------------------------------------------
// Noise model

struct Durations {
  double rotation = 10e-6;
  double ms = 200e-6;
  double stark = 20e-6;
  double library = 0.0;
};

struct NoiseModel {
  double pulse_depolarizing = 0.0;  // after each rotation or Stark pulse
  double ms_depolarizing = 0.0;     // on both sites after each MS gate
  double dephasing_rate = 0.0;      // 1/s on every site during each instruction
  double tau1 = std::numeric_limits<double>::infinity();
  Durations durations;

  /// Range checks plus a Choi positivity check of every configured channel.
  void validate() const;
  bool noiseless() const;
};

// ---------------------------------------------------------------------------
// Execution

QuditState run_pure(const Circuit& c, const QuditState& input);
QuditState run_pure(const PulseSequence& seq, const QuditState& input);

/// Exact density-matrix evolution: each instruction's unitary, then its noise
/// channels. Deterministic.
DensityState run_noisy(const Circuit& c, const DensityState& input,
                       const NoiseModel& noise);

// ---------------------------------------------------------------------------
// Readout

struct ShotRecord {
  std::vector<int> outcome;                  // per site
  std::vector<std::vector<bool>> timeline;   // per detection round, per site bright
};

/// Born-rule sampling of the register followed by the sequential bright/dark
/// cascade on every ion. Discrimination errors are drawn from the readout
/// model; a decayed ion reads bright from the first detection window that ends
/// after the decay.
std::vector<ShotRecord> sample_readout(const DensityState& state,
                                       const ReadoutModel& readout,
                                       std::uint64_t seed, int shots);

/// Cascade without any errors or decay.
ReadoutModel ideal_readout();

}  // namespace qudit
