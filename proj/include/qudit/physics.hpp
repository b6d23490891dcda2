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

#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qudit/circuit.hpp"
#include "qudit/native_gates.hpp"

namespace qudit {

class ResonanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// AC-Stark shifts

struct StarkTransition {
  int lower = 0;  // S-manifold level
  int upper = 1;  // D-manifold level
  double detuning_hz = 0.0;  // relative to the 0 <-> 1 transition
  double coupling = 1.0;     // relative to the 0 <-> 1 coupling
};

/// Off-resonant light shift model. Each level l is shifted by
///   eps_l(delta) = s_l (Omega^2 / 4) (b - sum_{t contains l} c_t^2 / (delta - delta_t))
/// with s_l = +1 in S and -1 in D, so that for an S-D pair the relative shift
/// eps_i - eps_j reproduces (Omega^2 / 4)(2b - sum_t c_t^2 gamma_ij^t / (delta - delta_t)).
struct StarkModel {
  std::vector<Manifold> manifolds;  // per level
  std::vector<StarkTransition> transitions;
  double rabi_hz = 1.0;
  double background = 0.0;
  double guard_band_hz = 1e3;

  int levels() const { return static_cast<int>(manifolds.size()); }
  void validate() const;

  /// Standard encoding at B = 4 G with Zeeman-split transition detunings and
  /// illustrative couplings. Not a lab calibration.
  static StarkModel illustrative();
};

/// 2 if t is the (i, j) transition, 1 if it shares one level, 0 otherwise.
int gamma_coefficient(const StarkTransition& t, int i, int j);

/// Per-level shifts for unit tone intensity at detuning delta.
std::vector<double> level_shifts(const StarkModel& m, double delta_hz);

/// Relative shift Delta_{i,j}(delta) between levels i and j.
double stark_shift(const StarkModel& m, int i, int j, double delta_hz);

struct Tone {
  double detuning_hz = 0.0;
  double weight = 0.0;  // intensity relative to the model's Rabi frequency
};

using ToneSet = std::vector<Tone>;

std::vector<double> level_shifts(const StarkModel& m, const ToneSet& tones);
double stark_shift(const StarkModel& m, int i, int j, const ToneSet& tones);

struct CompensationResult {
  ToneSet tones;
  bool feasible = true;  // false when some weight is negative
  double relative_residual = 0.0;
  std::string message;
};

/// Weights for fixed tone detunings such that every occupied level except
/// `shifted` keeps the same energy as `reference`, while the
/// (shifted, reference) shift equals target_hz. Needs one tone fewer than
/// occupied levels. Throws ResonanceError or std::invalid_argument.
CompensationResult solve_compensation(const StarkModel& m,
                                      const std::vector<int>& occupied,
                                      const std::vector<double>& tone_detunings,
                                      std::pair<int, int> target,
                                      double target_hz = 1.0);

/// Least-squares weights that shift all occupied S levels equally against all
/// occupied D levels by target_hz.
CompensationResult solve_manifold_equalization(
    const StarkModel& m, const std::vector<int>& occupied,
    const std::vector<double>& tone_detunings, double target_hz = 1.0);

// ---------------------------------------------------------------------------
// Composite pulses

/// Z(pi) - R(-theta/2, phi) - Z(pi) - R(theta/2, phi) on levels (i, j) of a
/// single d-level site, with Z(pi) a Stark pi phase on level i.
PulseSequence refocused_rotation(double theta, double phi, int i = 0, int j = 1,
                                 int d = 2);

/// Rotation angle left on the (i, j) block by the neighbor's copy of the
/// composite under amplitude crosstalk eps (resonant pulses scale as eps,
/// Stark pulses as eps^2), divided by theta.
double refocused_neighbor_error(double theta, double phi, double eps);
/// Same metric for a plain resonant pulse; equals eps.
double resonant_neighbor_error(double theta, double phi, double eps);

// ---------------------------------------------------------------------------
// Readout

struct Discrimination {
  double bright_error = 0.0;  // bright read as dark
  double dark_error = 0.0;    // dark read as bright
};

struct PoissonDiscriminator {
  double bright_rate = 4.0e4;  // counts per second
  double dark_rate = 1.0e3;
  int threshold = -1;  // counts >= threshold read bright; -1 optimises

  int threshold_for(double t_detect) const;
  Discrimination operator()(double t_detect) const;
};

struct ReadoutModel {
  double tau1 = 1.1;
  double t_detect = 500e-6;
  double t_cool = 2500e-6;
  double t_shelve = 0.0;  // declared duration of the initial shelving pulses
  std::function<Discrimination(double)> discrimination =
      PoissonDiscriminator{};

  void validate() const;
};

struct ReadoutBudget {
  std::vector<double> per_state_error;
  std::vector<double> exposure;  // time spent in D before being read
  double worst_case = 0.0;
  double total_time = 0.0;
};

/// Sequential shelving readout: level k is read bright in detection k after
/// k dark detections; the last level is the all-dark outcome.
ReadoutBudget readout_error_budget(const ReadoutModel& m, int d);

struct ReadoutSample {
  std::vector<double> per_state_error;
  std::vector<double> standard_error;
  int shots = 0;
};

/// Monte-Carlo replay of the cascade with sampled decay times and Poisson
/// photon counts. Requires a PoissonDiscriminator.
ReadoutSample sample_readout(const ReadoutModel& m,
                             const PoissonDiscriminator& disc, int d, int shots,
                             std::mt19937_64& rng);

}  // namespace qudit
