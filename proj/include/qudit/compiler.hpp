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
#include <utility>
#include <vector>

#include "qudit/circuit.hpp"
#include "qudit/core.hpp"
#include "qudit/native_gates.hpp"

namespace qudit {

/// Undirected graph of level pairs that can be driven directly on one site.
class CouplingGraph {
 public:
  /// Throws std::invalid_argument if the graph does not connect 0..d-1.
  CouplingGraph(int d, std::vector<std::pair<int, int>> edges);

  static CouplingGraph ladder(int d);
  static CouplingGraph complete(int d);
  /// Native S <-> D transitions of the first d levels of a level map.
  static CouplingGraph native(const LevelMap& map, int d);

  int dim() const { return d_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  bool connected_pair(int i, int j) const;
  const std::vector<int>& neighbors(int i) const { return adj_.at(i); }

 private:
  int d_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
};

/// Phases of the diagonal remainder: gammas[e] drives the e-th tree edge,
/// gamma is the global phase. For the ladder edges[e] = (e, e + 1).
struct PhaseSolution {
  std::vector<std::pair<int, int>> edges;
  std::vector<double> gammas;
  double gamma = 0.0;
};

/// Solve arg D_k = gamma + gamma_k / 2 - gamma_{k-1} / 2 on the ladder.
PhaseSolution solve_diagonal_phases(std::span<const double> diag_args);
/// Same system over an arbitrary spanning tree. Each edge (a, b) adds
/// +gamma_e / 2 to level a and -gamma_e / 2 to level b.
PhaseSolution solve_tree_phases(std::span<const double> diag_args,
                                const std::vector<std::pair<int, int>>& tree);

/// Three rotations (time order) realising diag(e^{i gamma/2}, e^{-i gamma/2})
/// on levels (i, j).
std::vector<TwoLevelRotation> synth_phase_gate(int i, int j, double gamma);
/// Three rotations (time order) realising diag(e^{-i theta/2}, e^{i theta/2}).
std::vector<TwoLevelRotation> euler_z(int i, int j, double theta);

/// Called after every nulling step of the elimination with the rotated
/// matrix and the level just eliminated.
using EliminationObserver = std::function<void(const Matrix&, int pivot)>;

struct Decomposition {
  PulseSequence sequence;
  PhaseSolution phases;
  double stripped_phase = 0.0;  // U = e^{i stripped_phase} * U_SU(d)
  int givens_rotations = 0;
  int phase_rotations = 0;
};

/// Givens-type decomposition into two-level rotations allowed by `coupling`,
/// followed by phase gates for the diagonal remainder.
Decomposition decompose_su_d_detailed(const UnitaryOp& u,
                                      const CouplingGraph& coupling,
                                      const EliminationObserver& observer = {});
PulseSequence decompose_su_d(const UnitaryOp& u, const CouplingGraph& coupling);

/// MS gate followed by Stark shifts so that basis states with a spectator
/// site pick up no phase.
PulseSequence phase_compensated_ms(int i, int j, double theta, double phi,
                                   int d);

struct ControlOptions {
  int aux = -1;  // auxiliary level on the control site; -1 selects d
  int control_site = 0;
  int target_site = 1;
};

/// |c><c| (x) R^{p,q}(theta, phi) + (1 - |c><c|) (x) 1 on two d-level sites.
PulseSequence controlled_rotation(int c, std::pair<int, int> subspace,
                                  double theta, double phi, int d,
                                  ControlOptions opts = {});

enum class CexConstruction {
  /// One controlled R(pi) plus a phase on |c>: two MS(pi/2)-equivalents.
  /// Exact on {c, c'} x {t1, t2}; target spectator levels pick up a phase i
  /// when the control is |c> and d > 2.
  kControlledPi,
  /// Controlled 2 pi rotation using a spare target level: four
  /// MS(pi/2)-equivalents, exact on the full space.
  kExact,
};

PulseSequence synth_cex(int c, int t1, int t2, int d, ControlOptions opts = {},
                        CexConstruction construction =
                            CexConstruction::kControlledPi);
/// Increment of the target conditioned on control level `control`.
PulseSequence synth_controlled_increment(int control, int d,
                                         ControlOptions opts = {});
PulseSequence synth_cinc(int d, ControlOptions opts = {});
PulseSequence synth_csum(int d, ControlOptions opts = {});

struct ResourceCount {
  int rotations = 0;
  double ms_pi_half_equivalents = 0.0;
  int stark_pulses = 0;
  int ms_gates = 0;
  int library_gates = 0;
};

ResourceCount count_resources(const PulseSequence& seq);

/// Commute Stark phases forward through rotations as frame changes. Phases
/// that cannot pass an MS gate or library gate are emitted right before it.
PulseSequence absorb_phases(const PulseSequence& seq);

/// Re-express rotations with the manifold sign of each level pair. Matrices
/// are unchanged. Throws NotNativeError for non-addressable pairs.
PulseSequence to_physical_frame(const PulseSequence& seq, const LevelMap& map);

/// Wrap an angle into (-pi, pi].
double wrap_angle(double a);

}  // namespace qudit
