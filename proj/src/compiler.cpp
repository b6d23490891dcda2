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

#include "qudit/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>

namespace qudit {

namespace {

constexpr double kGivensZero = 1e-12;
constexpr double kAngleZero = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool angle_is_zero(double a, double period) {
  return std::abs(std::remainder(a, period)) < kAngleZero;
}

void check_level(int level, int d, const char* what) {
  if (level < 0 || level >= d) {
    throw std::invalid_argument(std::string(what) + " level out of range");
  }
}

// Vertices reachable from `start` inside `active`, skipping `removed`.
int reachable_count(const CouplingGraph& g, const std::vector<bool>& active,
                    int start, int removed) {
  std::vector<bool> seen(g.dim(), false);
  std::deque<int> queue{start};
  seen[start] = true;
  int count = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    ++count;
    for (int w : g.neighbors(v)) {
      if (active[w] && w != removed && !seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  return count;
}

// Apply R^{i,j}(theta, phi) from the left to rows i and j of w.
void apply_rotation_rows(Matrix& w, const TwoLevelRotation& r) {
  const Eigen::Matrix2cd b =
      rotation_block(r.theta, r.phi, r.manifold_sign);
  for (Eigen::Index col = 0; col < w.cols(); ++col) {
    const Complex x = w(r.i, col);
    const Complex y = w(r.j, col);
    w(r.i, col) = b(0, 0) * x + b(0, 1) * y;
    w(r.j, col) = b(1, 0) * x + b(1, 1) * y;
  }
}

TwoLevelRotation dagger(const TwoLevelRotation& r) {
  TwoLevelRotation out = r;
  out.phi = wrap_angle(r.phi + kPi);
  return out;
}

void push_rotations(std::vector<Instruction>& ops, int site,
                    const std::vector<TwoLevelRotation>& rs) {
  for (const auto& r : rs) ops.push_back(RotationOp{site, r});
}

void push_rotation(std::vector<Instruction>& ops, int site, int i, int j,
                   double theta, double phi) {
  ops.push_back(RotationOp{site, TwoLevelRotation{i, j, theta, phi, +1}});
}

struct SiteLayout {
  int control = 0;
  int target = 1;
  int shelf = 0;  // auxiliary level used to park a control level
  int levels = 0;  // levels per site including auxiliaries
};

SiteLayout layout_for(int d, const ControlOptions& opts, int extra_levels) {
  SiteLayout l;
  l.control = opts.control_site;
  l.target = opts.target_site;
  if ((l.control != 0 && l.control != 1) ||
      (l.target != 0 && l.target != 1) || l.control == l.target) {
    throw std::invalid_argument("control and target must be sites 0 and 1");
  }
  l.shelf = opts.aux < 0 ? d + extra_levels : opts.aux;
  if (l.shelf < d + extra_levels) {
    throw std::invalid_argument("auxiliary level collides with an occupied level");
  }
  l.levels = l.shelf + 1;
  if (l.levels > QuditDim::kMax) {
    throw std::invalid_argument("no free auxiliary level for this dimension");
  }
  return l;
}

// |c><c| (x) R^{p,q}(theta, phi) on the target; ops appended in time order.
void append_controlled_rotation(std::vector<Instruction>& ops,
                                const SiteLayout& l, int c, int p, int q,
                                double theta, double phi) {
  if (p == l.shelf || q == l.shelf || c == l.shelf) {
    throw std::invalid_argument("auxiliary level collides with an occupied level");
  }
  const int ctl = l.control;
  const bool move = c != q;
  if (move) push_rotation(ops, ctl, c, q, kPi, 0.0);
  push_rotation(ops, ctl, p, l.shelf, kPi, 0.0);

  push_rotation(ops, ctl, p, q, kPi / 2, wrap_angle(phi - kPi / 2));
  MSGateSpec ms{p, q, theta, phi, ctl, l.target, +1, +1};
  ops.push_back(MSOp{ms});
  for (int site : {ctl, l.target}) {
    ops.push_back(StarkOp{site, StarkPhaseGate{p, -theta / 4}});
    ops.push_back(StarkOp{site, StarkPhaseGate{q, -theta / 4}});
  }
  push_rotation(ops, ctl, p, q, kPi / 2, wrap_angle(phi + kPi / 2));

  push_rotation(ops, ctl, p, l.shelf, -kPi, 0.0);
  if (move) push_rotation(ops, ctl, c, q, -kPi, 0.0);
}

// Phase on control level c such that the controlled block becomes exact:
// multiplies |c> by 1/lambda using an Euler-form Z on (c, shelf).
void append_control_phase(std::vector<Instruction>& ops, const SiteLayout& l,
                          int c, Complex lambda) {
  const double arg = std::arg(lambda);
  if (angle_is_zero(arg, 2 * kPi)) return;
  push_rotations(ops, l.control, euler_z(c, l.shelf, 2 * arg));
}

}  // namespace

double wrap_angle(double a) {
  double w = std::remainder(a, 2 * kPi);
  if (w <= -kPi) w += 2 * kPi;
  return w;
}

// ---------------------------------------------------------------------------
// CouplingGraph

CouplingGraph::CouplingGraph(int d, std::vector<std::pair<int, int>> edges)
    : d_(QuditDim(d)), adj_(d) {
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= d || j >= d || i == j) {
      throw std::invalid_argument("invalid coupling edge");
    }
    if (std::find(adj_[i].begin(), adj_[i].end(), j) != adj_[i].end()) continue;
    adj_[i].push_back(j);
    adj_[j].push_back(i);
    edges_.emplace_back(i, j);
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
  std::vector<bool> all(d, true);
  if (reachable_count(*this, all, 0, -1) != d) {
    throw std::invalid_argument("coupling graph is not connected");
  }
}

CouplingGraph CouplingGraph::ladder(int d) {
  std::vector<std::pair<int, int>> e;
  for (int k = 0; k + 1 < d; ++k) e.emplace_back(k, k + 1);
  return CouplingGraph(d, std::move(e));
}

CouplingGraph CouplingGraph::complete(int d) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) e.emplace_back(i, j);
  }
  return CouplingGraph(d, std::move(e));
}

CouplingGraph CouplingGraph::native(const LevelMap& map, int d) {
  if (d > map.size()) throw DimensionError("level map too small");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (map.is_native(i, j)) e.emplace_back(i, j);
    }
  }
  return CouplingGraph(d, std::move(e));
}

bool CouplingGraph::connected_pair(int i, int j) const {
  const auto& a = adj_.at(i);
  return std::binary_search(a.begin(), a.end(), j);
}

// ---------------------------------------------------------------------------
// Phases

PhaseSolution solve_tree_phases(std::span<const double> diag_args,
                                const std::vector<std::pair<int, int>>& tree) {
  const int d = static_cast<int>(diag_args.size());
  if (static_cast<int>(tree.size()) != d - 1) {
    throw std::invalid_argument("phase tree must have d - 1 edges");
  }
  PhaseSolution sol;
  sol.edges = tree;
  sol.gammas.assign(tree.size(), 0.0);
  double sum = 0.0;
  for (double a : diag_args) sum += a;
  sol.gamma = sum / d;

  std::vector<double> residual(d);
  for (int k = 0; k < d; ++k) residual[k] = diag_args[k] - sol.gamma;
  std::vector<int> degree(d, 0);
  for (auto [a, b] : tree) {
    ++degree[a];
    ++degree[b];
  }
  std::vector<bool> solved(tree.size(), false);
  for (std::size_t round = 0; round < tree.size(); ++round) {
    // Peel one leaf: its only unsolved edge is fixed by its residual.
    for (std::size_t e = 0; e < tree.size(); ++e) {
      if (solved[e]) continue;
      auto [a, b] = tree[e];
      int leaf = degree[a] == 1 ? a : (degree[b] == 1 ? b : -1);
      if (leaf < 0) continue;
      const double g = leaf == a ? 2 * residual[a] : -2 * residual[b];
      sol.gammas[e] = g;
      residual[a] -= g / 2;
      residual[b] += g / 2;
      --degree[a];
      --degree[b];
      solved[e] = true;
      break;
    }
  }
  if (std::find(solved.begin(), solved.end(), false) != solved.end()) {
    throw std::invalid_argument("phase edges do not form a tree");
  }
  return sol;
}

PhaseSolution solve_diagonal_phases(std::span<const double> diag_args) {
  std::vector<std::pair<int, int>> tree;
  for (int k = 0; k + 1 < static_cast<int>(diag_args.size()); ++k) {
    tree.emplace_back(k, k + 1);
  }
  return solve_tree_phases(diag_args, tree);
}

std::vector<TwoLevelRotation> synth_phase_gate(int i, int j, double gamma) {
  return {TwoLevelRotation{i, j, kPi / 2, 0.0, +1},
          TwoLevelRotation{i, j, gamma, kPi / 2, +1},
          TwoLevelRotation{i, j, kPi / 2, kPi, +1}};
}

std::vector<TwoLevelRotation> euler_z(int i, int j, double theta) {
  return {TwoLevelRotation{i, j, kPi / 2, kPi / 2, +1},
          TwoLevelRotation{i, j, theta, 0.0, +1},
          TwoLevelRotation{i, j, kPi / 2, -kPi / 2, +1}};
}

// ---------------------------------------------------------------------------
// Single-qudit decomposition

Decomposition decompose_su_d_detailed(const UnitaryOp& u,
                                      const CouplingGraph& coupling,
                                      const EliminationObserver& observer) {
  const int d = u.dimension();
  if (coupling.dim() != d) {
    throw DimensionError("coupling graph dimension does not match unitary");
  }
  Decomposition out;
  const Complex det = u.matrix().determinant();
  out.stripped_phase = std::arg(det) / d;
  Matrix w = u.matrix() * std::exp(-kI * out.stripped_phase);

  std::vector<bool> active(d, true);
  std::vector<TwoLevelRotation> nulling;
  for (int remaining = d; remaining > 1; --remaining) {
    // Pivot: smallest active level whose removal keeps the rest connected.
    int v = -1;
    int other = -1;
    for (int cand = 0; cand < d && v < 0; ++cand) {
      if (!active[cand]) continue;
      other = -1;
      for (int k = 0; k < d; ++k) {
        if (active[k] && k != cand) {
          other = k;
          break;
        }
      }
      if (reachable_count(coupling, active, other, cand) == remaining - 1) {
        v = cand;
      }
    }

    // Breadth-first tree rooted at the pivot over active levels.
    std::vector<int> parent(d, -1), depth(d, -1), order;
    std::deque<int> queue{v};
    depth[v] = 0;
    while (!queue.empty()) {
      const int x = queue.front();
      queue.pop_front();
      for (int y : coupling.neighbors(x)) {
        if (active[y] && depth[y] < 0) {
          depth[y] = depth[x] + 1;
          parent[y] = x;
          order.push_back(y);
          queue.push_back(y);
        }
      }
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return depth[a] != depth[b] ? depth[a] > depth[b] : a > b;
    });

    for (int row : order) {
      const int up = parent[row];
      const Complex a = w(up, v);
      const Complex b = w(row, v);
      if (std::abs(b) < kGivensZero) {
        w(row, v) = 0.0;
        continue;
      }
      TwoLevelRotation r{up, row, 2 * std::atan2(std::abs(b), std::abs(a)),
                         wrap_angle(std::arg(b) - std::arg(a) - kPi / 2), +1};
      apply_rotation_rows(w, r);
      w(row, v) = 0.0;
      nulling.push_back(r);
    }
    if (observer) observer(w, v);
    active[v] = false;
  }

  // Diagonal remainder realised on a spanning tree rooted at level 0.
  std::vector<std::pair<int, int>> tree;
  {
    std::vector<bool> seen(d, false);
    std::deque<int> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
      const int x = queue.front();
      queue.pop_front();
      for (int y : coupling.neighbors(x)) {
        if (!seen[y]) {
          seen[y] = true;
          tree.emplace_back(x, y);
          queue.push_back(y);
        }
      }
    }
  }
  std::vector<double> args(d);
  for (int k = 0; k < d; ++k) args[k] = std::arg(w(k, k));
  out.phases = solve_tree_phases(args, tree);

  auto& ops = out.sequence.circuit.ops;
  out.sequence.circuit.dims = {d};
  out.sequence.logical_dim = d;
  out.sequence.global_phase = out.stripped_phase + out.phases.gamma;
  for (std::size_t e = 0; e < tree.size(); ++e) {
    const double g = out.phases.gammas[e];
    if (angle_is_zero(g, 4 * kPi)) continue;
    push_rotations(ops, 0, synth_phase_gate(tree[e].first, tree[e].second, g));
    out.phase_rotations += 3;
  }
  for (auto it = nulling.rbegin(); it != nulling.rend(); ++it) {
    ops.push_back(RotationOp{0, dagger(*it)});
  }
  out.givens_rotations = static_cast<int>(nulling.size());
  return out;
}

PulseSequence decompose_su_d(const UnitaryOp& u, const CouplingGraph& coupling) {
  return decompose_su_d_detailed(u, coupling).sequence;
}

// ---------------------------------------------------------------------------
// Two-qudit synthesis

PulseSequence phase_compensated_ms(int i, int j, double theta, double phi,
                                   int d) {
  QuditDim checked(d);
  check_level(i, d, "MS");
  check_level(j, d, "MS");
  if (i == j) throw std::invalid_argument("MS levels must differ");
  PulseSequence seq;
  seq.circuit.dims = {d, d};
  seq.logical_dim = d;
  seq.circuit.ops.push_back(MSOp{MSGateSpec{i, j, theta, phi, 0, 1, +1, +1}});
  for (int site : {0, 1}) {
    seq.circuit.ops.push_back(StarkOp{site, StarkPhaseGate{i, -theta / 4}});
    seq.circuit.ops.push_back(StarkOp{site, StarkPhaseGate{j, -theta / 4}});
  }
  return seq;
}

PulseSequence controlled_rotation(int c, std::pair<int, int> subspace,
                                  double theta, double phi, int d,
                                  ControlOptions opts) {
  QuditDim checked(d);
  auto [p, q] = subspace;
  check_level(c, d, "control");
  check_level(p, d, "subspace");
  check_level(q, d, "subspace");
  if (p == q) throw std::invalid_argument("subspace levels must differ");
  const SiteLayout l = layout_for(d, opts, 0);
  PulseSequence seq;
  seq.circuit.dims = {l.levels, l.levels};
  seq.logical_dim = d;
  append_controlled_rotation(seq.circuit.ops, l, c, p, q, theta, phi);
  return seq;
}

PulseSequence synth_cex(int c, int t1, int t2, int d, ControlOptions opts,
                        CexConstruction construction) {
  QuditDim checked(d);
  check_level(c, d, "control");
  check_level(t1, d, "target");
  check_level(t2, d, "target");
  if (t1 == t2) throw std::invalid_argument("CEX target levels must differ");

  PulseSequence seq;
  auto& ops = seq.circuit.ops;
  seq.logical_dim = d;
  if (construction == CexConstruction::kControlledPi) {
    // |c><c| (x) R(pi, 0) = -i X on the pair; the -i is moved onto |c>.
    const SiteLayout l = layout_for(d, opts, 0);
    seq.circuit.dims = {l.levels, l.levels};
    append_controlled_rotation(ops, l, c, t1, t2, kPi, 0.0);
    append_control_phase(ops, l, c, Complex(0.0, -1.0));
    return seq;
  }

  // Exact variant: the exchange is 1 - 2|-><-| on the pair, completed to a
  // full 2 pi rotation with a spare target level that is never populated.
  const SiteLayout l = layout_for(d, opts, 1);
  const int spare = d;
  seq.circuit.dims = {l.levels, l.levels};
  push_rotation(ops, l.target, t1, t2, kPi / 2, -kPi / 2);
  append_controlled_rotation(ops, l, c, t2, spare, 2 * kPi, 0.0);
  push_rotation(ops, l.target, t1, t2, kPi / 2, kPi / 2);
  return seq;
}

PulseSequence synth_controlled_increment(int control, int d,
                                         ControlOptions opts) {
  QuditDim checked(d);
  check_level(control, d, "control");
  const SiteLayout l = layout_for(d, opts, 0);
  PulseSequence seq;
  seq.circuit.dims = {l.levels, l.levels};
  seq.logical_dim = d;

  // Transposition chain (d-2, d-1), ..., (0, 1) in time order. The phase
  // pi/2 + pi/d for even d makes the product proportional to X_d.
  const double phi = d % 2 == 1 ? kPi / 2 : kPi / 2 + kPi / d;
  Matrix chain = Matrix::Identity(d, d);
  for (int k = d - 2; k >= 0; --k) {
    append_controlled_rotation(seq.circuit.ops, l, control, k, k + 1, kPi,
                               phi);
    chain = rotation_matrix(TwoLevelRotation{k, k + 1, kPi, phi, +1},
                            QuditDim(d))
                .matrix() *
            chain;
  }
  Matrix shift = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) shift((k + 1) % d, k) = 1.0;
  const Complex lambda = (shift.adjoint() * chain).trace() / double(d);
  append_control_phase(seq.circuit.ops, l, control, lambda);
  return seq;
}

PulseSequence synth_cinc(int d, ControlOptions opts) {
  return synth_controlled_increment(d - 1, d, opts);
}

PulseSequence synth_csum(int d, ControlOptions opts) {
  QuditDim checked(d);
  PulseSequence seq;
  seq.logical_dim = d;
  for (int k = 1; k < d; ++k) {
    const PulseSequence inc = synth_controlled_increment(k, d, opts);
    seq.circuit.dims = inc.circuit.dims;
    seq.global_phase += k * inc.global_phase;
    for (int rep = 0; rep < k; ++rep) {
      seq.circuit.ops.insert(seq.circuit.ops.end(), inc.circuit.ops.begin(),
                             inc.circuit.ops.end());
    }
  }
  return seq;
}

// ---------------------------------------------------------------------------
// Passes

ResourceCount count_resources(const PulseSequence& seq) {
  ResourceCount r;
  for (const auto& op : seq.circuit.ops) {
    std::visit(overloaded{
                   [&](const RotationOp&) { ++r.rotations; },
                   [&](const MSOp& m) {
                     ++r.ms_gates;
                     r.ms_pi_half_equivalents +=
                         std::abs(m.m.theta) / (kPi / 2);
                   },
                   [&](const StarkOp&) { ++r.stark_pulses; },
                   [&](const LibraryGateOp&) { ++r.library_gates; }},
               op);
  }
  return r;
}

PulseSequence absorb_phases(const PulseSequence& seq) {
  const auto& dims = seq.circuit.dims;
  PulseSequence out;
  out.circuit.dims = dims;
  out.logical_dim = seq.logical_dim;
  out.global_phase = seq.global_phase;

  // Pending diagonal e^{i alpha} per site, applied before the remaining ops.
  std::vector<std::vector<double>> alpha(dims.size());
  for (std::size_t s = 0; s < dims.size(); ++s) alpha[s].assign(dims[s], 0.0);

  auto flush = [&](int site) {
    auto& a = alpha[site];
    // Factor out the most common phase so the fewest Stark pulses remain.
    double ref = 0.0;
    int best = -1;
    for (double cand : a) {
      int n = 0;
      for (double x : a) n += angle_is_zero(x - cand, 2 * kPi) ? 1 : 0;
      if (n > best) {
        best = n;
        ref = cand;
      }
    }
    for (int l = 0; l < static_cast<int>(a.size()); ++l) {
      const double rel = wrap_angle(a[l] - ref);
      if (!angle_is_zero(rel, 2 * kPi)) {
        out.circuit.ops.push_back(StarkOp{site, StarkPhaseGate{l, -rel}});
      }
      a[l] = 0.0;
    }
    out.global_phase += ref;
  };

  // R D = D R' with phi' = phi + s (alpha_i - alpha_j).
  auto shifted_phi = [&](int site, int i, int j, double phi, int sign) {
    return wrap_angle(phi + sign * (alpha[site][i] - alpha[site][j]));
  };

  for (const auto& op : seq.circuit.ops) {
    std::visit(
        overloaded{
            [&](const StarkOp& z) {
              alpha[z.site][z.z.level] =
                  wrap_angle(alpha[z.site][z.z.level] - z.z.theta);
            },
            [&](const RotationOp& r) {
              RotationOp moved = r;
              moved.r.phi = shifted_phi(r.site, r.r.i, r.r.j, r.r.phi,
                                        r.r.manifold_sign);
              out.circuit.ops.push_back(moved);
            },
            [&](const MSOp& m) {
              const auto& g = m.m;
              const double pa =
                  shifted_phi(g.site_a, g.i, g.j, g.phi, g.sign_a);
              const double pb =
                  shifted_phi(g.site_b, g.i, g.j, g.phi, g.sign_b);
              MSOp moved = m;
              if (angle_is_zero(pa - pb, 2 * kPi)) {
                moved.m.phi = pa;
              } else {
                flush(g.site_a);
                flush(g.site_b);
              }
              out.circuit.ops.push_back(moved);
            },
            [&](const LibraryGateOp& g) {
              for (int s : g.sites) flush(s);
              out.circuit.ops.push_back(g);
            }},
        op);
  }
  for (int s = 0; s < static_cast<int>(dims.size()); ++s) flush(s);
  return out;
}

PulseSequence to_physical_frame(const PulseSequence& seq, const LevelMap& map) {
  PulseSequence out = seq;
  auto resign = [&](int i, int j, int old_sign, double& phi) {
    if (std::max(i, j) >= map.size() || !map.is_native(i, j)) {
      throw NotNativeError("levels " + std::to_string(i) + "," +
                           std::to_string(j) + " are not a native transition");
    }
    const int s = map.manifold_sign(i, j);
    if (s != old_sign) phi = wrap_angle(-phi);
    return s;
  };
  for (auto& op : out.circuit.ops) {
    if (auto* r = std::get_if<RotationOp>(&op)) {
      r->r.manifold_sign =
          resign(r->r.i, r->r.j, r->r.manifold_sign, r->r.phi);
    } else if (auto* m = std::get_if<MSOp>(&op)) {
      if (m->m.sign_a != m->m.sign_b) {
        throw NotNativeError("MS gate with mixed manifold signs");
      }
      const int s = resign(m->m.i, m->m.j, m->m.sign_a, m->m.phi);
      m->m.sign_a = s;
      m->m.sign_b = s;
    }
  }
  return out;
}

}  // namespace qudit
