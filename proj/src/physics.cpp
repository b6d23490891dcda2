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

#include "qudit/physics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qudit {

namespace {

int manifold_sign_of(Manifold m) { return m == Manifold::S ? +1 : -1; }

double level_shift(const StarkModel& m, int level, double delta) {
  double sum = 0.0;
  for (const auto& t : m.transitions) {
    if (t.lower != level && t.upper != level) continue;
    const double gap = delta - t.detuning_hz;
    if (std::abs(gap) <= m.guard_band_hz) {
      std::ostringstream os;
      os << "tone at " << delta << " Hz is within the guard band of transition "
         << t.lower << "<->" << t.upper;
      throw ResonanceError(os.str());
    }
    sum += t.coupling * t.coupling / gap;
  }
  const double scale = m.rabi_hz * m.rabi_hz / 4.0;
  return manifold_sign_of(m.manifolds.at(level)) * scale * (m.background - sum);
}

double level_shift(const StarkModel& m, int level, const ToneSet& tones) {
  double total = 0.0;
  for (const auto& tone : tones) total += tone.weight * level_shift(m, level, tone.detuning_hz);
  return total;
}

void check_tones(const std::vector<double>& detunings) {
  for (std::size_t a = 0; a < detunings.size(); ++a) {
    for (std::size_t b = a + 1; b < detunings.size(); ++b) {
      if (detunings[a] == detunings[b]) {
        throw std::invalid_argument("tone detunings must be distinct");
      }
    }
  }
}

void check_occupied(const StarkModel& m, const std::vector<int>& occupied) {
  for (std::size_t a = 0; a < occupied.size(); ++a) {
    if (occupied[a] < 0 || occupied[a] >= m.levels()) {
      throw std::invalid_argument("occupied level outside the model");
    }
    for (std::size_t b = a + 1; b < occupied.size(); ++b) {
      if (occupied[a] == occupied[b]) {
        throw std::invalid_argument("occupied levels must be distinct");
      }
    }
  }
}

CompensationResult finish(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs,
                          const Eigen::VectorXd& w,
                          const std::vector<double>& detunings,
                          double target_hz) {
  CompensationResult out;
  for (std::size_t k = 0; k < detunings.size(); ++k) {
    out.tones.push_back(Tone{detunings[k], w(k)});
    if (w(k) < 0.0) out.feasible = false;
  }
  out.relative_residual =
      (a * w - rhs).cwiseAbs().maxCoeff() / std::abs(target_hz);
  if (!out.feasible) {
    out.message =
        "solution needs negative intensity; choose different tone detunings";
  }
  return out;
}

}  // namespace

void StarkModel::validate() const {
  if (manifolds.empty()) throw std::invalid_argument("Stark model has no levels");
  for (const auto& t : transitions) {
    if (t.lower < 0 || t.upper < 0 || t.lower >= levels() ||
        t.upper >= levels() || t.lower == t.upper) {
      throw std::invalid_argument("Stark transition references unknown level");
    }
    if (manifolds[t.lower] == manifolds[t.upper]) {
      throw std::invalid_argument("Stark transition must join S and D levels");
    }
  }
  if (!(rabi_hz > 0.0) || !(guard_band_hz >= 0.0)) {
    throw std::invalid_argument("Rabi frequency must be positive");
  }
}

StarkModel StarkModel::illustrative() {
  const LevelMap map = LevelMap::standard();
  // Zeeman splitting at 4 G: mu_B / h = 1.3996 MHz / G.
  const double kappa = 1.3996e6 * 4.0;
  const double g_s = 2.0, g_d = 1.2;
  auto line = [&](const ZeemanSublevel& s, const ZeemanSublevel& dd) {
    return kappa * (g_d * dd.m - g_s * s.m);
  };
  const double reference = line(map.level(0), map.level(1));

  StarkModel m;
  m.rabi_hz = 1.0e5;
  m.background = 2.0e-8;
  for (int l = 0; l < map.size(); ++l) m.manifolds.push_back(map.level(l).manifold);
  for (int s = 0; s < map.size(); ++s) {
    if (!map.in_s_manifold(s)) continue;
    for (int dd = 0; dd < map.size(); ++dd) {
      if (map.in_s_manifold(dd) || !map.is_native(s, dd)) continue;
      const double dm = std::abs(map.level(dd).m - map.level(s).m);
      const double coupling = dm < 0.5 ? 1.0 : (dm < 1.5 ? 0.8 : 0.6);
      m.transitions.push_back(StarkTransition{
          s, dd, line(map.level(s), map.level(dd)) - reference, coupling});
    }
  }
  return m;
}

int gamma_coefficient(const StarkTransition& t, int i, int j) {
  return (t.lower == i || t.lower == j ? 1 : 0) +
         (t.upper == i || t.upper == j ? 1 : 0);
}

std::vector<double> level_shifts(const StarkModel& m, double delta_hz) {
  std::vector<double> out(m.levels());
  for (int l = 0; l < m.levels(); ++l) out[l] = level_shift(m, l, delta_hz);
  return out;
}

double stark_shift(const StarkModel& m, int i, int j, double delta_hz) {
  return level_shift(m, i, delta_hz) - level_shift(m, j, delta_hz);
}

std::vector<double> level_shifts(const StarkModel& m, const ToneSet& tones) {
  std::vector<double> out(m.levels());
  for (int l = 0; l < m.levels(); ++l) out[l] = level_shift(m, l, tones);
  return out;
}

double stark_shift(const StarkModel& m, int i, int j, const ToneSet& tones) {
  return level_shift(m, i, tones) - level_shift(m, j, tones);
}

CompensationResult solve_compensation(const StarkModel& m,
                                      const std::vector<int>& occupied,
                                      const std::vector<double>& tone_detunings,
                                      std::pair<int, int> target,
                                      double target_hz) {
  m.validate();
  check_occupied(m, occupied);
  check_tones(tone_detunings);
  const int n = static_cast<int>(occupied.size());
  if (n < 2) throw std::invalid_argument("need at least two occupied levels");
  if (static_cast<int>(tone_detunings.size()) != n - 1) {
    throw std::invalid_argument("need exactly one tone fewer than occupied levels");
  }
  auto [shifted, reference] = target;
  auto occ = [&](int l) {
    return std::find(occupied.begin(), occupied.end(), l) != occupied.end();
  };
  if (!occ(shifted) || !occ(reference) || shifted == reference) {
    throw std::invalid_argument("target pair must be two occupied levels");
  }
  if (target_hz == 0.0) throw std::invalid_argument("target shift must be nonzero");

  Eigen::MatrixXd a(n - 1, n - 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n - 1);
  int row = 0;
  for (int l : occupied) {
    if (l == shifted || l == reference) continue;
    for (int k = 0; k < n - 1; ++k) {
      a(row, k) = level_shift(m, l, tone_detunings[k]) -
                  level_shift(m, reference, tone_detunings[k]);
    }
    ++row;
  }
  for (int k = 0; k < n - 1; ++k) {
    a(row, k) = level_shift(m, shifted, tone_detunings[k]) -
                level_shift(m, reference, tone_detunings[k]);
  }
  rhs(row) = target_hz;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0 || s(s.size() - 1) < 1e-13 * s(0)) {
    throw std::invalid_argument("compensation system is singular for these tones");
  }
  const Eigen::VectorXd w = svd.solve(rhs);
  return finish(a, rhs, w, tone_detunings, target_hz);
}

CompensationResult solve_manifold_equalization(
    const StarkModel& m, const std::vector<int>& occupied,
    const std::vector<double>& tone_detunings, double target_hz) {
  m.validate();
  check_occupied(m, occupied);
  check_tones(tone_detunings);
  std::vector<int> s_levels, d_levels;
  for (int l : occupied) {
    (m.manifolds[l] == Manifold::S ? s_levels : d_levels).push_back(l);
  }
  if (s_levels.empty() || d_levels.empty() || tone_detunings.empty()) {
    throw std::invalid_argument("need occupied S and D levels and at least one tone");
  }
  const int k_tones = static_cast<int>(tone_detunings.size());
  const int rows = static_cast<int>(occupied.size()) - 1;
  Eigen::MatrixXd a(rows, k_tones);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
  int row = 0;
  for (const auto* group : {&s_levels, &d_levels}) {
    for (std::size_t g = 1; g < group->size(); ++g) {
      for (int k = 0; k < k_tones; ++k) {
        a(row, k) = level_shift(m, (*group)[g], tone_detunings[k]) -
                    level_shift(m, (*group)[0], tone_detunings[k]);
      }
      ++row;
    }
  }
  for (int k = 0; k < k_tones; ++k) {
    a(row, k) = level_shift(m, s_levels[0], tone_detunings[k]) -
                level_shift(m, d_levels[0], tone_detunings[k]);
  }
  rhs(row) = target_hz;
  const Eigen::VectorXd w = a.completeOrthogonalDecomposition().solve(rhs);
  return finish(a, rhs, w, tone_detunings, target_hz);
}

// ---------------------------------------------------------------------------

PulseSequence refocused_rotation(double theta, double phi, int i, int j, int d) {
  QuditDim checked(d);
  PulseSequence seq;
  seq.circuit.dims = {d};
  seq.logical_dim = d;
  auto& ops = seq.circuit.ops;
  ops.push_back(StarkOp{0, StarkPhaseGate{i, kPi}});
  ops.push_back(RotationOp{0, TwoLevelRotation{i, j, -theta / 2, phi, +1}});
  ops.push_back(StarkOp{0, StarkPhaseGate{i, kPi}});
  ops.push_back(RotationOp{0, TwoLevelRotation{i, j, theta / 2, phi, +1}});
  seq.circuit.validate();
  return seq;
}

namespace {
double residual_angle(const Eigen::Matrix2cd& u) {
  const double c = std::min(1.0, std::abs(u.trace()) / 2.0);
  return 2.0 * std::acos(c);
}

Eigen::Matrix2cd stark_block(double alpha) {
  Eigen::Matrix2cd z = Eigen::Matrix2cd::Identity();
  z(0, 0) = std::exp(-kI * alpha);
  return z;
}
}  // namespace

double refocused_neighbor_error(double theta, double phi, double eps) {
  if (theta == 0.0) return 0.0;
  const Eigen::Matrix2cd z = stark_block(eps * eps * kPi);
  const Eigen::Matrix2cd u = rotation_block(eps * theta / 2, phi, 1) * z *
                             rotation_block(-eps * theta / 2, phi, 1) * z;
  return residual_angle(u) / std::abs(theta);
}

double resonant_neighbor_error(double theta, double phi, double eps) {
  if (theta == 0.0) return 0.0;
  return residual_angle(rotation_block(eps * theta, phi, 1)) / std::abs(theta);
}

// ---------------------------------------------------------------------------

namespace {
// P(N < n) and P(N >= n) for N ~ Poisson(mu), summed without cancellation.
std::pair<double, double> poisson_split(double mu, int n) {
  double below = 0.0;
  double term = std::exp(-mu);
  for (int k = 0; k < n; ++k) {
    below += term;
    term *= mu / (k + 1);
  }
  double above = 0.0;
  for (int k = n; k < n + 10000; ++k) {
    above += term;
    if (term < 1e-18 * std::max(above, 1e-300) && k > mu) break;
    term *= mu / (k + 1);
  }
  return {below, above};
}
}  // namespace

int PoissonDiscriminator::threshold_for(double t_detect) const {
  if (threshold >= 0) return threshold;
  const double mu_b = bright_rate * t_detect;
  const double mu_d = dark_rate * t_detect;
  const int upper = static_cast<int>(mu_b + 10 * std::sqrt(mu_b) + 10);
  int best = 1;
  double best_err = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= upper; ++n) {
    const double err = poisson_split(mu_b, n).first + poisson_split(mu_d, n).second;
    if (err < best_err) {
      best_err = err;
      best = n;
    }
  }
  return best;
}

Discrimination PoissonDiscriminator::operator()(double t_detect) const {
  const int n = threshold_for(t_detect);
  return Discrimination{poisson_split(bright_rate * t_detect, n).first,
                        poisson_split(dark_rate * t_detect, n).second};
}

void ReadoutModel::validate() const {
  if (!(tau1 > 0.0) || !(t_detect > 0.0) || !(t_cool >= 0.0) ||
      !(t_shelve >= 0.0)) {
    throw std::invalid_argument("readout times must be positive");
  }
  if (!discrimination) throw std::invalid_argument("missing discrimination model");
}

ReadoutBudget readout_error_budget(const ReadoutModel& m, int d) {
  m.validate();
  QuditDim checked(d);
  const Discrimination disc = m.discrimination(m.t_detect);
  if (disc.bright_error < 0 || disc.bright_error > 1 || disc.dark_error < 0 ||
      disc.dark_error > 1) {
    throw std::invalid_argument("discrimination errors must be probabilities");
  }
  ReadoutBudget b;
  b.total_time = (d - 1) * m.t_detect + (d - 2) * m.t_cool + m.t_shelve;
  for (int k = 0; k < d; ++k) {
    const bool last = k == d - 1;
    double exposure = last ? (d - 1) * m.t_detect + (d - 2) * m.t_cool
                           : k * (m.t_detect + m.t_cool);
    if (k > 0) exposure += m.t_shelve;
    const int dark = last ? d - 1 : k;
    const int bright = last ? 0 : 1;
    const double survive = std::exp(-exposure / m.tau1) *
                           std::pow(1.0 - disc.dark_error, dark) *
                           std::pow(1.0 - disc.bright_error, bright);
    b.exposure.push_back(exposure);
    b.per_state_error.push_back(1.0 - survive);
  }
  b.worst_case = *std::max_element(b.per_state_error.begin(), b.per_state_error.end());
  return b;
}

ReadoutSample sample_readout(const ReadoutModel& m,
                             const PoissonDiscriminator& disc, int d, int shots,
                             std::mt19937_64& rng) {
  if (shots <= 0) throw std::invalid_argument("shots must be positive");
  const ReadoutBudget budget = readout_error_budget(m, d);
  const int threshold = disc.threshold_for(m.t_detect);
  std::poisson_distribution<int> bright(disc.bright_rate * m.t_detect);
  std::poisson_distribution<int> dark(disc.dark_rate * m.t_detect);
  std::exponential_distribution<double> decay(1.0 / m.tau1);

  ReadoutSample out;
  out.shots = shots;
  for (int k = 0; k < d; ++k) {
    int errors = 0;
    for (int s = 0; s < shots; ++s) {
      // A decay while shelved leaves the ion bright too early.
      const bool decayed =
          budget.exposure[k] > 0.0 && decay(rng) < budget.exposure[k];
      int assigned = d - 1;
      for (int j = 0; j < d - 1; ++j) {
        const int counts = j == k ? bright(rng) : dark(rng);
        if (counts >= threshold) {
          assigned = j;
          break;
        }
      }
      if (decayed || assigned != k) ++errors;
    }
    const double p = double(errors) / shots;
    out.per_state_error.push_back(p);
    out.standard_error.push_back(std::sqrt(std::max(p * (1 - p), 1.0 / shots) / shots));
  }
  return out;
}

}  // namespace qudit
