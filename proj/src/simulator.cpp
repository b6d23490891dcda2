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

#include "qudit/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>


namespace qudit {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

// Digits of a register index, site 0 most significant.
std::vector<int> digits(int index, std::span<const int> dims) {
  std::vector<int> out(dims.size());
  for (int s = static_cast<int>(dims.size()) - 1; s >= 0; --s) {
    out[s] = index % dims[s];
    index /= dims[s];
  }
  return out;
}

int undigits(const std::vector<int>& levels, std::span<const int> dims) {
  int index = 0;
  for (std::size_t s = 0; s < dims.size(); ++s) index = index * dims[s] + levels[s];
  return index;
}

// X^a Z^b on any dimension, including composite spaces of several sites.
Matrix shift_clock(int d, int a, int b) {
  Matrix w = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) w((k + a) % d, k) = std::polar(1.0, 2.0 * kPi * b * k / d);
  return w;
}

}  // namespace

std::vector<Matrix> depolarizing_kraus(int d, double p) {
  check_probability(p, "depolarizing probability");
  std::vector<Matrix> out;
  out.push_back(std::sqrt(1.0 - p + p / (d * d)) * Matrix::Identity(d, d));
  if (p == 0.0) return out;
  const double w = std::sqrt(p) / d;
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      if (a == 0 && b == 0) continue;
      out.push_back(w * shift_clock(d, a, b));
    }
  }
  return out;
}

double depolarizing_from_error_rate(double r, int d) {
  const double p = r * d / (d - 1.0);
  check_probability(p, "depolarizing probability");
  return p;
}

std::vector<Matrix> dephasing_kraus(int d, double rate, double t) {
  if (!(rate >= 0.0) || !(t >= 0.0)) {
    throw std::invalid_argument("dephasing rate and time must be non-negative");
  }
  const double q = std::exp(-rate * t);
  std::vector<Matrix> out;
  out.push_back(std::sqrt(q) * Matrix::Identity(d, d));
  if (q == 1.0) return out;
  for (int k = 0; k < d; ++k) {
    Matrix proj = Matrix::Zero(d, d);
    proj(k, k) = std::sqrt(1.0 - q);
    out.push_back(proj);
  }
  return out;
}

std::vector<Matrix> amplitude_decay_kraus(int d, double tau1, double t,
                                          const LevelMap& map) {
  if (!(tau1 > 0.0) || !(t >= 0.0)) {
    throw std::invalid_argument("lifetime must be positive and time non-negative");
  }
  if (d > map.size()) throw DimensionError("site has more levels than the level map");
  const double gamma = 1.0 - std::exp(-t / tau1);
  Matrix k0 = Matrix::Identity(d, d);
  std::vector<Matrix> out;
  std::vector<Matrix> jumps;
  for (int k = 0; k < d; ++k) {
    if (map.in_s_manifold(k)) continue;
    k0(k, k) = std::sqrt(1.0 - gamma);
    if (gamma == 0.0) continue;
    const int target = map.level(k).m > 0 && d > 2 ? 2 : 0;
    Matrix jump = Matrix::Zero(d, d);
    jump(target, k) = std::sqrt(gamma);
    jumps.push_back(jump);
  }
  out.push_back(k0);
  out.insert(out.end(), jumps.begin(), jumps.end());
  return out;
}

void check_channel(std::span<const Matrix> kraus, int d) {
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& k : kraus) {
    if (k.rows() != d || k.cols() != d) throw DimensionError("Kraus operator size");
    sum += k.adjoint() * k;
  }
  if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol::kAlgebraic) {
    throw InvariantError("channel is not trace preserving");
  }
  const ChoiOperator choi = choi_of_kraus(kraus);
  if (min_eigenvalue(choi.matrix()) < -tol::kPsd) {
    throw InvariantError("channel is not completely positive");
  }
}

Matrix apply_local_kraus(const Matrix& rho, std::span<const Matrix> kraus,
                         std::span<const int> sites, std::span<const int> dims) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus) {
    const Matrix full = embed(k, sites, std::vector<int>(dims.begin(), dims.end()));
    out += full * rho * full.adjoint();
  }
  return out;
}

Matrix depolarize(const Matrix& rho, double p, std::span<const int> sites,
                  std::span<const int> dims) {
  check_probability(p, "depolarizing probability");
  if (p == 0.0) return rho;
  const int n = static_cast<int>(rho.rows());
  std::vector<bool> in_set(dims.size(), false);
  int d_set = 1;
  for (int s : sites) {
    in_set.at(s) = true;
    d_set *= dims[s];
  }
  // Complement key of every register index; the reduced state lives on it.
  std::vector<int> key(n);
  std::vector<int> comp_dims;
  for (std::size_t s = 0; s < dims.size(); ++s) {
    if (!in_set[s]) comp_dims.push_back(dims[s]);
  }
  for (int x = 0; x < n; ++x) {
    const auto dx = digits(x, dims);
    std::vector<int> c;
    for (std::size_t s = 0; s < dims.size(); ++s) {
      if (!in_set[s]) c.push_back(dx[s]);
    }
    key[x] = undigits(c, comp_dims);
  }
  std::vector<int> set_index(n);
  for (int x = 0; x < n; ++x) {
    const auto dx = digits(x, dims);
    int idx = 0;
    for (std::size_t s = 0; s < dims.size(); ++s) {
      if (in_set[s]) idx = idx * dims[s] + dx[s];
    }
    set_index[x] = idx;
  }
  const int d_comp = n / d_set;
  Matrix reduced = Matrix::Zero(d_comp, d_comp);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (set_index[x] == set_index[y]) reduced(key[x], key[y]) += rho(x, y);
    }
  }
  Matrix out = (1.0 - p) * rho;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (set_index[x] == set_index[y]) out(x, y) += p * reduced(key[x], key[y]) / double(d_set);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

void NoiseModel::validate() const {
  check_probability(pulse_depolarizing, "pulse depolarizing probability");
  check_probability(ms_depolarizing, "MS depolarizing probability");
  if (!(dephasing_rate >= 0.0)) throw std::invalid_argument("dephasing rate must be >= 0");
  if (!(tau1 > 0.0)) throw std::invalid_argument("tau1 must be positive");
  for (double t : {durations.rotation, durations.ms, durations.stark, durations.library}) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("durations must be finite and non-negative");
    }
  }
  const int d = 3;
  check_channel(depolarizing_kraus(d, pulse_depolarizing), d);
  check_channel(depolarizing_kraus(d * d, ms_depolarizing), d * d);
  check_channel(dephasing_kraus(d, dephasing_rate, durations.ms), d);
  if (std::isfinite(tau1)) check_channel(amplitude_decay_kraus(d, tau1, durations.ms), d);
}

bool NoiseModel::noiseless() const {
  return pulse_depolarizing == 0.0 && ms_depolarizing == 0.0 &&
         dephasing_rate == 0.0 && !std::isfinite(tau1);
}

// ---------------------------------------------------------------------------

QuditState run_pure(const Circuit& c, const QuditState& input) {
  c.validate();
  if (input.dims() != c.dims) throw DimensionError("state dims do not match circuit");
  Vector psi = input.amplitudes();
  for (const auto& op : c.ops) psi = instruction_unitary(op, c.dims) * psi;
  return QuditState(c.dims, psi);
}

QuditState run_pure(const PulseSequence& seq, const QuditState& input) {
  if (input.dims() == seq.circuit.dims) return run_pure(seq.circuit, input);
  const auto& dims = seq.circuit.dims;
  if (input.dims().size() != dims.size() ||
      std::any_of(input.dims().begin(), input.dims().end(),
                  [&](int d) { return d != seq.logical_dim; })) {
    throw DimensionError("state dims match neither the register nor the logical space");
  }
  // Lift logical amplitudes into the register, run, and project back.
  const int n = input.dimension();
  const int full = total_dimension(dims);
  Vector lifted = Vector::Zero(full);
  std::vector<int> map(n);
  for (int x = 0; x < n; ++x) {
    map[x] = undigits(digits(x, input.dims()), dims);
    lifted(map[x]) = input.amplitudes()(x);
  }
  const QuditState out = run_pure(seq.circuit, QuditState(dims, lifted));
  Vector back(n);
  for (int x = 0; x < n; ++x) back(x) = std::exp(kI * seq.global_phase) * out.amplitudes()(map[x]);
  return QuditState(input.dims(), back);
}

DensityState run_noisy(const Circuit& c, const DensityState& input,
                       const NoiseModel& noise) {
  noise.validate();
  c.validate();
  if (input.dims() != c.dims) throw DimensionError("state dims do not match circuit");
  const auto& dims = c.dims;
  Matrix rho = input.matrix();
  for (const auto& op : c.ops) {
    const Matrix u = instruction_unitary(op, dims);
    rho = u * rho * u.adjoint();
    const auto sites = instruction_sites(op);
    double duration = noise.durations.library;
    if (std::holds_alternative<RotationOp>(op) || std::holds_alternative<StarkOp>(op)) {
      rho = depolarize(rho, noise.pulse_depolarizing, sites, dims);
      duration = std::holds_alternative<RotationOp>(op) ? noise.durations.rotation
                                                        : noise.durations.stark;
    } else if (std::holds_alternative<MSOp>(op)) {
      rho = depolarize(rho, noise.ms_depolarizing, sites, dims);
      duration = noise.durations.ms;
    }
    if (duration <= 0.0) continue;
    for (int s = 0; s < static_cast<int>(dims.size()); ++s) {
      const std::vector<int> site{s};
      if (noise.dephasing_rate > 0.0) {
        rho = apply_local_kraus(rho, dephasing_kraus(dims[s], noise.dephasing_rate, duration),
                                site, dims);
      }
      if (std::isfinite(noise.tau1)) {
        rho = apply_local_kraus(rho, amplitude_decay_kraus(dims[s], noise.tau1, duration),
                                site, dims);
      }
    }
  }
  rho = 0.5 * (rho + rho.adjoint());
  return DensityState(dims, rho);
}

// ---------------------------------------------------------------------------

ReadoutModel ideal_readout() {
  ReadoutModel m;
  m.tau1 = std::numeric_limits<double>::infinity();
  m.discrimination = [](double) { return Discrimination{}; };
  return m;
}

std::vector<ShotRecord> sample_readout(const DensityState& state,
                                       const ReadoutModel& readout,
                                       std::uint64_t seed, int shots) {
  readout.validate();
  if (shots < 0) throw std::invalid_argument("shots must be non-negative");
  const auto& dims = state.dims();
  for (int d : dims) {
    if (d > QuditDim::kMax - 1) {
      throw DimensionError("readout needs one unoccupied level per ion");
    }
  }
  const Discrimination disc = readout.discrimination(readout.t_detect);
  RealVector pops = state.populations();
  std::vector<double> weights(pops.size());
  for (int k = 0; k < pops.size(); ++k) weights[k] = std::max(0.0, pops(k));

  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> born(weights.begin(), weights.end());
  std::exponential_distribution<double> decay(
      std::isfinite(readout.tau1) ? 1.0 / readout.tau1 : 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int rounds = *std::max_element(dims.begin(), dims.end()) - 1;
  const double period = readout.t_detect + readout.t_cool;

  std::vector<ShotRecord> out;
  out.reserve(shots);
  const int n_sites = static_cast<int>(dims.size());
  for (int shot = 0; shot < shots; ++shot) {
    const auto levels = digits(born(rng), dims);
    // Decay time of each ion while shelved, infinity if it survives.
    std::vector<double> decay_time(n_sites, std::numeric_limits<double>::infinity());
    for (int s = 0; s < n_sites; ++s) {
      const int k = levels[s];
      if (k == 0 || !std::isfinite(readout.tau1)) continue;
      const double exposure =
          readout.t_shelve + (k == dims[s] - 1
                                  ? (dims[s] - 1) * readout.t_detect + (dims[s] - 2) * readout.t_cool
                                  : k * period);
      const double t = decay(rng);
      if (t < exposure) decay_time[s] = t;
    }
    ShotRecord rec;
    rec.outcome.assign(n_sites, -1);
    for (int j = 0; j < rounds; ++j) {
      const double window_end = readout.t_shelve + j * period + readout.t_detect;
      std::vector<bool> bright(n_sites, false);
      for (int s = 0; s < n_sites; ++s) {
        if (rec.outcome[s] >= 0) {
          bright[s] = true;
          continue;
        }
        if (j > dims[s] - 2) continue;
        const bool physical = levels[s] == j || decay_time[s] < window_end;
        bright[s] = physical ? unit(rng) >= disc.bright_error : unit(rng) < disc.dark_error;
        if (bright[s]) rec.outcome[s] = j;
      }
      rec.timeline.push_back(bright);
      bool done = true;
      for (int s = 0; s < n_sites; ++s) {
        if (rec.outcome[s] < 0 && j < dims[s] - 2) done = false;
      }
      if (done) break;
    }
    for (int s = 0; s < n_sites; ++s) {
      if (rec.outcome[s] < 0) rec.outcome[s] = dims[s] - 1;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace qudit
