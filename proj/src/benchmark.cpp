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

#include "qudit/benchmark.hpp"

#include <unsupported/Eigen/LevenbergMarquardt>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qudit/compiler.hpp"
#include "qudit/gate_library.hpp"

namespace qudit {

namespace {

// Residuals (A p^x + B - y)/sigma over parameters (A, p[, B]).
struct DecayFunctor : Eigen::DenseFunctor<double> {
  DecayFunctor(const DecayData& d, std::optional<double> floor)
      : Eigen::DenseFunctor<double>(floor ? 2 : 3, static_cast<int>(d.x.size())),
        data(d),
        fixed(floor) {}

  double floor_of(const InputType& v) const { return fixed ? *fixed : v(2); }

  int operator()(const InputType& v, ValueType& f) const {
    for (std::size_t k = 0; k < data.x.size(); ++k) {
      const double model = v(0) * std::pow(v(1), data.x[k]) + floor_of(v);
      f(k) = (model - data.y[k]) / data.sigma[k];
    }
    return 0;
  }

  int df(const InputType& v, JacobianType& j) const {
    for (std::size_t k = 0; k < data.x.size(); ++k) {
      const double x = data.x[k];
      const double s = data.sigma[k];
      j(k, 0) = std::pow(v(1), x) / s;
      j(k, 1) = x == 0.0 ? 0.0 : v(0) * x * std::pow(v(1), x - 1) / s;
      if (!fixed) j(k, 2) = 1.0 / s;
    }
    return 0;
  }

  const DecayData& data;
  std::optional<double> fixed;
};

double initial_rate(const DecayData& d, double floor) {
  // Log-linear fit of y - B over the points that sit above the floor.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < d.x.size(); ++k) {
    const double excess = d.y[k] - floor;
    if (excess <= 1e-12) continue;
    const double ly = std::log(excess);
    sx += d.x[k];
    sy += ly;
    sxx += d.x[k] * d.x[k];
    sxy += d.x[k] * ly;
    ++n;
  }
  const double den = n * sxx - sx * sx;
  if (n < 2 || std::abs(den) < 1e-300) return 0.99;
  const double slope = (n * sxy - sx * sy) / den;
  return std::clamp(std::exp(slope), 1e-3, 1.0);
}

double sample_frequency(double prob, int shots, std::mt19937_64& rng) {
  if (shots == 0) return prob;
  std::binomial_distribution<int> draw(shots, std::clamp(prob, 0.0, 1.0));
  return static_cast<double>(draw(rng)) / shots;
}

}  // namespace

double DecayFit::p_sigma() const { return std::sqrt(std::max(0.0, covariance(1, 1))); }

DecayFit fit_decay(const DecayData& data, std::optional<double> fixed_floor,
                   double floor_guess) {
  const std::size_t n = data.x.size();
  if (data.y.size() != n || data.sigma.size() != n) {
    throw std::invalid_argument("decay data columns differ in length");
  }
  const std::size_t params = fixed_floor ? 2 : 3;
  if (n < params) throw std::invalid_argument("too few points for the decay fit");
  for (double s : data.sigma) {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("sigma must be positive");
  }

  DecayFit out;
  out.floor_fixed = fixed_floor.has_value();
  const double floor = fixed_floor.value_or(floor_guess);

  const auto [lo, hi] = std::minmax_element(data.y.begin(), data.y.end());
  if (*hi - *lo < 1e-12) {
    out.B = floor;
    out.A = data.y.front() - floor;
    out.p = 1.0;
    out.converged = true;
    return out;
  }

  DecayFunctor functor(data, fixed_floor);
  Eigen::VectorXd v(params);
  v(0) = 1.0 - floor;
  v(1) = initial_rate(data, floor);
  if (!fixed_floor) v(2) = floor;
  Eigen::LevenbergMarquardt<DecayFunctor> lm(functor);
  lm.setMaxfev(2000);
  const auto status = lm.minimize(v);
  out.converged = status == Eigen::LevenbergMarquardtSpace::RelativeReductionTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::RelativeErrorTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::RelativeErrorAndReductionTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::CosinusTooSmall;

  out.A = v(0);
  out.p = std::clamp(v(1), 0.0, 1.0);
  out.B = fixed_floor ? *fixed_floor : v(2);

  Eigen::VectorXd res(n);
  functor(v, res);
  out.chi2 = res.squaredNorm();
  Eigen::MatrixXd jac(n, params);
  functor.df(v, jac);
  const Eigen::MatrixXd info = jac.transpose() * jac;
  const Eigen::MatrixXd cov = info.completeOrthogonalDecomposition().pseudoInverse();
  out.covariance.topLeftCorner(params, params) = cov;
  return out;
}

// ---------------------------------------------------------------------------

void RBSequenceSpec::validate() const {
  if (lengths.empty()) throw std::invalid_argument("RB needs at least one length");
  for (int m : lengths) {
    if (m < 0) throw std::invalid_argument("RB lengths must be non-negative");
  }
  if (sequences_per_length < 20) {
    throw std::invalid_argument("RB needs at least 20 sequences per length");
  }
}

std::vector<RBSequence> generate_rb_sequences(const RBSequenceSpec& spec,
                                              const CliffordGroup& group) {
  spec.validate();
  if (group.dim() != spec.dim) throw DimensionError("Clifford group dimension mismatch");
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::size_t> pick(0, group.size() - 1);
  std::vector<RBSequence> out;
  for (int m : spec.lengths) {
    for (int s = 0; s < spec.sequences_per_length; ++s) {
      RBSequence seq{m, {}};
      std::size_t total = group.identity();
      for (int k = 0; k < m; ++k) {
        const std::size_t g = pick(rng);
        seq.elements.push_back(g);
        total = group.compose(g, total);
      }
      seq.elements.push_back(group.inverse(total));
      out.push_back(std::move(seq));
    }
  }
  return out;
}

CompiledCliffords::CompiledCliffords(const CliffordGroup& group)
    : group_(group), cache_(group.size()) {}

const PulseSequence& CompiledCliffords::operator[](std::size_t k) {
  auto& slot = cache_.at(k);
  if (!slot) {
    slot = decompose_su_d(UnitaryOp(group_[k].unitary), CouplingGraph::ladder(group_.dim()));
  }
  return *slot;
}

int CompiledCliffords::pulses(std::size_t k) {
  const auto r = count_resources((*this)[k]);
  return r.rotations + r.stark_pulses;
}

double CompiledCliffords::mean_pulses() {
  double sum = 0.0;
  for (std::size_t k = 0; k < group_.size(); ++k) sum += pulses(k);
  return sum / static_cast<double>(group_.size());
}

double rb_error_per_clifford(double p, int d) { return (1.0 - p) * (d - 1) / d; }

RBResult run_rb(const RBSequenceSpec& spec, const NoiseModel& noise, int shots,
                bool fix_floor) {
  spec.validate();
  noise.validate();
  if (shots < 0) throw std::invalid_argument("shots must be non-negative");
  const int d = spec.dim;
  const CliffordGroup group = enumerate_clifford(d);
  CompiledCliffords compiled(group);
  const auto sequences = generate_rb_sequences(spec, group);

  const std::vector<int> dims{d};
  const int zero[1] = {0};
  const DensityState input = DensityState::from_pure(QuditState::basis(dims, zero));
  const int per_sequence_shots =
      shots == 0 ? 0 : std::max(1, shots / spec.sequences_per_length);
  std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);

  RBResult result;
  for (std::size_t first = 0; first < sequences.size();
       first += spec.sequences_per_length) {
    RBPoint point;
    point.length = sequences[first].length;
    for (int s = 0; s < spec.sequences_per_length; ++s) {
      const auto& seq = sequences[first + s];
      Circuit c{dims, {}};
      Matrix product = Matrix::Identity(d, d);
      for (std::size_t g : seq.elements) {
        const auto& ps = compiled[g];
        if (ps.circuit.dims != dims) throw DimensionError("compiled Clifford uses extra levels");
        c.ops.insert(c.ops.end(), ps.circuit.ops.begin(), ps.circuit.ops.end());
        product = sequence_matrix(ps) * product;
      }
      if (phase_distance(product, Matrix::Identity(d, d)) > 1e-9) {
        throw InvariantError("RB sequence does not compose to the identity");
      }
      const double survival = run_noisy(c, input, noise).matrix()(0, 0).real();
      point.per_sequence.push_back(sample_frequency(survival, per_sequence_shots, rng));
    }
    const auto& v = point.per_sequence;
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size() - 1);
    point.survival = mean;
    const double floor_sigma = shots > 0 ? 1.0 / shots : 1e-9;
    point.sigma = std::max(std::sqrt(var / v.size()), floor_sigma);
    result.points.push_back(std::move(point));
  }

  DecayData data;
  for (const auto& pt : result.points) {
    data.x.push_back(pt.length);
    data.y.push_back(pt.survival);
    data.sigma.push_back(pt.sigma);
  }
  const double floor = 1.0 / d;
  result.fit = fit_decay(data, fix_floor ? std::optional<double>(floor) : std::nullopt, floor);
  result.error_per_clifford = rb_error_per_clifford(result.fit.p, d);
  result.error_per_clifford_sigma = result.fit.p_sigma() * (d - 1) / d;
  result.mean_pulses = compiled.mean_pulses();
  result.error_per_pulse = result.error_per_clifford / result.mean_pulses;
  return result;
}

// ---------------------------------------------------------------------------

int GateDecaySpec::period() const { return gate == DecayGate::kCex ? 2 : 3; }

void GateDecaySpec::validate() const {
  if (repetitions.size() < 2) throw std::invalid_argument("gate decay needs two or more lengths");
  for (int n : repetitions) {
    if (n < 0 || n % period() != 0) {
      throw std::invalid_argument("repetition counts must be non-negative multiples of the period");
    }
  }
  if (fringe_points < 3) throw std::invalid_argument("fringe scan needs at least 3 phases");
  if (!(gate_depolarizing >= 0.0 && gate_depolarizing <= 1.0)) {
    throw std::invalid_argument("gate depolarizing must lie in [0, 1]");
  }
}

PulseSequence decay_gate_sequence(DecayGate gate) {
  return gate == DecayGate::kCex ? synth_cex(1, 0, 1, 3) : synth_cinc(3);
}

std::pair<int, int> decay_input_levels(DecayGate gate) {
  return gate == DecayGate::kCex ? std::pair{0, 1} : std::pair{0, 2};
}

double gate_depolarizing_for_fidelity(double fidelity) {
  if (!(fidelity > 0.0 && fidelity <= 1.0)) {
    throw std::invalid_argument("fidelity must lie in (0, 1]");
  }
  return 1.0 - fidelity;
}

GateDecayResult run_gate_decay(const GateDecaySpec& spec, const NoiseModel& noise,
                               int shots) {
  spec.validate();
  noise.validate();
  if (shots < 0) throw std::invalid_argument("shots must be non-negative");
  const PulseSequence seq = decay_gate_sequence(spec.gate);
  const auto& dims = seq.circuit.dims;
  const int n0 = dims[1];
  const int dim = seq.circuit.dimension();
  const auto [a, b] = decay_input_levels(spec.gate);
  const int ia = a * n0;  // |a, 0>
  const int ib = b * n0;  // |b, 0>

  Vector psi = Vector::Zero(dim);
  psi(ia) = psi(ib) = 1.0 / std::sqrt(2.0);
  DensityState state = DensityState::from_pure(QuditState(dims, psi));

  std::vector<int> order = spec.repetitions;
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  const std::vector<int> both{0, 1};
  const std::vector<int> first{0};
  std::mt19937_64 rng(spec.seed);
  GateDecayResult result;
  int applied = 0;
  for (int n : order) {
    for (; applied < n; ++applied) {
      state = run_noisy(seq.circuit, state, noise);
      if (spec.gate_depolarizing > 0.0) {
        state = DensityState(dims, depolarize(state.matrix(), spec.gate_depolarizing, both, dims));
      }
    }
    const Matrix& rho = state.matrix();
    GateDecayPoint pt;
    pt.repetitions = n;
    const double pop = rho(ia, ia).real() + rho(ib, ib).real();
    pt.population = sample_frequency(pop, shots, rng);

    // Fringe: R^{ab}(pi/2, phi) on site 0, then P(site 0 = a, site 1 = 0).
    const int k = spec.fringe_points;
    Eigen::MatrixXd design(k, 3);
    Eigen::VectorXd q(k);
    double qvar = 0.0;
    for (int j = 0; j < k; ++j) {
      const double phi = 2.0 * kPi * j / k;
      const Instruction op = RotationOp{0, TwoLevelRotation{a, b, kPi / 2, phi, +1}};
      const Matrix u = instruction_unitary(op, dims);
      const double prob = (u * rho * u.adjoint())(ia, ia).real();
      q(j) = sample_frequency(prob, shots, rng);
      qvar += prob * (1 - prob);
      design(j, 0) = 1.0;
      design(j, 1) = std::cos(phi);
      design(j, 2) = std::sin(phi);
    }
    const Eigen::Vector3d c = design.colPivHouseholderQr().solve(q);
    pt.contrast = 2.0 * std::hypot(c(1), c(2));
    pt.signal = 0.5 * (pt.population + pt.contrast);
    if (shots > 0) {
      const double var_pop = pop * (1 - pop) / shots;
      const double var_con = 4.0 * (qvar / k / shots) * 2.0 / k;
      pt.sigma = std::max(0.5 * std::sqrt(var_pop + var_con), 1.0 / shots);
    } else {
      pt.sigma = 1e-9;
    }
    result.points.push_back(pt);
  }

  DecayData data;
  for (const auto& pt : result.points) {
    data.x.push_back(pt.repetitions);
    data.y.push_back(pt.signal);
    data.sigma.push_back(pt.sigma);
  }
  const double floor = 1.0 / dim;
  result.fit = fit_decay(data, floor, floor);
  result.fidelity = result.fit.p;
  result.fidelity_sigma = result.fit.p_sigma();
  return result;
}

}  // namespace qudit
