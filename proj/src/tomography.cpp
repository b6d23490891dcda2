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

#include "qudit/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qudit {

Matrix MeasurementBasisSet::projector(int basis, int outcome) const {
  const auto v = bases.at(basis).col(outcome);
  return v * v.adjoint();
}

std::vector<Matrix> MeasurementBasisSet::projectors() const {
  std::vector<Matrix> out;
  for (int b = 0; b < size(); ++b) {
    for (int k = 0; k < dim; ++k) out.push_back(projector(b, k));
  }
  return out;
}

void MeasurementBasisSet::validate() const {
  for (const auto& b : bases) {
    if (b.rows() != dim || b.cols() != dim) throw DimensionError("basis has wrong size");
    if ((b.adjoint() * b - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() >
        tol::kConstruction) {
      throw InvariantError("measurement basis is not orthonormal");
    }
  }
  if (sensing_rank(projectors()) != dim * dim) {
    throw InvariantError("measurement bases are not informationally complete");
  }
}

MeasurementBasisSet standard_bases(int d) {
  QuditDim checked(d);
  if (d > 7) throw DimensionError("tomography supports at most 7 levels");
  MeasurementBasisSet set;
  set.dim = d;
  if (d == 2) set.bases.push_back(Matrix::Identity(2, 2));
  const double r = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      for (Complex phase : {kI, Complex(1.0)}) {
        Matrix m = Matrix::Identity(d, d);
        m(a, a) = r;
        m(b, a) = r * phase;
        m(a, b) = r;
        m(b, b) = -r * phase;
        set.bases.push_back(m);
      }
    }
  }
  set.validate();
  return set;
}

namespace {

// Settings are products rho_i^T (x) |v><v|; for states rho is the 1x1 identity.
struct Problem {
  int din = 1;
  int dout = 0;
  int n = 0;
  double trace = 1.0;
  std::vector<Matrix> inputs;
  std::vector<int> row_input;
  std::vector<Vector> row_vec;
  RealVector f;   // hedged frequencies
  RealVector w2;  // squared weights
  double lipschitz = 0.0;
  double ridge = 0.0;  // only when under-determined
  bool underdetermined = false;
  Matrix sensing;
};

// Sensing matrix with one row vec(rho_i^T (x) P_r)^H per measurement row.
Matrix sensing_rows(const Problem& p) {
  Matrix a(p.row_vec.size(), p.n * p.n);
  for (std::size_t r = 0; r < p.row_vec.size(); ++r) {
    const Matrix proj = p.row_vec[r] * p.row_vec[r].adjoint();
    a.row(r) = vectorize(kron(Matrix(p.inputs[p.row_input[r]].transpose()), proj)).adjoint();
  }
  return a;
}

// Tr[(rho_i^T (x) P_r) X] for every row.
RealVector forward(const Problem& p, const Matrix& x) {
  return (p.sensing * vectorize(x)).real();
}

Matrix adjoint(const Problem& p, const RealVector& c) {
  return unvectorize(p.sensing.adjoint() * c.cast<Complex>(), p.n);
}

int rank_of(const RealVector& ev) {
  const double top = ev.maxCoeff();
  int rank = 0;
  for (int k = 0; k < ev.size(); ++k) {
    if (ev(k) > 1e-10 * top) ++rank;
  }
  return rank;
}

Matrix centre(const Problem& p) {
  return p.trace / p.n * Matrix::Identity(p.n, p.n);
}

double objective(const Problem& p, const Matrix& x) {
  const RealVector res = forward(p, x) - p.f;
  double v = res.dot(p.w2.cwiseProduct(res));
  if (p.ridge > 0) v += p.ridge * (x - centre(p)).squaredNorm();
  return v;
}

Matrix gradient(const Problem& p, const Matrix& x) {
  const RealVector res = forward(p, x) - p.f;
  Matrix g = adjoint(p, 2.0 * p.w2.cwiseProduct(res));
  if (p.ridge > 0) g += 2.0 * p.ridge * (x - centre(p));
  return 0.5 * (g + g.adjoint());
}

Reconstruction solve(const Problem& p, const SolverOptions& opts, const Matrix* warm) {
  const double lip = p.lipschitz;
  Reconstruction out;
  out.underdetermined = p.underdetermined;
  Matrix x = warm ? project_psd_trace(*warm, p.trace) : centre(p);
  double fx = objective(p, x);
  if (opts.keep_history) out.history.push_back(fx);
  Matrix y = x;
  double t = 1.0;
  bool from_x = true;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const Matrix z = project_psd_trace(y - gradient(p, y) / lip, p.trace);
    const double fz = objective(p, z);
    const Matrix x_old = x;
    // A plain proximal step from x descends in exact arithmetic; near the
    // optimum the objective comparison is below roundoff and would stall.
    const bool descended = fz <= fx || from_x;
    if (descended) {
      x = z;
      fx = fz;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    // Restart momentum when the step went uphill or against the last move.
    const bool restart =
        !descended || (y - z).cwiseProduct((z - x_old).conjugate()).sum().real() > 0;
    if (restart) {
      y = x;
      t = 1.0;
    } else {
      y = x + (t / t_next) * (z - x) + ((t - 1.0) / t_next) * (x - x_old);
      t = t_next;
    }
    from_x = restart;
    if (opts.keep_history) out.history.push_back(fx);
    out.iterations = it;
    if ((z - y).norm() < 10 * opts.tolerance || it % 10 == 0) {
      out.gradient_mapping =
          (x - project_psd_trace(x - gradient(p, x) / lip, p.trace)).norm();
      if (out.gradient_mapping < opts.tolerance) {
        out.converged = true;
        break;
      }
    }
  }
  if (!out.converged) {
    out.gradient_mapping = (x - project_psd_trace(x - gradient(p, x) / lip, p.trace)).norm();
  }
  out.estimate = x;
  out.objective = fx;
  return out;
}

void finish_problem(Problem& p, const CountRecord& counts, double beta) {
  const int d = counts.dim;
  std::vector<double> f, w2;
  for (const auto& set : counts.settings) {
    const double trials = set.trials();
    for (int k = 0; k < d; ++k) {
      const double freq = (set.counts[k] + beta) / (trials + d * beta);
      if (!(freq > 0.0 && freq < 1.0)) {
        throw std::invalid_argument(
            "frequency of 0 or 1 needs hedging (beta > 0) for finite weights");
      }
      f.push_back(freq);
      w2.push_back(trials / (freq * (1.0 - freq)));
    }
  }
  p.n = p.din * p.dout;
  p.f = Eigen::Map<RealVector>(f.data(), f.size());
  p.w2 = Eigen::Map<RealVector>(w2.data(), w2.size());
  // A^H W A has the nonzero spectrum of W^1/2 A A^H W^1/2 at n^2 x n^2 cost.
  p.sensing = sensing_rows(p);
  const Matrix& a = p.sensing;
  const Matrix wa = p.w2.cwiseSqrt().cast<Complex>().asDiagonal() * a;
  Eigen::SelfAdjointEigenSolver<Matrix> plain(a.adjoint() * a, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> weighted(wa.adjoint() * wa, Eigen::EigenvaluesOnly);
  const double top = weighted.eigenvalues().maxCoeff();
  if (rank_of(plain.eigenvalues()) < p.n * p.n) {
    p.underdetermined = true;
    p.ridge = 1e-6 * top;
  }
  p.lipschitz = 2.0 * top + 2.0 * p.ridge;
}

}  // namespace

int sensing_rank(const std::vector<Matrix>& projectors) {
  const int n = static_cast<int>(projectors.front().rows());
  Matrix a(projectors.size(), n * n);
  for (std::size_t r = 0; r < projectors.size(); ++r) a.row(r) = vectorize(projectors[r]).adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es(a * a.adjoint(), Eigen::EigenvaluesOnly);
  return rank_of(es.eigenvalues());
}

double SettingCounts::trials() const {
  return std::accumulate(counts.begin(), counts.end(), 0.0);
}

void CountRecord::validate() const {
  for (const auto& s : settings) {
    if (static_cast<int>(s.counts.size()) != dim) {
      throw std::invalid_argument("every setting needs one count per outcome");
    }
    for (double n : s.counts) {
      if (!(n >= 0.0)) throw std::invalid_argument("counts must be non-negative");
    }
    if (!(s.trials() > 0.0)) throw std::invalid_argument("setting without trials");
  }
}

Matrix project_psd_trace(const Matrix& h, double trace) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  const RealVector ev = es.eigenvalues();
  // Euclidean projection of the spectrum onto {l >= 0, sum l = trace}.
  std::vector<double> sorted(ev.data(), ev.data() + ev.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0, shift = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - trace) / double(k + 1);
    if (sorted[k] - candidate > 0) shift = candidate;
  }
  RealVector lam = (ev.array() - shift).max(0.0);
  const Matrix& v = es.eigenvectors();
  Matrix out = v * lam.cast<Complex>().asDiagonal() * v.adjoint();
  return 0.5 * (out + out.adjoint());
}

Reconstruction reconstruct_state(const CountRecord& counts,
                                 const MeasurementBasisSet& bases,
                                 const SolverOptions& opts, const Matrix* warm_start) {
  counts.validate();
  if (counts.dim != bases.dim) throw DimensionError("counts and bases differ in dimension");
  Problem p;
  p.dout = bases.dim;
  p.inputs = {Matrix::Identity(1, 1)};
  for (const auto& s : counts.settings) {
    if (s.basis < 0 || s.basis >= bases.size()) throw std::invalid_argument("unknown basis");
    for (int k = 0; k < bases.dim; ++k) {
      p.row_input.push_back(0);
      p.row_vec.push_back(bases.bases[s.basis].col(k));
    }
  }
  finish_problem(p, counts, opts.beta);
  return solve(p, opts, warm_start);
}

Reconstruction reconstruct_process(const CountRecord& counts,
                                   const std::vector<Matrix>& inputs,
                                   const MeasurementBasisSet& bases,
                                   const SolverOptions& opts, const Matrix* warm_start) {
  counts.validate();
  const int d = bases.dim;
  if (counts.dim != d) throw DimensionError("counts and bases differ in dimension");
  Problem p;
  p.din = d;
  p.dout = d;
  p.trace = d;
  p.inputs = inputs;
  for (const auto& rho : inputs) {
    if (rho.rows() != d || rho.cols() != d) throw DimensionError("preparation has wrong size");
  }
  for (const auto& s : counts.settings) {
    if (s.input < 0 || s.input >= static_cast<int>(inputs.size())) {
      throw std::invalid_argument("unknown preparation");
    }
    if (s.basis < 0 || s.basis >= bases.size()) throw std::invalid_argument("unknown basis");
    for (int k = 0; k < d; ++k) {
      p.row_input.push_back(s.input);
      p.row_vec.push_back(bases.bases[s.basis].col(k));
    }
  }
  finish_problem(p, counts, opts.beta);
  return solve(p, opts, warm_start);
}

// ---------------------------------------------------------------------------

std::vector<Matrix> default_inputs(const MeasurementBasisSet& bases) {
  return bases.projectors();
}

namespace {

std::vector<double> outcome_probabilities(const Matrix& rho, const MeasurementBasisSet& bases,
                                          int basis) {
  std::vector<double> p(bases.dim);
  for (int k = 0; k < bases.dim; ++k) {
    const auto v = bases.bases[basis].col(k);
    p[k] = std::max(0.0, (v.adjoint() * rho * v)(0, 0).real());
  }
  return p;
}

std::vector<double> multinomial(const std::vector<double>& p, int shots, std::mt19937_64& rng) {
  // Chained binomials: O(outcomes) per setting regardless of shot count.
  std::vector<double> counts(p.size(), 0.0);
  double rest = std::accumulate(p.begin(), p.end(), 0.0);
  long long left = shots;
  for (std::size_t k = 0; k < p.size() && left > 0; ++k) {
    if (k + 1 == p.size() || rest <= 0.0) {
      counts[k] = static_cast<double>(left);
      break;
    }
    const double q = std::clamp(p[k] / rest, 0.0, 1.0);
    std::binomial_distribution<long long> draw(left, q);
    const long long n = draw(rng);
    counts[k] = static_cast<double>(n);
    left -= n;
    rest -= p[k];
  }
  return counts;
}

}  // namespace

CountRecord simulate_state_counts(const Matrix& rho, const MeasurementBasisSet& bases,
                                  int shots, std::mt19937_64& rng) {
  if (shots <= 0) throw std::invalid_argument("shots must be positive");
  CountRecord rec;
  rec.dim = bases.dim;
  for (int b = 0; b < bases.size(); ++b) {
    rec.settings.push_back({-1, b, multinomial(outcome_probabilities(rho, bases, b), shots, rng)});
  }
  return rec;
}

CountRecord expected_state_counts(const Matrix& rho, const MeasurementBasisSet& bases,
                                  double exact_trials) {
  CountRecord rec;
  rec.dim = bases.dim;
  for (int b = 0; b < bases.size(); ++b) {
    auto p = outcome_probabilities(rho, bases, b);
    for (double& x : p) x *= exact_trials;
    rec.settings.push_back({-1, b, p});
  }
  return rec;
}

CountRecord simulate_process_counts(const ChannelMap& channel,
                                    const std::vector<Matrix>& inputs,
                                    const MeasurementBasisSet& bases, int shots,
                                    std::mt19937_64& rng) {
  if (shots <= 0) throw std::invalid_argument("shots must be positive");
  CountRecord rec;
  rec.dim = bases.dim;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const Matrix out = channel(inputs[i]);
    for (int b = 0; b < bases.size(); ++b) {
      rec.settings.push_back({static_cast<int>(i), b,
                              multinomial(outcome_probabilities(out, bases, b), shots, rng)});
    }
  }
  return rec;
}

CountRecord expected_process_counts(const ChannelMap& channel,
                                    const std::vector<Matrix>& inputs,
                                    const MeasurementBasisSet& bases, double exact_trials) {
  CountRecord rec;
  rec.dim = bases.dim;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const Matrix out = channel(inputs[i]);
    for (int b = 0; b < bases.size(); ++b) {
      auto p = outcome_probabilities(out, bases, b);
      for (double& x : p) x *= exact_trials;
      rec.settings.push_back({static_cast<int>(i), b, p});
    }
  }
  return rec;
}

FidelityInterval bootstrap_errors(
    const CountRecord& counts,
    const std::function<double(const CountRecord&)>& figure_of_merit, int resamples,
    std::uint64_t seed) {
  counts.validate();
  if (resamples <= 0) throw std::invalid_argument("need at least one resample");
  FidelityInterval out;
  out.estimate = figure_of_merit(counts);
  std::mt19937_64 rng(seed);
  for (int r = 0; r < resamples; ++r) {
    CountRecord sample = counts;
    for (auto& s : sample.settings) {
      const double trials = s.trials();
      std::vector<double> p(s.counts.size());
      for (std::size_t k = 0; k < p.size(); ++k) p[k] = s.counts[k] / trials;
      s.counts = multinomial(p, static_cast<int>(std::llround(trials)), rng);
    }
    out.samples.push_back(figure_of_merit(sample));
  }
  std::vector<double> sorted = out.samples;
  std::sort(sorted.begin(), sorted.end());
  auto percentile = [&](double q) {
    const double pos = q * (sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
  };
  out.lower = std::min(percentile(0.16), out.estimate);
  out.upper = std::max(percentile(0.84), out.estimate);
  return out;
}

}  // namespace qudit
