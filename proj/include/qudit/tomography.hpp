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
#include <functional>
#include <random>
#include <vector>

#include "qudit/core.hpp"

namespace qudit {

/// Each basis is d orthonormal column vectors; outcome k projects on column k.
struct MeasurementBasisSet {
  int dim = 0;
  std::vector<Matrix> bases;

  int size() const { return static_cast<int>(bases.size()); }
  Matrix projector(int basis, int outcome) const;
  /// All projectors in (basis, outcome) order.
  std::vector<Matrix> projectors() const;
  void validate() const;
};

/// Pair-wise superposition bases: for each level pair (a, b), one basis with
/// (|a> +- i|b>)/sqrt2 and one with (|a> +- |b>)/sqrt2, completed by the
/// untouched levels. d = 2 adds the computational basis.
MeasurementBasisSet standard_bases(int d);

/// Numerical rank of the map sigma -> {Tr[Pi sigma]}.
int sensing_rank(const std::vector<Matrix>& projectors);

struct SettingCounts {
  int input = -1;  // preparation index, -1 for state tomography
  int basis = 0;
  std::vector<double> counts;  // per outcome

  double trials() const;
};

struct CountRecord {
  int dim = 0;
  std::vector<SettingCounts> settings;

  void validate() const;
};

struct SolverOptions {
  double beta = 0.5;
  double tolerance = 1e-9;  // on the gradient mapping, in operator units
  int max_iterations = 20000;
  bool keep_history = false;
};

struct Reconstruction {
  Matrix estimate;
  double objective = 0.0;  // ||W (S x - f)||_2^2
  double gradient_mapping = 0.0;
  int iterations = 0;
  bool converged = false;
  bool underdetermined = false;
  std::vector<double> history;
};

/// Weighted least squares over {sigma >= 0, Tr sigma = 1} by monotone FISTA
/// with exact projection of the spectrum onto the simplex.
Reconstruction reconstruct_state(const CountRecord& counts,
                                 const MeasurementBasisSet& bases,
                                 const SolverOptions& opts = {},
                                 const Matrix* warm_start = nullptr);

/// Same problem for a Choi operator (trace d) from preparations x bases.
Reconstruction reconstruct_process(const CountRecord& counts,
                                   const std::vector<Matrix>& inputs,
                                   const MeasurementBasisSet& bases,
                                   const SolverOptions& opts = {},
                                   const Matrix* warm_start = nullptr);

/// Projection of a Hermitian matrix onto {X >= 0, Tr X = trace}.
Matrix project_psd_trace(const Matrix& h, double trace);

// ---------------------------------------------------------------------------
// Simulated data

/// Pure states of every basis projector, used as default preparations.
std::vector<Matrix> default_inputs(const MeasurementBasisSet& bases);

CountRecord simulate_state_counts(const Matrix& rho, const MeasurementBasisSet& bases,
                                  int shots, std::mt19937_64& rng);
/// Noise-free counts: expected frequencies times `exact_trials`.
CountRecord expected_state_counts(const Matrix& rho, const MeasurementBasisSet& bases,
                                  double exact_trials = 1e9);

using ChannelMap = std::function<Matrix(const Matrix&)>;

CountRecord simulate_process_counts(const ChannelMap& channel,
                                    const std::vector<Matrix>& inputs,
                                    const MeasurementBasisSet& bases, int shots,
                                    std::mt19937_64& rng);
CountRecord expected_process_counts(const ChannelMap& channel,
                                    const std::vector<Matrix>& inputs,
                                    const MeasurementBasisSet& bases,
                                    double exact_trials = 1e9);

// ---------------------------------------------------------------------------
// Resampling

struct FidelityInterval {
  double estimate = 0.0;
  double lower = 0.0;  // 16th percentile, widened to include the estimate
  double upper = 0.0;  // 84th percentile, widened to include the estimate
  std::vector<double> samples;
};

/// Parametric bootstrap: resample every setting from a multinomial at the
/// observed frequencies and re-run `figure_of_merit`.
FidelityInterval bootstrap_errors(
    const CountRecord& counts,
    const std::function<double(const CountRecord&)>& figure_of_merit,
    int resamples, std::uint64_t seed);

}  // namespace qudit
