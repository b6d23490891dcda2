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

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qudit/benchmark.hpp"
#include "qudit/core.hpp"
#include "qudit/physics.hpp"
#include "qudit/simulator.hpp"
#include "qudit/tomography.hpp"

namespace qudit {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Input document does not match its schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File cannot be read or written.
class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path);
/// Writes to a temporary sibling, then renames over `path`.
void write_file_atomic(const std::string& path, const std::string& content);
Json read_json_file(const std::string& path);

// Model files. Every document carries "schema_version": 1; unknown keys are
// rejected.
//
// noise:   {pulse_depolarizing | pulse_error_rate, ms_depolarizing | ms_error_rate,
//           dephasing_rate, tau1 (null = none),
//           durations: {rotation, ms, stark, library}}    seconds, 1/s
// readout: {tau1, t_detect, t_cool, t_shelve,
//           discriminator: {bright_rate, dark_rate, threshold}}
// stark:   {manifolds: ["S", "D", ...], transitions: [{lower, upper,
//           detuning_hz, coupling}], rabi_hz, background, guard_band_hz}
// Error rates are average gate errors, converted for the site dimension
// `error_rate_dim`.
NoiseModel noise_model_from_json(const Json& j, int error_rate_dim = 3);
Json to_json(const NoiseModel& m);

struct ReadoutConfig {
  ReadoutModel model;
  PoissonDiscriminator discriminator;
};
ReadoutConfig readout_from_json(const Json& j);
Json to_json(const ReadoutConfig& r);

StarkModel stark_model_from_json(const Json& j);
Json to_json(const StarkModel& m);

/// {"re": [[...]], "im": [[...]]}
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

/// Counts: {schema_version, dim, records: [{setting, input, outcome, n, N}]}
/// with setting = basis index and input = preparation index (-1 or absent
/// for state tomography). N must agree within a setting.
CountRecord counts_from_json(const Json& j);
Json to_json(const CountRecord& c);

Json to_json(const DecayFit& f);
Json to_json(const RBResult& r);
Json to_json(const GateDecayResult& r);
Json to_json(const Reconstruction& r);
Json to_json(const CompensationResult& r);

/// Pretty text rendering of a complex matrix.
std::string format_matrix(const Matrix& m, int precision = 4);

}  // namespace qudit
