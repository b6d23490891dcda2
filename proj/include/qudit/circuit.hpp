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

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qudit/core.hpp"
#include "qudit/native_gates.hpp"

namespace qudit {

struct RotationOp {
  int site = 0;
  TwoLevelRotation r;
};

struct MSOp {
  MSGateSpec m;
};

struct StarkOp {
  int site = 0;
  StarkPhaseGate z;
};

/// Named gate from the gate library applied as an ideal matrix.
struct LibraryGateOp {
  std::string name;
  std::vector<int> sites;
  std::vector<double> params;
  Matrix matrix;  // acts on the listed sites, first site most significant
};

using Instruction = std::variant<RotationOp, MSOp, StarkOp, LibraryGateOp>;

/// Ordered instruction list over ion sites; dims[s] is the number of levels
/// available on site s.
struct Circuit {
  std::vector<int> dims;
  std::vector<Instruction> ops;

  int dimension() const { return total_dimension(dims); }
  /// Throws std::invalid_argument on out-of-range sites or levels.
  void validate() const;
};

/// Compiled gate: the target equals e^{i global_phase} times the product of
/// the circuit's instructions, restricted to levels below logical_dim on each
/// site. Levels >= logical_dim are auxiliary and start and end empty.
struct PulseSequence {
  Circuit circuit;
  int logical_dim = 0;
  double global_phase = 0.0;
};

std::vector<int> instruction_sites(const Instruction& op);

/// Matrix of an instruction on its own sites (tensor order = site order in
/// instruction_sites).
Matrix local_matrix(const Instruction& op, const std::vector<int>& dims);

/// Lift an operator on `sites` to the full register.
Matrix embed(const Matrix& local, std::span<const int> sites,
             const std::vector<int>& dims);

Matrix instruction_unitary(const Instruction& op, const std::vector<int>& dims);
Matrix circuit_unitary(const Circuit& c);

/// Circuit unitary restricted to the logical levels of every site.
Matrix logical_block(const PulseSequence& seq);

/// Logical target reproduced by the sequence, including its global phase.
Matrix sequence_matrix(const PulseSequence& seq);

}  // namespace qudit
