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
#include <vector>

#include "qudit/core.hpp"

namespace qudit {

/// Generalised Gell-Mann matrix k (1-based) for dimension d. For d = 3 the
/// numbering coincides with the standard lambda_1 .. lambda_8.
Matrix gell_mann(int k, int d = 3);

/// exp(-i theta lambda_k / 2).
UnitaryOp gm_rotation(int k, double theta, int d = 3);

UnitaryOp pauli_z(int d);
UnitaryOp pauli_x(int d);
/// X^a Z^b.
Matrix weyl(int d, int a, int b);

UnitaryOp hadamard(int d);
/// Phase gate generating the Clifford group together with hadamard(d). Odd d
/// uses omega^{j(j+1)/2}; even d uses exp(i pi j^2 / d), which is the usual
/// S = diag(1, i) for qubits.
UnitaryOp sgate(int d);
UnitaryOp tgate3();

/// Controlled exchange: swaps |t1> and |t2> of the target iff control is |c>.
UnitaryOp cex(int d, int c, int t1, int t2);
/// Controlled increment: target k -> k+1 mod d iff control is |d-1>.
UnitaryOp cinc(int d);
/// |i>|j> -> |i>|j+i mod d>, assembled from conjugated controlled increments.
UnitaryOp csum(int d);

/// Multiply by a phase so the first entry (row-major) with modulus above 1e-9
/// is real and positive.
Matrix canonical_phase(const Matrix& u);
/// Canonical phase followed by rounding to a 1e-9 grid.
std::vector<std::int64_t> canonical_key(const Matrix& u);

}  // namespace qudit
