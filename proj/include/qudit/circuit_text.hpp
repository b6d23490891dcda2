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
#include <string_view>

#include "qudit/circuit.hpp"

namespace qudit {

/// Parse failure carrying the 1-based line number.
class ParseError : public std::invalid_argument {
 public:
  ParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

// Line format:
//   dims: d1 d2 ...
//   logical: d                 (optional, default min(dims))
//   global_phase: x            (optional)
//   R <site> <i> <j> <theta> <phi> [sign=-1]
//   MS <siteA> <siteB> <i> <j> <theta> <phi> [sign_a=-1] [sign_b=-1]
//   Z <site> <i> <theta>
//   GATE <name> <sites...> [params...]
// '#' starts a comment. Angles accept `pi` sugar: pi, -pi/2, 3*pi/4, 0.5.
//
// Library gates: H, S, X, Z (one site, d = site dimension), T3 (one qutrit
// site), GM <site> <k> <theta> (Gell-Mann rotation), CINC, CSUM (two sites),
// CEX <c> <t> <c_level> <t1> <t2>.

PulseSequence parse_circuit(std::string_view text);
std::string emit_circuit(const PulseSequence& seq);
std::string emit_circuit(const Circuit& c);

/// Angle literal or pi expression.
double parse_angle(std::string_view token);

/// Library gate matrix by name on sites with the given dimensions.
LibraryGateOp make_library_gate(const std::string& name, std::vector<int> sites,
                                std::vector<double> params,
                                const std::vector<int>& dims);

/// Ket expression such as "(|0>+|1>+|2>)/sqrt(3)", "|0> - i|2>" or
/// "0.6|0> + 0.8*i|1>". The result is normalized; dim = 0 infers the
/// dimension from the largest level.
Vector parse_ket(std::string_view text, int dim = 0);

}  // namespace qudit
