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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qudit/core.hpp"

namespace qudit {

struct CliffordElement {
  Matrix unitary;    // phase-canonical representative
  std::string word;  // generator letters 'H'/'S' in time order
};

/// Single-qudit Clifford group modulo global phase, stored in breadth-first
/// discovery order so that indices are deterministic.
class CliffordGroup {
 public:
  CliffordGroup(int dim, std::vector<CliffordElement> elements);

  int dim() const { return dim_; }
  std::size_t size() const { return elements_.size(); }
  const CliffordElement& operator[](std::size_t k) const {
    return elements_.at(k);
  }
  const std::vector<CliffordElement>& elements() const { return elements_; }

  std::optional<std::size_t> find(const Matrix& u) const;
  /// Index of a * b (apply b first).
  std::size_t compose(std::size_t a, std::size_t b) const;
  std::size_t inverse(std::size_t a) const;
  std::size_t identity() const;

 private:
  std::size_t lookup(const Matrix& u) const;

  int dim_;
  std::vector<CliffordElement> elements_;
  std::map<std::vector<std::int64_t>, std::size_t> index_;
};

/// Breadth-first closure over {H_d, S_d}. Only prime d is supported.
CliffordGroup enumerate_clifford(int d);

/// d^3 (d^2 - 1), the order of the single-qudit Clifford group mod phase.
long long clifford_group_order(int d);

}  // namespace qudit
