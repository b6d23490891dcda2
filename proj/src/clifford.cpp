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

#include "qudit/clifford.hpp"

#include <deque>
#include <stdexcept>

#include "qudit/gate_library.hpp"

namespace qudit {

CliffordGroup::CliffordGroup(int dim, std::vector<CliffordElement> elements)
    : dim_(dim), elements_(std::move(elements)) {
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    if (elements_[k].unitary.rows() != dim_) {
      throw DimensionError("Clifford element has wrong dimension");
    }
    if (!index_.emplace(canonical_key(elements_[k].unitary), k).second) {
      throw InvariantError("duplicate Clifford element");
    }
  }
}

std::optional<std::size_t> CliffordGroup::find(const Matrix& u) const {
  auto it = index_.find(canonical_key(u));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t CliffordGroup::lookup(const Matrix& u) const {
  auto k = find(u);
  if (!k) throw InvariantError("product left the Clifford group");
  return *k;
}

std::size_t CliffordGroup::compose(std::size_t a, std::size_t b) const {
  return lookup(elements_.at(a).unitary * elements_.at(b).unitary);
}

std::size_t CliffordGroup::inverse(std::size_t a) const {
  return lookup(elements_.at(a).unitary.adjoint());
}

std::size_t CliffordGroup::identity() const {
  return lookup(Matrix::Identity(dim_, dim_));
}

long long clifford_group_order(int d) {
  const long long n = d;
  return n * n * n * (n * n - 1);
}

CliffordGroup enumerate_clifford(int d) {
  if (d != 2 && d != 3 && d != 5 && d != 7) {
    throw std::invalid_argument(
        "Clifford enumeration supports prime d in {2, 3, 5, 7}");
  }
  const Matrix gens[2] = {hadamard(d).matrix(), sgate(d).matrix()};
  const char letters[2] = {'H', 'S'};

  std::vector<CliffordElement> elements;
  std::map<std::vector<std::int64_t>, std::size_t> seen;
  std::deque<std::size_t> frontier;

  const Matrix id = Matrix::Identity(d, d);
  elements.push_back({id, ""});
  seen.emplace(canonical_key(id), 0);
  frontier.push_back(0);

  while (!frontier.empty()) {
    const std::size_t k = frontier.front();
    frontier.pop_front();
    for (int g = 0; g < 2; ++g) {
      Matrix next = canonical_phase(gens[g] * elements[k].unitary);
      auto key = canonical_key(next);
      if (seen.contains(key)) continue;
      seen.emplace(std::move(key), elements.size());
      elements.push_back({std::move(next), elements[k].word + letters[g]});
      frontier.push_back(elements.size() - 1);
    }
  }
  return CliffordGroup(d, std::move(elements));
}

}  // namespace qudit
