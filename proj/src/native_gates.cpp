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

#include "qudit/native_gates.hpp"

#include <cmath>
#include <set>
#include <utility>

namespace qudit {

namespace {
void check_pair(int i, int j, int d) {
  if (i == j) throw std::invalid_argument("rotation levels must differ");
  if (i < 0 || j < 0 || i >= d || j >= d) {
    throw std::out_of_range("rotation level out of range");
  }
}

void check_sign(int s) {
  if (s != 1 && s != -1) throw std::invalid_argument("manifold sign must be +-1");
}
}  // namespace

LevelMap::LevelMap(std::vector<ZeemanSublevel> levels)
    : levels_(std::move(levels)) {
  if (levels_.empty() || levels_.size() > QuditDim::kMax) {
    throw std::invalid_argument("level map must hold 1..8 levels");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& l : levels_) {
    const int twice_m = static_cast<int>(std::lround(2 * l.m));
    const bool s = l.manifold == Manifold::S;
    if (std::abs(twice_m) > (s ? 1 : 5) || twice_m % 2 == 0) {
      throw std::invalid_argument("invalid Zeeman sublevel in level map");
    }
    if (!seen.emplace(s ? 0 : 1, twice_m).second) {
      throw std::invalid_argument("level map is not injective");
    }
  }
}

LevelMap LevelMap::standard() {
  return LevelMap({{Manifold::S, -0.5},
                   {Manifold::D, -0.5},
                   {Manifold::S, +0.5},
                   {Manifold::D, +0.5},
                   {Manifold::D, -1.5},
                   {Manifold::D, +1.5},
                   {Manifold::D, -2.5},
                   {Manifold::D, +2.5}});
}

bool LevelMap::is_native(int i, int j) const {
  if (i == j || i < 0 || j < 0 || i >= size() || j >= size()) return false;
  const auto& a = levels_[i];
  const auto& b = levels_[j];
  if (a.manifold == b.manifold) return false;
  return std::abs(a.m - b.m) <= 2.0 + 1e-9;
}

int LevelMap::manifold_sign(int i, int j) const {
  if (!is_native(i, j)) {
    throw NotNativeError("levels " + std::to_string(i) + "," +
                         std::to_string(j) + " are not a native transition");
  }
  return in_s_manifold(i) ? +1 : -1;
}

Matrix sigma_phi(int i, int j, double phi, int manifold_sign, int d) {
  check_pair(i, j, d);
  check_sign(manifold_sign);
  Matrix s = Matrix::Zero(d, d);
  // cos(phi) sx +- sin(phi) sy in the (i, j) basis.
  s(i, j) = std::exp(-kI * (manifold_sign * phi));
  s(j, i) = std::exp(kI * (manifold_sign * phi));
  return s;
}

Eigen::Matrix2cd rotation_block(double theta, double phi, int manifold_sign) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  Eigen::Matrix2cd b;
  b << c, -kI * s * std::exp(-kI * (manifold_sign * phi)),
      -kI * s * std::exp(kI * (manifold_sign * phi)), c;
  return b;
}

UnitaryOp rotation_matrix(const TwoLevelRotation& r, QuditDim d) {
  check_pair(r.i, r.j, d);
  check_sign(r.manifold_sign);
  Matrix gen(2, 2);
  gen << 0, std::exp(-kI * (r.manifold_sign * r.phi)),
      std::exp(kI * (r.manifold_sign * r.phi)), 0;
  const Matrix block = expm_hermitian(gen, r.theta / 2);
  Matrix u = Matrix::Identity(d, d);
  u(r.i, r.i) = block(0, 0);
  u(r.i, r.j) = block(0, 1);
  u(r.j, r.i) = block(1, 0);
  u(r.j, r.j) = block(1, 1);
  return UnitaryOp(std::move(u));
}

UnitaryOp ms_matrix(const MSGateSpec& m, QuditDim d) {
  const Matrix id = Matrix::Identity(d, d);
  const Matrix sa = sigma_phi(m.i, m.j, m.phi, m.sign_a, d);
  const Matrix sb = sigma_phi(m.i, m.j, m.phi, m.sign_b, d);
  const Matrix collective = kron(sa, id) + kron(id, sb);
  return UnitaryOp(expm_hermitian(collective * collective, m.theta / 4));
}

UnitaryOp stark_matrix(const StarkPhaseGate& z, QuditDim d) {
  if (z.level < 0 || z.level >= d) {
    throw std::out_of_range("Stark level out of range");
  }
  Matrix u = Matrix::Identity(d, d);
  u(z.level, z.level) = std::exp(-kI * z.theta);
  return UnitaryOp(std::move(u));
}

}  // namespace qudit
