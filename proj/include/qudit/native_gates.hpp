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

#include <vector>

#include "qudit/core.hpp"

namespace qudit {

enum class Manifold { S, D };

/// Equatorial rotation R^{i,j}(theta, phi) = exp(-i theta sigma_phi / 2) on the
/// pair of levels (i, j). `manifold_sign` is +1 when |i> is the S-manifold
/// level and -1 when |j> is; it flips the sign of the sin(phi) sigma_y term.
struct TwoLevelRotation {
  int i = 0;
  int j = 1;
  double theta = 0.0;
  double phi = 0.0;
  int manifold_sign = +1;
};

/// Two-site Molmer-Sorensen interaction on the same level pair of both sites.
struct MSGateSpec {
  int i = 0;
  int j = 1;
  double theta = 0.0;
  double phi = 0.0;
  int site_a = 0;
  int site_b = 1;
  int sign_a = +1;
  int sign_b = +1;
};

/// Off-resonant light-shift gate: e^{-i theta} on |level>, identity elsewhere.
struct StarkPhaseGate {
  int level = 0;
  double theta = 0.0;
};

struct ZeemanSublevel {
  Manifold manifold;
  double m;  // magnetic quantum number
};

class NotNativeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Assignment of logical levels to physical Zeeman sublevels of the S1/2 and
/// D5/2 manifolds. Determines which level pairs are addressable and the sign
/// convention of each rotation.
class LevelMap {
 public:
  explicit LevelMap(std::vector<ZeemanSublevel> levels);

  /// Default encoding: 0 = S(-1/2), 1 = D(-1/2), 2 = S(+1/2), 3 = D(+1/2),
  /// 4 = D(-3/2), 5 = D(+3/2), 6 = D(-5/2), 7 = D(+5/2).
  static LevelMap standard();

  int size() const { return static_cast<int>(levels_.size()); }
  const ZeemanSublevel& level(int k) const { return levels_.at(k); }
  bool in_s_manifold(int k) const { return level(k).manifold == Manifold::S; }

  /// True for S <-> D pairs with |dm| <= 2.
  bool is_native(int i, int j) const;
  /// +1 if |i> is in S, -1 if |j> is in S. Throws NotNativeError otherwise.
  int manifold_sign(int i, int j) const;

 private:
  std::vector<ZeemanSublevel> levels_;
};

/// sigma_phi embedded on levels (i, j) of a d-level space.
Matrix sigma_phi(int i, int j, double phi, int manifold_sign, int d);

UnitaryOp rotation_matrix(const TwoLevelRotation& r, QuditDim d);
UnitaryOp ms_matrix(const MSGateSpec& m, QuditDim d);
UnitaryOp stark_matrix(const StarkPhaseGate& z, QuditDim d);

/// Closed form of the 2x2 rotation block, cos(theta/2) 1 - i sin(theta/2) sigma.
Eigen::Matrix2cd rotation_block(double theta, double phi, int manifold_sign);

}  // namespace qudit
