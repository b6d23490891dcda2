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

#include "qudit/gate_library.hpp"

#include <cmath>
#include <stdexcept>

namespace qudit {

namespace {
Complex omega(int d, long long power) {
  const long long p = ((power % d) + d) % d;
  return std::exp(2.0 * kPi * kI * double(p) / double(d));
}

void check_level(int level, int d) {
  if (level < 0 || level >= d) throw std::out_of_range("level out of range");
}
}  // namespace

Matrix gell_mann(int k, int d) {
  QuditDim checked(d);
  if (k < 1 || k > d * d - 1) {
    throw std::out_of_range("Gell-Mann index out of range");
  }
  // For each l = 1..d-1: symmetric and antisymmetric on (m, l) for m < l,
  // then the l-th diagonal generator.
  int count = 0;
  for (int l = 1; l < d; ++l) {
    for (int m = 0; m < l; ++m) {
      if (++count == k) {
        Matrix g = Matrix::Zero(d, d);
        g(m, l) = 1.0;
        g(l, m) = 1.0;
        return g;
      }
      if (++count == k) {
        Matrix g = Matrix::Zero(d, d);
        g(m, l) = -kI;
        g(l, m) = kI;
        return g;
      }
    }
    if (++count == k) {
      Matrix g = Matrix::Zero(d, d);
      const double norm = std::sqrt(2.0 / (l * (l + 1.0)));
      for (int m = 0; m < l; ++m) g(m, m) = norm;
      g(l, l) = -l * norm;
      return g;
    }
  }
  throw std::logic_error("unreachable");
}

UnitaryOp gm_rotation(int k, double theta, int d) {
  return UnitaryOp(expm_hermitian(gell_mann(k, d), theta / 2));
}

UnitaryOp pauli_z(int d) {
  QuditDim checked(d);
  Matrix z = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) z(j, j) = omega(d, j);
  return UnitaryOp(std::move(z));
}

UnitaryOp pauli_x(int d) {
  QuditDim checked(d);
  Matrix x = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) x((j + 1) % d, j) = 1.0;
  return UnitaryOp(std::move(x));
}

Matrix weyl(int d, int a, int b) {
  Matrix out = Matrix::Identity(d, d);
  const Matrix x = pauli_x(d).matrix();
  const Matrix z = pauli_z(d).matrix();
  for (int i = 0; i < ((a % d) + d) % d; ++i) out = out * x;
  for (int i = 0; i < ((b % d) + d) % d; ++i) out = out * z;
  return out;
}

UnitaryOp hadamard(int d) {
  QuditDim checked(d);
  Matrix h(d, d);
  for (int k = 0; k < d; ++k) {
    for (int j = 0; j < d; ++j) h(k, j) = omega(d, 1LL * j * k);
  }
  return UnitaryOp(h / std::sqrt(double(d)));
}

UnitaryOp sgate(int d) {
  QuditDim checked(d);
  Matrix s = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    if (d % 2 == 1) {
      s(j, j) = omega(d, 1LL * j * (j + 1) / 2);
    } else {
      s(j, j) = std::exp(kI * kPi * double(j * j % (2 * d)) / double(d));
    }
  }
  return UnitaryOp(std::move(s));
}

UnitaryOp tgate3() {
  Matrix t = Matrix::Zero(3, 3);
  t(0, 0) = 1.0;
  t(1, 1) = std::exp(2.0 * kPi * kI / 9.0);
  t(2, 2) = std::exp(-2.0 * kPi * kI / 9.0);
  return UnitaryOp(std::move(t));
}

UnitaryOp cex(int d, int c, int t1, int t2) {
  QuditDim checked(d);
  check_level(c, d);
  check_level(t1, d);
  check_level(t2, d);
  if (t1 == t2) throw std::invalid_argument("CEX target levels must differ");
  Matrix u = Matrix::Identity(d * d, d * d);
  const int a = c * d + t1;
  const int b = c * d + t2;
  u(a, a) = 0.0;
  u(b, b) = 0.0;
  u(a, b) = 1.0;
  u(b, a) = 1.0;
  return UnitaryOp(std::move(u));
}

UnitaryOp cinc(int d) {
  QuditDim checked(d);
  Matrix u = Matrix::Identity(d * d, d * d);
  const int c = d - 1;
  for (int k = 0; k < d; ++k) u(c * d + k, c * d + k) = 0.0;
  for (int k = 0; k < d; ++k) u(c * d + (k + 1) % d, c * d + k) = 1.0;
  return UnitaryOp(std::move(u));
}

UnitaryOp csum(int d) {
  // Controlled-X on control level k is CINC conjugated by X^{d-1-k} on the
  // control; the sum gate applies it k times for every control level k.
  const Matrix id = Matrix::Identity(d, d);
  const Matrix inc = cinc(d).matrix();
  Matrix u = Matrix::Identity(d * d, d * d);
  for (int k = 1; k < d; ++k) {
    const Matrix shift = weyl(d, d - 1 - k, 0);
    const Matrix controlled =
        kron(Matrix(shift.adjoint()), id) * inc * kron(shift, id);
    for (int rep = 0; rep < k; ++rep) u = controlled * u;
  }
  return UnitaryOp(std::move(u));
}

Matrix canonical_phase(const Matrix& u) {
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      if (std::abs(u(i, j)) > 1e-9) {
        return u * (std::abs(u(i, j)) / u(i, j));
      }
    }
  }
  return u;
}

std::vector<std::int64_t> canonical_key(const Matrix& u) {
  const Matrix c = canonical_phase(u);
  std::vector<std::int64_t> key;
  key.reserve(2 * c.size());
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      key.push_back(std::llround(c(i, j).real() * 1e9));
      key.push_back(std::llround(c(i, j).imag() * 1e9));
    }
  }
  return key;
}

}  // namespace qudit
