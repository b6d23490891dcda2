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

#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qudit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Tolerance hierarchy used across the library.
namespace tol {
inline constexpr double kConstruction = 1e-12;
inline constexpr double kAlgebraic = 1e-10;
inline constexpr double kPsd = 1e-10;
}  // namespace tol

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Number of levels of a single ion site. Eight levels exist physically but at
/// most seven are used for computation, one is kept free for readout.
class QuditDim {
 public:
  static constexpr int kMin = 2;
  static constexpr int kMax = 8;

  explicit QuditDim(int d);
  int value() const { return d_; }
  operator int() const { return d_; }

 private:
  int d_;
};

int total_dimension(std::span<const int> dims);

/// Pure state over a register of qudits.
class QuditState {
 public:
  QuditState(std::vector<int> dims, Vector amplitudes);

  /// Computational basis state |levels[0], levels[1], ...>.
  static QuditState basis(std::vector<int> dims, std::span<const int> levels);

  const std::vector<int>& dims() const { return dims_; }
  const Vector& amplitudes() const { return amps_; }
  int dimension() const { return static_cast<int>(amps_.size()); }

 private:
  std::vector<int> dims_;
  Vector amps_;
};

class DensityState {
 public:
  DensityState(std::vector<int> dims, Matrix rho);

  static DensityState from_pure(const QuditState& psi);
  static DensityState maximally_mixed(std::vector<int> dims);

  const std::vector<int>& dims() const { return dims_; }
  const Matrix& matrix() const { return rho_; }
  int dimension() const { return static_cast<int>(rho_.rows()); }
  RealVector populations() const;

 private:
  std::vector<int> dims_;
  Matrix rho_;
};

class UnitaryOp {
 public:
  explicit UnitaryOp(Matrix u);
  static UnitaryOp identity(int dim);

  const Matrix& matrix() const { return u_; }
  int dimension() const { return static_cast<int>(u_.rows()); }
  UnitaryOp adjoint() const;
  UnitaryOp operator*(const UnitaryOp& rhs) const;

 private:
  Matrix u_;
};

/// Positive operator of trace d representing a channel on a d-level system.
/// Convention: E(rho) = Tr_1[(rho^T (x) 1) Lambda], input factor first.
class ChoiOperator {
 public:
  ChoiOperator(Matrix lambda, int input_dim);

  const Matrix& matrix() const { return lambda_; }
  int input_dim() const { return d_; }

 private:
  Matrix lambda_;
  int d_;
};

// Kronecker products.
Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);
UnitaryOp tensor(const UnitaryOp& a, const UnitaryOp& b);
QuditState tensor(const QuditState& a, const QuditState& b);
DensityState tensor(const DensityState& a, const DensityState& b);

// Uhlmann fidelity F = (Tr sqrt(sqrt(a) b sqrt(a)))^2; reduces to |<a|b>|^2
// for pure states.
double fidelity(const QuditState& a, const QuditState& b);
double fidelity(const DensityState& a, const QuditState& b);
double fidelity(const QuditState& a, const DensityState& b);
double fidelity(const DensityState& a, const DensityState& b);

// Process fidelity as the state fidelity of the trace-normalised Choi
// operators. Against a unitary this is <<U|Lambda|U>> / d^2.
double process_fidelity(const ChoiOperator& a, const ChoiOperator& b);
double process_fidelity(const ChoiOperator& a, const UnitaryOp& u);

double trace_distance(const Matrix& a, const Matrix& b);

/// Column stacking: |A>> = sum_ij A_ij |j> (x) |i>.
Vector vectorize(const Matrix& op);
Matrix unvectorize(const Vector& v, int rows);

ChoiOperator choi_of_unitary(const UnitaryOp& u);
ChoiOperator choi_of_kraus(std::span<const Matrix> kraus);
Matrix apply_choi(const ChoiOperator& choi, const Matrix& rho);

Matrix partial_trace_first(const Matrix& m, int d1, int d2);
Matrix partial_trace_second(const Matrix& m, int d1, int d2);

bool is_unitary(const Matrix& m, double tolerance = tol::kAlgebraic);
bool is_hermitian(const Matrix& m, double tolerance = tol::kConstruction);
double min_eigenvalue(const Matrix& hermitian);
double operator_norm(const Matrix& m);

/// min over alpha of ||a - e^{i alpha} b||_2 with alpha = arg Tr(b^dag a).
double phase_distance(const Matrix& a, const Matrix& b);

/// exp(-i t H) for Hermitian H.
Matrix expm_hermitian(const Matrix& h, double t);
Matrix sqrtm_psd(const Matrix& m);

Matrix haar_unitary(int d, std::mt19937_64& rng);

}  // namespace qudit
