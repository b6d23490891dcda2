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

#include "qudit/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace qudit {

QuditDim::QuditDim(int d) : d_(d) {
  if (d < kMin || d > kMax) {
    throw DimensionError("qudit dimension must be in [2, 8], got " +
                         std::to_string(d));
  }
}

int total_dimension(std::span<const int> dims) {
  int n = 1;
  for (int d : dims) n *= QuditDim(d).value();
  return n;
}

QuditState::QuditState(std::vector<int> dims, Vector amplitudes)
    : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
  if (total_dimension(dims_) != amps_.size()) {
    throw DimensionError("amplitude vector does not match register dims");
  }
  if (std::abs(amps_.norm() - 1.0) > tol::kConstruction) {
    throw InvariantError("state vector is not normalised");
  }
}

QuditState QuditState::basis(std::vector<int> dims,
                             std::span<const int> levels) {
  if (levels.size() != dims.size()) {
    throw DimensionError("basis label count does not match register size");
  }
  int index = 0;
  for (std::size_t s = 0; s < dims.size(); ++s) {
    if (levels[s] < 0 || levels[s] >= dims[s]) {
      throw DimensionError("basis level out of range");
    }
    index = index * dims[s] + levels[s];
  }
  Vector v = Vector::Zero(total_dimension(dims));
  v(index) = 1.0;
  return QuditState(std::move(dims), std::move(v));
}

DensityState::DensityState(std::vector<int> dims, Matrix rho)
    : dims_(std::move(dims)), rho_(std::move(rho)) {
  const int n = total_dimension(dims_);
  if (rho_.rows() != n || rho_.cols() != n) {
    throw DimensionError("density matrix does not match register dims");
  }
  if (!is_hermitian(rho_, tol::kConstruction)) {
    throw InvariantError("density matrix is not Hermitian");
  }
  if (std::abs(rho_.trace().real() - 1.0) > tol::kConstruction) {
    throw InvariantError("density matrix trace is not 1");
  }
  if (min_eigenvalue(rho_) < -tol::kPsd) {
    throw InvariantError("density matrix is not positive semidefinite");
  }
}

DensityState DensityState::from_pure(const QuditState& psi) {
  const Vector& a = psi.amplitudes();
  return DensityState(psi.dims(), a * a.adjoint());
}

DensityState DensityState::maximally_mixed(std::vector<int> dims) {
  const int n = total_dimension(dims);
  return DensityState(std::move(dims), Matrix::Identity(n, n) / double(n));
}

RealVector DensityState::populations() const {
  return rho_.diagonal().real();
}

UnitaryOp::UnitaryOp(Matrix u) : u_(std::move(u)) {
  if (u_.rows() != u_.cols()) throw DimensionError("unitary must be square");
  if (!is_unitary(u_, tol::kAlgebraic)) {
    throw InvariantError("matrix is not unitary");
  }
}

UnitaryOp UnitaryOp::identity(int dim) {
  return UnitaryOp(Matrix::Identity(dim, dim));
}

UnitaryOp UnitaryOp::adjoint() const { return UnitaryOp(u_.adjoint()); }

UnitaryOp UnitaryOp::operator*(const UnitaryOp& rhs) const {
  if (rhs.dimension() != dimension()) {
    throw DimensionError("unitary product dimension mismatch");
  }
  return UnitaryOp(u_ * rhs.u_);
}

ChoiOperator::ChoiOperator(Matrix lambda, int input_dim)
    : lambda_(std::move(lambda)), d_(input_dim) {
  if (lambda_.rows() != d_ * d_ || lambda_.cols() != d_ * d_) {
    throw DimensionError("Choi operator must be d^2 x d^2");
  }
  if (!is_hermitian(lambda_, 1e-9)) {
    throw InvariantError("Choi operator is not Hermitian");
  }
  if (std::abs(lambda_.trace().real() - d_) > 1e-9) {
    throw InvariantError("Choi operator trace differs from d");
  }
  if (min_eigenvalue(lambda_) < -tol::kPsd) {
    throw InvariantError("Choi operator is not positive semidefinite");
  }
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

namespace {
std::vector<int> concat(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}
}  // namespace

UnitaryOp tensor(const UnitaryOp& a, const UnitaryOp& b) {
  return UnitaryOp(kron(a.matrix(), b.matrix()));
}

QuditState tensor(const QuditState& a, const QuditState& b) {
  return QuditState(concat(a.dims(), b.dims()),
                    kron(a.amplitudes(), b.amplitudes()));
}

DensityState tensor(const DensityState& a, const DensityState& b) {
  return DensityState(concat(a.dims(), b.dims()),
                      kron(a.matrix(), b.matrix()));
}

namespace {
double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double uhlmann(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("fidelity dimension mismatch");
  const Matrix sa = sqrtm_psd(a);
  const Matrix m = sa * b * sa;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    s += std::sqrt(std::max(es.eigenvalues()(i), 0.0));
  }
  return clamp01(s * s);
}
}  // namespace

double fidelity(const QuditState& a, const QuditState& b) {
  if (a.dimension() != b.dimension()) {
    throw DimensionError("fidelity dimension mismatch");
  }
  return clamp01(std::norm(a.amplitudes().dot(b.amplitudes())));
}

double fidelity(const DensityState& a, const QuditState& b) {
  if (a.dimension() != b.dimension()) {
    throw DimensionError("fidelity dimension mismatch");
  }
  const Vector& v = b.amplitudes();
  return clamp01((v.adjoint() * a.matrix() * v)(0).real());
}

double fidelity(const QuditState& a, const DensityState& b) {
  return fidelity(b, a);
}

double fidelity(const DensityState& a, const DensityState& b) {
  return uhlmann(a.matrix(), b.matrix());
}

double process_fidelity(const ChoiOperator& a, const ChoiOperator& b) {
  if (a.input_dim() != b.input_dim()) {
    throw DimensionError("process fidelity dimension mismatch");
  }
  const double d = a.input_dim();
  return uhlmann(a.matrix() / d, b.matrix() / d);
}

double process_fidelity(const ChoiOperator& a, const UnitaryOp& u) {
  if (a.input_dim() != u.dimension()) {
    throw DimensionError("process fidelity dimension mismatch");
  }
  const Vector v = vectorize(u.matrix());
  const double d = u.dimension();
  return clamp01((v.adjoint() * a.matrix() * v)(0).real() / (d * d));
}

double trace_distance(const Matrix& a, const Matrix& b) {
  const Matrix diff = a - b;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (diff + diff.adjoint()));
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Vector vectorize(const Matrix& op) {
  return Eigen::Map<const Vector>(op.data(), op.size());
}

Matrix unvectorize(const Vector& v, int rows) {
  if (rows <= 0 || v.size() % rows != 0) {
    throw DimensionError("cannot reshape vector");
  }
  return Eigen::Map<const Matrix>(v.data(), rows, v.size() / rows);
}

ChoiOperator choi_of_unitary(const UnitaryOp& u) {
  const Vector v = vectorize(u.matrix());
  return ChoiOperator(v * v.adjoint(), u.dimension());
}

ChoiOperator choi_of_kraus(std::span<const Matrix> kraus) {
  if (kraus.empty()) throw DimensionError("empty Kraus set");
  const int d = static_cast<int>(kraus.front().cols());
  Matrix lambda = Matrix::Zero(d * d, d * d);
  for (const Matrix& k : kraus) {
    if (k.rows() != d || k.cols() != d) {
      throw DimensionError("Kraus operators must be square and equal size");
    }
    const Vector v = vectorize(k);
    lambda += v * v.adjoint();
  }
  return ChoiOperator(std::move(lambda), d);
}

Matrix apply_choi(const ChoiOperator& choi, const Matrix& rho) {
  const int d = choi.input_dim();
  if (rho.rows() != d || rho.cols() != d) {
    throw DimensionError("input state does not match Choi operator");
  }
  const Matrix lhs = kron(Matrix(rho.transpose()), Matrix::Identity(d, d));
  return partial_trace_first(lhs * choi.matrix(), d, d);
}

Matrix partial_trace_first(const Matrix& m, int d1, int d2) {
  Matrix out = Matrix::Zero(d2, d2);
  for (int a = 0; a < d1; ++a) out += m.block(a * d2, a * d2, d2, d2);
  return out;
}

Matrix partial_trace_second(const Matrix& m, int d1, int d2) {
  Matrix out(d1, d1);
  for (int a = 0; a < d1; ++a) {
    for (int b = 0; b < d1; ++b) {
      out(a, b) = m.block(a * d2, b * d2, d2, d2).trace();
    }
  }
  return out;
}

bool is_unitary(const Matrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  const Matrix e = m * m.adjoint() - Matrix::Identity(m.rows(), m.cols());
  return e.cwiseAbs().maxCoeff() <= tolerance;
}

bool is_hermitian(const Matrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

double min_eigenvalue(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      0.5 * (hermitian + hermitian.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double phase_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("phase distance dimension mismatch");
  }
  const Complex overlap = (b.adjoint() * a).trace();
  const Complex phase =
      std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex(1.0);
  return operator_norm(a - phase * b);
}

Matrix expm_hermitian(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  const RealVector& w = es.eigenvalues();
  Vector phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    phases(i) = std::exp(-kI * t * w(i));
  }
  const Matrix& v = es.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

Matrix sqrtm_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  RealVector w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix& v = es.eigenvectors();
  return v * w.cast<Complex>().asDiagonal() * v.adjoint();
}

Matrix haar_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix z(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) z(i, j) = Complex(n(rng), n(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

}  // namespace qudit
