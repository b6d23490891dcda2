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

#include "qudit/circuit.hpp"

#include <stdexcept>

namespace qudit {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_site(int site, const std::vector<int>& dims) {
  if (site < 0 || site >= static_cast<int>(dims.size())) {
    throw std::invalid_argument("site index out of range");
  }
}

void check_level(int level, int dim) {
  if (level < 0 || level >= dim) {
    throw std::invalid_argument("level " + std::to_string(level) +
                                " outside site dimension " +
                                std::to_string(dim));
  }
}
}  // namespace

std::vector<int> instruction_sites(const Instruction& op) {
  return std::visit(
      overloaded{
          [](const RotationOp& r) { return std::vector<int>{r.site}; },
          [](const MSOp& m) {
            return std::vector<int>{m.m.site_a, m.m.site_b};
          },
          [](const StarkOp& z) { return std::vector<int>{z.site}; },
          [](const LibraryGateOp& g) { return g.sites; }},
      op);
}

void Circuit::validate() const {
  for (int d : dims) QuditDim checked(d);
  for (const auto& op : ops) {
    const auto sites = instruction_sites(op);
    for (int s : sites) check_site(s, dims);
    std::visit(
        overloaded{
            [&](const RotationOp& r) {
              check_level(r.r.i, dims[r.site]);
              check_level(r.r.j, dims[r.site]);
              if (r.r.i == r.r.j) {
                throw std::invalid_argument("rotation levels must differ");
              }
            },
            [&](const MSOp& m) {
              if (m.m.site_a == m.m.site_b) {
                throw std::invalid_argument("MS sites must differ");
              }
              if (dims[m.m.site_a] != dims[m.m.site_b]) {
                throw std::invalid_argument("MS sites must share a dimension");
              }
              check_level(m.m.i, dims[m.m.site_a]);
              check_level(m.m.j, dims[m.m.site_a]);
              if (m.m.i == m.m.j) {
                throw std::invalid_argument("MS levels must differ");
              }
            },
            [&](const StarkOp& z) { check_level(z.z.level, dims[z.site]); },
            [&](const LibraryGateOp& g) {
              int n = 1;
              for (int s : g.sites) n *= dims[s];
              if (g.matrix.rows() != n || g.matrix.cols() != n) {
                throw std::invalid_argument("gate " + g.name +
                                            " does not match site dims");
              }
            }},
        op);
  }
}

Matrix local_matrix(const Instruction& op, const std::vector<int>& dims) {
  return std::visit(
      overloaded{[&](const RotationOp& r) {
                   return rotation_matrix(r.r, QuditDim(dims.at(r.site)))
                       .matrix();
                 },
                 [&](const MSOp& m) {
                   return ms_matrix(m.m, QuditDim(dims.at(m.m.site_a)))
                       .matrix();
                 },
                 [&](const StarkOp& z) {
                   return stark_matrix(z.z, QuditDim(dims.at(z.site)))
                       .matrix();
                 },
                 [](const LibraryGateOp& g) { return g.matrix; }},
      op);
}

Matrix embed(const Matrix& local, std::span<const int> sites,
             const std::vector<int>& dims) {
  const int n_sites = static_cast<int>(dims.size());
  const int full = total_dimension(dims);
  int local_dim = 1;
  for (int s : sites) local_dim *= dims.at(s);
  if (local.rows() != local_dim || local.cols() != local_dim) {
    throw DimensionError("local operator does not match sites");
  }

  // Strides of each site in the full index (site 0 most significant).
  std::vector<int> stride(n_sites, 1);
  for (int s = n_sites - 2; s >= 0; --s) stride[s] = stride[s + 1] * dims[s + 1];

  Matrix out = Matrix::Zero(full, full);
  std::vector<int> digits(sites.size());
  for (int col = 0; col < full; ++col) {
    int local_col = 0;
    int base = col;
    for (std::size_t k = 0; k < sites.size(); ++k) {
      digits[k] = (col / stride[sites[k]]) % dims[sites[k]];
      local_col = local_col * dims[sites[k]] + digits[k];
      base -= digits[k] * stride[sites[k]];
    }
    for (int local_row = 0; local_row < local_dim; ++local_row) {
      const Complex v = local(local_row, local_col);
      if (v == Complex(0.0)) continue;
      int row = base;
      int rem = local_row;
      for (int k = static_cast<int>(sites.size()) - 1; k >= 0; --k) {
        row += (rem % dims[sites[k]]) * stride[sites[k]];
        rem /= dims[sites[k]];
      }
      out(row, col) = v;
    }
  }
  return out;
}

Matrix instruction_unitary(const Instruction& op,
                           const std::vector<int>& dims) {
  const auto sites = instruction_sites(op);
  return embed(local_matrix(op, dims), sites, dims);
}

Matrix circuit_unitary(const Circuit& c) {
  c.validate();
  const int n = c.dimension();
  Matrix u = Matrix::Identity(n, n);
  for (const auto& op : c.ops) u = instruction_unitary(op, c.dims) * u;
  return u;
}

Matrix logical_block(const PulseSequence& seq) {
  const auto& dims = seq.circuit.dims;
  const Matrix full = circuit_unitary(seq.circuit);
  const int ld = seq.logical_dim;
  std::vector<int> index;
  const int n_sites = static_cast<int>(dims.size());
  std::vector<int> digits(n_sites, 0);
  int logical_total = 1;
  for (int s = 0; s < n_sites; ++s) {
    if (ld > dims[s]) throw DimensionError("logical dim exceeds site dim");
    logical_total *= ld;
  }
  for (int k = 0; k < logical_total; ++k) {
    int rem = k;
    for (int s = n_sites - 1; s >= 0; --s) {
      digits[s] = rem % ld;
      rem /= ld;
    }
    int idx = 0;
    for (int s = 0; s < n_sites; ++s) idx = idx * dims[s] + digits[s];
    index.push_back(idx);
  }
  Matrix block(logical_total, logical_total);
  for (int r = 0; r < logical_total; ++r) {
    for (int c = 0; c < logical_total; ++c) block(r, c) = full(index[r], index[c]);
  }
  return block;
}

Matrix sequence_matrix(const PulseSequence& seq) {
  return std::exp(kI * seq.global_phase) * logical_block(seq);
}

}  // namespace qudit
