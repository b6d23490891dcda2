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

#include "qudit/circuit_text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "qudit/gate_library.hpp"

namespace qudit {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

double parse_number(std::string_view s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("bad number '" + std::string(s) + "'");
  }
  return v;
}

int parse_int(std::string_view s) {
  int v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("bad integer '" + std::string(s) + "'");
  }
  return v;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Optional trailing key=value tokens for manifold signs.
int parse_sign(const std::string& tok, std::string_view key) {
  const std::string prefix = std::string(key) + "=";
  if (tok.rfind(prefix, 0) != 0) throw std::invalid_argument("unexpected token '" + tok + "'");
  const int v = parse_int(std::string_view(tok).substr(prefix.size()));
  if (v != 1 && v != -1) throw std::invalid_argument(std::string(key) + " must be +1 or -1");
  return v;
}

void expect_args(const std::vector<std::string>& tok, std::size_t lo, std::size_t hi) {
  if (tok.size() < lo || tok.size() > hi) {
    throw std::invalid_argument(tok[0] + " takes " + std::to_string(lo - 1) +
                                (hi > lo ? " to " + std::to_string(hi - 1) : std::string()) +
                                " arguments");
  }
}

struct GateShape {
  int sites;
  int params;
};

GateShape gate_shape(const std::string& name) {
  if (name == "H" || name == "S" || name == "X" || name == "Z" || name == "T3") return {1, 0};
  if (name == "GM") return {1, 2};
  if (name == "CINC" || name == "CSUM") return {2, 0};
  if (name == "CEX") return {2, 3};
  throw std::invalid_argument("unknown library gate '" + name + "'");
}

}  // namespace

ParseError::ParseError(int line, const std::string& what)
    : std::invalid_argument("line " + std::to_string(line) + ": " + what), line_(line) {}

double parse_angle(std::string_view token) {
  std::string s(trim(token));
  const auto p = s.find("pi");
  double v = 0.0;
  if (p == std::string::npos) {
    v = parse_number(s);
  } else {
    // [-][k*]pi[/n]
    std::string_view head(s.data(), p);
    std::string_view tail = std::string_view(s).substr(p + 2);
    double k = 1.0;
    if (head == "-") {
      k = -1.0;
    } else if (!head.empty()) {
      if (head.back() != '*') throw std::invalid_argument("bad angle '" + s + "'");
      k = parse_number(head.substr(0, head.size() - 1));
    }
    double n = 1.0;
    if (!tail.empty()) {
      if (tail.front() != '/') throw std::invalid_argument("bad angle '" + s + "'");
      n = parse_number(tail.substr(1));
      if (n == 0.0) throw std::invalid_argument("division by zero in angle");
    }
    v = k * kPi / n;
  }
  if (!std::isfinite(v)) throw std::invalid_argument("angle must be finite");
  return v;
}

LibraryGateOp make_library_gate(const std::string& name, std::vector<int> sites,
                                std::vector<double> params, const std::vector<int>& dims) {
  const GateShape shape = gate_shape(name);
  if (static_cast<int>(sites.size()) != shape.sites ||
      static_cast<int>(params.size()) != shape.params) {
    throw std::invalid_argument(name + " takes " + std::to_string(shape.sites) + " sites and " +
                                std::to_string(shape.params) + " parameters");
  }
  for (int s : sites) {
    if (s < 0 || s >= static_cast<int>(dims.size())) {
      throw std::invalid_argument("site " + std::to_string(s) + " out of range");
    }
  }
  const int d = dims[sites[0]];
  if (shape.sites == 2) {
    if (sites[0] == sites[1]) throw std::invalid_argument(name + " sites must differ");
    if (dims[sites[1]] != d) throw std::invalid_argument(name + " sites must share a dimension");
  }
  auto as_int = [&](double v) {
    if (v != std::round(v)) throw std::invalid_argument(name + " parameters must be integers");
    return static_cast<int>(v);
  };
  Matrix m;
  if (name == "H") m = hadamard(d).matrix();
  else if (name == "S") m = sgate(d).matrix();
  else if (name == "X") m = pauli_x(d).matrix();
  else if (name == "Z") m = pauli_z(d).matrix();
  else if (name == "T3") {
    if (d != 3) throw std::invalid_argument("T3 needs a qutrit site");
    m = tgate3().matrix();
  } else if (name == "GM") m = gm_rotation(as_int(params[0]), params[1], d).matrix();
  else if (name == "CINC") m = cinc(d).matrix();
  else if (name == "CSUM") m = csum(d).matrix();
  else m = cex(d, as_int(params[0]), as_int(params[1]), as_int(params[2])).matrix();
  return LibraryGateOp{name, std::move(sites), std::move(params), std::move(m)};
}

PulseSequence parse_circuit(std::string_view text) {
  PulseSequence seq;
  bool have_dims = false;
  int logical = 0;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      if (const auto colon = line.find(':'); colon != std::string_view::npos) {
        const std::string key(trim(line.substr(0, colon)));
        const auto vals = split(line.substr(colon + 1));
        if (key == "dims") {
          if (have_dims) throw std::invalid_argument("duplicate dims header");
          if (!seq.circuit.ops.empty()) throw std::invalid_argument("dims must precede instructions");
          if (vals.empty()) throw std::invalid_argument("dims needs at least one site");
          for (const auto& v : vals) {
            const int d = parse_int(v);
            QuditDim checked(d);
            seq.circuit.dims.push_back(d);
          }
          have_dims = true;
        } else if (key == "logical") {
          if (vals.size() != 1) throw std::invalid_argument("logical takes one value");
          logical = parse_int(vals[0]);
        } else if (key == "global_phase") {
          if (vals.size() != 1) throw std::invalid_argument("global_phase takes one value");
          seq.global_phase = parse_angle(vals[0]);
        } else {
          throw std::invalid_argument("unknown header '" + key + "'");
        }
        continue;
      }
      if (!have_dims) throw std::invalid_argument("missing 'dims:' header before instructions");
      const auto tok = split(line);
      const std::string& op = tok[0];
      if (op == "R") {
        expect_args(tok, 6, 7);
        RotationOp r;
        r.site = parse_int(tok[1]);
        r.r = TwoLevelRotation{parse_int(tok[2]), parse_int(tok[3]), parse_angle(tok[4]),
                               parse_angle(tok[5]), +1};
        if (tok.size() == 7) r.r.manifold_sign = parse_sign(tok[6], "sign");
        seq.circuit.ops.emplace_back(r);
      } else if (op == "MS") {
        expect_args(tok, 7, 9);
        MSGateSpec m;
        m.site_a = parse_int(tok[1]);
        m.site_b = parse_int(tok[2]);
        m.i = parse_int(tok[3]);
        m.j = parse_int(tok[4]);
        m.theta = parse_angle(tok[5]);
        m.phi = parse_angle(tok[6]);
        for (std::size_t k = 7; k < tok.size(); ++k) {
          if (tok[k].rfind("sign_a=", 0) == 0) m.sign_a = parse_sign(tok[k], "sign_a");
          else m.sign_b = parse_sign(tok[k], "sign_b");
        }
        seq.circuit.ops.emplace_back(MSOp{m});
      } else if (op == "Z") {
        expect_args(tok, 4, 4);
        seq.circuit.ops.emplace_back(
            StarkOp{parse_int(tok[1]), StarkPhaseGate{parse_int(tok[2]), parse_angle(tok[3])}});
      } else if (op == "GATE") {
        if (tok.size() < 2) throw std::invalid_argument("GATE needs a name");
        const GateShape shape = gate_shape(tok[1]);
        if (static_cast<int>(tok.size()) != 2 + shape.sites + shape.params) {
          throw std::invalid_argument(tok[1] + " takes " + std::to_string(shape.sites) +
                                      " sites and " + std::to_string(shape.params) +
                                      " parameters");
        }
        std::vector<int> sites;
        std::vector<double> params;
        for (int k = 0; k < shape.sites; ++k) sites.push_back(parse_int(tok[2 + k]));
        for (int k = 0; k < shape.params; ++k) params.push_back(parse_angle(tok[2 + shape.sites + k]));
        seq.circuit.ops.emplace_back(
            make_library_gate(tok[1], std::move(sites), std::move(params), seq.circuit.dims));
      } else {
        throw std::invalid_argument("unknown instruction '" + op + "'");
      }
      // Validate the new instruction alone so the error points at this line.
      Circuit one{seq.circuit.dims, {seq.circuit.ops.back()}};
      one.validate();
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!have_dims) throw ParseError(std::max(line_no, 1), "missing 'dims:' header");
  const int min_dim = *std::min_element(seq.circuit.dims.begin(), seq.circuit.dims.end());
  if (logical == 0) logical = min_dim;
  if (logical < 2 || logical > min_dim) {
    throw ParseError(line_no, "logical dimension must lie in [2, min(dims)]");
  }
  seq.logical_dim = logical;
  return seq;
}

std::string emit_circuit(const Circuit& c) {
  std::string out = "dims:";
  for (int d : c.dims) out += " " + std::to_string(d);
  out += "\n";
  for (const auto& op : c.ops) {
    if (const auto* r = std::get_if<RotationOp>(&op)) {
      out += "R " + std::to_string(r->site) + " " + std::to_string(r->r.i) + " " +
             std::to_string(r->r.j) + " " + num(r->r.theta) + " " + num(r->r.phi);
      if (r->r.manifold_sign != 1) out += " sign=-1";
    } else if (const auto* m = std::get_if<MSOp>(&op)) {
      out += "MS " + std::to_string(m->m.site_a) + " " + std::to_string(m->m.site_b) + " " +
             std::to_string(m->m.i) + " " + std::to_string(m->m.j) + " " + num(m->m.theta) +
             " " + num(m->m.phi);
      if (m->m.sign_a != 1) out += " sign_a=-1";
      if (m->m.sign_b != 1) out += " sign_b=-1";
    } else if (const auto* z = std::get_if<StarkOp>(&op)) {
      out += "Z " + std::to_string(z->site) + " " + std::to_string(z->z.level) + " " +
             num(z->z.theta);
    } else {
      const auto& g = std::get<LibraryGateOp>(op);
      out += "GATE " + g.name;
      for (int s : g.sites) out += " " + std::to_string(s);
      for (double p : g.params) out += " " + num(p);
    }
    out += "\n";
  }
  return out;
}

std::string emit_circuit(const PulseSequence& seq) {
  std::string body = emit_circuit(seq.circuit);
  const auto nl = body.find('\n');
  std::string head = body.substr(0, nl + 1);
  head += "logical: " + std::to_string(seq.logical_dim) + "\n";
  if (seq.global_phase != 0.0) head += "global_phase: " + num(seq.global_phase) + "\n";
  return head + body.substr(nl + 1);
}

}  // namespace qudit

namespace qudit {

namespace {

Complex parse_coefficient(std::string c) {
  std::erase(c, '*');
  if (c.empty() || c == "+") return 1.0;
  if (c == "-") return -1.0;
  double sign = 1.0;
  if (c.front() == '+' || c.front() == '-') {
    sign = c.front() == '-' ? -1.0 : 1.0;
    c.erase(0, 1);
  }
  bool imaginary = false;
  if (!c.empty() && (c.back() == 'i' || c.back() == 'j')) {
    imaginary = true;
    c.pop_back();
  } else if (!c.empty() && c.front() == 'i') {
    imaginary = true;
    c.erase(0, 1);
  }
  const double mag = c.empty() ? 1.0 : parse_number(c);
  return imaginary ? Complex(0.0, sign * mag) : Complex(sign * mag, 0.0);
}

}  // namespace

Vector parse_ket(std::string_view text, int dim) {
  std::string s;
  for (char ch : text) {
    if (ch != ' ' && ch != '\t') s.push_back(ch);
  }
  if (s.empty()) throw std::invalid_argument("empty ket expression");
  // Strip an outer "( ... )" with an optional "/sqrt(n)" or "/n" scale; the
  // result is normalized anyway.
  if (s.front() == '(') {
    const auto close = s.rfind(')');
    const auto slash = s.find(")/");
    if (slash != std::string::npos) {
      const std::string scale = s.substr(slash + 2);
      if (scale.rfind("sqrt(", 0) == 0 && scale.back() == ')') {
        parse_number(std::string_view(scale).substr(5, scale.size() - 6));
      } else {
        parse_number(scale);
      }
      s = s.substr(1, slash - 1);
    } else if (close == s.size() - 1) {
      s = s.substr(1, s.size() - 2);
    } else {
      throw std::invalid_argument("unbalanced parentheses in ket");
    }
  }
  std::vector<std::pair<int, Complex>> terms;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto bar = s.find('|', pos);
    if (bar == std::string::npos) throw std::invalid_argument("expected |k> in ket");
    const auto close = s.find('>', bar);
    if (close == std::string::npos) throw std::invalid_argument("unterminated ket");
    const Complex c = parse_coefficient(s.substr(pos, bar - pos));
    const int level = parse_int(std::string_view(s).substr(bar + 1, close - bar - 1));
    if (level < 0) throw std::invalid_argument("negative level in ket");
    terms.emplace_back(level, c);
    pos = close + 1;
  }
  int max_level = 0;
  for (const auto& [k, c] : terms) max_level = std::max(max_level, k);
  if (dim == 0) dim = std::max(2, max_level + 1);
  if (max_level >= dim) throw std::invalid_argument("ket level exceeds dimension");
  Vector v = Vector::Zero(dim);
  for (const auto& [k, c] : terms) v(k) += c;
  if (v.norm() < 1e-12) throw std::invalid_argument("ket has zero norm");
  return v.normalized();
}

}  // namespace qudit
