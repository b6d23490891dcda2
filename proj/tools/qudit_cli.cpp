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

// qudit: compile, simulate, benchmark and reconstruct trapped-ion qudit
// experiments from the command line.
//
// Exit codes:
//   0  success
//   1  internal error
//   2  usage error (bad flags)
//   3  schema or parse error in an input document
//   4  file I/O error
//   5  solver or fit did not converge
//   6  invalid physical input (out-of-range values, resonant tones, ...)
// Errors are also reported as one JSON object on stderr.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qudit/benchmark.hpp"
#include "qudit/circuit_text.hpp"
#include "qudit/compiler.hpp"
#include "qudit/gate_library.hpp"
#include "qudit/io.hpp"
#include "qudit/physics.hpp"
#include "qudit/simulator.hpp"
#include "qudit/tomography.hpp"

using namespace qudit;

namespace {

enum Exit { kOk = 0, kInternal = 1, kUsage = 2, kSchema = 3, kFile = 4, kSolver = 5, kInput = 6 };

class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, sep);) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& t : split_list(s)) {
    std::size_t used = 0;
    const int v = std::stoi(t, &used);
    if (used != t.size()) throw std::invalid_argument("bad integer '" + t + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<double> double_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : split_list(s)) out.push_back(parse_angle(t));
  return out;
}

/// File path, or inline "p=2e-4,ms=1e-3,dephasing=5,tau1=1.1" where p and ms
/// are average error rates.
NoiseModel load_noise(const std::string& spec, int dim) {
  if (spec.empty()) return NoiseModel{};
  if (spec.find('=') == std::string::npos) return noise_model_from_json(read_json_file(spec), dim);
  Json j{{"schema_version", kSchemaVersion}};
  for (const auto& kv : split_list(spec)) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw SchemaError("noise: expected key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const double v = parse_angle(kv.substr(eq + 1));
    if (key == "p") j["pulse_error_rate"] = v;
    else if (key == "ms") j["ms_error_rate"] = v;
    else if (key == "dephasing") j["dephasing_rate"] = v;
    else if (key == "tau1") j["tau1"] = v;
    else throw SchemaError("noise: unknown key '" + key + "'");
  }
  return noise_model_from_json(j, dim);
}

struct Output {
  std::string dir;

  void write(const std::string& name, const std::string& content) const {
    if (dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw FileError("cannot create directory '" + dir + "'");
    write_file_atomic((std::filesystem::path(dir) / name).string(), content);
  }
};

void print_json(const Json& j) { std::cout << j.dump(2) << "\n"; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// decompose

struct DecomposeArgs {
  std::string gate;
  std::string unitary_file;
  bool identity = false;
  int dim = 0;
  std::string graph = "ladder";
  std::string levels = "1,0,1";
  bool physical = false;
  std::string out;
  std::string report;
};

std::pair<std::string, int> split_gate_name(const std::string& gate, int dim) {
  // "H3" -> ("H", 3); "T3" stays the qutrit T gate.
  std::string name = gate;
  std::transform(name.begin(), name.end(), name.begin(), ::toupper);
  if (name == "T3") return {name, 3};
  std::size_t k = name.size();
  while (k > 0 && std::isdigit(static_cast<unsigned char>(name[k - 1]))) --k;
  if (k < name.size() && k > 0) {
    const int d = std::stoi(name.substr(k));
    if (dim != 0 && dim != d) throw std::invalid_argument("--dim contradicts gate name");
    return {name.substr(0, k), d};
  }
  return {name, dim == 0 ? 3 : dim};
}

int cmd_decompose(const DecomposeArgs& a) {
  const int chosen = (!a.gate.empty()) + (!a.unitary_file.empty()) + a.identity;
  if (chosen != 1) throw CLI::ValidationError("decompose", "give exactly one of --gate, --unitary, --identity");
  PulseSequence seq;
  Matrix target;
  std::string label;
  auto graph_for = [&](int d) {
    if (a.graph == "ladder") return CouplingGraph::ladder(d);
    if (a.graph == "complete") return CouplingGraph::complete(d);
    if (a.graph == "native") return CouplingGraph::native(LevelMap::standard(), d);
    throw std::invalid_argument("unknown coupling graph '" + a.graph + "'");
  };
  if (a.identity) {
    const int d = a.dim == 0 ? 3 : a.dim;
    target = Matrix::Identity(d, d);
    seq = decompose_su_d(UnitaryOp(target), graph_for(d));
    label = "identity";
  } else if (!a.unitary_file.empty()) {
    target = matrix_from_json(read_json_file(a.unitary_file));
    if (target.rows() != target.cols() || !is_unitary(target, 1e-9)) {
      throw std::invalid_argument("matrix file is not a square unitary");
    }
    seq = decompose_su_d(UnitaryOp(target), graph_for(static_cast<int>(target.rows())));
    label = a.unitary_file;
  } else {
    const auto [name, d] = split_gate_name(a.gate, a.dim);
    label = name + std::to_string(d);
    if (name == "CINC") {
      seq = synth_cinc(d);
      target = cinc(d).matrix();
    } else if (name == "CSUM") {
      seq = synth_csum(d);
      target = csum(d).matrix();
    } else if (name == "CEX") {
      const auto lv = int_list(a.levels);
      if (lv.size() != 3) throw std::invalid_argument("--levels takes c,t1,t2");
      seq = synth_cex(lv[0], lv[1], lv[2], d);
      target = cex(d, lv[0], lv[1], lv[2]).matrix();
    } else {
      target = make_library_gate(name, {0}, {}, {d}).matrix;
      seq = decompose_su_d(UnitaryOp(target), graph_for(d));
    }
  }
  if (a.physical) seq = to_physical_frame(seq, LevelMap::standard());

  const double distance = phase_distance(sequence_matrix(seq), target);
  const auto res = count_resources(seq);
  Json report{{"target", label},
              {"logical_dim", seq.logical_dim},
              {"dims", seq.circuit.dims},
              {"verified", distance < 1e-9},
              {"phase_distance", distance},
              {"resources",
               {{"rotations", res.rotations},
                {"stark_pulses", res.stark_pulses},
                {"ms_gates", res.ms_gates},
                {"ms_pi_half_equivalents", res.ms_pi_half_equivalents},
                {"library_gates", res.library_gates}}}};
  report["schema_version"] = kSchemaVersion;

  std::string text = "# target: " + label + "\n";
  text += "# verified: " + std::string(distance < 1e-9 ? "yes" : "no") +
          " (phase distance " + fmt(distance) + ")\n";
  text += "# rotations " + std::to_string(res.rotations) + ", stark " +
          std::to_string(res.stark_pulses) + ", MS(pi/2)-equivalents " +
          fmt(res.ms_pi_half_equivalents) + "\n";
  text += emit_circuit(seq);
  if (!a.out.empty()) write_file_atomic(a.out, text);
  else std::cout << text;
  if (!a.report.empty()) write_file_atomic(a.report, report.dump(2) + "\n");
  return kOk;
}

// ---------------------------------------------------------------------------
// run

struct RunArgs {
  std::string circuit;
  std::string input;
  int shots = 1000;
  std::uint64_t seed = 1;
  std::string noise;
  std::string readout;
  std::string out;
};

int cmd_run(const RunArgs& a) {
  PulseSequence seq;
  try {
    seq = parse_circuit(read_file(a.circuit));
  } catch (const ParseError& e) {
    throw SchemaError(a.circuit + ": " + e.what());
  }
  const auto& dims = seq.circuit.dims;
  std::vector<int> levels(dims.size(), 0);
  if (!a.input.empty()) levels = int_list(a.input);
  if (levels.size() != dims.size()) throw std::invalid_argument("--input needs one level per site");
  const NoiseModel noise = load_noise(a.noise, seq.logical_dim);
  ReadoutModel readout = ideal_readout();
  if (!a.readout.empty()) readout = readout_from_json(read_json_file(a.readout)).model;

  const auto input = DensityState::from_pure(QuditState::basis(dims, levels));
  const auto final_state = run_noisy(seq.circuit, input, noise);
  const auto shots = sample_readout(final_state, readout, a.seed, a.shots);

  std::map<std::vector<int>, int> histogram;
  std::string csv = "shot";
  for (std::size_t s = 0; s < dims.size(); ++s) csv += ",site" + std::to_string(s);
  csv += "\n";
  for (std::size_t k = 0; k < shots.size(); ++k) {
    ++histogram[shots[k].outcome];
    csv += std::to_string(k);
    for (int v : shots[k].outcome) csv += "," + std::to_string(v);
    csv += "\n";
  }
  Json hist = Json::array();
  for (const auto& [outcome, n] : histogram) hist.push_back({{"outcome", outcome}, {"count", n}});
  const RealVector pops = final_state.populations();
  Json populations = Json::array();
  for (int k = 0; k < pops.size(); ++k) populations.push_back(pops(k));
  Json summary{{"schema_version", kSchemaVersion},
               {"circuit", a.circuit},
               {"dims", dims},
               {"input", levels},
               {"shots", a.shots},
               {"seed", a.seed},
               {"noise", to_json(noise)},
               {"histogram", hist},
               {"populations", populations}};
  Output out{a.out};
  out.write("shots.csv", csv);
  out.write("summary.json", summary.dump(2) + "\n");
  print_json(summary);
  return kOk;
}

// ---------------------------------------------------------------------------
// rb

struct RBArgs {
  int dim = 3;
  std::string lengths = "1,5,10,20,40";
  int sequences = 20;
  int shots = 10000;
  std::uint64_t seed = 1;
  std::string noise;
  bool free_floor = false;
  std::string out;
};

int cmd_rb(const RBArgs& a) {
  RBSequenceSpec spec;
  spec.dim = a.dim;
  spec.lengths = int_list(a.lengths);
  spec.sequences_per_length = a.sequences;
  spec.seed = a.seed;
  const NoiseModel noise = load_noise(a.noise, a.dim);
  const RBResult res = run_rb(spec, noise, a.shots, !a.free_floor);
  Json j = to_json(res);
  j["dim"] = a.dim;
  j["shots_per_length"] = a.shots;
  j["seed"] = a.seed;
  j["noise"] = to_json(noise);
  std::string csv = "length,survival,sigma\n";
  for (const auto& p : res.points) {
    csv += std::to_string(p.length) + "," + fmt(p.survival) + "," + fmt(p.sigma) + "\n";
  }
  Output out{a.out};
  out.write("rb_table.csv", csv);
  out.write("rb_fit.json", j.dump(2) + "\n");
  print_json(j);
  if (!res.fit.converged) throw SolverFailure("RB fit did not converge; raw data written");
  return kOk;
}

// ---------------------------------------------------------------------------
// decay

struct DecayArgs {
  std::string gate = "CEX";
  double fidelity = 1.0;
  int max_reps = 24;
  int shots = 10000;
  std::uint64_t seed = 1;
  std::string noise;
  std::string out;
};

int cmd_decay(const DecayArgs& a) {
  GateDecaySpec spec;
  std::string g = a.gate;
  std::transform(g.begin(), g.end(), g.begin(), ::toupper);
  if (g == "CEX") spec.gate = DecayGate::kCex;
  else if (g == "CINC") spec.gate = DecayGate::kCinc;
  else throw std::invalid_argument("--gate must be CEX or CINC");
  for (int n = 0; n <= a.max_reps; n += spec.period()) spec.repetitions.push_back(n);
  spec.gate_depolarizing = gate_depolarizing_for_fidelity(a.fidelity);
  spec.seed = a.seed;
  const NoiseModel noise = load_noise(a.noise, 3);
  const auto res = run_gate_decay(spec, noise, a.shots);
  Json j = to_json(res);
  j["gate"] = g;
  j["calibrated_fidelity"] = a.fidelity;
  j["shots"] = a.shots;
  j["seed"] = a.seed;
  std::string csv = "repetitions,population,contrast,signal,sigma\n";
  for (const auto& p : res.points) {
    csv += std::to_string(p.repetitions) + "," + fmt(p.population) + "," + fmt(p.contrast) +
           "," + fmt(p.signal) + "," + fmt(p.sigma) + "\n";
  }
  Output out{a.out};
  out.write("decay_table.csv", csv);
  out.write("decay_fit.json", j.dump(2) + "\n");
  print_json(j);
  if (!res.fit.converged) throw SolverFailure("decay fit did not converge; raw data written");
  return kOk;
}

// ---------------------------------------------------------------------------
// tomo

struct TomoArgs {
  std::string target;  // ket for state, gate name for process
  std::string counts;
  int dim = 0;
  int shots = 1000;
  double depolarize = 0.0;
  double beta = 0.5;
  int bootstrap = 20;
  std::uint64_t seed = 1;
  std::string out;
};

Json constraint_report(const Matrix& x) {
  return {{"trace", x.trace().real()},
          {"min_eigenvalue", min_eigenvalue(x)},
          {"hermitian", is_hermitian(x, 1e-12)}};
}

int cmd_tomo(const TomoArgs& a, bool process) {
  SolverOptions opts;
  opts.beta = a.beta;
  std::mt19937_64 rng(a.seed);
  Output out{a.out};
  Json j{{"schema_version", kSchemaVersion},
         {"kind", process ? "process" : "state"},
         {"shots", a.shots},
         {"seed", a.seed},
         {"beta", a.beta}};

  if (!process) {
    std::optional<Vector> psi;
    if (!a.target.empty()) psi = parse_ket(a.target, a.dim);
    CountRecord counts;
    int d = 0;
    if (!a.counts.empty()) {
      counts = counts_from_json(read_json_file(a.counts));
      d = counts.dim;
      if (psi && psi->size() != d) throw std::invalid_argument("target dimension differs from counts");
    } else {
      if (!psi) throw CLI::ValidationError("tomo state", "give --target or --counts");
      d = static_cast<int>(psi->size());
      const Matrix rho = (1 - a.depolarize) * (*psi) * psi->adjoint() +
                         a.depolarize * Matrix::Identity(d, d) / double(d);
      counts = simulate_state_counts(rho, standard_bases(d), a.shots, rng);
    }
    const auto bases = standard_bases(d);
    const auto rec = reconstruct_state(counts, bases, opts);
    j["dim"] = d;
    j["reconstruction"] = to_json(rec);
    j["constraints"] = constraint_report(rec.estimate);
    if (psi) {
      const QuditState target({d}, *psi);
      j["fidelity"] = fidelity(DensityState({d}, rec.estimate), target);
      if (a.bootstrap > 0) {
        const auto iv = bootstrap_errors(
            counts,
            [&](const CountRecord& c) {
              return fidelity(DensityState({d}, reconstruct_state(c, bases, opts).estimate), target);
            },
            a.bootstrap, a.seed + 1);
        j["bootstrap"] = {{"estimate", iv.estimate}, {"lower", iv.lower}, {"upper", iv.upper},
                          {"resamples", a.bootstrap}};
      }
    }
    out.write("counts.json", to_json(counts).dump(2) + "\n");
    out.write("estimate.txt", format_matrix(rec.estimate));
    out.write("tomo.json", j.dump(2) + "\n");
    print_json(j);
    if (!rec.converged) throw SolverFailure("reconstruction did not converge");
    return kOk;
  }

  const auto [name, d] = split_gate_name(a.target.empty() ? "I" : a.target, a.dim);
  const Matrix u = name == "I" ? Matrix(Matrix::Identity(d, d))
                               : make_library_gate(name, {0}, {}, {d}).matrix;
  const auto bases = standard_bases(d);
  const auto inputs = default_inputs(bases);
  CountRecord counts;
  if (!a.counts.empty()) {
    counts = counts_from_json(read_json_file(a.counts));
    if (counts.dim != d) throw std::invalid_argument("counts dimension differs from target");
  } else {
    const double p = a.depolarize;
    ChannelMap channel = [u, p, d](const Matrix& rho) {
      return Matrix((1 - p) * u * rho * u.adjoint() + p * rho.trace() * Matrix::Identity(d, d) / double(d));
    };
    counts = simulate_process_counts(channel, inputs, bases, a.shots, rng);
  }
  const auto rec = reconstruct_process(counts, inputs, bases, opts);
  j["dim"] = d;
  j["target"] = name + (name == "T3" ? "" : std::to_string(d));
  j["reconstruction"] = to_json(rec);
  j["constraints"] = constraint_report(rec.estimate);
  j["fidelity"] = process_fidelity(ChoiOperator(rec.estimate, d), UnitaryOp(u));
  if (a.bootstrap > 0) {
    const auto iv = bootstrap_errors(
        counts,
        [&](const CountRecord& c) {
          return process_fidelity(ChoiOperator(reconstruct_process(c, inputs, bases, opts).estimate, d),
                                  UnitaryOp(u));
        },
        a.bootstrap, a.seed + 1);
    j["bootstrap"] = {{"estimate", iv.estimate}, {"lower", iv.lower}, {"upper", iv.upper},
                      {"resamples", a.bootstrap}};
  }
  out.write("counts.json", to_json(counts).dump(2) + "\n");
  out.write("choi.txt", format_matrix(rec.estimate));
  out.write("tomo.json", j.dump(2) + "\n");
  print_json(j);
  if (!rec.converged) throw SolverFailure("reconstruction did not converge");
  return kOk;
}

// ---------------------------------------------------------------------------
// stark

struct StarkArgs {
  std::string model;
  std::string levels = "0,1,2";
  std::string sweep = "-20e6,20e6,401";
  std::string tones;
  std::string target = "1,0";
  double target_hz = 1000.0;
  bool equalize = false;
  std::string out;
};

int cmd_stark(const StarkArgs& a) {
  const StarkModel model =
      a.model.empty() ? StarkModel::illustrative() : stark_model_from_json(read_json_file(a.model));
  const auto levels = int_list(a.levels);
  const auto sweep = double_list(a.sweep);
  if (sweep.size() != 3 || sweep[2] < 2) throw std::invalid_argument("--sweep takes start,stop,points");
  const int points = static_cast<int>(sweep[2]);

  std::vector<std::pair<int, int>> pairs;
  for (std::size_t x = 0; x < levels.size(); ++x)
    for (std::size_t y = x + 1; y < levels.size(); ++y) pairs.emplace_back(levels[x], levels[y]);
  std::string csv = "detuning_hz";
  for (auto [i, k] : pairs) csv += ",shift_" + std::to_string(i) + "_" + std::to_string(k);
  csv += "\n";
  int skipped = 0;
  for (int n = 0; n < points; ++n) {
    const double delta = sweep[0] + (sweep[1] - sweep[0]) * n / (points - 1);
    std::string row = fmt(delta);
    try {
      for (auto [i, k] : pairs) row += "," + fmt(stark_shift(model, i, k, delta));
    } catch (const ResonanceError&) {
      ++skipped;
      continue;
    }
    csv += row + "\n";
  }

  Json j{{"schema_version", kSchemaVersion},
         {"model", to_json(model)},
         {"levels", levels},
         {"sweep_points", points},
         {"sweep_points_skipped_near_resonance", skipped}};
  if (!a.tones.empty()) {
    const auto tones = double_list(a.tones);
    CompensationResult res;
    if (a.equalize) {
      res = solve_manifold_equalization(model, levels, tones, a.target_hz);
    } else {
      const auto t = int_list(a.target);
      if (t.size() != 2) throw std::invalid_argument("--target takes shifted,reference");
      res = solve_compensation(model, levels, tones, {t[0], t[1]}, a.target_hz);
    }
    j["compensation"] = to_json(res);
    Json shifts = Json::array();
    for (auto [i, k] : pairs) {
      shifts.push_back({{"pair", {i, k}}, {"shift_hz", stark_shift(model, i, k, res.tones)}});
    }
    j["compensated_shifts"] = shifts;
  }
  Output out{a.out};
  out.write("stark_sweep.csv", csv);
  out.write("stark.json", j.dump(2) + "\n");
  print_json(j);
  return kOk;
}

int report_error(int code, const std::string& kind, const std::string& message) {
  Json e{{"error", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << e.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trapped-ion qudit compiler, simulator and analysis tools"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 ok, 1 internal, 2 usage, 3 schema/parse, 4 file I/O, "
      "5 non-convergence, 6 invalid input. Errors are printed as JSON on stderr.");

  DecomposeArgs dec;
  auto* s_dec = app.add_subcommand("decompose", "Compile a gate into native pulses");
  s_dec->add_option("--gate", dec.gate, "Library gate: H, S, X, Z, T3, CINC, CSUM, CEX (suffix sets d, e.g. H3)");
  s_dec->add_option("--unitary", dec.unitary_file, "JSON matrix file {re, im}");
  s_dec->add_flag("--identity", dec.identity, "Decompose the identity");
  s_dec->add_option("--dim", dec.dim, "Qudit dimension")->check(CLI::Range(2, 7));
  s_dec->add_option("--graph", dec.graph, "Coupling graph: ladder, complete, native")->capture_default_str();
  s_dec->add_option("--levels", dec.levels, "CEX control and target levels c,t1,t2")->capture_default_str();
  s_dec->add_flag("--physical", dec.physical, "Rewrite into the physical frame of the standard level map");
  s_dec->add_option("--out", dec.out, "Write the circuit here instead of stdout");
  s_dec->add_option("--report", dec.report, "Write a JSON resource report");

  RunArgs run;
  auto* s_run = app.add_subcommand("run", "Simulate a circuit file and sample readout shots");
  s_run->add_option("--circuit", run.circuit, "Circuit text file")->required();
  s_run->add_option("--input", run.input, "Initial basis levels, one per site, e.g. 2,0");
  s_run->add_option("--shots", run.shots, "Readout shots")->capture_default_str()->check(CLI::NonNegativeNumber);
  s_run->add_option("--seed", run.seed, "RNG seed")->capture_default_str();
  s_run->add_option("--noise", run.noise, "Noise JSON file or inline p=..,ms=..,dephasing=..,tau1=..");
  s_run->add_option("--readout", run.readout, "Readout model JSON (default: ideal)");
  s_run->add_option("--out", run.out, "Output directory for shots.csv and summary.json");

  RBArgs rb;
  auto* s_rb = app.add_subcommand("rb", "Randomized benchmarking of single-qudit Cliffords");
  s_rb->add_option("--dim", rb.dim, "Prime qudit dimension")->capture_default_str();
  s_rb->add_option("--lengths", rb.lengths, "Sequence lengths")->capture_default_str();
  s_rb->add_option("--sequences", rb.sequences, "Sequences per length (>= 20)")->capture_default_str();
  s_rb->add_option("--shots", rb.shots, "Shots per length (0 = exact)")->capture_default_str();
  s_rb->add_option("--seed", rb.seed, "RNG seed")->capture_default_str();
  s_rb->add_option("--noise", rb.noise, "Noise JSON file or inline p=<per-pulse error rate>");
  s_rb->add_flag("--free-floor", rb.free_floor, "Fit B instead of fixing it at 1/d");
  s_rb->add_option("--out", rb.out, "Output directory for rb_table.csv and rb_fit.json");

  DecayArgs dc;
  auto* s_dc = app.add_subcommand("decay", "Entangling-gate fidelity decay");
  s_dc->add_option("--gate", dc.gate, "CEX or CINC")->capture_default_str();
  s_dc->add_option("--fidelity", dc.fidelity, "Calibrated single-gate fidelity")->capture_default_str();
  s_dc->add_option("--max-reps", dc.max_reps, "Largest repetition count")->capture_default_str();
  s_dc->add_option("--shots", dc.shots, "Shots per point (0 = exact)")->capture_default_str();
  s_dc->add_option("--seed", dc.seed, "RNG seed")->capture_default_str();
  s_dc->add_option("--noise", dc.noise, "Extra pulse-level noise");
  s_dc->add_option("--out", dc.out, "Output directory");

  TomoArgs tomo;
  auto* s_tomo = app.add_subcommand("tomo", "State or process tomography");
  s_tomo->require_subcommand(1);
  auto add_tomo = [&](CLI::App* s, const char* target_help) {
    s->add_option("--target", tomo.target, target_help);
    s->add_option("--counts", tomo.counts, "Counts JSON instead of simulated data");
    s->add_option("--dim", tomo.dim, "Qudit dimension")->check(CLI::Range(2, 7));
    s->add_option("--shots", tomo.shots, "Shots per setting")->capture_default_str();
    s->add_option("--depolarize", tomo.depolarize, "Depolarizing strength on the simulated data")->capture_default_str();
    s->add_option("--beta", tomo.beta, "Hedging parameter")->capture_default_str();
    s->add_option("--bootstrap", tomo.bootstrap, "Bootstrap resamples (0 = off)")->capture_default_str();
    s->add_option("--seed", tomo.seed, "RNG seed")->capture_default_str();
    s->add_option("--out", tomo.out, "Output directory");
  };
  auto* s_state = s_tomo->add_subcommand("state", "Reconstruct a density matrix");
  add_tomo(s_state, "Target ket, e.g. \"(|0>+|1>+|2>)/sqrt(3)\"");
  auto* s_proc = s_tomo->add_subcommand("process", "Reconstruct a Choi operator");
  add_tomo(s_proc, "Target gate: I, H, S, X, Z, T3 (suffix sets d)");

  StarkArgs st;
  auto* s_st = app.add_subcommand("stark", "AC-Stark shift sweep and multi-tone compensation");
  s_st->add_option("--model", st.model, "Stark model JSON (default: illustrative)");
  s_st->add_option("--levels", st.levels, "Occupied levels")->capture_default_str();
  s_st->add_option("--sweep", st.sweep, "start,stop,points in Hz")->capture_default_str();
  s_st->add_option("--tones", st.tones, "Tone detunings in Hz for compensation");
  s_st->add_option("--target", st.target, "shifted,reference level pair")->capture_default_str();
  s_st->add_option("--target-hz", st.target_hz, "Target shift in Hz")->capture_default_str();
  s_st->add_flag("--equalize", st.equalize, "Shift S levels equally against D levels instead");
  s_st->add_option("--out", st.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(kUsage, "usage", e.what());
  }

  try {
    if (*s_dec) return cmd_decompose(dec);
    if (*s_run) return cmd_run(run);
    if (*s_rb) return cmd_rb(rb);
    if (*s_dc) return cmd_decay(dc);
    if (*s_state) return cmd_tomo(tomo, false);
    if (*s_proc) return cmd_tomo(tomo, true);
    if (*s_st) return cmd_stark(st);
  } catch (const CLI::ParseError& e) {
    return report_error(kUsage, "usage", e.what());
  } catch (const SchemaError& e) {
    return report_error(kSchema, "schema", e.what());
  } catch (const ParseError& e) {
    return report_error(kSchema, "parse", e.what());
  } catch (const FileError& e) {
    return report_error(kFile, "file", e.what());
  } catch (const SolverFailure& e) {
    return report_error(kSolver, "non_convergence", e.what());
  } catch (const std::invalid_argument& e) {
    return report_error(kInput, "invalid_input", e.what());
  } catch (const std::exception& e) {
    return report_error(kInternal, "internal", e.what());
  }
  return kInternal;
}
