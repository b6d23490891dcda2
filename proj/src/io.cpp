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

#include "qudit/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qudit {

namespace {

void check_object(const Json& j, const std::string& what, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw SchemaError(what + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "schema_version") continue;
    if (!allowed.count(key)) throw SchemaError(what + ": unknown key '" + key + "'");
  }
}

void check_version(const Json& j, const std::string& what) {
  if (!j.contains("schema_version")) throw SchemaError(what + ": missing schema_version");
  if (!j["schema_version"].is_number_integer() || j["schema_version"].get<int>() != kSchemaVersion) {
    throw SchemaError(what + ": unsupported schema_version");
  }
}

double number(const Json& j, const std::string& key, double fallback, const std::string& what) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw SchemaError(what + ": '" + key + "' must be a number");
  const double v = j[key].get<double>();
  if (!std::isfinite(v)) throw SchemaError(what + ": '" + key + "' must be finite");
  return v;
}

int integer(const Json& j, const std::string& key, const std::string& what) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw SchemaError(what + ": '" + key + "' must be an integer");
  }
  return j[key].get<int>();
}

Json versioned(Json j) {
  j["schema_version"] = kSchemaVersion;
  return j;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw FileError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw FileError("cannot rename onto '" + path + "'");
  }
}

Json read_json_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

NoiseModel noise_model_from_json(const Json& j, int error_rate_dim) {
  const std::string what = "noise model";
  check_version(j, what);
  check_object(j, what, {"pulse_depolarizing", "pulse_error_rate", "ms_depolarizing",
                         "ms_error_rate", "dephasing_rate", "tau1", "durations"});
  if (j.contains("pulse_depolarizing") && j.contains("pulse_error_rate")) {
    throw SchemaError(what + ": give pulse_depolarizing or pulse_error_rate, not both");
  }
  if (j.contains("ms_depolarizing") && j.contains("ms_error_rate")) {
    throw SchemaError(what + ": give ms_depolarizing or ms_error_rate, not both");
  }
  NoiseModel m;
  try {
    m.pulse_depolarizing = number(j, "pulse_depolarizing", 0.0, what);
    if (j.contains("pulse_error_rate")) {
      m.pulse_depolarizing =
          depolarizing_from_error_rate(number(j, "pulse_error_rate", 0.0, what), error_rate_dim);
    }
    m.ms_depolarizing = number(j, "ms_depolarizing", 0.0, what);
    if (j.contains("ms_error_rate")) {
      const int d2 = error_rate_dim * error_rate_dim;
      m.ms_depolarizing = depolarizing_from_error_rate(number(j, "ms_error_rate", 0.0, what), d2);
    }
  } catch (const std::invalid_argument& e) {
    throw SchemaError(what + ": " + e.what());
  }
  m.dephasing_rate = number(j, "dephasing_rate", 0.0, what);
  if (j.contains("tau1") && !j["tau1"].is_null()) m.tau1 = number(j, "tau1", 0.0, what);
  if (j.contains("durations")) {
    const Json& d = j["durations"];
    check_object(d, "durations", {"rotation", "ms", "stark", "library"});
    m.durations.rotation = number(d, "rotation", m.durations.rotation, what);
    m.durations.ms = number(d, "ms", m.durations.ms, what);
    m.durations.stark = number(d, "stark", m.durations.stark, what);
    m.durations.library = number(d, "library", m.durations.library, what);
  }
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(what + ": " + e.what());
  }
  return m;
}

Json to_json(const NoiseModel& m) {
  Json j{{"pulse_depolarizing", m.pulse_depolarizing},
         {"ms_depolarizing", m.ms_depolarizing},
         {"dephasing_rate", m.dephasing_rate},
         {"durations",
          {{"rotation", m.durations.rotation},
           {"ms", m.durations.ms},
           {"stark", m.durations.stark},
           {"library", m.durations.library}}}};
  j["tau1"] = std::isfinite(m.tau1) ? Json(m.tau1) : Json(nullptr);
  return versioned(j);
}

ReadoutConfig readout_from_json(const Json& j) {
  const std::string what = "readout model";
  check_version(j, what);
  check_object(j, what, {"tau1", "t_detect", "t_cool", "t_shelve", "discriminator"});
  ReadoutConfig r;
  r.model.tau1 = number(j, "tau1", r.model.tau1, what);
  r.model.t_detect = number(j, "t_detect", r.model.t_detect, what);
  r.model.t_cool = number(j, "t_cool", r.model.t_cool, what);
  r.model.t_shelve = number(j, "t_shelve", r.model.t_shelve, what);
  if (j.contains("discriminator")) {
    const Json& d = j["discriminator"];
    check_object(d, "discriminator", {"bright_rate", "dark_rate", "threshold"});
    r.discriminator.bright_rate = number(d, "bright_rate", r.discriminator.bright_rate, what);
    r.discriminator.dark_rate = number(d, "dark_rate", r.discriminator.dark_rate, what);
    if (d.contains("threshold")) r.discriminator.threshold = integer(d, "threshold", what);
  }
  if (!(r.discriminator.bright_rate > r.discriminator.dark_rate) ||
      r.discriminator.dark_rate < 0.0) {
    throw SchemaError(what + ": need bright_rate > dark_rate >= 0");
  }
  r.model.discrimination = r.discriminator;
  try {
    r.model.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(what + ": " + e.what());
  }
  return r;
}

Json to_json(const ReadoutConfig& r) {
  return versioned({{"tau1", r.model.tau1},
                    {"t_detect", r.model.t_detect},
                    {"t_cool", r.model.t_cool},
                    {"t_shelve", r.model.t_shelve},
                    {"discriminator",
                     {{"bright_rate", r.discriminator.bright_rate},
                      {"dark_rate", r.discriminator.dark_rate},
                      {"threshold", r.discriminator.threshold}}}});
}

StarkModel stark_model_from_json(const Json& j) {
  const std::string what = "Stark model";
  check_version(j, what);
  check_object(j, what, {"manifolds", "transitions", "rabi_hz", "background", "guard_band_hz"});
  StarkModel m;
  if (!j.contains("manifolds") || !j["manifolds"].is_array()) {
    throw SchemaError(what + ": 'manifolds' must be an array");
  }
  for (const auto& v : j["manifolds"]) {
    if (v == "S") m.manifolds.push_back(Manifold::S);
    else if (v == "D") m.manifolds.push_back(Manifold::D);
    else throw SchemaError(what + ": manifold entries must be \"S\" or \"D\"");
  }
  if (!j.contains("transitions") || !j["transitions"].is_array()) {
    throw SchemaError(what + ": 'transitions' must be an array");
  }
  for (const auto& t : j["transitions"]) {
    check_object(t, "transition", {"lower", "upper", "detuning_hz", "coupling"});
    m.transitions.push_back(StarkTransition{integer(t, "lower", what), integer(t, "upper", what),
                                            number(t, "detuning_hz", 0.0, what),
                                            number(t, "coupling", 1.0, what)});
  }
  m.rabi_hz = number(j, "rabi_hz", m.rabi_hz, what);
  m.background = number(j, "background", m.background, what);
  m.guard_band_hz = number(j, "guard_band_hz", m.guard_band_hz, what);
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(what + ": " + e.what());
  }
  return m;
}

Json to_json(const StarkModel& m) {
  Json manifolds = Json::array();
  for (auto s : m.manifolds) manifolds.push_back(s == Manifold::S ? "S" : "D");
  Json transitions = Json::array();
  for (const auto& t : m.transitions) {
    transitions.push_back({{"lower", t.lower},
                           {"upper", t.upper},
                           {"detuning_hz", t.detuning_hz},
                           {"coupling", t.coupling}});
  }
  return versioned({{"manifolds", manifolds},
                    {"transitions", transitions},
                    {"rabi_hz", m.rabi_hz},
                    {"background", m.background},
                    {"guard_band_hz", m.guard_band_hz}});
}

// ---------------------------------------------------------------------------

Json matrix_to_json(const Matrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array(), ii = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"re", re}, {"im", im}};
}

Matrix matrix_from_json(const Json& j) {
  const std::string what = "matrix";
  if (!j.is_object() || !j.contains("re") || !j["re"].is_array()) {
    throw SchemaError(what + ": expected {\"re\": [[...]], \"im\": [[...]]}");
  }
  const Json& re = j["re"];
  const Json im = j.contains("im") ? j["im"] : Json();
  const auto rows = re.size();
  if (rows == 0 || !re[0].is_array()) throw SchemaError(what + ": empty or malformed");
  const auto cols = re[0].size();
  if (!im.is_null() && (!im.is_array() || im.size() != rows)) {
    throw SchemaError(what + ": 're' and 'im' shapes differ");
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!re[r].is_array() || re[r].size() != cols ||
        (!im.is_null() && (!im[r].is_array() || im[r].size() != cols))) {
      throw SchemaError(what + ": ragged rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!re[r][c].is_number() || (!im.is_null() && !im[r][c].is_number())) {
        throw SchemaError(what + ": entries must be numbers");
      }
      m(r, c) = Complex(re[r][c].get<double>(), im.is_null() ? 0.0 : im[r][c].get<double>());
    }
  }
  return m;
}

CountRecord counts_from_json(const Json& j) {
  const std::string what = "counts";
  check_version(j, what);
  check_object(j, what, {"dim", "records"});
  CountRecord out;
  out.dim = integer(j, "dim", what);
  if (!j.contains("records") || !j["records"].is_array()) {
    throw SchemaError(what + ": 'records' must be an array");
  }
  std::map<std::pair<int, int>, std::size_t> index;
  std::vector<double> totals;
  for (const auto& r : j["records"]) {
    check_object(r, "count record", {"setting", "input", "outcome", "n", "N"});
    const int setting = integer(r, "setting", what);
    const int input = r.contains("input") ? integer(r, "input", what) : -1;
    const int outcome = integer(r, "outcome", what);
    const double n = number(r, "n", -1.0, what);
    const double total = number(r, "N", -1.0, what);
    if (outcome < 0 || outcome >= out.dim) throw SchemaError(what + ": outcome out of range");
    if (n < 0 || total < n) throw SchemaError(what + ": need 0 <= n <= N");
    const auto key = std::make_pair(input, setting);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.settings.size()).first;
      out.settings.push_back(SettingCounts{input, setting, std::vector<double>(out.dim, 0.0)});
      totals.push_back(total);
    } else if (totals[it->second] != total) {
      throw SchemaError(what + ": N differs within a setting");
    }
    out.settings[it->second].counts[outcome] += n;
  }
  for (std::size_t k = 0; k < out.settings.size(); ++k) {
    if (std::abs(out.settings[k].trials() - totals[k]) > 1e-9 * std::max(1.0, totals[k])) {
      throw SchemaError(what + ": outcome counts do not sum to N");
    }
  }
  try {
    out.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(what + ": " + e.what());
  }
  return out;
}

Json to_json(const CountRecord& c) {
  Json records = Json::array();
  for (const auto& s : c.settings) {
    for (int k = 0; k < static_cast<int>(s.counts.size()); ++k) {
      Json r{{"setting", s.basis}, {"outcome", k}, {"n", s.counts[k]}, {"N", s.trials()}};
      if (s.input >= 0) r["input"] = s.input;
      records.push_back(r);
    }
  }
  return versioned({{"dim", c.dim}, {"records", records}});
}

// ---------------------------------------------------------------------------

Json to_json(const DecayFit& f) {
  Json cov = Json::array();
  for (int r = 0; r < 3; ++r) cov.push_back({f.covariance(r, 0), f.covariance(r, 1), f.covariance(r, 2)});
  return {{"A", f.A},          {"B", f.B},
          {"p", f.p},          {"p_sigma", f.p_sigma()},
          {"chi2", f.chi2},    {"converged", f.converged},
          {"floor_fixed", f.floor_fixed}, {"covariance_A_p_B", cov}};
}

Json to_json(const RBResult& r) {
  Json points = Json::array();
  for (const auto& p : r.points) {
    points.push_back({{"length", p.length},
                      {"survival", p.survival},
                      {"sigma", p.sigma},
                      {"per_sequence", p.per_sequence}});
  }
  return versioned({{"fit", to_json(r.fit)},
                    {"error_per_clifford", r.error_per_clifford},
                    {"error_per_clifford_sigma", r.error_per_clifford_sigma},
                    {"mean_pulses_per_clifford", r.mean_pulses},
                    {"error_per_pulse", r.error_per_pulse},
                    {"points", points}});
}

Json to_json(const GateDecayResult& r) {
  Json points = Json::array();
  for (const auto& p : r.points) {
    points.push_back({{"repetitions", p.repetitions},
                      {"population", p.population},
                      {"contrast", p.contrast},
                      {"signal", p.signal},
                      {"sigma", p.sigma}});
  }
  return versioned({{"fit", to_json(r.fit)},
                    {"fidelity", r.fidelity},
                    {"fidelity_sigma", r.fidelity_sigma},
                    {"points", points}});
}

Json to_json(const Reconstruction& r) {
  return versioned({{"estimate", matrix_to_json(r.estimate)},
                    {"objective", r.objective},
                    {"gradient_mapping", r.gradient_mapping},
                    {"iterations", r.iterations},
                    {"converged", r.converged},
                    {"underdetermined", r.underdetermined}});
}

Json to_json(const CompensationResult& r) {
  Json tones = Json::array();
  for (const auto& t : r.tones) tones.push_back({{"detuning_hz", t.detuning_hz}, {"weight", t.weight}});
  return {{"tones", tones},
          {"feasible", r.feasible},
          {"relative_residual", r.relative_residual},
          {"message", r.message}};
}

std::string format_matrix(const Matrix& m, int precision) {
  std::string out;
  char buf[64];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%s%+.*f%+.*fi", c ? "  " : "", precision, m(r, c).real(),
                    precision, m(r, c).imag());
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace qudit
