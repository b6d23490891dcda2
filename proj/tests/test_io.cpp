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

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "qudit/circuit_text.hpp"
#include "qudit/compiler.hpp"
#include "qudit/gate_library.hpp"
#include "qudit/io.hpp"

using namespace qudit;

namespace {

int parse_error_line(const std::string& text) {
  try {
    parse_circuit(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(CircuitText, PiSugar) {
  EXPECT_DOUBLE_EQ(parse_angle("pi"), oracle::kPi);
  EXPECT_DOUBLE_EQ(parse_angle("-pi/2"), -oracle::kPi / 2);
  EXPECT_DOUBLE_EQ(parse_angle("3*pi/4"), 3 * oracle::kPi / 4);
  EXPECT_DOUBLE_EQ(parse_angle("0.25"), 0.25);
  EXPECT_THROW(parse_angle("pi/0"), std::invalid_argument);
  EXPECT_THROW(parse_angle("2pi"), std::invalid_argument);
  EXPECT_THROW(parse_angle("inf"), std::invalid_argument);
}

TEST(CircuitText, ParsesAllInstructionKinds) {
  const auto seq = parse_circuit(
      "# demo\n"
      "dims: 3 3\n"
      "R 0 0 1 pi/2 0   # rotation\n"
      "MS 0 1 0 1 pi/2 pi\n"
      "Z 1 2 0.3\n"
      "GATE CINC 0 1\n"
      "GATE CEX 1 0 1 0 2\n");
  EXPECT_EQ(seq.circuit.dims, (std::vector<int>{3, 3}));
  EXPECT_EQ(seq.logical_dim, 3);
  ASSERT_EQ(seq.circuit.ops.size(), 5u);
  const auto& g = std::get<LibraryGateOp>(seq.circuit.ops[3]);
  EXPECT_LT(oracle::max_abs(g.matrix - cinc(3).matrix()), 1e-15);
  const auto& x = std::get<LibraryGateOp>(seq.circuit.ops[4]);
  EXPECT_EQ(x.sites, (std::vector<int>{1, 0}));
  EXPECT_LT(oracle::max_abs(x.matrix - cex(3, 1, 0, 2).matrix()), 1e-15);
}

TEST(CircuitText, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("dims: 3\nR 0 0 1 pi\n"), 2);
  EXPECT_EQ(parse_error_line("dims: 3\n\nR 0 0 5 pi 0\n"), 3);
  EXPECT_EQ(parse_error_line("R 0 0 1 pi 0\n"), 1);
  EXPECT_EQ(parse_error_line("dims: 3\nFOO 1\n"), 2);
  EXPECT_EQ(parse_error_line("dims: 3 4\nMS 0 1 0 1 pi 0\n"), 2);
  EXPECT_EQ(parse_error_line("dims: 3\nGATE T3 0 1\n"), 2);
  EXPECT_EQ(parse_error_line("dims: 9\n"), 1);
  EXPECT_EQ(parse_error_line("# nothing\n"), 1);
}

TEST(CircuitText, DecomposedCircuitRoundTrips) {
  std::mt19937_64 rng(77);
  for (int d : {3, 5}) {
    const Matrix u = haar_unitary(d, rng);
    const auto seq = to_physical_frame(
        decompose_su_d(UnitaryOp(u), CouplingGraph::native(LevelMap::standard(), d)),
        LevelMap::standard());
    const auto back = parse_circuit(emit_circuit(seq));
    EXPECT_EQ(back.circuit.ops.size(), seq.circuit.ops.size());
    EXPECT_EQ(back.logical_dim, seq.logical_dim);
    EXPECT_EQ(emit_circuit(back), emit_circuit(seq));
    EXPECT_LT(oracle::max_abs(sequence_matrix(back) - sequence_matrix(seq)), 1e-14);
  }
  const auto cinc_seq = synth_cinc(3);
  const auto back = parse_circuit(emit_circuit(cinc_seq));
  EXPECT_LT(oracle::max_abs(sequence_matrix(back) - sequence_matrix(cinc_seq)), 1e-14);
}

TEST(Json, NoiseModelRoundTripAndConversion) {
  NoiseModel m;
  m.pulse_depolarizing = 3e-4;
  m.dephasing_rate = 2.0;
  const auto back = noise_model_from_json(to_json(m));
  EXPECT_EQ(back.pulse_depolarizing, m.pulse_depolarizing);
  EXPECT_EQ(back.dephasing_rate, 2.0);
  EXPECT_FALSE(std::isfinite(back.tau1));
  const Json rate{{"schema_version", 1}, {"pulse_error_rate", 2e-4}};
  EXPECT_NEAR(noise_model_from_json(rate, 3).pulse_depolarizing, 3e-4, 1e-18);
}

TEST(Json, SchemaViolationsRejected) {
  EXPECT_THROW(noise_model_from_json(Json{{"pulse_depolarizing", 0.1}}), SchemaError);
  EXPECT_THROW(noise_model_from_json(Json{{"schema_version", 2}}), SchemaError);
  EXPECT_THROW(noise_model_from_json(Json{{"schema_version", 1}, {"typo", 1}}), SchemaError);
  EXPECT_THROW(noise_model_from_json(Json{{"schema_version", 1}, {"pulse_depolarizing", 2.0}}),
               SchemaError);
  EXPECT_THROW(readout_from_json(Json{{"schema_version", 1}, {"t_detect", "x"}}), SchemaError);
  EXPECT_THROW(matrix_from_json(Json{{"re", {{1, 2}, {3}}}}), SchemaError);
}

TEST(Json, ReadoutAndStarkRoundTrip) {
  ReadoutConfig r;
  r.model.t_detect = 400e-6;
  r.discriminator.threshold = 5;
  const auto back = readout_from_json(to_json(r));
  EXPECT_EQ(back.model.t_detect, 400e-6);
  EXPECT_EQ(back.discriminator.threshold, 5);
  EXPECT_EQ(readout_error_budget(back.model, 3).worst_case,
            readout_error_budget([&] { auto m = r.model; m.discrimination = r.discriminator; return m; }(), 3)
                .worst_case);

  const auto stark = StarkModel::illustrative();
  const auto s2 = stark_model_from_json(to_json(stark));
  EXPECT_EQ(to_json(s2), to_json(stark));
  EXPECT_EQ(stark_shift(s2, 0, 1, 3e6), stark_shift(stark, 0, 1, 3e6));
}

TEST(Json, CountsRoundTripAndValidation) {
  CountRecord c{3, {{-1, 0, {10, 20, 70}}, {-1, 2, {1, 1, 98}}}};
  const auto back = counts_from_json(to_json(c));
  ASSERT_EQ(back.settings.size(), 2u);
  EXPECT_EQ(back.settings[1].counts, c.settings[1].counts);
  Json bad = to_json(c);
  bad["records"][0]["N"] = 50;
  EXPECT_THROW(counts_from_json(bad), SchemaError);
}

TEST(Json, MatrixRoundTripIsExact) {
  std::mt19937_64 rng(1);
  const Matrix u = haar_unitary(4, rng);
  const Json j = Json::parse(matrix_to_json(u).dump());
  EXPECT_EQ(matrix_from_json(j), u);
}

TEST(Files, AtomicWriteReplacesContent) {
  const auto dir = std::filesystem::temp_directory_path() / "qudit_io_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "out.json").string();
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  EXPECT_EQ(read_file(path), "second");
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  EXPECT_THROW(read_file((dir / "missing").string()), FileError);
  std::filesystem::remove_all(dir);
}

TEST(KetText, ParsesCommonForms) {
  const Vector u = parse_ket("(|0>+|1>+|2>)/sqrt(3)");
  EXPECT_LT(oracle::max_abs(u - Vector::Constant(3, 1 / std::sqrt(3.0))), 1e-15);
  const Vector v = parse_ket("|0> - i|2>", 4);
  ASSERT_EQ(v.size(), 4);
  EXPECT_NEAR(v(2).imag(), -1 / std::sqrt(2.0), 1e-15);
  const Vector w = parse_ket("0.6|0> + 0.8*i|1>");
  EXPECT_NEAR(w(1).imag(), 0.8, 1e-15);
  EXPECT_THROW(parse_ket("|0> - |0>"), std::invalid_argument);
  EXPECT_THROW(parse_ket("|3>", 3), std::invalid_argument);
  EXPECT_THROW(parse_ket("(|0>"), std::invalid_argument);
}
