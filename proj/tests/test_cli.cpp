#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qnn/io.hpp"
#include "qnn/suites.hpp"
#include "test_util.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qnn;
using testgen::Rng;

namespace {

namespace fs = std::filesystem;

std::string cli_path() { return QNN_CLI_PATH; }
std::string config_dir() { return QNN_CONFIG_DIR; }

int run_cli(const std::string& args) {
  const int status = std::system((cli_path() + " " + args + " >/dev/null 2>&1").c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("qnn_cli_test_" + name);
}

}  // namespace

TEST_CASE("tensor JSON round-trips matrices and vectors") {
  Rng rng(801);
  CMatrix m = testgen::random_matrix(rng, 4, 8);
  CMatrix m2 = tensor_matrix_from_json(tensor_to_json(m));
  CHECK((m - m2).cwiseAbs().maxCoeff() == 0.0);  // shortest-round-trip doubles
  CVector v = testgen::random_state(rng, 8);
  CHECK((v - tensor_vector_from_json(tensor_to_json(v))).norm() == 0.0);

  Json bad = tensor_to_json(v);
  bad["dtype"] = "f64";
  CHECK_THROWS_AS(tensor_vector_from_json(bad), ContractError);
  Json short_data = tensor_to_json(v);
  short_data["data"].erase(0);
  CHECK_THROWS_AS(tensor_vector_from_json(short_data), ContractError);
}

TEST_CASE("polynomial, kernel, and structure round-trips") {
  ChebyshevPoly p = erf_poly(0.8, 1e-6);
  ChebyshevPoly q = poly_from_json(poly_to_json(p));
  CHECK(q.coeffs == p.coeffs);
  CHECK(q.parity == p.parity);
  CHECK(q.certified_eps == p.certified_eps);

  Rng rng(802);
  ConvKernel k = make_conv_kernel(2, 2);
  for (auto& x : k.data) x = testgen::uniform(rng, -1.0, 1.0);
  ConvKernel k2 = kernel_from_json(kernel_to_json(k));
  CHECK(k2.data == k.data);
  CHECK(k2.channels == 2);

  CMatrix w = testgen::random_contraction(rng, 8, 0.9);
  MatrixQramStructure s = build_matrix_structure(w);
  MatrixQramStructure s2 = structure_from_json(structure_to_json(s));
  CHECK(s2.d == s.d);
  CHECK(s2.angle_words == s.angle_words);
  CHECK((s2.reconstruct() - s.reconstruct()).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("bundled spec file loads and validates") {
  NetworkSpec spec = spec_from_file(config_dir() + std::string("/example-network.json"));
  CHECK(spec.m == 2);
  CHECK(spec.k == 1);
  CHECK(spec.c_bins == 4);
  CHECK(spec.kernels.size() == 1);
  REQUIRE(spec.final_w.has_value());
  CHECK(spec.final_w->rows() == 16);
  CHECK(spec.regime == 1);
}

TEST_CASE("report JSON schema is stable") {
  NetworkSpec spec = spec_from_file(config_dir() + std::string("/example-network.json"));
  InferenceReport rep = quantum_forward(spec, random_network_input(spec), 100);
  Json j = report_to_json(rep);
  // golden schema: field names and JSON types
  const std::vector<std::pair<std::string, std::string>> fields = {
      {"stages", "array"},      {"y_classical", "array"}, {"y_quantum", "array"},
      {"histogram", "array"},   {"shots", "number"},      {"epsilon", "number"},
      {"final_error", "number"}, {"argmax_match", "boolean"}, {"passed", "boolean"}};
  auto it = j.begin();
  for (const auto& [name, type] : fields) {
    REQUIRE(it != j.end());
    CHECK(it.key() == name);
    if (type == "array") CHECK(it.value().is_array());
    if (type == "number") CHECK(it.value().is_number());
    if (type == "boolean") CHECK(it.value().is_boolean());
    ++it;
  }
  const std::vector<std::string> stage_fields = {
      "stage", "alpha", "ancillas", "eps_bound", "eps_actual", "norm_floor", "passed"};
  for (const auto& st : j["stages"]) {
    auto sit = st.begin();
    for (const auto& name : stage_fields) {
      REQUIRE(sit != st.end());
      CHECK(sit.key() == name);
      ++sit;
    }
  }
  // CSV header mirrors the stage schema
  const std::string csv = report_to_csv(rep);
  CHECK(csv.rfind("stage,alpha,ancillas,eps_bound,eps_actual,norm_floor,passed\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == long(rep.stages.size()) + 1);
}

TEST_CASE("identical seed and config give byte-identical reports") {
  NetworkSpec spec = spec_from_file(config_dir() + std::string("/example-network.json"));
  InferenceReport a = quantum_forward(spec, random_network_input(spec), 5000);
  InferenceReport b = quantum_forward(spec, random_network_input(spec), 5000);
  CHECK(report_to_json(a).dump(2) == report_to_json(b).dump(2));
  CHECK(report_to_csv(a) == report_to_csv(b));

  NetworkSpec other = spec;
  other.seed = spec.seed + 1;
  InferenceReport c = quantum_forward(other, random_network_input(other), 5000);
  CHECK(report_to_json(a).dump() != report_to_json(c).dump());
}

TEST_CASE("cli: healthy paths exit 0") {
  CHECK(run_cli("verify-lemmas --cases 3 --seed 5") == 0);
  const fs::path rep = temp_file("rep.json");
  CHECK(run_cli("run-network --config " + config_dir() +
                std::string("/example-network.json --shots 200 --out ") + rep.string()) == 0);
  CHECK(fs::exists(rep));
  CHECK(fs::exists(rep.string() + ".csv"));
  Json j = read_json_file(rep.string());
  CHECK(j.at("passed").get<bool>());
  CHECK(run_cli("run-network --config " + config_dir() +
                std::string("/example-regime3.json")) == 0);
  const fs::path st = temp_file("struct.json");
  CHECK(run_cli("build-qram --config " + config_dir() +
                std::string("/example-final-w.json --out ") + st.string()) == 0);
  MatrixQramStructure s = structure_from_json(read_json_file(st.string()));
  CHECK(s.col_norms.minCoeff() == doctest::Approx(0.9));
}

TEST_CASE("cli: byte-identical report files for a fixed seed") {
  const fs::path r1 = temp_file("det1.json");
  const fs::path r2 = temp_file("det2.json");
  const std::string base = "run-network --config " + config_dir() +
                           std::string("/example-network.json --seed 42 --shots 1000 --out ");
  REQUIRE(run_cli(base + r1.string()) == 0);
  REQUIRE(run_cli(base + r2.string()) == 0);
  CHECK(slurp(r1) == slurp(r2));
  CHECK(slurp(r1.string() + ".csv") == slurp(r2.string() + ".csv"));
}

TEST_CASE("cli: exit-code contract under fault injection") {
  // 1 — a corrupted scale ledger is a bound violation naming the op
  CHECK(run_cli("verify-lemmas --cases 2 --corrupt matrix-vector") == 1);
  // 2 — config errors
  CHECK(run_cli("run-network --config /nonexistent/spec.json") == 2);
  CHECK(run_cli("run-network") == 2);  // missing required flag
  CHECK(run_cli("verify-lemmas --mode warp") == 2);
  const fs::path garbage = temp_file("garbage.json");
  write_text_file(garbage.string(), "{not json");
  CHECK(run_cli("run-network --config " + garbage.string()) == 2);
  // circuit mode rejects specs over the qubit budget
  CHECK(run_cli("run-network --mode circuit --config " + config_dir() +
                std::string("/example-network.json")) == 2);
  // norm violation without --rescale
  const fs::path heavy = temp_file("heavy.json");
  write_text_file(heavy.string(),
                  tensor_to_json(CMatrix(3.0 * CMatrix::Identity(4, 4))).dump());
  CHECK(run_cli("build-qram --config " + heavy.string()) == 2);
  CHECK(run_cli("build-qram --config " + heavy.string() + " --rescale") == 0);
  // 3 — numeric failure (overflowing matrix)
  const fs::path huge = temp_file("huge.json");
  write_text_file(huge.string(),
                  tensor_to_json(CMatrix(1e308 * CMatrix::Ones(2, 2))).dump());
  CHECK(run_cli("build-qram --config " + huge.string() + " --rescale") == 3);
}

TEST_CASE("cli: --cases flag scales the suite record count") {
  const fs::path rep = temp_file("suite.json");
  REQUIRE(run_cli("verify-lemmas --cases 4 --out " + rep.string()) == 0);
  Json j = read_json_file(rep.string());
  CHECK(j.at("cases").get<int>() == 4);
  CHECK(j.at("records").size() == 4 * j.at("ops").size());
  CHECK(j.at("passed").get<bool>());
}
