// qnn-cli command-line driver: lemma-ledger verification suites, network
// inference runs, and QRAM structure builds.
#include "qnn/io.hpp"
#include "qnn/suites.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitBoundViolation = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericFailure = 3;

bool verbose_logging() {
  const char* env = std::getenv("QNN_LOG");
  return env != nullptr && std::string(env) != "" && std::string(env) != "0";
}

qnn::Mode parse_mode(const std::string& mode) {
  if (mode == "semantic") return qnn::Mode::Semantic;
  if (mode == "circuit") return qnn::Mode::Circuit;
  throw qnn::ContractError("mode must be 'semantic' or 'circuit'");
}

qnn::Json suite_report_json(const qnn::SuiteOptions& opt, const qnn::SuiteResult& res) {
  qnn::Json j;
  j["command"] = "verify-lemmas";
  j["cases"] = opt.cases;
  j["seed"] = opt.seed;
  j["mode"] = (opt.mode == qnn::Mode::Circuit) ? "circuit" : "semantic";
  j["ops"] = res.ops;
  j["passed"] = res.passed;
  j["first_failure"] = res.first_failure;
  qnn::Json records = qnn::Json::array();
  for (const auto& r : res.records) {
    qnn::Json rec;
    rec["op"] = r.op;
    rec["case"] = r.index;
    rec["alpha"] = r.alpha;
    rec["ancillas"] = r.ancillas;
    rec["eps_bound"] = r.eps_bound;
    rec["eps_actual"] = r.eps_actual;
    rec["ledger_ok"] = r.ledger_ok;
    rec["bound_ok"] = r.bound_ok;
    rec["circuit_ok"] = r.circuit_ok;
    rec["passed"] = r.passed;
    records.push_back(rec);
  }
  j["records"] = records;
  return j;
}

// The human-readable table is always derived from the JSON document.
void print_suite_table(const qnn::Json& report) {
  std::map<std::string, std::pair<int, int>> tally;  // op -> (passed, total)
  for (const auto& rec : report.at("records")) {
    auto& t = tally[rec.at("op").get<std::string>()];
    t.second += 1;
    if (rec.at("passed").get<bool>()) t.first += 1;
  }
  std::cout << "op                         passed/total\n";
  for (const auto& [op, t] : tally)
    std::cout << op << std::string(op.size() < 27 ? 27 - op.size() : 1, ' ') << t.first << "/"
              << t.second << (t.first == t.second ? "" : "  FAIL") << "\n";
  std::cout << (report.at("passed").get<bool>() ? "all suites passed"
                                                : "FAILED at: " + report.at("first_failure")
                                                                      .get<std::string>())
            << "\n";
}

int cmd_verify_lemmas(const std::string& mode, int cases, std::uint64_t seed,
                      const std::string& out, const std::string& corrupt) {
  qnn::SuiteOptions opt;
  opt.cases = cases;
  opt.seed = seed;
  opt.mode = parse_mode(mode);
  opt.corrupt_op = corrupt;
  qnn::SuiteResult res = qnn::run_lemma_suites(opt);
  qnn::Json report = suite_report_json(opt, res);
  if (!out.empty()) qnn::write_text_file(out, report.dump(2) + "\n");
  print_suite_table(report);
  return res.passed ? kExitPass : kExitBoundViolation;
}

int cmd_run_network(const std::string& config, const std::string& mode, long long shots,
                    std::uint64_t seed, bool seed_given, const std::string& out) {
  qnn::NetworkSpec spec = qnn::spec_from_file(config);
  if (seed_given) spec.seed = seed;
  qnn::NetworkInput input = qnn::random_network_input(spec);
  qnn::InferenceReport rep =
      qnn::quantum_forward(spec, input, shots, parse_mode(mode));
  qnn::Json report = qnn::report_to_json(rep);
  if (!out.empty()) {
    qnn::write_text_file(out, report.dump(2) + "\n");
    qnn::write_text_file(out + ".csv", qnn::report_to_csv(rep));
  }
  if (verbose_logging())
    for (const auto& st : report.at("stages")) std::cout << st.dump() << "\n";
  std::cout << "final_error " << report.at("final_error").get<double>() << " (epsilon "
            << report.at("epsilon").get<double>() << ")  "
            << (report.at("passed").get<bool>() ? "pass" : "FAIL") << "\n";
  return rep.passed ? kExitPass : kExitBoundViolation;
}

int cmd_build_qram(const std::string& config, const std::string& out, bool rescale) {
  qnn::CMatrix w = qnn::tensor_matrix_from_json(qnn::read_json_file(config));
  const double nrm = qnn::spectral_norm(w);
  if (!std::isfinite(nrm))
    throw qnn::NumericError("matrix spectral norm is not finite");
  if (nrm > 1.0 + 1e-10) {
    if (!rescale)
      throw qnn::ContractError("matrix spectral norm " + std::to_string(nrm) +
                               " exceeds 1; pass --rescale to normalize");
    w /= nrm + 1e-9;
  }
  qnn::MatrixQramStructure s = qnn::build_matrix_structure(w);
  if (!out.empty()) qnn::write_text_file(out, qnn::structure_to_json(s).dump(2) + "\n");
  std::cout << "columns " << s.unit_columns.cols() << "  a_j min " << s.col_norms.minCoeff()
            << " max " << s.col_norms.maxCoeff() << " mean " << s.col_norms.mean()
            << "  rounding " << s.rounding_error() << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exactly verifiable simulator of encoding-based network inference"};
  app.require_subcommand(1);

  std::string mode = "semantic";
  std::string config;
  std::string out;
  std::string corrupt;
  std::uint64_t seed = 1;
  int cases = 200;
  long long shots = 0;
  bool rescale = false;

  CLI::App* verify = app.add_subcommand("verify-lemmas", "run the randomized ledger suites");
  verify->add_option("--mode", mode, "semantic|circuit");
  verify->add_option("--cases", cases, "randomized cases per operation");
  verify->add_option("--seed", seed, "suite RNG seed");
  verify->add_option("--out", out, "JSON report path");
  verify->add_option("--corrupt", corrupt, "fault-injection hook: corrupt this op's ledger");

  CLI::App* run = app.add_subcommand("run-network", "run end-to-end inference on a spec");
  run->add_option("--config", config, "network spec JSON")->required();
  run->add_option("--mode", mode, "semantic|circuit");
  CLI::Option* seed_opt = run->add_option("--seed", seed, "input/sampling seed override");
  run->add_option("--shots", shots, "sampled histogram shot count");
  run->add_option("--out", out, "report JSON path (CSV written alongside)");

  CLI::App* build = app.add_subcommand("build-qram", "preprocess a matrix into QRAM form");
  build->add_option("--config", config, "matrix tensor JSON")->required();
  build->add_option("--out", out, "structure output path");
  build->add_flag("--rescale", rescale, "divide by the spectral norm plus margin");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitConfigError;
  }

  try {
    if (verify->parsed()) return cmd_verify_lemmas(mode, cases, seed, out, corrupt);
    if (run->parsed())
      return cmd_run_network(config, mode, shots, seed, seed_opt->count() > 0, out);
    if (build->parsed()) return cmd_build_qram(config, out, rescale);
    return kExitConfigError;
  } catch (const qnn::BoundViolation& e) {
    std::cerr << "bound violation: " << e.what() << "\n";
    return kExitBoundViolation;
  } catch (const qnn::ContractError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const qnn::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumericFailure;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumericFailure;
  }
}
