// Randomized ledger-verification suites: every encoding operation is run over
// randomized cases, its (scale, ancilla, error) ledger checked against the
// closed-form formula, and the actual error against the tracked bound.  The
// CLI and the acceptance harness both drive this engine.
#pragma once

#include "qnn/encodings.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qnn {

struct SuiteOptions {
  int cases = 200;           // randomized cases per operation
  std::uint64_t seed = 1;
  Mode mode = Mode::Semantic;
  // Test hook: corrupt the recorded scale ledger of the named operation so
  // the suite reports a violation there.
  std::string corrupt_op;
};

struct CaseRecord {
  std::string op;
  int index = 0;
  double alpha = 1.0;
  int ancillas = 0;
  double eps_bound = 0.0;
  double eps_actual = 0.0;
  bool ledger_ok = true;   // alpha and ancilla formulas hold
  bool bound_ok = true;    // eps_actual ≤ eps_bound + 1e-9
  bool circuit_ok = true;  // circuit mode: realization unitary and faithful
  bool passed = true;
};

struct SuiteResult {
  std::vector<CaseRecord> records;
  std::vector<std::string> ops;  // distinct operations exercised
  bool passed = true;
  std::string first_failure;  // op name of the first failing record
};

SuiteResult run_lemma_suites(const SuiteOptions& options);

}  // namespace qnn
