// End-to-end network inference: the exact classical reference forward pass
// and the encoding-based quantum forward pass, with per-stage ledger records
// and final-distribution comparison.
#pragma once

#include "qnn/blocks.hpp"
#include "qnn/convolution.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qnn {

// Inference network description.  Image side M = 2^m; raw input channels are
// zero-padded up to the next power of two ("null channels") and then fanned
// out into channel_fanout equal copies.  Regimes:
//   1 — single path, QRAM state preparation, final linear-pooling layer;
//   2 — d_paths tensor-product input, final linear-pooling layer;
//   3 — d_paths tensor-product input, no final layer (direct pooling).
struct NetworkSpec {
  int m = 2;
  Eigen::Index channels_in = 1;
  Eigen::Index channel_fanout = 1;
  int k = 1;
  std::vector<ConvKernel> kernels;  // one per residual layer, uniform shape
  std::optional<CMatrix> final_w;   // regimes 1/2 only; ‖W‖₂ ≤ 1
  Eigen::Index c_bins = 2;
  double tau = 0.51;
  double epsilon = 1e-2;
  int regime = 1;
  int d_paths = 1;
  std::uint64_t seed = 0;
};

// Throws ContractError on any malformed field combination.
void validate_spec(const NetworkSpec& spec);

// Raw per-path input vectors, each of dimension channels_in·4^m and unit
// norm.  Regime 1 uses exactly one path.
struct NetworkInput {
  std::vector<CVector> paths;
};

// Deterministic random real-valued input drawn from spec.seed.
NetworkInput random_network_input(const NetworkSpec& spec);

// One ledger row per pipeline stage.
struct StageRecord {
  std::string stage;
  double alpha = 1.0;
  int ancillas = 0;
  double eps_bound = 0.0;
  double eps_actual = 0.0;
  double norm_floor = 0.0;
  bool passed = true;
};

struct InferenceReport {
  std::vector<StageRecord> stages;
  RVector y_classical;
  RVector y_quantum;   // exact-mode binned distribution
  RVector histogram;   // shot-mode counts (empty when shots == 0)
  long long shots = 0;
  double epsilon = 0.0;
  double final_error = 0.0;  // ℓ₂(y_quantum, y_classical)
  bool argmax_match = false;
  bool passed = false;
};

struct CompareSummary {
  double l2 = 0.0;
  double l1 = 0.0;
  bool argmax_match = false;
  bool passed = false;
};

// Assembled full input state: channel padding, path tensor product, fanout.
CVector assemble_input(const NetworkSpec& spec, const NetworkInput& input);

// Exact classical evaluation; returns the pooled probability vector y with
// ‖y‖₁ = 1.
RVector classical_forward(const NetworkSpec& spec, const NetworkInput& input);

// Encoding-based evaluation with tracked ledgers at every stage; asserts the
// exact-mode distribution is within spec.epsilon of classical_forward.
InferenceReport quantum_forward(const NetworkSpec& spec, const NetworkInput& input,
                                long long shots = 0, Mode mode = Mode::Semantic);

// Exact (1, 0, 0)-VE of the (d_paths−1)-fold tensor product of the paths.
VectorEncoding bilinear_input(const std::vector<CVector>& paths, int d_paths,
                              Mode mode = Mode::Semantic);

// Distances and pass flag of a report's exact-mode output against y.
CompareSummary compare_report(const InferenceReport& report, const RVector& y);

}  // namespace qnn
