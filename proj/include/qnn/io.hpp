// JSON/CSV serialization of tensors, encodings, polynomials, kernels, QRAM
// structures, network specs, and inference reports.  All emitters use
// key-ordered JSON so identical inputs serialize byte-identically.
#pragma once

#include "qnn/pipeline.hpp"
#include "qnn/polynomials.hpp"
#include "qnn/qram.hpp"

#include <json.hpp>

#include <string>

namespace qnn {

using Json = nlohmann::ordered_json;

// Complex tensors: {"dtype":"c128","shape":[...],"layout":"row-major",
// "data":[[re,im],...]} with data flattened row-major.
Json tensor_to_json(const CMatrix& m);
Json tensor_to_json(const CVector& v);
CMatrix tensor_matrix_from_json(const Json& j);
CVector tensor_vector_from_json(const Json& j);

// Encoding dumps: alpha / ancillas / eps_bound plus the payload tensor.
Json encoding_to_json(const BlockEncoding& be);
Json encoding_to_json(const VectorEncoding& ve);

// {"basis":"chebyshev-T","coeffs":[...],"parity":...,"certified_eps":...,
//  "interval_c":...}.
Json poly_to_json(const ChebyshevPoly& p);
ChebyshevPoly poly_from_json(const Json& j);

// Kernel file {"C":..., "D":..., "K": nested rank-4 array}.
Json kernel_to_json(const ConvKernel& k);
ConvKernel kernel_from_json(const Json& j);

// Matrix structure {"d":..., "col_norms":[...], "angle_words":[...],
// "unit_columns": tensor}.
Json structure_to_json(const MatrixQramStructure& s);
MatrixQramStructure structure_from_json(const Json& j);

// Network spec; kernels and the final matrix are stored by file reference
// relative to the spec file's directory.
Json spec_to_json(const NetworkSpec& spec, const std::vector<std::string>& kernel_refs,
                  const std::string& final_w_ref);
NetworkSpec spec_from_file(const std::string& path);

Json stage_to_json(const StageRecord& r);
Json report_to_json(const InferenceReport& rep);
// Flat CSV: one row per stage record.
std::string report_to_csv(const InferenceReport& rep);

// Whole-file helpers; throw ContractError on I/O or parse failure.
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qnn
