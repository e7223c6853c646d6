#include "qnn/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace qnn {

namespace {

Json complex_pairs(const Complex* data, Eigen::Index count) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < count; ++i)
    arr.push_back(Json::array({data[i].real(), data[i].imag()}));
  return arr;
}

std::vector<Complex> pairs_to_complex(const Json& data) {
  std::vector<Complex> out;
  out.reserve(data.size());
  for (const auto& e : data) {
    if (!e.is_array() || e.size() != 2)
      throw ContractError("tensor: data entries must be [re, im] pairs");
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

void check_tensor_header(const Json& j) {
  if (j.value("dtype", "") != "c128") throw ContractError("tensor: dtype must be c128");
  if (j.value("layout", "") != "row-major")
    throw ContractError("tensor: layout must be row-major");
  if (!j.contains("shape") || !j.contains("data"))
    throw ContractError("tensor: missing shape or data");
}

std::string parity_name(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    default: return "none";
  }
}

Parity parity_value(const std::string& s) {
  if (s == "even") return Parity::Even;
  if (s == "odd") return Parity::Odd;
  if (s == "none") return Parity::None;
  throw ContractError("polynomial: unknown parity '" + s + "'");
}

}  // namespace

Json tensor_to_json(const CMatrix& m) {
  Json j;
  j["dtype"] = "c128";
  j["shape"] = Json::array({m.rows(), m.cols()});
  j["layout"] = "row-major";
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      data.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
  j["data"] = data;
  return j;
}

Json tensor_to_json(const CVector& v) {
  Json j;
  j["dtype"] = "c128";
  j["shape"] = Json::array({v.size()});
  j["layout"] = "row-major";
  j["data"] = complex_pairs(v.data(), v.size());
  return j;
}

CMatrix tensor_matrix_from_json(const Json& j) {
  check_tensor_header(j);
  const auto& shape = j["shape"];
  if (shape.size() != 2) throw ContractError("tensor: expected a rank-2 shape");
  const Eigen::Index rows = shape[0].get<Eigen::Index>();
  const Eigen::Index cols = shape[1].get<Eigen::Index>();
  std::vector<Complex> data = pairs_to_complex(j["data"]);
  if (Eigen::Index(data.size()) != rows * cols)
    throw ContractError("tensor: data length does not match the shape");
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[size_t(r * cols + c)];
  return m;
}

CVector tensor_vector_from_json(const Json& j) {
  check_tensor_header(j);
  const auto& shape = j["shape"];
  if (shape.size() != 1) throw ContractError("tensor: expected a rank-1 shape");
  const Eigen::Index n = shape[0].get<Eigen::Index>();
  std::vector<Complex> data = pairs_to_complex(j["data"]);
  if (Eigen::Index(data.size()) != n)
    throw ContractError("tensor: data length does not match the shape");
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = data[size_t(i)];
  return v;
}

Json encoding_to_json(const BlockEncoding& be) {
  Json j;
  j["alpha"] = be.alpha;
  j["ancillas"] = be.ancillas;
  j["eps_bound"] = be.eps_bound;
  j["block"] = tensor_to_json(be.block);
  j["target"] = be.target ? tensor_to_json(*be.target) : Json(nullptr);
  return j;
}

Json encoding_to_json(const VectorEncoding& ve) {
  Json j;
  j["alpha"] = ve.alpha;
  j["ancillas"] = ve.ancillas;
  j["eps_bound"] = ve.eps_bound;
  j["vec"] = tensor_to_json(ve.vec);
  j["target"] = ve.target ? tensor_to_json(*ve.target) : Json(nullptr);
  return j;
}

Json poly_to_json(const ChebyshevPoly& p) {
  Json j;
  j["basis"] = "chebyshev-T";
  j["coeffs"] = p.coeffs;
  j["parity"] = parity_name(p.parity);
  j["certified_eps"] = p.certified_eps;
  j["interval_c"] = p.interval_c;
  j["sup_bound"] = p.sup_bound;
  return j;
}

ChebyshevPoly poly_from_json(const Json& j) {
  if (j.value("basis", "") != "chebyshev-T")
    throw ContractError("polynomial: basis must be chebyshev-T");
  ChebyshevPoly p;
  p.coeffs = j.at("coeffs").get<std::vector<double>>();
  p.parity = parity_value(j.at("parity").get<std::string>());
  p.certified_eps = j.value("certified_eps", 0.0);
  p.interval_c = j.value("interval_c", 1.0);
  p.sup_bound = j.value("sup_bound", 0.0);
  return p;
}

Json kernel_to_json(const ConvKernel& k) {
  Json j;
  j["C"] = k.channels;
  j["D"] = k.width;
  Json outs = Json::array();
  for (int o = 0; o < k.channels; ++o) {
    Json ins = Json::array();
    for (int i = 0; i < k.channels; ++i) {
      Json rows = Json::array();
      for (int r = 0; r < k.width; ++r) {
        Json cols = Json::array();
        for (int c = 0; c < k.width; ++c) cols.push_back(k.at(o, i, r, c));
        rows.push_back(cols);
      }
      ins.push_back(rows);
    }
    outs.push_back(ins);
  }
  j["K"] = outs;
  return j;
}

ConvKernel kernel_from_json(const Json& j) {
  const int channels = j.at("C").get<int>();
  const int width = j.at("D").get<int>();
  ConvKernel k = make_conv_kernel(channels, width);
  const Json& arr = j.at("K");
  if (int(arr.size()) != channels) throw ContractError("kernel: K rank-4 shape mismatch");
  for (int o = 0; o < channels; ++o)
    for (int i = 0; i < channels; ++i)
      for (int r = 0; r < width; ++r)
        for (int c = 0; c < width; ++c)
          k.at(o, i, r, c) = arr.at(size_t(o)).at(size_t(i)).at(size_t(r)).at(size_t(c)).get<double>();
  return k;
}

Json structure_to_json(const MatrixQramStructure& s) {
  Json j;
  j["d"] = s.d;
  j["col_norms"] = std::vector<double>(s.col_norms.data(), s.col_norms.data() + s.col_norms.size());
  j["angle_words"] = s.angle_words;
  j["unit_columns"] = tensor_to_json(s.unit_columns);
  return j;
}

MatrixQramStructure structure_from_json(const Json& j) {
  MatrixQramStructure s;
  s.d = j.at("d").get<int>();
  std::vector<double> norms = j.at("col_norms").get<std::vector<double>>();
  s.col_norms = Eigen::Map<const RVector>(norms.data(), Eigen::Index(norms.size()));
  s.angle_words = j.at("angle_words").get<std::vector<std::uint64_t>>();
  s.unit_columns = tensor_matrix_from_json(j.at("unit_columns"));
  if (Eigen::Index(s.angle_words.size()) != s.unit_columns.cols() ||
      s.col_norms.size() != s.unit_columns.cols())
    throw ContractError("structure: column-count mismatch");
  return s;
}

Json spec_to_json(const NetworkSpec& spec, const std::vector<std::string>& kernel_refs,
                  const std::string& final_w_ref) {
  Json j;
  j["m"] = spec.m;
  j["channels_in"] = spec.channels_in;
  j["channel_fanout"] = spec.channel_fanout;
  j["k"] = spec.k;
  j["kernels"] = kernel_refs;
  j["final_w"] = spec.final_w ? Json(final_w_ref) : Json(nullptr);
  j["c_bins"] = spec.c_bins;
  j["tau"] = spec.tau;
  j["epsilon"] = spec.epsilon;
  j["regime"] = spec.regime;
  j["d_paths"] = spec.d_paths;
  j["seed"] = spec.seed;
  return j;
}

NetworkSpec spec_from_file(const std::string& path) {
  Json j = read_json_file(path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  NetworkSpec spec;
  try {
    spec.m = j.at("m").get<int>();
    spec.channels_in = j.at("channels_in").get<Eigen::Index>();
    spec.channel_fanout = j.value("channel_fanout", Eigen::Index(1));
    spec.k = j.at("k").get<int>();
    for (const auto& ref : j.at("kernels"))
      spec.kernels.push_back(kernel_from_json(read_json_file((base / ref.get<std::string>()).string())));
    if (j.contains("final_w") && !j["final_w"].is_null())
      spec.final_w = tensor_matrix_from_json(
          read_json_file((base / j["final_w"].get<std::string>()).string()));
    spec.c_bins = j.at("c_bins").get<Eigen::Index>();
    spec.tau = j.value("tau", 0.51);
    spec.epsilon = j.at("epsilon").get<double>();
    spec.regime = j.value("regime", 1);
    spec.d_paths = j.value("d_paths", 1);
    spec.seed = j.value("seed", std::uint64_t(0));
  } catch (const Json::exception& e) {
    throw ContractError(std::string("spec file: ") + e.what());
  }
  validate_spec(spec);
  return spec;
}

Json stage_to_json(const StageRecord& r) {
  Json j;
  j["stage"] = r.stage;
  j["alpha"] = r.alpha;
  j["ancillas"] = r.ancillas;
  j["eps_bound"] = r.eps_bound;
  j["eps_actual"] = r.eps_actual;
  j["norm_floor"] = r.norm_floor;
  j["passed"] = r.passed;
  return j;
}

Json report_to_json(const InferenceReport& rep) {
  Json j;
  Json stages = Json::array();
  for (const auto& st : rep.stages) stages.push_back(stage_to_json(st));
  j["stages"] = stages;
  j["y_classical"] =
      std::vector<double>(rep.y_classical.data(), rep.y_classical.data() + rep.y_classical.size());
  j["y_quantum"] =
      std::vector<double>(rep.y_quantum.data(), rep.y_quantum.data() + rep.y_quantum.size());
  j["histogram"] =
      std::vector<double>(rep.histogram.data(), rep.histogram.data() + rep.histogram.size());
  j["shots"] = rep.shots;
  j["epsilon"] = rep.epsilon;
  j["final_error"] = rep.final_error;
  j["argmax_match"] = rep.argmax_match;
  j["passed"] = rep.passed;
  return j;
}

std::string report_to_csv(const InferenceReport& rep) {
  std::ostringstream out;
  out << "stage,alpha,ancillas,eps_bound,eps_actual,norm_floor,passed\n";
  out.precision(17);
  for (const auto& st : rep.stages)
    out << st.stage << ',' << st.alpha << ',' << st.ancillas << ',' << st.eps_bound << ','
        << st.eps_actual << ',' << st.norm_floor << ',' << (st.passed ? "true" : "false")
        << '\n';
  return out.str();
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open file: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ContractError("cannot parse " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ContractError("cannot open file for writing: " + path);
  out << text;
  if (!out) throw ContractError("write failed: " + path);
}

}  // namespace qnn
