#include "qcaveat/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "qcaveat/error.hpp"

namespace qcaveat {

namespace {

Json complex_pair(Complex z) { return Json::array({z.real(), z.imag()}); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw ParseError(name, std::string("missing field '") + name + "'");
  }
  return j.at(name);
}

double number(const Json& j, const char* name) {
  if (!j.is_number()) throw ParseError(name, std::string("field '") + name + "' must be numeric");
  return j.get<double>();
}

std::vector<double> number_row(const Json& j, const char* name) {
  if (!j.is_array()) throw ParseError(name, std::string("field '") + name + "' must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const Json& x : j) out.push_back(number(x, name));
  return out;
}

std::size_t index_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ParseError(name, std::string("field '") + name + "' must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Json matrix_to_json(const CMatrix& m) {
  Json j;
  if (m.rows() == m.cols()) {
    j["dim"] = m.rows();
  } else {
    j["rows"] = m.rows();
    j["cols"] = m.cols();
  }
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array(), ii = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

Json vector_to_json(const CVector& v) {
  Json j;
  j["dim"] = v.size();
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

CMatrix matrix_from_json(const Json& j) {
  std::size_t rows = 0, cols = 0;
  if (j.is_object() && j.contains("dim")) {
    rows = cols = index_field(j, "dim");
  } else {
    rows = index_field(j, "rows");
    cols = index_field(j, "cols");
  }
  const Json& re = field(j, "re");
  const bool has_im = j.contains("im");
  if (!re.is_array() || re.size() != rows) throw ParseError("re", "'re' must have one row per matrix row");
  if (has_im && (!j.at("im").is_array() || j.at("im").size() != rows)) {
    throw ParseError("im", "'im' must have one row per matrix row");
  }
  CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const auto rr = number_row(re[r], "re");
    const auto ii = has_im ? number_row(j.at("im")[r], "im") : std::vector<double>(cols, 0.0);
    if (rr.size() != cols || ii.size() != cols) {
      throw ParseError("re", "matrix row " + std::to_string(r) + " has the wrong length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = Complex(rr[c], ii[c]);
    }
  }
  return m;
}

CVector vector_from_json(const Json& j) {
  const std::size_t dim = index_field(j, "dim");
  const auto re = number_row(field(j, "re"), "re");
  const auto im = j.contains("im") ? number_row(j.at("im"), "im") : std::vector<double>(dim, 0.0);
  if (re.size() != dim || im.size() != dim) throw ParseError("dim", "vector length does not match 'dim'");
  CVector v(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) v(static_cast<Eigen::Index>(i)) = Complex(re[i], im[i]);
  return v;
}

HermitianMatrix hermitian_from_json(const Json& j) { return HermitianMatrix(matrix_from_json(j)); }

Json state_to_json(const QuantumState& s) {
  Json layout = Json::object();
  for (const Register& r : s.layout().registers()) layout[r.name] = r.width;
  Json j;
  j["layout"] = std::move(layout);
  const Json v = vector_to_json(s.amplitudes());
  j["re"] = v.at("re");
  j["im"] = v.at("im");
  return j;
}

QuantumState state_from_json(const Json& j) {
  const Json& layout = field(j, "layout");
  if (!layout.is_object()) throw ParseError("layout", "'layout' must be an object");
  std::vector<Register> regs;
  for (const auto& [name, width] : layout.items()) {
    if (!width.is_number_integer()) throw ParseError("layout", "register width must be an integer");
    regs.push_back({name, width.get<int>()});
  }
  const RegisterLayout l(regs);
  Json v = j;
  v["dim"] = l.dim();
  return prepare_state(l, vector_from_json(v));
}

Json to_json(const QpeOutcome& q) {
  Json j;
  j["distribution"] = q.distribution;
  j["decoded"] = q.decoded;
  j["peak_y"] = q.peak_y;
  j["peak_probability"] = q.peak_probability;
  return j;
}

Json to_json(const HhlResult& r) {
  Json j;
  j["solution"] = vector_to_json(r.decoded_solution);
  j["solution_state"] = state_to_json(r.solution_state);
  j["success_probability"] = r.success_probability;
  j["sampled_success_probability"] = optional_number(r.sampled_success_probability);
  j["z_tilde"] = r.z_tilde();
  j["kept_eigenvalue_count"] = r.kept_eigenvalue_count;
  j["discarded_weight"] = r.discarded_weight;
  j["rotation_constant"] = r.rotation_constant;
  j["clock_return_probability"] = optional_number(r.clock_return_probability);
  Json modes = Json::array();
  for (const HhlMode& m : r.modes) {
    Json e;
    e["eigenvalue"] = m.eigenvalue;
    e["decoded"] = m.decoded;
    e["beta"] = complex_pair(m.beta);
    e["kept"] = m.kept;
    modes.push_back(std::move(e));
  }
  j["modes"] = std::move(modes);
  return j;
}

Json to_json(const ErrorReport& r) {
  Json j;
  j["Z_hhl"] = r.z;
  j["Z_tilde"] = r.z_tilde;
  j["state_error"] = r.state_error;
  j["classical_error"] = r.classical_error;
  j["residual"] = r.residual;
  j["max_inverse_error"] = r.max_inverse_error;
  j["z_gap_bound"] = r.z_gap_bound;
  j["kappa"] = r.kappa;
  j["filtered_modes"] = r.filtered_modes;
  Json modes = Json::array();
  for (const ModeError& m : r.per_mode) {
    Json e;
    e["beta"] = complex_pair(m.beta);
    e["eigenvalue"] = m.eigenvalue;
    e["decoded"] = m.decoded;
    e["kept"] = m.kept;
    e["inverse_tilde"] = complex_pair(m.inverse_tilde);
    modes.push_back(std::move(e));
  }
  j["per_mode"] = std::move(modes);
  return j;
}

Json to_json(const ShotEstimate& e) {
  Json j;
  j["value"] = e.value;
  j["exact"] = optional_number(e.exact);
  j["halfwidth"] = e.confidence_halfwidth;
  j["shots"] = e.shots;
  return j;
}

Json to_json(const ClassificationEstimate& e) {
  Json j;
  j["distance_exact"] = e.distance_exact;
  j["distance_estimate"] = e.distance_estimate;
  j["distance_error"] = e.distance_error;
  j["Z_cls"] = e.z;
  j["Z_cls_estimate"] = e.z_estimate;
  j["P"] = to_json(e.p);
  j["p1"] = to_json(e.p1);
  j["p1_first_order"] = e.p1_first_order;
  j["overlap_probability"] = e.overlap_probability;
  j["preparation_error"] = e.preparation_error;
  j["amplification"] = e.amplification;
  return j;
}

Json to_json(const TraceEstimate& e) {
  Json j;
  j["normalized"] = to_json(e.normalized);
  j["total"] = to_json(e.total);
  return j;
}

Json to_json(const RegressionPrediction& p) {
  Json j;
  j["exact"] = complex_pair(p.exact);
  j["prediction"] = complex_pair(p.prediction);
  j["overlap_exact"] = complex_pair(p.overlap_exact);
  j["overlap_estimate"] = complex_pair(p.overlap_estimate);
  j["state_error"] = p.state_error;
  j["overlap_error"] = p.overlap_error;
  j["prediction_error"] = p.prediction_error;
  j["amplification"] = p.amplification;
  return j;
}

Dataset dataset_from_csv(const std::string& text) {
  std::vector<CVector> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<double> values;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = t.find(',', start);
      const std::string cell = trim(std::string_view(t).substr(start, comma - start));
      double x = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError("line " + std::to_string(line_no),
                         "line " + std::to_string(line_no) + ": '" + cell + "' is not a number");
      }
      values.push_back(x);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    CVector v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
    if (!rows.empty() && v.size() != rows.front().size()) {
      throw ParseError("line " + std::to_string(line_no),
                       "line " + std::to_string(line_no) + " has a different number of columns");
    }
    rows.push_back(std::move(v));
  }
  if (rows.empty()) throw ParseError("dataset", "dataset has no rows");
  return Dataset(std::move(rows));
}

Dataset dataset_from_json(const Json& j) {
  const CMatrix m = matrix_from_json(j);
  std::vector<CVector> rows;
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(m.row(r).transpose());
  if (rows.empty()) throw ParseError("dataset", "dataset has no rows");
  return Dataset(std::move(rows));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("path", "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Dataset load_dataset(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  if (path.extension() == ".csv") return dataset_from_csv(text);
  if (path.extension() == ".json") {
    try {
      return dataset_from_json(Json::parse(text));
    } catch (const Json::parse_error& e) {
      throw ParseError("dataset", e.what());
    }
  }
  throw ParseError("path", "dataset file must end in .csv or .json");
}

}  // namespace qcaveat
