#include "outerfact/coeff_io.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "outerfact/error.hpp"

namespace outerfact {

using nlohmann::json;

namespace {

json real_rows(const ComplexMatrix& m, bool imag) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(imag ? m(i, j).imag() : m(i, j).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd read_rows(const json& j, const char* field) {
  require(j.is_array(), std::string("'") + field + "' must be an array of rows");
  const Index rows = static_cast<Index>(j.size());
  Index cols = -1;
  Eigen::MatrixXd out;
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    require(row.is_array(), std::string("'") + field + "' rows must be arrays");
    if (cols < 0) {
      cols = static_cast<Index>(row.size());
      out.resize(rows, cols);
    }
    require(static_cast<Index>(row.size()) == cols, std::string("'") + field + "' is ragged");
    for (Index c = 0; c < cols; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      require(v.is_number(), std::string("'") + field + "' entries must be numbers");
      out(i, c) = v.get<double>();
    }
  }
  if (cols < 0) out.resize(0, 0);
  return out;
}

ComplexMatrix complex_from(const json& entry) {
  require(entry.is_object() && entry.contains("re"), "entry needs an 're' array");
  const Eigen::MatrixXd re = read_rows(entry.at("re"), "re");
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(re.rows(), re.cols());
  if (entry.contains("im")) {
    im = read_rows(entry.at("im"), "im");
    require(im.rows() == re.rows() && im.cols() == re.cols(), "'re' and 'im' shapes differ");
  }
  ComplexMatrix m(re.rows(), re.cols());
  m.real() = re;
  m.imag() = im;
  require_finite(m, "coefficient");
  return m;
}

template <typename T>
T get_field(const json& j, const char* key) {
  require(j.contains(key), std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::validation, std::string("field '") + key + "' has the wrong type");
  }
}

json coeff_entries(const CoeffMap& coeffs) {
  json out = json::array();
  for (const auto& [k, m] : coeffs) {
    out.push_back({{"index", k}, {"re", real_rows(m, false)}, {"im", real_rows(m, true)}});
  }
  return out;
}

}  // namespace

json to_json(const LaurentPoly& q) {
  return {{"dims", q.dims()},
          {"block_size", q.block_size()},
          {"degree", q.degree()},
          {"kind", "laurent"},
          {"coeffs", coeff_entries(q.canonical())}};
}

json to_json(const AnalyticPoly& p) {
  json j = {{"dims", p.dims()},
            {"block_size", p.cols()},
            {"degree", p.degree()},
            {"kind", "analytic"},
            {"coeffs", coeff_entries(p.coeffs())}};
  if (p.rows() != p.cols()) j["block_rows"] = p.rows();
  return j;
}

json matrix_to_json(const ComplexMatrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", real_rows(m, false)},
          {"im", real_rows(m, true)}};
}

AnyPoly poly_from_json(const json& j, double herm_tol) {
  require(j.is_object(), "coefficient file must be a JSON object");
  const auto dims = get_field<long>(j, "dims");
  const auto block = get_field<long>(j, "block_size");
  const auto degree = get_field<std::vector<int>>(j, "degree");
  const auto kind = get_field<std::string>(j, "kind");
  require(dims >= 1, "'dims' must be positive");
  require(block >= 1, "'block_size' must be positive");
  require(degree.size() == static_cast<std::size_t>(dims), "'degree' length differs from 'dims'");
  require(kind == "laurent" || kind == "analytic", "'kind' must be 'laurent' or 'analytic'");
  long rows = block;
  if (kind == "analytic" && j.contains("block_rows")) rows = get_field<long>(j, "block_rows");
  require(rows >= 0, "'block_rows' must be nonnegative");

  require(j.contains("coeffs") && j.at("coeffs").is_array(), "missing 'coeffs' array");
  CoeffMap coeffs;
  for (const json& entry : j.at("coeffs")) {
    require(entry.is_object(), "each coefficient must be an object");
    auto k = get_field<Exponent>(entry, "index");
    require(k.size() == static_cast<std::size_t>(dims), "coefficient index has the wrong length");
    ComplexMatrix m = complex_from(entry);
    if (m.size() == 0 && rows * block == 0) m = ComplexMatrix::Zero(rows, block);
    require(m.rows() == rows && m.cols() == block, "coefficient has the wrong shape");
    require(coeffs.emplace(std::move(k), std::move(m)).second, "duplicate coefficient index");
  }
  if (kind == "laurent") return LaurentPoly::from_full(degree, block, coeffs, herm_tol);
  return AnalyticPoly::from_coeffs(degree, rows, block, std::move(coeffs));
}

ComplexMatrix matrix_from_json(const json& j) {
  require(j.is_object(), "matrix file must be a JSON object");
  const auto rows = get_field<long>(j, "rows");
  const auto cols = get_field<long>(j, "cols");
  ComplexMatrix m = complex_from(j);
  if (m.size() == 0 && rows * cols == 0) m = ComplexMatrix::Zero(rows, cols);
  require(m.rows() == rows && m.cols() == cols, "matrix shape does not match 'rows'/'cols'");
  return m;
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::validation, std::string("malformed JSON: ") + e.what());
  }
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorKind::io, "write to '" + path + "' failed");
}

}  // namespace outerfact
