#include "crossnorm/json_io.hpp"

#include "crossnorm/errors.hpp"

#include <cmath>
#include <fstream>

namespace crossnorm {

using nlohmann::json;

namespace {

double finite_number(const json& j) {
  if (!j.is_number()) throw SchemaError("expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw SchemaError("non-finite number");
  return x;
}

int positive_int(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) throw SchemaError(std::string(what) + " must be a positive integer");
  return j.get<int>();
}

FactorDims dims_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw SchemaError("dims must be a non-empty array");
  std::vector<int> dims;
  for (const json& d : j) dims.push_back(positive_int(d, "dims entry"));
  return FactorDims(dims);
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw SchemaError(std::string("missing field '") + name + "'");
  return j.at(name);
}

}  // namespace

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw SchemaError("complex entry must be [re, im]");
  return {finite_number(j[0]), finite_number(j[1])};
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw SchemaError("matrix must be a list of rows");
  const auto rows = j.size();
  const auto cols = j[0].size();
  if (cols == 0) throw SchemaError("matrix rows must be non-empty");
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw SchemaError("matrix rows differ in length");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = complex_from_json(j[i][k]);
  }
  return m;
}

json vector_to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

CVector vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw SchemaError("vector must be a non-empty list of entries");
  CVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = complex_from_json(j[i]);
  return v;
}

json state_to_json(const AnyState& s) {
  json out;
  if (const auto* p = std::get_if<PureState>(&s)) {
    out["kind"] = "pure";
    out["dims"] = p->dims().values();
    out["data"] = vector_to_json(p->amplitudes());
    return out;
  }
  const auto& d = std::get<DensityOperator>(s);
  out["kind"] = "density";
  out["dims"] = d.dims().values();
  json data = json::array();
  for (int i = 0; i < d.dim(); ++i)
    for (int k = 0; k < d.dim(); ++k) data.push_back(complex_to_json(d.matrix()(i, k)));
  out["data"] = std::move(data);
  return out;
}

AnyState state_from_json(const json& j) {
  const json& kind = field(j, "kind");
  if (!kind.is_string()) throw SchemaError("kind must be a string");
  const FactorDims dims = dims_from_json(field(j, "dims"));
  const json& data = field(j, "data");
  if (!data.is_array()) throw SchemaError("data must be an array");
  const auto n = static_cast<std::size_t>(dims.total());
  if (kind == "pure") {
    if (data.size() != n) throw SchemaError("pure data length does not match the product of dims");
    return PureState(dims, vector_from_json(data));
  }
  if (kind == "density") {
    if (data.size() != n * n) throw SchemaError("density data length does not match the product of dims");
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) m(i, k) = complex_from_json(data[i * n + k]);
    return validate_density(m, dims);
  }
  throw SchemaError("kind must be 'density' or 'pure'");
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void write_json_file(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

AnyState read_state(const std::filesystem::path& path) { return state_from_json(read_json_file(path)); }

void write_state(const AnyState& s, const std::filesystem::path& path) { write_json_file(state_to_json(s), path); }

json witness_to_json(const TensorDecomposition& d) {
  json terms = json::array();
  for (const TensorTerm& t : d.terms()) {
    json factors = json::array();
    for (const CMatrix& f : t.factors) factors.push_back(matrix_to_json(f));
    terms.push_back({{"factors", std::move(factors)}});
  }
  return {{"dims", d.dims().values()}, {"terms", std::move(terms)}, {"cost", d.cost()}};
}

TensorDecomposition witness_from_json(const json& j) {
  const FactorDims dims = dims_from_json(field(j, "dims"));
  const json& terms = field(j, "terms");
  if (!terms.is_array()) throw SchemaError("terms must be an array");
  std::vector<TensorTerm> out;
  for (const json& t : terms) {
    const json& factors = field(t, "factors");
    if (!factors.is_array() || factors.size() != dims.size())
      throw SchemaError("each term needs one factor per dimension");
    TensorTerm term;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      CMatrix f = matrix_from_json(factors[k]);
      if (f.rows() != dims[k] || f.cols() != dims[k]) throw SchemaError("factor shape does not match dims");
      term.factors.push_back(std::move(f));
    }
    out.push_back(std::move(term));
  }
  return TensorDecomposition(dims, std::move(out));
}

TensorDecomposition read_witness(const std::filesystem::path& path) {
  return witness_from_json(read_json_file(path));
}

void write_witness(const TensorDecomposition& d, const std::filesystem::path& path) {
  write_json_file(witness_to_json(d), path);
}

KrausChannel channel_from_json(const json& j) {
  const json& kraus = field(j, "kraus");
  if (!kraus.is_array() || kraus.empty()) throw SchemaError("kraus must be a non-empty array");
  const int din = positive_int(field(j, "dims_in"), "dims_in");
  const int dout = positive_int(field(j, "dims_out"), "dims_out");
  std::vector<CMatrix> ops;
  for (const json& k : kraus) {
    CMatrix a = matrix_from_json(k);
    if (a.rows() != din || a.cols() != dout) throw SchemaError("Kraus operator shape must be dims_in x dims_out");
    ops.push_back(std::move(a));
  }
  return validate_channel(std::move(ops));
}

json channel_to_json(const KrausChannel& c) {
  json kraus = json::array();
  for (const CMatrix& a : c.kraus) kraus.push_back(matrix_to_json(a));
  return {{"kraus", std::move(kraus)}, {"dims_in", c.dim_in}, {"dims_out", c.dim_out}};
}

KrausChannel read_channel(const std::filesystem::path& path) { return channel_from_json(read_json_file(path)); }

LudersOperation luders_from_json(const json& j) {
  const json& ps = field(j, "projectors");
  if (!ps.is_array() || ps.empty()) throw SchemaError("projectors must be a non-empty array");
  std::vector<CMatrix> out;
  for (const json& p : ps) out.push_back(matrix_from_json(p));
  return validate_luders(std::move(out));
}

json luders_to_json(const LudersOperation& l) {
  json ps = json::array();
  for (const CMatrix& p : l.projectors) ps.push_back(matrix_to_json(p));
  return {{"projectors", std::move(ps)}};
}

LudersOperation read_luders(const std::filesystem::path& path) { return luders_from_json(read_json_file(path)); }

}  // namespace crossnorm
