#include "crossnorm/states.hpp"

#include "crossnorm/errors.hpp"
#include "crossnorm/json_io.hpp"
#include "crossnorm/tolerances.hpp"

#include <cmath>
#include <string>

namespace crossnorm {

PureState::PureState(FactorDims dims, CVector amplitudes)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
  if (dims_.size() == 0 || amplitudes_.size() != dims_.total())
    throw InvalidStateError(StateProperty::Shape, "amplitude count does not match dims");
  if (!amplitudes_.allFinite()) throw InvalidStateError(StateProperty::Finiteness, "non-finite amplitude");
  if (std::abs(amplitudes_.norm() - 1.0) > tol::kUnitNorm)
    throw InvalidStateError(StateProperty::Normalization, "pure state is not a unit vector");
}

DensityOperator PureState::density() const {
  return validate_density(amplitudes_ * amplitudes_.adjoint(), dims_);
}

DensityOperator as_density(const AnyState& s) {
  if (const auto* p = std::get_if<PureState>(&s)) return p->density();
  return std::get<DensityOperator>(s);
}

const FactorDims& dims_of(const AnyState& s) {
  return std::visit([](const auto& v) -> const FactorDims& { return v.dims(); }, s);
}

PureState make_bell(int d) {
  if (d < 2) throw InvalidInputError("bell: local dimension must be at least 2");
  CVector psi = CVector::Zero(d * d);
  for (int i = 0; i < d; ++i) psi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return PureState({d, d}, psi);
}

PureState make_ghz(int n) {
  if (n < 2) throw InvalidInputError("ghz: need at least two qubits");
  const int total = 1 << n;
  CVector psi = CVector::Zero(total);
  psi(0) = psi(total - 1) = 1.0 / std::sqrt(2.0);
  return PureState(FactorDims(std::vector<int>(n, 2)), psi);
}

PureState make_product(const std::vector<CVector>& locals) {
  if (locals.empty()) throw InvalidInputError("product: no factors");
  std::vector<int> dims;
  CVector psi = CVector::Ones(1);
  for (const CVector& v : locals) {
    if (v.size() == 0 || v.norm() == 0.0) throw InvalidInputError("product: empty or zero factor");
    dims.push_back(static_cast<int>(v.size()));
    psi = kron(psi, CVector(v / v.norm()));
  }
  return PureState(FactorDims(dims), psi);
}

DensityOperator make_product_density(const std::vector<CMatrix>& locals) {
  if (locals.empty()) throw InvalidInputError("product: no factors");
  std::vector<int> dims;
  for (const CMatrix& m : locals) {
    validate_density(m, {static_cast<int>(m.rows())});
    dims.push_back(static_cast<int>(m.rows()));
  }
  return validate_density(kron_all(locals), FactorDims(dims));
}

DensityOperator make_rho_eps(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw InvalidInputError("rho-eps: epsilon must lie in [0, 1]");
  const int d = 3;
  auto idx = [](int i, int j) { return i * 3 + j; };
  CMatrix rho = CMatrix::Zero(d * d, d * d);
  rho(idx(0, 0), idx(0, 0)) = 1.0 - eps;
  CVector anti = CVector::Zero(d * d);
  anti(idx(1, 2)) = 1.0;
  anti(idx(2, 1)) = -1.0;
  rho += (eps / 2.0) * anti * anti.adjoint();
  return validate_density(rho, {3, 3});
}

PureState make_two_term(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInputError("two-term: p must lie in [0, 1]");
  CVector psi = CVector::Zero(4);
  psi(0) = std::sqrt(p);
  psi(3) = std::sqrt(1.0 - p);
  return PureState({2, 2}, psi);
}

namespace {

void check_orthonormal(const std::vector<CVector>& family, const char* what) {
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = 0; j < family.size(); ++j) {
      const Complex ip = family[i].dot(family[j]);
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(ip - expected) > tol::kOrthonormal)
        throw InvalidInputError(std::string("coeff: ") + what + " is not orthonormal");
    }
}

}  // namespace

DensityOperator make_coeff_state(const CoeffMatrix& c) {
  const auto r = static_cast<std::size_t>(c.a.rows());
  if (c.a.rows() != c.a.cols() || c.basis1.size() != r || c.basis2.size() != r || r == 0)
    throw InvalidInputError("coeff: coefficient matrix and basis families disagree in size");
  const auto d1 = static_cast<int>(c.basis1.front().size());
  const auto d2 = static_cast<int>(c.basis2.front().size());
  for (std::size_t i = 0; i < r; ++i)
    if (c.basis1[i].size() != d1 || c.basis2[i].size() != d2)
      throw InvalidInputError("coeff: basis vectors differ in length");
  check_orthonormal(c.basis1, "first family");
  check_orthonormal(c.basis2, "second family");
  CMatrix rho = CMatrix::Zero(d1 * d2, d1 * d2);
  for (std::size_t i = 0; i < r; ++i) {
    const CVector ki = kron(c.basis1[i], c.basis2[i]);
    for (std::size_t j = 0; j < r; ++j) {
      const CVector kj = kron(c.basis1[j], c.basis2[j]);
      rho += c.a(i, j) * ki * kj.adjoint();
    }
  }
  return validate_density(rho, {d1, d2});
}

PureState make_random_pure(const FactorDims& dims, std::uint64_t seed) {
  Rng rng(seed);
  return PureState(dims, random_unit_vector(dims.total(), rng));
}

DensityOperator make_random_density(const FactorDims& dims, std::uint64_t seed, int rank) {
  Rng rng(seed);
  return validate_density(random_density_matrix(dims.total(), rng, rank), dims);
}

SeparableState make_random_separable(const FactorDims& dims, int terms, std::uint64_t seed) {
  if (terms < 1) throw InvalidInputError("random-separable: need at least one term");
  if (dims.size() < 2) throw InvalidInputError("random-separable: need at least two factors");
  Rng rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(terms);
  double total = 0.0;
  for (double& x : w) total += (x = expo(rng));
  std::vector<TensorTerm> parts;
  for (int i = 0; i < terms; ++i) {
    TensorTerm t;
    for (int d : dims) t.factors.push_back(random_density_matrix(d, rng));
    t.factors.front() *= w[i] / total;
    parts.push_back(std::move(t));
  }
  TensorDecomposition witness(dims, std::move(parts));
  DensityOperator state = validate_density(witness.reconstruct(), dims);
  return {std::move(state), std::move(witness)};
}

DensityOperator make_mixture(const std::vector<DensityOperator>& states, const std::vector<double>& weights) {
  if (states.empty() || states.size() != weights.size())
    throw InvalidInputError("mixture: states and weights differ in count");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidInputError("mixture: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > tol::kTrace) throw InvalidInputError("mixture: weights do not sum to 1");
  CMatrix rho = CMatrix::Zero(states.front().dim(), states.front().dim());
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!(states[i].dims() == states.front().dims())) throw InvalidInputError("mixture: dims mismatch");
    rho += weights[i] * states[i].matrix();
  }
  return validate_density(rho, states.front().dims());
}

CoeffMatrix make_random_coeff(int d1, int d2, int r, std::uint64_t seed) {
  if (r < 1 || r > d1 || r > d2) throw InvalidInputError("coeff: rank must be in [1, min(d1, d2)]");
  Rng rng(seed);
  CoeffMatrix c;
  c.a = random_density_matrix(r, rng);
  const CMatrix u1 = random_unitary(d1, rng);
  const CMatrix u2 = random_unitary(d2, rng);
  for (int i = 0; i < r; ++i) {
    c.basis1.push_back(u1.col(i));
    c.basis2.push_back(u2.col(i));
  }
  return c;
}

SeparableState make_separable(const DensityOperator& state, TensorDecomposition witness) {
  if (!(witness.dims() == state.dims())) throw InvalidInputError("separable witness: dims mismatch");
  for (const TensorTerm& t : witness.terms())
    for (const CMatrix& f : t.factors) {
      if ((f - f.adjoint()).cwiseAbs().maxCoeff() > tol::kHermitian)
        throw InvalidInputError("separable witness: factor is not Hermitian");
      if (eigh_hermitian(f).values.minCoeff() < -tol::kPsdClamp)
        throw InvalidInputError("separable witness: factor is not positive");
    }
  if (!witness.certifies(state.matrix()))
    throw InvalidInputError("separable witness does not reconstruct the state");
  return {state, std::move(witness)};
}

namespace {

FactorDims dims_param(const nlohmann::json& params, const FactorDims& fallback) {
  if (!params.contains("dims")) return fallback;
  return FactorDims(params.at("dims").get<std::vector<int>>());
}

}  // namespace

GeneratedState make_state(std::string_view kind, const nlohmann::json& params) {
  try {
    if (kind == "bell") return {make_bell(params.value("d", 2)), std::nullopt};
    if (kind == "ghz") return {make_ghz(params.value("n", 3)), std::nullopt};
    if (kind == "two-term") return {make_two_term(params.at("p").get<double>()), std::nullopt};
    if (kind == "rho-eps") return {make_rho_eps(params.value("epsilon", 0.01)), std::nullopt};
    if (kind == "product") {
      std::vector<CVector> locals;
      for (const auto& v : params.at("factors")) locals.push_back(vector_from_json(v));
      return {make_product(locals), std::nullopt};
    }
    if (kind == "coeff") {
      CoeffMatrix c;
      c.a = matrix_from_json(params.at("a"));
      for (const auto& v : params.at("basis1")) c.basis1.push_back(vector_from_json(v));
      for (const auto& v : params.at("basis2")) c.basis2.push_back(vector_from_json(v));
      return {make_coeff_state(c), std::nullopt};
    }
    if (kind == "random-coeff") {
      const auto c = make_random_coeff(params.value("d1", 2), params.value("d2", 2), params.value("rank", 2),
                                       params.at("seed").get<std::uint64_t>());
      return {make_coeff_state(c), std::nullopt};
    }
    if (kind == "random-pure")
      return {make_random_pure(dims_param(params, {2, 2}), params.at("seed").get<std::uint64_t>()), std::nullopt};
    if (kind == "random-density")
      return {make_random_density(dims_param(params, {2, 2}), params.at("seed").get<std::uint64_t>(),
                                  params.value("rank", 0)),
              std::nullopt};
    if (kind == "random-separable") {
      auto s = make_random_separable(dims_param(params, {2, 2}), params.value("terms", 3),
                                     params.at("seed").get<std::uint64_t>());
      return {std::move(s.state), std::move(s.witness)};
    }
    if (kind == "mixture") {
      std::vector<DensityOperator> states;
      for (const auto& s : params.at("states")) states.push_back(as_density(state_from_json(s)));
      return {make_mixture(states, params.at("weights").get<std::vector<double>>()), std::nullopt};
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError(std::string("make_state: bad parameters: ") + e.what());
  }
  throw InvalidInputError("make_state: unknown kind '" + std::string(kind) + "'");
}

CMatrix embed_matrix(const CMatrix& m, const FactorDims& dims, const FactorDims& new_dims) {
  if (dims.size() != new_dims.size()) throw InvalidInputError("embed: factor count mismatch");
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (new_dims[k] < dims[k]) throw InvalidInputError("embed: dims may not shrink");
  if (m.rows() != dims.total() || m.cols() != dims.total()) throw InvalidInputError("embed: dims inconsistent");
  const int n = dims.total();
  std::vector<int> map(n);
  for (int i = 0; i < n; ++i) {
    int rest = i, j = 0, stride = 1;
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
      j += (rest % dims[k]) * stride;
      rest /= dims[k];
      stride *= new_dims[k];
    }
    map[i] = j;
  }
  CMatrix out = CMatrix::Zero(new_dims.total(), new_dims.total());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(map[i], map[j]) = m(i, j);
  return out;
}

DensityOperator embed_state(const DensityOperator& s, const FactorDims& new_dims) {
  if (new_dims == s.dims()) return s;
  return validate_density(embed_matrix(s.matrix(), s.dims(), new_dims), new_dims);
}

}  // namespace crossnorm
