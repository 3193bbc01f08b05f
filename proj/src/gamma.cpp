#include "crossnorm/gamma.hpp"

#include "crossnorm/decompositions.hpp"
#include "crossnorm/errors.hpp"
#include "crossnorm/local_search.hpp"
#include "crossnorm/tolerances.hpp"

#include <cmath>
#include <optional>

namespace crossnorm {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::OperatorSchmidt: return "operator-schmidt";
    case Strategy::EigenMixture: return "eigen-mixture";
    case Strategy::LocalSearch: return "local-search";
    case Strategy::Supplied: return "supplied";
    case Strategy::Hierarchical: return "hierarchical";
    case Strategy::HierarchicalEigen: return "hierarchical-eigen";
  }
  return "unknown";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::EntangledCertified: return "entangled-certified";
    case Verdict::SeparableConsistent: return "separable-consistent";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

TrimmedOperator trim_support(const CMatrix& m, const FactorDims& dims) {
  const std::size_t n = dims.size();
  const int total = dims.total();
  std::vector<int> used(n, 0);
  std::vector<int> digits(n);
  auto mark = [&](int index) {
    for (int k = static_cast<int>(n) - 1; k >= 0; --k) {
      const int d = index % dims[k];
      index /= dims[k];
      used[k] = std::max(used[k], d + 1);
    }
  };
  for (int j = 0; j < total; ++j)
    for (int i = 0; i < total; ++i)
      if (m(i, j) != Complex(0.0)) {
        mark(i);
        mark(j);
      }
  for (int& u : used) u = std::max(u, 1);
  FactorDims trimmed(used);
  if (trimmed == dims) return {m, dims};
  const int small = trimmed.total();
  std::vector<int> map(small);
  for (int i = 0; i < small; ++i) {
    int rest = i, j = 0, stride = 1;
    for (int k = static_cast<int>(n) - 1; k >= 0; --k) {
      j += (rest % used[k]) * stride;
      rest /= used[k];
      stride *= dims[k];
    }
    map[i] = j;
  }
  CMatrix out(small, small);
  for (int i = 0; i < small; ++i)
    for (int j = 0; j < small; ++j) out(i, j) = m(map[i], map[j]);
  return {std::move(out), std::move(trimmed)};
}

double gamma_pure(const PureState& psi) {
  if (psi.dims().size() != 2) throw InvalidInputError("gamma_pure: bipartite pure state required");
  const double s = schmidt_decompose(psi).sum_sqrt();
  return s * s;
}

double gamma_coeff(const CoeffMatrix& c) {
  make_coeff_state(c);
  return c.a.cwiseAbs().sum();
}

namespace {

void require_bipartite(const FactorDims& dims, const char* what) {
  if (dims.size() != 2) throw InvalidInputError(std::string(what) + ": bipartite dims required");
}

double lower_of(const CMatrix& m, const FactorDims& dims) {
  const double realigned = singular_values(realign_matrix(m, dims[0], dims[1])).sum();
  return std::max(trace_norm(m), realigned);
}

}  // namespace

double gamma_lower(const DensityOperator& rho) {
  require_bipartite(rho.dims(), "gamma_lower");
  const TrimmedOperator t = trim_support(rho.matrix(), rho.dims());
  return lower_of(t.matrix, t.dims);
}

TensorDecomposition operator_schmidt_witness(const CMatrix& m, const FactorDims& dims) {
  require_bipartite(dims, "operator_schmidt_witness");
  const OperatorSchmidt os = operator_schmidt_matrix(m, dims[0], dims[1]);
  std::vector<TensorTerm> terms;
  for (std::size_t k = 0; k < os.left.size(); ++k)
    terms.push_back({{os.values(static_cast<Eigen::Index>(k)) * os.left[k], os.right[k]}});
  return TensorDecomposition(dims, std::move(terms));
}

TensorDecomposition eigen_mixture_witness(const CMatrix& m, const FactorDims& dims) {
  require_bipartite(dims, "eigen_mixture_witness");
  return hierarchical_eigen_witness(m, dims);
}

Verdict separability_verdict(double lower, double upper) {
  if (lower > 1.0 + tol::kVerdict) return Verdict::EntangledCertified;
  if (upper <= 1.0 + tol::kVerdict) return Verdict::SeparableConsistent;
  return Verdict::Inconclusive;
}

namespace {

struct Candidate {
  TensorDecomposition witness;
  Strategy strategy;
  double residual;
};

// Keeps the cheapest verified witness; ties go to the earlier strategy.
class BestWitness {
 public:
  explicit BestWitness(const CMatrix& target) : target_(target) {}

  void offer(TensorDecomposition w, Strategy s) {
    if (!(w.dims().total() == target_.rows())) return;
    const double r = w.residual(target_);
    if (!(r <= tol::kWitnessResidual)) return;
    if (!best_ || w.cost() < best_->witness.cost()) best_ = Candidate{std::move(w), s, r};
  }

  const std::optional<Candidate>& best() const { return best_; }

 private:
  const CMatrix& target_;
  std::optional<Candidate> best_;
};

}  // namespace

UpperBound gamma_upper(const DensityOperator& rho, const OptimizerConfig& cfg,
                       std::span<const TensorDecomposition> candidates) {
  require_bipartite(rho.dims(), "gamma_upper");
  const TrimmedOperator t = trim_support(rho.matrix(), rho.dims());
  const double floor = lower_of(t.matrix, t.dims);

  BestWitness local(t.matrix);
  const TensorDecomposition schmidt = operator_schmidt_witness(t.matrix, t.dims);
  local.offer(schmidt, Strategy::OperatorSchmidt);
  local.offer(eigen_mixture_witness(t.matrix, t.dims), Strategy::EigenMixture);

  // Supplied witnesses are checked up front so a closing one skips the search.
  for (const TensorDecomposition& c : candidates)
    if (!(c.dims() == rho.dims())) throw InvalidInputError("gamma_upper: candidate dims do not match the state");
  BestWitness supplied(rho.matrix());
  for (const TensorDecomposition& c : candidates) supplied.offer(c, Strategy::Supplied);
  auto closes = [&](const std::optional<Candidate>& c) {
    return c && c->witness.cost() <= floor * (1.0 + kClosedGap);
  };

  int restarts = 0, iterations = 0;
  const bool open = !closes(local.best()) && !closes(supplied.best());
  if (open && cfg.restarts > 0 && schmidt.size() >= 2) {
    TermPairs start;
    for (const TensorTerm& term : schmidt.terms()) {
      start.x.push_back(term.factors[0]);
      start.y.push_back(term.factors[1]);
    }
    LocalSearchResult refined = refine_terms(std::move(start), cfg, floor);
    restarts = refined.restarts;
    iterations = refined.iterations;
    std::vector<TensorTerm> terms;
    for (std::size_t j = 0; j < refined.terms.x.size(); ++j)
      terms.push_back({{std::move(refined.terms.x[j]), std::move(refined.terms.y[j])}});
    local.offer(TensorDecomposition(t.dims, std::move(terms)), Strategy::LocalSearch);
  }

  BestWitness overall(rho.matrix());
  if (local.best()) {
    const Candidate& c = *local.best();
    overall.offer(t.dims == rho.dims() ? c.witness : embed_decomposition(c.witness, rho.dims()), c.strategy);
  }
  if (supplied.best()) overall.offer(supplied.best()->witness, Strategy::Supplied);
  if (!overall.best()) throw NumericalError("gamma_upper: no witness passed the reconstruction check");

  const Candidate& best = *overall.best();
  UpperBound out;
  out.witness = best.witness;
  out.cost = best.witness.cost();
  out.strategy = best.strategy;
  out.residual = best.residual;
  out.restarts = restarts;
  out.iterations = iterations;
  return out;
}

namespace {

GammaBracket assemble(double lower, UpperBound up) {
  if (lower > up.cost + tol::kBracket)
    throw InternalError("gamma bracket inverted: lower " + std::to_string(lower) + " > upper " +
                        std::to_string(up.cost));
  GammaBracket b;
  b.lower = lower;
  b.upper = up.cost;
  b.verdict = separability_verdict(lower, up.cost);
  b.strategy = up.strategy;
  b.restarts = up.restarts;
  b.iterations = up.iterations;
  b.residual = up.residual;
  b.witness = std::move(up.witness);
  return b;
}

}  // namespace

GammaBracket gamma_bracket(const DensityOperator& rho, const OptimizerConfig& cfg,
                           std::span<const TensorDecomposition> candidates) {
  return assemble(gamma_lower(rho), gamma_upper(rho, cfg, candidates));
}

MeasureSpec parse_measure(const std::string& name, double a) {
  if (!(a > 0.0)) throw InvalidInputError("measure parameter a must be positive");
  if (name == "egamma") return {MeasureKind::EGamma, a};
  if (name == "f1") return {MeasureKind::F1, a};
  if (name == "f2") return {MeasureKind::F2, a};
  if (name == "f3") return {MeasureKind::F3, a};
  throw InvalidInputError("unknown measure '" + name + "'");
}

const char* to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::EGamma: return "egamma";
    case MeasureKind::F1: return "f1";
    case MeasureKind::F2: return "f2";
    case MeasureKind::F3: return "f3";
  }
  return "unknown";
}

double measure_value(double x, const MeasureSpec& spec) {
  if (!(x >= 1.0 - tol::kMeasureDomain))
    throw InvalidInputError("measure argument " + std::to_string(x) + " is below 1");
  x = std::max(x, 1.0);
  switch (spec.kind) {
    case MeasureKind::EGamma: return x * std::log(x);
    case MeasureKind::F1: return x - 1.0;
    case MeasureKind::F2: return x * std::log(x) - x + 1.0;
    case MeasureKind::F3: return std::expm1(spec.a * (x - 1.0));
  }
  throw InvalidInputError("unknown measure kind");
}

Interval measure_bracket(const GammaBracket& b, const MeasureSpec& spec) {
  return {measure_value(b.lower, spec), measure_value(b.upper, spec)};
}

GammaBracket gamma_bracket_multi(const DensityOperator& rho, const OptimizerConfig& cfg,
                                 std::span<const TensorDecomposition> candidates) {
  return assemble(gamma_lower_multi(rho), gamma_upper_multi(rho, cfg, candidates));
}

GammaBracket gamma_bracket_any(const DensityOperator& rho, const OptimizerConfig& cfg,
                               std::span<const TensorDecomposition> candidates) {
  if (rho.dims().size() == 2) return gamma_bracket(rho, cfg, candidates);
  return gamma_bracket_multi(rho, cfg, candidates);
}

Interval multipartite_measure(const DensityOperator& rho, const MeasureSpec& spec, const OptimizerConfig& cfg,
                              std::span<const TensorDecomposition> candidates) {
  return measure_bracket(gamma_bracket_any(rho, cfg, candidates), spec);
}

}  // namespace crossnorm
