#include "crossnorm/verify.hpp"

#include "crossnorm/channels.hpp"
#include "crossnorm/decompositions.hpp"
#include "crossnorm/entropy.hpp"
#include "crossnorm/errors.hpp"
#include "crossnorm/random.hpp"
#include "crossnorm/states.hpp"
#include "crossnorm/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

namespace crossnorm {

namespace {

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

FactorDims small_pair(Rng& rng) {
  static const std::vector<FactorDims> pairs{{2, 2}, {2, 3}, {3, 2}, {3, 3}};
  return pairs[uniform_int(rng, 0, 3)];
}

std::uint64_t next_seed(Rng& rng) { return rng(); }

// State with a witness where one is cheap to produce.
struct Sample {
  DensityOperator state;
  std::optional<TensorDecomposition> witness;
};

Sample random_sample(Rng& rng, const FactorDims& dims) {
  switch (uniform_int(rng, 0, 3)) {
    case 0: return {make_random_pure(dims, next_seed(rng)).density(), std::nullopt};
    case 1: {
      SeparableState s = make_random_separable(dims, uniform_int(rng, 1, 4), next_seed(rng));
      return {s.state, s.witness};
    }
    case 2: {
      const int r = uniform_int(rng, 1, std::min(dims[0], dims[1]));
      return {make_coeff_state(make_random_coeff(dims[0], dims[1], r, next_seed(rng))), std::nullopt};
    }
    default: return {make_random_density(dims, next_seed(rng), uniform_int(rng, 1, 2)), std::nullopt};
  }
}

std::vector<TensorDecomposition> candidates_of(const Sample& s) {
  if (s.witness) return {*s.witness};
  return {};
}

const std::vector<MeasureSpec>& all_measures() {
  static const std::vector<MeasureSpec> m{{MeasureKind::EGamma, 1.0},
                                          {MeasureKind::F1, 1.0},
                                          {MeasureKind::F2, 1.0},
                                          {MeasureKind::F3, 1.0},
                                          {MeasureKind::F3, 2.0}};
  return m;
}

CMatrix conjugate(const CMatrix& m, const CMatrix& u) { return u * m * u.adjoint(); }

double trial_e0(Rng& rng, const OptimizerConfig& cfg) {
  const FactorDims dims = uniform_int(rng, 0, 1) ? FactorDims{2, 2} : FactorDims{2, 3};
  const Sample s = random_sample(rng, dims);
  int pad0 = uniform_int(rng, 0, 2), pad1 = uniform_int(rng, 0, 2);
  if (pad0 + pad1 == 0) pad1 = 1;
  const FactorDims big{dims[0] + pad0, dims[1] + pad1};
  const DensityOperator e = embed_state(s.state, big);
  const double dl = std::abs(gamma_lower(e) - gamma_lower(s.state));
  const double du = std::abs(gamma_upper(e, cfg).cost - gamma_upper(s.state, cfg).cost);
  return tol::kReconstruction - std::max(dl, du);
}

double trial_e1(Rng& rng, const OptimizerConfig& cfg) {
  const FactorDims dims = small_pair(rng);
  const SeparableState s = make_random_separable(dims, uniform_int(rng, 1, 6), next_seed(rng));
  const std::vector<TensorDecomposition> cands{s.witness};
  const GammaBracket b = gamma_bracket(s.state, cfg, cands);
  double margin = std::numeric_limits<double>::infinity();
  for (const MeasureSpec& f : all_measures())
    margin = std::min(margin, measure_value(1.0 + tol::kVerdict, f) - measure_value(b.upper, f));
  return margin;
}

double trial_e2(Rng& rng, const OptimizerConfig&) {
  const FactorDims dims = small_pair(rng);
  const CMatrix u = kron(random_unitary(dims[0], rng), random_unitary(dims[1], rng));
  const DensityOperator rho = make_random_density(dims, next_seed(rng), uniform_int(rng, 1, dims.total()));
  const DensityOperator moved = validate_density(conjugate(rho.matrix(), u), dims);
  const double dl = std::abs(gamma_lower(moved) - gamma_lower(rho));
  const PureState psi = make_random_pure(dims, next_seed(rng));
  const CVector v = u * psi.amplitudes();
  const double dp = std::abs(gamma_pure(PureState(dims, v / v.norm())) - gamma_pure(psi));
  return tol::kBracket - std::max(dl, dp);
}

double trial_e3(Rng& rng, const OptimizerConfig&) {
  const FactorDims dims = small_pair(rng);
  const Sample s = random_sample(rng, dims);
  TensorDecomposition d = s.witness ? *s.witness
                          : uniform_int(rng, 0, 1) ? operator_schmidt_witness(s.state.matrix(), dims)
                                                   : eigen_mixture_witness(s.state.matrix(), dims);
  auto channel = [&](int din) {
    const int dout = uniform_int(rng, 1, 3), count = uniform_int(rng, 1, 3);
    const bool tp = dout * count >= din && uniform_int(rng, 0, 1) == 1;
    return random_channel(din, dout, count, tp, next_seed(rng));
  };
  const KrausChannel t1 = channel(dims[0]);
  const KrausChannel t2 = channel(dims[1]);
  const TensorDecomposition pushed = pushforward_decomposition(t1, t2, d);
  const CMatrix image = apply_local(t1, t2, s.state).matrix;
  return std::min(tol::kReconstruction - (pushed.cost() - d.cost()), tol::kWitnessResidual - pushed.residual(image));
}

double trial_e4(Rng& rng, const OptimizerConfig& cfg) {
  const FactorDims dims = small_pair(rng);
  const Sample a = random_sample(rng, dims);
  const Sample b = random_sample(rng, dims);
  const double lambda = uniform_real(rng, 0.0, 1.0);
  const UpperBound ua = gamma_upper(a.state, cfg, candidates_of(a));
  const UpperBound ub = gamma_upper(b.state, cfg, candidates_of(b));
  const DensityOperator mix = make_mixture({a.state, b.state}, {lambda, 1.0 - lambda});
  const std::vector<TensorDecomposition> cands{mix_decompositions(ua.witness, ub.witness, lambda)};
  const UpperBound um = gamma_upper(mix, cfg, cands);
  return lambda * ua.cost + (1.0 - lambda) * ub.cost + tol::kReconstruction - um.cost;
}

std::vector<int> random_ranks(Rng& rng, int dim) {
  std::vector<int> ranks;
  int left = dim;
  while (left > 0) {
    const int r = uniform_int(rng, 1, left);
    ranks.push_back(r);
    left -= r;
  }
  return ranks;
}

double trial_prop8(Rng& rng, const OptimizerConfig& cfg) {
  const FactorDims dims = uniform_int(rng, 0, 1) ? FactorDims{2, 2} : FactorDims{2, 3};
  const Sample s = random_sample(rng, dims);
  const LudersOperation l1 = random_luders(dims[0], random_ranks(rng, dims[0]), next_seed(rng));
  const LudersOperation l2 = random_luders(dims[1], random_ranks(rng, dims[1]), next_seed(rng));
  const MeasurementOutcome out = luders_outcomes(l1, l2, s.state);
  double lhs = 0.0;
  for (const Branch& br : out.branches) lhs += br.probability * (gamma_lower(br.state) - 1.0);
  const double rhs = gamma_upper(s.state, cfg, candidates_of(s)).cost - 1.0;
  return rhs + 1e-8 - lhs;
}

double trial_thm6(Rng& rng, const OptimizerConfig& cfg) {
  static const std::vector<FactorDims> shapes{{2, 2}, {2, 3}, {3, 3}, {2, 2, 2}};
  const FactorDims dims = shapes[uniform_int(rng, 0, 3)];
  const SeparableState s = make_random_separable(dims, uniform_int(rng, 1, 6), next_seed(rng));
  const std::vector<TensorDecomposition> cands{s.witness};
  const GammaBracket b = gamma_bracket_any(s.state, cfg, cands);
  double margin = std::min({1.0 + tol::kVerdict - b.upper, b.lower - (1.0 - tol::kBracket),
                            1.0 + tol::kBracket - b.lower});
  if (b.verdict != Verdict::SeparableConsistent) margin = std::min(margin, -1.0);
  return margin;
}

double trial_prop4(Rng& rng, const OptimizerConfig& cfg) {
  const FactorDims dims = small_pair(rng);
  const PureState psi = make_random_pure(dims, next_seed(rng));
  const DensityOperator rho = psi.density();
  const double exact = gamma_pure(psi);
  const double lower = gamma_lower(rho);
  const double upper = gamma_upper(rho, cfg).cost;
  return std::min(1e-8 - std::abs(lower - exact), 1e-4 * lower - (upper - lower));
}

double trial_cor5(Rng& rng, const OptimizerConfig& cfg) {
  const FactorDims dims = small_pair(rng);
  const int r = uniform_int(rng, 1, std::min(dims[0], dims[1]));
  const CoeffMatrix c = make_random_coeff(dims[0], dims[1], r, next_seed(rng));
  const DensityOperator rho = make_coeff_state(c);
  const double g = gamma_coeff(c);
  const double lower = gamma_lower(rho);
  const double upper = gamma_upper(rho, cfg).cost;
  const double spread = std::max({g, lower, upper}) - std::min({g, lower, upper});
  return tol::kVerdict - spread;
}

// E_gamma exceeds the reduced entropy on every entangled pure state.
double trial_prop17(Rng& rng, const OptimizerConfig&) {
  const FactorDims dims = small_pair(rng);
  const PureState psi = uniform_int(rng, 0, 1) ? make_random_pure(dims, next_seed(rng))
                                               : make_two_term(uniform_real(rng, 0.05, 0.95));
  const double eg = measure_value(gamma_pure(psi), {MeasureKind::EGamma, 1.0});
  const double s = svn_entropy(psi.density()).value;
  return eg - s;
}

using TrialFn = std::function<double(Rng&, const OptimizerConfig&)>;

const std::map<std::string, TrialFn>& trial_table() {
  static const std::map<std::string, TrialFn> t{
      {"E0", trial_e0},
      {"E1", trial_e1},
      {"E2", trial_e2},
      {"E3-pushforward", trial_e3},
      {"E4", trial_e4},
      {"Prop8", trial_prop8},
      {"Thm6-separable", trial_thm6},
      {"Prop4-tightness", trial_prop4},
      {"Cor5-consistency", trial_cor5},
      {"Prop17-gap", trial_prop17},
  };
  return t;
}

std::size_t index_of(const std::string& id) {
  const auto& ids = property_ids();
  const auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw InvalidInputError("unknown property id '" + id + "'");
  return static_cast<std::size_t>(it - ids.begin());
}

}  // namespace

const std::vector<std::string>& property_ids() {
  static const std::vector<std::string> ids{"E0",    "E1",     "E2",           "E3-pushforward",   "E4",
                                            "Prop8", "Thm6-separable", "Prop4-tightness", "Cor5-consistency",
                                            "Prop17-gap"};
  return ids;
}

double run_trial(const std::string& id, std::uint64_t sub_seed, const OptimizerConfig& cfg) {
  index_of(id);
  Rng rng(sub_seed);
  OptimizerConfig c = cfg;
  c.seed = derive_seed(cfg.seed, sub_seed);
  return trial_table().at(id)(rng, c);
}

std::vector<PropertyReport> run_suite(const std::vector<std::string>& ids, int trials, std::uint64_t seed,
                                      const OptimizerConfig& cfg) {
  if (trials < 1) throw InvalidInputError("run_suite: trials must be at least 1");
  const std::vector<std::string>& chosen = ids.empty() ? property_ids() : ids;
  for (const std::string& id : chosen) index_of(id);
  std::vector<PropertyReport> reports;
  for (const std::string& id : chosen) {
    PropertyReport r;
    r.id = id;
    r.seed = seed;
    r.trials = trials;
    r.worst_margin = std::numeric_limits<double>::infinity();
    const std::uint64_t stream = derive_seed(seed, index_of(id));
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t sub = derive_seed(stream, static_cast<std::uint64_t>(t));
      double margin;
      try {
        margin = run_trial(id, sub, cfg);
      } catch (const Error&) {
        margin = -std::numeric_limits<double>::infinity();
      }
      if (!(margin >= 0.0)) {
        ++r.failures;
        r.failed_seeds.push_back(sub);
      }
      r.worst_margin = std::min(r.worst_margin, std::isnan(margin) ? -std::numeric_limits<double>::infinity() : margin);
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

nlohmann::json report_to_json(const PropertyReport& r) {
  nlohmann::json j;
  j["property"] = r.id;
  j["trials"] = r.trials;
  j["failures"] = r.failures;
  // Infinite margins (a trial threw) have no JSON number.
  j["worst_margin"] = std::isfinite(r.worst_margin) ? nlohmann::json(r.worst_margin) : nlohmann::json(nullptr);
  j["seed"] = r.seed;
  j["failed_seeds"] = r.failed_seeds;
  j["passed"] = r.passed();
  return j;
}

}  // namespace crossnorm
