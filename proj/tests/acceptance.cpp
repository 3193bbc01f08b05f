// Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include "crossnorm/channels.hpp"
#include "crossnorm/entropy.hpp"
#include "crossnorm/gamma.hpp"
#include "crossnorm/random.hpp"
#include "crossnorm/states.hpp"
#include "crossnorm/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace crossnorm;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Tracks the worst violation of "value <= limit" across cases.
struct Worst {
  int failures = 0;
  double margin = std::numeric_limits<double>::infinity();
  void check(double value, double limit) {
    const double m = limit - value;
    if (!(m >= 0.0)) ++failures;
    margin = std::min(margin, std::isnan(m) ? -std::numeric_limits<double>::infinity() : m);
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

CMatrix proj3(int i) {
  CMatrix p = CMatrix::Zero(3, 3);
  p(i, i) = 1.0;
  return p;
}

int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Outcome pure_tightness() {
  const auto t0 = std::chrono::steady_clock::now();
  Worst exact, gap;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const FactorDims dims{2 + static_cast<int>(s % 3), 2 + static_cast<int>(s / 3 % 3)};
    const PureState psi = make_random_pure(dims, derive_seed(1, s));
    const double g = gamma_pure(psi);
    const DensityOperator rho = psi.density();
    const double lower = gamma_lower(rho);
    OptimizerConfig cfg;
    cfg.seed = s;
    const double upper = gamma_upper(rho, cfg).cost;
    exact.check(std::abs(lower - g), 1e-8);
    gap.check(upper - lower, 1e-4 * lower);
  }
  const double t = seconds_since(t0);
  return {exact.failures == 0 && gap.failures == 0 && t <= 60.0,
          fmt("200 states, worst |lower-exact| slack %.3g, worst gap slack %.3g, %.2f s", exact.margin, gap.margin, t)};
}

Outcome coeff_consistency() {
  Worst w;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const int d1 = 2 + static_cast<int>(s % 3), d2 = 2 + static_cast<int>(s / 3 % 3);
    const int r = 1 + static_cast<int>(s % std::min(d1, d2));
    const CoeffMatrix c = make_random_coeff(d1, d2, r, derive_seed(2, s));
    const DensityOperator rho = make_coeff_state(c);
    const double g = gamma_coeff(c), lo = gamma_lower(rho), up = gamma_upper(rho).cost;
    w.check(std::max({g, lo, up}) - std::min({g, lo, up}), 1e-6);
  }
  return {w.failures == 0, fmt("50 states, %d failures, worst slack %.3g", w.failures, w.margin)};
}

Outcome separable_direction() {
  Worst up, lo_min, lo_max;
  int verdicts = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const FactorDims dims = s % 2 ? FactorDims{3, 3} : FactorDims{2, 2};
    const SeparableState st = make_random_separable(dims, 1 + static_cast<int>(s % 6), derive_seed(3, s));
    const std::vector<TensorDecomposition> cands{st.witness};
    const GammaBracket b = gamma_bracket(st.state, {}, cands);
    up.check(b.upper, 1.0 + 1e-6);
    lo_min.check(1.0 - 1e-9, b.lower);
    lo_max.check(b.lower, 1.0 + 1e-9);
    if (b.verdict == Verdict::SeparableConsistent) ++verdicts;
  }
  const int fails = up.failures + lo_min.failures + lo_max.failures;
  return {fails == 0 && verdicts == 100,
          fmt("100 states, %d bound failures, %d separable-consistent verdicts", fails, verdicts)};
}

Outcome bell_values() {
  const GammaBracket b = gamma_bracket(make_bell().density());
  const double eg = measure_value(b.lower, parse_measure("egamma"));
  const double eg_hi = measure_value(b.upper, parse_measure("egamma"));
  const double f1 = measure_value(b.upper, parse_measure("f1"));
  const bool ok = std::abs(b.lower - 2) <= 1e-6 && std::abs(b.upper - 2) <= 1e-6 &&
                  std::abs(eg - 1.386294) <= 1e-6 && std::abs(eg_hi - 1.386294) <= 1e-6 && std::abs(f1 - 1) <= 1e-6;
  return {ok, fmt("bracket [%.9f, %.9f], E_gamma %.9f", b.lower, b.upper, eg) + fmt(", f1 %.9f", f1)};
}

Outcome pure_gap() {
  const PureState psi = make_two_term(0.9);
  const GammaBracket b = gamma_bracket(psi.density());
  const Interval eg = measure_bracket(b, parse_measure("egamma"));
  const double s = svn_entropy(psi.density()).value;
  const bool ok = std::abs(eg.lo - 0.752006) <= 1e-6 && std::abs(eg.hi - 0.752006) <= 1e-6 &&
                  std::abs(s - 0.325083) <= 1e-6 && std::abs(eg.lo - s) > 0.4;
  return {ok, fmt("E_gamma %.9f, S_vN %.9f, difference %.6f", eg.lo, s, eg.lo - s)};
}

Outcome example8() {
  const double eps = 0.01;
  const DensityOperator rho = make_rho_eps(eps);
  const TensorDecomposition cand({3, 3}, {TensorTerm{{(1 - eps) * proj3(0), proj3(0)}},
                                          TensorTerm{{0.5 * eps * proj3(1), proj3(2)}},
                                          TensorTerm{{0.5 * eps * proj3(2), proj3(1)}}});
  const double re = relative_entropy(rho, validate_density(cand.reconstruct(), {3, 3}));
  const double upper = gamma_upper(rho).cost;
  const CMatrix p12 = proj3(1) + proj3(2);
  const DensityOperator selected =
      validate_density(post_select(validate_channel({kron(p12, p12)}), rho).matrix(), {3, 3});
  const GammaBracket sb = gamma_bracket(selected);
  const bool ok = std::abs(re - eps * std::log(2.0)) <= 1e-10 && upper <= 1.01 + 1e-9 &&
                  std::abs(sb.lower - 2) <= 1e-6 && std::abs(sb.upper - 2) <= 1e-6;
  return {ok, fmt("relative entropy %.12f (eps ln 2 = %.12f), upper %.12f", re, eps * std::log(2.0), upper) +
                  fmt(", post-selected [%.9f, %.9f]", sb.lower, sb.upper)};
}

Outcome locc_pushforward() {
  Worst cost, res;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng(derive_seed(7, s));
    const FactorDims dims{pick(rng, 2, 3), pick(rng, 2, 3)};
    const DensityOperator rho = make_random_density(dims, rng(), pick(rng, 1, dims.total()));
    OptimizerConfig cfg;
    cfg.seed = s;
    const TensorDecomposition w = dims.total() <= 6 ? gamma_upper(rho, cfg).witness
                                                    : eigen_mixture_witness(rho.matrix(), dims);
    auto channel = [&](int din) {
      const int dout = pick(rng, 1, 3), count = pick(rng, 1, 3);
      return random_channel(din, dout, count, dout * count >= din && pick(rng, 0, 1) == 1, rng());
    };
    const KrausChannel t1 = channel(dims[0]), t2 = channel(dims[1]);
    const TensorDecomposition pushed = pushforward_decomposition(t1, t2, w);
    cost.check(pushed.cost(), w.cost() + 1e-10);
    res.check(pushed.residual(apply_local(t1, t2, rho).matrix), 1e-8);
  }
  return {cost.failures == 0 && res.failures == 0,
          fmt("100 cases, %d cost failures, worst slack %.3g", cost.failures, cost.margin)};
}

std::vector<int> ranks_for(Rng& rng, int dim) {
  std::vector<int> r;
  for (int left = dim; left > 0;) {
    const int k = pick(rng, 1, left);
    r.push_back(k);
    left -= k;
  }
  return r;
}

Outcome luders_average() {
  Worst w;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng(derive_seed(8, s));
    const int d = s % 2 ? 3 : 2;
    const FactorDims dims{d, d};
    const DensityOperator rho = make_random_density(dims, rng(), pick(rng, 1, dims.total()));
    const MeasurementOutcome m = luders_outcomes(random_luders(d, ranks_for(rng, d), rng()),
                                                 random_luders(d, ranks_for(rng, d), rng()), rho);
    double lhs = 0.0;
    for (const Branch& b : m.branches) lhs += b.probability * (gamma_lower(b.state) - 1.0);
    OptimizerConfig cfg;
    cfg.seed = s;
    w.check(lhs, gamma_upper(rho, cfg).cost - 1.0 + 1e-8);
  }
  return {w.failures == 0, fmt("100 cases, %d failures, worst slack %.3g", w.failures, w.margin)};
}

Outcome invariance_and_expansion() {
  Worst lu, emb;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng(derive_seed(9, s));
    const FactorDims dims{pick(rng, 2, 3), pick(rng, 2, 3)};
    const DensityOperator rho = make_random_density(dims, rng(), pick(rng, 1, dims.total()));
    const CMatrix u = kron(random_unitary(dims[0], rng), random_unitary(dims[1], rng));
    lu.check(std::abs(gamma_lower(validate_density(u * rho.matrix() * u.adjoint(), dims)) - gamma_lower(rho)), 1e-9);
  }
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(derive_seed(10, s));
    const FactorDims dims{2, pick(rng, 2, 3)};
    const DensityOperator rho = make_random_density(dims, rng(), pick(rng, 1, 3));
    const FactorDims big{dims[0] + pick(rng, 1, 2), dims[1] + pick(rng, 0, 2)};
    const DensityOperator e = embed_state(rho, big);
    emb.check(std::abs(gamma_lower(e) - gamma_lower(rho)), 1e-10);
    emb.check(std::abs(gamma_upper(e).cost - gamma_upper(rho).cost), 1e-10);
  }
  return {lu.failures == 0 && emb.failures == 0,
          fmt("100 conjugations slack %.3g, 50 embeddings slack %.3g", lu.margin, emb.margin)};
}

Outcome mixtures() {
  Worst w;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng(derive_seed(11, s));
    const FactorDims dims = s % 4 == 3 ? FactorDims{3, 3} : FactorDims{2, pick(rng, 2, 3)};
    const DensityOperator a = make_random_density(dims, rng(), pick(rng, 1, 3));
    const DensityOperator b = make_random_density(dims, rng(), pick(rng, 1, 3));
    const double lambda = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    OptimizerConfig cfg;
    cfg.seed = s;
    const UpperBound ua = gamma_upper(a, cfg), ub = gamma_upper(b, cfg);
    const std::vector<TensorDecomposition> cands{mix_decompositions(ua.witness, ub.witness, lambda)};
    const double um = gamma_upper(make_mixture({a, b}, {lambda, 1 - lambda}), cfg, cands).cost;
    w.check(um, lambda * ua.cost + (1 - lambda) * ub.cost + 1e-10);
  }
  return {w.failures == 0, fmt("100 mixtures, %d failures, worst slack %.3g", w.failures, w.margin)};
}

Outcome multipartite() {
  const GammaBracket g = gamma_bracket_any(make_ghz(3).density());
  bool ok = g.lower >= 2 - 1e-6 && g.upper <= 2 + 1e-4;
  Worst prod, up, lo;
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng(derive_seed(12, s));
    const DensityOperator p = make_product_density(
        {random_density_matrix(2, rng), random_density_matrix(pick(rng, 2, 3), rng), random_density_matrix(2, rng)});
    const GammaBracket b = gamma_bracket_any(p);
    prod.check(std::abs(b.lower - 1), 1e-9);
    prod.check(std::abs(b.upper - 1), 1e-9);
  }
  for (std::uint64_t s = 0; s < 50; ++s) {
    const SeparableState st = make_random_separable({2, 2, 2}, 1 + static_cast<int>(s % 5), derive_seed(13, s));
    const GammaBracket b = gamma_bracket_any(st.state, {}, std::vector<TensorDecomposition>{st.witness});
    up.check(b.upper, 1 + 1e-6);
    lo.check(b.lower, 1 + 1e-9);
  }
  ok = ok && prod.failures == 0 && up.failures == 0 && lo.failures == 0;
  return {ok, fmt("GHZ [%.9f, %.9f], product slack %.3g", g.lower, g.upper, prod.margin) +
                  fmt(", 50 separable: %d failures", up.failures + lo.failures)};
}

Outcome full_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<PropertyReport> reports = run_suite({}, 100, 0);
  const double t = seconds_since(t0);
  int failures = 0;
  std::string failed;
  for (const PropertyReport& r : reports) {
    failures += r.failures;
    if (!r.passed()) failed += " " + r.id;
  }
  return {failures == 0 && reports.size() == 10 && t < 120.0,
          fmt("%zu properties x 100 trials, %d failures, %.2f s", reports.size(), failures, t) +
              failed};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"pure-state tightness", pure_tightness},
      {"coefficient-state consistency", coeff_consistency},
      {"separable states contain 1", separable_direction},
      {"Bell values", bell_values},
      {"E_gamma vs S_vN gap", pure_gap},
      {"post-selection example", example8},
      {"local operations (witness level)", locc_pushforward},
      {"Luders average", luders_average},
      {"local unitaries and embeddings", invariance_and_expansion},
      {"mixtures", mixtures},
      {"multipartite", multipartite},
      {"full verify suite", full_suite},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.ok) ++failed;
    std::printf("%s %2zu %s: %s\n", o.ok ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
