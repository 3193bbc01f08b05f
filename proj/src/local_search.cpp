#include "crossnorm/local_search.hpp"

#include "crossnorm/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace crossnorm {

namespace {

constexpr int kMaxFailedRestarts = 4;

template <int N>
double fixed_trace_norm(const CMatrix& m) {
  using Fixed = Eigen::Matrix<Complex, N, N>;
  Eigen::JacobiSVD<Fixed> solver(Fixed(m), 0);
  return solver.singularValues().sum();
}

// Trace norm of a 3x3 matrix without an SVD. With e1 = s1+s2+s3,
// e2 = s1s2+s1s3+s2s3, T = ||m||_F^2, F = ||C2(m)||_F^2 (2x2 minors) and
// D = |det m|: e1^2 = T + 2 e2 and e2^2 = F + 2 e1 D. The fixed point
// e2 = sqrt(F + 2 D sqrt(T + 2 e2)) contracts with rate D/(e1 e2) <= 1/9.
double trace_norm_3x3(const CMatrix& m) {
  const double t = m.squaredNorm();
  double f = 0.0;
  Complex det = 0.0;
  for (int r0 = 0; r0 < 3; ++r0)
    for (int r1 = r0 + 1; r1 < 3; ++r1)
      for (int c0 = 0; c0 < 3; ++c0)
        for (int c1 = c0 + 1; c1 < 3; ++c1) {
          const Complex minor = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
          f += std::norm(minor);
          if (r0 == 1 && r1 == 2) {
            const int skipped = 3 - c0 - c1;
            det += (skipped == 1 ? -1.0 : 1.0) * m(0, skipped) * minor;
          }
        }
  if (t == 0.0) return 0.0;
  // s3 <= s2 gives D <= F / s1 <= F sqrt(3 / T); clamping strips rounding
  // noise from det m near rank one.
  const double d = std::min(std::abs(det), f * std::sqrt(3.0 / t));
  double e2 = std::sqrt(f);
  for (int it = 0; it < 60; ++it) {
    const double next = std::sqrt(f + 2.0 * d * std::sqrt(t + 2.0 * e2));
    const bool done = std::abs(next - e2) <= 1e-16 * next;
    e2 = next;
    if (done) break;
  }
  return std::sqrt(t + 2.0 * e2);
}

// Trace norm on the small matrices the search works with. For 2x2,
// (s1 + s2)^2 = ||m||_F^2 + 2 |det m|.
double tnorm(const CMatrix& m) {
  switch (m.rows()) {
    case 1: return std::abs(m(0, 0));
    case 2: {
      const double det = std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
      return std::sqrt(m.squaredNorm() + 2.0 * det);
    }
    case 3: return trace_norm_3x3(m);
    case 4: return fixed_trace_norm<4>(m);
    default: {
      Eigen::JacobiSVD<CMatrix> solver(m);
      return solver.singularValues().sum();
    }
  }
}

using Point = std::array<double, 2>;

// Plain Nelder-Mead in two dimensions. Returns the best point and value.
template <class F>
std::pair<Point, double> nelder_mead(F&& f, Point x0, double f0, double step, int max_evals) {
  std::array<Point, 3> p{x0, Point{x0[0] + step, x0[1]}, Point{x0[0], x0[1] + step}};
  std::array<double, 3> v{f0, f(p[1]), f(p[2])};
  int evals = 2;
  auto order = [&] {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2 - a; ++b)
        if (v[b + 1] < v[b]) {
          std::swap(v[b], v[b + 1]);
          std::swap(p[b], p[b + 1]);
        }
  };
  auto lerp = [](const Point& c, const Point& w, double t) {
    return Point{c[0] + t * (w[0] - c[0]), c[1] + t * (w[1] - c[1])};
  };
  while (evals < max_evals) {
    order();
    const double spread = std::max(std::abs(p[1][0] - p[0][0]) + std::abs(p[1][1] - p[0][1]),
                                   std::abs(p[2][0] - p[0][0]) + std::abs(p[2][1] - p[0][1]));
    if (spread < 1e-11 || v[2] - v[0] <= 1e-16 * std::abs(v[0])) break;
    const Point c{0.5 * (p[0][0] + p[1][0]), 0.5 * (p[0][1] + p[1][1])};
    const Point r = lerp(c, p[2], -1.0);
    const double fr = f(r);
    ++evals;
    if (fr < v[0]) {
      const Point e = lerp(c, p[2], -2.0);
      const double fe = f(e);
      ++evals;
      if (fe < fr) {
        p[2] = e, v[2] = fe;
      } else {
        p[2] = r, v[2] = fr;
      }
    } else if (fr < v[1]) {
      p[2] = r, v[2] = fr;
    } else {
      const bool outside = fr < v[2];
      const Point k = outside ? lerp(c, r, 0.5) : lerp(c, p[2], 0.5);
      const double fk = f(k);
      ++evals;
      if (fk < std::min(fr, v[2])) {
        p[2] = k, v[2] = fk;
      } else {
        for (int i = 1; i < 3; ++i) {
          p[i] = lerp(p[0], p[i], 0.5);
          v[i] = f(p[i]);
          ++evals;
        }
      }
    }
  }
  order();
  return {p[0], v[0]};
}

// Evaluates the eight compass and diagonal neighbours at distance h and moves
// to the best one if it improves.
template <class F>
void probe(F&& f, Point& at, double& value, double h) {
  const Point origin = at;
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -1; dy <= 1; ++dy) {
      if (dx == 0 && dy == 0) continue;
      const Point p{origin[0] + dx * h, origin[1] + dy * h};
      const double v = f(p);
      if (v < value) value = v, at = p;
    }
}

class PairSearch {
 public:
  explicit PairSearch(TermPairs& t) : t_(t) {
    norms_x_.resize(t.x.size());
    norms_y_.resize(t.y.size());
    for (std::size_t j = 0; j < t.x.size(); ++j) refresh(j);
  }

  double cost() const {
    double c = 0.0;
    for (std::size_t j = 0; j < norms_x_.size(); ++j) c += norms_x_[j] * norms_y_[j];
    return c;
  }

  /// Optimizes the pair (j, l); returns the cost decrease.
  double optimize(std::size_t j, std::size_t l) {
    balance(j);
    balance(l);
    const double base = term(j) + term(l);
    if (base == 0.0) return 0.0;
    double gained = 0.0;
    gained += unitary_move(j, l, base);
    const double after_rot = term(j) + term(l);
    gained += shear_move(j, l, after_rot);
    const double after_s1 = term(j) + term(l);
    gained += shear_move(l, j, after_s1);
    return gained;
  }

 private:
  double term(std::size_t j) const { return norms_x_[j] * norms_y_[j]; }

  void refresh(std::size_t j) {
    norms_x_[j] = tnorm(t_.x[j]);
    norms_y_[j] = tnorm(t_.y[j]);
  }

  void balance(std::size_t j) {
    if (norms_x_[j] == 0.0 || norms_y_[j] == 0.0) return;
    const double s = std::sqrt(norms_y_[j] / norms_x_[j]);
    t_.x[j] *= s;
    t_.y[j] /= s;
    refresh(j);
  }

  // G = [[c, s e^{i psi}], [-s e^{-i psi}, c]] on x, conj(G) on y.
  double unitary_move(std::size_t j, std::size_t l, double base) {
    const CMatrix &xj = t_.x[j], &xl = t_.x[l], &yj = t_.y[j], &yl = t_.y[l];
    auto eval = [&](const Point& p) {
      const double c = std::cos(p[0]), s = std::sin(p[0]);
      const Complex ph = std::polar(1.0, p[1]);
      return tnorm(c * xj + s * ph * xl) * tnorm(c * yj + s * std::conj(ph) * yl) +
             tnorm(-s * std::conj(ph) * xj + c * xl) * tnorm(-s * ph * yj + c * yl);
    };
    Point best{0.0, 0.0};
    double best_v = base;
    constexpr double pi = std::numbers::pi;
    for (int a = 1; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const Point p{a * pi / 8.0, b * pi / 2.0};
        const double v = eval(p);
        if (v < best_v) best_v = v, best = p;
      }
    probe(eval, best, best_v, 1e-3);
    const auto [p, v] = nelder_mead(eval, best, best_v, 0.2, 160);
    if (!(v < base * (1.0 - 1e-15))) return 0.0;
    const double c = std::cos(p[0]), s = std::sin(p[0]);
    const Complex ph = std::polar(1.0, p[1]);
    CMatrix nxj = c * xj + s * ph * xl;
    CMatrix nxl = -s * std::conj(ph) * xj + c * xl;
    CMatrix nyj = c * yj + s * std::conj(ph) * yl;
    CMatrix nyl = -s * ph * yj + c * yl;
    t_.x[j] = std::move(nxj), t_.x[l] = std::move(nxl);
    t_.y[j] = std::move(nyj), t_.y[l] = std::move(nyl);
    refresh(j), refresh(l);
    return base - (term(j) + term(l));
  }

  // x_j += t x_l, y_l -= t y_j.
  double shear_move(std::size_t j, std::size_t l, double base) {
    const CMatrix &xj = t_.x[j], &xl = t_.x[l], &yj = t_.y[j], &yl = t_.y[l];
    if (norms_x_[l] == 0.0 || base == 0.0) return 0.0;
    const double scale = 0.3 * std::sqrt(std::max(term(j), 1e-300) / std::max(term(l), 1e-300));
    auto eval = [&](const Point& p) {
      const Complex t(p[0] * scale, p[1] * scale);
      return tnorm(xj + t * xl) * norms_y_[j] + norms_x_[l] * tnorm(yl - t * yj);
    };
    Point start{0.0, 0.0};
    double start_v = base;
    probe(eval, start, start_v, 0.3);
    probe(eval, start, start_v, 1e-3);
    const auto [p, v] = nelder_mead(eval, start, start_v, 1.0, 120);
    if (!(v < base * (1.0 - 1e-15))) return 0.0;
    const Complex t(p[0] * scale, p[1] * scale);
    t_.x[j] = xj + t * xl;
    t_.y[l] = yl - t * yj;
    refresh(j), refresh(l);
    return base - (term(j) + term(l));
  }

  TermPairs& t_;
  std::vector<double> norms_x_;
  std::vector<double> norms_y_;
};

// Rotates the whole term list by exp(i * scale * H): x -> U x, y -> conj(U) y.
TermPairs perturb(const TermPairs& t, double scale, Rng& rng) {
  const int m = static_cast<int>(t.x.size());
  const EighResult eig = eigh_hermitian(random_hermitian(m, rng));
  CVector phases(m);
  for (int k = 0; k < m; ++k) phases(k) = std::polar(1.0, scale * eig.values(k));
  const CMatrix u = eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
  TermPairs out;
  for (int j = 0; j < m; ++j) {
    CMatrix xj = CMatrix::Zero(t.x[0].rows(), t.x[0].cols());
    CMatrix yj = CMatrix::Zero(t.y[0].rows(), t.y[0].cols());
    for (int k = 0; k < m; ++k) {
      if (u(j, k) == Complex(0.0)) continue;
      xj += u(j, k) * t.x[k];
      yj += std::conj(u(j, k)) * t.y[k];
    }
    out.x.push_back(std::move(xj));
    out.y.push_back(std::move(yj));
  }
  return out;
}

struct DescentStats {
  double cost;
  int iterations;
};

// Sweeps over all pairs until a sweep gains less than cfg.tol (relative) or
// `budget` pair moves are spent.
DescentStats descend(TermPairs& t, const OptimizerConfig& cfg, double floor, int budget) {
  PairSearch search(t);
  double cost = search.cost();
  int iterations = 0;
  const std::size_t m = t.x.size();
  while (iterations < budget) {
    const double start = cost;
    for (std::size_t j = 0; j < m && iterations < budget; ++j)
      for (std::size_t l = j + 1; l < m && iterations < budget; ++l) {
        search.optimize(j, l);
        ++iterations;
      }
    cost = search.cost();
    if (start - cost <= cfg.tol * start) break;
    if (cost <= floor * (1.0 + kClosedGap)) break;
  }
  return {search.cost(), iterations};
}

}  // namespace

double TermPairs::cost() const {
  double c = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) c += tnorm(x[j]) * tnorm(y[j]);
  return c;
}

LocalSearchResult refine_terms(TermPairs start, const OptimizerConfig& cfg, double floor) {
  LocalSearchResult out;
  if (start.x.size() < 2) {
    out.cost = start.cost();
    out.terms = std::move(start);
    return out;
  }
  // cfg.max_iter bounds the pair moves of all descents together.
  const int total = cfg.max_iter;
  DescentStats first = descend(start, cfg, floor, total);
  out.terms = std::move(start);
  out.cost = first.cost;
  out.iterations = first.iterations;
  out.restarts = 1;
  double scale = cfg.perturbation;
  int failures = 0;
  for (int r = 1; r < cfg.restarts; ++r) {
    if (out.cost <= floor * (1.0 + kClosedGap)) break;
    if (failures >= kMaxFailedRestarts) break;
    if (out.iterations >= total) break;
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    TermPairs trial = perturb(out.terms, scale, rng);
    const DescentStats s = descend(trial, cfg, floor, total - out.iterations);
    out.iterations += s.iterations;
    ++out.restarts;
    if (s.cost < out.cost * (1.0 - cfg.tol)) {
      out.terms = std::move(trial);
      out.cost = s.cost;
      failures = 0;
    } else {
      scale *= 0.5;
      ++failures;
    }
  }
  return out;
}

}  // namespace crossnorm
