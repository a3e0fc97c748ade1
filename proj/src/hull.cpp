#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "facet/measures.hpp"

namespace facet {

namespace {

constexpr std::size_t kMaxSweeps = 1000;

struct Solver {
  const HullProblem& problem;
  std::vector<Rational> w;
  std::vector<Rational> residual;  // a - N w
  Rational value;

  explicit Solver(const HullProblem& p) : problem(p) {}

  void reset_to_vertex(std::size_t v) {
    w.assign(problem.vertices.size(), 0);
    w[v] = 1;
    residual.resize(problem.target.size());
    for (std::size_t i = 0; i < residual.size(); ++i) residual[i] = problem.target[i] - problem.vertices[v][i];
    value = evaluate(0, {});
  }

  // sum c_i |r_i - t s_i|
  Rational evaluate(const Rational& t, const std::vector<Rational>& slope) const {
    Rational sum = 0;
    for (std::size_t i = 0; i < residual.size(); ++i) {
      sum += problem.weights[i] * abs(slope.empty() ? residual[i] : Rational(residual[i] - t * slope[i]));
    }
    return sum;
  }

  // Exact minimisation of the piecewise-linear convex function t -> f(w + t d)
  // over [lo, hi]; accepts the step only if it strictly improves.
  void line_search(const std::vector<Rational>& direction, const Rational& lo, const Rational& hi) {
    if (lo >= hi) return;
    const std::size_t n = residual.size();
    std::vector<Rational> slope(n, 0);
    for (std::size_t v = 0; v < direction.size(); ++v) {
      if (direction[v] == 0) continue;
      for (std::size_t i = 0; i < n; ++i) slope[i] += direction[v] * problem.vertices[v][i];
    }
    // Minimiser of sum_i c_i |s_i| |t - r_i / s_i|: a weighted median of the breakpoints.
    std::vector<std::size_t> order;
    std::vector<Rational> points(n);
    Rational total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (slope[i] == 0 || problem.weights[i] == 0) continue;
      points[i] = residual[i] / slope[i];
      total += problem.weights[i] * abs(slope[i]);
      order.push_back(i);
    }
    if (order.empty()) return;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return points[a] < points[b] || (points[a] == points[b] && a < b);
    });
    Rational cumulative = 0;
    Rational t = points[order.back()];
    for (std::size_t i : order) {
      cumulative += problem.weights[i] * abs(slope[i]);
      if (2 * cumulative >= total) {
        t = points[i];
        break;
      }
    }
    t = std::clamp(t, lo, hi);
    if (t == 0) return;
    const Rational candidate = evaluate(t, slope);
    if (candidate >= value) return;
    for (std::size_t v = 0; v < w.size(); ++v) w[v] += t * direction[v];
    for (std::size_t i = 0; i < n; ++i) residual[i] -= t * slope[i];
    value = candidate;
  }

  void sweep() {
    const std::size_t m = w.size();
    std::vector<Rational> d(m, 0);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        std::fill(d.begin(), d.end(), Rational(0));
        d[a] = 1;
        d[b] = -1;
        line_search(d, -w[a], w[b]);
      }
    }
    for (std::size_t v = 0; v < m; ++v) {
      for (std::size_t u = 0; u < m; ++u) d[u] = (u == v ? Rational(1) : Rational(0)) - w[u];
      line_search(d, 0, 1);
    }
  }

  // Dual bound y.a - max_v (N^T y)_v for |y_i| <= c_i; y follows the residual
  // signs, tied entries take tie_value * c_i.
  Rational dual_bound(int tie_value) const {
    const std::size_t m = w.size();
    Rational ya = 0;
    std::vector<Rational> g(m, 0);
    for (std::size_t i = 0; i < residual.size(); ++i) {
      const int sign = residual[i] > 0 ? 1 : (residual[i] < 0 ? -1 : tie_value);
      if (sign == 0) continue;
      const Rational y = sign > 0 ? problem.weights[i] : Rational(-problem.weights[i]);
      ya += y * problem.target[i];
      for (std::size_t v = 0; v < m; ++v) g[v] += y * problem.vertices[v][i];
    }
    return ya - *std::max_element(g.begin(), g.end());
  }
};

}  // namespace

Rational HullDistance::certified_lower() const {
  const Rational lower = objective - gap;
  return lower > 0 ? lower : Rational(0);
}

HullProblem make_hull_problem(const std::vector<Rational>& target_values, const ConvexTarget& k,
                              const FamilyLadder& families, std::size_t depth) {
  if (k.depth() < depth) throw std::invalid_argument("dist_to_hull: target measures shallower than truncation depth");
  if (k.dim() != families.dim()) throw std::invalid_argument("dist_to_hull: dimension mismatch");
  HullProblem p;
  p.target = target_values;
  for (const auto& v : k.vertices()) p.vertices.push_back(ladder_values(v, families, depth));
  for (std::size_t level = 1; level <= depth; ++level) {
    const auto& family = families.level(level);
    if (family.empty()) throw std::invalid_argument("dist_to_hull: empty family");
    const Rational c = pow2(-static_cast<int>(level)) / static_cast<unsigned long>(family.size());
    p.weights.insert(p.weights.end(), family.size(), c);
  }
  if (p.target.size() != p.weights.size()) throw std::invalid_argument("dist_to_hull: value vector length mismatch");
  return p;
}

Rational hull_objective(const HullProblem& problem, std::span<const Rational> w) {
  if (w.size() != problem.vertices.size()) throw std::invalid_argument("hull_objective: weight count mismatch");
  Rational sum = 0;
  for (std::size_t i = 0; i < problem.target.size(); ++i) {
    Rational r = problem.target[i];
    for (std::size_t v = 0; v < w.size(); ++v) r -= w[v] * problem.vertices[v][i];
    sum += problem.weights[i] * abs(r);
  }
  return sum;
}

HullDistance solve_hull(const HullProblem& problem, const Rational& tol) {
  if (tol <= 0) throw std::invalid_argument("dist_to_hull: tolerance must be positive");
  if (problem.vertices.empty()) throw std::invalid_argument("dist_to_hull: empty target");
  Solver s(problem);
  // Start from the best single vertex.
  std::size_t best = 0;
  Rational best_value;
  for (std::size_t v = 0; v < problem.vertices.size(); ++v) {
    s.reset_to_vertex(v);
    if (v == 0 || s.value < best_value) {
      best = v;
      best_value = s.value;
    }
  }
  s.reset_to_vertex(best);

  HullDistance out;
  const Rational stop = tol / 10;
  while (out.sweeps < kMaxSweeps && problem.vertices.size() > 1) {
    const Rational before = s.value;
    s.sweep();
    ++out.sweeps;
    if (before - s.value < stop) break;
  }
  out.objective = s.value;
  out.weights = s.w;
  Rational dual = s.dual_bound(0);
  for (int tie : {1, -1}) dual = std::max(dual, s.dual_bound(tie));
  out.gap = out.objective - dual;
  if (out.gap < 0) out.gap = 0;
  return out;
}

HullDistance dist_to_hull(const Block& x, const ConvexTarget& k, const FamilyLadder& families, std::size_t depth,
                          const Rational& tol) {
  if (x.depth() < depth) throw std::invalid_argument("dist_to_hull: block shallower than truncation depth");
  HullDistance out = solve_hull(make_hull_problem(ladder_values(x, families, depth), k, families, depth), tol);
  out.tail = truncation_tail(depth);
  return out;
}

HullDistance dist_to_hull(const CylinderMeasure& x, const ConvexTarget& k, const FamilyLadder& families,
                          std::size_t depth, const Rational& tol) {
  if (x.depth() < depth) throw std::invalid_argument("dist_to_hull: measure shallower than truncation depth");
  HullDistance out = solve_hull(make_hull_problem(ladder_values(x, families, depth), k, families, depth), tol);
  out.tail = truncation_tail(depth);
  return out;
}

}  // namespace facet
