#include "noma/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "noma/analytic.hpp"

namespace noma {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Point {
  double alpha = 0.0;
  double objective = kInf;
  double constraint = kInf;
  bool feasible = false;
};

class Evaluator {
 public:
  explicit Evaluator(const OptProblem& p) : problem_(p) {}

  Point operator()(double alpha) {
    ++count_;
    const SystemConfig cfg = problem_.base_cfg.with_alpha1(alpha);
    const PerBreakdown s1 = per_stage1(cfg);
    const PerBreakdown s2 = per_stage2_conditional(cfg);
    Point pt;
    pt.alpha = alpha;
    pt.constraint = s1.total;
    pt.objective = std::min(s1.total + s2.total, 1.0);
    pt.feasible = s1.total <= problem_.epsilon;
    return pt;
  }

  int count() const { return count_; }

 private:
  const OptProblem& problem_;
  int count_ = 0;
};

double penalized(const Point& p) { return p.feasible ? p.objective : kInf; }

bool better(const Point& a, const Point& b) { return penalized(a) < penalized(b); }

}  // namespace

void OptProblem::validate() const {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in (0, 1]");
  if (!(search_tolerance > 0.0 && search_tolerance <= 0.1)) {
    throw ConfigError("search_tolerance must lie in (0, 0.1]");
  }
  if (grid_points < 2000) throw ConfigError("grid_points must be >= 2000");
}

OptResult solve_p1(const OptProblem& problem) {
  problem.validate();
  Evaluator eval(problem);

  const double lo = kAlphaMargin;
  const double hi = 1.0 - kAlphaMargin;
  const int n = problem.grid_points;
  const double step = (hi - lo) / (n - 1);

  std::vector<Point> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = eval(i == n - 1 ? hi : lo + i * step);

  auto best_it = std::min_element(grid.begin(), grid.end(), better);
  if (!best_it->feasible) {
    const auto least_violation = std::min_element(
        grid.begin(), grid.end(), [](const Point& a, const Point& b) { return a.constraint < b.constraint; });
    return OptResult{least_violation->alpha, least_violation->objective,
                     least_violation->constraint, false, eval.count()};
  }

  // Golden-section search on the bracket around the best grid point.
  const auto i = static_cast<std::size_t>(best_it - grid.begin());
  Point best = *best_it;
  double a = grid[i == 0 ? 0 : i - 1].alpha;
  double b = grid[std::min<std::size_t>(i + 1, grid.size() - 1)].alpha;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  Point pc = eval(c);
  Point pd = eval(d);
  while (b - a > problem.search_tolerance) {
    if (penalized(pc) <= penalized(pd)) {
      b = d;
      d = c;
      pd = pc;
      c = b - inv_phi * (b - a);
      pc = eval(c);
    } else {
      a = c;
      c = d;
      pc = pd;
      d = a + inv_phi * (b - a);
      pd = eval(d);
    }
    for (const Point* p : {&pc, &pd}) {
      if (better(*p, best)) best = *p;
    }
  }

  // A constrained optimum sits on the feasibility edge; pin the edge down by
  // bisection instead of stopping a tolerance-width short of it.
  for (const double dir : {-1.0, 1.0}) {
    const double probe_alpha = std::clamp(best.alpha + dir * problem.search_tolerance, lo, hi);
    if (probe_alpha == best.alpha) continue;
    const Point probe = eval(probe_alpha);
    if (probe.feasible) continue;
    Point inside = best;
    double outside = probe_alpha;
    for (int it = 0; it < 64 && std::abs(outside - inside.alpha) > 1e-15; ++it) {
      const Point mid = eval(0.5 * (inside.alpha + outside));
      if (mid.feasible) {
        inside = mid;
      } else {
        outside = mid.alpha;
      }
    }
    if (better(inside, best)) best = inside;
  }

  return OptResult{best.alpha, best.objective, best.constraint, true, eval.count()};
}

}  // namespace noma
