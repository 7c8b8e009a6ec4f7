#include "lusin/content.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lusin {

int radius_class(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InputError("radius_class: radius must be positive");
  int i = -std::ilogb(r);
  while (std::ldexp(1.0, -i) > r) ++i;
  while (std::ldexp(1.0, -i + 1) <= r) --i;
  return i;
}

double cover_value(const MetricMeasureSpace& space, const std::vector<CoverBall>& balls,
                   const ContentParams& params) {
  std::map<int, double> class_sum;
  for (const auto& b : balls) {
    const double term = space.ball_measure(b.center, b.radius) / std::pow(b.radius, params.d);
    class_sum[radius_class(b.radius)] += term;
  }
  double acc = 0.0;
  for (const auto& [i, t] : class_sum) acc += std::pow(t, params.theta);
  return std::pow(acc, 1.0 / params.theta);
}

BallCover make_cover(const MetricMeasureSpace& space, std::vector<CoverBall> balls,
                     const ContentParams& params) {
  BallCover c;
  c.params = params;
  c.balls = std::move(balls);
  for (size_t j = 0; j < c.balls.size(); ++j) {
    const double r = c.balls[j].radius;
    if (!(r > 0.0) || r > params.R) throw InputError("cover ball radius outside (0, R]");
    c.classes[radius_class(r)].push_back(static_cast<int>(j));
  }
  c.value = cover_value(space, c.balls, params);
  return c;
}

bool cover_covers(const MetricMeasureSpace& space, const BallCover& cover,
                  const std::vector<Index>& E) {
  std::vector<char> hit(static_cast<size_t>(space.size()), 0);
  for (const auto& b : cover.balls)
    for (Index x : space.ball(b.center, b.radius)) hit[static_cast<size_t>(x)] = 1;
  for (Index e : E)
    if (!hit[static_cast<size_t>(e)]) return false;
  return true;
}

namespace {

void validate_params(const ContentParams& p) {
  if (p.d < 0.0 || !std::isfinite(p.d)) throw InputError("content: codimension d must be >= 0");
  if (!(p.theta > 0.0) || !std::isfinite(p.theta))
    throw InputError("content: theta must lie in (0, infinity)");
  if (!(p.R > 0.0)) throw InputError("content: R must be positive");
}

// Distance from e to the nearest point outside E; diameter + 1 when E = X.
double excluded_distance(const MetricMeasureSpace& space, Index e,
                         const std::vector<char>& in_E) {
  double best = std::numeric_limits<double>::infinity();
  for (Index y = 0; y < space.size(); ++y)
    if (!in_E[static_cast<size_t>(y)]) best = std::min(best, space.distance(e, y));
  return std::isfinite(best) ? best : space.diameter() + 1.0;
}

}  // namespace

BallCover netrusov_content_upper(const MetricMeasureSpace& space, const std::vector<Index>& E,
                                 const ContentParams& params,
                                 const std::vector<const BallCover*>& extra) {
  validate_params(params);
  if (E.empty()) throw InputError("content: E must be nonempty");
  std::vector<char> in_E(static_cast<size_t>(space.size()), 0);
  for (Index e : E) in_E[static_cast<size_t>(e)] = 1;

  std::vector<BallCover> menu;

  // Per-point trivial cover: largest radius that keeps the nearest excluded
  // point outside the (strict-membership) ball.
  {
    std::vector<CoverBall> balls;
    for (Index e : E) balls.push_back({e, std::min(params.R, excluded_distance(space, e, in_E))});
    menu.push_back(make_cover(space, std::move(balls), params));
  }

  // Per-point cover with the best dyadic-or-cap radius by local ratio.
  {
    std::vector<CoverBall> balls;
    for (Index e : E) {
      const double cap = std::min(params.R, excluded_distance(space, e, in_E));
      const double isolation = space.size() > 1 ? space.neighbor_distances(e)[1] : cap;
      double best_r = cap;
      double best_v = space.ball_measure(e, cap) / std::pow(cap, params.d);
      for (double r = std::ldexp(1.0, -radius_class(cap)); r >= isolation / 2.0; r /= 2.0) {
        if (r > cap) continue;
        const double v = space.ball_measure(e, r) / std::pow(r, params.d);
        if (v < best_v) {
          best_v = v;
          best_r = r;
        }
      }
      balls.push_back({e, best_r});
    }
    menu.push_back(make_cover(space, std::move(balls), params));
  }

  // Per-dyadic-class greedy covers.
  {
    const double top = std::min(params.R, 2.0 * (space.diameter() + 1.0));
    const double bottom = std::max(space.min_positive_distance() / 2.0, top * 0x1.0p-60);
    for (double rho = std::ldexp(1.0, -radius_class(top)); rho >= bottom; rho /= 2.0) {
      if (rho > params.R) continue;
      std::vector<char> covered(static_cast<size_t>(space.size()), 0);
      std::vector<CoverBall> balls;
      for (Index e : E) {
        if (covered[static_cast<size_t>(e)]) continue;
        balls.push_back({e, rho});
        for (Index y : space.ball(e, rho)) covered[static_cast<size_t>(y)] = 1;
      }
      menu.push_back(make_cover(space, std::move(balls), params));
    }
  }

  // Single global balls.
  for (Index c : E) {
    double maxd = 0.0;
    for (Index e : E) maxd = std::max(maxd, space.distance(c, e));
    const auto& dd = space.neighbor_distances(c);
    auto it = std::upper_bound(dd.begin(), dd.end(), maxd);
    std::vector<double> radii;
    if (it != dd.end()) radii.push_back(*it);
    radii.push_back(space.diameter() + 1.0);
    if (std::isfinite(params.R)) radii.push_back(params.R);
    for (double r : radii) {
      if (r <= maxd || r > params.R) continue;
      menu.push_back(make_cover(space, {{c, r}}, params));
    }
  }

  for (const BallCover* c : extra) {
    if (c == nullptr) continue;
    if (!(c->params == params)) throw InputError("extra cover has mismatched parameters");
    menu.push_back(*c);
  }

  const BallCover* best = nullptr;
  for (const auto& c : menu) {
    if (!cover_covers(space, c, E)) continue;
    if (best == nullptr || c.value < best->value) best = &c;
  }
  if (best == nullptr) throw CheckError("content: no valid cover found (radius cap too small?)");
  return *best;
}

BallCover hausdorff_content_upper(const MetricMeasureSpace& space, const std::vector<Index>& E,
                                  double d, double R, const std::vector<const BallCover*>& extra) {
  return netrusov_content_upper(space, E, ContentParams{d, 1.0, R}, extra);
}

BallCover combine_covers(const MetricMeasureSpace& space, const std::vector<BallCover>& covers) {
  if (covers.empty()) throw InputError("combine_covers: nothing to combine");
  const ContentParams params = covers.front().params;
  std::vector<CoverBall> balls;
  double rhs = 0.0;
  const double r = std::min(1.0, params.theta);
  for (const auto& c : covers) {
    if (!(c.params == params)) throw InputError("combine_covers: mismatched parameters");
    balls.insert(balls.end(), c.balls.begin(), c.balls.end());
    rhs += std::pow(c.value, r);
  }
  BallCover out = make_cover(space, std::move(balls), params);
  if (std::pow(out.value, r) > rhs * (1.0 + 1e-12) + 1e-300) {
    std::ostringstream os;
    os << "combine_covers: aggregation bound failed, value^r = " << std::pow(out.value, r)
       << " > " << rhs;
    throw CheckError(os.str());
  }
  return out;
}

std::vector<int> five_r_cover(const MetricMeasureSpace& space,
                              const std::vector<CoverBall>& family) {
  std::vector<int> order(family.size());
  for (size_t i = 0; i < family.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& A = family[static_cast<size_t>(a)];
    const auto& B = family[static_cast<size_t>(b)];
    if (A.radius != B.radius) return A.radius > B.radius;
    if (A.center != B.center) return A.center < B.center;
    return a < b;
  });

  std::vector<char> claimed(static_cast<size_t>(space.size()), 0);
  std::vector<int> selected;
  for (int idx : order) {
    const auto& b = family[static_cast<size_t>(idx)];
    const auto pts = space.ball(b.center, b.radius);
    bool disjoint = true;
    for (Index y : pts)
      if (claimed[static_cast<size_t>(y)]) {
        disjoint = false;
        break;
      }
    if (!disjoint) continue;
    for (Index y : pts) claimed[static_cast<size_t>(y)] = 1;
    selected.push_back(idx);
  }
  std::sort(selected.begin(), selected.end());

  // Postconditions: disjointness is by construction (claimed mask); check
  // the 5x containment of every input ball.
  for (size_t i = 0; i < family.size(); ++i) {
    const auto pts = space.ball(family[i].center, family[i].radius);
    bool contained = false;
    for (int s : selected) {
      const auto& kb = family[static_cast<size_t>(s)];
      bool all_in = true;
      for (Index y : pts)
        if (!(space.distance(y, kb.center) < 5.0 * kb.radius)) {
          all_in = false;
          break;
        }
      if (all_in) {
        contained = true;
        break;
      }
    }
    if (!contained)
      throw CheckError("five_r_cover: ball " + std::to_string(i) +
                       " is not contained in any 5x dilate");
  }
  return selected;
}

double measure_bound_constant(const ContentParams& params) {
  const double inf = std::numeric_limits<double>::infinity();
  if (params.theta <= 1.0) {
    if (params.d == 0.0) return 1.0;
    return std::isfinite(params.R) ? std::pow(2.0 * params.R, params.d) : inf;
  }
  if (params.d == 0.0 || !std::isfinite(params.R)) return inf;
  const double conj = params.theta / (params.theta - 1.0);
  const double tail = 1.0 - std::pow(2.0, -params.d * conj);
  return std::pow(2.0 * params.R, params.d) * std::pow(tail, -1.0 / conj);
}

}  // namespace lusin
