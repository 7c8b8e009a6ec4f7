#pragma once

#include <map>
#include <vector>

#include "lusin/space.hpp"

namespace lusin {

/// Parameters of the Netrusov-Hausdorff content of codimension d: the l^theta
/// aggregation exponent across dyadic radius classes and the radius cap R
/// (may be infinite). theta = 1 recovers the plain Hausdorff content.
struct ContentParams {
  double d = 0.0;
  double theta = 1.0;
  double R = 64.0;

  bool operator==(const ContentParams& o) const {
    return d == o.d && theta == o.theta && R == o.R;
  }
};

struct CoverBall {
  Index center = 0;
  double radius = 0.0;
};

/// Dyadic radius class i with 2^{-i} <= r < 2^{-i+1}.
int radius_class(double r);

/// A ball cover together with its content value
///   [ sum_i ( sum_{j in I_i} mu(B_j) / r_j^d )^theta ]^{1/theta}.
struct BallCover {
  ContentParams params;
  std::vector<CoverBall> balls;
  std::map<int, std::vector<int>> classes;  // class -> ball indices
  double value = 0.0;
};

/// Value of the double sum for a given ball list; classes iterate ascending.
double cover_value(const MetricMeasureSpace& space, const std::vector<CoverBall>& balls,
                   const ContentParams& params);

/// Assembles a BallCover (classes + value) and validates radii in (0, R].
BallCover make_cover(const MetricMeasureSpace& space, std::vector<CoverBall> balls,
                     const ContentParams& params);

bool cover_covers(const MetricMeasureSpace& space, const BallCover& cover,
                  const std::vector<Index>& E);

/// Certified upper bound for the Netrusov-Hausdorff content of E: the best
/// cover from a finite menu (per-point isolated balls, per-point radius-grid
/// optimized balls, per-dyadic-class greedy covers, single global balls,
/// plus any caller-supplied candidates, e.g. restrictions of covers of a
/// superset). The returned cover is the certificate.
BallCover netrusov_content_upper(const MetricMeasureSpace& space, const std::vector<Index>& E,
                                 const ContentParams& params,
                                 const std::vector<const BallCover*>& extra = {});

/// theta = 1 single-sum variant.
BallCover hausdorff_content_upper(const MetricMeasureSpace& space, const std::vector<Index>& E,
                                  double d, double R,
                                  const std::vector<const BallCover*>& extra = {});

/// Concatenates covers sharing parameters and recomputes the value. The
/// postcondition value^r <= sum_k value_k^r with r = min{1, theta} is
/// verified numerically.
BallCover combine_covers(const MetricMeasureSpace& space, const std::vector<BallCover>& covers);

/// Greedy 5r selection: decreasing radius, keep a ball iff disjoint (as a
/// point set) from everything kept so far. Returns indices of kept balls.
/// Postconditions checked: kept balls pairwise disjoint, every input ball
/// contained in the 5x dilate of some kept ball.
std::vector<int> five_r_cover(const MetricMeasureSpace& space,
                              const std::vector<CoverBall>& family);

/// Frozen constant C(d, theta, R) with mu(E) <= C * content value: (2R)^d for
/// theta <= 1, and (2R)^d (1 - 2^{-d theta'})^{-1/theta'} with theta' the
/// Hoelder conjugate for theta > 1 (requires d > 0). Infinite when the lemma
/// places no claim (R infinite with d > 0, or theta > 1 with d = 0).
double measure_bound_constant(const ContentParams& params);

}  // namespace lusin
