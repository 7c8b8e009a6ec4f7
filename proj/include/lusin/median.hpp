#pragma once

#include <limits>
#include <vector>

#include "lusin/space.hpp"

namespace lusin {

struct MedianParams {
  double gamma = 0.5;  // 0 < gamma <= 1/2
};

/// Parameters of the fractional sharp median maximal functions: Hoelder
/// exponent target beta, radius cap R (may be infinite) and the variant
/// (centered = sup over balls at the point, uncentered = sup over all balls
/// containing the point).
struct SharpMaximalParams {
  double beta = 0.25;
  double R = std::numeric_limits<double>::infinity();
  bool centered = false;
};

/// gamma-median of u over A: inf{ a : mu({x in A : u(x) > a}) < gamma mu(A) }.
/// On finite data this is the smallest sample value whose strict-exceedance
/// weight drops below gamma mu(A). Throws InputError on empty A.
double gamma_median(const MetricMeasureSpace& space, const ArrayXd& u,
                    const std::vector<Index>& A, double gamma);

/// inf over real c of the gamma-median of |u - c| on A. Computed exactly as
/// half the minimal length of a closed value-interval whose complement holds
/// mass < gamma mu(A); optimal endpoints sit at sample values, so a
/// two-pointer sweep over the sorted values is exact.
double min_median_deviation(const MetricMeasureSpace& space, const ArrayXd& u,
                            const std::vector<Index>& A, double gamma);

/// Median maximal function M_gamma u(x) = max over realized radii of the
/// gamma-median of |u| over B(x, r). Exact: ball contents only change at
/// realized distances.
ArrayXd median_maximal(const MetricMeasureSpace& space, const ArrayXd& u, double gamma);
double median_maximal_at(const MetricMeasureSpace& space, const ArrayXd& u, Index x, double gamma);

/// Admissible radius family for the sharp maximal functions: realized
/// distances, their doubles, and diameter + 1. Doubles are included so that
/// every uncentered ball B(y, r) has the centered companion B(x, 2r) in the
/// family, which the comparability inequality chains through.
std::vector<double> sharp_radius_family(const MetricMeasureSpace& space);

/// Fractional sharp gamma-median maximal function at every point:
/// sup of r^{-beta} * min_median_deviation(u, B(., r), gamma) over family
/// radii <= R (all centers for the uncentered variant).
ArrayXd sharp_median_maximal(const MetricMeasureSpace& space, const ArrayXd& u,
                             const SharpMaximalParams& sharp, const MedianParams& med);
double sharp_median_maximal_at(const MetricMeasureSpace& space, const ArrayXd& u, Index x,
                               const SharpMaximalParams& sharp, const MedianParams& med);

/// Average-based maximal function: max over realized radii of the weighted
/// mean of |f| over B(x, r). Used by the maximal-sandwich checks.
ArrayXd average_maximal(const MetricMeasureSpace& space, const ArrayXd& f);

}  // namespace lusin
