#pragma once

#include "lusin/rng.hpp"
#include "lusin/space.hpp"

namespace lusin {

/// Synthetic fixture kinds. All generators are deterministic given the seed.
MetricSpec gen_line(Index n);                 // integer line {0 .. n-1}
MetricSpec gen_grid(Index side);              // side x side unit grid, Euclidean
MetricSpec gen_cantor(int level);             // 2^level middle-third endpoints
MetricSpec gen_graph(Index n, Rng& rng);      // connected random weighted graph
MetricSpec gen_cloud(Index n, Rng& rng, int dim = 2, double scale = 1.0);

ArrayXd unit_weights(Index n);

/// Random weights in [lo, hi], quantized to multiples of 2^-20. Dyadic
/// weights keep every partial sum exact in double precision, so median
/// tie-breaking decisions never depend on summation order.
ArrayXd random_weights(Index n, Rng& rng, double lo = 0.1, double hi = 10.0);

/// Sample functions: index step, Hoelder bump around the middle point,
/// seeded random values, single-point indicator.
ArrayXd fn_step(Index n);
ArrayXd fn_bump(const MetricMeasureSpace& space, double s);
ArrayXd fn_random(Index n, Rng& rng, double lo = -1.0, double hi = 1.0);
ArrayXd fn_indicator(Index n, Index at);

}  // namespace lusin
