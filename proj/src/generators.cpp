#include "lusin/generators.hpp"

#include <cmath>

namespace lusin {

MetricSpec gen_line(Index n) {
  if (n < 1) throw InputError("gen_line: need at least one point");
  MatrixXd coords(n, 1);
  for (Index i = 0; i < n; ++i) coords(i, 0) = static_cast<double>(i);
  return MetricSpec::euclidean(std::move(coords));
}

MetricSpec gen_grid(Index side) {
  if (side < 1) throw InputError("gen_grid: need at least one point per side");
  MatrixXd coords(side * side, 2);
  for (Index i = 0; i < side; ++i)
    for (Index j = 0; j < side; ++j) {
      coords(i * side + j, 0) = static_cast<double>(i);
      coords(i * side + j, 1) = static_cast<double>(j);
    }
  return MetricSpec::euclidean(std::move(coords));
}

MetricSpec gen_cantor(int level) {
  if (level < 0 || level > 16) throw InputError("gen_cantor: level must lie in [0, 16]");
  const Index n = Index{1} << level;
  MatrixXd coords(n, 1);
  for (Index m = 0; m < n; ++m) {
    double x = 0.0, scale = 1.0 / 3.0;
    for (int b = level - 1; b >= 0; --b) {
      if ((m >> b) & 1) x += 2.0 * scale;
      scale /= 3.0;
    }
    coords(m, 0) = x;
  }
  return MetricSpec::euclidean(std::move(coords));
}

namespace {

double quantize(double v) { return std::round(v * 0x1.0p20) * 0x1.0p-20; }

}  // namespace

MetricSpec gen_graph(Index n, Rng& rng) {
  if (n < 1) throw InputError("gen_graph: need at least one point");
  std::vector<MetricSpec::Edge> edges;
  for (Index i = 1; i < n; ++i) {
    const Index j = static_cast<Index>(rng.uniform_int(0, i - 1));
    edges.push_back({i, j, quantize(rng.uniform(0.5, 1.5))});
  }
  const Index extra = n / 3;
  for (Index e = 0; e < extra; ++e) {
    const Index a = static_cast<Index>(rng.uniform_int(0, n - 1));
    const Index b = static_cast<Index>(rng.uniform_int(0, n - 1));
    if (a == b) continue;
    edges.push_back({a, b, quantize(rng.uniform(0.5, 2.5))});
  }
  return MetricSpec::graph(std::move(edges));
}

MetricSpec gen_cloud(Index n, Rng& rng, int dim, double scale) {
  if (n < 1) throw InputError("gen_cloud: need at least one point");
  if (dim < 1) throw InputError("gen_cloud: dimension must be positive");
  MatrixXd coords(n, dim);
  for (Index i = 0; i < n; ++i)
    for (int d = 0; d < dim; ++d) coords(i, d) = rng.uniform(0.0, scale);
  return MetricSpec::euclidean(std::move(coords));
}

ArrayXd unit_weights(Index n) { return ArrayXd::Ones(n); }

ArrayXd random_weights(Index n, Rng& rng, double lo, double hi) {
  ArrayXd w(n);
  for (Index i = 0; i < n; ++i) {
    double v = quantize(rng.uniform(lo, hi));
    if (v < lo) v = quantize(lo) + 0x1.0p-20;
    w[i] = v;
  }
  return w;
}

ArrayXd fn_step(Index n) {
  ArrayXd u = ArrayXd::Zero(n);
  for (Index i = n / 2; i < n; ++i) u[i] = 1.0;
  return u;
}

ArrayXd fn_bump(const MetricMeasureSpace& space, double s) {
  const Index n = space.size();
  const Index c = n / 2;
  ArrayXd u(n);
  for (Index i = 0; i < n; ++i)
    u[i] = std::max(0.0, 1.0 - std::pow(space.distance(i, c), s));
  return u;
}

ArrayXd fn_random(Index n, Rng& rng, double lo, double hi) {
  ArrayXd u(n);
  for (Index i = 0; i < n; ++i) u[i] = rng.uniform(lo, hi);
  return u;
}

ArrayXd fn_indicator(Index n, Index at) {
  ArrayXd u = ArrayXd::Zero(n);
  if (at < 0 || at >= n) throw InputError("fn_indicator: point out of range");
  u[at] = 1.0;
  return u;
}

}  // namespace lusin
