#include "lusin/space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include "lusin/rng.hpp"

namespace lusin {

int level_of(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InputError("level_of: distance must be positive and finite");
  int k = -std::ilogb(t) - 1;
  // ilogb is exact for normal doubles; the nudges only fire on subnormals.
  while (std::ldexp(1.0, -k - 1) > t) ++k;
  while (std::ldexp(1.0, -k) <= t) --k;
  return k;
}

MetricSpec MetricSpec::euclidean(MatrixXd c) {
  MetricSpec s;
  s.kind = Kind::Euclidean;
  s.coords = std::move(c);
  return s;
}

MetricSpec MetricSpec::linf(MatrixXd c) {
  MetricSpec s;
  s.kind = Kind::Linf;
  s.coords = std::move(c);
  return s;
}

MetricSpec MetricSpec::from_matrix(MatrixXd m) {
  MetricSpec s;
  s.kind = Kind::Matrix;
  s.matrix = std::move(m);
  return s;
}

MetricSpec MetricSpec::graph(std::vector<Edge> e) {
  MetricSpec s;
  s.kind = Kind::Graph;
  s.edges = std::move(e);
  return s;
}

namespace {

MatrixXd coords_metric(const MatrixXd& coords, bool linf) {
  const Index n = coords.rows();
  MatrixXd d = MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const auto diff = coords.row(i) - coords.row(j);
      const double t = linf ? diff.cwiseAbs().maxCoeff() : diff.norm();
      d(i, j) = t;
      d(j, i) = t;
    }
  }
  return d;
}

MatrixXd graph_metric(Index n, const std::vector<MetricSpec::Edge>& edges) {
  std::vector<std::vector<std::pair<Index, double>>> adj(n);
  for (const auto& e : edges) {
    if (e.a < 0 || e.a >= n || e.b < 0 || e.b >= n)
      throw InputError("graph edge endpoint out of range");
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw InputError("graph edge weight must be positive and finite");
    adj[e.a].push_back({e.b, e.w});
    adj[e.b].push_back({e.a, e.w});
  }
  const double inf = std::numeric_limits<double>::infinity();
  MatrixXd d = MatrixXd::Constant(n, n, inf);
  for (Index s = 0; s < n; ++s) {
    // Dijkstra with a binary heap.
    std::vector<double> dist(n, inf);
    dist[s] = 0.0;
    using Item = std::pair<double, Index>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0.0, s});
    while (!heap.empty()) {
      auto [dd, v] = heap.top();
      heap.pop();
      if (dd > dist[v]) continue;
      for (auto [u, w] : adj[v]) {
        if (dist[v] + w < dist[u]) {
          dist[u] = dist[v] + w;
          heap.push({dist[u], u});
        }
      }
    }
    for (Index t = 0; t < n; ++t) {
      if (!std::isfinite(dist[t]))
        throw InputError("graph metric: vertices " + std::to_string(s) + " and " +
                         std::to_string(t) + " are disconnected");
      d(s, t) = dist[t];
    }
  }
  return d;
}

}  // namespace

MetricMeasureSpace MetricMeasureSpace::build(const MetricSpec& spec, ArrayXd weights,
                                             std::vector<long long> ids) {
  MetricMeasureSpace sp;
  switch (spec.kind) {
    case MetricSpec::Kind::Euclidean:
      sp.dist_ = coords_metric(spec.coords, false);
      break;
    case MetricSpec::Kind::Linf:
      sp.dist_ = coords_metric(spec.coords, true);
      break;
    case MetricSpec::Kind::Matrix:
      sp.dist_ = spec.matrix;
      break;
    case MetricSpec::Kind::Graph:
      sp.dist_ = graph_metric(weights.size(), spec.edges);
      break;
  }
  const Index n = sp.dist_.rows();
  if (n == 0) throw InputError("space must contain at least one point");
  if (sp.dist_.cols() != n) throw InputError("distance matrix must be square");
  if (weights.size() != n) throw InputError("weights size does not match point count");
  sp.n_ = n;
  sp.w_ = std::move(weights);

  if (ids.empty()) {
    ids.resize(static_cast<size_t>(n));
    std::iota(ids.begin(), ids.end(), 0);
  }
  if (static_cast<Index>(ids.size()) != n) throw InputError("ids size does not match point count");
  sp.ids_ = std::move(ids);

  for (Index i = 0; i < n; ++i) {
    if (!(sp.w_[i] > 0.0) || !std::isfinite(sp.w_[i]))
      throw InputError("weight of point " + std::to_string(sp.ids_[i]) +
                       " must be strictly positive and finite");
  }

  for (Index i = 0; i < n; ++i) {
    if (sp.dist_(i, i) != 0.0)
      throw InputError("metric must vanish on the diagonal at point " + std::to_string(sp.ids_[i]));
    for (Index j = i + 1; j < n; ++j) {
      const double t = sp.dist_(i, j);
      if (!std::isfinite(t) || t < 0.0)
        throw InputError("distance (" + std::to_string(sp.ids_[i]) + "," +
                         std::to_string(sp.ids_[j]) + ") must be finite and nonnegative");
      if (t != sp.dist_(j, i))
        throw InputError("asymmetric distance between " + std::to_string(sp.ids_[i]) + " and " +
                         std::to_string(sp.ids_[j]));
      if (t == 0.0)
        throw InputError("distinct points " + std::to_string(sp.ids_[i]) + " and " +
                         std::to_string(sp.ids_[j]) + " at distance zero");
    }
  }

  // Relative slack absorbs the last-ulp error of computed coordinate metrics.
  auto check_triple = [&](Index a, Index b, Index c) {
    const double bound = sp.dist_(a, b) + sp.dist_(b, c);
    if (sp.dist_(a, c) > bound + 1e-12 * std::max(1.0, bound)) {
      std::ostringstream os;
      os << "triangle inequality violated on (" << sp.ids_[a] << "," << sp.ids_[b] << ","
         << sp.ids_[c] << "): d(a,c)=" << sp.dist_(a, c)
         << " > d(a,b)+d(b,c)=" << sp.dist_(a, b) + sp.dist_(b, c);
      throw InputError(os.str());
    }
  };
  if (n <= 512) {
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b)
        for (Index c = 0; c < n; ++c) check_triple(a, b, c);
  } else {
    Rng rng(0x7a1e5u);
    for (long s = 0; s < 2000000; ++s) {
      const Index a = static_cast<Index>(rng.uniform_int(0, n - 1));
      const Index b = static_cast<Index>(rng.uniform_int(0, n - 1));
      const Index c = static_cast<Index>(rng.uniform_int(0, n - 1));
      check_triple(a, b, c);
    }
  }

  sp.total_w_ = sp.w_.sum();
  sp.nbr_.resize(static_cast<size_t>(n));
  sp.nbr_dist_.resize(static_cast<size_t>(n));
  sp.nbr_cumw_.resize(static_cast<size_t>(n));
  for (Index x = 0; x < n; ++x) {
    auto& order = sp.nbr_[x];
    order.resize(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      const double da = sp.dist_(x, a), db = sp.dist_(x, b);
      return da != db ? da < db : a < b;
    });
    auto& dd = sp.nbr_dist_[x];
    auto& cw = sp.nbr_cumw_[x];
    dd.resize(static_cast<size_t>(n));
    cw.resize(static_cast<size_t>(n));
    double acc = 0.0;
    for (Index i = 0; i < n; ++i) {
      dd[static_cast<size_t>(i)] = sp.dist_(x, order[static_cast<size_t>(i)]);
      acc += sp.w_[order[static_cast<size_t>(i)]];
      cw[static_cast<size_t>(i)] = acc;
    }
  }

  sp.realized_.reserve(static_cast<size_t>(n) * static_cast<size_t>(n) / 2);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) sp.realized_.push_back(sp.dist_(i, j));
  std::sort(sp.realized_.begin(), sp.realized_.end());
  sp.realized_.erase(std::unique(sp.realized_.begin(), sp.realized_.end()), sp.realized_.end());
  if (!sp.realized_.empty()) {
    sp.min_pos_dist_ = sp.realized_.front();
    sp.diameter_ = sp.realized_.back();
  }
  return sp;
}

Index MetricMeasureSpace::index_of(long long id) const {
  for (Index i = 0; i < n_; ++i)
    if (ids_[static_cast<size_t>(i)] == id) return i;
  throw InputError("unknown point id " + std::to_string(id));
}

Index MetricMeasureSpace::ball_count(Index x, double r) const {
  if (x < 0 || x >= n_) throw InputError("ball: point index out of range");
  if (!(r > 0.0)) throw InputError("ball: radius must be positive");
  const auto& dd = nbr_dist_[static_cast<size_t>(x)];
  return static_cast<Index>(std::lower_bound(dd.begin(), dd.end(), r) - dd.begin());
}

std::vector<Index> MetricMeasureSpace::ball(Index x, double r) const {
  const Index c = ball_count(x, r);
  const auto& order = nbr_[static_cast<size_t>(x)];
  std::vector<Index> out(order.begin(), order.begin() + c);
  std::sort(out.begin(), out.end());
  return out;
}

double MetricMeasureSpace::ball_measure(Index x, double r) const {
  const Index c = ball_count(x, r);
  return c == 0 ? 0.0 : nbr_cumw_[static_cast<size_t>(x)][static_cast<size_t>(c - 1)];
}

double MetricMeasureSpace::distance_to_set(Index x, const std::vector<char>& in_set) const {
  double best = std::numeric_limits<double>::infinity();
  for (Index y = 0; y < n_; ++y)
    if (in_set[static_cast<size_t>(y)]) best = std::min(best, dist_(x, y));
  return best;
}

double estimate_doubling_constant(const MetricMeasureSpace& space) {
  const Index n = space.size();
  double c = 1.0;
  std::vector<double> radii;
  for (Index x = 0; x < n; ++x) {
    radii.clear();
    for (double t : space.neighbor_distances(x)) {
      if (t > 0.0) {
        radii.push_back(t);
        radii.push_back(t / 2.0);
      }
    }
    for (double r : radii) {
      const double lo = space.ball_measure(x, r);
      const double hi = space.ball_measure(x, 2.0 * r);
      c = std::max(c, hi / lo);
    }
  }
  return c;
}

HypothesisReport annulus_density(const MetricMeasureSpace& space, long max_samples) {
  HypothesisReport rep;
  rep.c_D = estimate_doubling_constant(space);
  const ScaleGrid grid = scale_grid(space);
  if (grid.empty()) return rep;

  // Tested grid: all centers at each level whose annulus can fit inside the
  // space at all, i.e. 4 * 2^{-i} <= diameter.
  std::vector<double> radii;
  for (int k = grid.k_min; k <= grid.k_max; ++k) {
    const double r = std::ldexp(1.0, -k);
    if (4.0 * r <= space.diameter()) radii.push_back(r);
  }
  const long total = static_cast<long>(radii.size()) * static_cast<long>(space.size());
  if (total == 0) return rep;
  const long stride = std::max(1L, (total + max_samples - 1) / max_samples);

  long tested = 0, nonempty = 0;
  double c_A = 1.0;
  bool have_ca = false;
  long pair_idx = 0;
  for (double r : radii) {
    for (Index x = 0; x < space.size(); ++x, ++pair_idx) {
      if (pair_idx % stride != 0) continue;
      ++tested;
      const Index outer = space.ball_count(x, 4.0 * r);
      const Index inner = space.ball_count(x, 2.0 * r);
      if (outer > inner) {
        ++nonempty;
        const double mu_outer = space.ball_measure(x, 4.0 * r);
        const double mu_ann = mu_outer - space.ball_measure(x, 2.0 * r);
        c_A = std::max(c_A, mu_outer / mu_ann);
        have_ca = true;
      } else {
        rep.empty_annuli.push_back({x, r});
      }
    }
  }
  rep.tested = tested;
  rep.spheres_ok = tested == 0 ? 0.0 : static_cast<double>(nonempty) / static_cast<double>(tested);
  if (have_ca) rep.c_A = c_A;
  return rep;
}

ScaleGrid scale_grid(const MetricMeasureSpace& space) {
  ScaleGrid g;
  if (space.size() < 2) return g;  // empty grid for a singleton
  g.k_min = level_of(space.diameter());
  g.k_max = level_of(space.min_positive_distance());
  return g;
}

}  // namespace lusin
