#include "lusin/median.hpp"

#include <algorithm>
#include <cmath>

namespace lusin {

namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0) || gamma > 0.5) throw InputError("gamma must lie in (0, 1/2]");
}

struct WeightedValues {
  std::vector<double> value;  // ascending
  std::vector<double> weight;
  std::vector<double> pref;  // pref[i] = weight of entries 0..i
  double total = 0.0;

  void build(const MetricMeasureSpace& space, const ArrayXd& u, const std::vector<Index>& A) {
    std::vector<std::pair<double, double>> vw;
    vw.reserve(A.size());
    for (Index x : A) vw.push_back({u[x], space.weight(x)});
    std::sort(vw.begin(), vw.end());
    const size_t m = vw.size();
    value.resize(m);
    weight.resize(m);
    pref.resize(m);
    double acc = 0.0;
    for (size_t i = 0; i < m; ++i) {
      value[i] = vw[i].first;
      weight[i] = vw[i].second;
      acc += vw[i].second;
      pref[i] = acc;
    }
    total = acc;
  }
};

// Smallest sample value whose strict-exceedance weight is below gamma*total.
// Exceedance of value[j] is total - (prefix weight through j's tie group).
double median_of_sorted(const std::vector<double>& value, const std::vector<double>& pref,
                        double total, double gamma) {
  const size_t m = value.size();
  const double thr = gamma * total;
  size_t g = 0;
  while (g < m) {
    size_t ge = g;
    while (ge + 1 < m && value[ge + 1] == value[g]) ++ge;
    if (total - pref[ge] < thr) return value[g];
    g = ge + 1;
  }
  return value.back();  // unreachable: the last group has zero exceedance
}

// Minimal length of a closed value-interval [value[i], value[j]] whose
// complement holds mass < gamma*total. i runs over tie-group starts and j
// over tie-group ends so index prefix sums equal value prefix sums.
double min_interval_of_sorted(const std::vector<double>& value, const std::vector<double>& pref,
                              double total, double gamma) {
  const size_t m = value.size();
  const double thr = gamma * total;
  std::vector<size_t> gstart, gend;
  for (size_t i = 0; i < m; ++i) {
    if (i == 0 || value[i] != value[i - 1]) gstart.push_back(i);
    if (i + 1 == m || value[i + 1] != value[i]) gend.push_back(i);
  }
  const size_t ng = gstart.size();
  double best = std::numeric_limits<double>::infinity();
  size_t jg = 0;
  for (size_t ig = 0; ig < ng; ++ig) {
    const size_t i = gstart[ig];
    const double left_out = i == 0 ? 0.0 : pref[i - 1];
    if (!(left_out < thr)) break;
    if (jg < ig) jg = ig;
    while (jg < ng) {
      const size_t j = gend[jg];
      const double out = left_out + (total - pref[j]);
      if (out < thr) break;
      ++jg;
    }
    if (jg == ng) break;  // no feasible right end; larger i only adds mass
    best = std::min(best, value[gend[jg]] - value[i]);
  }
  return best;
}

// Fenwick tree over distinct-value ranks holding weights; supports the
// median search "smallest rank with prefix weight > target".
class RankFenwick {
 public:
  void reset(size_t n) {
    n_ = n;
    tree_.assign(n + 1, 0.0);
    log_ = 0;
    while ((size_t{1} << (log_ + 1)) <= n) ++log_;
  }
  void add(size_t rank, double w) {
    for (size_t i = rank + 1; i <= n_; i += i & (~i + 1)) tree_[i] += w;
  }
  // smallest 0-based rank t with prefix(t) > target; n_ if none
  size_t upper_rank(double target) const {
    size_t pos = 0;
    double acc = 0.0;
    for (size_t step = size_t{1} << log_; step > 0; step >>= 1) {
      if (pos + step <= n_ && acc + tree_[pos + step] <= target) {
        pos += step;
        acc += tree_[pos];
      }
    }
    return pos;  // pos ranks have prefix <= target
  }

 private:
  size_t n_ = 0;
  int log_ = 0;
  std::vector<double> tree_;
};

}  // namespace

double gamma_median(const MetricMeasureSpace& space, const ArrayXd& u,
                    const std::vector<Index>& A, double gamma) {
  check_gamma(gamma);
  if (A.empty()) throw InputError("gamma_median: empty set");
  WeightedValues wv;
  wv.build(space, u, A);
  return median_of_sorted(wv.value, wv.pref, wv.total, gamma);
}

double min_median_deviation(const MetricMeasureSpace& space, const ArrayXd& u,
                            const std::vector<Index>& A, double gamma) {
  check_gamma(gamma);
  if (A.empty()) throw InputError("min_median_deviation: empty set");
  WeightedValues wv;
  wv.build(space, u, A);
  return min_interval_of_sorted(wv.value, wv.pref, wv.total, gamma) / 2.0;
}

ArrayXd median_maximal(const MetricMeasureSpace& space, const ArrayXd& u, double gamma) {
  check_gamma(gamma);
  const Index n = space.size();
  const ArrayXd f = u.abs();

  // Distinct-value compression of |u|.
  std::vector<double> distinct(f.data(), f.data() + n);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<size_t> rank(static_cast<size_t>(n));
  for (Index x = 0; x < n; ++x)
    rank[static_cast<size_t>(x)] = static_cast<size_t>(
        std::lower_bound(distinct.begin(), distinct.end(), f[x]) - distinct.begin());

  ArrayXd res(n);
  RankFenwick fw;
  for (Index c = 0; c < n; ++c) {
    fw.reset(distinct.size());
    const auto& order = space.neighbors_by_distance(c);
    const auto& dist = space.neighbor_distances(c);
    const auto& cumw = space.neighbor_cumweights(c);
    double best = -std::numeric_limits<double>::infinity();
    size_t i = 0;
    while (i < order.size()) {
      size_t j = i;
      while (j + 1 < order.size() && dist[j + 1] == dist[i]) ++j;
      for (size_t t = i; t <= j; ++t) fw.add(rank[static_cast<size_t>(order[t])], space.weight(order[t]));
      const double w_cur = cumw[j];
      // median = smallest value with prefix weight > (1 - gamma) * w_cur
      const size_t t = fw.upper_rank(w_cur - gamma * w_cur);
      best = std::max(best, distinct[std::min(t, distinct.size() - 1)]);
      i = j + 1;
    }
    res[c] = best;
  }
  return res;
}

double median_maximal_at(const MetricMeasureSpace& space, const ArrayXd& u, Index x,
                         double gamma) {
  check_gamma(gamma);
  if (x < 0 || x >= space.size()) throw InputError("median_maximal_at: point out of range");
  const ArrayXd f = u.abs();
  const auto& order = space.neighbors_by_distance(x);
  const auto& dist = space.neighbor_distances(x);
  WeightedValues wv;
  std::vector<Index> pts;
  double best = -std::numeric_limits<double>::infinity();
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() && dist[j + 1] == dist[i]) ++j;
    for (size_t t = i; t <= j; ++t) pts.push_back(order[t]);
    wv.build(space, f, pts);
    best = std::max(best, median_of_sorted(wv.value, wv.pref, wv.total, gamma));
    i = j + 1;
  }
  return best;
}

std::vector<double> sharp_radius_family(const MetricMeasureSpace& space) {
  std::vector<double> fam;
  for (double t : space.realized_distances()) {
    fam.push_back(t);
    fam.push_back(2.0 * t);
  }
  fam.push_back(space.diameter() + 1.0);
  std::sort(fam.begin(), fam.end());
  fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
  return fam;
}

namespace {

// Sorted-by-value multiset grown one point at a time; prefix sums are
// rebuilt per evaluation (each ball is evaluated once, so the total work
// per center stays quadratic).
class SweepSet {
 public:
  void reserve(size_t n) {
    value_.reserve(n);
    weight_.reserve(n);
    pref_.reserve(n);
  }
  void insert(double v, double w) {
    const size_t pos = static_cast<size_t>(
        std::upper_bound(value_.begin(), value_.end(), v) - value_.begin());
    value_.insert(value_.begin() + static_cast<long>(pos), v);
    weight_.insert(weight_.begin() + static_cast<long>(pos), w);
  }
  double deviation(double gamma) {
    const size_t m = value_.size();
    if (value_.front() == value_.back()) return 0.0;  // constant on the ball
    pref_.resize(m);
    double acc = 0.0;
    for (size_t i = 0; i < m; ++i) {
      acc += weight_[i];
      pref_[i] = acc;
    }
    return min_interval_of_sorted(value_, pref_, acc, gamma) / 2.0;
  }
  void clear() {
    value_.clear();
    weight_.clear();
  }

 private:
  std::vector<double> value_, weight_, pref_;
};

}  // namespace

ArrayXd sharp_median_maximal(const MetricMeasureSpace& space, const ArrayXd& u,
                             const SharpMaximalParams& sharp, const MedianParams& med) {
  check_gamma(med.gamma);
  if (!(sharp.beta > 0.0)) throw InputError("sharp maximal: beta must be positive");
  if (!(sharp.R > 0.0)) throw InputError("sharp maximal: R must be positive");
  const Index n = space.size();
  const std::vector<double> family = sharp_radius_family(space);
  const double cap = sharp.R;

  ArrayXd res = ArrayXd::Zero(n);
  SweepSet sweep;
  for (Index c = 0; c < n; ++c) {
    const auto& order = space.neighbors_by_distance(c);
    const auto& dist = space.neighbor_distances(c);
    sweep.clear();
    sweep.reserve(order.size());
    size_t i = 0;
    while (i < order.size()) {
      size_t j = i;
      while (j + 1 < order.size() && dist[j + 1] == dist[i]) ++j;
      if (dist[i] >= cap) break;  // no admissible radius reaches this prefix
      for (size_t t = i; t <= j; ++t) sweep.insert(u[order[t]], space.weight(order[t]));
      const double d_in = dist[j];
      const double d_next =
          j + 1 < order.size() ? dist[j + 1] : std::numeric_limits<double>::infinity();
      // smallest admissible radius in (d_in, d_next] ∩ (0, cap]
      auto it = std::upper_bound(family.begin(), family.end(), d_in);
      double rho = it != family.end() ? std::min(*it, cap) : cap;
      if (rho > d_in && rho <= d_next && rho <= cap) {
        const double val = std::pow(rho, -sharp.beta) * sweep.deviation(med.gamma);
        if (sharp.centered) {
          res[c] = std::max(res[c], val);
        } else {
          for (size_t t = 0; t <= j; ++t) {
            const Index y = order[t];
            res[y] = std::max(res[y], val);
          }
        }
      }
      i = j + 1;
    }
  }
  return res;
}

double sharp_median_maximal_at(const MetricMeasureSpace& space, const ArrayXd& u, Index x,
                               const SharpMaximalParams& sharp, const MedianParams& med) {
  if (x < 0 || x >= space.size()) throw InputError("sharp maximal: point out of range");
  return sharp_median_maximal(space, u, sharp, med)[x];
}

ArrayXd average_maximal(const MetricMeasureSpace& space, const ArrayXd& f) {
  const Index n = space.size();
  const ArrayXd g = f.abs();
  ArrayXd res(n);
  for (Index c = 0; c < n; ++c) {
    const auto& order = space.neighbors_by_distance(c);
    const auto& dist = space.neighbor_distances(c);
    const auto& cumw = space.neighbor_cumweights(c);
    double acc = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    size_t i = 0;
    while (i < order.size()) {
      size_t j = i;
      while (j + 1 < order.size() && dist[j + 1] == dist[i]) ++j;
      for (size_t t = i; t <= j; ++t) acc += space.weight(order[t]) * g[order[t]];
      best = std::max(best, acc / cumw[j]);
      i = j + 1;
    }
    res[c] = best;
  }
  return res;
}

}  // namespace lusin
