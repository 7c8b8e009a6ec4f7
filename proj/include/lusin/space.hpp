#pragma once

#include <Eigen/Dense>

#include <array>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "lusin/errors.hpp"

namespace lusin {

using Eigen::ArrayXd;
using Eigen::MatrixXd;
using Index = Eigen::Index;

/// Open metric ball B(center, radius) = {y : d(y, center) < radius}.
struct Ball {
  Index center = 0;
  double radius = 0.0;
};

/// Dyadic level k classifying a positive distance t by 2^{-k-1} <= t < 2^{-k}.
int level_of(double t);

/// Truncated range of dyadic levels [k_min, k_max]; empty when k_max < k_min.
/// Every positive realized distance of the space classifies inside the range.
struct ScaleGrid {
  int k_min = 0;
  int k_max = -1;

  bool empty() const { return k_max < k_min; }
  int levels() const { return empty() ? 0 : k_max - k_min + 1; }
  bool contains(int k) const { return k >= k_min && k <= k_max; }
  int row(int k) const { return k - k_min; }
};

/// Measured surrogates for the standing hypotheses: the doubling constant,
/// the annulus-density constant (smallest c with mu(B(x,4r) \ B(x,2r)) >=
/// mu(B(x,4r))/c over the tested grid) and the fraction of tested (x, r)
/// pairs whose annulus is nonempty.
struct HypothesisReport {
  double c_D = 1.0;
  double c_A = std::numeric_limits<double>::quiet_NaN();  // NaN when nothing tested
  double spheres_ok = 0.0;
  long tested = 0;
  std::vector<std::pair<Index, double>> empty_annuli;  // (center, radius)
};

/// How the pairwise metric is produced.
struct MetricSpec {
  enum class Kind { Euclidean, Linf, Matrix, Graph };

  struct Edge {
    Index a = 0;
    Index b = 0;
    double w = 0.0;
  };

  Kind kind = Kind::Euclidean;
  MatrixXd coords;  // n x dims, for Euclidean / Linf
  MatrixXd matrix;  // n x n explicit distances
  std::vector<Edge> edges;  // undirected weighted graph, shortest-path metric

  static MetricSpec euclidean(MatrixXd c);
  static MetricSpec linf(MatrixXd c);
  static MetricSpec from_matrix(MatrixXd m);
  static MetricSpec graph(std::vector<Edge> e);
};

/// Finite weighted metric measure space. Immutable after build; every query
/// is a pure read. Distances are stored densely and each center keeps its
/// neighbor list sorted by distance with prefix weight sums, so ball queries
/// are binary searches.
class MetricMeasureSpace {
 public:
  /// Validates and indexes the space. The triangle inequality is checked
  /// exhaustively for n <= 512 and on seeded random triples above that.
  /// Throws InputError with the offending entries on any violation.
  static MetricMeasureSpace build(const MetricSpec& spec, ArrayXd weights,
                                  std::vector<long long> ids = {});

  Index size() const { return n_; }
  double distance(Index x, Index y) const { return dist_(x, y); }
  const MatrixXd& distances() const { return dist_; }
  double weight(Index x) const { return w_[x]; }
  const ArrayXd& weights() const { return w_; }
  double total_weight() const { return total_w_; }
  double diameter() const { return diameter_; }
  double min_positive_distance() const { return min_pos_dist_; }

  long long id_of(Index x) const { return ids_[x]; }
  Index index_of(long long id) const;  // InputError on unknown id

  /// Points of B(x, r), ascending index order.
  std::vector<Index> ball(Index x, double r) const;
  /// Number of points with d(., x) < r.
  Index ball_count(Index x, double r) const;
  /// mu(B(x, r)).
  double ball_measure(Index x, double r) const;

  /// Neighbors of x sorted by (distance, index); position 0 is x itself.
  const std::vector<Index>& neighbors_by_distance(Index x) const { return nbr_[x]; }
  /// Distances aligned with neighbors_by_distance(x).
  const std::vector<double>& neighbor_distances(Index x) const { return nbr_dist_[x]; }
  /// Prefix weight sums aligned with neighbors_by_distance(x).
  const std::vector<double>& neighbor_cumweights(Index x) const { return nbr_cumw_[x]; }

  /// Sorted unique positive distances realized anywhere in the space.
  const std::vector<double>& realized_distances() const { return realized_; }

  /// min over y in S of d(x, y); S given as an indicator over points.
  double distance_to_set(Index x, const std::vector<char>& in_set) const;

 private:
  MetricMeasureSpace() = default;

  Index n_ = 0;
  std::vector<long long> ids_;
  MatrixXd dist_;
  ArrayXd w_;
  double total_w_ = 0.0;
  double diameter_ = 0.0;
  double min_pos_dist_ = std::numeric_limits<double>::infinity();
  std::vector<std::vector<Index>> nbr_;
  std::vector<std::vector<double>> nbr_dist_;
  std::vector<std::vector<double>> nbr_cumw_;
  std::vector<double> realized_;
};

/// Exact doubling constant: max over centers x and critical radii r (realized
/// distances from x and their halves) of mu(B(x,2r)) / mu(B(x,r)).
double estimate_doubling_constant(const MetricMeasureSpace& space);

/// Annulus report over the tested grid {(x, 2^{-i}) : i in scale grid,
/// 4 * 2^{-i} <= diameter}, subsampled deterministically to at most
/// max_samples pairs. Also fills in the doubling constant.
HypothesisReport annulus_density(const MetricMeasureSpace& space, long max_samples = 200000);

/// Grid spanning [level_of(diameter), level_of(min positive distance)];
/// empty for a singleton space.
ScaleGrid scale_grid(const MetricMeasureSpace& space);

}  // namespace lusin
