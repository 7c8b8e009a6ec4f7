#pragma once

#include <vector>

#include "lusin/space.hpp"

namespace lusin {

/// Whitney decomposition of U: balls B_i = B(x_i, r_i) with r_i =
/// dist(x_i, X \ U) / 10, fifth-scale cores pairwise disjoint, union
/// covering U, 5B_i inside U, anchors x*_i in the complement within 15 r_i,
/// and finite overlap of the 5B_i. All six properties are checked at build.
struct WhitneyDecomposition {
  std::vector<Index> u_points;  // U, ascending
  std::vector<char> in_u;       // indicator over the space
  std::vector<Index> centers;   // x_i
  std::vector<double> radii;    // r_i
  std::vector<Index> anchors;   // x*_i
  int overlap_constant = 0;     // measured max of sum_i 1_{5B_i}

  Index ball_count() const { return static_cast<Index>(centers.size()); }
};

/// Lipschitz partition of unity subordinate to a Whitney decomposition:
/// phi_i supported in 2B_i, 0 <= phi_i <= 1, sum_i phi_i = 1 on U and 0 off
/// U. K_i = Lip(phi_i) * r_i is measured exhaustively over pairs.
struct PartitionOfUnity {
  MatrixXd phi;  // balls x points
  std::vector<double> K_i;
  double K = 0.0;
};

/// Greedy construction in decreasing-radius order subject to fifth-ball
/// disjointness. Throws InputError for U empty or U = X; CheckError if any
/// of the six properties fails.
WhitneyDecomposition whitney_cover(const MetricMeasureSpace& space,
                                   const std::vector<Index>& U);

/// Tent functions psi_i(x) = clamp(2 - d(x, x_i)/r_i, 0, 1) normalized on U.
PartitionOfUnity partition_of_unity(const MetricMeasureSpace& space,
                                    const WhitneyDecomposition& W);

}  // namespace lusin
