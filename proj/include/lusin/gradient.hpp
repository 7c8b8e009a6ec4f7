#pragma once

#include <optional>
#include <vector>

#include "lusin/space.hpp"

namespace lusin {

/// Scale-indexed family (g_k): one nonnegative value per point and level.
/// Levels outside the grid carry no pairs and are implicitly zero.
struct FractionalGradient {
  ScaleGrid grid;
  MatrixXd values;  // levels x points, row grid.row(k)

  static FractionalGradient zero(const ScaleGrid& g, Index n) {
    return {g, MatrixXd::Zero(g.levels(), n)};
  }
  double at(int k, Index x) const {
    return grid.contains(k) ? values(grid.row(k), x) : 0.0;
  }
};

struct SmoothnessParams {
  enum class Family { Besov, TriebelLizorkin, Hajlasz };

  double s = 0.5;
  double p = 1.0;
  double q = 1.0;
  Family family = Family::Besov;

  /// q actually used by norms; the Hajlasz scale is Triebel-Lizorkin with
  /// q = infinity.
  double effective_q() const {
    return family == Family::Hajlasz ? std::numeric_limits<double>::infinity() : q;
  }
  void validate() const;
};

enum class NormMode { LqOfLp, LpOfLq };

/// Half-oscillation gradient: g_k(x) = sup over y in the k-annulus of
/// |u(x)-u(y)| / (2 d(x,y)^s). Admissible by construction and 1-homogeneous.
FractionalGradient canonical_fractional_gradient(const MetricMeasureSpace& space,
                                                 const ArrayXd& u, double s);

struct PairViolation {
  Index x = 0;
  Index y = 0;
  int k = 0;  // level; unused by the plain s-gradient check
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Checks |u(x)-u(y)| <= d(x,y)^s (g_k(x)+g_k(y)) for every pair at its
/// level. Violations are data, not errors; rtol absorbs roundoff.
std::vector<PairViolation> verify_fractional_gradient(const MetricMeasureSpace& space,
                                                      const ArrayXd& u,
                                                      const FractionalGradient& G, double s,
                                                      double rtol = 1e-12);

/// Same check without level classification (plain s-gradient, all pairs).
std::vector<PairViolation> verify_s_gradient(const MetricMeasureSpace& space, const ArrayXd& u,
                                             const ArrayXd& g, double s, double rtol = 1e-12);

/// Weighted L^p norm (0 < p < infinity).
double lp_norm(const MetricMeasureSpace& space, const ArrayXd& f, double p);
double lp_norm_masked(const MetricMeasureSpace& space, const ArrayXd& f, double p,
                      const std::vector<char>& mask);

/// ||(g_k)||_{l^q(L^p)} or ||(g_k)||_{L^p(l^q)}; q = infinity is a supremum
/// over levels. An optional mask restricts the spatial domain (used by the
/// absolute-continuity surrogate and by the pipeline reports).
double sequence_norm(const MetricMeasureSpace& space, const FractionalGradient& G, double p,
                     double q, NormMode mode, const std::vector<char>* mask = nullptr);

/// ||u||_{L^p} plus the sequence norm of the canonical gradient in the mode
/// matching the family. An upper bound for the infimum-based function norm.
double function_norm_upper(const MetricMeasureSpace& space, const ArrayXd& u,
                           const SmoothnessParams& params);

/// Gradient for the product u * phi, phi a bounded Lipschitz function
/// vanishing outside `support`:
///   rho_k = (g_k ||phi||_inf + 2^{k(s-1)} L |u|) 1_supp      for k >= k_L,
///   h_k   = (g_k + 2^{sk+2} |u|) ||phi||_inf 1_supp          for k <  k_L,
/// with 2^{k_L - 1} < L <= 2^{k_L}; k_L clamps to the grid minimum when L
/// falls below every grid scale. L and ||phi||_inf are measured when not
/// supplied.
FractionalGradient leibniz_gradient(const MetricMeasureSpace& space, const ArrayXd& u,
                                    const FractionalGradient& G, const ArrayXd& phi,
                                    const std::vector<Index>& support, double s,
                                    std::optional<double> lipschitz = std::nullopt,
                                    std::optional<double> sup_norm = std::nullopt);

/// LHS/RHS of sum_k (sum_j a^{-|j-k|} c_j)^b <= C(a,b) sum_j c_j^b, both
/// sums over the index range of c. Ratio 0 when c vanishes.
double summing_lemma_check(double a, double b, const std::vector<double>& c);

/// Frozen constant C(a,b): the geometric series (1+a^{-b})/(1-a^{-b}) for
/// b <= 1 and ((1+a^{-1})/(1-a^{-1}))^b via the Hoelder split for b > 1.
double summing_lemma_constant(double a, double b);

/// g = sup_k g_k, a plain s-gradient whenever G is admissible.
ArrayXd sup_gradient(const FractionalGradient& G);

}  // namespace lusin
