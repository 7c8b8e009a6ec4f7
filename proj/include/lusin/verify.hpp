#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lusin/approx.hpp"
#include "lusin/content.hpp"
#include "lusin/generators.hpp"
#include "lusin/gradient.hpp"
#include "lusin/median.hpp"
#include "lusin/whitney.hpp"

namespace lusin::verify {

using Violations = std::vector<std::string>;

/// Negative-control hooks: deliberately break a computation so the harness
/// proves it can catch violations.
enum class Fault { None, TamperMedian };

// --- single-instance checkers ------------------------------------------------

/// The eight median calculus properties plus the two-sided deviation remark
/// (factor exactly 2). A and B are sampled inside.
Violations median_properties(const MetricMeasureSpace& space, const ArrayXd& u,
                             const ArrayXd& v, double gamma, Rng& rng,
                             Fault fault = Fault::None);

/// |u| <= M_gamma u <= (gamma^{-1} M(|u|^p))^{1/p} for p in {1/2, 1, 2}.
Violations maximal_sandwich(const MetricMeasureSpace& space, const ArrayXd& u, double gamma);

/// Centered <= uncentered <= 2^beta centered at gamma/c_D and doubled cap.
Violations sharp_comparability(const MetricMeasureSpace& space, const ArrayXd& u, double gamma,
                               double beta, double R);

/// Median Poincare inequality with the derived constant
/// C = max(2^{3s+1}, 4 max(c_A, c_D^2)) plus the simple 2^{s+1} form for a
/// verified plain s-gradient. Only (x, i) pairs with a nonempty annulus are
/// asserted; callers gate whole instances on spheres_ok = 1.
Violations poincare(const MetricMeasureSpace& space, const ArrayXd& u, double s, double gamma);

/// Ball monotonicity, doubling-report exactness, annulus bookkeeping.
Violations space_properties(const MetricMeasureSpace& space);

/// Canonical admissibility across s, homogeneity, power inequality, l^q
/// monotonicity, Leibniz admissibility, summing-lemma ratio, restricted-norm
/// monotonicity.
Violations gradient_properties(const MetricMeasureSpace& space, const ArrayXd& u, double p,
                               double q, Rng& rng);

/// Measure bound with the frozen constant, combination bound, 5r
/// postconditions, cover validity, subset monotonicity via shared menus.
Violations content_properties(const MetricMeasureSpace& space, const std::vector<Index>& E,
                              const ContentParams& params, Rng& rng);

/// Whitney properties (1)-(6) and the partition identity.
Violations whitney_properties(const MetricMeasureSpace& space, const std::vector<Index>& U);

/// min_median_deviation sweep vs brute-force center enumeration (n <= 32).
Violations deviation_oracle(const MetricMeasureSpace& space, const ArrayXd& u, double gamma);

/// whitney_extension vs an independent straight-line re-evaluation, bitwise.
Violations extension_oracle(const MetricMeasureSpace& space, const ArrayXd& u,
                            const std::vector<Index>& E, double gamma);

/// Derived chain bound for the extension gradient norm.
struct NormChain {
  double lhs = 0.0;     // sequence norm of g~
  double bound = 0.0;   // C_norm * sequence norm of G
  double c_norm = 0.0;  // analytic factor times the measured maximal constant
};
NormChain gradient_norm_chain(const MetricMeasureSpace& space, const FractionalGradient& G,
                              const FractionalGradient& gtilde, const ApproxParams& params);

/// Identity, bad-set monotonicity, admissibility of the scaled gradients,
/// difference-gradient support, norm-chain bound and exact norm decay over
/// the schedule; claim 1 when a support ball is declared.
Violations pipeline_properties(const MetricMeasureSpace& space, const ArrayXd& u,
                               const ApproxParams& params, const std::vector<double>& lambdas);

/// Content decay: log2(content(2 lambda) / content(lambda)) <= -0.8 p over
/// consecutive resolvable doublings. A doubling is resolvable when both
/// contents are positive, the bad set strictly shrinks, and the certificate
/// value responds to the shrink. Returns the number of resolvable pairs
/// through `resolvable`.
Violations decay_slope(const std::vector<LambdaRow>& rows, double p, int& resolvable);

/// TL with q = infinity versus the Hajlasz route: identical Omega and v.
Violations tl_hajlasz_consistency(const MetricMeasureSpace& space, const ArrayXd& u,
                                  const ApproxParams& tl_params, double lambda);

// --- suite driver ------------------------------------------------------------

struct SuiteReport {
  std::string name;
  long instances = 0;
  long skipped = 0;
  Violations violations;
  bool ok() const { return violations.empty(); }
};

std::vector<std::string> suite_names();

/// Runs the named suite ("all" chains every suite) on `count` seeded random
/// instances. Violations carry reproduction data (suite, seed, instance).
std::vector<SuiteReport> run_suites(const std::string& name, std::uint64_t seed, long count,
                                    Fault fault = Fault::None);

}  // namespace lusin::verify
