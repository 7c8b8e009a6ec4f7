#pragma once

#include <optional>
#include <vector>

#include "lusin/content.hpp"
#include "lusin/gradient.hpp"
#include "lusin/median.hpp"
#include "lusin/whitney.hpp"

namespace lusin {

/// Parameters of the approximation pipeline. support_center switches to the
/// compactly supported path (supp u inside B(support_center, 1)); otherwise
/// the localization path runs.
struct ApproxParams {
  SmoothnessParams smoothness;
  double beta = 0.25;
  MedianParams median;
  double c_E = 1.0;        // bad-set shrinkage constant, gamma/c_E in the sharp maximal
  double R_content = 64.0; // radius cap of the exceptional-set content
  std::optional<Index> support_center;

  void validate() const;
  /// Content parameters of the exceptional set: codimension (s - beta) p,
  /// theta = q/p on the Besov scale and 1 otherwise.
  ContentParams content_params() const;
};

/// Per-lambda measurements. diff_norm_upper = lp_part + c_diff_cap * seq_h,
/// where c_diff_cap is fixed across a schedule so the reported bound is
/// provably nonincreasing (each ingredient is entrywise monotone in lambda).
struct LambdaRow {
  double lambda = 0.0;
  Index omega_size = 0;
  double content_upper = 0.0;
  double holder_seminorm = 0.0;
  double diff_norm_upper = 0.0;
  double c_ext = 1.0;
  double c_diff = 1.0;
  double lp_part = 0.0;  // L^p piece of the difference bound
  double seq_h = 0.0;    // sequence norm of the difference gradient
  bool identity_off_omega = true;
  std::optional<bool> claim1;  // set when a support ball is declared and lambda > lambda0
};

struct ApproxResult {
  ArrayXd v;
  std::vector<Index> omega;
  std::vector<char> omega_mask;
  std::optional<WhitneyDecomposition> whitney;
  std::optional<PartitionOfUnity> pou;
  FractionalGradient extension_gradient;
  FractionalGradient difference_gradient;
  std::optional<BallCover> content_cover;
  LambdaRow report;
  double lambda0 = std::numeric_limits<double>::quiet_NaN();
};

struct ScheduleResult {
  std::vector<double> lambdas;
  std::vector<ApproxResult> runs;
  std::vector<LambdaRow> rows;  // diff_norm_upper rebuilt with the schedule-wide c_diff cap
  bool identity_all = true;
  bool claim1_all = true;  // vacuously true when never applicable
  double lambda0 = std::numeric_limits<double>::quiet_NaN();
};

/// Uncentered sharp maximal values driving the bad set: (u)~^{gamma/c_E,#}_beta
/// with no radius cap.
ArrayXd bad_set_sharp(const MetricMeasureSpace& space, const ArrayXd& u,
                      const ApproxParams& params);

/// E_lambda = {x : sharp(x) > lambda}.
std::vector<Index> bad_set(const ArrayXd& sharp_values, double lambda);

/// lambda_0 = (c_E c_D / gamma)^{1/p} mu(B(x0,1))^{-1/p} ||u||_{L^p};
/// for lambda above it the bad set stays inside B(x0, 2). Requires
/// supp u inside B(x0, 1).
double lambda_zero(const MetricMeasureSpace& space, const ArrayXd& u, Index x0,
                   const ApproxParams& params);

/// Median Whitney extension: v = u off E and sum_i phi_i m^gamma_u(2B_i) on E.
ArrayXd whitney_extension(const MetricMeasureSpace& space, const ArrayXd& u,
                          const std::vector<Index>& E, double gamma);
ArrayXd whitney_extension(const MetricMeasureSpace& space, const ArrayXd& u,
                          const WhitneyDecomposition& W, const PartitionOfUnity& P,
                          double gamma);

/// Extension gradient g~_k = sup_j 2^{-|j-k| delta} M_{gamma'} g_j with
/// delta = min{s, 1-s}; independent of lambda.
FractionalGradient extension_gradient(const MetricMeasureSpace& space,
                                      const FractionalGradient& G, double s,
                                      double gamma_shrunk);

/// h_k = g~_k restricted to the bad set, entrywise.
FractionalGradient difference_gradient(const FractionalGradient& g_tilde,
                                       const std::vector<char>& omega_mask);

/// Smallest C such that (C * G_k) passes the pairwise admissibility check
/// for f: the maximum violation ratio over pairs. 1 when unconstrained,
/// infinity when some oscillating pair has a vanishing gradient bound.
double admissibility_constant(const MetricMeasureSpace& space, const ArrayXd& f,
                              const FractionalGradient& G, double s);

/// max over pairs of |v(x)-v(y)| / d(x,y)^beta, optionally within a subset.
double holder_seminorm(const MetricMeasureSpace& space, const ArrayXd& v, double beta);
double holder_seminorm_on(const MetricMeasureSpace& space, const ArrayXd& v, double beta,
                          const std::vector<Index>& subset);

/// Runs the pipeline for each lambda in the schedule (compact path when a
/// support center is declared, localization otherwise).
ScheduleResult approximate(const MetricMeasureSpace& space, const ArrayXd& u,
                           const ApproxParams& params, const std::vector<double>& lambdas);

/// epsilon-driven variant: per-piece lambdas are raised along a doubling
/// schedule until the norm budget 2^{-j-1} eps and the content budget
/// 2^{-(j+1)/r} eps, r = min{1, q/p}, are met.
ApproxResult approximate_epsilon(const MetricMeasureSpace& space, const ArrayXd& u,
                                 const ApproxParams& params, double epsilon);

}  // namespace lusin
