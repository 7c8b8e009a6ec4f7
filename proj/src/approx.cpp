#include "lusin/approx.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lusin {

void ApproxParams::validate() const {
  smoothness.validate();
  using F = SmoothnessParams::Family;
  const double s = smoothness.s, p = smoothness.p, q = smoothness.q;
  if (!(beta > 0.0)) throw InputError("beta must be positive");
  if (smoothness.family == F::Besov) {
    if (!(s < 1.0)) throw InputError("Besov scale requires s < 1");
    if (beta > s) throw InputError("Besov scale requires beta <= s");
    if (beta == s && q > p)
      throw InputError("Besov scale with beta = s requires q <= p");
  } else {
    if (beta > s) throw InputError("beta must not exceed s");
    if (smoothness.family == F::TriebelLizorkin && s >= 1.0 && std::isfinite(q))
      throw InputError("Triebel-Lizorkin scale with s = 1 requires q = infinity");
  }
  if (!(c_E > 0.0)) throw InputError("c_E must be positive");
  if (!(median.gamma > 0.0) || median.gamma / c_E > 0.5)
    throw InputError("gamma/c_E must lie in (0, 1/2]");
  if (!(R_content > 0.0)) throw InputError("content radius cap must be positive");
}

ContentParams ApproxParams::content_params() const {
  ContentParams cp;
  cp.d = (smoothness.s - beta) * smoothness.p;
  cp.theta = smoothness.family == SmoothnessParams::Family::Besov
                 ? smoothness.q / smoothness.p
                 : 1.0;
  cp.R = R_content;
  return cp;
}

ArrayXd bad_set_sharp(const MetricMeasureSpace& space, const ArrayXd& u,
                      const ApproxParams& params) {
  SharpMaximalParams sp;
  sp.beta = params.beta;
  sp.R = std::numeric_limits<double>::infinity();
  sp.centered = false;
  MedianParams med;
  med.gamma = params.median.gamma / params.c_E;
  return sharp_median_maximal(space, u, sp, med);
}

std::vector<Index> bad_set(const ArrayXd& sharp_values, double lambda) {
  std::vector<Index> out;
  for (Index x = 0; x < sharp_values.size(); ++x)
    if (sharp_values[x] > lambda) out.push_back(x);
  return out;
}

double lambda_zero(const MetricMeasureSpace& space, const ArrayXd& u, Index x0,
                   const ApproxParams& params) {
  for (Index x = 0; x < space.size(); ++x)
    if (u[x] != 0.0 && !(space.distance(x0, x) < 1.0))
      throw InputError("lambda_zero: u is not supported inside B(x0, 1) (point " +
                       std::to_string(space.id_of(x)) + ")");
  const double c_D = estimate_doubling_constant(space);
  const double p = params.smoothness.p;
  return std::pow(params.c_E * c_D / params.median.gamma, 1.0 / p) *
         std::pow(space.ball_measure(x0, 1.0), -1.0 / p) * lp_norm(space, u, p);
}

ArrayXd whitney_extension(const MetricMeasureSpace& space, const ArrayXd& u,
                          const WhitneyDecomposition& W, const PartitionOfUnity& P,
                          double gamma) {
  const Index n = space.size();
  const Index m = W.ball_count();
  std::vector<double> med(static_cast<size_t>(m));
  for (Index i = 0; i < m; ++i)
    med[static_cast<size_t>(i)] =
        gamma_median(space, u, space.ball(W.centers[static_cast<size_t>(i)],
                                          2.0 * W.radii[static_cast<size_t>(i)]),
                     gamma);
  ArrayXd v(n);
  for (Index x = 0; x < n; ++x) {
    if (!W.in_u[static_cast<size_t>(x)]) {
      v[x] = u[x];
      continue;
    }
    double acc = 0.0;
    for (Index i = 0; i < m; ++i) acc += P.phi(i, x) * med[static_cast<size_t>(i)];
    v[x] = acc;
  }
  return v;
}

ArrayXd whitney_extension(const MetricMeasureSpace& space, const ArrayXd& u,
                          const std::vector<Index>& E, double gamma) {
  if (E.empty()) return u;
  const WhitneyDecomposition W = whitney_cover(space, E);
  const PartitionOfUnity P = partition_of_unity(space, W);
  return whitney_extension(space, u, W, P, gamma);
}

FractionalGradient extension_gradient(const MetricMeasureSpace& space,
                                      const FractionalGradient& G, double s,
                                      double gamma_shrunk) {
  const Index n = space.size();
  FractionalGradient out = FractionalGradient::zero(G.grid, n);
  const int rows = G.grid.levels();
  if (rows == 0) return out;
  const double delta = std::min(s, 1.0 - s);

  MatrixXd maximal(rows, n);
  for (int r = 0; r < rows; ++r) {
    const ArrayXd level = G.values.row(r).transpose().array();
    if (level.isZero(0.0)) {
      maximal.row(r).setZero();
      continue;
    }
    maximal.row(r) = median_maximal(space, level, gamma_shrunk).matrix().transpose();
  }
  for (int k = 0; k < rows; ++k)
    for (Index x = 0; x < n; ++x) {
      double best = 0.0;
      for (int j = 0; j < rows; ++j)
        best = std::max(best, std::pow(2.0, -std::abs(j - k) * delta) * maximal(j, x));
      out.values(k, x) = best;
    }
  return out;
}

FractionalGradient difference_gradient(const FractionalGradient& g_tilde,
                                       const std::vector<char>& omega_mask) {
  FractionalGradient h = g_tilde;
  for (Index x = 0; x < h.values.cols(); ++x)
    if (!omega_mask[static_cast<size_t>(x)]) h.values.col(x).setZero();
  return h;
}

double admissibility_constant(const MetricMeasureSpace& space, const ArrayXd& f,
                              const FractionalGradient& G, double s) {
  const Index n = space.size();
  double best = 0.0;
  bool constrained = false;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double lhs = std::abs(f[i] - f[j]);
      if (lhs == 0.0) continue;
      const double d = space.distance(i, j);
      const int k = level_of(d);
      const double rhs = std::pow(d, s) * (G.at(k, i) + G.at(k, j));
      constrained = true;
      if (rhs == 0.0) return std::numeric_limits<double>::infinity();
      best = std::max(best, lhs / rhs);
    }
  return constrained ? best : 1.0;
}

double holder_seminorm(const MetricMeasureSpace& space, const ArrayXd& v, double beta) {
  if (!(beta > 0.0)) throw InputError("holder_seminorm: beta must be positive");
  double best = 0.0;
  const Index n = space.size();
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      best = std::max(best, std::abs(v[i] - v[j]) / std::pow(space.distance(i, j), beta));
  return best;
}

double holder_seminorm_on(const MetricMeasureSpace& space, const ArrayXd& v, double beta,
                          const std::vector<Index>& subset) {
  if (!(beta > 0.0)) throw InputError("holder_seminorm: beta must be positive");
  double best = 0.0;
  for (size_t a = 0; a < subset.size(); ++a)
    for (size_t b = a + 1; b < subset.size(); ++b) {
      const Index i = subset[a], j = subset[b];
      if (i == j) continue;
      best = std::max(best, std::abs(v[i] - v[j]) / std::pow(space.distance(i, j), beta));
    }
  return best;
}

namespace {

struct PieceContext {
  Index x0 = -1;  // support ball center; -1 for no declared support
  ArrayXd u;
  FractionalGradient G;
  ArrayXd sharp;
  FractionalGradient gtilde;
  double lambda0 = std::numeric_limits<double>::quiet_NaN();
  double sharp_max = 0.0;
};

PieceContext make_piece(const MetricMeasureSpace& space, ArrayXd u, FractionalGradient G,
                        const ApproxParams& params, Index x0) {
  PieceContext ctx;
  ctx.x0 = x0;
  ctx.u = std::move(u);
  ctx.G = std::move(G);
  ctx.sharp = bad_set_sharp(space, ctx.u, params);
  ctx.gtilde = extension_gradient(space, ctx.G, params.smoothness.s,
                                  params.median.gamma / params.c_E);
  ctx.sharp_max = ctx.sharp.size() > 0 ? ctx.sharp.maxCoeff() : 0.0;
  if (x0 >= 0) ctx.lambda0 = lambda_zero(space, ctx.u, x0, params);
  return ctx;
}

struct PieceRun {
  bool full_bad_set = false;  // E_lambda = X; nothing to extend against
  std::vector<Index> omega;
  std::vector<char> mask;
  ArrayXd v;
  FractionalGradient h;
  std::optional<WhitneyDecomposition> whitney;
  std::optional<PartitionOfUnity> pou;
  std::optional<BallCover> cover;
  ArrayXd lp_bound;  // pointwise (|u| + V) on the bad set, zero elsewhere
  double c_diff = 1.0;
  std::optional<bool> claim1;
};

PieceRun run_piece(const MetricMeasureSpace& space, const PieceContext& ctx,
                   const ApproxParams& params, double lambda, double c_D) {
  const Index n = space.size();
  PieceRun run;
  run.mask.assign(static_cast<size_t>(n), 0);
  for (Index x = 0; x < n; ++x)
    if (ctx.sharp[x] > lambda) {
      run.mask[static_cast<size_t>(x)] = 1;
      run.omega.push_back(x);
    }
  if (static_cast<Index>(run.omega.size()) == n) {
    run.full_bad_set = true;
    return run;
  }

  if (run.omega.empty()) {
    run.v = ctx.u;
  } else {
    run.whitney = whitney_cover(space, run.omega);
    run.pou = partition_of_unity(space, *run.whitney);
    run.v = whitney_extension(space, ctx.u, *run.whitney, *run.pou, params.median.gamma);
    run.cover = netrusov_content_upper(space, run.omega, params.content_params());
  }
  run.h = difference_gradient(ctx.gtilde, run.mask);

  const ArrayXd diff = ctx.u - run.v;
  run.c_diff = admissibility_constant(space, diff, run.h, params.smoothness.s);

  // |v| <= M_{gamma/c_D^2}(u 1_E) on E: the extension medians over 2B_i see
  // only bad-set values, and 2B_i sits inside the centered ball B(x, 4 r_i)
  // of measure at most c_D^2 mu(2B_i).
  ArrayXd masked_u = ctx.u;
  for (Index x = 0; x < n; ++x)
    if (!run.mask[static_cast<size_t>(x)]) masked_u[x] = 0.0;
  const double gamma_v = params.median.gamma / (c_D * c_D);
  const ArrayXd V = median_maximal(space, masked_u, gamma_v);
  run.lp_bound = ArrayXd::Zero(n);
  for (Index x = 0; x < n; ++x)
    if (run.mask[static_cast<size_t>(x)])
      run.lp_bound[x] = std::abs(ctx.u[x]) + V[x];

  if (ctx.x0 >= 0 && lambda > ctx.lambda0) {
    bool ok = true;
    for (Index e : run.omega)
      if (!(space.distance(ctx.x0, e) < 2.0)) ok = false;
    for (Index x = 0; x < n; ++x)
      if (run.v[x] != 0.0 && !(space.distance(ctx.x0, x) < 2.0)) ok = false;
    run.claim1 = ok;
  }
  return run;
}

// Localization cover: disjoint tenth-balls whose half-ball dilates cover X,
// tent partition psi_j supported in B(a_j, 1), and measured Lipschitz bounds.
struct Localization {
  std::vector<Index> centers;
  MatrixXd psi;              // pieces x points
  std::vector<double> lip;   // measured Lipschitz constant of each psi_j
  int dilate_overlap = 0;    // max over x of #{j : x in B(a_j, 2)}
};

Localization localize(const MetricMeasureSpace& space) {
  const Index n = space.size();
  std::vector<CoverBall> family;
  for (Index x = 0; x < n; ++x) family.push_back({x, 0.1});
  const std::vector<int> kept = five_r_cover(space, family);

  Localization loc;
  for (int idx : kept) loc.centers.push_back(family[static_cast<size_t>(idx)].center);
  const Index m = static_cast<Index>(loc.centers.size());

  MatrixXd zeta = MatrixXd::Zero(m, n);
  for (Index j = 0; j < m; ++j)
    for (Index x = 0; x < n; ++x)
      zeta(j, x) = std::clamp(2.0 - 2.0 * space.distance(x, loc.centers[static_cast<size_t>(j)]),
                              0.0, 1.0);
  loc.psi = MatrixXd::Zero(m, n);
  for (Index x = 0; x < n; ++x) {
    const double s = zeta.col(x).sum();
    if (!(s > 0.0)) throw CheckError("localization: half-ball cover misses a point");
    for (Index j = 0; j < m; ++j) loc.psi(j, x) = zeta(j, x) / s;
  }
  loc.lip.assign(static_cast<size_t>(m), 0.0);
  for (Index j = 0; j < m; ++j) {
    double lip = 0.0;
    for (Index x = 0; x < n; ++x) {
      if (!(space.distance(x, loc.centers[static_cast<size_t>(j)]) < 2.0) &&
          loc.psi(j, x) == 0.0)
        continue;
      for (Index y = 0; y < n; ++y) {
        if (y == x) continue;
        const double diff = std::abs(loc.psi(j, x) - loc.psi(j, y));
        if (diff > 0.0) lip = std::max(lip, diff / space.distance(x, y));
      }
    }
    loc.lip[static_cast<size_t>(j)] = lip;
  }
  std::vector<int> hits(static_cast<size_t>(n), 0);
  for (Index j = 0; j < m; ++j)
    for (Index x : space.ball(loc.centers[static_cast<size_t>(j)], 2.0))
      ++hits[static_cast<size_t>(x)];
  for (int h : hits) loc.dilate_overlap = std::max(loc.dilate_overlap, h);
  return loc;
}

FractionalGradient sum_gradients(const std::vector<const FractionalGradient*>& gs) {
  FractionalGradient out = *gs.front();
  for (size_t i = 1; i < gs.size(); ++i) out.values += gs[i]->values;
  return out;
}

struct Assembled {
  ApproxResult result;
  double lp_part = 0.0;
  double seq_h = 0.0;
};

// Stitches piece runs into one ApproxResult (single piece passes through).
Assembled assemble(const MetricMeasureSpace& space, const ArrayXd& u,
                   const ApproxParams& params, const std::vector<PieceContext>& ctxs,
                   const std::vector<PieceRun>& runs, double lambda) {
  const Index n = space.size();
  const double s = params.smoothness.s;
  const double p = params.smoothness.p;
  const double q = params.smoothness.effective_q();
  const NormMode mode = params.smoothness.family == SmoothnessParams::Family::Besov
                            ? NormMode::LqOfLp
                            : NormMode::LpOfLq;
  Assembled out;
  ApproxResult& res = out.result;

  res.omega_mask.assign(static_cast<size_t>(n), 0);
  for (const auto& r : runs)
    for (Index e : r.omega) res.omega_mask[static_cast<size_t>(e)] = 1;
  for (Index x = 0; x < n; ++x)
    if (res.omega_mask[static_cast<size_t>(x)]) res.omega.push_back(x);

  // v = u off Omega exactly; on Omega the sum of piece extensions.
  res.v = u;
  for (Index x = 0; x < n; ++x) {
    if (!res.omega_mask[static_cast<size_t>(x)]) continue;
    double acc = 0.0;
    for (const auto& r : runs) acc += r.v[x];
    res.v[x] = acc;
  }
  if (runs.size() > 1) {
    // Off Omega the piece extensions reproduce u up to partition roundoff.
    for (Index x = 0; x < n; ++x) {
      if (res.omega_mask[static_cast<size_t>(x)]) continue;
      double acc = 0.0;
      for (const auto& r : runs) acc += r.v[x];
      if (std::abs(acc - u[x]) > 1e-9 * std::max(1.0, std::abs(u[x])))
        throw CheckError("approximate: piece sum drifts from u off the bad set");
    }
  }

  std::vector<const FractionalGradient*> gts, hs;
  for (size_t j = 0; j < runs.size(); ++j) {
    gts.push_back(&ctxs[j].gtilde);
    hs.push_back(&runs[j].h);
  }
  res.extension_gradient = sum_gradients(gts);
  res.difference_gradient = sum_gradients(hs);
  if (runs.size() == 1) {
    res.whitney = runs.front().whitney;
    res.pou = runs.front().pou;
  }

  LambdaRow row;
  row.lambda = lambda;
  row.omega_size = static_cast<Index>(res.omega.size());
  row.identity_off_omega = true;
  for (Index x = 0; x < n; ++x)
    if (!res.omega_mask[static_cast<size_t>(x)] && res.v[x] != u[x])
      row.identity_off_omega = false;

  row.c_ext = admissibility_constant(space, res.v, res.extension_gradient, s);
  const ArrayXd diff = u - res.v;
  row.c_diff = admissibility_constant(space, diff, res.difference_gradient, s);
  row.holder_seminorm = holder_seminorm(space, res.v, params.beta);

  ArrayXd lp_bound = ArrayXd::Zero(n);
  for (const auto& r : runs) lp_bound += r.lp_bound;
  out.lp_part = lp_norm(space, lp_bound, p);
  out.seq_h = sequence_norm(space, res.difference_gradient, p, q, mode);
  row.lp_part = out.lp_part;
  row.seq_h = out.seq_h;
  row.diff_norm_upper = out.lp_part + row.c_diff * out.seq_h;

  if (!res.omega.empty()) {
    std::vector<BallCover> piece_covers;
    for (const auto& r : runs)
      if (r.cover) piece_covers.push_back(*r.cover);
    std::vector<const BallCover*> extra;
    BallCover combined;
    if (!piece_covers.empty()) {
      combined = combine_covers(space, piece_covers);
      extra.push_back(&combined);
    }
    res.content_cover = netrusov_content_upper(space, res.omega, params.content_params(), extra);
    row.content_upper = res.content_cover->value;
  }

  bool claim_seen = false, claim_ok = true;
  for (const auto& r : runs)
    if (r.claim1) {
      claim_seen = true;
      claim_ok = claim_ok && *r.claim1;
    }
  if (claim_seen) row.claim1 = claim_ok;

  res.report = row;
  if (runs.size() == 1) res.lambda0 = ctxs.front().lambda0;
  return out;
}

std::vector<PieceContext> build_pieces(const MetricMeasureSpace& space, const ArrayXd& u,
                                       const ApproxParams& params) {
  const double s = params.smoothness.s;
  std::vector<PieceContext> ctxs;
  if (params.support_center) {
    const Index x0 = *params.support_center;
    if (x0 < 0 || x0 >= space.size()) throw InputError("support center out of range");
    FractionalGradient G = canonical_fractional_gradient(space, u, s);
    ctxs.push_back(make_piece(space, u, std::move(G), params, x0));
    return ctxs;
  }
  const FractionalGradient G = canonical_fractional_gradient(space, u, s);
  const Localization loc = localize(space);
  for (size_t j = 0; j < loc.centers.size(); ++j) {
    const Index a = loc.centers[j];
    const ArrayXd psi = loc.psi.row(static_cast<Index>(j)).transpose().array();
    const ArrayXd uj = u * psi;
    const std::vector<Index> supp = space.ball(a, 1.0);
    const FractionalGradient Gj =
        leibniz_gradient(space, u, G, psi, supp, s, loc.lip[j]);
    ctxs.push_back(make_piece(space, uj, Gj, params, a));
  }
  return ctxs;
}

}  // namespace

ScheduleResult approximate(const MetricMeasureSpace& space, const ArrayXd& u,
                           const ApproxParams& params, const std::vector<double>& lambdas) {
  params.validate();
  if (lambdas.empty()) throw InputError("approximate: lambda schedule is empty");
  for (double l : lambdas)
    if (!(l > 0.0)) throw InputError("approximate: lambda must be positive");

  const std::vector<PieceContext> ctxs = build_pieces(space, u, params);
  const double c_D = estimate_doubling_constant(space);

  ScheduleResult sched;
  sched.lambdas = lambdas;
  if (ctxs.size() == 1) sched.lambda0 = ctxs.front().lambda0;

  std::vector<Assembled> assembled;
  for (double lambda : lambdas) {
    std::vector<PieceRun> runs;
    for (const auto& ctx : ctxs) {
      PieceRun r = run_piece(space, ctx, params, lambda, c_D);
      if (r.full_bad_set) {
        std::ostringstream os;
        os << "approximate: the bad set at lambda = " << lambda
           << " is the whole space; raise lambda";
        throw InputError(os.str());
      }
      runs.push_back(std::move(r));
    }
    assembled.push_back(assemble(space, u, params, ctxs, runs, lambda));
  }

  double c_cap = 0.0;
  for (const auto& a : assembled) c_cap = std::max(c_cap, a.result.report.c_diff);
  for (auto& a : assembled) {
    LambdaRow row = a.result.report;
    row.diff_norm_upper = a.lp_part + c_cap * a.seq_h;
    a.result.report = row;
    sched.rows.push_back(row);
    sched.identity_all = sched.identity_all && row.identity_off_omega;
    if (row.claim1) sched.claim1_all = sched.claim1_all && *row.claim1;
    sched.runs.push_back(std::move(a.result));
  }
  return sched;
}

ApproxResult approximate_epsilon(const MetricMeasureSpace& space, const ArrayXd& u,
                                 const ApproxParams& params, double epsilon) {
  params.validate();
  if (!(epsilon > 0.0)) throw InputError("approximate: epsilon must be positive");

  const std::vector<PieceContext> ctxs = build_pieces(space, u, params);
  const double c_D = estimate_doubling_constant(space);
  const double r = std::min(1.0, params.smoothness.effective_q() / params.smoothness.p);
  const bool single = ctxs.size() == 1;

  std::vector<PieceRun> runs;
  double lambda_used = 0.0;
  for (size_t j = 0; j < ctxs.size(); ++j) {
    const PieceContext& ctx = ctxs[j];
    const double budget_norm =
        single ? epsilon : std::pow(2.0, -static_cast<double>(j + 1)) * epsilon;
    const double budget_content =
        single ? epsilon : std::pow(2.0, -static_cast<double>(j + 1) / r) * epsilon;

    double lambda = std::isfinite(ctx.lambda0) && ctx.lambda0 > 0.0 ? ctx.lambda0 * (1.0 + 0x1.0p-20)
                                                                    : 1.0;
    PieceRun chosen;
    for (;;) {
      PieceRun run = run_piece(space, ctx, params, lambda, c_D);
      if (!run.full_bad_set) {
        const double diff_upper =
            lp_norm(space, run.lp_bound, params.smoothness.p) +
            run.c_diff * sequence_norm(space, run.h, params.smoothness.p,
                                       params.smoothness.effective_q(),
                                       params.smoothness.family == SmoothnessParams::Family::Besov
                                           ? NormMode::LqOfLp
                                           : NormMode::LpOfLq);
        const double content = run.cover ? run.cover->value : 0.0;
        if (diff_upper < budget_norm && content < budget_content) {
          chosen = std::move(run);
          break;
        }
      }
      lambda *= 2.0;
      if (lambda > std::max(ctx.sharp_max, 1.0) * 4.0 && lambda > ctx.lambda0) {
        // Above the sharp maximum the bad set is empty and both budgets are met.
        chosen = run_piece(space, ctx, params, lambda, c_D);
        break;
      }
    }
    lambda_used = std::max(lambda_used, lambda);
    runs.push_back(std::move(chosen));
  }
  Assembled a = assemble(space, u, params, ctxs, runs, lambda_used);
  return std::move(a.result);
}

}  // namespace lusin
