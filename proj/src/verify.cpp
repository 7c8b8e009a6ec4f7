#include "lusin/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <sstream>

namespace lusin::verify {

namespace {

constexpr double kTol = 1e-12;

bool leq(double a, double b, double tol = kTol) {
  return a <= b + tol * std::max({1.0, std::abs(a), std::abs(b)});
}

bool close(double a, double b, double tol = kTol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require(Violations& out, bool ok, const std::string& msg) {
  if (!ok) out.push_back(msg);
}

std::vector<Index> random_subset(Rng& rng, Index n, Index min_size) {
  std::vector<Index> out;
  for (Index i = 0; i < n; ++i)
    if (rng.chance(0.5)) out.push_back(i);
  while (static_cast<Index>(out.size()) < min_size) {
    const Index x = static_cast<Index>(rng.uniform_int(0, n - 1));
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Violations median_properties(const MetricMeasureSpace& space, const ArrayXd& u,
                             const ArrayXd& v, double gamma, Rng& rng, Fault fault) {
  Violations out;
  const Index n = space.size();
  std::vector<Index> A = random_subset(rng, n, 1);
  std::vector<Index> B = A;
  for (Index i = 0; i < n; ++i)
    if (std::find(B.begin(), B.end(), i) == B.end() && rng.chance(0.4)) B.push_back(i);
  std::sort(B.begin(), B.end());

  double muA = 0.0, muB = 0.0;
  for (Index x : A) muA += space.weight(x);
  for (Index x : B) muB += space.weight(x);

  // (1) subset: m^g_u(A) <= m^{g/c}_u(B), c = mu(B)/mu(A)
  {
    const double c = muB / muA;
    const double lhs = gamma_median(space, u, A, gamma);
    const double rhs = gamma_median(space, u, B, gamma / c);
    require(out, leq(lhs, rhs), "median (1) subset: " + fmt(lhs) + " > " + fmt(rhs));
  }
  // (2) monotone in the function
  {
    const ArrayXd w = u.max(v);
    require(out, leq(gamma_median(space, u, A, gamma), gamma_median(space, w, A, gamma)),
            "median (2) pointwise monotonicity failed");
  }
  // (3) monotone in gamma
  require(out,
          leq(gamma_median(space, u, A, gamma), gamma_median(space, u, A, gamma / 2.0)),
          "median (3) gamma monotonicity failed");
  // (4) shift invariance
  {
    const double c = 1.75;
    const double lhs = gamma_median(space, u, A, gamma) + c;
    double rhs = gamma_median(space, ArrayXd(u + c), A, gamma);
    if (fault == Fault::TamperMedian) rhs += 1e-3;
    require(out, close(lhs, rhs), "median (4) shift: " + fmt(lhs) + " != " + fmt(rhs));
  }
  // (5) |m_u| <= m_{|u|}
  require(out,
          leq(std::abs(gamma_median(space, u, A, gamma)),
              gamma_median(space, ArrayXd(u.abs()), A, gamma)),
          "median (5) absolute bound failed");
  // (6) subadditivity at gamma/2
  require(out,
          leq(gamma_median(space, ArrayXd(u + v), A, gamma),
              gamma_median(space, u, A, gamma / 2.0) + gamma_median(space, v, A, gamma / 2.0)),
          "median (6) sum bound failed");
  // (7) against p-means
  for (double p : {0.5, 1.0, 2.0}) {
    double mean = 0.0;
    for (Index x : A) mean += space.weight(x) * std::pow(std::abs(u[x]), p);
    mean /= muA;
    require(out,
            leq(gamma_median(space, ArrayXd(u.abs()), A, gamma),
                std::pow(mean / gamma, 1.0 / p)),
            "median (7) p-mean bound failed at p = " + fmt(p));
  }
  // (8) singleton ball below the isolation scale
  if (n > 1) {
    const Index x = A.front();
    const double iso = space.neighbor_distances(x)[1];
    const double med = gamma_median(space, u, space.ball(x, iso / 2.0), gamma);
    require(out, med == u[x], "median (8) isolation-scale median is not u(x) exactly");
  }
  // two-sided deviation remark, factor exactly 2
  {
    const double dev = min_median_deviation(space, u, A, gamma);
    const double m = gamma_median(space, u, A, gamma);
    const double mid = gamma_median(space, ArrayXd((u - m).abs()), A, gamma);
    require(out, leq(dev, mid) && leq(mid, 2.0 * dev),
            "two-sided deviation failed: dev=" + fmt(dev) + " mid=" + fmt(mid));
  }
  return out;
}

Violations maximal_sandwich(const MetricMeasureSpace& space, const ArrayXd& u, double gamma) {
  Violations out;
  const ArrayXd M = median_maximal(space, u, gamma);
  for (Index x = 0; x < space.size(); ++x)
    require(out, leq(std::abs(u[x]), M[x]), "maximal sandwich lower bound failed");
  for (double p : {0.5, 1.0, 2.0}) {
    const ArrayXd Mavg = average_maximal(space, ArrayXd(u.abs().pow(p)));
    for (Index x = 0; x < space.size(); ++x)
      require(out, leq(M[x], std::pow(Mavg[x] / gamma, 1.0 / p)),
              "maximal sandwich upper bound failed at p = " + fmt(p));
  }
  return out;
}

Violations sharp_comparability(const MetricMeasureSpace& space, const ArrayXd& u, double gamma,
                               double beta, double R) {
  Violations out;
  const double c_D = estimate_doubling_constant(space);
  MedianParams med{gamma};
  const ArrayXd cen = sharp_median_maximal(space, u, {beta, R, true}, med);
  const ArrayXd unc = sharp_median_maximal(space, u, {beta, R, false}, med);
  const ArrayXd cen2 = sharp_median_maximal(space, u, {beta, 2.0 * R, true}, {gamma / c_D});
  const double dil = std::pow(2.0, beta);
  for (Index x = 0; x < space.size(); ++x) {
    require(out, leq(cen[x], unc[x]),
            "sharp comparability: centered > uncentered at x = " + fmt(double(x)));
    require(out, leq(unc[x], dil * cen2[x]),
            "sharp comparability: uncentered " + fmt(unc[x]) + " > 2^beta * shrunk centered " +
                fmt(dil * cen2[x]) + " at x = " + fmt(double(x)));
  }
  return out;
}

Violations poincare(const MetricMeasureSpace& space, const ArrayXd& u, double s, double gamma) {
  Violations out;
  const FractionalGradient G = canonical_fractional_gradient(space, u, s);
  const HypothesisReport rep = annulus_density(space);
  const ScaleGrid grid = G.grid;
  const double c_A = std::isnan(rep.c_A) ? 1.0 : rep.c_A;
  const double C = std::max(std::pow(2.0, 3.0 * s + 1.0),
                            4.0 * std::max(c_A, rep.c_D * rep.c_D));
  const Index n = space.size();

  for (int i = grid.k_min; i <= grid.k_max; ++i) {
    const double r = std::ldexp(1.0, -i);
    if (4.0 * r > space.diameter()) continue;
    for (Index x = 0; x < n; ++x) {
      if (space.ball_count(x, 4.0 * r) <= space.ball_count(x, 2.0 * r)) continue;
      const auto B1 = space.ball(x, r);
      const auto B2 = space.ball(x, 4.0 * r);
      const double dev = min_median_deviation(space, u, B1, gamma);
      double sum = 0.0;
      for (int k = i - 3; k <= i; ++k) {
        if (!grid.contains(k)) continue;
        const ArrayXd gk = G.values.row(grid.row(k)).transpose().array();
        sum += gamma_median(space, gk, B2, gamma / C);
      }
      const double rhs = C * std::pow(2.0, -double(i) * s) * sum;
      require(out, leq(dev, rhs, 1e-9),
              "median Poincare failed at x=" + fmt(double(x)) + " i=" + fmt(double(i)) +
                  ": " + fmt(dev) + " > " + fmt(rhs));
    }
  }

  // Simple form with the explicit constant 2^{s+1} for a plain s-gradient.
  const ArrayXd g = sup_gradient(G);
  if (!verify_s_gradient(space, u, g, s).empty())
    out.push_back("poincare: sup_k g_k failed the plain s-gradient check");
  const double c_simple = std::pow(2.0, s + 1.0);
  for (Index x = 0; x < n; ++x) {
    const auto& dist = space.neighbor_distances(x);
    std::vector<double> radii;
    for (double t : dist)
      if (t > 0.0) radii.push_back(t);
    radii.push_back(space.diameter() + 1.0);
    for (double r : radii) {
      const auto B = space.ball(x, r);
      const double dev = min_median_deviation(space, u, B, gamma);
      const double rhs = c_simple * std::pow(r, s) * gamma_median(space, g, B, gamma);
      require(out, leq(dev, rhs),
              "simple median Poincare (2^{s+1}) failed at x=" + fmt(double(x)) +
                  " r=" + fmt(r));
    }
  }
  return out;
}

Violations space_properties(const MetricMeasureSpace& space) {
  Violations out;
  const Index n = space.size();
  const double c_D = estimate_doubling_constant(space);
  for (Index x = 0; x < n; ++x) {
    const auto& dist = space.neighbor_distances(x);
    double prev = 0.0;
    Index prev_count = 0;
    for (double t : dist) {
      if (t <= 0.0) continue;
      const Index c1 = space.ball_count(x, t);
      require(out, c1 >= prev_count, "ball monotonicity failed");
      prev_count = c1;
      prev = t;
      for (double r : {t, t / 2.0}) {
        const double lo = space.ball_measure(x, r);
        const double hi = space.ball_measure(x, 2.0 * r);
        require(out, leq(hi, c_D * lo), "doubling report exactness failed");
      }
    }
    (void)prev;
  }
  const HypothesisReport rep = annulus_density(space);
  const double nonempty = static_cast<double>(rep.tested) -
                          static_cast<double>(rep.empty_annuli.size());
  require(out,
          rep.tested == 0 ? rep.spheres_ok == 0.0 && rep.empty_annuli.empty()
                          : close(rep.spheres_ok * static_cast<double>(rep.tested), nonempty),
          "annulus bookkeeping: spheres_ok and empty_annuli disagree");
  require(out, rep.c_D >= 1.0 && (std::isnan(rep.c_A) || rep.c_A >= 1.0),
          "hypothesis report constants below 1");
  return out;
}

Violations gradient_properties(const MetricMeasureSpace& space, const ArrayXd& u, double p,
                               double q, Rng& rng) {
  Violations out;
  const Index n = space.size();
  for (double s : {0.25, 0.5, 0.75, 1.0}) {
    const FractionalGradient G = canonical_fractional_gradient(space, u, s);
    require(out, verify_fractional_gradient(space, u, G, s).empty(),
            "canonical gradient admissibility failed at s = " + fmt(s));
    FractionalGradient G2 = G;
    G2.values *= 2.0;
    require(out, verify_fractional_gradient(space, u, G2, s).empty(),
            "doubled canonical gradient rejected (upward closure)");
    const double a = -2.5;
    const FractionalGradient Ga = canonical_fractional_gradient(space, ArrayXd(a * u), s);
    bool homog = Ga.values.rows() == G.values.rows();
    if (homog)
      for (int r = 0; r < G.grid.levels() && homog; ++r)
        for (Index x = 0; x < n && homog; ++x)
          homog = close(Ga.values(r, x), std::abs(a) * G.values(r, x));
    require(out, homog, "canonical gradient 1-homogeneity failed at s = " + fmt(s));
    if (n > 1 && (u.maxCoeff() != u.minCoeff())) {
      const FractionalGradient Z = FractionalGradient::zero(G.grid, n);
      require(out, !verify_fractional_gradient(space, u, Z, s).empty(),
              "zero gradient accepted for nonconstant u");
    }
  }

  for (double r : {0.3, 0.7, 1.0}) {
    double sum = 0.0, sum_r = 0.0;
    const int m = static_cast<int>(rng.uniform_int(1, 12));
    for (int i = 0; i < m; ++i) {
      const double a = rng.uniform(0.0, 3.0);
      sum += a;
      sum_r += std::pow(a, r);
    }
    require(out, leq(std::pow(sum, r), sum_r), "power inequality failed at r = " + fmt(r));
  }

  const double s0 = 0.5;
  const FractionalGradient G = canonical_fractional_gradient(space, u, s0);
  const double qs[] = {0.5, 1.0, 2.0, std::numeric_limits<double>::infinity()};
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      for (NormMode mode : {NormMode::LqOfLp, NormMode::LpOfLq})
        require(out,
                leq(sequence_norm(space, G, p, qs[b], mode),
                    sequence_norm(space, G, p, qs[a], mode)),
                "l^q monotonicity of sequence norms failed");

  // Leibniz rule on a tent cutoff (and on the constant-1 edge case).
  {
    const Index c = static_cast<Index>(rng.uniform_int(0, n - 1));
    const double rho = std::max(space.min_positive_distance(),
                                0.5 * space.diameter() * rng.uniform(0.5, 1.0));
    ArrayXd phi(n);
    for (Index x = 0; x < n; ++x)
      phi[x] = std::clamp(1.0 - space.distance(x, c) / rho, 0.0, 1.0);
    std::vector<Index> supp;
    for (Index x = 0; x < n; ++x)
      if (phi[x] != 0.0) supp.push_back(x);
    const FractionalGradient Gl = leibniz_gradient(space, u, G, phi, supp, s0);
    require(out, verify_fractional_gradient(space, ArrayXd(u * phi), Gl, s0, 1e-9).empty(),
            "leibniz gradient admissibility failed");

    ArrayXd ones = ArrayXd::Ones(n);
    std::vector<Index> all(static_cast<size_t>(n));
    for (Index x = 0; x < n; ++x) all[static_cast<size_t>(x)] = x;
    const FractionalGradient G1 = leibniz_gradient(space, u, G, ones, all, s0);
    require(out, verify_fractional_gradient(space, u, G1, s0, 1e-9).empty(),
            "leibniz gradient failed for the unit cutoff");
  }

  for (auto [a, b] : {std::pair{2.0, 1.0}, {2.0, 0.5}, {4.0, 1.7}}) {
    std::vector<double> c(static_cast<size_t>(rng.uniform_int(1, 40)));
    for (auto& v : c) v = rng.chance(0.3) ? 0.0 : rng.uniform(0.0, 2.0);
    require(out, leq(summing_lemma_check(a, b, c), summing_lemma_constant(a, b)),
            "summing lemma ratio exceeded C(a,b) at a=" + fmt(a) + " b=" + fmt(b));
  }

  // Absolute-continuity surrogate: restricted norms shrink with the set.
  {
    std::vector<char> mask(static_cast<size_t>(n), 1);
    double prev_lq = sequence_norm(space, G, p, q, NormMode::LqOfLp, &mask);
    double prev_lp = sequence_norm(space, G, p, q, NormMode::LpOfLq, &mask);
    std::vector<Index> alive(static_cast<size_t>(n));
    for (Index x = 0; x < n; ++x) alive[static_cast<size_t>(x)] = x;
    while (!alive.empty()) {
      const size_t drop = static_cast<size_t>(rng.uniform_int(0, static_cast<long>(alive.size()) - 1));
      mask[static_cast<size_t>(alive[drop])] = 0;
      alive.erase(alive.begin() + static_cast<long>(drop));
      const double cur_lq = sequence_norm(space, G, p, q, NormMode::LqOfLp, &mask);
      const double cur_lp = sequence_norm(space, G, p, q, NormMode::LpOfLq, &mask);
      require(out, cur_lq <= prev_lq && cur_lp <= prev_lp,
              "restricted sequence norm is not monotone under set shrinking");
      prev_lq = cur_lq;
      prev_lp = cur_lp;
    }
    require(out, prev_lq == 0.0 && prev_lp == 0.0,
            "restricted sequence norm does not vanish on the empty set");
  }
  return out;
}

Violations content_properties(const MetricMeasureSpace& space, const std::vector<Index>& E,
                              const ContentParams& params, Rng& rng) {
  Violations out;
  if (E.empty()) return out;
  BallCover cover;
  try {
    cover = netrusov_content_upper(space, E, params);
  } catch (const std::exception& e) {
    out.push_back(std::string("content upper bound failed: ") + e.what());
    return out;
  }
  require(out, cover_covers(space, cover, E), "returned cover does not cover E");
  for (const auto& b : cover.balls)
    require(out, b.radius > 0.0 && b.radius <= params.R, "cover ball radius outside (0, R]");
  require(out, close(cover.value, cover_value(space, cover.balls, params)),
          "cover value is not recomputable from its balls");

  double muE = 0.0;
  for (Index e : E) muE += space.weight(e);
  const double C = measure_bound_constant(params);
  if (std::isfinite(C))
    require(out, leq(muE, C * cover.value),
            "measure bound failed: mu(E)=" + fmt(muE) + " > C*value=" + fmt(C * cover.value));

  // Combination bound (the l^theta aggregation estimate) on a random split.
  if (E.size() >= 2) {
    std::vector<Index> E1, E2;
    for (Index e : E) (rng.chance(0.5) ? E1 : E2).push_back(e);
    if (!E1.empty() && !E2.empty()) {
      const BallCover c1 = netrusov_content_upper(space, E1, params);
      const BallCover c2 = netrusov_content_upper(space, E2, params);
      try {
        const BallCover both = combine_covers(space, {c1, c2});
        require(out, cover_covers(space, both, E), "combined cover misses part of E");
      } catch (const CheckError& e) {
        out.push_back(std::string("combine_covers postcondition: ") + e.what());
      }
      // Subset monotonicity with a shared menu: the restriction of E's cover
      // to balls meeting E1 is offered as a candidate for E1.
      std::vector<CoverBall> restricted;
      for (const auto& b : cover.balls) {
        const auto pts = space.ball(b.center, b.radius);
        for (Index e : E1)
          if (std::binary_search(pts.begin(), pts.end(), e)) {
            restricted.push_back(b);
            break;
          }
      }
      if (!restricted.empty()) {
        const BallCover rc = make_cover(space, std::move(restricted), params);
        const BallCover c1m = netrusov_content_upper(space, E1, params, {&rc});
        require(out, leq(c1m.value, cover.value),
                "subset monotonicity failed: value(E1)=" + fmt(c1m.value) + " > value(E)=" +
                    fmt(cover.value));
      }
    }
  }

  // 5r postconditions on a random family (checked inside five_r_cover).
  {
    std::vector<CoverBall> family;
    const int m = static_cast<int>(rng.uniform_int(1, 12));
    for (int i = 0; i < m; ++i) {
      const Index c = static_cast<Index>(rng.uniform_int(0, space.size() - 1));
      const double r =
          rng.uniform(0.5, 2.0) * std::max(space.min_positive_distance(), 1e-3);
      family.push_back({c, r});
    }
    try {
      const auto kept = five_r_cover(space, family);
      std::vector<char> claimed(static_cast<size_t>(space.size()), 0);
      for (int k : kept)
        for (Index y : space.ball(family[static_cast<size_t>(k)].center,
                                  family[static_cast<size_t>(k)].radius)) {
          require(out, !claimed[static_cast<size_t>(y)], "5r kept balls are not disjoint");
          claimed[static_cast<size_t>(y)] = 1;
        }
    } catch (const CheckError& e) {
      out.push_back(std::string("5r postcondition: ") + e.what());
    }
  }

  // theta = 1 definitional identity.
  if (params.theta == 1.0) {
    const BallCover hc = hausdorff_content_upper(space, E, params.d, params.R);
    require(out, close(hc.value, cover.value), "theta = 1 hausdorff/netrusov mismatch");
  }
  return out;
}

Violations whitney_properties(const MetricMeasureSpace& space, const std::vector<Index>& U) {
  Violations out;
  WhitneyDecomposition W;
  try {
    W = whitney_cover(space, U);  // properties (1)-(6) checked inside
  } catch (const CheckError& e) {
    out.push_back(std::string("whitney postcondition: ") + e.what());
    return out;
  }
  PartitionOfUnity P;
  try {
    P = partition_of_unity(space, W);
  } catch (const CheckError& e) {
    out.push_back(std::string("partition postcondition: ") + e.what());
    return out;
  }
  const Index n = space.size();
  for (Index x = 0; x < n; ++x) {
    double sum = 0.0;
    for (Index i = 0; i < W.ball_count(); ++i) {
      const double f = P.phi(i, x);
      require(out, f >= 0.0 && f <= 1.0, "partition function outside [0, 1]");
      if (f > 0.0)
        require(out,
                space.distance(x, W.centers[static_cast<size_t>(i)]) <
                    2.0 * W.radii[static_cast<size_t>(i)],
                "partition function supported outside 2B_i");
      sum += f;
    }
    const double want = W.in_u[static_cast<size_t>(x)] ? 1.0 : 0.0;
    require(out, std::abs(sum - want) <= 1e-12,
            "partition identity failed at x = " + fmt(double(x)) + ": sum = " + fmt(sum));
  }
  require(out, std::isfinite(P.K), "partition Lipschitz constant is not finite");
  require(out, W.overlap_constant >= 1, "overlap constant must be at least 1");
  return out;
}

Violations deviation_oracle(const MetricMeasureSpace& space, const ArrayXd& u, double gamma) {
  Violations out;
  const Index n = space.size();
  std::vector<Index> A(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) A[static_cast<size_t>(i)] = i;
  const double sweep = min_median_deviation(space, u, A, gamma);
  std::vector<double> cands;
  for (Index i = 0; i < n; ++i) {
    cands.push_back(u[i]);
    for (Index j = i + 1; j < n; ++j) cands.push_back((u[i] + u[j]) / 2.0);
  }
  double brute = std::numeric_limits<double>::infinity();
  for (double c : cands)
    brute = std::min(brute, gamma_median(space, ArrayXd((u - c).abs()), A, gamma));
  if (!close(sweep, brute))
    out.push_back("deviation sweep " + fmt(sweep) + " != brute force " + fmt(brute));
  return out;
}

Violations extension_oracle(const MetricMeasureSpace& space, const ArrayXd& u,
                            const std::vector<Index>& E, double gamma) {
  Violations out;
  if (E.empty()) return out;
  const ArrayXd v = whitney_extension(space, u, E, gamma);

  // Straight-line re-evaluation of the extension formula.
  const WhitneyDecomposition W = whitney_cover(space, E);
  const PartitionOfUnity P = partition_of_unity(space, W);
  const Index m = W.ball_count();
  std::vector<double> med(static_cast<size_t>(m));
  for (Index i = 0; i < m; ++i) {
    const auto pts = space.ball(W.centers[static_cast<size_t>(i)],
                                2.0 * W.radii[static_cast<size_t>(i)]);
    std::vector<std::pair<double, double>> vw;
    for (Index x : pts) vw.push_back({u[x], space.weight(x)});
    std::sort(vw.begin(), vw.end());
    double total = 0.0;
    for (auto& [val, w] : vw) total += w;
    // smallest sample value whose strict-exceedance weight drops below gamma*mu
    double pick = vw.back().first;
    for (size_t t = vw.size(); t-- > 0;) {
      double strictly = 0.0;
      for (size_t z = t + 1; z < vw.size(); ++z)
        if (vw[z].first != vw[t].first) strictly += vw[z].second;
      if (strictly < gamma * total) pick = vw[t].first;
    }
    med[static_cast<size_t>(i)] = pick;
  }
  for (Index x = 0; x < space.size(); ++x) {
    double want;
    if (!W.in_u[static_cast<size_t>(x)]) {
      want = u[x];
    } else {
      double acc = 0.0;
      for (Index i = 0; i < m; ++i) acc += P.phi(i, x) * med[static_cast<size_t>(i)];
      want = acc;
    }
    if (std::memcmp(&want, &v[x], sizeof(double)) != 0) {
      out.push_back("extension re-evaluation differs bitwise at x = " + fmt(double(x)) + ": " +
                    fmt(v[x]) + " vs " + fmt(want));
      break;
    }
  }
  return out;
}

NormChain gradient_norm_chain(const MetricMeasureSpace& space, const FractionalGradient& G,
                              const FractionalGradient& gtilde, const ApproxParams& params) {
  NormChain chain;
  const double s = params.smoothness.s;
  const double p = params.smoothness.p;
  const double q = params.smoothness.effective_q();
  const double delta = std::min(s, 1.0 - s);
  const bool besov = params.smoothness.family == SmoothnessParams::Family::Besov;
  const NormMode mode = besov ? NormMode::LqOfLp : NormMode::LpOfLq;
  const double gamma_shrunk = params.median.gamma / params.c_E;

  const int rows = G.grid.levels();
  FractionalGradient M = FractionalGradient::zero(G.grid, space.size());
  for (int r = 0; r < rows; ++r) {
    const ArrayXd level = G.values.row(r).transpose().array();
    M.values.row(r) = median_maximal(space, level, gamma_shrunk).matrix().transpose();
  }

  chain.lhs = sequence_norm(space, gtilde, p, q, mode);
  const double base = sequence_norm(space, G, p, q, mode);

  double a_factor;
  double c_M = 1.0;
  if (besov) {
    a_factor = std::pow(summing_lemma_constant(std::pow(2.0, delta * p), q / p), 1.0 / q);
    for (int r = 0; r < rows; ++r) {
      const ArrayXd gl = G.values.row(r).transpose().array();
      const ArrayXd ml = M.values.row(r).transpose().array();
      const double den = lp_norm(space, gl, p);
      if (den > 0.0) c_M = std::max(c_M, lp_norm(space, ml, p) / den);
    }
  } else if (std::isfinite(q)) {
    const double t = std::pow(2.0, -delta * q);
    a_factor = std::pow((1.0 + t) / (1.0 - t), 1.0 / q);
    const double den = sequence_norm(space, G, p, q, mode);
    if (den > 0.0) c_M = std::max(c_M, sequence_norm(space, M, p, q, mode) / den);
  } else {
    a_factor = 1.0;
    const double den = sequence_norm(space, G, p, q, mode);
    if (den > 0.0) c_M = std::max(c_M, sequence_norm(space, M, p, q, mode) / den);
  }
  chain.c_norm = a_factor * c_M;
  chain.bound = chain.c_norm * base;
  return chain;
}

Violations pipeline_properties(const MetricMeasureSpace& space, const ArrayXd& u,
                               const ApproxParams& params, const std::vector<double>& lambdas) {
  Violations out;
  ScheduleResult sched;
  try {
    sched = approximate(space, u, params, lambdas);
  } catch (const std::exception& e) {
    out.push_back(std::string("pipeline failed: ") + e.what());
    return out;
  }
  const double s = params.smoothness.s;
  require(out, sched.identity_all, "identity off the bad set failed");
  require(out, sched.claim1_all, "claim 1 containment failed");

  for (size_t i = 0; i + 1 < sched.runs.size(); ++i) {
    if (!(sched.lambdas[i] <= sched.lambdas[i + 1])) continue;
    const auto& big = sched.runs[i].omega_mask;
    const auto& small = sched.runs[i + 1].omega_mask;
    for (Index x = 0; x < space.size(); ++x)
      require(out, !small[static_cast<size_t>(x)] || big[static_cast<size_t>(x)],
              "bad sets are not nested along the schedule");
    require(out, sched.rows[i + 1].diff_norm_upper <= sched.rows[i].diff_norm_upper,
            "difference-norm upper bound increased along the schedule: " +
                fmt(sched.rows[i + 1].diff_norm_upper) + " > " +
                fmt(sched.rows[i].diff_norm_upper));
  }

  const ArrayXd sharp = bad_set_sharp(space, u, params);
  const double top = sharp.size() > 0 ? sharp.maxCoeff() : 0.0;
  require(out, bad_set(sharp, top + 1.0).empty(),
          "bad set is nonempty above the sharp maximum");

  for (size_t i = 0; i < sched.runs.size(); ++i) {
    const ApproxResult& run = sched.runs[i];
    const LambdaRow& row = sched.rows[i];
    if (std::isfinite(row.c_ext)) {
      FractionalGradient scaled = run.extension_gradient;
      scaled.values *= row.c_ext;
      require(out, verify_fractional_gradient(space, run.v, scaled, s, 1e-9).empty(),
              "scaled extension gradient fails admissibility for v");
    } else {
      out.push_back("extension gradient constant is infinite");
    }
    if (std::isfinite(row.c_diff)) {
      FractionalGradient scaled = run.difference_gradient;
      scaled.values *= row.c_diff;
      require(out,
              verify_fractional_gradient(space, ArrayXd(u - run.v), scaled, s, 1e-9).empty(),
              "scaled difference gradient fails admissibility for u - v");
    } else {
      out.push_back("difference gradient constant is infinite");
    }
    for (Index x = 0; x < space.size(); ++x)
      if (!run.omega_mask[static_cast<size_t>(x)])
        require(out, run.difference_gradient.values.col(x).isZero(0.0),
                "difference gradient does not vanish off the bad set");
  }

  // Norm chain for the compact path (single piece).
  if (params.support_center) {
    const FractionalGradient G = canonical_fractional_gradient(space, u, s);
    const NormChain chain =
        gradient_norm_chain(space, G, sched.runs.front().extension_gradient, params);
    require(out, leq(chain.lhs, chain.bound, 1e-9),
            "extension-gradient norm exceeds the summing-lemma chain bound: " +
                fmt(chain.lhs) + " > " + fmt(chain.bound));
  }
  return out;
}

Violations decay_slope(const std::vector<LambdaRow>& rows, double p, int& resolvable) {
  Violations out;
  resolvable = 0;
  for (size_t i = 0; i + 1 < rows.size(); ++i) {
    if (!close(rows[i + 1].lambda, 2.0 * rows[i].lambda, 1e-9)) continue;
    const double c1 = rows[i].content_upper, c2 = rows[i + 1].content_upper;
    if (!(c1 > 0.0) || !(c2 > 0.0)) continue;
    if (rows[i + 1].omega_size >= rows[i].omega_size) continue;  // bad-set plateau
    // A pair only resolves the decay law when the certificate responds to the
    // shrink; identical certificates mean both rows sit on the same saturated
    // cover (e.g. the R-capped global ball), which bounds both sets equally.
    if (!(c2 < c1)) continue;
    ++resolvable;
    const double slope = std::log2(c2 / c1);
    if (!(slope <= -0.8 * p + 1e-9))
      out.push_back("content decay slope " + fmt(slope) + " above -0.8p = " + fmt(-0.8 * p) +
                    " between lambda " + fmt(rows[i].lambda) + " and " + fmt(rows[i + 1].lambda));
  }
  return out;
}

Violations tl_hajlasz_consistency(const MetricMeasureSpace& space, const ArrayXd& u,
                                  const ApproxParams& tl_params, double lambda) {
  Violations out;
  ApproxParams tl = tl_params;
  tl.smoothness.family = SmoothnessParams::Family::TriebelLizorkin;
  tl.smoothness.q = std::numeric_limits<double>::infinity();
  ApproxParams hj = tl_params;
  hj.smoothness.family = SmoothnessParams::Family::Hajlasz;
  const ScheduleResult a = approximate(space, u, tl, {lambda});
  const ScheduleResult b = approximate(space, u, hj, {lambda});
  if (a.runs.front().omega != b.runs.front().omega) {
    out.push_back("TL(q=inf) and Hajlasz routes disagree on the bad set");
    return out;
  }
  const ArrayXd& va = a.runs.front().v;
  const ArrayXd& vb = b.runs.front().v;
  for (Index x = 0; x < space.size(); ++x)
    if (std::memcmp(&va[x], &vb[x], sizeof(double)) != 0) {
      out.push_back("TL(q=inf) and Hajlasz routes disagree on v at x = " + fmt(double(x)));
      return out;
    }
  return out;
}

// --- suite driver ------------------------------------------------------------

namespace {

MetricMeasureSpace random_space(Rng& rng, Index max_n, bool need_coords = false) {
  const Index n = static_cast<Index>(rng.uniform_int(2, max_n));
  const int kind = static_cast<int>(rng.uniform_int(0, need_coords ? 1 : 2));
  MetricSpec spec;
  switch (kind) {
    case 0:
      spec = gen_cloud(n, rng, 2, 4.0);
      break;
    case 1:
      spec = gen_cloud(n, rng, 3, 2.0);
      break;
    default:
      spec = gen_graph(n, rng);
      break;
  }
  return MetricMeasureSpace::build(spec, random_weights(n, rng));
}

double pick_gamma(Rng& rng) {
  const double g[] = {0.5, 0.375, 0.25, 0.125};
  return g[rng.uniform_int(0, 3)];
}

struct Instance {
  long index = 0;
  std::uint64_t seed = 0;
};

std::string tag(const std::string& suite, const Instance& inst, const std::string& msg) {
  return "[" + suite + " seed=" + std::to_string(inst.seed) +
         " instance=" + std::to_string(inst.index) + "] " + msg;
}

SuiteReport drive(const std::string& name, std::uint64_t seed, long count,
                  const std::function<Violations(Rng&, long, long&)>& one) {
  SuiteReport rep;
  rep.name = name;
  long skipped = 0;
  for (long i = 0; i < count; ++i) {
    Rng rng(seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(i + 1)));
    Instance inst{i, seed};
    for (const std::string& v : one(rng, i, skipped))
      rep.violations.push_back(tag(name, inst, v));
    ++rep.instances;
  }
  rep.skipped = skipped;
  return rep;
}

SuiteReport suite_space(std::uint64_t seed, long count) {
  return drive("space", seed, count, [](Rng& rng, long, long&) {
    return space_properties(random_space(rng, 24));
  });
}

SuiteReport suite_median(std::uint64_t seed, long count, Fault fault) {
  return drive("median", seed, count, [fault](Rng& rng, long i, long&) {
    const MetricMeasureSpace space = random_space(rng, 24);
    const Index n = space.size();
    const ArrayXd u = fn_random(n, rng, -2.0, 2.0);
    const ArrayXd v = fn_random(n, rng, -2.0, 2.0);
    const double gamma = pick_gamma(rng);
    Violations out = median_properties(space, u, v, gamma, rng, fault);
    for (auto& m : maximal_sandwich(space, u, gamma)) out.push_back(m);
    if (i % 4 == 0) {
      const double beta = rng.uniform(0.1, 0.9);
      const double R = rng.chance(0.5) ? 64.0 : space.diameter() / 2.0;
      for (auto& m : sharp_comparability(space, u, gamma, beta, R)) out.push_back(m);
    }
    if (n <= 16)
      for (auto& m : deviation_oracle(space, u, gamma)) out.push_back(m);
    return out;
  });
}

SuiteReport suite_gradient(std::uint64_t seed, long count) {
  return drive("gradient", seed, count, [](Rng& rng, long i, long& skipped) {
    Violations out;
    const MetricMeasureSpace space = random_space(rng, 20);
    const ArrayXd u = fn_random(space.size(), rng, -2.0, 2.0);
    const double ps[] = {0.5, 1.0, 2.0};
    const double p = ps[rng.uniform_int(0, 2)];
    const double q = ps[rng.uniform_int(0, 2)];
    out = gradient_properties(space, u, p, q, rng);
    if (i % 2 == 0) {
      // Poincare on unit-spacing fixtures, gated on spheres_ok = 1.
      const Index n_fix = (i % 4 == 0) ? 9 + 2 * (i % 12) : (3 + (i % 4)) * (3 + (i % 4));
      const MetricSpec spec = (i % 4 == 0) ? gen_line(n_fix) : gen_grid(3 + (i % 4));
      const MetricMeasureSpace fixture =
          MetricMeasureSpace::build(spec, random_weights(n_fix, rng));
      if (annulus_density(fixture).spheres_ok == 1.0) {
        const ArrayXd uf = fn_random(fixture.size(), rng, -1.0, 1.0);
        for (auto& m : poincare(fixture, uf, rng.chance(0.5) ? 0.5 : 0.75, pick_gamma(rng)))
          out.push_back(m);
      } else {
        ++skipped;
      }
    }
    return out;
  });
}

SuiteReport suite_content(std::uint64_t seed, long count) {
  return drive("content", seed, count, [](Rng& rng, long, long&) {
    const MetricMeasureSpace space = random_space(rng, 24);
    const std::vector<Index> E = random_subset(rng, space.size(), 1);
    const double ds[] = {0.0, 0.3, 1.0, 2.0};
    const double ts[] = {0.5, 1.0, 2.0};
    ContentParams params;
    params.d = ds[rng.uniform_int(0, 3)];
    params.theta = ts[rng.uniform_int(0, 2)];
    params.R = rng.chance(0.3) ? 4.0 : 64.0;
    return content_properties(space, E, params, rng);
  });
}

SuiteReport suite_whitney(std::uint64_t seed, long count) {
  return drive("whitney", seed, count, [](Rng& rng, long, long&) -> Violations {
    const MetricMeasureSpace space = random_space(rng, 32);
    if (space.size() < 2) return {};
    std::vector<Index> U = random_subset(rng, space.size(), 1);
    if (static_cast<Index>(U.size()) == space.size()) U.pop_back();
    if (U.empty()) return {};
    return whitney_properties(space, U);
  });
}

SuiteReport suite_approx(std::uint64_t seed, long count) {
  return drive("approx", seed, count, [](Rng& rng, long i, long&) {
    Violations out;
    const Index n = static_cast<Index>(rng.uniform_int(10, 40));
    const MetricSpec spec = gen_cloud(n, rng, 2, 4.0);
    const MetricMeasureSpace space = MetricMeasureSpace::build(spec, random_weights(n, rng));
    const Index x0 = static_cast<Index>(rng.uniform_int(0, n - 1));
    ArrayXd u = ArrayXd::Zero(n);
    for (Index x = 0; x < n; ++x)
      if (space.distance(x0, x) < 1.0) u[x] = rng.uniform(-2.0, 2.0);

    ApproxParams params;
    params.median.gamma = pick_gamma(rng);
    params.smoothness.s = rng.chance(0.5) ? 0.5 : 0.75;
    params.smoothness.p = rng.chance(0.5) ? 1.0 : 0.5;
    params.smoothness.q = rng.chance(0.5) ? 1.0 : 2.0;
    params.beta = params.smoothness.s / 2.0;
    switch (i % 3) {
      case 0:
        params.smoothness.family = SmoothnessParams::Family::Besov;
        break;
      case 1:
        params.smoothness.family = SmoothnessParams::Family::TriebelLizorkin;
        break;
      default:
        params.smoothness.family = SmoothnessParams::Family::Hajlasz;
        break;
    }
    params.support_center = x0;

    const double lambda0 = lambda_zero(space, u, x0, params);
    const double l1 = std::max(lambda0 * 1.01, 1e-6);
    out = pipeline_properties(space, u, params, {l1, 2.0 * l1, 4.0 * l1});

    if (i % 5 == 0)
      for (auto& m : tl_hajlasz_consistency(space, u, params, l1)) out.push_back(m);
    if (i % 7 == 0) {
      const ArrayXd sharp = bad_set_sharp(space, u, params);
      const auto E = bad_set(sharp, l1);
      if (!E.empty() && static_cast<Index>(E.size()) < n)
        for (auto& m : extension_oracle(space, u, E, params.median.gamma)) out.push_back(m);
    }
    return out;
  });
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"space", "median", "gradient", "content", "whitney", "approx"};
}

std::vector<SuiteReport> run_suites(const std::string& name, std::uint64_t seed, long count,
                                    Fault fault) {
  std::vector<SuiteReport> out;
  auto want = [&](const char* s) { return name == "all" || name == s; };
  bool known = name == "all";
  for (const auto& s : suite_names()) known = known || name == s;
  if (!known) throw InputError("unknown suite '" + name + "'");

  if (want("space")) out.push_back(suite_space(seed, count));
  if (want("median")) out.push_back(suite_median(seed, count, fault));
  if (want("gradient")) out.push_back(suite_gradient(seed, count));
  if (want("content")) out.push_back(suite_content(seed, count));
  if (want("whitney")) out.push_back(suite_whitney(seed, count));
  if (want("approx")) out.push_back(suite_approx(seed, count));
  return out;
}

}  // namespace lusin::verify
