#include "lusin/gradient.hpp"

#include <algorithm>
#include <cmath>

namespace lusin {

void SmoothnessParams::validate() const {
  if (!(s > 0.0) || s > 1.0) throw InputError("smoothness s must lie in (0, 1]");
  if (!(p > 0.0) || !std::isfinite(p)) throw InputError("p must lie in (0, infinity)");
  if (!(q > 0.0)) throw InputError("q must lie in (0, infinity]");
  if (family == Family::Besov && !std::isfinite(q))
    throw InputError("Besov scale requires finite q");
}

FractionalGradient canonical_fractional_gradient(const MetricMeasureSpace& space,
                                                 const ArrayXd& u, double s) {
  if (!(s > 0.0)) throw InputError("canonical gradient: s must be positive");
  const Index n = space.size();
  const ScaleGrid grid = scale_grid(space);
  FractionalGradient G = FractionalGradient::zero(grid, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double d = space.distance(i, j);
      const int k = level_of(d);
      const double v = 0.5 * std::abs(u[i] - u[j]) / std::pow(d, s);
      const int r = grid.row(k);
      G.values(r, i) = std::max(G.values(r, i), v);
      G.values(r, j) = std::max(G.values(r, j), v);
    }
  }
  return G;
}

std::vector<PairViolation> verify_fractional_gradient(const MetricMeasureSpace& space,
                                                      const ArrayXd& u,
                                                      const FractionalGradient& G, double s,
                                                      double rtol) {
  std::vector<PairViolation> out;
  const Index n = space.size();
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double d = space.distance(i, j);
      const int k = level_of(d);
      const double lhs = std::abs(u[i] - u[j]);
      const double rhs = std::pow(d, s) * (G.at(k, i) + G.at(k, j));
      if (lhs > rhs + rtol * std::max(1.0, lhs)) out.push_back({i, j, k, lhs, rhs});
    }
  }
  return out;
}

std::vector<PairViolation> verify_s_gradient(const MetricMeasureSpace& space, const ArrayXd& u,
                                             const ArrayXd& g, double s, double rtol) {
  std::vector<PairViolation> out;
  const Index n = space.size();
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double d = space.distance(i, j);
      const double lhs = std::abs(u[i] - u[j]);
      const double rhs = std::pow(d, s) * (g[i] + g[j]);
      if (lhs > rhs + rtol * std::max(1.0, lhs)) out.push_back({i, j, 0, lhs, rhs});
    }
  }
  return out;
}

double lp_norm(const MetricMeasureSpace& space, const ArrayXd& f, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw InputError("lp_norm: p must lie in (0, infinity)");
  double acc = 0.0;
  for (Index x = 0; x < space.size(); ++x)
    acc += space.weight(x) * std::pow(std::abs(f[x]), p);
  return std::pow(acc, 1.0 / p);
}

double lp_norm_masked(const MetricMeasureSpace& space, const ArrayXd& f, double p,
                      const std::vector<char>& mask) {
  if (!(p > 0.0) || !std::isfinite(p)) throw InputError("lp_norm: p must lie in (0, infinity)");
  double acc = 0.0;
  for (Index x = 0; x < space.size(); ++x)
    if (mask[static_cast<size_t>(x)]) acc += space.weight(x) * std::pow(std::abs(f[x]), p);
  return std::pow(acc, 1.0 / p);
}

double sequence_norm(const MetricMeasureSpace& space, const FractionalGradient& G, double p,
                     double q, NormMode mode, const std::vector<char>* mask) {
  if (!(p > 0.0) || !std::isfinite(p)) throw InputError("sequence_norm: p must lie in (0, infinity)");
  if (!(q > 0.0)) throw InputError("sequence_norm: q must lie in (0, infinity]");
  const Index n = space.size();
  const int rows = G.grid.levels();
  auto live = [&](Index x) { return mask == nullptr || (*mask)[static_cast<size_t>(x)]; };

  if (mode == NormMode::LqOfLp) {
    double acc_q = 0.0, sup_q = 0.0;
    for (int r = 0; r < rows; ++r) {
      double acc = 0.0;
      for (Index x = 0; x < n; ++x)
        if (live(x)) acc += space.weight(x) * std::pow(std::abs(G.values(r, x)), p);
      const double lp = std::pow(acc, 1.0 / p);
      if (std::isfinite(q))
        acc_q += std::pow(lp, q);
      else
        sup_q = std::max(sup_q, lp);
    }
    return std::isfinite(q) ? std::pow(acc_q, 1.0 / q) : sup_q;
  }

  double acc = 0.0;
  for (Index x = 0; x < n; ++x) {
    if (!live(x)) continue;
    double lq;
    if (std::isfinite(q)) {
      double s = 0.0;
      for (int r = 0; r < rows; ++r) s += std::pow(std::abs(G.values(r, x)), q);
      lq = std::pow(s, 1.0 / q);
    } else {
      lq = 0.0;
      for (int r = 0; r < rows; ++r) lq = std::max(lq, std::abs(G.values(r, x)));
    }
    acc += space.weight(x) * std::pow(lq, p);
  }
  return std::pow(acc, 1.0 / p);
}

double function_norm_upper(const MetricMeasureSpace& space, const ArrayXd& u,
                           const SmoothnessParams& params) {
  params.validate();
  const FractionalGradient G = canonical_fractional_gradient(space, u, params.s);
  const NormMode mode =
      params.family == SmoothnessParams::Family::Besov ? NormMode::LqOfLp : NormMode::LpOfLq;
  return lp_norm(space, u, params.p) +
         sequence_norm(space, G, params.p, params.effective_q(), mode);
}

FractionalGradient leibniz_gradient(const MetricMeasureSpace& space, const ArrayXd& u,
                                    const FractionalGradient& G, const ArrayXd& phi,
                                    const std::vector<Index>& support, double s,
                                    std::optional<double> lipschitz,
                                    std::optional<double> sup_norm) {
  const Index n = space.size();
  std::vector<char> declared(static_cast<size_t>(n), 0);
  for (Index x : support) declared[static_cast<size_t>(x)] = 1;
  for (Index x = 0; x < n; ++x)
    if (phi[x] != 0.0 && !declared[static_cast<size_t>(x)])
      throw InputError("leibniz_gradient: phi is nonzero outside the declared support (point " +
                       std::to_string(space.id_of(x)) + ")");

  double L = 0.0;
  if (lipschitz) {
    L = *lipschitz;
  } else {
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j)
        if (phi[i] != phi[j]) L = std::max(L, std::abs(phi[i] - phi[j]) / space.distance(i, j));
  }
  const double linf = sup_norm ? *sup_norm : phi.abs().maxCoeff();

  // 2^{k_L - 1} < L <= 2^{k_L}; below every grid scale, clamp.
  int k_L = G.grid.k_min;
  if (L > 0.0 && !G.grid.empty()) {
    int k = std::ilogb(L);
    if (std::ldexp(1.0, k) < L) ++k;  // now 2^{k-1} < L <= 2^k
    k_L = std::max(k, G.grid.k_min);
  }

  FractionalGradient out = FractionalGradient::zero(G.grid, n);
  for (int k = G.grid.k_min; k <= G.grid.k_max; ++k) {
    const int r = G.grid.row(k);
    for (Index x = 0; x < n; ++x) {
      if (phi[x] == 0.0) continue;
      const double gk = G.at(k, x);
      out.values(r, x) = k < k_L
                             ? (gk + std::pow(2.0, s * k + 2.0) * std::abs(u[x])) * linf
                             : gk * linf + std::pow(2.0, k * (s - 1.0)) * L * std::abs(u[x]);
    }
  }
  return out;
}

double summing_lemma_check(double a, double b, const std::vector<double>& c) {
  if (!(a > 1.0)) throw InputError("summing lemma: a must exceed 1");
  if (!(b > 0.0)) throw InputError("summing lemma: b must be positive");
  const long m = static_cast<long>(c.size());
  double rhs = 0.0;
  for (double v : c) {
    if (v < 0.0) throw InputError("summing lemma: sequence must be nonnegative");
    rhs += std::pow(v, b);
  }
  if (rhs == 0.0) return 0.0;
  double lhs = 0.0;
  for (long k = 0; k < m; ++k) {
    double inner = 0.0;
    for (long j = 0; j < m; ++j) inner += std::pow(a, -std::abs(static_cast<double>(j - k))) * c[static_cast<size_t>(j)];
    lhs += std::pow(inner, b);
  }
  return lhs / rhs;
}

double summing_lemma_constant(double a, double b) {
  if (!(a > 1.0) || !(b > 0.0)) throw InputError("summing lemma constant: need a > 1, b > 0");
  if (b <= 1.0) {
    const double t = std::pow(a, -b);
    return (1.0 + t) / (1.0 - t);
  }
  const double t = 1.0 / a;
  return std::pow((1.0 + t) / (1.0 - t), b);
}

ArrayXd sup_gradient(const FractionalGradient& G) {
  const Index n = G.values.cols();
  ArrayXd g = ArrayXd::Zero(n);
  for (int r = 0; r < G.grid.levels(); ++r)
    for (Index x = 0; x < n; ++x) g[x] = std::max(g[x], G.values(r, x));
  return g;
}

}  // namespace lusin
