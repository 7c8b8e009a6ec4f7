// Command-line front end: synthetic space generation, hypothesis/norm
// analysis, Hoelder approximation runs, content certificates and the
// property-suite runner.
//
// Exit codes: 0 success, 1 property violation, 2 input or hypothesis error.

#include <cmath>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lusin/approx.hpp"
#include "lusin/generators.hpp"
#include "lusin/io.hpp"
#include "lusin/verify.hpp"

namespace {

using namespace lusin;

constexpr Index kSizeGuard = 4096;

struct ParamFlags {
  double s = 0.5;
  double p = 1.0;
  double q = 1.0;
  double beta = 0.25;
  double gamma = 0.5;
  double cE = 1.0;
  double R = 64.0;
  std::string family = "besov";

  ApproxParams approx_params() const {
    ApproxParams params;
    params.smoothness.s = s;
    params.smoothness.p = p;
    params.smoothness.q = q;
    if (family == "besov") {
      params.smoothness.family = SmoothnessParams::Family::Besov;
    } else if (family == "tl") {
      params.smoothness.family = SmoothnessParams::Family::TriebelLizorkin;
    } else if (family == "hajlasz") {
      params.smoothness.family = SmoothnessParams::Family::Hajlasz;
    } else {
      throw InputError("unknown family '" + family + "' (expected besov|tl|hajlasz)");
    }
    params.beta = beta;
    params.median.gamma = gamma;
    params.c_E = cE;
    params.R_content = R;
    return params;
  }
};

void add_param_flags(CLI::App* cmd, ParamFlags& f) {
  cmd->add_option("--s", f.s, "smoothness exponent s in (0,1]");
  cmd->add_option("--p", f.p, "integrability exponent p in (0,inf)");
  cmd->add_option("--q", f.q, "summability exponent q in (0,inf); use inf via --family hajlasz");
  cmd->add_option("--beta", f.beta, "target Hoelder exponent");
  cmd->add_option("--gamma", f.gamma, "median parameter in (0,1/2]");
  cmd->add_option("--cE", f.cE, "bad-set shrinkage constant");
  cmd->add_option("--R", f.R, "content radius cap");
  cmd->add_option("--family", f.family, "besov | tl | hajlasz");
}

ArrayXd sample_function(const std::string& fn, const MetricMeasureSpace& space, double s,
                        std::uint64_t seed) {
  const Index n = space.size();
  if (fn == "step") return fn_step(n);
  if (fn == "bump") return fn_bump(space, s);
  if (fn == "indicator") return fn_indicator(n, n / 2);
  if (fn == "random") {
    Rng rng(seed + 0x5eedf00dull);
    return fn_random(n, rng);
  }
  if (fn == "none") return ArrayXd::Zero(n);
  throw InputError("unknown function kind '" + fn + "'");
}

int cmd_gen(const std::string& kind, Index n, int level, std::uint64_t seed,
            const std::string& fn, const std::string& weights, const std::string& out) {
  Rng rng(seed);
  SpaceFile file;
  if (kind == "line") {
    file.spec = gen_line(n);
  } else if (kind == "grid") {
    file.spec = gen_grid(n);
  } else if (kind == "cantor") {
    file.spec = gen_cantor(level);
  } else if (kind == "graph") {
    file.spec = gen_graph(n, rng);
  } else if (kind == "random_cloud") {
    file.spec = gen_cloud(n, rng, 2, 4.0);
  } else {
    throw InputError("unknown space kind '" + kind + "'");
  }
  Index total = 0;
  switch (file.spec.kind) {
    case MetricSpec::Kind::Euclidean:
    case MetricSpec::Kind::Linf:
      total = file.spec.coords.rows();
      break;
    case MetricSpec::Kind::Matrix:
      total = file.spec.matrix.rows();
      break;
    case MetricSpec::Kind::Graph:
      total = n;
      break;
  }
  if (total > kSizeGuard)
    throw InputError("size guard exceeded: " + std::to_string(total) + " > " +
                     std::to_string(kSizeGuard) + " points");
  for (Index i = 0; i < total; ++i) file.ids.push_back(i);
  if (weights == "unit") {
    file.weights = unit_weights(total);
  } else if (weights == "random") {
    file.weights = random_weights(total, rng);
  } else {
    throw InputError("unknown weights kind '" + weights + "'");
  }
  const MetricMeasureSpace space = file.build();
  file.u = sample_function(fn, space, 0.5, seed);
  save_space_file(file, out);
  std::cout << "wrote " << out << " (" << total << " points)\n";
  return 0;
}

int cmd_analyze(const std::string& path, const ParamFlags& flags, const std::string& out,
                const std::string& csv) {
  const SpaceFile file = load_space_file(path);
  const MetricMeasureSpace space = file.build();
  if (!file.u) throw InputError("space file carries no function u to analyze");
  const ArrayXd u = *file.u;

  SmoothnessParams sm;
  sm.s = flags.s;
  sm.p = flags.p;
  sm.q = flags.q;
  sm.family = flags.approx_params().smoothness.family;
  sm.validate();
  if (!(flags.gamma > 0.0) || flags.gamma > 0.5) throw InputError("gamma must lie in (0,1/2]");

  const HypothesisReport rep = annulus_density(space);
  const ScaleGrid grid = scale_grid(space);

  Json j;
  j["points"] = space.size();
  j["diameter"] = space.diameter();
  j["min_positive_distance"] = space.size() > 1 ? space.min_positive_distance() : 0.0;
  j["scale_grid"] = Json::array({grid.k_min, grid.k_max});
  j["hypotheses"] = hypothesis_report_to_json(rep);
  j["lp_norm"] = lp_norm(space, u, flags.p);
  j["function_norm_upper"] = function_norm_upper(space, u, sm);
  const FractionalGradient G = canonical_fractional_gradient(space, u, flags.s);
  j["seq_norm_lq_lp"] = sequence_norm(space, G, flags.p, sm.effective_q(), NormMode::LqOfLp);
  j["seq_norm_lp_lq"] = sequence_norm(space, G, flags.p, sm.effective_q(), NormMode::LpOfLq);

  const ArrayXd M = median_maximal(space, u, flags.gamma);
  const ArrayXd cen =
      sharp_median_maximal(space, u, {flags.beta, flags.R, true}, {flags.gamma});
  const ArrayXd unc =
      sharp_median_maximal(space, u, {flags.beta, flags.R, false}, {flags.gamma});
  j["median_maximal_max"] = M.maxCoeff();
  j["sharp_centered_max"] = cen.maxCoeff();
  j["sharp_uncentered_max"] = unc.maxCoeff();

  write_text_file(out, j.dump(2) + "\n");
  std::cout << "wrote " << out << "\n";

  if (!csv.empty()) {
    std::ostringstream os;
    os << "id,u,median_maximal,sharp_centered,sharp_uncentered\n";
    os.precision(17);
    for (Index x = 0; x < space.size(); ++x)
      os << space.id_of(x) << "," << u[x] << "," << M[x] << "," << cen[x] << "," << unc[x]
         << "\n";
    write_text_file(csv, os.str());
    std::cout << "wrote " << csv << "\n";
  }
  return 0;
}

int cmd_approximate(const std::string& path, const ParamFlags& flags, double lambda,
                    const std::string& schedule, double epsilon, long long support_center,
                    const std::string& out) {
  const SpaceFile file = load_space_file(path);
  const MetricMeasureSpace space = file.build();
  if (!file.u) throw InputError("space file carries no function u to approximate");
  const ArrayXd u = *file.u;

  ApproxParams params = flags.approx_params();
  if (support_center >= 0) params.support_center = space.index_of(support_center);
  params.validate();

  ScheduleResult sched;
  if (epsilon > 0.0) {
    ApproxResult res = approximate_epsilon(space, u, params, epsilon);
    sched.lambdas = {res.report.lambda};
    sched.rows = {res.report};
    sched.identity_all = res.report.identity_off_omega;
    sched.claim1_all = !res.report.claim1 || *res.report.claim1;
    sched.lambda0 = res.lambda0;
    sched.runs.push_back(std::move(res));
  } else {
    std::vector<double> lambdas;
    if (!schedule.empty()) {
      std::istringstream ss(schedule);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        try {
          lambdas.push_back(std::stod(tok));
        } catch (const std::exception&) {
          throw InputError("malformed lambda schedule entry '" + tok + "'");
        }
      }
    } else if (lambda > 0.0) {
      lambdas = {lambda};
    } else {
      throw InputError("one of --lambda, --lambda-schedule, --epsilon is required");
    }
    sched = approximate(space, u, params, lambdas);
  }

  write_text_file(out + ".json", schedule_to_json(params, sched, space).dump(2) + "\n");
  std::ostringstream os;
  os.precision(17);
  os << "lambda,omega_size,content_upper,holder_seminorm,diff_norm_upper,c_ext,c_diff\n";
  for (const auto& row : sched.rows)
    os << row.lambda << "," << row.omega_size << "," << row.content_upper << ","
       << row.holder_seminorm << "," << row.diff_norm_upper << "," << row.c_ext << ","
       << row.c_diff << "\n";
  write_text_file(out + ".csv", os.str());
  std::cout << "wrote " << out << ".json and " << out << ".csv\n";
  return 0;
}

int cmd_content(const std::string& path, double d, double theta, double R,
                const std::string& set_spec, const std::string& out) {
  const SpaceFile file = load_space_file(path);
  const MetricMeasureSpace space = file.build();
  std::vector<Index> E;
  if (set_spec == "all") {
    for (Index i = 0; i < space.size(); ++i) E.push_back(i);
  } else {
    std::istringstream ss(set_spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        E.push_back(space.index_of(std::stoll(tok)));
      } catch (const InputError&) {
        throw;
      } catch (const std::exception&) {
        throw InputError("malformed set entry '" + tok + "'");
      }
    }
  }
  ContentParams params{d, theta, R};
  const BallCover cover = netrusov_content_upper(space, E, params);
  write_text_file(out, cover_to_json(space, cover).dump(2) + "\n");
  std::cout << "content upper bound: " << cover.value << " (" << cover.balls.size()
            << " balls), wrote " << out << "\n";
  return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, long count, bool inject_bug) {
  const auto reports = verify::run_suites(
      suite, seed, count, inject_bug ? verify::Fault::TamperMedian : verify::Fault::None);
  bool ok = true;
  for (const auto& rep : reports) {
    std::cout << "suite " << rep.name << ": " << rep.instances << " instances";
    if (rep.skipped > 0) std::cout << " (" << rep.skipped << " skipped)";
    std::cout << ", " << rep.violations.size() << " violations\n";
    for (const auto& v : rep.violations) std::cout << "  " << v << "\n";
    ok = ok && rep.ok();
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Hoelder approximation toolkit on finite metric measure spaces.\n"
      "Ball membership is strict (d(y,x) < r) with exact comparisons, no epsilon;\n"
      "avoid radii adversarially close to realized distances in hand-written inputs."};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic space file");
  std::string gen_kind;
  Index gen_n = 16;
  int gen_level = 4;
  std::uint64_t gen_seed = 0;
  std::string gen_fn = "step", gen_weights = "unit", gen_out = "space.json";
  gen->add_option("kind", gen_kind, "line | grid | cantor | graph | random_cloud")->required();
  gen->add_option("--n", gen_n, "point count (side length for grid)");
  gen->add_option("--level", gen_level, "cantor level");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--fn", gen_fn, "step | bump | random | indicator | none");
  gen->add_option("--weights", gen_weights, "unit | random");
  gen->add_option("--out", gen_out, "output file");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "hypothesis constants and norm bounds");
  std::string an_path, an_out = "analysis.json", an_csv;
  ParamFlags an_flags;
  analyze->add_option("space", an_path, "space file (.json or .csv)")->required();
  add_param_flags(analyze, an_flags);
  analyze->add_option("--out", an_out, "output JSON");
  analyze->add_option("--csv", an_csv, "per-point maximal-function table (CSV)");

  // approximate
  auto* approx = app.add_subcommand("approximate", "run the Hoelder approximation pipeline");
  std::string ap_path, ap_schedule, ap_out = "approx";
  double ap_lambda = 0.0, ap_epsilon = 0.0;
  long long ap_center = -1;
  ParamFlags ap_flags;
  approx->add_option("space", ap_path, "space file (.json or .csv)")->required();
  add_param_flags(approx, ap_flags);
  approx->add_option("--lambda", ap_lambda, "single threshold");
  approx->add_option("--lambda-schedule", ap_schedule, "comma-separated thresholds");
  approx->add_option("--epsilon", ap_epsilon, "budget-driven mode");
  approx->add_option("--support-center", ap_center,
                     "point id of the declared unit support ball (compact path)");
  approx->add_option("--out", ap_out, "output prefix (.json/.csv)");

  // content
  auto* content = app.add_subcommand("content", "certified content upper bound of a set");
  std::string ct_path, ct_set = "all", ct_out = "cover.json";
  double ct_d = 0.5, ct_theta = 1.0, ct_R = 64.0;
  content->add_option("space", ct_path, "space file")->required();
  content->add_option("--set", ct_set, "comma-separated point ids, or 'all'");
  content->add_option("--d", ct_d, "codimension");
  content->add_option("--theta", ct_theta, "aggregation exponent");
  content->add_option("--R", ct_R, "radius cap");
  content->add_option("--out", ct_out, "output cover certificate (JSON)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run property suites on random instances");
  std::string vf_suite = "all";
  std::uint64_t vf_seed = 1;
  long vf_count = 50;
  bool vf_bug = false;
  verify_cmd->add_option("suite", vf_suite, "space|median|gradient|content|whitney|approx|all");
  verify_cmd->add_option("--seed", vf_seed, "instance seed");
  verify_cmd->add_option("--count", vf_count, "instances per suite");
  verify_cmd->add_flag("--inject-bug", vf_bug, "negative control: tamper a median");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen(gen_kind, gen_n, gen_level, gen_seed, gen_fn, gen_weights, gen_out);
    if (analyze->parsed()) return cmd_analyze(an_path, an_flags, an_out, an_csv);
    if (approx->parsed())
      return cmd_approximate(ap_path, ap_flags, ap_lambda, ap_schedule, ap_epsilon, ap_center,
                             ap_out);
    if (content->parsed()) return cmd_content(ct_path, ct_d, ct_theta, ct_R, ct_set, ct_out);
    if (verify_cmd->parsed()) return cmd_verify(vf_suite, vf_seed, vf_count, vf_bug);
  } catch (const lusin::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const lusin::CheckError& e) {
    std::cerr << "property violation: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
