#include "lusin/io.hpp"

#include <fstream>
#include <sstream>

namespace lusin {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw InputError(path + ": " + msg);
}

const Json& need(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing");
  return *it;
}

double need_number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

MatrixXd need_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
  const size_t rows = j.size();
  size_t cols = 0;
  for (size_t r = 0; r < rows; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || row.empty())
      fail(path + "[" + std::to_string(r) + "]", "expected a nonempty array");
    if (r == 0)
      cols = row.size();
    else if (row.size() != cols)
      fail(path + "[" + std::to_string(r) + "]", "ragged row length");
  }
  MatrixXd m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) =
          need_number(j[r][c], path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  return m;
}

}  // namespace

SpaceFile space_file_from_json(const Json& j) {
  SpaceFile f;
  const Json& points = need(j, "points", "$");
  if (!points.is_array() || points.empty()) fail("$.points", "expected a nonempty array of ids");
  const Index n = static_cast<Index>(points.size());
  for (size_t i = 0; i < points.size(); ++i) {
    if (!points[i].is_number_integer())
      fail("$.points[" + std::to_string(i) + "]", "expected an integer id");
    f.ids.push_back(points[i].get<long long>());
  }

  const Json& metric = need(j, "metric", "$");
  const Json& type = need(metric, "type", "$.metric");
  if (!type.is_string()) fail("$.metric.type", "expected a string");
  const std::string kind = type.get<std::string>();
  if (kind == "euclidean" || kind == "linf") {
    MatrixXd coords = need_matrix(need(metric, "coords", "$.metric"), "$.metric.coords");
    if (coords.rows() != n) fail("$.metric.coords", "row count does not match points");
    f.spec = kind == "euclidean" ? MetricSpec::euclidean(std::move(coords))
                                 : MetricSpec::linf(std::move(coords));
  } else if (kind == "matrix") {
    MatrixXd m = need_matrix(need(metric, "matrix", "$.metric"), "$.metric.matrix");
    if (m.rows() != n || m.cols() != n) fail("$.metric.matrix", "expected an n x n matrix");
    f.spec = MetricSpec::from_matrix(std::move(m));
  } else if (kind == "graph") {
    const Json& edges = need(metric, "edges", "$.metric");
    if (!edges.is_array()) fail("$.metric.edges", "expected an array of [i, j, w]");
    std::vector<MetricSpec::Edge> es;
    for (size_t e = 0; e < edges.size(); ++e) {
      const std::string ep = "$.metric.edges[" + std::to_string(e) + "]";
      const Json& t = edges[e];
      if (!t.is_array() || t.size() != 3) fail(ep, "expected [i, j, w]");
      if (!t[0].is_number_integer() || !t[1].is_number_integer())
        fail(ep, "endpoints must be integer indices");
      es.push_back({t[0].get<Index>(), t[1].get<Index>(), need_number(t[2], ep + "[2]")});
    }
    f.spec = MetricSpec::graph(std::move(es));
  } else {
    fail("$.metric.type", "expected one of euclidean|linf|matrix|graph, got '" + kind + "'");
  }

  const Json& weights = need(j, "weights", "$");
  if (!weights.is_array() || static_cast<Index>(weights.size()) != n)
    fail("$.weights", "expected an array matching the point count");
  f.weights.resize(n);
  for (Index i = 0; i < n; ++i)
    f.weights[i] = need_number(weights[static_cast<size_t>(i)],
                               "$.weights[" + std::to_string(i) + "]");

  if (j.contains("values")) {
    const Json& values = j.at("values");
    if (!values.is_object()) fail("$.values", "expected an object");
    if (values.contains("u")) {
      const Json& uj = values.at("u");
      if (!uj.is_array() || static_cast<Index>(uj.size()) != n)
        fail("$.values.u", "expected an array matching the point count");
      ArrayXd u(n);
      for (Index i = 0; i < n; ++i)
        u[i] = need_number(uj[static_cast<size_t>(i)], "$.values.u[" + std::to_string(i) + "]");
      f.u = std::move(u);
    }
  }
  return f;
}

Json space_file_to_json(const SpaceFile& f) {
  Json j;
  j["points"] = f.ids;
  Json metric;
  switch (f.spec.kind) {
    case MetricSpec::Kind::Euclidean:
    case MetricSpec::Kind::Linf: {
      metric["type"] = f.spec.kind == MetricSpec::Kind::Euclidean ? "euclidean" : "linf";
      Json rows = Json::array();
      for (Index r = 0; r < f.spec.coords.rows(); ++r) {
        Json row = Json::array();
        for (Index c = 0; c < f.spec.coords.cols(); ++c) row.push_back(f.spec.coords(r, c));
        rows.push_back(std::move(row));
      }
      metric["coords"] = std::move(rows);
      break;
    }
    case MetricSpec::Kind::Matrix: {
      metric["type"] = "matrix";
      Json rows = Json::array();
      for (Index r = 0; r < f.spec.matrix.rows(); ++r) {
        Json row = Json::array();
        for (Index c = 0; c < f.spec.matrix.cols(); ++c) row.push_back(f.spec.matrix(r, c));
        rows.push_back(std::move(row));
      }
      metric["matrix"] = std::move(rows);
      break;
    }
    case MetricSpec::Kind::Graph: {
      metric["type"] = "graph";
      Json edges = Json::array();
      for (const auto& e : f.spec.edges) edges.push_back(Json::array({e.a, e.b, e.w}));
      metric["edges"] = std::move(edges);
      break;
    }
  }
  j["metric"] = std::move(metric);
  j["weights"] = std::vector<double>(f.weights.data(), f.weights.data() + f.weights.size());
  if (f.u) {
    Json values;
    values["u"] = std::vector<double>(f.u->data(), f.u->data() + f.u->size());
    j["values"] = std::move(values);
  }
  return j;
}

SpaceFile space_file_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      cell.erase(0, cell.find_first_not_of(" \t\r"));
      cell.erase(cell.find_last_not_of(" \t\r") + 1);
      cells.push_back(cell);
    }
    rows.push_back(std::move(cells));
  }
  if (!rows.empty() && !rows[0].empty() && rows[0][0] == "id") rows.erase(rows.begin());
  if (rows.empty()) throw InputError("csv: no data rows");
  const size_t cols = rows[0].size();
  if (cols < 4) throw InputError("csv: expected columns id, x1..xd, weight, u");
  const int dim = static_cast<int>(cols) - 3;
  SpaceFile f;
  const Index n = static_cast<Index>(rows.size());
  MatrixXd coords(n, dim);
  f.weights.resize(n);
  ArrayXd u(n);
  for (Index r = 0; r < n; ++r) {
    const auto& row = rows[static_cast<size_t>(r)];
    const std::string where = "csv row " + std::to_string(r + 1);
    if (row.size() != cols) throw InputError(where + ": ragged column count");
    try {
      f.ids.push_back(std::stoll(row[0]));
      for (int d = 0; d < dim; ++d) coords(r, d) = std::stod(row[static_cast<size_t>(d) + 1]);
      f.weights[r] = std::stod(row[cols - 2]);
      u[r] = std::stod(row[cols - 1]);
    } catch (const std::exception&) {
      throw InputError(where + ": malformed number");
    }
  }
  f.spec = MetricSpec::euclidean(std::move(coords));
  f.u = std::move(u);
  return f;
}

SpaceFile load_space_file(const std::string& path) {
  const std::string text = read_text_file(path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
    return space_file_from_csv(text);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw InputError(std::string("failed to parse JSON: ") + e.what());
  }
  return space_file_from_json(j);
}

void save_space_file(const SpaceFile& f, const std::string& path) {
  write_text_file(path, space_file_to_json(f).dump(2) + "\n");
}

Json cover_to_json(const MetricMeasureSpace& space, const BallCover& cover) {
  Json j;
  Json balls = Json::array();
  for (const auto& b : cover.balls) {
    Json jb;
    jb["center"] = space.id_of(b.center);
    jb["radius"] = b.radius;
    balls.push_back(std::move(jb));
  }
  j["balls"] = std::move(balls);
  j["value"] = cover.value;
  Json params;
  params["d"] = cover.params.d;
  params["theta"] = cover.params.theta;
  if (std::isfinite(cover.params.R))
    params["R"] = cover.params.R;
  else
    params["R"] = "inf";
  j["params"] = std::move(params);
  return j;
}

Json hypothesis_report_to_json(const HypothesisReport& rep) {
  Json j;
  j["c_D"] = rep.c_D;
  if (std::isnan(rep.c_A))
    j["c_A"] = nullptr;
  else
    j["c_A"] = rep.c_A;
  j["spheres_ok"] = rep.spheres_ok;
  j["tested"] = rep.tested;
  Json empty = Json::array();
  for (const auto& [x, r] : rep.empty_annuli) empty.push_back(Json::array({x, r}));
  j["empty_annuli"] = std::move(empty);
  return j;
}

Json lambda_row_to_json(const LambdaRow& row) {
  Json j;
  j["lambda"] = row.lambda;
  j["omega_size"] = row.omega_size;
  j["content_upper"] = row.content_upper;
  j["holder_seminorm"] = row.holder_seminorm;
  j["diff_norm_upper"] = row.diff_norm_upper;
  j["c_ext"] = row.c_ext;
  j["c_diff"] = row.c_diff;
  j["lp_part"] = row.lp_part;
  j["seq_h"] = row.seq_h;
  j["identity_off_omega"] = row.identity_off_omega;
  if (row.claim1)
    j["claim1"] = *row.claim1;
  else
    j["claim1"] = nullptr;
  return j;
}

namespace {

const char* family_name(SmoothnessParams::Family f) {
  switch (f) {
    case SmoothnessParams::Family::Besov:
      return "besov";
    case SmoothnessParams::Family::TriebelLizorkin:
      return "tl";
    case SmoothnessParams::Family::Hajlasz:
      return "hajlasz";
  }
  return "?";
}

}  // namespace

Json schedule_to_json(const ApproxParams& params, const ScheduleResult& sched,
                      const MetricMeasureSpace& space) {
  Json j;
  Json jp;
  jp["family"] = family_name(params.smoothness.family);
  jp["s"] = params.smoothness.s;
  jp["p"] = params.smoothness.p;
  if (std::isfinite(params.smoothness.q))
    jp["q"] = params.smoothness.q;
  else
    jp["q"] = "inf";
  jp["beta"] = params.beta;
  jp["gamma"] = params.median.gamma;
  jp["c_E"] = params.c_E;
  jp["R"] = params.R_content;
  if (params.support_center) jp["support_center"] = space.id_of(*params.support_center);
  j["params"] = std::move(jp);
  if (!std::isnan(sched.lambda0)) j["lambda0"] = sched.lambda0;

  Json rows = Json::array();
  for (size_t i = 0; i < sched.rows.size(); ++i) {
    Json row = lambda_row_to_json(sched.rows[i]);
    if (sched.runs[i].content_cover)
      row["cover"] = cover_to_json(space, *sched.runs[i].content_cover);
    rows.push_back(std::move(row));
  }
  j["lambda_schedule"] = std::move(rows);

  Json claims;
  claims["identity_off_omega"] = sched.identity_all;
  claims["claim1"] = sched.claim1_all;
  j["claims"] = std::move(claims);
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path);
  out << text;
}

}  // namespace lusin
