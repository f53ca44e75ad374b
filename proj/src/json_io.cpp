#include "flagmetric/json_io.hpp"

#include <cstdio>

namespace flagmetric {

Json plane_to_json(const Plane& x) {
  Json j;
  j["n"] = x.n();
  j["k"] = x.k();
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(x.n()) * x.k());
  for (int i = 0; i < x.n(); ++i)
    for (int c = 0; c < x.k(); ++c) flat.push_back(x.basis()(i, c));
  j["basis"] = flat;
  return j;
}

Plane plane_from_json(const Json& j, const Tolerance& tol) {
  if (!j.is_object() || !j.contains("n") || !j.contains("k") || !j.contains("basis"))
    fail("ParseError", "plane: expected {n, k, basis}");
  const int n = j.at("n").get<int>();
  const int k = j.at("k").get<int>();
  const auto& flat = j.at("basis");
  if (n < 1 || k < 0 || static_cast<int>(flat.size()) != n * k)
    fail("ParseError", "plane: basis length does not match n*k");
  Eigen::MatrixXd basis(n, k);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < k; ++c) basis(i, c) = flat.at(i * k + c).get<double>();
  return Plane::from_span(basis, tol);
}

Json domain_to_json(const Domain& dom) {
  Json j;
  j["kind"] = dom.kind();
  if (const auto* sym = dynamic_cast<const SymmetricDomain*>(&dom)) {
    const int n = dom.ctx().n();
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < n; ++c) flat.push_back(sym->form()(i, c));
    j["form"] = flat;
  } else if (const auto* comp = dynamic_cast<const HyperplaneComplementDomain*>(&dom)) {
    Json duals = Json::array();
    for (const auto& xi : comp->duals()) duals.push_back(plane_to_json(xi));
    j["duals"] = duals;
    j["reference"] = plane_to_json(comp->reference());
  } else {
    fail("ParseError", "domain_to_json: unknown domain kind " + dom.kind());
  }
  return j;
}

std::unique_ptr<Domain> domain_from_json(const Json& j, const Tolerance& tol) {
  if (!j.is_object() || !j.contains("kind"))
    fail("ParseError", "domain: expected an object with a kind field");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "symmetric") {
    const auto& flat = j.at("form");
    const int n = static_cast<int>(std::lround(std::sqrt(double(flat.size()))));
    if (n * n != static_cast<int>(flat.size()))
      fail("ParseError", "domain: form length is not a square");
    Eigen::MatrixXd form(n, n);
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < n; ++c) form(i, c) = flat.at(i * n + c).get<double>();
    // signature determines (p, q)
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(form);
    const double scale = eig.eigenvalues().cwiseAbs().maxCoeff();
    int pos = 0, neg = 0;
    for (int i = 0; i < n; ++i) {
      if (eig.eigenvalues()(i) > 1e-12 * scale)
        ++pos;
      else if (eig.eigenvalues()(i) < -1e-12 * scale)
        ++neg;
    }
    if (pos + neg != n) fail("ParseError", "domain: form is degenerate");
    GrassmannContext ctx{pos, neg, tol};
    return std::make_unique<SymmetricDomain>(ctx, form);
  }
  if (kind == "complement") {
    Plane ref = plane_from_json(j.at("reference"), tol);
    const int n = ref.n();
    const int p = ref.k();
    GrassmannContext ctx{p, n - p, tol};
    std::vector<Plane> duals;
    for (const auto& dj : j.at("duals")) duals.push_back(plane_from_json(dj, tol));
    return std::make_unique<HyperplaneComplementDomain>(ctx, std::move(duals),
                                                        std::move(ref));
  }
  fail("ParseError", "domain: unknown kind '" + kind + "'");
}

Json photon_to_json(const Photon& ph) {
  Json j;
  j["v0"] = plane_to_json(ph.v0);
  j["v1"] = plane_to_json(ph.v1);
  return j;
}

Json chain_to_json(const Chain& chain) {
  Json j;
  Json points = Json::array();
  for (const auto& pt : chain.points) points.push_back(plane_to_json(pt));
  j["points"] = points;
  j["segment_lengths"] = chain.segment_lengths;
  j["total"] = chain.total();
  return j;
}

Json metric_report_to_json(const MetricReport& report) {
  Json j;
  j["lower"] = report.lower;
  j["upper"] = report.upper;
  if (report.exact)
    j["exact"] = *report.exact;
  else
    j["exact"] = nullptr;
  j["chain_witness"] = chain_to_json(report.chain_witness);
  j["dual_witness"] = {{"xi", plane_to_json(report.dual_witness.xi)},
                       {"eta", plane_to_json(report.dual_witness.eta)}};
  j["seed"] = report.seed;
  return j;
}

Json probe_report_to_json(const ProbeReport& report) {
  Json j;
  j["probe"] = report.probe;
  j["seed"] = report.seed;
  j["samples"] = report.samples;
  j["passes"] = report.passes;
  j["fails"] = report.fails;
  j["skipped"] = report.skipped;
  if (report.probe == "photon_convexity") j["max_components"] = report.max_components;
  j["heuristic"] = report.heuristic;
  j["witness"] = report.witness ? photon_to_json(*report.witness) : Json(nullptr);
  return j;
}

Json hyperbolicity_rows_to_json(const std::vector<HyperbolicityRow>& rows) {
  Json arr = Json::array();
  for (const auto& row : rows) {
    Json j;
    j["scale"] = row.scale;
    j["delta"] = row.delta;
    j["flat_delta"] = row.flat_delta ? Json(*row.flat_delta) : Json(nullptr);
    j["gap"] = row.gap;
    j["seed"] = row.seed;
    arr.push_back(j);
  }
  return arr;
}

std::string format_sig12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string hyperbolicity_rows_to_csv(const std::vector<HyperbolicityRow>& rows) {
  std::string out = "scale,delta,gap,seed\n";
  for (const auto& row : rows) {
    out += format_sig12(row.scale);
    out += ",";
    out += format_sig12(row.delta);
    out += ",";
    out += format_sig12(row.gap);
    out += ",";
    out += std::to_string(row.seed);
    out += "\n";
  }
  return out;
}

Json param_expr_to_json(const ParamExpr& e) {
  switch (e.op()) {
    case ParamExpr::Op::Constant:
      return Json{{"const", e.constant_value()}};
    case ParamExpr::Op::Var:
      return Json{{"var", e.var_name()}};
    case ParamExpr::Op::Min:
      return Json{{"min", Json::array({param_expr_to_json(e.lhs()),
                                       param_expr_to_json(e.rhs())})}};
    case ParamExpr::Op::FloorDiv:
      return Json{{"floordiv",
                   Json::array({param_expr_to_json(e.lhs()), e.constant_value()})}};
    case ParamExpr::Op::Sub:
      return Json{
          {"sub", Json::array({param_expr_to_json(e.lhs()), e.constant_value()})}};
  }
  return Json();
}

ParamExpr param_expr_from_json(const Json& j) {
  if (j.contains("const")) return ParamExpr::constant(j.at("const").get<long>());
  if (j.contains("var")) return ParamExpr::var(j.at("var").get<std::string>());
  if (j.contains("min"))
    return ParamExpr::min_of(param_expr_from_json(j.at("min").at(0)),
                             param_expr_from_json(j.at("min").at(1)));
  if (j.contains("floordiv"))
    return ParamExpr::floor_div(param_expr_from_json(j.at("floordiv").at(0)),
                                j.at("floordiv").at(1).get<long>());
  if (j.contains("sub"))
    return ParamExpr::sub(param_expr_from_json(j.at("sub").at(0)),
                          j.at("sub").at(1).get<long>());
  fail("ParseError", "param expression: unknown operator");
}

Json nagano_row_to_json(const NaganoRow& row) {
  Json j;
  j["id"] = row.id;
  j["algebra"] = row.algebra;
  j["root"] = row.root;
  j["space"] = row.space;
  j["dim_g_alpha"] = param_expr_to_json(row.dim_g_alpha);
  j["compact_isometry"] = row.compact_isometry;
  j["noncompact_dual"] = row.noncompact_dual;
  j["rank"] = param_expr_to_json(row.rank);
  Json params = Json::array();
  for (const auto& spec : row.parameters)
    params.push_back(Json{{"name", spec.name}, {"min", spec.min_value}});
  j["parameters"] = params;
  j["real_type"] = row.real_type;
  return j;
}

NaganoRow nagano_row_from_json(const Json& j) {
  NaganoRow row;
  row.id = j.at("id").get<std::string>();
  row.algebra = j.at("algebra").get<std::string>();
  row.root = j.at("root").get<std::string>();
  row.space = j.at("space").get<std::string>();
  row.dim_g_alpha = param_expr_from_json(j.at("dim_g_alpha"));
  row.compact_isometry = j.at("compact_isometry").get<std::string>();
  row.noncompact_dual = j.at("noncompact_dual").get<std::string>();
  row.rank = param_expr_from_json(j.at("rank"));
  for (const auto& pj : j.at("parameters"))
    row.parameters.push_back({pj.at("name").get<std::string>(), pj.at("min").get<long>()});
  row.real_type = j.at("real_type").get<bool>();
  return row;
}

Json instantiated_row_to_json(const InstantiatedRow& row) {
  Json j;
  j["id"] = row.id;
  j["space"] = row.space;
  j["dim_g_alpha"] = row.dim_g_alpha;
  j["rank"] = row.rank;
  j["real_type"] = row.real_type;
  j["higher_rank"] = row.higher_rank;
  Json b = Json::object();
  for (const auto& [k, v] : row.bindings) b[k] = v;
  j["bindings"] = b;
  return j;
}

Json error_to_json(const std::string& code, const std::string& message,
                   const Json& context) {
  Json j;
  j["code"] = code;
  j["message"] = message;
  j["context"] = context;
  return j;
}

}  // namespace flagmetric
