#include "flagmetric/nagano.hpp"

#include <algorithm>

namespace flagmetric {

ParamExpr ParamExpr::constant(long v) {
  ParamExpr e;
  e.op_ = Op::Constant;
  e.value_ = v;
  return e;
}

ParamExpr ParamExpr::var(std::string name) {
  ParamExpr e;
  e.op_ = Op::Var;
  e.var_ = std::move(name);
  return e;
}

ParamExpr ParamExpr::min_of(ParamExpr a, ParamExpr b) {
  ParamExpr e;
  e.op_ = Op::Min;
  e.lhs_ = std::make_shared<ParamExpr>(std::move(a));
  e.rhs_ = std::make_shared<ParamExpr>(std::move(b));
  return e;
}

ParamExpr ParamExpr::floor_div(ParamExpr a, long divisor) {
  ParamExpr e;
  e.op_ = Op::FloorDiv;
  e.lhs_ = std::make_shared<ParamExpr>(std::move(a));
  e.value_ = divisor;
  return e;
}

ParamExpr ParamExpr::sub(ParamExpr a, long amount) {
  ParamExpr e;
  e.op_ = Op::Sub;
  e.lhs_ = std::make_shared<ParamExpr>(std::move(a));
  e.value_ = amount;
  return e;
}

long ParamExpr::eval(const std::map<std::string, long>& bindings) const {
  switch (op_) {
    case Op::Constant:
      return value_;
    case Op::Var: {
      auto it = bindings.find(var_);
      if (it == bindings.end())
        fail("BindingOutOfRange", "missing binding for parameter " + var_);
      return it->second;
    }
    case Op::Min:
      return std::min(lhs_->eval(bindings), rhs_->eval(bindings));
    case Op::FloorDiv:
      return lhs_->eval(bindings) / value_;
    case Op::Sub:
      return lhs_->eval(bindings) - value_;
  }
  return 0;
}

std::string ParamExpr::str() const {
  switch (op_) {
    case Op::Constant:
      return std::to_string(value_);
    case Op::Var:
      return var_;
    case Op::Min:
      return "min(" + lhs_->str() + "," + rhs_->str() + ")";
    case Op::FloorDiv:
      return "floor(" + lhs_->str() + "/" + std::to_string(value_) + ")";
    case Op::Sub:
      return lhs_->str() + "-" + std::to_string(value_);
  }
  return "";
}

namespace {

std::vector<NaganoRow> build_table() {
  auto c = [](long v) { return ParamExpr::constant(v); };
  auto v = [](const char* name) { return ParamExpr::var(name); };
  const ParamSpec np{"n", 1}, nn3{"n", 3}, nn2{"n", 2}, pp{"p", 1}, qq{"q", 1};

  std::vector<NaganoRow> t;
  t.push_back({"i", "so(n,n)", "alpha_{n-1} or alpha_n", "SO(n)", c(1), "SO(n) x SO(n)",
               "SO(n,C)", ParamExpr::floor_div(v("n"), 2), {nn3}, true});
  t.push_back({"ii", "sp(n,n)", "alpha_n = eps_n", "Sp(n)", c(3), "Sp(n) x Sp(n)",
               "Sp(2n,C)", v("n"), {np}, false});
  t.push_back({"iii", "su(n,n)", "alpha_n = 2 eps_n", "U(n)", c(1), "S(U(n) x U(n))",
               "SL(n,C) x R", v("n"), {np}, true});
  t.push_back({"iv", "sl(p+q,R)", "alpha_p = eps_p - eps_{p+1}", "Gr_p(R^{p+q})", c(1),
               "SO(p+q)", "SO(p,q)", ParamExpr::min_of(v("p"), v("q")), {pp, qq}, true});
  t.push_back({"v", "sl(p+q,C)", "alpha_p = eps_p - eps_{p+1}", "Gr_p(C^{p+q})", c(2),
               "SU(p+q)", "SU(p,q)", ParamExpr::min_of(v("p"), v("q")), {pp, qq}, false});
  t.push_back({"vi", "sl(p+q,H)", "alpha_p = eps_p - eps_{p+1}", "Gr_p(H^{p+q})", c(4),
               "Sp(p+q)", "Sp(p,q)", ParamExpr::min_of(v("p"), v("q")), {pp, qq}, false});
  t.push_back({"vii", "e6(6)", "alpha_1 or alpha_5", "Sp(4)/(Sp(2) x Sp(2))", c(1),
               "Sp(4)", "Sp(2,2)", c(2), {}, true});
  t.push_back({"viii", "so(p+1,q+1)", "alpha_1 = eps_1 - eps_2", "S^p x S^q", c(1),
               "SO(p+1) x SO(q+1)", "SO(p,1) x SO(1,q)", c(2), {pp, qq}, true});
  t.push_back({"ix", "so(n,1)", "alpha_1 = eps_1 - eps_2", "S^{n-1}",
               ParamExpr::sub(v("n"), 1), "SO(n+1)", "SO(n-1,1)", c(1), {nn2}, false});
  t.push_back({"x", "so*(4n)", "alpha_n = 2 eps_n", "(SU(2n)/Sp(n)) x S^1", c(1), "U(2n)",
               "SL(n,H) x R", v("n"), {np}, true});
  t.push_back({"xi", "sp(2n,R)", "alpha_n = 2 eps_n", "(SU(n)/SO(n)) x S^1", c(1), "U(n)",
               "SL(n,R) x R", v("n"), {np}, true});
  t.push_back({"xii", "e7(-25)", "alpha_3", "(E7/F4) x S^1", c(1), "E6 x S^1",
               "E6(-26) x R", c(3), {}, true});
  t.push_back({"xiii", "so(n+2,C)", "alpha_1 = eps_1 - eps_2", "SO(n+2)/S(O(2) x O(n))",
               c(2), "SO(n+2)", "SO(n,2)", ParamExpr::min_of(v("n"), c(2)), {np}, false});
  t.push_back({"xiv", "so(2n,C)", "alpha_{n-1} or alpha_n", "SO(2n)/U(n)", c(2), "SO(2n)",
               "SO*(2n)", ParamExpr::floor_div(v("n"), 2), {nn3}, false});
  t.push_back({"xv", "sp(2n,C)", "alpha_n = 2 eps_n", "Sp(n)/U(n)", c(2), "Sp(n)",
               "Sp(2n,R)", v("n"), {np}, false});
  t.push_back({"xvi", "e6(C)", "alpha_1 or alpha_5", "E6/(SO(2) x SO(10))", c(2), "E6",
               "E6(-14)", c(2), {}, false});
  t.push_back({"xvii", "e7(C)", "alpha_7", "E7/(SO(2) x E6)", c(2), "E7", "E7(-25)", c(3),
               {}, false});
  t.push_back({"xviii", "e6(-26)", "alpha_1 or alpha_2", "F4/B4", c(8), "F4", "F4(-20)",
               c(1), {}, false});
  t.push_back({"xix", "e7(7)", "alpha_7", "SU(8)/Sp(4)", c(1), "SU(8)", "SL(4,H)", c(3),
               {}, true});
  return t;
}

}  // namespace

const std::vector<NaganoRow>& nagano_table() {
  static const std::vector<NaganoRow> table = build_table();
  return table;
}

const NaganoRow& nagano_lookup(const std::string& id_or_name) {
  for (const auto& row : nagano_table())
    if (row.id == id_or_name || row.algebra == id_or_name || row.space == id_or_name)
      return row;
  fail("UnknownPair", "no classification row matches '" + id_or_name + "'");
}

std::vector<NaganoRow> real_type_rows() {
  std::vector<NaganoRow> out;
  for (const auto& row : nagano_table())
    if (row.real_type) out.push_back(row);
  return out;
}

namespace {

std::string render_space(const NaganoRow& row, const std::map<std::string, long>& b) {
  auto get = [&](const char* k) { return b.at(k); };
  auto s = [](long x) { return std::to_string(x); };
  const std::string& id = row.id;
  if (id == "i") return "SO(" + s(get("n")) + ")";
  if (id == "ii") return "Sp(" + s(get("n")) + ")";
  if (id == "iii") return "U(" + s(get("n")) + ")";
  if (id == "iv") {
    const long p = get("p"), q = get("q");
    std::string base = "Gr_" + s(p) + "(R^" + s(p + q) + ")";
    if (p == 1) base += " = P(R^" + s(p + q) + ")";
    return base;
  }
  if (id == "v") return "Gr_" + s(get("p")) + "(C^" + s(get("p") + get("q")) + ")";
  if (id == "vi") return "Gr_" + s(get("p")) + "(H^" + s(get("p") + get("q")) + ")";
  if (id == "viii") return "S^" + s(get("p")) + " x S^" + s(get("q"));
  if (id == "ix") return "S^" + s(get("n") - 1);
  if (id == "x") return "(SU(" + s(2 * get("n")) + ")/Sp(" + s(get("n")) + ")) x S^1";
  if (id == "xi") return "(SU(" + s(get("n")) + ")/SO(" + s(get("n")) + ")) x S^1";
  if (id == "xiii")
    return "SO(" + s(get("n") + 2) + ")/S(O(2) x O(" + s(get("n")) + "))";
  if (id == "xiv") return "SO(" + s(2 * get("n")) + ")/U(" + s(get("n")) + ")";
  if (id == "xv") return "Sp(" + s(get("n")) + ")/U(" + s(get("n")) + ")";
  return row.space;  // parameter-free rows
}

}  // namespace

InstantiatedRow instantiate(const std::string& id,
                            const std::map<std::string, long>& bindings) {
  const NaganoRow& row = nagano_lookup(id);
  for (const auto& spec : row.parameters) {
    auto it = bindings.find(spec.name);
    if (it == bindings.end())
      fail("BindingOutOfRange",
           "row " + row.id + ": missing binding for parameter " + spec.name);
    if (it->second < spec.min_value)
      fail("BindingOutOfRange", "row " + row.id + ": parameter " + spec.name + " = " +
                                    std::to_string(it->second) + " below admissible " +
                                    std::to_string(spec.min_value));
  }
  InstantiatedRow out;
  out.id = row.id;
  out.bindings = bindings;
  out.dim_g_alpha = row.dim_g_alpha.eval(bindings);
  out.rank = row.rank.eval(bindings);
  out.real_type = row.real_type;
  out.higher_rank = out.rank >= 2;
  out.space = render_space(row, bindings);
  return out;
}

}  // namespace flagmetric
