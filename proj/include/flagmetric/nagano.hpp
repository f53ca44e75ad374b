#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "flagmetric/numerics.hpp"

namespace flagmetric {

// Tiny expression tree over {n, p, q, min, floor-div, sub, constants}; just
// enough to hold symbolic ranks and root-space dimensions.
class ParamExpr {
 public:
  enum class Op { Constant, Var, Min, FloorDiv, Sub };

  static ParamExpr constant(long v);
  static ParamExpr var(std::string name);
  static ParamExpr min_of(ParamExpr a, ParamExpr b);
  static ParamExpr floor_div(ParamExpr a, long divisor);
  static ParamExpr sub(ParamExpr a, long amount);

  Op op() const { return op_; }
  long constant_value() const { return value_; }
  const std::string& var_name() const { return var_; }
  const ParamExpr& lhs() const { return *lhs_; }
  const ParamExpr& rhs() const { return *rhs_; }

  long eval(const std::map<std::string, long>& bindings) const;
  std::string str() const;
  bool is_constant(long v) const { return op_ == Op::Constant && value_ == v; }

 private:
  Op op_ = Op::Constant;
  long value_ = 0;
  std::string var_;
  std::shared_ptr<const ParamExpr> lhs_, rhs_;
};

struct ParamSpec {
  std::string name;
  long min_value = 1;
};

// One row of the classification of irreducible pairs: symbolic where the
// family carries parameters.
struct NaganoRow {
  std::string id;  // "i" .. "xix"
  std::string algebra;
  std::string root;
  std::string space;
  ParamExpr dim_g_alpha;
  std::string compact_isometry;
  std::string noncompact_dual;
  ParamExpr rank;
  std::vector<ParamSpec> parameters;
  bool real_type = false;
};

struct InstantiatedRow {
  std::string id;
  std::string space;
  long dim_g_alpha = 0;
  long rank = 0;
  bool real_type = false;
  bool higher_rank = false;  // rank >= 2, the gate for the rigidity results
  std::map<std::string, long> bindings;
};

const std::vector<NaganoRow>& nagano_table();

// By id ("iv") or by space/algebra name; throws UnknownPair.
const NaganoRow& nagano_lookup(const std::string& id_or_name);

// The rows whose root space is one-dimensional.
std::vector<NaganoRow> real_type_rows();

// Numeric rank and dimensions; throws BindingOutOfRange on missing or
// inadmissible parameters.
InstantiatedRow instantiate(const std::string& id,
                            const std::map<std::string, long>& bindings);

}  // namespace flagmetric
