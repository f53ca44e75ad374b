#pragma once

#include <memory>

#include <json.hpp>

#include "flagmetric/domains.hpp"
#include "flagmetric/metrics.hpp"
#include "flagmetric/nagano.hpp"

namespace flagmetric {

using Json = nlohmann::ordered_json;

// Planes travel as {"n", "k", "basis": row-major floats}; the reader
// re-orthonormalizes and validates rank.
Json plane_to_json(const Plane& x);
Plane plane_from_json(const Json& j, const Tolerance& tol);

// Domains: {"kind": "symmetric", "form": row-major n x n} or
// {"kind": "complement", "duals": [...], "reference": plane}. The context
// (p, q) is derived from the payload.
Json domain_to_json(const Domain& dom);
std::unique_ptr<Domain> domain_from_json(const Json& j, const Tolerance& tol);

Json photon_to_json(const Photon& ph);
Json chain_to_json(const Chain& chain);
Json metric_report_to_json(const MetricReport& report);
Json probe_report_to_json(const ProbeReport& report);
Json hyperbolicity_rows_to_json(const std::vector<HyperbolicityRow>& rows);

// columns: scale, delta, gap, seed; floats with 12 significant digits
std::string hyperbolicity_rows_to_csv(const std::vector<HyperbolicityRow>& rows);

Json param_expr_to_json(const ParamExpr& e);
ParamExpr param_expr_from_json(const Json& j);
Json nagano_row_to_json(const NaganoRow& row);
NaganoRow nagano_row_from_json(const Json& j);
Json instantiated_row_to_json(const InstantiatedRow& row);

Json error_to_json(const std::string& code, const std::string& message,
                   const Json& context);

std::string format_sig12(double v);

}  // namespace flagmetric
