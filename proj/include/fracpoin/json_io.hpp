#pragma once

// JSON ingestion and export: domain specs, boundary sets, decompositions,
// coverings, fields, constants and reports.

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "fracpoin/constants.hpp"
#include "fracpoin/covering.hpp"
#include "fracpoin/decomposition.hpp"
#include "fracpoin/field.hpp"
#include "fracpoin/whitney.hpp"

namespace fracpoin {

using Json = nlohmann::json;

DomainSpec parse_domain_spec(const Json& j);
DomainPtr domain_from_json(const Json& j);
// Accepts a builtin family name, an inline JSON object, or an @file path.
DomainPtr domain_from_arg(const std::string& arg);

std::shared_ptr<const BoundarySet> boundary_set_from_json(const RectilinearDomain& dom,
                                                          const Json& j);
std::shared_ptr<const BoundarySet> boundary_set_from_arg(const RectilinearDomain& dom,
                                                         const std::string& arg);

Json whitney_to_json(const WhitneyDecomposition& dec);
Json whitney_report_to_json(const WhitneyReport& rep);
Json covering_to_json(const TreeCovering& cov);
Json covering_report_to_json(const CoveringReport& rep);
Json breakdown_to_json(const ConstantBreakdown& b);
Json decomposition_to_json(const DecompositionResult& res);
Json decomp_report_to_json(const DecompReport& rep);

Field field_from_json(GridPtr grid, const Json& j);
Json field_to_json(const Field& f);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace fracpoin
