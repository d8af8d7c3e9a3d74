#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "investsim/dynamic.hpp"
#include "investsim/knapsack.hpp"
#include "investsim/mechanism.hpp"
#include "investsim/properties.hpp"

namespace investsim {

using Json = nlohmann::ordered_json;

// { "bidders": [...], "outcomes": [...], "values": {bidder: {outcome: v}},
//   "feasible": [[outcome label per bidder], ...] }
Json allocation_instance_to_json(const AllocationInstance& instance);
AllocationInstance allocation_instance_from_json(const Json& j);

// { "capacity": c, "items": [{"value": v, "size": s}, ...] }
Json knapsack_to_json(const KnapsackInstance& instance);
KnapsackInstance knapsack_from_json(const Json& j);

// { "allocation": {bidder: outcome label}, "payments": {bidder: p} }
Json mechanism_outcome_to_json(const MechanismOutcome& outcome,
                               const AllocationInstance& instance);

// States, distribution, investments, and per-state scenarios. Scenarios come
// either as a knapsack shorthand ({"knapsack": {"capacity", "investor_size",
// "others": [{"bidder","value","size"}]}}; the investor is item 0) or as a
// full embedded allocation instance ({"allocation_instance": ...}) in which
// the investor's packed value is a placeholder.
Json static_instance_to_json(const StaticInvestmentInstance& instance);
StaticInvestmentInstance static_instance_from_json(const Json& j);

Json property_report_to_json(const PropertyReport& report);

Json run_summary_to_json(const RunTrace& trace, const std::string& instance_digest);

// CSV columns: t,state,arm,utility_raw,utility_norm,welfare_alg,welfare_opt,
// payment. LF line endings, '.' decimal separator, %.17g doubles.
std::string trace_to_csv(const RunTrace& trace);

// FNV-1a over the instance's canonical field bytes.
std::string instance_digest(const DynamicInvestmentInstance& instance);

// Writes via a temp file in the same directory, then renames.
void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content);

// %.17g, '.' decimal separator regardless of locale.
std::string format_double(double value);

}  // namespace investsim
