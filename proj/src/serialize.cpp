#include "investsim/serialize.hpp"

#include <bit>
#include <cstdio>
#include <fstream>

namespace investsim {

namespace {

int outcome_index(const OutcomeSpace& outcomes, const std::string& label) {
  for (int o = 0; o < outcomes.size(); ++o)
    if (outcomes.labels[o] == label) return o;
  throw ConfigError("unknown outcome label: " + label);
}

int bidder_index(const ValueProfile& profile, const std::string& name) {
  for (int n = 0; n < profile.num_bidders(); ++n)
    if (profile.bidders[n] == name) return n;
  throw ConfigError("unknown bidder: " + name);
}

}  // namespace

Json allocation_instance_to_json(const AllocationInstance& instance) {
  Json j;
  j["bidders"] = instance.profile.bidders;
  j["outcomes"] = instance.outcomes.labels;
  Json values = Json::object();
  for (int n = 0; n < instance.num_bidders(); ++n) {
    Json row = Json::object();
    for (int o = 0; o < instance.outcomes.size(); ++o)
      row[instance.outcomes.labels[o]] = instance.profile.values[n][o];
    values[instance.profile.bidders[n]] = std::move(row);
  }
  j["values"] = std::move(values);
  Json feasible = Json::array();
  for (const auto& a : instance.feasible) {
    Json row = Json::array();
    for (Outcome o : a.assignment) row.push_back(instance.outcomes.labels[o]);
    feasible.push_back(std::move(row));
  }
  j["feasible"] = std::move(feasible);
  return j;
}

AllocationInstance allocation_instance_from_json(const Json& j) {
  AllocationInstance instance;
  instance.profile.bidders = j.at("bidders").get<std::vector<std::string>>();
  instance.outcomes.labels = j.at("outcomes").get<std::vector<std::string>>();
  instance.profile.values.resize(instance.profile.bidders.size());
  for (size_t n = 0; n < instance.profile.bidders.size(); ++n) {
    const Json& row = j.at("values").at(instance.profile.bidders[n]);
    instance.profile.values[n].resize(instance.outcomes.labels.size());
    for (int o = 0; o < instance.outcomes.size(); ++o)
      instance.profile.values[n][o] =
          row.at(instance.outcomes.labels[o]).get<double>();
  }
  for (const Json& row : j.at("feasible")) {
    Allocation a;
    for (const Json& label : row)
      a.assignment.push_back(
          outcome_index(instance.outcomes, label.get<std::string>()));
    instance.feasible.push_back(std::move(a));
  }
  instance.validate();
  return instance;
}

Json knapsack_to_json(const KnapsackInstance& instance) {
  Json j;
  j["capacity"] = instance.capacity;
  Json items = Json::array();
  for (const auto& item : instance.items)
    items.push_back(Json{{"value", item.value}, {"size", item.size}});
  j["items"] = std::move(items);
  return j;
}

KnapsackInstance knapsack_from_json(const Json& j) {
  KnapsackInstance instance;
  instance.capacity = j.at("capacity").get<double>();
  for (const Json& item : j.at("items"))
    instance.items.push_back(
        {item.at("value").get<double>(), item.at("size").get<double>()});
  instance.validate();
  return instance;
}

Json mechanism_outcome_to_json(const MechanismOutcome& outcome,
                               const AllocationInstance& instance) {
  Json j;
  Json allocation = Json::object();
  for (int n = 0; n < instance.num_bidders(); ++n)
    allocation[instance.profile.bidders[n]] =
        instance.outcomes.labels[outcome.allocation.assignment[n]];
  j["allocation"] = std::move(allocation);
  Json payments = Json::object();
  for (int n = 0; n < instance.num_bidders(); ++n)
    payments[instance.profile.bidders[n]] = outcome.payments.payments[n];
  j["payments"] = std::move(payments);
  return j;
}

Json static_instance_to_json(const StaticInvestmentInstance& instance) {
  Json j;
  j["states"] = instance.states;
  j["dist"] = instance.dist;
  Json investments = Json::array();
  for (const auto& inv : instance.investments) {
    Json values = Json::object();
    for (int s = 0; s < instance.num_states(); ++s)
      values[instance.states[s]] = inv.values[s];
    investments.push_back(Json{
        {"label", inv.label}, {"values", std::move(values)}, {"cost", inv.cost}});
  }
  j["investments"] = std::move(investments);

  Json scenarios = Json::object();
  for (int s = 0; s < instance.num_states(); ++s) {
    Json scenario;
    scenario["investor"] =
        instance.scenarios[s].profile.bidders[instance.investor];
    scenario["allocation_instance"] =
        allocation_instance_to_json(instance.scenarios[s]);
    scenarios[instance.states[s]] = std::move(scenario);
  }
  j["scenarios"] = std::move(scenarios);
  return j;
}

StaticInvestmentInstance static_instance_from_json(const Json& j) {
  StaticInvestmentInstance instance;
  instance.states = j.at("states").get<std::vector<std::string>>();
  instance.dist = j.at("dist").get<std::vector<double>>();

  for (const Json& inv_json : j.at("investments")) {
    Investment inv;
    inv.cost = inv_json.at("cost").get<double>();
    if (inv_json.contains("label")) inv.label = inv_json.at("label").get<std::string>();
    for (const auto& state : instance.states)
      inv.values.push_back(inv_json.at("values").at(state).get<double>());
    instance.investments.push_back(std::move(inv));
  }

  int investor = -1;
  for (const auto& state : instance.states) {
    const Json& scenario = j.at("scenarios").at(state);
    AllocationInstance alloc_instance;
    int scenario_investor = -1;
    if (scenario.contains("knapsack")) {
      const Json& ks = scenario.at("knapsack");
      KnapsackInstance knapsack;
      knapsack.capacity = ks.at("capacity").get<double>();
      std::vector<std::string> names;
      // Investor is item 0; packed value filled in per investment.
      knapsack.items.push_back({0.0, ks.at("investor_size").get<double>()});
      names.push_back(scenario.contains("investor")
                          ? scenario.at("investor").get<std::string>()
                          : std::string("investor"));
      for (const Json& other : ks.at("others")) {
        knapsack.items.push_back(
            {other.at("value").get<double>(), other.at("size").get<double>()});
        names.push_back(other.at("bidder").get<std::string>());
      }
      alloc_instance = to_allocation_instance(knapsack, std::move(names));
      scenario_investor = 0;
    } else if (scenario.contains("allocation_instance")) {
      alloc_instance =
          allocation_instance_from_json(scenario.at("allocation_instance"));
      scenario_investor = bidder_index(alloc_instance.profile,
                                       scenario.at("investor").get<std::string>());
    } else {
      throw ConfigError("scenario for state " + state +
                        " needs \"knapsack\" or \"allocation_instance\"");
    }
    if (investor < 0) investor = scenario_investor;
    if (investor != scenario_investor)
      throw ConfigError("investor index must match across states");
    instance.scenarios.push_back(std::move(alloc_instance));
  }
  instance.investor = investor;
  instance.validate();
  return instance;
}

Json property_report_to_json(const PropertyReport& report) {
  Json j;
  j["property"] = report.property;
  j["pass"] = report.pass;
  Json counterexamples = Json::array();
  for (const auto& ce : report.counterexamples) {
    counterexamples.push_back(Json{{"instance_index", ce.instance_index},
                                   {"bidder", ce.bidder},
                                   {"value_from", ce.value_from},
                                   {"value_to", ce.value_to},
                                   {"witness", ce.witness},
                                   {"profile", ce.profile}});
  }
  j["counterexamples"] = std::move(counterexamples);
  return j;
}

Json run_summary_to_json(const RunTrace& trace, const std::string& digest) {
  Json j;
  j["totals"] = Json{{"welfare_alg", trace.total_welfare_alg},
                     {"welfare_opt", trace.total_welfare_opt},
                     {"utility", trace.total_utility}};
  j["regret"] = realized_regret(trace);
  j["arm_cumulative_utilities"] = trace.arm_cumulative;
  j["seed"] = trace.seed;
  j["instance_digest"] = digest;
  return j;
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string trace_to_csv(const RunTrace& trace) {
  std::string out =
      "t,state,arm,utility_raw,utility_norm,welfare_alg,welfare_opt,payment\n";
  for (const auto& r : trace.rounds) {
    out += std::to_string(r.t);
    out += ',';
    out += std::to_string(r.state);
    out += ',';
    out += std::to_string(r.arm);
    out += ',';
    out += format_double(r.utility_raw);
    out += ',';
    out += format_double(r.utility_norm);
    out += ',';
    out += format_double(r.welfare_alg);
    out += ',';
    out += format_double(r.welfare_opt);
    out += ',';
    out += format_double(r.payment);
    out += '\n';
  }
  return out;
}

namespace {

struct Fnv1a {
  uint64_t hash = 1469598103934665603ull;

  void add_bytes(const void* data, size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < size; ++i) {
      hash ^= bytes[i];
      hash *= 1099511628211ull;
    }
  }
  void add(double v) {
    const uint64_t bits = std::bit_cast<uint64_t>(v);
    add_bytes(&bits, sizeof(bits));
  }
  void add(uint64_t v) { add_bytes(&v, sizeof(v)); }
  void add(const std::string& s) { add_bytes(s.data(), s.size()); }
};

}  // namespace

std::string instance_digest(const DynamicInvestmentInstance& instance) {
  Fnv1a fnv;
  fnv.add(static_cast<uint64_t>(instance.horizon));
  fnv.add(static_cast<uint64_t>(instance.investor));
  for (const auto& s : instance.states) fnv.add(s);
  for (const auto& inv : instance.investments) {
    fnv.add(inv.cost);
    for (double v : inv.values) fnv.add(v);
  }
  for (const auto& env : instance.envs) {
    for (double p : env.dist) fnv.add(p);
    for (const auto& scenario : env.scenarios) {
      for (const auto& row : scenario.profile.values)
        for (double v : row) fnv.add(v);
      if (scenario.knapsack) {
        fnv.add(scenario.knapsack->capacity);
        for (double s : scenario.knapsack->sizes) fnv.add(s);
      }
    }
  }
  for (int32_t e : instance.env_of_round) fnv.add(static_cast<uint64_t>(e));
  fnv.add(instance.u_min);
  fnv.add(instance.u_max);

  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(fnv.hash));
  return buffer;
}

void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace investsim
