#include "investsim/investment.hpp"

#include <algorithm>
#include <cmath>

#include "investsim/knapsack.hpp"

namespace investsim {

void StaticInvestmentInstance::validate() const {
  if (states.empty()) throw std::invalid_argument("static instance: no states");
  if (dist.size() != states.size())
    throw std::invalid_argument("static instance: dist/state count mismatch");
  double total = 0.0;
  for (double p : dist) {
    if (!(p >= 0.0))
      throw std::invalid_argument("static instance: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("static instance: dist must sum to 1");

  if (investments.empty())
    throw std::invalid_argument("static instance: no investments");
  bool has_free_option = false;
  for (const auto& inv : investments) {
    if (inv.values.size() != states.size())
      throw std::invalid_argument("static instance: investment not total over states");
    if (inv.cost == 0.0) has_free_option = true;
  }
  if (!has_free_option)
    throw std::invalid_argument("static instance: a zero-cost investment is required");

  if (scenarios.size() != states.size())
    throw std::invalid_argument("static instance: scenario/state count mismatch");
  for (const auto& scenario : scenarios) {
    scenario.validate();
    if (investor < 0 || investor >= scenario.num_bidders())
      throw std::invalid_argument("static instance: investor index out of range");
  }
}

AllocationInstance StaticInvestmentInstance::materialize(
    int state, const Investment& inv) const {
  AllocationInstance out = scenarios[state];
  out.profile.values[investor][kPacked] = inv.values[state];
  return out;
}

namespace {

// Utility at one state without pricing the other bidders.
double state_utility(const StaticInvestmentInstance& instance, int state,
                     const Investment& inv, const AllocationAlgorithm& x) {
  AllocationInstance scenario = instance.materialize(state, inv);
  const Allocation alloc = x.run(scenario);
  if (alloc.assignment[instance.investor] != kPacked) return -inv.cost;
  const double threshold =
      detail::threshold_price_inplace(x, scenario, instance.investor);
  if (threshold == kNeverPacked)
    throw MonotonicityViolation(
        "investor packed at its value but unpacked across the bracket",
        inv.values[state], kNeverPacked);
  return inv.values[state] - threshold - inv.cost;
}

}  // namespace

double realized_utility(const StaticInvestmentInstance& instance, int state,
                        const Investment& inv, const AllocationAlgorithm& x) {
  if (state < 0 || state >= instance.num_states())
    throw std::invalid_argument("realized_utility: state out of range");
  return state_utility(instance, state, inv, x);
}

double expected_utility(const StaticInvestmentInstance& instance,
                        const Investment& inv, const AllocationAlgorithm& x) {
  double total = 0.0;
  for (int s = 0; s < instance.num_states(); ++s) {
    if (instance.dist[s] == 0.0) continue;
    total += instance.dist[s] * state_utility(instance, s, inv, x);
  }
  return total;
}

double expected_welfare_alg(const StaticInvestmentInstance& instance,
                            const Investment& inv, const AllocationAlgorithm& x) {
  double total = 0.0;
  for (int s = 0; s < instance.num_states(); ++s) {
    if (instance.dist[s] == 0.0) continue;
    const AllocationInstance scenario = instance.materialize(s, inv);
    total += instance.dist[s] * welfare(scenario, x.run(scenario));
  }
  return total - inv.cost;
}

double expected_optimal_welfare(const StaticInvestmentInstance& instance,
                                const Investment& inv) {
  double total = 0.0;
  for (int s = 0; s < instance.num_states(); ++s) {
    if (instance.dist[s] == 0.0) continue;
    total += instance.dist[s] * optimal_welfare_value(instance.materialize(s, inv));
  }
  return total - inv.cost;
}

std::vector<int> best_response_set(const StaticInvestmentInstance& instance,
                                   const AllocationAlgorithm& x) {
  std::vector<double> utilities(instance.num_investments());
  for (int k = 0; k < instance.num_investments(); ++k)
    utilities[k] = expected_utility(instance, instance.investments[k], x);
  const double best = *std::max_element(utilities.begin(), utilities.end());
  std::vector<int> out;
  for (int k = 0; k < instance.num_investments(); ++k)
    if (utilities[k] >= best - kBestResponseTol) out.push_back(k);
  return out;
}

StaticApproxReport verify_static_approx(const StaticInvestmentInstance& instance,
                                        const AllocationAlgorithm& x, double beta) {
  StaticApproxReport report;
  report.beta = beta;
  report.best_responses = best_response_set(instance, x);

  double worst_br = std::numeric_limits<double>::infinity();
  for (int k : report.best_responses)
    worst_br = std::min(worst_br,
                        expected_welfare_alg(instance, instance.investments[k], x));
  double best_opt = -std::numeric_limits<double>::infinity();
  for (const auto& inv : instance.investments)
    best_opt = std::max(best_opt, expected_optimal_welfare(instance, inv));

  report.worst_br_welfare = worst_br;
  report.best_optimal_welfare = best_opt;
  report.margin = worst_br - beta * best_opt;
  report.pass = report.margin >= -kBestResponseTol;
  return report;
}

StaticInvestmentInstance table1_static_instance(double epsilon) {
  StaticInvestmentInstance inst;
  inst.states = {"s0"};
  inst.dist = {1.0};
  inst.investor = 0;
  inst.scenarios = {
      to_allocation_instance(table1_knapsack(epsilon), {"A", "B", "C"})};
  inst.investments = {{{1.0}, 0.0, "no-invest"},
                      {{2.0 + epsilon}, 1.0, "invest"}};
  return inst;
}

StaticInvestmentInstance sample_static_instance(Rng& rng,
                                                const StaticSampler& params) {
  StaticInvestmentInstance inst;
  const int num_states =
      params.min_states + static_cast<int>(rng.next_below(
                              params.max_states - params.min_states + 1));
  const int num_arms =
      params.min_arms +
      static_cast<int>(rng.next_below(params.max_arms - params.min_arms + 1));

  for (int s = 0; s < num_states; ++s) inst.states.push_back("s" + std::to_string(s));

  inst.dist.resize(num_states);
  double total = 0.0;
  for (double& p : inst.dist) {
    p = rng.uniform(0.05, 1.0);
    total += p;
  }
  for (double& p : inst.dist) p /= total;

  inst.investor = 0;
  for (int s = 0; s < num_states; ++s) {
    KnapsackInstance scenario;
    scenario.capacity = rng.uniform(params.min_capacity, params.max_capacity);
    // Item 0 is the investor; value overwritten per investment.
    scenario.items.push_back({0.0, rng.uniform(params.min_size, params.max_size)});
    // Anchor item: always fits, value at least 1.
    scenario.items.push_back(
        {rng.uniform(1.0, params.max_value), rng.uniform(params.min_size, 0.5 * scenario.capacity)});
    const int extra = params.min_other_items +
                      static_cast<int>(rng.next_below(
                          params.max_other_items - params.min_other_items + 1)) -
                      1;
    for (int i = 0; i < extra; ++i)
      scenario.items.push_back({rng.uniform(params.min_value, params.max_value),
                                rng.uniform(params.min_size, params.max_size)});
    inst.scenarios.push_back(to_allocation_instance(scenario));
  }

  for (int k = 0; k < num_arms; ++k) {
    Investment inv;
    inv.label = "arm" + std::to_string(k);
    inv.cost = k == 0 ? 0.0 : rng.uniform(0.0, params.max_cost);
    for (int s = 0; s < num_states; ++s)
      inv.values.push_back(rng.uniform(0.0, params.max_value));
    inst.investments.push_back(std::move(inv));
  }
  return inst;
}

}  // namespace investsim
