#include "investsim/dynamic.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "investsim/knapsack.hpp"

namespace investsim {

void DynamicInvestmentInstance::validate() const {
  if (horizon < 1)
    throw std::invalid_argument("dynamic instance: horizon must be >= 1");
  if (env_of_round.size() != static_cast<size_t>(horizon))
    throw std::invalid_argument("dynamic instance: one env index per round required");
  if (envs.empty()) throw std::invalid_argument("dynamic instance: no envs");
  for (int32_t e : env_of_round)
    if (e < 0 || e >= num_envs())
      throw std::invalid_argument("dynamic instance: env index out of range");
  if (!(u_min < u_max))
    throw std::invalid_argument("dynamic instance: requires u_min < u_max");
  // Every env must form a valid static slice with the shared investments.
  for (int e = 0; e < num_envs(); ++e) {
    StaticInvestmentInstance slice;
    slice.states = states;
    slice.dist = envs[e].dist;
    slice.investor = investor;
    slice.investments = investments;
    slice.scenarios = envs[e].scenarios;
    slice.validate();
  }
}

StaticInvestmentInstance DynamicInvestmentInstance::round_slice(int t) const {
  if (t < 1 || t > horizon)
    throw std::invalid_argument("round_slice: round out of range");
  const RoundEnv& env = envs[env_of_round[t - 1]];
  StaticInvestmentInstance slice;
  slice.states = states;
  slice.dist = env.dist;
  slice.investor = investor;
  slice.investments = investments;
  slice.scenarios = env.scenarios;
  return slice;
}

ArmOutcome evaluate_cell(const DynamicInvestmentInstance& instance,
                         const AllocationAlgorithm& x, int env, int state,
                         int arm) {
  const Investment& inv = instance.investments[arm];
  AllocationInstance scenario = instance.envs[env].scenarios[state];
  scenario.profile.values[instance.investor][kPacked] = inv.values[state];

  ArmOutcome out;
  const Allocation alloc = x.run(scenario);
  out.packed = alloc.assignment[instance.investor] == kPacked;
  out.welfare_alg = welfare(scenario, alloc) - inv.cost;
  out.welfare_opt = optimal_welfare_value(scenario) - inv.cost;
  if (out.packed) {
    // Bracket the bisection by the largest arm value so the cap does not
    // depend on which arm is being evaluated.
    double top_arm_value = 0.0;
    for (const auto& option : instance.investments)
      top_arm_value = std::max(top_arm_value, option.values[state]);
    scenario.profile.values[instance.investor][kPacked] = top_arm_value;
    const double threshold =
        detail::threshold_price_inplace(x, scenario, instance.investor);
    if (threshold == kNeverPacked)
      throw MonotonicityViolation(
          "investor packed at its value but unpacked at the bracket top",
          inv.values[state], kNeverPacked);
    if (inv.values[state] < threshold - 1e-6)
      throw MonotonicityViolation("investor packed below its computed threshold",
                                  inv.values[state], threshold);
    out.payment = threshold;
    out.utility = inv.values[state] - threshold - inv.cost;
  } else {
    out.utility = -inv.cost;
  }
  return out;
}

RoundTables build_round_tables(const DynamicInvestmentInstance& instance,
                               const AllocationAlgorithm& x) {
  RoundTables tables;
  tables.num_states = instance.num_states();
  tables.num_arms = instance.num_arms();
  tables.cells.resize(instance.num_envs());
  for (int e = 0; e < instance.num_envs(); ++e) {
    tables.cells[e].resize(tables.num_states * tables.num_arms);
    for (int s = 0; s < tables.num_states; ++s)
      for (int k = 0; k < tables.num_arms; ++k)
        tables.cells[e][s * tables.num_arms + k] = evaluate_cell(instance, x, e, s, k);
  }
  return tables;
}

void set_normalization_bounds(DynamicInvestmentInstance& instance,
                              const AllocationAlgorithm& x) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int e = 0; e < instance.num_envs(); ++e)
    for (int s = 0; s < instance.num_states(); ++s)
      for (int k = 0; k < instance.num_arms(); ++k) {
        const double u = evaluate_cell(instance, x, e, s, k).utility;
        lo = std::min(lo, u);
        hi = std::max(hi, u);
      }
  if (!(lo < hi)) hi = lo + 1.0;
  instance.u_min = lo;
  instance.u_max = hi;
}

RunTrace simulate_run(const DynamicInvestmentInstance& instance,
                      const RoundTables& tables, Learner& learner,
                      uint64_t seed) {
  if (learner.num_arms() != instance.num_arms())
    throw std::invalid_argument("simulate_run: learner arm count mismatch");
  const int num_arms = instance.num_arms();

  RunTrace trace;
  trace.seed = seed;
  trace.rounds.reserve(instance.horizon);
  trace.arm_cumulative.assign(num_arms, 0.0);

  Rng rng(seed);
  for (int t = 1; t <= instance.horizon; ++t) {
    const int env = instance.env_of_round[t - 1];
    const int state = static_cast<int>(rng.sample_discrete(instance.envs[env].dist));
    const int arm = learner.choose(t, rng);
    if (arm < 0 || arm >= num_arms)
      throw ContractViolation("learner chose an arm out of range");

    RoundRecord record;
    record.t = t;
    record.state = state;
    record.arm = arm;
    record.counterfactual.resize(num_arms);
    for (int k = 0; k < num_arms; ++k) {
      const double u = tables.at(env, state, k).utility;
      record.counterfactual[k] = u;
      trace.arm_cumulative[k] += u;
    }
    const ArmOutcome& cell = tables.at(env, state, arm);
    record.utility_raw = cell.utility;
    record.utility_norm = instance.normalize(cell.utility);
    if (record.utility_norm < -1e-12 || record.utility_norm > 1.0 + 1e-12)
      throw ConfigError("simulate_run: utility outside normalization bounds");
    record.utility_norm = std::clamp(record.utility_norm, 0.0, 1.0);
    record.welfare_alg = cell.welfare_alg;
    record.welfare_opt = cell.welfare_opt;
    record.payment = cell.payment;

    learner.observe(t, arm, record.utility_norm);

    trace.total_welfare_alg += record.welfare_alg;
    trace.total_welfare_opt += record.welfare_opt;
    trace.total_utility += record.utility_raw;
    trace.rounds.push_back(std::move(record));
  }
  return trace;
}

RunTrace simulate_run(const DynamicInvestmentInstance& instance,
                      const AllocationAlgorithm& x, Learner& learner,
                      uint64_t seed) {
  return simulate_run(instance, build_round_tables(instance, x), learner, seed);
}

double realized_regret(const RunTrace& trace) {
  if (trace.arm_cumulative.empty()) return 0.0;
  const double best =
      *std::max_element(trace.arm_cumulative.begin(), trace.arm_cumulative.end());
  return best - trace.total_utility;
}

namespace {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(std::span<const double> xs) {
  MeanSe out;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) out.mean += x;
  out.mean /= n;
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return out;
}

// Expected optimal welfare per (env, arm): sum_s g(s) * W*(s, arm) - c.
std::vector<std::vector<double>> expected_opt_by_env_arm(
    const DynamicInvestmentInstance& instance) {
  std::vector<std::vector<double>> table(instance.num_envs(),
                                         std::vector<double>(instance.num_arms()));
  for (int e = 0; e < instance.num_envs(); ++e) {
    const RoundEnv& env = instance.envs[e];
    for (int k = 0; k < instance.num_arms(); ++k) {
      const Investment& inv = instance.investments[k];
      double total = 0.0;
      for (int s = 0; s < instance.num_states(); ++s) {
        if (env.dist[s] == 0.0) continue;
        AllocationInstance scenario = env.scenarios[s];
        scenario.profile.values[instance.investor][kPacked] = inv.values[s];
        total += env.dist[s] * optimal_welfare_value(scenario);
      }
      table[e][k] = total - inv.cost;
    }
  }
  return table;
}

}  // namespace

MonteCarloEstimates expected_quantities(const DynamicInvestmentInstance& instance,
                                        const AllocationAlgorithm& x,
                                        const LearnerSpec& learner, int runs,
                                        uint64_t base_seed, int jobs) {
  if (runs < 2)
    throw std::invalid_argument("expected_quantities: at least 2 runs required");
  const RoundTables tables = build_round_tables(instance, x);

  MonteCarloEstimates est;
  est.runs = runs;
  est.per_run_welfare.assign(runs, 0.0);
  est.per_run_regret.assign(runs, 0.0);
  const auto run_range = [&](int begin, int end) {
    for (int r = begin; r < end; ++r) {
      auto fresh = make_learner(learner.id, instance.num_arms(), instance.horizon);
      const RunTrace trace =
          simulate_run(instance, tables, *fresh, run_seed(base_seed, r));
      est.per_run_welfare[r] = trace.total_welfare_alg;
      est.per_run_regret[r] = realized_regret(trace);
    }
  };
  jobs = std::clamp(jobs, 1, runs);
  if (jobs == 1) {
    run_range(0, runs);
  } else {
    std::vector<std::thread> workers;
    const int chunk = (runs + jobs - 1) / jobs;
    for (int w = 0; w < jobs; ++w) {
      const int begin = w * chunk;
      const int end = std::min(runs, begin + chunk);
      if (begin < end) workers.emplace_back(run_range, begin, end);
    }
    for (auto& worker : workers) worker.join();
  }
  const MeanSe w = mean_se(est.per_run_welfare);
  const MeanSe reg = mean_se(est.per_run_regret);
  est.welfare_mean = w.mean;
  est.welfare_se = w.se;
  est.regret_mean = reg.mean;
  est.regret_se = reg.se;
  return est;
}

double best_fixed_welfare(const DynamicInvestmentInstance& instance) {
  const auto table = expected_opt_by_env_arm(instance);
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < instance.num_arms(); ++k) {
    double total = 0.0;
    for (int32_t e : instance.env_of_round) total += table[e][k];
    best = std::max(best, total);
  }
  return best;
}

double strongly_dynamic_welfare(const DynamicInvestmentInstance& instance) {
  const auto table = expected_opt_by_env_arm(instance);
  std::vector<double> env_max(instance.num_envs());
  for (int e = 0; e < instance.num_envs(); ++e)
    env_max[e] = *std::max_element(table[e].begin(), table[e].end());
  double total = 0.0;
  for (int32_t e : instance.env_of_round) total += env_max[e];
  return total;
}

DynApproxReport verify_dynamic_approx(const DynamicInvestmentInstance& instance,
                                      const AllocationAlgorithm& x,
                                      const LearnerSpec& learner, double beta,
                                      int runs, uint64_t base_seed, int jobs) {
  DynApproxReport report;
  report.beta = beta;
  report.benchmark = best_fixed_welfare(instance);

  const MonteCarloEstimates est =
      expected_quantities(instance, x, learner, runs, base_seed, jobs);
  report.welfare_mean = est.welfare_mean;
  report.regret_mean = est.regret_mean;

  std::vector<double> margins(est.runs);
  for (int r = 0; r < est.runs; ++r)
    margins[r] =
        est.per_run_welfare[r] + est.per_run_regret[r] - beta * report.benchmark;
  const MeanSe m = mean_se(margins);
  report.margin_mean = m.mean;
  report.margin_se = m.se;
  report.pass = m.mean >= -3.0 * m.se - 1e-9;
  return report;
}

StrongApproxReport verify_strong_approx(const DynamicInvestmentInstance& instance,
                                        const AllocationAlgorithm& x,
                                        const LearnerSpec& learner, double beta,
                                        int runs, uint64_t base_seed,
                                        int jobs) {
  StrongApproxReport report;
  report.beta = beta;
  const double k = static_cast<double>(instance.num_arms());
  report.benchmark_dyn = strongly_dynamic_welfare(instance);

  // Exact inequality chain on expected optimal welfare:
  // beta * max_k sum_t >= (beta/K) * sum_k sum_t >= (beta/K) * sum_t max_k.
  const auto table = expected_opt_by_env_arm(instance);
  double sum_all = 0.0;
  for (int32_t e : instance.env_of_round)
    for (int arm = 0; arm < instance.num_arms(); ++arm) sum_all += table[e][arm];
  report.chain_lhs = beta * best_fixed_welfare(instance);
  report.chain_mid = beta / k * sum_all;
  report.chain_rhs = beta / k * report.benchmark_dyn;
  report.chain_link1 = report.chain_lhs >= report.chain_mid - 1e-9;
  report.chain_link2 = report.chain_mid >= report.chain_rhs - 1e-9;

  const MonteCarloEstimates est =
      expected_quantities(instance, x, learner, runs, base_seed, jobs);
  report.welfare_mean = est.welfare_mean;
  report.regret_mean = est.regret_mean;
  std::vector<double> margins(est.runs);
  for (int r = 0; r < est.runs; ++r)
    margins[r] = est.per_run_welfare[r] + est.per_run_regret[r] -
                 beta / k * report.benchmark_dyn;
  const MeanSe m = mean_se(margins);
  report.margin_mean = m.mean;
  report.margin_se = m.se;
  report.pass_mc = m.mean >= -3.0 * m.se - 1e-9;
  report.pass = report.pass_mc && report.chain_link1 && report.chain_link2;
  return report;
}

CostShiftCheck check_cost_shift(const DynamicInvestmentInstance& instance,
                                const AllocationAlgorithm& x, int env,
                                int state, int arm, double delta) {
  const ArmOutcome before = evaluate_cell(instance, x, env, state, arm);

  DynamicInvestmentInstance shifted = instance;
  shifted.investments[arm].cost -= delta;
  const ArmOutcome after = evaluate_cell(shifted, x, env, state, arm);

  // Compare the full allocations, not just the investor's slot.
  const Investment& inv = instance.investments[arm];
  AllocationInstance scenario = instance.envs[env].scenarios[state];
  scenario.profile.values[instance.investor][kPacked] = inv.values[state];
  const Allocation alloc_before = x.run(scenario);
  AllocationInstance shifted_scenario = shifted.envs[env].scenarios[state];
  shifted_scenario.profile.values[shifted.investor][kPacked] =
      shifted.investments[arm].values[state];
  const Allocation alloc_after = x.run(shifted_scenario);

  CostShiftCheck check;
  check.allocation_unchanged = alloc_before == alloc_after;
  check.utility_delta = after.utility - before.utility;
  check.welfare_delta = after.welfare_alg - before.welfare_alg;
  check.opt_welfare_delta = after.welfare_opt - before.welfare_opt;
  return check;
}

DynamicInvestmentInstance gen_table1_dynamic(int horizon, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.25))
    throw std::invalid_argument("gen_table1_dynamic: epsilon must be in (0, 0.25)");
  DynamicInvestmentInstance inst;
  inst.horizon = horizon;
  inst.states = {"s0"};
  inst.investor = 0;
  inst.investments = {{{1.0}, 0.0, "no-invest"}, {{2.0 + epsilon}, 1.0, "invest"}};

  RoundEnv env;
  env.dist = {1.0};
  env.scenarios = {
      to_allocation_instance(table1_knapsack(epsilon), {"A", "B", "C"})};
  inst.envs.push_back(std::move(env));
  inst.env_of_round.assign(horizon, 0);

  set_normalization_bounds(inst, SmartGreedyAlgorithm{});
  return inst;
}

DynamicInvestmentInstance gen_prop1_instance(int num_arms, int horizon,
                                             uint64_t seed) {
  if (num_arms < 2)
    throw std::invalid_argument("gen_prop1_instance: at least 2 arms required");
  DynamicInvestmentInstance inst;
  inst.horizon = horizon;
  inst.investor = 0;

  // Single bidder, one unconstrained slot: feasible set is {empty, packed}.
  KnapsackInstance slot;
  slot.capacity = 1.0;
  slot.items = {{0.0, 0.5}};
  const AllocationInstance scenario = to_allocation_instance(slot, {"inv"});

  for (int i = 0; i < num_arms; ++i) {
    inst.states.push_back("s" + std::to_string(i));
  }
  for (int k = 0; k < num_arms; ++k) {
    Investment inv;
    inv.label = "arm" + std::to_string(k);
    inv.cost = 0.0;
    inv.values.assign(num_arms, 0.0);
    inv.values[k] = 1.0;
    inst.investments.push_back(std::move(inv));
  }

  // One degenerate environment per state; each round draws one uniformly.
  for (int s = 0; s < num_arms; ++s) {
    RoundEnv env;
    env.dist.assign(num_arms, 0.0);
    env.dist[s] = 1.0;
    env.scenarios.assign(num_arms, scenario);
    inst.envs.push_back(std::move(env));
  }
  Rng rng(seed);
  inst.env_of_round.resize(horizon);
  for (int t = 0; t < horizon; ++t)
    inst.env_of_round[t] = static_cast<int32_t>(rng.next_below(num_arms));

  inst.u_min = 0.0;
  inst.u_max = 1.0;
  return inst;
}

DynamicInvestmentInstance gen_random_instance(const RandomInstanceParams& params,
                                              uint64_t seed) {
  Rng rng(seed);
  DynamicInvestmentInstance inst;
  inst.horizon = params.horizon;
  inst.investor = 0;

  const int num_states =
      params.min_states +
      static_cast<int>(rng.next_below(params.max_states - params.min_states + 1));
  const int num_arms =
      params.min_arms +
      static_cast<int>(rng.next_below(params.max_arms - params.min_arms + 1));
  const int num_envs =
      params.min_envs +
      static_cast<int>(rng.next_below(params.max_envs - params.min_envs + 1));

  for (int s = 0; s < num_states; ++s) inst.states.push_back("s" + std::to_string(s));

  for (int k = 0; k < num_arms; ++k) {
    Investment inv;
    inv.label = "arm" + std::to_string(k);
    inv.cost = k == 0 ? 0.0 : rng.uniform(0.0, params.max_cost);
    for (int s = 0; s < num_states; ++s)
      inv.values.push_back(rng.uniform(0.0, params.max_value));
    inst.investments.push_back(std::move(inv));
  }

  for (int e = 0; e < num_envs; ++e) {
    RoundEnv env;
    env.dist.resize(num_states);
    double total = 0.0;
    for (double& p : env.dist) {
      p = rng.uniform(0.05, 1.0);
      total += p;
    }
    for (double& p : env.dist) p /= total;

    for (int s = 0; s < num_states; ++s) {
      KnapsackInstance scenario;
      scenario.capacity = rng.uniform(params.min_capacity, params.max_capacity);
      scenario.items.push_back(
          {0.0, rng.uniform(params.min_size, params.max_size)});
      scenario.items.push_back({rng.uniform(1.0, params.max_value),
                                rng.uniform(params.min_size, 0.5 * scenario.capacity)});
      const int extra =
          params.min_other_items +
          static_cast<int>(rng.next_below(params.max_other_items -
                                          params.min_other_items + 1)) -
          1;
      for (int i = 0; i < extra; ++i)
        scenario.items.push_back({rng.uniform(params.min_value, params.max_value),
                                  rng.uniform(params.min_size, params.max_size)});
      env.scenarios.push_back(to_allocation_instance(scenario));
    }
    inst.envs.push_back(std::move(env));
  }

  inst.env_of_round.resize(params.horizon);
  for (int t = 0; t < params.horizon; ++t)
    inst.env_of_round[t] = static_cast<int32_t>(rng.next_below(num_envs));

  set_normalization_bounds(inst, SmartGreedyAlgorithm{});
  return inst;
}

}  // namespace investsim
