#include "investsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "investsim/knapsack.hpp"
#include "investsim/mechanism.hpp"
#include "investsim/serialize.hpp"

namespace investsim {

namespace {

bool close(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol; }

}  // namespace

Table1Report run_table1_checks(double epsilon) {
  Table1Report report;
  report.epsilon = epsilon;

  const SmartGreedyAlgorithm smart;
  const AllocationInstance base =
      to_allocation_instance(table1_knapsack(epsilon), {"A", "B", "C"});
  report.optimal_welfare = optimal_welfare(base).first;
  report.smart_greedy_welfare = welfare(base, smart.run(base));
  report.threshold_a = threshold_price(smart, base, 0);

  const StaticInvestmentInstance static_wrap = table1_static_instance(epsilon);
  const Investment& invest = static_wrap.investments[1];
  report.invested_welfare = expected_welfare_alg(static_wrap, invest, smart);
  report.invested_utility = realized_utility(static_wrap, 0, invest, smart);

  report.pass = close(report.optimal_welfare, 2.0) &&
                close(report.smart_greedy_welfare, 2.0) &&
                close(report.threshold_a, 1.0 + 2.0 * epsilon) &&
                close(report.invested_welfare, 1.0 + epsilon) &&
                close(report.invested_utility, -epsilon);
  return report;
}

AllocationRatioStudy run_allocation_ratio_study(int instances, int max_items,
                                                double beta, uint64_t seed) {
  AllocationRatioStudy study;
  study.instances = instances;
  study.beta = beta;
  study.min_ratio = 1.0;

  Rng rng(seed);
  KnapsackSampler sampler;
  sampler.max_items = max_items;
  for (int i = 0; i < instances; ++i) {
    const KnapsackInstance instance = sample_knapsack_instance(rng, sampler);
    const double w_alg = packed_value(instance, smart_greedy(instance));
    const double w_opt = packed_value(instance, exact_knapsack(instance));
    if (w_opt > 0.0) study.min_ratio = std::min(study.min_ratio, w_alg / w_opt);
    if (w_alg < beta * w_opt - kWelfareTol) ++study.violations;
  }
  study.pass = study.violations == 0;
  return study;
}

PropertyStudy run_property_study(int templates, uint64_t seed) {
  PropertyStudy study;
  study.templates = templates;
  study.greedy_monotone = study.greedy_xcone = true;
  study.smart_monotone = study.smart_xcone = true;

  const GreedyAlgorithm greedy_alg;
  const SmartGreedyAlgorithm smart_alg;
  const BrokenGreedyAlgorithm broken_alg;

  Rng rng(seed);
  KnapsackSampler sampler;
  sampler.min_items = 4;
  sampler.max_items = 4;
  for (int i = 0; i < templates; ++i) {
    const AllocationInstance tmpl =
        to_allocation_instance(sample_knapsack_instance(rng, sampler));
    // 4-point grids straddling the violator's trip value.
    ValueGrid grid;
    for (int b = 0; b < tmpl.num_bidders(); ++b) {
      std::vector<double> points = {rng.uniform(0.0, 0.5), rng.uniform(0.5, 1.0),
                                    rng.uniform(1.0, 1.5), rng.uniform(1.5, 2.05)};
      std::sort(points.begin(), points.end());
      grid.per_bidder.push_back(std::move(points));
    }

    const size_t index = static_cast<size_t>(i);
    if (!check_weak_monotone(greedy_alg, tmpl, grid, index).pass)
      study.greedy_monotone = false;
    if (!check_xcone(greedy_alg, tmpl, grid, index).pass) study.greedy_xcone = false;
    if (!check_weak_monotone(smart_alg, tmpl, grid, index).pass)
      study.smart_monotone = false;
    if (!check_xcone(smart_alg, tmpl, grid, index).pass) study.smart_xcone = false;

    if (!study.violator_monotone_fails) {
      const PropertyReport r = check_weak_monotone(broken_alg, tmpl, grid, index);
      if (!r.pass) {
        study.violator_monotone_fails = true;
        study.violator_monotone_witness = r.counterexamples.front();
      }
    }
    if (!study.violator_xcone_fails) {
      const PropertyReport r = check_xcone(broken_alg, tmpl, grid, index);
      if (!r.pass) {
        study.violator_xcone_fails = true;
        study.violator_xcone_witness = r.counterexamples.front();
      }
    }
  }
  study.pass = study.greedy_monotone && study.greedy_xcone &&
               study.smart_monotone && study.smart_xcone &&
               study.violator_monotone_fails && study.violator_xcone_fails;
  return study;
}

StaticApproxStudy run_static_approx_study(int instances, double beta,
                                          uint64_t seed) {
  StaticApproxStudy study;
  study.instances = instances;
  study.beta = beta;
  study.min_margin = std::numeric_limits<double>::infinity();

  const SmartGreedyAlgorithm smart;
  Rng rng(seed);
  for (int i = 0; i < instances; ++i) {
    const StaticInvestmentInstance instance = sample_static_instance(rng);
    const StaticApproxReport report = verify_static_approx(instance, smart, beta);
    study.min_margin = std::min(study.min_margin, report.margin);
    if (!report.pass) ++study.failures;
  }
  study.pass = study.failures == 0;
  return study;
}

std::vector<RegretStudyRow> run_exp3_regret_study(std::span<const int> arm_counts,
                                                  int horizon, int seeds,
                                                  uint64_t seed) {
  std::vector<RegretStudyRow> rows;
  const SmartGreedyAlgorithm smart;
  const OptimalAlgorithm optimal;

  for (int arms : arm_counts) {
    for (const bool indicator : {false, true}) {
      RegretStudyRow row;
      row.arms = arms;
      row.scenario = indicator ? "indicator" : "stationary";

      DynamicInvestmentInstance instance;
      const AllocationAlgorithm* algo = nullptr;
      if (indicator) {
        instance = gen_prop1_instance(arms, horizon, run_seed(seed, 1000 + arms));
        algo = &optimal;
      } else {
        // Stationary: one random environment repeated every round.
        RandomInstanceParams params;
        params.horizon = horizon;
        params.min_envs = params.max_envs = 1;
        params.min_arms = params.max_arms = arms;
        instance = gen_random_instance(params, run_seed(seed, 2000 + arms));
        algo = &smart;
      }

      const RoundTables tables = build_round_tables(instance, *algo);
      double total_regret = 0.0;
      for (int r = 0; r < seeds; ++r) {
        Exp3Learner learner(arms, horizon);
        const RunTrace trace =
            simulate_run(instance, tables, learner, run_seed(seed, r));
        total_regret += realized_regret(trace);
      }
      row.mean_regret = total_regret / seeds;
      row.bound = 2.7 * std::sqrt(static_cast<double>(horizon) * arms * std::log(arms)) *
                  (instance.u_max - instance.u_min);
      row.pass = row.mean_regret <= row.bound;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

DynApproxStudy run_theorem3_study(int instances, int horizon, int runs,
                                  double beta, uint64_t seed, int jobs) {
  DynApproxStudy study;
  study.instances = instances;
  study.beta = beta;
  study.min_margin_sigmas = std::numeric_limits<double>::infinity();

  const SmartGreedyAlgorithm smart;
  const LearnerSpec exp3{"exp3"};
  RandomInstanceParams params;
  params.horizon = horizon;
  for (int i = 0; i < instances; ++i) {
    const DynamicInvestmentInstance instance =
        gen_random_instance(params, run_seed(seed, i));
    const DynApproxReport report = verify_dynamic_approx(
        instance, smart, exp3, beta, runs, run_seed(seed, 50000 + i), jobs);
    if (report.margin_se > 0.0)
      study.min_margin_sigmas =
          std::min(study.min_margin_sigmas, report.margin_mean / report.margin_se);
    if (!report.pass) ++study.failures;
    study.reports.push_back(report);
  }
  study.pass = study.failures == 0;
  return study;
}

Prop1Study run_prop1_study(int arms, int horizon, int runs, uint64_t seed,
                           double ratio_lo, double ratio_hi, int jobs) {
  Prop1Study study;
  study.arms = arms;
  study.ratio_lo = ratio_lo;
  study.ratio_hi = ratio_hi;

  const DynamicInvestmentInstance instance =
      gen_prop1_instance(arms, horizon, run_seed(seed, 7));
  study.strong_benchmark = strongly_dynamic_welfare(instance);

  const OptimalAlgorithm optimal;
  const MonteCarloEstimates exp3 = expected_quantities(
      instance, optimal, LearnerSpec{"exp3"}, runs, run_seed(seed, 11), jobs);
  const MonteCarloEstimates uniform = expected_quantities(
      instance, optimal, LearnerSpec{"uniform"}, runs, run_seed(seed, 13), jobs);
  study.ratio_exp3 = exp3.welfare_mean / study.strong_benchmark;
  study.ratio_uniform = uniform.welfare_mean / study.strong_benchmark;

  study.pass = study.ratio_exp3 >= ratio_lo && study.ratio_exp3 <= ratio_hi &&
               study.ratio_uniform >= ratio_lo && study.ratio_uniform <= ratio_hi;
  return study;
}

Prop2Study run_prop2_study(int instances, int horizon, int runs, double beta,
                           uint64_t seed, int jobs) {
  Prop2Study study;
  study.instances = instances;
  study.beta = beta;

  const SmartGreedyAlgorithm smart;
  const LearnerSpec exp3{"exp3"};
  RandomInstanceParams params;
  params.horizon = horizon;
  for (int i = 0; i < instances; ++i) {
    const DynamicInvestmentInstance instance =
        gen_random_instance(params, run_seed(seed, 90000 + i));
    const StrongApproxReport report = verify_strong_approx(
        instance, smart, exp3, beta, runs, run_seed(seed, 130000 + i), jobs);
    if (!(report.chain_link1 && report.chain_link2)) ++study.chain_failures;
    if (!report.pass_mc) ++study.mc_failures;
  }
  study.pass = study.chain_failures == 0 && study.mc_failures == 0;
  return study;
}

CostShiftStudy run_cost_shift_study(int tuples, uint64_t seed) {
  CostShiftStudy study;
  study.tuples = tuples;

  const SmartGreedyAlgorithm smart;
  Rng rng(seed);
  RandomInstanceParams params;
  params.horizon = 8;  // the identity is per-cell; a short horizon suffices
  DynamicInvestmentInstance instance = gen_random_instance(params, rng.next_u64());
  int since_rebuild = 0;
  for (int i = 0; i < tuples; ++i) {
    if (++since_rebuild == 25) {
      instance = gen_random_instance(params, rng.next_u64());
      since_rebuild = 0;
    }
    const int env = static_cast<int>(rng.next_below(instance.num_envs()));
    const int state = static_cast<int>(rng.next_below(instance.num_states()));
    const int arm = static_cast<int>(rng.next_below(instance.num_arms()));
    const double delta = rng.uniform(-1.0, 1.0);

    const CostShiftCheck check =
        check_cost_shift(instance, smart, env, state, arm, delta);
    const double err = std::max({std::abs(check.utility_delta - delta),
                                 std::abs(check.welfare_delta - delta),
                                 std::abs(check.opt_welfare_delta - delta)});
    study.max_abs_error = std::max(study.max_abs_error, err);
    if (!check.allocation_unchanged || err > 1e-9) ++study.failures;
  }
  study.pass = study.failures == 0;
  return study;
}

DeterminismStudy run_determinism_study(uint64_t seed) {
  DeterminismStudy study;
  const SmartGreedyAlgorithm smart;

  const auto materialize = [&]() {
    RandomInstanceParams params;
    params.horizon = 500;
    const DynamicInvestmentInstance instance = gen_random_instance(params, seed);
    Exp3Learner learner(instance.num_arms(), instance.horizon);
    const RunTrace trace = simulate_run(instance, smart, learner, run_seed(seed, 0));
    return trace_to_csv(trace);
  };

  const std::string first = materialize();
  const std::string second = materialize();
  study.pass = first == second && !first.empty();
  study.csv_bytes = first.size();
  return study;
}

}  // namespace investsim
