#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "investsim/dynamic.hpp"
#include "investsim/properties.hpp"

namespace investsim {

inline constexpr uint64_t kDefaultSeed = 20240801;

// Exact checks on the bundled three-bidder scenario: optimal and SmartGreedy
// welfare, the outside bidder's threshold price, and the welfare/utility of
// the invested variant.
struct Table1Report {
  double epsilon = 0.0;
  double optimal_welfare = 0.0;
  double smart_greedy_welfare = 0.0;
  double threshold_a = 0.0;
  double invested_welfare = 0.0;  // SmartGreedy welfare minus cost
  double invested_utility = 0.0;  // investor utility including cost
  bool pass = false;
};
Table1Report run_table1_checks(double epsilon = 0.05);

// SmartGreedy vs. the exhaustive oracle over seeded random knapsack
// instances.
struct AllocationRatioStudy {
  int instances = 0;
  double beta = 0.0;
  double min_ratio = 0.0;
  int violations = 0;
  bool pass = false;
};
AllocationRatioStudy run_allocation_ratio_study(int instances, int max_items,
                                                double beta, uint64_t seed);

// Weak monotonicity + XCONE over seeded 4-item templates with 4-point grids;
// greedy and smart_greedy must pass, broken_greedy must fail both.
struct PropertyStudy {
  int templates = 0;
  bool greedy_monotone = false, greedy_xcone = false;
  bool smart_monotone = false, smart_xcone = false;
  bool violator_monotone_fails = false, violator_xcone_fails = false;
  PropertyCounterexample violator_monotone_witness, violator_xcone_witness;
  bool pass = false;
};
PropertyStudy run_property_study(int templates, uint64_t seed);

// verify_static_approx over seeded random static instances.
struct StaticApproxStudy {
  int instances = 0;
  int failures = 0;
  double beta = 0.0;
  double min_margin = 0.0;
  bool pass = false;
};
StaticApproxStudy run_static_approx_study(int instances, double beta,
                                          uint64_t seed);

// Mean realized EXP3 regret over seeded runs against the rescaled bound
// 2.7 * sqrt(T K ln K) * (u_max - u_min).
struct RegretStudyRow {
  int arms = 0;
  std::string scenario;
  double mean_regret = 0.0;
  double bound = 0.0;
  bool pass = false;
};
std::vector<RegretStudyRow> run_exp3_regret_study(std::span<const int> arm_counts,
                                                  int horizon, int seeds,
                                                  uint64_t seed);

// verify_dynamic_approx over seeded random dynamic instances.
struct DynApproxStudy {
  int instances = 0;
  int failures = 0;
  double beta = 0.0;
  double min_margin_sigmas = 0.0;  // min over instances of margin / se
  std::vector<DynApproxReport> reports;
  bool pass = false;
};
DynApproxStudy run_theorem3_study(int instances, int horizon, int runs,
                                  double beta, uint64_t seed, int jobs = 1);

// Welfare ratio against the strongly dynamic benchmark on the indicator-arm
// instance, for EXP3 and uniform play.
struct Prop1Study {
  int arms = 0;
  double strong_benchmark = 0.0;
  double ratio_exp3 = 0.0;
  double ratio_uniform = 0.0;
  double ratio_lo = 0.0, ratio_hi = 0.0;
  bool pass = false;
};
Prop1Study run_prop1_study(int arms, int horizon, int runs, uint64_t seed,
                           double ratio_lo = 0.23, double ratio_hi = 0.30,
                           int jobs = 1);

// verify_strong_approx over seeded random dynamic instances: exact chain
// links plus the Monte-Carlo check at beta/|I|.
struct Prop2Study {
  int instances = 0;
  int chain_failures = 0;
  int mc_failures = 0;
  double beta = 0.0;
  bool pass = false;
};
Prop2Study run_prop2_study(int instances, int horizon, int runs, double beta,
                           uint64_t seed, int jobs = 1);

// Cost-shift identity over seeded (instance, env, state, arm, delta) tuples.
struct CostShiftStudy {
  int tuples = 0;
  int failures = 0;
  double max_abs_error = 0.0;
  bool pass = false;
};
CostShiftStudy run_cost_shift_study(int tuples, uint64_t seed);

// Two independent end-to-end materializations of the same seeded experiment
// must produce byte-identical trace CSV.
struct DeterminismStudy {
  bool pass = false;
  size_t csv_bytes = 0;
};
DeterminismStudy run_determinism_study(uint64_t seed);

}  // namespace investsim
