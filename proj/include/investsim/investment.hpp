#pragma once

#include <string>
#include <vector>

#include "investsim/alloc.hpp"
#include "investsim/mechanism.hpp"
#include "investsim/rng.hpp"

namespace investsim {

// One investment option: the investor's packed value per state, and a cost.
// Negative costs (disinvestments) are valid.
struct Investment {
  std::vector<double> values;  // indexed by state
  double cost = 0.0;
  std::string label;
};

inline constexpr double kBestResponseTol = 1e-9;

struct StaticInvestmentInstance {
  std::vector<std::string> states;
  std::vector<double> dist;  // over states, sums to 1
  int investor = 0;          // bidder index in every scenario
  std::vector<Investment> investments;
  // Per-state allocation scenario. The investor's packed value is a
  // placeholder, overwritten by the chosen investment's value at that state.
  std::vector<AllocationInstance> scenarios;

  int num_states() const { return static_cast<int>(states.size()); }
  int num_investments() const { return static_cast<int>(investments.size()); }
  void validate() const;

  // Scenario at `state` with the investor's value set from `inv`.
  AllocationInstance materialize(int state, const Investment& inv) const;
};

// nu(s) * x - p - c at the realized state, with threshold payments.
double realized_utility(const StaticInvestmentInstance& instance, int state,
                        const Investment& inv, const AllocationAlgorithm& x);

// Exact expectations over the (finite) state distribution; never sampled.
double expected_utility(const StaticInvestmentInstance& instance,
                        const Investment& inv, const AllocationAlgorithm& x);
double expected_welfare_alg(const StaticInvestmentInstance& instance,
                            const Investment& inv, const AllocationAlgorithm& x);
double expected_optimal_welfare(const StaticInvestmentInstance& instance,
                                const Investment& inv);

// Indices of all investments within kBestResponseTol of the max expected
// utility.
std::vector<int> best_response_set(const StaticInvestmentInstance& instance,
                                   const AllocationAlgorithm& x);

struct StaticApproxReport {
  bool pass = false;
  double beta = 0.0;
  double worst_br_welfare = 0.0;    // min over best responses of E[W_x] - c
  double best_optimal_welfare = 0.0;  // max over all investments of E[W*] - c
  double margin = 0.0;              // worst_br_welfare - beta * best_optimal_welfare
  std::vector<int> best_responses;
};

// Pessimistic check: the worst best-response welfare must reach beta times
// the best achievable optimal welfare (tolerance 1e-9).
StaticApproxReport verify_static_approx(const StaticInvestmentInstance& instance,
                                        const AllocationAlgorithm& x, double beta);

// Single-state wrap of the bundled three-bidder scenario. Investor is bidder
// A; options are no-invest (value 1, cost 0) and invest (value 2+eps, cost 1).
StaticInvestmentInstance table1_static_instance(double epsilon = 0.05);

struct StaticSampler {
  int min_states = 1, max_states = 3;
  int min_arms = 2, max_arms = 4;
  int min_other_items = 2, max_other_items = 5;
  double min_value = 0.2, max_value = 2.0;
  double min_size = 0.1, max_size = 1.0;
  double min_capacity = 0.6, max_capacity = 1.5;
  double max_cost = 0.3;
};

// Random knapsack-backed static instance. Every state scenario carries one
// anchor item that always fits, so optimal welfare stays above any cost.
StaticInvestmentInstance sample_static_instance(Rng& rng,
                                                const StaticSampler& params = {});

}  // namespace investsim
