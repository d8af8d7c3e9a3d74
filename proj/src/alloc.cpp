#include "investsim/alloc.hpp"

#include <algorithm>
#include <cmath>

#include "investsim/subset_scan.hpp"

namespace investsim {

OutcomeSpace binary_outcomes() { return OutcomeSpace{{"0", "1"}}; }

void AllocationInstance::validate() const {
  if (outcomes.labels.empty())
    throw std::invalid_argument("instance: outcome space is empty");
  for (size_t i = 0; i < outcomes.labels.size(); ++i)
    for (size_t j = i + 1; j < outcomes.labels.size(); ++j)
      if (outcomes.labels[i] == outcomes.labels[j])
        throw std::invalid_argument("instance: duplicate outcome label " +
                                    outcomes.labels[i]);

  const int n = num_bidders();
  if (profile.values.size() != static_cast<size_t>(n))
    throw std::invalid_argument("instance: bidder/value row count mismatch");
  for (const auto& row : profile.values) {
    if (row.size() != outcomes.labels.size())
      throw std::invalid_argument("instance: missing value for some outcome");
    for (double v : row)
      if (!(v >= 0.0))
        throw std::invalid_argument("instance: negative or NaN value");
  }
  if (is_binary()) {
    for (const auto& row : profile.values)
      if (row[kNotPacked] != 0.0)
        throw std::invalid_argument(
            "instance: binary family requires zero not-packed value");
  }

  if (feasible.empty())
    throw std::invalid_argument("instance: feasible set is empty");
  for (const auto& a : feasible) {
    if (a.assignment.size() != static_cast<size_t>(n))
      throw std::invalid_argument("instance: allocation arity mismatch");
    for (Outcome o : a.assignment)
      if (o < 0 || o >= outcomes.size())
        throw std::invalid_argument("instance: allocation outcome out of range");
  }
}

namespace {

bool capacity_feasible(const KnapsackStructure& ks, const Allocation& alloc) {
  double total = 0.0;
  for (size_t i = 0; i < alloc.assignment.size(); ++i)
    if (alloc.assignment[i] == kPacked) total += ks.sizes[i];
  return total <= ks.capacity;
}

bool is_feasible(const AllocationInstance& instance, const Allocation& alloc) {
  if (alloc.assignment.size() != static_cast<size_t>(instance.num_bidders()))
    return false;
  for (Outcome o : alloc.assignment)
    if (o < 0 || o >= instance.outcomes.size()) return false;
  if (instance.knapsack && instance.knapsack->feasible_is_all_subsets)
    return capacity_feasible(*instance.knapsack, alloc);
  return std::find(instance.feasible.begin(), instance.feasible.end(), alloc) !=
         instance.feasible.end();
}

// True when the subset-scan kernel can evaluate optimal welfare directly.
bool kernel_eligible(const AllocationInstance& instance) {
  if (!instance.is_binary() || !instance.knapsack ||
      !instance.knapsack->feasible_is_all_subsets)
    return false;
  if (instance.num_bidders() > kSubsetScanMaxItems) return false;
  for (const auto& row : instance.profile.values)
    if (row[kNotPacked] != 0.0) return false;
  return true;
}

}  // namespace

double welfare(const AllocationInstance& instance, const Allocation& alloc) {
  if (!is_feasible(instance, alloc))
    throw std::domain_error("welfare: allocation not feasible in instance");
  double total = 0.0;
  for (int n = 0; n < instance.num_bidders(); ++n)
    total += instance.profile.values[n][alloc.assignment[n]];
  return total;
}

std::pair<double, Allocation> optimal_welfare(
    const AllocationInstance& instance) {
  if (instance.feasible.empty())
    throw std::invalid_argument("optimal_welfare: empty feasible set");
  if (instance.feasible.size() > kMaxFeasibleEnumeration)
    throw CapacityError("optimal_welfare: feasible set exceeds enumeration guard");

  double best = -1.0;
  size_t best_index = 0;
  for (size_t i = 0; i < instance.feasible.size(); ++i) {
    double total = 0.0;
    const auto& a = instance.feasible[i].assignment;
    for (int n = 0; n < instance.num_bidders(); ++n)
      total += instance.profile.values[n][a[n]];
    if (total > best) {
      best = total;
      best_index = i;
    }
  }
  return {best, instance.feasible[best_index]};
}

double optimal_welfare_value(const AllocationInstance& instance) {
  if (kernel_eligible(instance)) {
    const int n = instance.num_bidders();
    std::vector<double> values(n);
    for (int i = 0; i < n; ++i)
      values[i] = instance.profile.values[i][kPacked];
    return scan_subsets(values, instance.knapsack->sizes,
                        instance.knapsack->capacity)
        .best_value;
  }
  return optimal_welfare(instance).first;
}

BetaReport check_beta_allocation(const AllocationAlgorithm& x,
                                 std::span<const AllocationInstance> instances,
                                 double beta) {
  BetaReport report;
  report.beta = beta;
  for (size_t i = 0; i < instances.size(); ++i) {
    const double w_alg = welfare(instances[i], x.run(instances[i]));
    const double w_opt = optimal_welfare_value(instances[i]);
    if (w_opt > 0.0)
      report.min_ratio = std::min(report.min_ratio, w_alg / w_opt);
    if (w_alg < beta * w_opt - kWelfareTol)
      report.violations.push_back({i, w_alg, w_opt});
  }
  return report;
}

}  // namespace investsim
