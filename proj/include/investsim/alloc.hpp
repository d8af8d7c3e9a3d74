#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "investsim/errors.hpp"

namespace investsim {

// Outcome = index into OutcomeSpace::labels.
using Outcome = int;

inline constexpr Outcome kNotPacked = 0;
inline constexpr Outcome kPacked = 1;

struct OutcomeSpace {
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(labels.size()); }
  bool is_binary() const { return labels.size() == 2; }
};

// The binary family {0, 1}: not packed / packed.
OutcomeSpace binary_outcomes();

struct ValueProfile {
  std::vector<std::string> bidders;
  // values[bidder][outcome], nonnegative welfare units.
  std::vector<std::vector<double>> values;

  int num_bidders() const { return static_cast<int>(bidders.size()); }
};

struct Allocation {
  std::vector<Outcome> assignment;  // one outcome per bidder

  bool operator==(const Allocation&) const = default;
};

// Capacity metadata for instances converted from the knapsack family; lets
// ratio-based algorithms run without touching the explicit feasible list.
struct KnapsackStructure {
  std::vector<double> sizes;
  double capacity = 0.0;
  // True when `feasible` is exactly the set of capacity-respecting subsets,
  // enumerated in ascending mask order.
  bool feasible_is_all_subsets = false;
};

struct AllocationInstance {
  OutcomeSpace outcomes;
  ValueProfile profile;
  std::vector<Allocation> feasible;
  std::optional<KnapsackStructure> knapsack;

  int num_bidders() const { return profile.num_bidders(); }
  bool is_binary() const { return outcomes.is_binary(); }
  // Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

// Deterministic allocation algorithm with a stable identifier. Output must be
// a member of the instance's feasible set.
class AllocationAlgorithm {
 public:
  virtual ~AllocationAlgorithm() = default;
  virtual std::string_view id() const = 0;
  virtual Allocation run(const AllocationInstance& instance) const = 0;
};

inline constexpr size_t kMaxFeasibleEnumeration = size_t{1} << 20;
inline constexpr double kWelfareTol = 1e-9;

// Sum of bidder values at their assigned outcomes. Throws std::domain_error
// if the allocation is not feasible in the instance.
double welfare(const AllocationInstance& instance, const Allocation& alloc);

// Max welfare over the explicit feasible set, plus the first argmax in
// feasible-set order. Guarded by kMaxFeasibleEnumeration.
std::pair<double, Allocation> optimal_welfare(const AllocationInstance& instance);

// Value-only variant; uses the subset-scan kernel on instances whose feasible
// set is the full capacity-respecting family.
double optimal_welfare_value(const AllocationInstance& instance);

struct BetaViolation {
  size_t instance_index = 0;
  double algorithm_welfare = 0.0;
  double optimal_welfare = 0.0;
};

struct BetaReport {
  double beta = 0.0;
  double min_ratio = 1.0;  // over instances with positive optimal welfare
  std::vector<BetaViolation> violations;

  bool pass() const { return violations.empty(); }
};

// Flags every instance where W_x < beta * W* - 1e-9.
BetaReport check_beta_allocation(const AllocationAlgorithm& x,
                                 std::span<const AllocationInstance> instances,
                                 double beta);

}  // namespace investsim
