#pragma once

#include <span>
#include <string>
#include <vector>

#include "investsim/alloc.hpp"

namespace investsim {

// Per-bidder packed-value candidates; each list sorted ascending,
// nonnegative.
struct ValueGrid {
  std::vector<std::vector<double>> per_bidder;

  void validate(int num_bidders) const;
  size_t profile_count() const;
};

inline constexpr size_t kMaxGridProfiles = 1'000'000;

struct PropertyCounterexample {
  size_t instance_index = 0;
  int bidder = 0;
  double value_from = 0.0;
  double value_to = 0.0;
  // Violated quantity: the monotonicity product or the welfare change.
  double witness = 0.0;
  // Packed values of the profile the violation was found at.
  std::vector<double> profile;
};

struct PropertyReport {
  std::string property;
  bool pass = true;
  std::vector<PropertyCounterexample> counterexamples;
};

// Exhaustive check of [v' - v] * [x_n(v', v_-n) - x_n(v)] >= -1e-9 over the
// grid product. Binary outcomes only; guarded by kMaxGridProfiles.
PropertyReport check_weak_monotone(const AllocationAlgorithm& x,
                                   const AllocationInstance& instance,
                                   const ValueGrid& grid,
                                   size_t instance_index = 0);

// Exhaustive check that confirming own-value changes never decrease welfare
// at the old values: sum_m v_m * [x_m(v', v_-n) - x_m(v)] >= -1e-9. With
// binary outcomes a change confirms when it moves weakly toward the bidder's
// current outcome (up if packed, down if unpacked).
PropertyReport check_xcone(const AllocationAlgorithm& x,
                           const AllocationInstance& instance,
                           const ValueGrid& grid, size_t instance_index = 0);

// min over the corpus of W_x / W*, skipping instances with W* = 0.
double estimate_allocation_ratio(const AllocationAlgorithm& x,
                                 std::span<const AllocationInstance> corpus);

PropertyReport merge_reports(std::span<const PropertyReport> reports);

}  // namespace investsim
