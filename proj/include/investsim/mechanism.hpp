#pragma once

#include <limits>
#include <vector>

#include "investsim/alloc.hpp"

namespace investsim {

struct PaymentProfile {
  std::vector<double> payments;  // per bidder; unpacked bidders pay 0
};

struct MechanismOutcome {
  Allocation allocation;
  PaymentProfile payments;
};

struct ThresholdConfig {
  // Bisection bracket is [0, value_cap_factor * max value present].
  double value_cap_factor = 10.0;
  int bisection_iters = 60;
};

// Sentinel for bidders that stay unpacked across the whole bracket.
inline constexpr double kNeverPacked = std::numeric_limits<double>::infinity();

// Infimum packed-value at which `bidder` is packed, holding the others
// fixed; +inf when unpacked even at the bracket top. Requires binary
// outcomes and a weakly monotone algorithm; a packed-below/unpacked-above
// witness raises MonotonicityViolation.
double threshold_price(const AllocationAlgorithm& x,
                       const AllocationInstance& instance, int bidder,
                       const ThresholdConfig& config = {});

// Allocation by x plus threshold payments: unpacked bidders pay 0, packed
// bidders pay their threshold price.
MechanismOutcome run_mechanism(const AllocationAlgorithm& x,
                               const AllocationInstance& instance,
                               const ThresholdConfig& config = {});

// Value at the assigned outcome minus the payment.
double bidder_utility(const MechanismOutcome& outcome,
                      const ValueProfile& profile, int bidder);

namespace detail {

// In-place variant for hot loops: mutates the bidder's packed value during
// bisection and restores it before returning.
double threshold_price_inplace(const AllocationAlgorithm& x,
                               AllocationInstance& scratch, int bidder,
                               const ThresholdConfig& config = {});

}  // namespace detail

}  // namespace investsim
