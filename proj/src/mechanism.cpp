#include "investsim/mechanism.hpp"

#include <algorithm>
#include <cmath>

namespace investsim {

namespace {

double max_value_present(const AllocationInstance& instance) {
  double m = 0.0;
  for (const auto& row : instance.profile.values)
    for (double v : row) m = std::max(m, v);
  return m;
}

bool packed_at(const AllocationAlgorithm& x, AllocationInstance& scratch,
               int bidder, double value) {
  scratch.profile.values[bidder][kPacked] = value;
  return x.run(scratch).assignment[bidder] == kPacked;
}

}  // namespace

namespace detail {

double threshold_price_inplace(const AllocationAlgorithm& x,
                               AllocationInstance& scratch, int bidder,
                               const ThresholdConfig& config) {
  if (!scratch.is_binary())
    throw std::invalid_argument("threshold_price: binary outcomes required");
  if (bidder < 0 || bidder >= scratch.num_bidders())
    throw std::invalid_argument("threshold_price: bidder out of range");

  const double original = scratch.profile.values[bidder][kPacked];
  const double cap = config.value_cap_factor * max_value_present(scratch);
  struct Restore {
    AllocationInstance& inst;
    int bidder;
    double value;
    ~Restore() { inst.profile.values[bidder][kPacked] = value; }
  } restore{scratch, bidder, original};

  const bool packed_low = packed_at(x, scratch, bidder, 0.0);
  const bool packed_high = packed_at(x, scratch, bidder, cap);
  if (packed_low && !packed_high)
    throw MonotonicityViolation(
        "bidder " + scratch.profile.bidders[bidder] +
            " packed at 0 but unpacked at the bracket top",
        0.0, cap);
  if (packed_low) return 0.0;
  if (!packed_high) return kNeverPacked;

  double lo = 0.0, hi = cap;
  for (int i = 0; i < config.bisection_iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (packed_at(x, scratch, bidder, mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace detail

double threshold_price(const AllocationAlgorithm& x,
                       const AllocationInstance& instance, int bidder,
                       const ThresholdConfig& config) {
  AllocationInstance scratch = instance;
  return detail::threshold_price_inplace(x, scratch, bidder, config);
}

MechanismOutcome run_mechanism(const AllocationAlgorithm& x,
                               const AllocationInstance& instance,
                               const ThresholdConfig& config) {
  MechanismOutcome out;
  out.allocation = x.run(instance);
  out.payments.payments.assign(instance.num_bidders(), 0.0);

  AllocationInstance scratch = instance;
  for (int n = 0; n < instance.num_bidders(); ++n) {
    if (out.allocation.assignment[n] != kPacked) continue;
    const double threshold = detail::threshold_price_inplace(x, scratch, n, config);
    const double reported = instance.profile.values[n][kPacked];
    if (threshold == kNeverPacked)
      throw MonotonicityViolation(
          "bidder " + instance.profile.bidders[n] +
              " packed at its report but unpacked across the bracket",
          reported, config.value_cap_factor * max_value_present(instance));
    if (reported < threshold - 1e-6)
      throw MonotonicityViolation(
          "bidder " + instance.profile.bidders[n] +
              " packed below its computed threshold",
          reported, threshold);
    out.payments.payments[n] = threshold;
  }
  return out;
}

double bidder_utility(const MechanismOutcome& outcome,
                      const ValueProfile& profile, int bidder) {
  const Outcome assigned = outcome.allocation.assignment[bidder];
  return profile.values[bidder][assigned] - outcome.payments.payments[bidder];
}

}  // namespace investsim
