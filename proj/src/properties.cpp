#include "investsim/properties.hpp"

#include <algorithm>

namespace investsim {

void ValueGrid::validate(int num_bidders) const {
  if (per_bidder.size() != static_cast<size_t>(num_bidders))
    throw std::invalid_argument("grid: one candidate list per bidder required");
  for (const auto& candidates : per_bidder) {
    if (candidates.empty())
      throw std::invalid_argument("grid: empty candidate list");
    if (!std::is_sorted(candidates.begin(), candidates.end()))
      throw std::invalid_argument("grid: candidates must be sorted ascending");
    if (candidates.front() < 0.0)
      throw std::invalid_argument("grid: candidates must be nonnegative");
  }
}

size_t ValueGrid::profile_count() const {
  size_t count = 1;
  for (const auto& candidates : per_bidder) {
    count *= candidates.size();
    if (count > kMaxGridProfiles) return count;
  }
  return count;
}

namespace {

constexpr double kTol = 1e-9;

void require_checkable(const AllocationInstance& instance, const ValueGrid& grid) {
  if (!instance.is_binary())
    throw std::invalid_argument("property checkers require binary outcomes");
  grid.validate(instance.num_bidders());
  if (grid.profile_count() > kMaxGridProfiles)
    throw CapacityError("grid product exceeds the profile guard");
}

// Calls fn(packed_values) for every profile on the grid, mutating the
// scratch instance in place.
template <typename Fn>
void for_each_profile(AllocationInstance& scratch, const ValueGrid& grid, Fn&& fn) {
  const int n = scratch.num_bidders();
  std::vector<size_t> index(n, 0);
  std::vector<double> packed(n);
  for (;;) {
    for (int b = 0; b < n; ++b) {
      packed[b] = grid.per_bidder[b][index[b]];
      scratch.profile.values[b][kPacked] = packed[b];
    }
    fn(packed);
    int pos = n - 1;
    while (pos >= 0 && ++index[pos] == grid.per_bidder[pos].size()) {
      index[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
}

}  // namespace

PropertyReport check_weak_monotone(const AllocationAlgorithm& x,
                                   const AllocationInstance& instance,
                                   const ValueGrid& grid,
                                   size_t instance_index) {
  require_checkable(instance, grid);
  PropertyReport report;
  report.property = "weak_monotone";

  AllocationInstance scratch = instance;
  for_each_profile(scratch, grid, [&](const std::vector<double>& packed) {
    const Allocation base = x.run(scratch);
    for (int b = 0; b < scratch.num_bidders(); ++b) {
      const double v = packed[b];
      const int outcome_at_v = base.assignment[b] == kPacked ? 1 : 0;
      for (double alt : grid.per_bidder[b]) {
        if (alt == v) continue;
        scratch.profile.values[b][kPacked] = alt;
        const Allocation moved = x.run(scratch);
        scratch.profile.values[b][kPacked] = v;
        const int outcome_at_alt = moved.assignment[b] == kPacked ? 1 : 0;
        const double product = (alt - v) * (outcome_at_alt - outcome_at_v);
        if (product < -kTol) {
          report.counterexamples.push_back(
              {instance_index, b, v, alt, product, packed});
        }
      }
    }
  });
  report.pass = report.counterexamples.empty();
  return report;
}

PropertyReport check_xcone(const AllocationAlgorithm& x,
                           const AllocationInstance& instance,
                           const ValueGrid& grid, size_t instance_index) {
  require_checkable(instance, grid);
  PropertyReport report;
  report.property = "xcone";

  AllocationInstance scratch = instance;
  for_each_profile(scratch, grid, [&](const std::vector<double>& packed) {
    const Allocation base = x.run(scratch);
    for (int b = 0; b < scratch.num_bidders(); ++b) {
      const double v = packed[b];
      const bool packed_at_v = base.assignment[b] == kPacked;
      for (double alt : grid.per_bidder[b]) {
        if (alt == v) continue;
        // Confirming change: weakly toward the current outcome.
        if (packed_at_v ? alt < v : alt > v) continue;
        scratch.profile.values[b][kPacked] = alt;
        const Allocation moved = x.run(scratch);
        scratch.profile.values[b][kPacked] = v;
        double welfare_change = 0.0;
        for (int m = 0; m < scratch.num_bidders(); ++m) {
          const int delta = (moved.assignment[m] == kPacked ? 1 : 0) -
                            (base.assignment[m] == kPacked ? 1 : 0);
          welfare_change += packed[m] * delta;
        }
        if (welfare_change < -kTol) {
          report.counterexamples.push_back(
              {instance_index, b, v, alt, welfare_change, packed});
        }
      }
    }
  });
  report.pass = report.counterexamples.empty();
  return report;
}

double estimate_allocation_ratio(const AllocationAlgorithm& x,
                                 std::span<const AllocationInstance> corpus) {
  double min_ratio = 1.0;
  for (const auto& instance : corpus) {
    const double w_opt = optimal_welfare_value(instance);
    if (w_opt <= 0.0) continue;
    const double w_alg = welfare(instance, x.run(instance));
    min_ratio = std::min(min_ratio, w_alg / w_opt);
  }
  return min_ratio;
}

PropertyReport merge_reports(std::span<const PropertyReport> reports) {
  PropertyReport merged;
  merged.property = reports.empty() ? "" : reports.front().property;
  for (const auto& r : reports) {
    merged.pass = merged.pass && r.pass;
    merged.counterexamples.insert(merged.counterexamples.end(),
                                  r.counterexamples.begin(),
                                  r.counterexamples.end());
  }
  return merged;
}

}  // namespace investsim
