#include "investsim/knapsack.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "investsim/subset_scan.hpp"

namespace investsim {

void KnapsackInstance::validate() const {
  if (!(capacity > 0.0))
    throw std::invalid_argument("knapsack: capacity must be positive");
  for (const auto& item : items) {
    if (!(item.size > 0.0))
      throw std::invalid_argument("knapsack: item sizes must be positive");
    if (!(item.value >= 0.0))
      throw std::invalid_argument("knapsack: item values must be nonnegative");
  }
}

std::vector<int> PackedSet::indices() const {
  std::vector<int> out;
  uint64_t m = mask;
  while (m != 0) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

double packed_value(const KnapsackInstance& instance, PackedSet set) {
  double total = 0.0;
  for (int i : set.indices()) total += instance.items[i].value;
  return total;
}

double packed_size(const KnapsackInstance& instance, PackedSet set) {
  double total = 0.0;
  for (int i : set.indices()) total += instance.items[i].size;
  return total;
}

std::vector<int> ratio_order(const KnapsackInstance& instance) {
  std::vector<int> order(instance.items.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double lhs = instance.items[a].value * instance.items[b].size;
    const double rhs = instance.items[b].value * instance.items[a].size;
    if (lhs != rhs) return lhs > rhs;
    return a < b;
  });
  return order;
}

PackedSet greedy(const KnapsackInstance& instance, GreedyVariant variant) {
  PackedSet packed;
  double used = 0.0;
  for (int i : ratio_order(instance)) {
    if (used + instance.items[i].size <= instance.capacity) {
      packed.mask |= uint64_t{1} << i;
      used += instance.items[i].size;
    } else if (variant == GreedyVariant::kStopAtFirstMisfit) {
      break;
    }
  }
  return packed;
}

PackedSet smart_greedy(const KnapsackInstance& instance) {
  const PackedSet bundle = greedy(instance);
  int best_single = -1;
  for (int i = 0; i < instance.num_items(); ++i) {
    if (instance.items[i].size > instance.capacity) continue;
    if (best_single < 0 ||
        instance.items[i].value > instance.items[best_single].value)
      best_single = i;
  }
  if (best_single < 0) return bundle;
  if (packed_value(instance, bundle) >= instance.items[best_single].value)
    return bundle;
  return PackedSet{uint64_t{1} << best_single};
}

PackedSet exact_knapsack(const KnapsackInstance& instance) {
  const int n = instance.num_items();
  if (n > kExactKnapsackMaxItems)
    throw CapacityError("exact_knapsack: more than " +
                        std::to_string(kExactKnapsackMaxItems) + " items");
  if (n == 0) return {};

  std::vector<double> values(n), sizes(n);
  for (int i = 0; i < n; ++i) {
    values[i] = instance.items[i].value;
    sizes[i] = instance.items[i].size;
  }
  const SubsetTables tables = build_subset_tables(values, sizes);
  const SubsetScanResult scan = scan_subsets(tables, instance.capacity);
  if (scan.best_count <= 1) return PackedSet{scan.best_mask};

  // Value ties: rescan for the lexicographically smallest index set. The
  // per-mask values below are bit-identical to the kernel's.
  uint32_t best = scan.best_mask;
  for (uint32_t m = 0; m < tables.mask_count(); ++m) {
    if (tables.size(m) > instance.capacity) continue;
    if (tables.value(m) != scan.best_value) continue;
    if (lex_set_less(m, best)) best = m;
  }
  return PackedSet{best};
}

AllocationInstance to_allocation_instance(const KnapsackInstance& instance,
                                          std::vector<std::string> bidder_names) {
  const int n = instance.num_items();
  if (n > kToAllocationMaxItems)
    throw CapacityError("to_allocation_instance: more than " +
                        std::to_string(kToAllocationMaxItems) + " items");
  if (bidder_names.empty()) {
    bidder_names.reserve(n);
    for (int i = 0; i < n; ++i) bidder_names.push_back("b" + std::to_string(i));
  }
  if (bidder_names.size() != static_cast<size_t>(n))
    throw std::invalid_argument("to_allocation_instance: name count mismatch");

  AllocationInstance out;
  out.outcomes = binary_outcomes();
  out.profile.bidders = std::move(bidder_names);
  out.profile.values.resize(n);
  for (int i = 0; i < n; ++i)
    out.profile.values[i] = {0.0, instance.items[i].value};

  KnapsackStructure ks;
  ks.capacity = instance.capacity;
  ks.sizes.resize(n);
  for (int i = 0; i < n; ++i) ks.sizes[i] = instance.items[i].size;
  ks.feasible_is_all_subsets = true;

  const uint32_t mask_count = 1u << n;
  for (uint32_t m = 0; m < mask_count; ++m) {
    double total = 0.0;
    for (int i = 0; i < n; ++i)
      if ((m >> i) & 1u) total += ks.sizes[i];
    if (total > ks.capacity) continue;
    Allocation a;
    a.assignment.resize(n);
    for (int i = 0; i < n; ++i)
      a.assignment[i] = ((m >> i) & 1u) ? kPacked : kNotPacked;
    out.feasible.push_back(std::move(a));
  }
  out.knapsack = std::move(ks);
  return out;
}

Allocation to_allocation(const KnapsackInstance& instance, PackedSet set) {
  Allocation a;
  a.assignment.resize(instance.num_items(), kNotPacked);
  for (int i : set.indices()) a.assignment[i] = kPacked;
  return a;
}

KnapsackInstance table1_knapsack(double epsilon) {
  KnapsackInstance inst;
  inst.capacity = 1.0;
  inst.items = {{1.0, 0.5 + epsilon}, {1.0, 0.5}, {1.0, 0.5}};
  return inst;
}

KnapsackInstance table1_knapsack_invested(double epsilon) {
  KnapsackInstance inst = table1_knapsack(epsilon);
  inst.items[0].value = 2.0 + epsilon;
  return inst;
}

KnapsackInstance sample_knapsack_instance(Rng& rng,
                                          const KnapsackSampler& params) {
  KnapsackInstance inst;
  const int n = params.min_items +
                static_cast<int>(rng.next_below(
                    static_cast<uint64_t>(params.max_items - params.min_items + 1)));
  inst.items.reserve(n);
  for (int i = 0; i < n; ++i)
    inst.items.push_back({rng.uniform(params.min_value, params.max_value),
                          rng.uniform(params.min_size, params.max_size)});
  inst.capacity = rng.uniform(params.min_capacity, params.max_capacity);
  return inst;
}

KnapsackInstance knapsack_view(const AllocationInstance& instance) {
  if (!instance.knapsack)
    throw std::domain_error("algorithm requires knapsack metadata");
  if (!instance.is_binary())
    throw std::domain_error("algorithm requires binary outcomes");
  KnapsackInstance view;
  view.capacity = instance.knapsack->capacity;
  const int n = instance.num_bidders();
  view.items.resize(n);
  for (int i = 0; i < n; ++i) {
    view.items[i].value = instance.profile.values[i][kPacked];
    view.items[i].size = instance.knapsack->sizes[i];
  }
  return view;
}

Allocation GreedyAlgorithm::run(const AllocationInstance& instance) const {
  const KnapsackInstance view = knapsack_view(instance);
  return to_allocation(view, greedy(view, variant_));
}

Allocation SmartGreedyAlgorithm::run(const AllocationInstance& instance) const {
  const KnapsackInstance view = knapsack_view(instance);
  return to_allocation(view, smart_greedy(view));
}

Allocation OptimalAlgorithm::run(const AllocationInstance& instance) const {
  return optimal_welfare(instance).second;
}

Allocation BrokenGreedyAlgorithm::run(const AllocationInstance& instance) const {
  const KnapsackInstance view = knapsack_view(instance);
  PackedSet packed = greedy(view);
  bool tripped = false;
  for (const auto& item : view.items)
    if (item.value > trip_value_) tripped = true;
  if (tripped) {
    const std::vector<int> order = ratio_order(view);
    int seen = 0;
    for (int i : order) {
      if (!packed.contains(i)) continue;
      if (++seen == 2) {
        packed.mask &= ~(uint64_t{1} << i);
        break;
      }
    }
  }
  return to_allocation(view, packed);
}

std::unique_ptr<AllocationAlgorithm> make_algorithm(std::string_view id) {
  if (id == "greedy") return std::make_unique<GreedyAlgorithm>();
  if (id == "greedy-continuing")
    return std::make_unique<GreedyAlgorithm>(GreedyVariant::kPackAllFitting);
  if (id == "smart_greedy") return std::make_unique<SmartGreedyAlgorithm>();
  if (id == "optimal") return std::make_unique<OptimalAlgorithm>();
  if (id == "broken_greedy") return std::make_unique<BrokenGreedyAlgorithm>();
  throw std::invalid_argument("unknown allocation algorithm: " + std::string(id));
}

}  // namespace investsim
