#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "investsim/alloc.hpp"
#include "investsim/rng.hpp"

namespace investsim {

struct KnapsackItem {
  double value = 0.0;
  double size = 0.0;
};

struct KnapsackInstance {
  std::vector<KnapsackItem> items;
  double capacity = 0.0;

  int num_items() const { return static_cast<int>(items.size()); }
  void validate() const;  // sizes > 0, capacity > 0, values >= 0
};

struct PackedSet {
  uint64_t mask = 0;

  bool contains(int item) const { return (mask >> item) & 1u; }
  std::vector<int> indices() const;
  bool operator==(const PackedSet&) const = default;
};

double packed_value(const KnapsackInstance& instance, PackedSet set);
double packed_size(const KnapsackInstance& instance, PackedSet set);

// Item indices by value/size ratio, descending; ratio ties keep the lower
// index first. Compared by cross-multiplication to avoid division noise.
std::vector<int> ratio_order(const KnapsackInstance& instance);

enum class GreedyVariant {
  // Stop scanning at the first item that does not fit (canonical).
  kStopAtFirstMisfit,
  // Keep scanning and pack every later item that still fits.
  kPackAllFitting,
};

PackedSet greedy(const KnapsackInstance& instance,
                 GreedyVariant variant = GreedyVariant::kStopAtFirstMisfit);

// Greedy bundle vs. the most valuable single item that fits alone; value
// ties keep the bundle, item ties keep the lower index.
PackedSet smart_greedy(const KnapsackInstance& instance);

inline constexpr int kExactKnapsackMaxItems = 24;

// Exhaustive subset-scan oracle. Value ties resolved toward the
// lexicographically smallest index set. Items limited to 24.
PackedSet exact_knapsack(const KnapsackInstance& instance);

inline constexpr int kToAllocationMaxItems = 20;

// Binary AllocationInstance whose feasible set is every capacity-respecting
// subset (ascending mask order). Optional bidder names default to b0, b1, ...
AllocationInstance to_allocation_instance(const KnapsackInstance& instance,
                                          std::vector<std::string> bidder_names = {});

Allocation to_allocation(const KnapsackInstance& instance, PackedSet set);

// The bundled three-bidder scenario (capacity 1; sizes 0.5+eps, 0.5, 0.5;
// unit values). Bidder A is item 0.
KnapsackInstance table1_knapsack(double epsilon = 0.05);
// Same scenario after A invests to value 2 + eps.
KnapsackInstance table1_knapsack_invested(double epsilon = 0.05);

struct KnapsackSampler {
  int min_items = 1;
  int max_items = 12;
  double min_value = 0.0;
  double max_value = 2.0;
  double min_size = 0.05;
  double max_size = 1.0;
  double min_capacity = 0.3;
  double max_capacity = 1.5;
};

KnapsackInstance sample_knapsack_instance(Rng& rng,
                                          const KnapsackSampler& params = {});

// Allocation-algorithm wrappers. They require the knapsack metadata carried
// by converted instances and treat the packed value as the item value.
class GreedyAlgorithm : public AllocationAlgorithm {
 public:
  explicit GreedyAlgorithm(GreedyVariant variant = GreedyVariant::kStopAtFirstMisfit)
      : variant_(variant) {}
  std::string_view id() const override {
    return variant_ == GreedyVariant::kStopAtFirstMisfit ? "greedy"
                                                         : "greedy-continuing";
  }
  Allocation run(const AllocationInstance& instance) const override;

 private:
  GreedyVariant variant_;
};

class SmartGreedyAlgorithm : public AllocationAlgorithm {
 public:
  std::string_view id() const override { return "smart_greedy"; }
  Allocation run(const AllocationInstance& instance) const override;
};

// Argmax over the explicit feasible set (first argmax in feasible order).
class OptimalAlgorithm : public AllocationAlgorithm {
 public:
  std::string_view id() const override { return "optimal"; }
  Allocation run(const AllocationInstance& instance) const override;
};

// Deliberately broken greedy: drops its second packed item whenever any
// reported value exceeds the trip threshold. Violates weak monotonicity and
// welfare preservation; bundled as the negative control for the checkers.
class BrokenGreedyAlgorithm : public AllocationAlgorithm {
 public:
  explicit BrokenGreedyAlgorithm(double trip_value = 1.5) : trip_value_(trip_value) {}
  std::string_view id() const override { return "broken_greedy"; }
  Allocation run(const AllocationInstance& instance) const override;

 private:
  double trip_value_;
};

// Factory over the stable ids above; throws std::invalid_argument on an
// unknown id.
std::unique_ptr<AllocationAlgorithm> make_algorithm(std::string_view id);

// Extracts (values from the packed column, sizes, capacity) for ratio-based
// algorithms; throws std::domain_error when metadata is missing.
KnapsackInstance knapsack_view(const AllocationInstance& instance);

}  // namespace investsim
