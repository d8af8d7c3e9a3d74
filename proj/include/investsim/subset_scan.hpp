#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace investsim {

inline constexpr int kSubsetScanMaxItems = 24;

// Table-decomposed subset sums. value(mask) and size(mask) are defined as
// exactly one IEEE add over the two shared tables, so every kernel variant
// (scalar, AVX2) produces bit-identical per-mask sums.
struct SubsetTables {
  int num_items = 0;
  int lo_bits = 0;  // min(num_items, 2)
  std::vector<double> lo_values, lo_sizes;  // indexed by mask & lo_mask
  std::vector<double> hi_values, hi_sizes;  // indexed by mask >> lo_bits

  uint32_t lo_mask() const { return (1u << lo_bits) - 1u; }
  uint32_t mask_count() const { return 1u << num_items; }

  double value(uint32_t mask) const {
    return hi_values[mask >> lo_bits] + lo_values[mask & lo_mask()];
  }
  double size(uint32_t mask) const {
    return hi_sizes[mask >> lo_bits] + lo_sizes[mask & lo_mask()];
  }
};

SubsetTables build_subset_tables(std::span<const double> values,
                                 std::span<const double> sizes);

// Result of scanning every item subset against a capacity bound.
struct SubsetScanResult {
  double best_value = 0.0;   // max packed value over feasible masks
  uint32_t best_mask = 0;    // numerically smallest mask attaining best_value
  uint64_t best_count = 0;   // feasible masks attaining best_value exactly
};

// Exhaustive scan over all 2^n subsets; picks the fastest kernel the running
// CPU supports. The empty subset is always feasible, so best_value >= 0.
SubsetScanResult scan_subsets(const SubsetTables& tables, double capacity);
SubsetScanResult scan_subsets(std::span<const double> values,
                              std::span<const double> sizes, double capacity);

// Kernel variants, exposed for equivalence tests and benchmarks. The AVX2
// entry point falls back to scalar when the instruction set is unavailable.
SubsetScanResult scan_subsets_scalar(const SubsetTables& tables,
                                     double capacity);
SubsetScanResult scan_subsets_avx2(const SubsetTables& tables,
                                   double capacity);
bool subset_scan_avx2_available();
std::string_view subset_scan_active_kernel();

// Lexicographic order on index sets: compares the sorted index lists
// element-wise, a proper prefix coming first.
bool lex_set_less(uint32_t a, uint32_t b);

}  // namespace investsim
