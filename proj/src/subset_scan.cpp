#include "investsim/subset_scan.hpp"

#include <bit>
#include <limits>
#include <stdexcept>

#include "investsim/errors.hpp"

namespace investsim {

SubsetTables build_subset_tables(std::span<const double> values,
                                 std::span<const double> sizes) {
  if (values.size() != sizes.size())
    throw std::invalid_argument("subset tables: values/sizes length mismatch");
  const int n = static_cast<int>(values.size());
  if (n > kSubsetScanMaxItems)
    throw CapacityError("subset scan limited to " +
                        std::to_string(kSubsetScanMaxItems) + " items, got " +
                        std::to_string(n));

  SubsetTables t;
  t.num_items = n;
  t.lo_bits = n < 2 ? n : 2;

  const uint32_t lo_count = 1u << t.lo_bits;
  t.lo_values.assign(lo_count, 0.0);
  t.lo_sizes.assign(lo_count, 0.0);
  for (uint32_t m = 1; m < lo_count; ++m) {
    const int bit = std::countr_zero(m);
    t.lo_values[m] = t.lo_values[m & (m - 1)] + values[bit];
    t.lo_sizes[m] = t.lo_sizes[m & (m - 1)] + sizes[bit];
  }

  const uint32_t hi_count = 1u << (n - t.lo_bits);
  t.hi_values.assign(hi_count, 0.0);
  t.hi_sizes.assign(hi_count, 0.0);
  for (uint32_t h = 1; h < hi_count; ++h) {
    const int bit = t.lo_bits + std::countr_zero(h);
    t.hi_values[h] = t.hi_values[h & (h - 1)] + values[bit];
    t.hi_sizes[h] = t.hi_sizes[h & (h - 1)] + sizes[bit];
  }
  return t;
}

SubsetScanResult scan_subsets_scalar(const SubsetTables& t, double capacity) {
  SubsetScanResult r;
  r.best_value = -std::numeric_limits<double>::infinity();
  const uint32_t lo_mask = t.lo_mask();
  const uint32_t masks = t.mask_count();
  for (uint32_t m = 0; m < masks; ++m) {
    const uint32_t h = m >> t.lo_bits;
    const double size = t.hi_sizes[h] + t.lo_sizes[m & lo_mask];
    if (size > capacity) continue;
    const double value = t.hi_values[h] + t.lo_values[m & lo_mask];
    if (value > r.best_value) {
      r.best_value = value;
      r.best_mask = m;
      r.best_count = 1;
    } else if (value == r.best_value) {
      ++r.best_count;
    }
  }
  return r;
}

#if INVESTSIM_HAVE_AVX2_TU
namespace detail {
SubsetScanResult scan_subsets_avx2_impl(const SubsetTables& t,
                                        double capacity);
bool cpu_has_avx2();
}  // namespace detail
#endif

bool subset_scan_avx2_available() {
#if INVESTSIM_HAVE_AVX2_TU
  return detail::cpu_has_avx2();
#else
  return false;
#endif
}

SubsetScanResult scan_subsets_avx2(const SubsetTables& t, double capacity) {
#if INVESTSIM_HAVE_AVX2_TU
  if (detail::cpu_has_avx2() && t.num_items >= 2)
    return detail::scan_subsets_avx2_impl(t, capacity);
#endif
  return scan_subsets_scalar(t, capacity);
}

std::string_view subset_scan_active_kernel() {
  return subset_scan_avx2_available() ? "avx2" : "scalar";
}

SubsetScanResult scan_subsets(const SubsetTables& t, double capacity) {
#if INVESTSIM_HAVE_AVX2_TU
  // The vector kernel needs whole 4-lane blocks; tiny scans stay scalar.
  if (detail::cpu_has_avx2() && t.num_items >= 4)
    return detail::scan_subsets_avx2_impl(t, capacity);
#endif
  return scan_subsets_scalar(t, capacity);
}

SubsetScanResult scan_subsets(std::span<const double> values,
                              std::span<const double> sizes, double capacity) {
  return scan_subsets(build_subset_tables(values, sizes), capacity);
}

bool lex_set_less(uint32_t a, uint32_t b) {
  while (a != 0 && b != 0) {
    const int ia = std::countr_zero(a);
    const int ib = std::countr_zero(b);
    if (ia != ib) return ia < ib;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

}  // namespace investsim
