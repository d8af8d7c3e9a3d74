// AVX2 variant of the subset scan. Compiled with -mavx2 in its own TU; only
// reached after a runtime CPU check, everything else stays in subset_scan.cpp.

#include "investsim/subset_scan.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <algorithm>
#include <cstdint>
#include <limits>

namespace investsim::detail {

bool cpu_has_avx2() { return __builtin_cpu_supports("avx2") != 0; }

// Lane j of block h holds mask 4*h + j. Per-lane running max / first block /
// match count, reconciled horizontally at the end. Per-mask sums are the same
// single adds as the scalar kernel (shared tables), so results are
// bit-identical.
SubsetScanResult scan_subsets_avx2_impl(const SubsetTables& t,
                                        double capacity) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  const __m256d lo_v = _mm256_loadu_pd(t.lo_values.data());
  const __m256d lo_s = _mm256_loadu_pd(t.lo_sizes.data());
  const __m256d cap = _mm256_set1_pd(capacity);
  const __m256d ninf = _mm256_set1_pd(neg_inf);
  const __m256d one = _mm256_set1_pd(1.0);

  __m256d lane_best = ninf;
  __m256d lane_first = _mm256_setzero_pd();
  __m256d lane_count = _mm256_setzero_pd();

  const uint32_t blocks = t.mask_count() >> 2;
  for (uint32_t h = 0; h < blocks; ++h) {
    const __m256d v = _mm256_add_pd(_mm256_set1_pd(t.hi_values[h]), lo_v);
    const __m256d s = _mm256_add_pd(_mm256_set1_pd(t.hi_sizes[h]), lo_s);
    const __m256d feasible = _mm256_cmp_pd(s, cap, _CMP_LE_OQ);
    const __m256d vm = _mm256_blendv_pd(ninf, v, feasible);

    const __m256d gt = _mm256_cmp_pd(vm, lane_best, _CMP_GT_OQ);
    const __m256d eq = _mm256_cmp_pd(vm, lane_best, _CMP_EQ_OQ);
    lane_best = _mm256_blendv_pd(lane_best, vm, gt);
    lane_first =
        _mm256_blendv_pd(lane_first, _mm256_set1_pd(static_cast<double>(h)), gt);
    lane_count = _mm256_blendv_pd(lane_count, _mm256_setzero_pd(), gt);
    lane_count = _mm256_add_pd(lane_count, _mm256_and_pd(_mm256_or_pd(gt, eq), one));
  }

  alignas(32) double best[4], first[4], count[4];
  _mm256_store_pd(best, lane_best);
  _mm256_store_pd(first, lane_first);
  _mm256_store_pd(count, lane_count);

  SubsetScanResult r;
  r.best_value = std::max(std::max(best[0], best[1]), std::max(best[2], best[3]));
  if (r.best_value == neg_inf) {
    // No feasible mask at all (capacity below zero); match scalar output.
    r.best_value = neg_inf;
    r.best_mask = 0;
    r.best_count = 0;
    return r;
  }
  uint32_t first_mask = std::numeric_limits<uint32_t>::max();
  uint64_t total = 0;
  for (int j = 0; j < 4; ++j) {
    if (best[j] != r.best_value) continue;
    total += static_cast<uint64_t>(count[j]);
    first_mask = std::min(
        first_mask, 4u * static_cast<uint32_t>(first[j]) + static_cast<uint32_t>(j));
  }
  r.best_mask = first_mask;
  r.best_count = total;
  return r;
}

}  // namespace investsim::detail

#endif  // x86
