#include "psl/sortcore.hpp"

#include <stdexcept>
#include <string>
#include <utility>

#include "psl/rng.hpp"

namespace psl {

namespace {

// Shared per-run state. rng is null for the deterministic strategy.
struct SelectCtx {
  SortStats& stats;
  RngStream* rng;
};

inline bool less(const Key& a, const Key& b, SortStats& stats) {
  ++stats.comparisons;
  return a < b;
}

inline void exchange(KeyArray& a, std::size_t i, std::size_t j, SortStats& stats) {
  if (i == j) return;
  std::swap(a[i], a[j]);
  ++stats.swaps;
}

// Full sort of a small range; the base case of selection.
void insertion_sort(KeyArray& a, std::size_t lo, std::size_t hi, SortStats& stats) {
  for (std::size_t i = lo + 1; i < hi; ++i)
    for (std::size_t j = i; j > lo && less(a[j], a[j - 1], stats); --j)
      exchange(a, j, j - 1, stats);
}

constexpr std::size_t kSelectBase = 16;

/// Dutch-flag pass around `pivot`: on return a[lo, lt) < pivot,
// a[lt, gt] == pivot (nonempty when pivot occurs), a(gt, hi) > pivot.
std::pair<std::size_t, std::size_t> fence_three_way(KeyArray& a, std::size_t lo,
                                                    std::size_t hi, Key pivot,
                                                    SortStats& stats) {
  std::size_t lt = lo;
  std::size_t i = lo;
  std::size_t gt = hi;  // exclusive
  while (i < gt) {
    if (less(a[i], pivot, stats)) {
      exchange(a, i, lt, stats);
      ++lt;
      ++i;
    } else if (less(pivot, a[i], stats)) {
      --gt;
      exchange(a, i, gt, stats);
    } else {
      ++i;
    }
  }
  return {lt, gt - 1};  // inclusive bounds of the equal block
}

/// Rearranges a[lo, hi) so the element of absolute index `target` is fenced:
// everything left of it is <=, everything right is >=.
void select_at(KeyArray& a, std::size_t lo, std::size_t hi, std::size_t target,
               const SelectCtx& ctx) {
  for (;;) {
    const std::size_t m = hi - lo;
    if (m <= kSelectBase) {
      insertion_sort(a, lo, hi, ctx.stats);
      return;
    }
    Key pivot;
    if (ctx.rng != nullptr) {
      pivot = a[lo + ctx.rng->next_below(m)];
    } else {
      // medians of fives compacted to the front, then their median
      const std::size_t ngroups = (m + 4) / 5;
      for (std::size_t g = 0; g < ngroups; ++g) {
        const std::size_t glo = lo + 5 * g;
        const std::size_t ghi = glo + 5 < hi ? glo + 5 : hi;
        insertion_sort(a, glo, ghi, ctx.stats);
        exchange(a, lo + g, glo + (ghi - glo - 1) / 2, ctx.stats);
      }
      const std::size_t mid = lo + (ngroups - 1) / 2;
      select_at(a, lo, lo + ngroups, mid, ctx);
      pivot = a[mid];
    }
    const auto [eq_lo, eq_hi] = fence_three_way(a, lo, hi, pivot, ctx.stats);
    if (target < eq_lo) {
      hi = eq_lo;
    } else if (target <= eq_hi) {
      return;  // target sits inside the equal block
    } else {
      lo = eq_hi + 1;
    }
  }
}

void check_range(const KeyArray& a, std::size_t lo, std::size_t hi, const char* who) {
  if (lo >= hi || hi > a.size())
    throw std::invalid_argument(std::string(who) + ": invalid range [" +
                                std::to_string(lo) + ", " + std::to_string(hi) +
                                ") for size " + std::to_string(a.size()));
}

std::size_t partition_at(KeyArray& a, std::size_t lo, std::size_t hi,
                         const SelectCtx& ctx) {
  const std::size_t boundary = lo + (hi - lo) / 2;
  select_at(a, lo, hi, boundary, ctx);
  return boundary;
}

void sort_blocks(KeyArray& a, std::size_t lo, std::size_t hi, std::uint32_t depth,
                 const SelectCtx& ctx, const PartitionObserver& observer) {
  if (hi - lo < 2) return;
  if (depth > ctx.stats.max_depth) ctx.stats.max_depth = depth;
  const std::size_t boundary = partition_at(a, lo, hi, ctx);
  if (observer) observer(lo, boundary, hi);
  sort_blocks(a, lo, boundary, depth + 1, ctx, observer);
  sort_blocks(a, boundary, hi, depth + 1, ctx, observer);
}

}  // namespace

std::size_t partition(KeyArray& a, std::size_t lo, std::size_t hi,
                      const PartitionStrategy& strategy, SortStats& stats) {
  check_range(a, lo, hi, "partition");
  if (hi - lo < 2)
    throw std::invalid_argument("partition: needs at least 2 elements, got 1");
  RngStream rng(strategy.seed);
  SelectCtx ctx{stats, strategy.kind == SelectKind::Randomized ? &rng : nullptr};
  return partition_at(a, lo, hi, ctx);
}

Key select_kth(KeyArray& a, std::size_t lo, std::size_t hi, std::size_t rank,
               const PartitionStrategy& strategy, SortStats& stats) {
  check_range(a, lo, hi, "select_kth");
  if (rank >= hi - lo)
    throw std::invalid_argument("select_kth: rank " + std::to_string(rank) +
                                " out of range for " + std::to_string(hi - lo) +
                                " elements");
  RngStream rng(strategy.seed);
  SelectCtx ctx{stats, strategy.kind == SelectKind::Randomized ? &rng : nullptr};
  select_at(a, lo, hi, lo + rank, ctx);
  return a[lo + rank];
}

SortStats partition_sort(KeyArray& a, const PartitionStrategy& strategy,
                         const PartitionObserver& observer) {
  SortStats stats;
  if (a.size() < 2) return stats;
  RngStream rng(strategy.seed);
  SelectCtx ctx{stats, strategy.kind == SelectKind::Randomized ? &rng : nullptr};
  sort_blocks(a, 0, a.size(), 1, ctx, observer);
  return stats;
}

namespace {

constexpr std::size_t kQuicksortCutoff = 16;

// Three-way scheme with a uniformly random pivot; the equal block is
// excluded from both recursions, which keeps heavily tied inputs linear.
void quicksort_range(KeyArray& a, std::size_t lo, std::size_t hi,
                     std::uint32_t depth, RngStream& rng, SortStats& stats) {
  while (hi - lo > kQuicksortCutoff) {
    if (depth > stats.max_depth) stats.max_depth = depth;
    const Key pivot = a[lo + rng.next_below(hi - lo)];
    const auto [eq_lo, eq_hi] = fence_three_way(a, lo, hi, pivot, stats);
    // recurse into the smaller side, loop on the larger
    if (eq_lo - lo <= hi - (eq_hi + 1)) {
      quicksort_range(a, lo, eq_lo, depth + 1, rng, stats);
      lo = eq_hi + 1;
    } else {
      quicksort_range(a, eq_hi + 1, hi, depth + 1, rng, stats);
      hi = eq_lo;
    }
    ++depth;
  }
  insertion_sort(a, lo, hi, stats);
}

}  // namespace

SortStats quicksort_baseline(KeyArray& a, std::uint64_t seed) {
  SortStats stats;
  if (a.size() < 2) return stats;
  RngStream rng(seed);
  quicksort_range(a, 0, a.size(), 1, rng, stats);
  return stats;
}

}  // namespace psl
