#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "psl/keys.hpp"

namespace psl {

struct SortStats {
  std::uint64_t comparisons = 0;  // key-key comparisons only, never index math
  std::uint64_t swaps = 0;        // element exchanges
  std::uint32_t max_depth = 0;    // deepest partition level reached
};

enum class SelectKind { Deterministic, Randomized };

// Deterministic: median-of-medians pivot (groups of 5), O(n) selection worst
// case and bit-identical counters across runs. Randomized: uniform pivot from
// a stream seeded per run. Both strategies produce identical block contents;
// only the work spent finding them differs.
struct PartitionStrategy {
  SelectKind kind = SelectKind::Deterministic;
  std::uint64_t seed = 0;  // used by Randomized only
};

// Invoked after every partition step with the block bounds [lo, boundary, hi).
using PartitionObserver =
    std::function<void(std::size_t lo, std::size_t boundary, std::size_t hi)>;

// Splits a[lo, hi) into a[lo, b) and a[b, hi) with b = lo + floor((hi-lo)/2),
// max(left) <= min(right), multiset preserved. Requires hi - lo >= 2 and
// hi <= a.size(); throws std::invalid_argument otherwise.
std::size_t partition(KeyArray& a, std::size_t lo, std::size_t hi,
                      const PartitionStrategy& strategy, SortStats& stats);

// Rearranges a[lo, hi) so a[lo, lo+rank) <= a[lo+rank] <= a(lo+rank, hi) and
// returns a[lo+rank], the 0-based rank-th value of the sorted order. The
// three-way fence keeps runs of equal keys linear-time. rank must satisfy
// lo + rank < hi.
Key select_kth(KeyArray& a, std::size_t lo, std::size_t hi, std::size_t rank,
               const PartitionStrategy& strategy, SortStats& stats);

// Recursive halving sort: partition, then recurse on both blocks down to
// singletons. The split is exactly balanced whatever the data, so the
// recursion depth is ceil(log2 n) and max_depth records it.
SortStats partition_sort(KeyArray& a, const PartitionStrategy& strategy = {},
                         const PartitionObserver& observer = nullptr);

// Random-pivot three-way quicksort with an insertion-sort tail, as a
// comparison target. Deterministic given seed.
SortStats quicksort_baseline(KeyArray& a, std::uint64_t seed = 0);

}  // namespace psl
