#pragma once

#include <span>

#include "psl/statmodel.hpp"

namespace psl::ref {

// Bundled reference measurements (data/*.csv, embedded at build time) so the
// analysis pipeline runs offline and deterministically. Mean sort times in
// seconds for negative-binomial inputs.

std::span<const Point> table1();  // n sweep, k=1000, p=0.5
std::span<const Point> table2();  // p sweep, n=50000, k=1000
std::span<const Point> table3();  // k sweep, n=50000, p=0.5
std::span<const Point> table4();  // 3x3x3 grid of (n, k, p) cell means

}  // namespace psl::ref
