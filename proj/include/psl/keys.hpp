#pragma once

#include <cstdint>
#include <vector>

namespace psl {

// Sort keys are signed 64-bit integers: negative-binomial counts fit with
// room to spare and comparison semantics stay total and exact.
using Key = std::int64_t;
using KeyArray = std::vector<Key>;

}  // namespace psl
