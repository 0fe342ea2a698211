#pragma once

#include <cstdint>
#include <string_view>

namespace semcafe {

// XXH64, the 64-bit variant of xxHash. This is the hash behind feature
// bucketing; its output is pinned by unit tests against the reference
// implementation and must never change silently.
std::uint64_t xxh64(std::string_view data, std::uint64_t seed);

}  // namespace semcafe
