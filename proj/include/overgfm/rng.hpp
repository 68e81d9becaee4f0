#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace overgfm {

/// Finalizing mixer from the splitmix64 generator; bijective on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x);

/// FNV-1a hash of a tag string, used to label substreams.
std::uint64_t fnv1a64(std::string_view text);

/// Independent named substream per (seed, tag). Every random matrix a
/// generator draws gets its own tag, so output is reproducible per platform
/// and insensitive to draw-order changes in unrelated matrices.
std::mt19937_64 make_stream(std::uint64_t seed, std::string_view tag);

}  // namespace overgfm
