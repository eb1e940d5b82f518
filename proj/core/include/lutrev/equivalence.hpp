#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace lutrev {

// Evaluable combinational function over fixed-width input words, one output
// word. Implementations must mask their result to the output width.
using WordFn = std::function<uint64_t(std::span<const uint64_t>)>;

struct EquivConfig {
    unsigned exhaustive_bits = 20;  // exhaustive when total input bits fit
    uint64_t samples = 100000;      // random vectors otherwise
    uint64_t seed = 1;
};

struct EquivResult {
    bool equivalent = false;
    bool exhaustive = false;        // proof, not just sampling
    bool has_witness = false;
    std::vector<uint64_t> witness;  // input words exposing a mismatch
};

// Miter-style comparison. Inputs shapes must match or this throws. Runs the
// corner vectors first (all zeros, all ones, one word hot, one bit hot,
// alternating patterns), then either the full input space or random samples.
EquivResult check_equivalent(const WordFn& a, std::span<const unsigned> widths_a,
                             const WordFn& b, std::span<const unsigned> widths_b,
                             const EquivConfig& cfg);

} // namespace lutrev
