#pragma once

#include <array>

#include "lutrev/truth_table.hpp"

namespace lutrev {

// Input permutation + input/output complementation. Applying to a table t:
// bit perm[i] of the new index is bit i of the old index xor bit i of
// neg_mask; the output is complemented when out_neg is set.
struct NpnTransform {
    std::array<uint8_t, 6> perm{0, 1, 2, 3, 4, 5};
    uint8_t neg_mask = 0;
    bool out_neg = false;
    unsigned nvars = 0;
};

struct NpnClass {
    TtBits canonical;
    NpnTransform transform;   // maps the queried function onto canonical
};

TtBits npn_apply(TtBits t, const NpnTransform& tr);

// Canonical form: the lexicographically smallest bit vector (row 0 first)
// reachable by any combination of input permutation, input complementation
// and output complementation. Exhaustive over all n! * 2^(n+1) transforms,
// but each step costs O(1) word operations: the enumeration walks adjacent
// transpositions (plain changes) interleaved with Gray-code complement
// flips on a bit-reversed copy of the table, so the lexicographic test is a
// single integer compare.
NpnClass npn_canonical(TtBits t);

} // namespace lutrev
