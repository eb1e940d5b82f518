#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lutrev/cone.hpp"
#include "lutrev/netlist.hpp"

namespace lutrev {

// Truth table over up to 6 variables packed into a uint64. Bit m is the
// function value when the input assignment, read as an unsigned integer with
// variable 0 as bit 0, equals m.
struct TtBits {
    uint64_t bits = 0;
    unsigned nvars = 0;

    bool operator==(const TtBits&) const = default;
};

inline uint64_t tt_mask(unsigned nvars) {
    return nvars >= 6 ? ~uint64_t(0) : ((uint64_t(1) << (1u << nvars)) - 1);
}

// Projection of variable v as a table over nvars variables.
uint64_t tt_projection(unsigned v, unsigned nvars);

// t with variable v complemented.
TtBits tt_flip_var(TtBits t, unsigned v);
// t with adjacent variables v and v+1 exchanged.
TtBits tt_swap_adjacent(TtBits t, unsigned v);
bool tt_depends_on(TtBits t, unsigned v);
// Fix variable v to value and drop it (variables above shift down).
TtBits tt_cofactor(TtBits t, unsigned v, bool value);
// Reorders variables: old variable i becomes variable perm[i].
TtBits tt_permute(TtBits t, const std::vector<unsigned>& perm);

// A truth table with named support. Support nets are ordered; variable i of
// the table corresponds to support[i]. Construction minimizes the support:
// variables the function does not depend on are dropped.
struct TruthTable {
    TtBits fn;
    std::vector<NetIndex> support;
};

TruthTable make_truth_table(TtBits raw, std::vector<NetIndex> support);

// Evaluates the reverse cone into a truth table over its frontier.
// Rejects cones containing sequential or opaque gates and cones whose
// frontier exceeds 6 nets.
TruthTable cone_to_function(const Netlist& nl, const Cone& cone);

// Restricts a named variable to a constant.
TruthTable cofactor(const TruthTable& t, NetIndex var, bool value);

std::string tt_to_hex(TtBits t);

} // namespace lutrev
