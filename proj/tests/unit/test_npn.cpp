#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "lutrev/npn.hpp"

using namespace lutrev;

namespace {

// Independent oracle: enumerate every transform explicitly through
// npn_apply-free per-bit evaluation and take the lexicographically smallest
// bit vector. Lexicographic comparison on the bit vector (row 0 first)
// equals integer comparison of the bit-reversed value.
uint64_t reverse_bits(uint64_t v, unsigned nbits) {
    uint64_t r = 0;
    for (unsigned i = 0; i < nbits; ++i)
        r |= ((v >> i) & 1) << (nbits - 1 - i);
    return r;
}

uint64_t naive_transform(uint64_t t, unsigned n, const std::vector<unsigned>& perm,
                         unsigned negmask, bool outneg) {
    uint64_t out = 0;
    for (uint64_t m = 0; m < (uint64_t(1) << n); ++m) {
        uint64_t j = 0;
        for (unsigned i = 0; i < n; ++i)
            j |= (((m >> i) ^ (negmask >> i)) & 1) << perm[i];
        out |= (((t >> m) & 1) ^ uint64_t(outneg)) << j;
    }
    return out;
}

uint64_t naive_canonical(uint64_t t, unsigned n) {
    std::vector<unsigned> perm(n);
    for (unsigned i = 0; i < n; ++i) perm[i] = i;
    uint64_t best = ~uint64_t(0);
    uint64_t best_rev = ~uint64_t(0);
    unsigned nbits = 1u << n;
    do {
        for (unsigned neg = 0; neg < (1u << n); ++neg) {
            for (int on = 0; on < 2; ++on) {
                uint64_t cand = naive_transform(t, n, perm, neg, on != 0);
                uint64_t rev = reverse_bits(cand, nbits);
                if (rev < best_rev) {
                    best_rev = rev;
                    best = cand;
                }
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace

TEST_CASE("canonical form matches the exhaustive oracle") {
    std::mt19937_64 rng(7);
    for (unsigned n = 0; n <= 4; ++n) {
        int trials = n <= 2 ? 1 << (1 << n) : 60;
        for (int trial = 0; trial < trials; ++trial) {
            uint64_t bits = n <= 2 ? uint64_t(trial) : (rng() & tt_mask(n));
            NpnClass c = npn_canonical(TtBits{bits, n});
            CHECK(c.canonical.bits == naive_canonical(bits, n));
        }
    }
}

TEST_CASE("recorded transform reproduces the canonical form") {
    std::mt19937_64 rng(11);
    for (unsigned n = 0; n <= 6; ++n) {
        for (int trial = 0; trial < 40; ++trial) {
            uint64_t bits = rng() & tt_mask(n);
            NpnClass c = npn_canonical(TtBits{bits, n});
            TtBits applied = npn_apply(TtBits{bits, n}, c.transform);
            CHECK(applied.bits == c.canonical.bits);
            CHECK(applied.nvars == n);
        }
    }
}

TEST_CASE("three-input functions fall into 14 classes") {
    std::set<uint64_t> fast_classes, naive_classes;
    for (uint64_t t = 0; t < 256; ++t) {
        fast_classes.insert(npn_canonical(TtBits{t, 3}).canonical.bits);
        naive_classes.insert(naive_canonical(t, 3));
    }
    CHECK(fast_classes == naive_classes);
    CHECK(fast_classes.size() == 14);
}

TEST_CASE("canonical form is invariant under random transforms") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 300; ++trial) {
        unsigned n = 1 + unsigned(rng() % 6);
        uint64_t bits = rng() & tt_mask(n);
        NpnTransform tr;
        tr.nvars = n;
        std::vector<uint8_t> p(n);
        for (unsigned i = 0; i < n; ++i) p[i] = uint8_t(i);
        std::shuffle(p.begin(), p.end(), rng);
        for (unsigned i = 0; i < n; ++i) tr.perm[i] = p[i];
        tr.neg_mask = uint8_t(rng() & ((1u << n) - 1));
        tr.out_neg = (rng() & 1) != 0;
        TtBits g = npn_apply(TtBits{bits, n}, tr);
        CHECK(npn_canonical(g).canonical.bits == npn_canonical(TtBits{bits, n}).canonical.bits);
    }
}

TEST_CASE("known canonical representatives") {
    // Verified against the exhaustive oracle above; stated here as anchors.
    CHECK(npn_canonical(TtBits{0x6, 2}).canonical.bits == naive_canonical(0x6, 2));
    CHECK(npn_canonical(TtBits{0x9, 2}).canonical.bits ==
          npn_canonical(TtBits{0x6, 2}).canonical.bits);  // xnor joins xor
    CHECK(npn_canonical(TtBits{0x8, 2}).canonical.bits ==
          npn_canonical(TtBits{0xe, 2}).canonical.bits);  // and joins or (De Morgan)
    CHECK(npn_canonical(TtBits{0x2, 1}).canonical.bits ==
          npn_canonical(TtBits{0x1, 1}).canonical.bits);  // buffer joins inverter
    // constants: output negation folds const1 onto const0
    CHECK(npn_canonical(TtBits{0x1, 0}).canonical.bits ==
          npn_canonical(TtBits{0x0, 0}).canonical.bits);
}
