#include "lutrev/npn.hpp"

#include <bit>

namespace lutrev {

namespace {

// Positions whose index has bit v clear.
constexpr std::array<uint64_t, 6> kVarClear = {
    0x5555555555555555ull, 0x3333333333333333ull, 0x0f0f0f0f0f0f0f0full,
    0x00ff00ff00ff00ffull, 0x0000ffff0000ffffull, 0x00000000ffffffffull,
};

uint64_t reverse_low_bits(uint64_t v, unsigned nbits) {
    static const auto table = [] {
        std::array<uint8_t, 256> t{};
        for (int i = 0; i < 256; ++i) {
            uint8_t r = 0;
            for (int b = 0; b < 8; ++b)
                if (i & (1 << b)) r |= uint8_t(1 << (7 - b));
            t[size_t(i)] = r;
        }
        return t;
    }();
    uint64_t r = 0;
    for (int i = 0; i < 8; ++i) {
        r = (r << 8) | table[v & 0xff];
        v >>= 8;
    }
    return r >> (64 - nbits);
}

// Plain-changes permutation generator: each next() returns the position of
// an adjacent transposition, n!-1 swaps in total.
class PlainChanges {
public:
    explicit PlainChanges(unsigned n) : n_(n) {
        for (unsigned i = 0; i < n; ++i) {
            value_[i] = i;
            dir_[i] = -1;
        }
    }

    // Returns the left index of the swap, or -1 when exhausted.
    int next() {
        int mobile = -1;
        unsigned mobile_pos = 0;
        for (unsigned i = 0; i < n_; ++i) {
            int j = int(i) + dir_[i];
            if (j < 0 || j >= int(n_)) continue;
            // mobile = points at a smaller neighbor; take the largest one
            if (value_[size_t(j)] > value_[i]) continue;
            if (mobile == -1 || value_[i] > value_[size_t(mobile_pos)]) {
                mobile = int(value_[i]);
                mobile_pos = i;
            }
        }
        if (mobile == -1) return -1;
        int j = int(mobile_pos) + dir_[mobile_pos];
        std::swap(value_[mobile_pos], value_[size_t(j)]);
        std::swap(dir_[mobile_pos], dir_[size_t(j)]);
        for (unsigned i = 0; i < n_; ++i)
            if (int(value_[i]) > mobile) dir_[i] = -dir_[i];
        return std::min(int(mobile_pos), j);
    }

private:
    unsigned n_;
    std::array<unsigned, 6> value_{};
    std::array<int8_t, 6> dir_{};
};

} // namespace

TtBits npn_apply(TtBits t, const NpnTransform& tr) {
    if (tr.nvars != t.nvars) throw InternalError("transform arity mismatch");
    uint64_t out = 0;
    uint64_t rows = uint64_t(1) << t.nvars;
    for (uint64_t m = 0; m < rows; ++m) {
        uint64_t j = 0;
        for (unsigned i = 0; i < t.nvars; ++i) {
            uint64_t bit = ((m >> i) ^ (uint64_t(tr.neg_mask) >> i)) & 1;
            j |= bit << tr.perm[i];
        }
        uint64_t val = ((t.bits >> m) & 1) ^ uint64_t(tr.out_neg);
        out |= val << j;
    }
    return TtBits{out & tt_mask(t.nvars), t.nvars};
}

NpnClass npn_canonical(TtBits t) {
    unsigned n = t.nvars;
    if (n > 6) throw InternalError("npn_canonical beyond 6 variables");
    uint64_t mask = tt_mask(n);
    unsigned nbits = 1u << n;
    t.bits &= mask;

    // All transform operations (flip one input, swap adjacent inputs,
    // complement the output) act identically on the bit-reversed table, and
    // on that representation "lexicographically smaller bit vector" is plain
    // integer less-than.
    uint64_t r = reverse_low_bits(t.bits, nbits);

    std::array<uint8_t, 6> perm{0, 1, 2, 3, 4, 5};  // original var -> position
    std::array<uint8_t, 6> inv{0, 1, 2, 3, 4, 5};   // position -> original var
    uint8_t negmask = 0;

    uint64_t best = ~uint64_t(0);
    NpnTransform best_tr;
    best_tr.nvars = n;

    auto visit = [&]() {
        if (r < best) {
            best = r;
            best_tr.perm = perm;
            best_tr.neg_mask = negmask;
            best_tr.out_neg = false;
        }
        uint64_t rc = ~r & mask;
        if (rc < best) {
            best = rc;
            best_tr.perm = perm;
            best_tr.neg_mask = negmask;
            best_tr.out_neg = true;
        }
    };

    auto flip_pos = [&](unsigned pos) {
        unsigned s = 1u << pos;
        uint64_t lo = r & kVarClear[pos];
        uint64_t hi = r & ~kVarClear[pos];
        r = ((lo << s) | (hi >> s)) & mask;
        negmask ^= uint8_t(1u << inv[pos]);
    };

    PlainChanges pc(n);
    for (;;) {
        visit();
        if (n > 0) {
            for (uint64_t g = 1; g < (uint64_t(1) << n); ++g) {
                flip_pos(unsigned(std::countr_zero(g)));
                visit();
            }
            flip_pos(n - 1);  // Gray sequence ends one flip away from zero
        }
        int swap_at = n > 1 ? pc.next() : -1;
        if (swap_at < 0) break;
        // Swap adjacent positions in the reversed table directly.
        {
            unsigned v = unsigned(swap_at);
            uint64_t m10 = ~kVarClear[v] & kVarClear[v + 1];
            unsigned s = 1u << v;
            uint64_t m01 = m10 << s;
            uint64_t keep = r & ~(m10 | m01);
            r = (keep | ((r & m10) << s) | ((r & m01) >> s)) & mask;
        }
        std::swap(inv[size_t(swap_at)], inv[size_t(swap_at) + 1]);
        perm[inv[size_t(swap_at)]] = uint8_t(swap_at);
        perm[inv[size_t(swap_at) + 1]] = uint8_t(swap_at + 1);
    }

    NpnClass out;
    out.canonical = TtBits{reverse_low_bits(best, nbits), n};
    out.transform = best_tr;
    return out;
}

} // namespace lutrev
