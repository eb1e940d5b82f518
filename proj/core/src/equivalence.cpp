#include "lutrev/equivalence.hpp"

#include <random>

#include "lutrev/error.hpp"

namespace lutrev {

namespace {

uint64_t word_mask(unsigned w) {
    return w >= 64 ? ~uint64_t(0) : ((uint64_t(1) << w) - 1);
}

} // namespace

EquivResult check_equivalent(const WordFn& a, std::span<const unsigned> wa,
                             const WordFn& b, std::span<const unsigned> wb,
                             const EquivConfig& cfg) {
    if (wa.size() != wb.size())
        throw InternalError("equivalence check: input arity mismatch");
    for (size_t i = 0; i < wa.size(); ++i)
        if (wa[i] != wb[i]) throw InternalError("equivalence check: width mismatch");

    size_t nwords = wa.size();
    unsigned total_bits = 0;
    for (unsigned w : wa) total_bits += w;

    EquivResult res;
    std::vector<uint64_t> v(nwords, 0);
    auto try_vector = [&]() -> bool {
        if (a(v) == b(v)) return true;
        res.equivalent = false;
        res.has_witness = true;
        res.witness = v;
        return false;
    };

    // Corner vectors.
    std::vector<std::vector<uint64_t>> corners;
    corners.emplace_back(nwords, 0);
    {
        std::vector<uint64_t> ones(nwords);
        for (size_t i = 0; i < nwords; ++i) ones[i] = word_mask(wa[i]);
        corners.push_back(ones);
        for (size_t i = 0; i < nwords; ++i) {
            std::vector<uint64_t> hot(nwords, 0);
            hot[i] = word_mask(wa[i]);
            corners.push_back(hot);
        }
        for (size_t i = 0; i < nwords; ++i) {
            for (unsigned bit = 0; bit < wa[i]; ++bit) {
                std::vector<uint64_t> hot(nwords, 0);
                hot[i] = uint64_t(1) << bit;
                corners.push_back(hot);
            }
        }
        std::vector<uint64_t> alt(nwords), alt2(nwords);
        for (size_t i = 0; i < nwords; ++i) {
            alt[i] = 0xaaaaaaaaaaaaaaaaull & word_mask(wa[i]);
            alt2[i] = 0x5555555555555555ull & word_mask(wa[i]);
        }
        corners.push_back(alt);
        corners.push_back(alt2);
    }
    for (const auto& c : corners) {
        v = c;
        if (!try_vector()) return res;
    }

    if (total_bits <= cfg.exhaustive_bits) {
        uint64_t limit = uint64_t(1) << total_bits;
        for (uint64_t x = 0; x < limit; ++x) {
            uint64_t rest = x;
            for (size_t i = 0; i < nwords; ++i) {
                v[i] = rest & word_mask(wa[i]);
                rest >>= wa[i];
            }
            if (!try_vector()) return res;
        }
        res.equivalent = true;
        res.exhaustive = true;
        return res;
    }

    std::mt19937_64 rng(cfg.seed);
    for (uint64_t s = 0; s < cfg.samples; ++s) {
        for (size_t i = 0; i < nwords; ++i) v[i] = rng() & word_mask(wa[i]);
        if (!try_vector()) return res;
    }
    res.equivalent = true;
    res.exhaustive = false;
    return res;
}

} // namespace lutrev
