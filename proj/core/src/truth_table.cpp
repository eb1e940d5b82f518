#include "lutrev/truth_table.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

namespace lutrev {

namespace {

// Positions whose index has bit v clear.
constexpr std::array<uint64_t, 6> kVarClear = {
    0x5555555555555555ull, 0x3333333333333333ull, 0x0f0f0f0f0f0f0f0full,
    0x00ff00ff00ff00ffull, 0x0000ffff0000ffffull, 0x00000000ffffffffull,
};

} // namespace

uint64_t tt_projection(unsigned v, unsigned nvars) {
    if (v >= nvars || nvars > 6) throw InternalError("projection out of range");
    return ~kVarClear[v] & tt_mask(nvars);
}

TtBits tt_flip_var(TtBits t, unsigned v) {
    if (v >= t.nvars) throw InternalError("flip_var out of range");
    unsigned s = 1u << v;
    uint64_t lo = t.bits & kVarClear[v];
    uint64_t hi = t.bits & ~kVarClear[v];
    return TtBits{((lo << s) | (hi >> s)) & tt_mask(t.nvars), t.nvars};
}

TtBits tt_swap_adjacent(TtBits t, unsigned v) {
    if (v + 1 >= t.nvars) throw InternalError("swap_adjacent out of range");
    // Indices with bit v set and bit v+1 clear move up by 2^v; their mirror
    // images move down.
    uint64_t m10 = ~kVarClear[v] & kVarClear[v + 1];
    unsigned s = 1u << v;
    uint64_t m01 = m10 << s;
    uint64_t keep = t.bits & ~(m10 | m01);
    return TtBits{(keep | ((t.bits & m10) << s) | ((t.bits & m01) >> s)) & tt_mask(t.nvars),
                  t.nvars};
}

bool tt_depends_on(TtBits t, unsigned v) { return tt_flip_var(t, v).bits != t.bits; }

TtBits tt_cofactor(TtBits t, unsigned v, bool value) {
    if (v >= t.nvars) throw InternalError("cofactor out of range");
    TtBits out{0, t.nvars - 1};
    unsigned half = 1u << v;
    uint64_t rows = uint64_t(1) << (t.nvars - 1);
    for (uint64_t m = 0; m < rows; ++m) {
        // Insert bit v = value into m.
        uint64_t low = m & (half - 1);
        uint64_t idx = ((m >> v) << (v + 1)) | (uint64_t(value) << v) | low;
        out.bits |= ((t.bits >> idx) & 1) << m;
    }
    return out;
}

TtBits tt_permute(TtBits t, const std::vector<unsigned>& perm) {
    if (perm.size() != t.nvars) throw InternalError("permute arity mismatch");
    TtBits out{0, t.nvars};
    uint64_t rows = uint64_t(1) << t.nvars;
    for (uint64_t m = 0; m < rows; ++m) {
        if (!((t.bits >> m) & 1)) continue;
        uint64_t mm = 0;
        for (unsigned v = 0; v < t.nvars; ++v)
            if ((m >> v) & 1) mm |= uint64_t(1) << perm[v];
        out.bits |= uint64_t(1) << mm;
    }
    return out;
}

TruthTable make_truth_table(TtBits raw, std::vector<NetIndex> support) {
    if (support.size() != raw.nvars)
        throw InternalError("support size does not match table arity");
    TruthTable t;
    t.fn = raw;
    t.support = std::move(support);
    for (unsigned v = t.fn.nvars; v-- > 0;) {
        if (!tt_depends_on(t.fn, v)) {
            t.fn = tt_cofactor(t.fn, v, false);
            t.support.erase(t.support.begin() + v);
        }
    }
    return t;
}

TruthTable cone_to_function(const Netlist& nl, const Cone& cone) {
    if (cone.frontier.size() > 6)
        throw InputError("cone support exceeds 6 nets");
    unsigned nvars = unsigned(cone.frontier.size());
    uint64_t mask = tt_mask(nvars);

    std::unordered_map<NetIndex, uint64_t> tables;
    for (unsigned i = 0; i < nvars; ++i)
        tables[cone.frontier[i]] = tt_projection(i, std::max(nvars, 1u));

    auto net_table = [&](NetIndex n) -> uint64_t {
        const Net& net = nl.net(n);
        if (net.kind == NetKind::Const0) return 0;
        if (net.kind == NetKind::Const1) return mask;
        auto it = tables.find(n);
        if (it == tables.end())
            throw InternalError("cone evaluation misses net '" + net.id + "'");
        return it->second;
    };

    for (GateIndex gi : cone.gates) {
        const Gate& g = nl.gate(gi);
        if (is_lut(g.prim)) {
            int k = lut_width(g.prim);
            std::array<uint64_t, 6> in{};
            for (int i = 0; i < k; ++i) in[size_t(i)] = net_table(g.pins[size_t(i)]);
            uint64_t out = 0;
            for (uint64_t m = 0; m < (uint64_t(1) << k); ++m) {
                if (!((g.init >> m) & 1)) continue;
                uint64_t term = mask;
                for (int i = 0; i < k; ++i)
                    term &= ((m >> i) & 1) ? in[size_t(i)] : ~in[size_t(i)];
                out |= term;
            }
            tables[g.pins[size_t(k)]] = out & mask;
        } else if (is_muxf(g.prim)) {
            uint64_t s = net_table(g.pins[pin::kMuxS]);
            uint64_t i0 = net_table(g.pins[pin::kMuxI0]);
            uint64_t i1 = net_table(g.pins[pin::kMuxI1]);
            tables[g.pins[pin::kMuxO]] = ((s & i1) | (~s & i0)) & mask;
        } else if (g.prim == Prim::Carry4) {
            uint64_t c = (net_table(g.pins[pin::kCarryCi]) |
                          net_table(g.pins[pin::kCarryCyinit])) & mask;
            for (int i = 0; i < 4; ++i) {
                uint64_t s = net_table(g.pins[pin::carry_s(i)]);
                uint64_t di = net_table(g.pins[pin::carry_di(i)]);
                tables[g.pins[pin::carry_o(i)]] = (s ^ c) & mask;
                c = ((s & c) | (~s & di)) & mask;
                tables[g.pins[pin::carry_co(i)]] = c;
            }
        } else {
            throw InputError("cone contains a sequential or opaque gate ('" + g.id +
                             "')");
        }
    }

    NetIndex root_net = nl.gate(cone.root.gate).pins[cone.root.pin];
    TtBits raw{net_table(root_net) & mask, nvars};
    return make_truth_table(raw, cone.frontier);
}

TruthTable cofactor(const TruthTable& t, NetIndex var, bool value) {
    auto it = std::find(t.support.begin(), t.support.end(), var);
    if (it == t.support.end()) return t;  // function does not depend on it
    unsigned v = unsigned(it - t.support.begin());
    TruthTable out;
    out.fn = tt_cofactor(t.fn, v, value);
    out.support = t.support;
    out.support.erase(out.support.begin() + v);
    return make_truth_table(out.fn, std::move(out.support));
}

std::string tt_to_hex(TtBits t) {
    int bits = 1 << t.nvars;
    int digits = std::max(1, (bits + 3) / 4);
    static const char* hexc = "0123456789abcdef";
    std::string s(size_t(digits), '0');
    uint64_t v = t.bits;
    for (int i = digits - 1; i >= 0; --i) {
        s[size_t(i)] = hexc[v & 0xf];
        v >>= 4;
    }
    return s;
}

} // namespace lutrev
