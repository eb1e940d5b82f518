#include "lutrev/synth_gen.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "lutrev/error.hpp"

namespace lutrev {
namespace {

constexpr uint64_t kXor2 = 0x6, kXnor2 = 0x9, kAnd2 = 0x8, kOr2 = 0xe;
constexpr uint64_t kNand2 = 0x7, kNor2 = 0x1, kInv1 = 0x1, kBuf1 = 0x2;
constexpr uint64_t kParity3 = 0x96;
// out = i2 ? i0 : i1 over (a, b, s): select high picks a.
constexpr uint64_t kMux3 = 0xac;

struct Builder {
    Netlist nl;
    std::mt19937_64 rng;
    bool permuted = false;

    Builder(const std::string& name, uint64_t seed, bool perm) : rng(seed), permuted(perm) {
        nl.name = name;
    }

    NetIndex c(bool v) { return nl.const_net(v); }

    static std::string bit(const std::string& base, unsigned i) {
        return base + "[" + std::to_string(i) + "]";
    }

    std::vector<NetIndex> word(const std::string& base, unsigned w) {
        std::vector<NetIndex> v;
        for (unsigned i = 0; i < w; ++i) v.push_back(nl.add_net(bit(base, i)));
        return v;
    }

    unsigned pick(unsigned n) { return unsigned(rng() % n); }

    // LUT computing fn over logical inputs; permuted mode shuffles the
    // physical pin order and rewrites INIT to keep the function.
    GateIndex lut(const std::string& id, const std::vector<NetIndex>& ins, uint64_t fn,
                  NetIndex out) {
        unsigned k = unsigned(ins.size());
        std::vector<unsigned> p(k);
        for (unsigned i = 0; i < k; ++i) p[i] = i;
        if (permuted && k > 1)
            for (unsigned i = k; i > 1; --i) std::swap(p[i - 1], p[pick(i)]);
        std::vector<NetIndex> pins(k + 1);
        for (unsigned i = 0; i < k; ++i) pins[p[i]] = ins[i];
        pins[k] = out;
        uint64_t init = 0;
        for (uint64_t m = 0; m < (1ull << k); ++m) {
            uint64_t src = 0;
            for (unsigned i = 0; i < k; ++i)
                if (m >> p[i] & 1) src |= 1ull << i;
            if (fn >> src & 1) init |= 1ull << m;
        }
        return nl.add_gate(id, lut_prim(int(k)), init, std::move(pins));
    }

    GateIndex ff(const std::string& id, Prim prim, NetIndex clk, NetIndex ce, NetIndex d,
                 NetIndex rst, NetIndex q, uint64_t init = 0) {
        return nl.add_gate(id, prim, init, {clk, ce, d, rst, q});
    }

    // FDRE bank in front of a word; returns the Q nets.
    std::vector<NetIndex> reg_word(const std::string& tag, const std::vector<NetIndex>& d,
                                   NetIndex clk, std::vector<std::string>* ids = nullptr) {
        std::vector<NetIndex> q;
        for (unsigned i = 0; i < d.size(); ++i) {
            NetIndex qn = nl.add_net(bit(tag + "_q", i));
            std::string id = tag + "_ff" + std::to_string(i);
            ff(id, Prim::Fdre, clk, c(true), d[i], c(false), qn);
            if (ids) ids->push_back(id);
            q.push_back(qn);
        }
        return q;
    }
};

struct ChainNets {
    std::vector<NetIndex> o, co;
    std::vector<std::string> chip_ids;
};

ChainNets build_chain(Builder& b, const std::string& tag, unsigned w,
                      const std::vector<NetIndex>& s, const std::vector<NetIndex>& di,
                      NetIndex cyinit) {
    unsigned nc = (w + 3) / 4;
    ChainNets r;
    NetIndex ci = b.c(false);
    for (unsigned j = 0; j < nc; ++j) {
        std::vector<NetIndex> pins(18);
        pins[pin::kCarryCi] = ci;
        pins[pin::kCarryCyinit] = j == 0 ? cyinit : b.c(false);
        for (unsigned p = 0; p < 4; ++p) {
            unsigned i = 4 * j + p;
            pins[pin::carry_s(int(p))] = i < w ? s[i] : b.c(false);
            pins[pin::carry_di(int(p))] = i < w ? di[i] : b.c(false);
            NetIndex on = b.nl.add_net(tag + "_o[" + std::to_string(i) + "]");
            NetIndex cn = b.nl.add_net(tag + "_co[" + std::to_string(i) + "]");
            pins[pin::carry_o(int(p))] = on;
            pins[pin::carry_co(int(p))] = cn;
            r.o.push_back(on);
            r.co.push_back(cn);
        }
        std::string id = tag + "_cc" + std::to_string(j);
        b.nl.add_gate(id, Prim::Carry4, 0, std::move(pins));
        r.chip_ids.push_back(id);
        ci = r.co[4 * j + 3];
    }
    return r;
}

Prim reset_prim(char suffix) {
    switch (suffix) {
    case 'r': return Prim::Fdre;
    case 's': return Prim::Fdse;
    case 'c': return Prim::Fdce;
    case 'p': return Prim::Fdpe;
    }
    throw InputError("unknown reset kind suffix");
}

// adder, subtractor, comparator-*, addsub.
GenDesign gen_carry_op(const GenOptions& o) {
    unsigned w = o.width;
    if (w < 2 || w > 64) throw InputError("width must be in [2,64] for " + o.kind);
    bool is_cmp = o.kind.rfind("comparator-", 0) == 0;
    std::string cmp = is_cmp ? o.kind.substr(11) : "";
    if (is_cmp && cmp != "ge" && cmp != "gt" && cmp != "le" && cmp != "lt" && cmp != "eq")
        throw InputError("unknown comparator kind " + o.kind);
    bool is_addsub = o.kind == "addsub";
    bool is_add = o.kind == "adder";

    Builder b(o.kind, o.seed, o.permuted);
    NetIndex clk = kInvalidIndex;
    if (o.registered) {
        clk = b.nl.add_net("clk");
        b.nl.add_port("clk", true, {clk});
    }
    auto a_raw = b.word("a", w);
    auto b_raw = b.word("b", w);
    b.nl.add_port("a", true, a_raw);
    b.nl.add_port("b", true, b_raw);
    NetIndex m = kInvalidIndex;
    if (is_addsub) {
        m = b.nl.add_net("m");
        b.nl.add_port("m", true, {m});
    }

    auto aa = a_raw, bb = b_raw;
    if (o.registered) {
        aa = b.reg_word("ra", a_raw, clk);
        bb = b.reg_word("rb", b_raw, clk);
        if (is_addsub) m = b.reg_word("rm", {m}, clk)[0];
    }

    // Structural first operand: le/lt are built as ge/gt with swapped roles.
    bool swapped = cmp == "le" || cmp == "lt";
    const auto& x = swapped ? bb : aa;
    const auto& y = swapped ? aa : bb;

    GenLabel lab;
    lab.kind = is_cmp ? "comparator" : (is_addsub ? "addsub" : o.kind);
    lab.op = is_cmp ? cmp : (is_add ? "add" : (is_addsub ? "" : "sub"));
    lab.width = w;
    lab.input_ports = {"a", "b"};
    lab.output_port = "y";
    if (is_addsub) {
        lab.select_port = "m";
        lab.op_map = {{0, "add"}, {1, "sub"}};
    }

    std::vector<NetIndex> s(w), di(w);
    for (unsigned i = 0; i < w; ++i) {
        NetIndex sn = b.nl.add_net(Builder::bit("sx", i));
        std::string sid = "s" + std::to_string(i);
        if (is_addsub)
            b.lut(sid, {x[i], y[i], m}, kParity3, sn);
        else
            b.lut(sid, {x[i], y[i]}, is_add ? kXor2 : kXnor2, sn);
        lab.gate_ids.push_back(sid);
        s[i] = sn;

        if (is_cmp && cmp == "eq") {
            di[i] = b.c(false);
        } else if (is_addsub || !o.permuted) {
            di[i] = x[i];
        } else if (is_add) {
            // Either operand works on the DI side of an adder.
            unsigned r = b.pick(4);
            if (r < 2) {
                di[i] = r == 0 ? x[i] : y[i];
            } else {
                NetIndex dn = b.nl.add_net(Builder::bit("db", i));
                std::string id = "dib" + std::to_string(i);
                b.lut(id, {r == 2 ? x[i] : y[i]}, kBuf1, dn);
                lab.gate_ids.push_back(id);
                di[i] = dn;
            }
        } else {
            // Subtraction-shaped ops: minuend direct/buffered, or the other
            // operand inverted.
            unsigned r = b.pick(3);
            if (r == 0) {
                di[i] = x[i];
            } else {
                NetIndex dn = b.nl.add_net(Builder::bit("db", i));
                std::string id = (r == 1 ? "dib" : "din") + std::to_string(i);
                b.lut(id, {r == 1 ? x[i] : y[i]}, r == 1 ? kBuf1 : kInv1, dn);
                lab.gate_ids.push_back(id);
                di[i] = dn;
            }
        }
    }

    NetIndex cyinit;
    if (is_add)
        cyinit = b.c(false);
    else if (is_addsub)
        cyinit = m;
    else if (cmp == "gt" || cmp == "lt")
        cyinit = b.c(false);
    else
        cyinit = b.c(true);

    ChainNets ch = build_chain(b, "u", w, s, di, cyinit);
    for (const auto& id : ch.chip_ids) lab.gate_ids.push_back(id);

    std::vector<NetIndex> result;
    if (is_cmp)
        result = {ch.co[w - 1]};
    else
        result.assign(ch.o.begin(), ch.o.begin() + w);

    std::vector<NetIndex> ybits;
    if (o.registered) {
        for (unsigned i = 0; i < result.size(); ++i) {
            NetIndex qn = b.nl.add_net(Builder::bit("yq", i));
            std::string id = "ry" + std::to_string(i);
            b.ff(id, Prim::Fdre, clk, b.c(true), result[i], b.c(false), qn);
            lab.gate_ids.push_back(id);
            ybits.push_back(qn);
        }
    } else {
        ybits = result;
    }
    b.nl.add_port("y", false, ybits);

    GenDesign d;
    d.netlist = std::move(b.nl);
    d.labels.push_back(std::move(lab));
    return d;
}

GenDesign gen_alu(const GenOptions& o) {
    unsigned w = o.width;
    if (w < 2 || w > 64) throw InputError("width must be in [2,64] for alu");
    Builder b("alu", o.seed, o.permuted);
    NetIndex clk = b.nl.add_net("clk");
    b.nl.add_port("clk", true, {clk});
    auto a_raw = b.word("a", w);
    auto b_raw = b.word("b", w);
    auto op = b.word("op", 2);
    b.nl.add_port("a", true, a_raw);
    b.nl.add_port("b", true, b_raw);
    b.nl.add_port("op", true, op);

    auto aq = b.reg_word("ra", a_raw, clk);
    auto bq = b.reg_word("rb", b_raw, clk);

    GenLabel lab;
    lab.kind = "alu";
    lab.width = w;
    lab.input_ports = {"a", "b"};
    lab.output_port = "q";
    lab.select_port = "op";
    lab.op_map = {{0, "add"}, {1, "sub"}, {2, "and"}, {3, "xor"}};

    // Opcode 1 drives the subtract mode of the carry chain.
    NetIndex m = b.nl.add_net("m");
    b.lut("opdec", {op[0], op[1]}, 0x2, m);
    lab.gate_ids.push_back("opdec");

    std::vector<NetIndex> s(w), di(w), andw(w), xorw(w);
    for (unsigned i = 0; i < w; ++i) {
        s[i] = b.nl.add_net(Builder::bit("sx", i));
        b.lut("s" + std::to_string(i), {aq[i], bq[i], m}, kParity3, s[i]);
        lab.gate_ids.push_back("s" + std::to_string(i));
        di[i] = aq[i];
        andw[i] = b.nl.add_net(Builder::bit("aw", i));
        b.lut("andg" + std::to_string(i), {aq[i], bq[i]}, kAnd2, andw[i]);
        lab.gate_ids.push_back("andg" + std::to_string(i));
        xorw[i] = b.nl.add_net(Builder::bit("xw", i));
        b.lut("xorg" + std::to_string(i), {aq[i], bq[i]}, kXor2, xorw[i]);
        lab.gate_ids.push_back("xorg" + std::to_string(i));
    }

    ChainNets ch = build_chain(b, "u", w, s, di, m);
    for (const auto& id : ch.chip_ids) lab.gate_ids.push_back(id);

    // Result mux over (arith, and, xor, op0, op1).
    uint64_t muxfn = 0;
    for (uint64_t v = 0; v < 32; ++v) {
        unsigned sel = unsigned((v >> 3) & 3);
        uint64_t bitv = sel < 2 ? (v & 1) : (sel == 2 ? (v >> 1 & 1) : (v >> 2 & 1));
        if (bitv) muxfn |= 1ull << v;
    }
    std::vector<NetIndex> qbits;
    for (unsigned i = 0; i < w; ++i) {
        NetIndex dn = b.nl.add_net(Builder::bit("yd", i));
        std::string mid = "mux" + std::to_string(i);
        b.lut(mid, {ch.o[i], andw[i], xorw[i], op[0], op[1]}, muxfn, dn);
        lab.gate_ids.push_back(mid);
        NetIndex qn = b.nl.add_net(Builder::bit("q", i));
        std::string fid = "rq" + std::to_string(i);
        b.ff(fid, Prim::Fdre, clk, b.c(true), dn, b.c(false), qn);
        lab.gate_ids.push_back(fid);
        qbits.push_back(qn);
    }
    b.nl.add_port("q", false, qbits);

    GenDesign d;
    d.netlist = std::move(b.nl);
    d.labels.push_back(std::move(lab));
    return d;
}

GenDesign gen_counter(const GenOptions& o, char rk) {
    unsigned w = o.width;
    if (w < 2 || w > 64) throw InputError("width must be in [2,64] for counter");
    Builder b(o.kind, o.seed, o.permuted);
    NetIndex clk = b.nl.add_net("clk");
    NetIndex rst = b.nl.add_net("rst");
    b.nl.add_port("clk", true, {clk});
    b.nl.add_port("rst", true, {rst});
    auto q = b.word("q", w);
    b.nl.add_port("q", false, q);

    GenLabel lab;
    lab.kind = "counter";
    lab.op = "up";
    lab.width = w;
    lab.output_port = "q";

    std::vector<NetIndex> d(w);
    NetIndex t_prev = q[0];
    for (unsigned i = 0; i < w; ++i) {
        d[i] = b.nl.add_net(Builder::bit("d", i));
        std::string id = i == 0 ? "d0" : "dg" + std::to_string(i);
        if (i == 0)
            b.lut(id, {q[0]}, kInv1, d[0]);
        else
            b.lut(id, {q[i], t_prev}, kXor2, d[i]);
        lab.gate_ids.push_back(id);
        if (i >= 1 && i + 1 < w) {
            NetIndex tn = b.nl.add_net(Builder::bit("t", i + 1));
            std::string tid = "t" + std::to_string(i + 1);
            b.lut(tid, {t_prev, q[i]}, kAnd2, tn);
            lab.gate_ids.push_back(tid);
            t_prev = tn;
        }
    }
    Prim prim = reset_prim(rk);
    for (unsigned i = 0; i < w; ++i) {
        std::string id = "cf" + std::to_string(i);
        b.ff(id, prim, clk, b.c(true), d[i], rst, q[i]);
        lab.gate_ids.push_back(id);
    }

    GenDesign res;
    res.netlist = std::move(b.nl);
    res.labels.push_back(std::move(lab));
    return res;
}

GenDesign gen_shiftreg(const GenOptions& o, char rk) {
    unsigned w = o.width;
    if (w < 2 || w > 64) throw InputError("width must be in [2,64] for shiftreg");
    Builder b(o.kind, o.seed, o.permuted);
    NetIndex clk = b.nl.add_net("clk");
    NetIndex rst = b.nl.add_net("rst");
    NetIndex si = b.nl.add_net("si");
    b.nl.add_port("clk", true, {clk});
    b.nl.add_port("rst", true, {rst});
    b.nl.add_port("si", true, {si});
    auto q = b.word("q", w);
    b.nl.add_port("q", false, q);

    GenLabel lab;
    lab.kind = "shift_register";
    lab.width = w;
    lab.input_ports = {"si"};
    lab.output_port = "q";

    Prim prim = reset_prim(rk);
    for (unsigned i = 0; i < w; ++i) {
        std::string id = "sf" + std::to_string(i);
        b.ff(id, prim, clk, b.c(true), i == 0 ? si : q[i - 1], rst, q[i]);
        lab.gate_ids.push_back(id);
    }

    GenDesign res;
    res.netlist = std::move(b.nl);
    res.labels.push_back(std::move(lab));
    return res;
}

GenDesign gen_register(const GenOptions& o) {
    unsigned w = o.width;
    if (w < 1 || w > 64) throw InputError("width must be in [1,64] for register");
    Builder b("register", o.seed, o.permuted);
    NetIndex clk = b.nl.add_net("clk");
    NetIndex ce = b.nl.add_net("ce");
    b.nl.add_port("clk", true, {clk});
    b.nl.add_port("ce", true, {ce});
    auto d = b.word("d", w);
    b.nl.add_port("d", true, d);
    auto q = b.word("q", w);
    b.nl.add_port("q", false, q);

    GenLabel lab;
    lab.kind = "register";
    lab.width = w;
    lab.input_ports = {"d"};
    lab.output_port = "q";
    for (unsigned i = 0; i < w; ++i) {
        std::string id = "rf" + std::to_string(i);
        b.ff(id, Prim::Fdre, clk, ce, d[i], b.c(false), q[i]);
        lab.gate_ids.push_back(id);
    }

    GenDesign res;
    res.netlist = std::move(b.nl);
    res.labels.push_back(std::move(lab));
    return res;
}

GenDesign gen_bitwise(const GenOptions& o, const std::string& op) {
    unsigned w = o.width;
    if (w < 2 || w > 64) throw InputError("width must be in [2,64] for bitwise");
    bool unary = op == "not";
    bool has_sel = op == "mux";
    uint64_t fn;
    if (op == "and") fn = kAnd2;
    else if (op == "or") fn = kOr2;
    else if (op == "xor") fn = kXor2;
    else if (op == "nand") fn = kNand2;
    else if (op == "nor") fn = kNor2;
    else if (op == "xnor") fn = kXnor2;
    else if (op == "not") fn = kInv1;
    else if (op == "mux") fn = kMux3;
    else throw InputError("unknown bitwise op " + op);

    Builder b(o.kind, o.seed, o.permuted);
    NetIndex clk = b.nl.add_net("clk");
    b.nl.add_port("clk", true, {clk});
    NetIndex cea = b.nl.add_net("cea");
    b.nl.add_port("cea", true, {cea});
    NetIndex ceb = kInvalidIndex;
    if (!unary) {
        ceb = b.nl.add_net("ceb");
        b.nl.add_port("ceb", true, {ceb});
    }
    NetIndex ced = b.nl.add_net("ced");
    b.nl.add_port("ced", true, {ced});
    NetIndex sel = kInvalidIndex;
    if (has_sel) {
        sel = b.nl.add_net("s");
        b.nl.add_port("s", true, {sel});
    }
    auto a_raw = b.word("a", w);
    b.nl.add_port("a", true, a_raw);
    std::vector<NetIndex> b_raw;
    if (!unary) {
        b_raw = b.word("b", w);
        b.nl.add_port("b", true, b_raw);
    }

    std::vector<NetIndex> aq(w), bq;
    for (unsigned i = 0; i < w; ++i) {
        aq[i] = b.nl.add_net(Builder::bit("ra_q", i));
        b.ff("ra_ff" + std::to_string(i), Prim::Fdre, clk, cea, a_raw[i], b.c(false), aq[i]);
    }
    if (!unary) {
        bq.resize(w);
        for (unsigned i = 0; i < w; ++i) {
            bq[i] = b.nl.add_net(Builder::bit("rb_q", i));
            b.ff("rb_ff" + std::to_string(i), Prim::Fdre, clk, ceb, b_raw[i], b.c(false), bq[i]);
        }
    }

    GenLabel lab;
    lab.kind = "bitwise";
    lab.op = op;
    lab.width = w;
    lab.input_ports = unary ? std::vector<std::string>{"a"} : std::vector<std::string>{"a", "b"};
    lab.output_port = "y";
    if (has_sel) lab.select_port = "s";

    auto q = b.word("y_q", w);
    for (unsigned i = 0; i < w; ++i) {
        NetIndex dn = b.nl.add_net(Builder::bit("d", i));
        std::string id = "g" + std::to_string(i);
        std::vector<NetIndex> ins;
        if (unary) ins = {aq[i]};
        else if (has_sel) ins = {aq[i], bq[i], sel};
        else ins = {aq[i], bq[i]};
        b.lut(id, ins, fn, dn);
        lab.gate_ids.push_back(id);
        b.ff("rd_ff" + std::to_string(i), Prim::Fdre, clk, ced, dn, b.c(false), q[i]);
    }
    b.nl.add_port("y", false, q);

    GenDesign res;
    res.netlist = std::move(b.nl);
    res.labels.push_back(std::move(lab));
    return res;
}

GenDesign gen_aes_analog(const GenOptions& o) {
    static const char* ops[5] = {"xor", "and", "or", "xnor", "mux"};
    std::vector<GenDesign> parts;
    for (unsigned j = 0; j < 20; ++j) {
        GenOptions po;
        po.kind = std::string("bitwise-") + ops[j % 5];
        po.width = 8;
        po.seed = o.seed + j;
        po.permuted = o.permuted;
        parts.push_back(generate(po));
    }
    return compose("aes_analog", parts);
}

GenDesign gen_hilbert_analog(const GenOptions& o) {
    std::vector<GenDesign> parts;
    for (unsigned j = 0; j < 15; ++j) {
        GenOptions po;
        po.kind = j < 5 ? "adder" : "subtractor";
        po.width = 32;
        po.seed = o.seed + j;
        parts.push_back(generate(po));
    }
    return compose("hilbert_analog", parts);
}

GenDesign gen_mixed(const GenOptions& o) {
    struct Spec {
        const char* kind;
        unsigned width;
        bool permuted, registered;
    };
    static const Spec specs[] = {
        {"adder", 32, false, true},   {"adder", 16, true, true},
        {"subtractor", 32, false, false}, {"subtractor", 16, true, false},
        {"comparator-ge", 16, false, false}, {"comparator-eq", 8, false, true},
        {"addsub", 16, false, false}, {"alu", 8, false, false},
        {"counter-r", 8, false, false}, {"counter-c", 4, false, false},
        {"shiftreg-s", 8, false, false}, {"shiftreg-p", 4, false, false},
        {"register", 8, false, false}, {"bitwise-xor", 8, false, false},
        {"bitwise-mux", 8, false, false}, {"bitwise-not", 8, false, false},
    };
    std::vector<GenDesign> parts;
    uint64_t seed = o.seed;
    for (const Spec& s : specs) {
        GenOptions po;
        po.kind = s.kind;
        po.width = s.width;
        po.permuted = s.permuted;
        po.registered = s.registered;
        po.seed = seed++;
        parts.push_back(generate(po));
    }
    return compose("mixed", parts);
}

} // namespace

const std::vector<std::string>& generator_kinds() {
    static const std::vector<std::string> kinds = {
        "adder", "subtractor", "comparator-ge", "comparator-gt", "comparator-le",
        "comparator-lt", "comparator-eq", "addsub", "alu", "counter-r", "counter-s",
        "counter-c", "counter-p", "shiftreg-r", "shiftreg-s", "shiftreg-c", "shiftreg-p",
        "register", "bitwise-and", "bitwise-or", "bitwise-xor", "bitwise-nand",
        "bitwise-nor", "bitwise-xnor", "bitwise-not", "bitwise-mux", "aes-analog",
        "hilbert-analog", "mixed",
    };
    return kinds;
}

GenDesign generate(const GenOptions& o) {
    GenDesign d;
    if (o.kind == "adder" || o.kind == "subtractor" || o.kind == "addsub" ||
        o.kind.rfind("comparator-", 0) == 0) {
        d = gen_carry_op(o);
    } else if (o.kind == "alu") {
        d = gen_alu(o);
    } else if (o.kind.rfind("counter-", 0) == 0 && o.kind.size() == 9) {
        d = gen_counter(o, o.kind[8]);
    } else if (o.kind.rfind("shiftreg-", 0) == 0 && o.kind.size() == 10) {
        d = gen_shiftreg(o, o.kind[9]);
    } else if (o.kind == "register") {
        d = gen_register(o);
    } else if (o.kind.rfind("bitwise-", 0) == 0) {
        d = gen_bitwise(o, o.kind.substr(8));
    } else if (o.kind == "aes-analog") {
        return gen_aes_analog(o);
    } else if (o.kind == "hilbert-analog") {
        return gen_hilbert_analog(o);
    } else if (o.kind == "mixed") {
        return gen_mixed(o);
    } else {
        throw InputError("unknown generator kind '" + o.kind + "'");
    }
    d.netlist.finalize();
    return d;
}

GenDesign compose(const std::string& name, const std::vector<GenDesign>& parts) {
    GenDesign out;
    Netlist& nl = out.netlist;
    nl.name = name;
    bool clk_port_added = false;
    for (size_t k = 0; k < parts.size(); ++k) {
        const Netlist& p = parts[k].netlist;
        std::string pre = "u" + std::to_string(k) + "_";
        auto map_net = [&](NetIndex n) -> NetIndex {
            const Net& nn = p.net(n);
            if (nn.kind != NetKind::Signal) return nl.const_net(nn.kind == NetKind::Const1);
            if (nn.id == "clk") return nl.add_net("clk");
            return nl.add_net(pre + nn.id);
        };
        for (const Gate& g : p.gates()) {
            if (g.prim == Prim::Ramb)
                throw InternalError("compose does not handle RAM parts");
            std::vector<NetIndex> pins;
            pins.reserve(g.pins.size());
            for (NetIndex n : g.pins) pins.push_back(map_net(n));
            nl.add_gate(pre + g.id, g.prim, g.init, std::move(pins));
        }
        for (const Port& port : p.ports()) {
            std::vector<NetIndex> bits;
            bits.reserve(port.bits.size());
            for (NetIndex n : port.bits) bits.push_back(map_net(n));
            if (port.name == "clk") {
                if (!clk_port_added) {
                    nl.add_port("clk", true, bits);
                    clk_port_added = true;
                }
                continue;
            }
            nl.add_port(pre + port.name, port.is_input, std::move(bits));
        }
        for (GenLabel lab : parts[k].labels) {
            for (auto& gid : lab.gate_ids) gid = pre + gid;
            for (auto& ip : lab.input_ports) ip = pre + ip;
            if (!lab.output_port.empty()) lab.output_port = pre + lab.output_port;
            if (!lab.select_port.empty()) lab.select_port = pre + lab.select_port;
            out.labels.push_back(std::move(lab));
        }
    }
    nl.finalize();
    return out;
}

std::string labels_to_json(const std::vector<GenLabel>& labels) {
    nlohmann::json mods = nlohmann::json::array();
    for (const GenLabel& l : labels) {
        nlohmann::json j;
        j["kind"] = l.kind;
        j["op"] = l.op;
        j["width"] = l.width;
        j["gates"] = l.gate_ids;
        j["inputs"] = l.input_ports;
        j["output"] = l.output_port;
        if (!l.select_port.empty()) j["select"] = l.select_port;
        if (!l.op_map.empty()) {
            nlohmann::json m = nlohmann::json::object();
            for (const auto& [v, op] : l.op_map) m[std::to_string(v)] = op;
            j["op_map"] = m;
        }
        mods.push_back(std::move(j));
    }
    nlohmann::json root;
    root["modules"] = std::move(mods);
    return root.dump(1, ' ') + "\n";
}

std::vector<GenLabel> labels_from_json(const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("labels json: ") + e.what());
    }
    std::vector<GenLabel> out;
    for (const auto& j : root.at("modules")) {
        GenLabel l;
        l.kind = j.at("kind").get<std::string>();
        l.op = j.value("op", std::string());
        l.width = j.at("width").get<unsigned>();
        for (const auto& g : j.at("gates")) l.gate_ids.push_back(g.get<std::string>());
        for (const auto& p : j.at("inputs")) l.input_ports.push_back(p.get<std::string>());
        l.output_port = j.value("output", std::string());
        l.select_port = j.value("select", std::string());
        if (j.contains("op_map"))
            for (const auto& [k, v] : j.at("op_map").items())
                l.op_map[std::stoull(k)] = v.get<std::string>();
        out.push_back(std::move(l));
    }
    return out;
}

void labels_to_json_file(const std::string& path, const std::vector<GenLabel>& labels) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write " + path);
    f << labels_to_json(labels);
}

std::vector<GenLabel> labels_from_json_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot read " + path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return labels_from_json(text);
}

} // namespace lutrev
