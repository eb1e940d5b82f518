#include "lutrev/netlist.hpp"

#include <algorithm>
#include <array>

namespace lutrev {

namespace {

const std::array<const char*, 14> kPrimNames = {
    "LUT1", "LUT2", "LUT3", "LUT4", "LUT5", "LUT6",
    "CARRY4", "MUXF7", "MUXF8",
    "FDRE", "FDSE", "FDCE", "FDPE",
    "RAMB",
};

struct FixedPin {
    const char* name;
    bool is_out;
};

const std::array<FixedPin, 18> kCarryPins = {{
    {"CI", false}, {"CYINIT", false},
    {"DI0", false}, {"DI1", false}, {"DI2", false}, {"DI3", false},
    {"S0", false}, {"S1", false}, {"S2", false}, {"S3", false},
    {"O0", true}, {"O1", true}, {"O2", true}, {"O3", true},
    {"CO0", true}, {"CO1", true}, {"CO2", true}, {"CO3", true},
}};

const std::array<FixedPin, 4> kMuxPins = {{
    {"I0", false}, {"I1", false}, {"S", false}, {"O", true},
}};

const char* ff_rst_name(Prim p) {
    switch (p) {
    case Prim::Fdre: return "R";
    case Prim::Fdse: return "S";
    case Prim::Fdce: return "CLR";
    case Prim::Fdpe: return "PRE";
    default: throw InternalError("not a flip-flop");
    }
}

const std::array<const char*, 7> kLutInNames = {"I0", "I1", "I2", "I3", "I4", "I5", "I6"};

// "DI[2]" and "DI2" both mean pin DI2.
std::string strip_brackets(const std::string& name) {
    auto lb = name.find('[');
    if (lb == std::string::npos || name.back() != ']') return name;
    return name.substr(0, lb) + name.substr(lb + 1, name.size() - lb - 2);
}

} // namespace

const char* prim_name(Prim p) { return kPrimNames[size_t(p)]; }

Prim prim_from_name(const std::string& name) {
    for (size_t i = 0; i < kPrimNames.size(); ++i)
        if (name == kPrimNames[i]) return Prim(i);
    // Vivado RAM block names all start with RAMB (RAMB18E1, RAMB36E1, ...).
    if (name.rfind("RAMB", 0) == 0) return Prim::Ramb;
    throw InputError("unknown primitive type '" + name + "'");
}

int pin_count(const Gate& g) {
    if (g.prim == Prim::Ramb) return int(g.ram_pins.size());
    if (is_lut(g.prim)) return lut_width(g.prim) + 1;
    if (g.prim == Prim::Carry4) return int(kCarryPins.size());
    if (is_muxf(g.prim)) return int(kMuxPins.size());
    return 5; // flip-flops: C, CE, D, rst, Q
}

const std::string& pin_name(const Gate& g, uint16_t pin) {
    static thread_local std::string scratch;
    if (g.prim == Prim::Ramb) return g.ram_pins[pin];
    if (is_lut(g.prim)) {
        scratch = pin == lut_width(g.prim) ? "O" : kLutInNames[pin];
        return scratch;
    }
    if (g.prim == Prim::Carry4) {
        scratch = kCarryPins[pin].name;
        return scratch;
    }
    if (is_muxf(g.prim)) {
        scratch = kMuxPins[pin].name;
        return scratch;
    }
    static const std::array<const char*, 5> ff = {"C", "CE", "D", nullptr, "Q"};
    scratch = pin == pin::kFfRst ? ff_rst_name(g.prim) : ff[pin];
    return scratch;
}

bool pin_is_output(const Gate& g, uint16_t pin) {
    if (g.prim == Prim::Ramb) return g.ram_is_out[pin] != 0;
    if (is_lut(g.prim)) return pin == lut_width(g.prim);
    if (g.prim == Prim::Carry4) return kCarryPins[pin].is_out;
    if (is_muxf(g.prim)) return kMuxPins[pin].is_out;
    return pin == pin::kFfQ;
}

uint16_t pin_index(const Gate& g, const std::string& raw) {
    std::string name = strip_brackets(raw);
    if (g.prim == Prim::Ramb) {
        for (size_t i = 0; i < g.ram_pins.size(); ++i)
            if (g.ram_pins[i] == name) return uint16_t(i);
        throw InputError("gate '" + g.id + "': unknown pin '" + raw + "'");
    }
    int n = pin_count(g);
    for (int i = 0; i < n; ++i)
        if (pin_name(g, uint16_t(i)) == name) return uint16_t(i);
    throw InputError("gate '" + g.id + "' (" + prim_name(g.prim) + "): unknown pin '" +
                     raw + "'");
}

NetIndex Netlist::add_net(const std::string& id, NetKind kind) {
    if (auto it = net_index_.find(id); it != net_index_.end()) {
        if (nets_[it->second].kind != kind)
            throw InputError("net '" + id + "' redeclared with different kind");
        return it->second;
    }
    NetIndex n = NetIndex(nets_.size());
    nets_.push_back(Net{id, kind, {}, {}});
    net_index_.emplace(id, n);
    return n;
}

NetIndex Netlist::net_by_id(const std::string& id) const {
    auto it = net_index_.find(id);
    return it == net_index_.end() ? kInvalidIndex : it->second;
}

NetIndex Netlist::require_net(const std::string& id) const {
    NetIndex n = net_by_id(id);
    if (n == kInvalidIndex) throw InputError("unknown net '" + id + "'");
    return n;
}

NetIndex Netlist::const_net(bool value) {
    NetIndex& slot = value ? const1_ : const0_;
    if (slot == kInvalidIndex)
        slot = add_net(value ? "$1" : "$0", value ? NetKind::Const1 : NetKind::Const0);
    return slot;
}

GateIndex Netlist::add_gate(const std::string& id, Prim prim, uint64_t init,
                            std::vector<NetIndex> pins) {
    if (gate_index_.count(id)) throw InputError("duplicate gate id '" + id + "'");
    if (prim == Prim::Ramb) throw InternalError("use add_ram_gate for RAM blocks");
    Gate g;
    g.id = id;
    g.prim = prim;
    g.init = init;
    g.pins = std::move(pins);
    GateIndex gi = GateIndex(gates_.size());
    gate_index_.emplace(id, gi);
    gates_.push_back(std::move(g));
    return gi;
}

GateIndex Netlist::add_ram_gate(const std::string& id,
                                const std::vector<std::pair<std::string, NetIndex>>& pins) {
    if (gate_index_.count(id)) throw InputError("duplicate gate id '" + id + "'");
    Gate g;
    g.id = id;
    g.prim = Prim::Ramb;
    for (auto& [name, net] : pins) {
        g.ram_pins.push_back(strip_brackets(name));
        // RAM blocks are opaque; data-out pins (DO*) are the only outputs we
        // recognize, everything else is treated as an input.
        g.ram_is_out.push_back(g.ram_pins.back().rfind("DO", 0) == 0 ? 1 : 0);
        g.pins.push_back(net);
    }
    GateIndex gi = GateIndex(gates_.size());
    gate_index_.emplace(id, gi);
    gates_.push_back(std::move(g));
    return gi;
}

GateIndex Netlist::gate_by_id(const std::string& id) const {
    auto it = gate_index_.find(id);
    return it == gate_index_.end() ? kInvalidIndex : it->second;
}

void Netlist::add_port(const std::string& name, bool is_input, std::vector<NetIndex> bits) {
    for (auto& p : ports_)
        if (p.name == name) throw InputError("duplicate port '" + name + "'");
    ports_.push_back(Port{name, is_input, std::move(bits)});
}

void Netlist::check_pins() {
    for (GateIndex gi = 0; gi < gates_.size(); ++gi) {
        Gate& g = gates_[gi];
        size_t want = size_t(pin_count(g));
        if (g.pins.size() != want)
            throw InputError("gate '" + g.id + "': expected " + std::to_string(want) +
                             " pins, got " + std::to_string(g.pins.size()));
        for (size_t p = 0; p < g.pins.size(); ++p) {
            if (g.pins[p] == kInvalidIndex)
                throw InputError("gate '" + g.id + "': pin " +
                                 pin_name(g, uint16_t(p)) + " unconnected");
            if (g.pins[p] >= nets_.size())
                throw InternalError("gate '" + g.id + "': pin net out of range");
        }
        if (is_lut(g.prim)) {
            int k = lut_width(g.prim);
            if (k < 6 && (g.init >> (uint64_t(1) << k)) != 0)
                throw InputError("gate '" + g.id + "': INIT wider than 2^" +
                                 std::to_string(k) + " bits");
        }
        if (is_ff(g.prim) && g.init > 1)
            throw InputError("gate '" + g.id + "': flip-flop INIT must be 0 or 1");
    }
}

void Netlist::build_connectivity() {
    for (auto& n : nets_) {
        n.driver = PinRef{};
        n.loads.clear();
    }
    for (GateIndex gi = 0; gi < gates_.size(); ++gi) {
        const Gate& g = gates_[gi];
        for (uint16_t p = 0; p < g.pins.size(); ++p) {
            Net& n = nets_[g.pins[p]];
            if (pin_is_output(g, p)) {
                if (n.kind != NetKind::Signal)
                    throw InputError("gate '" + g.id + "' drives constant net '" +
                                     n.id + "'");
                if (n.driver.valid())
                    throw InputError("net '" + n.id + "' has multiple drivers ('" +
                                     gates_[n.driver.gate].id + "' and '" + g.id + "')");
                n.driver = PinRef{gi, p};
            } else {
                n.loads.push_back(PinRef{gi, p});
            }
        }
    }
    pi_flags_.assign(nets_.size(), 0);
    po_flags_.assign(nets_.size(), 0);
    for (const auto& port : ports_) {
        for (NetIndex b : port.bits) {
            if (b >= nets_.size()) throw InternalError("port bit net out of range");
            if (nets_[b].kind != NetKind::Signal)
                throw InputError("port '" + port.name + "' references a constant net");
            if (port.is_input) {
                if (nets_[b].driver.valid())
                    throw InputError("input port '" + port.name + "' bit net '" +
                                     nets_[b].id + "' is driven by gate '" +
                                     gates_[nets_[b].driver.gate].id + "'");
                pi_flags_[b] = 1;
            } else {
                po_flags_[b] = 1;
            }
        }
    }
    for (const auto& n : nets_) {
        if (n.kind != NetKind::Signal) continue;
        NetIndex ni = net_index_.at(n.id);
        if (!n.driver.valid() && !pi_flags_[ni] && !n.loads.empty())
            throw InputError("net '" + n.id + "' has loads but no driver and is not a "
                             "primary input");
    }
}

void Netlist::build_comb_topo() {
    // Kahn's algorithm over combinational gates only. Dependencies flow
    // through signal nets driven by other combinational gates.
    comb_topo_.clear();
    std::vector<uint32_t> indeg(gates_.size(), 0);
    std::vector<std::vector<GateIndex>> out_edges(gates_.size());
    size_t comb_count = 0;
    for (GateIndex gi = 0; gi < gates_.size(); ++gi) {
        const Gate& g = gates_[gi];
        if (!is_comb(g.prim)) continue;
        ++comb_count;
        for (uint16_t p = 0; p < g.pins.size(); ++p) {
            if (pin_is_output(g, p)) continue;
            const Net& n = nets_[g.pins[p]];
            if (!n.driver.valid()) continue;
            const Gate& src = gates_[n.driver.gate];
            if (is_comb(src.prim)) {
                out_edges[n.driver.gate].push_back(gi);
                ++indeg[gi];
            }
        }
    }
    std::vector<GateIndex> ready;
    for (GateIndex gi = 0; gi < gates_.size(); ++gi)
        if (is_comb(gates_[gi].prim) && indeg[gi] == 0) ready.push_back(gi);
    // Index order keeps the result deterministic for identical inputs.
    while (!ready.empty()) {
        GateIndex gi = ready.back();
        ready.pop_back();
        comb_topo_.push_back(gi);
        for (GateIndex succ : out_edges[gi])
            if (--indeg[succ] == 0) ready.push_back(succ);
    }
    if (comb_topo_.size() != comb_count) {
        for (GateIndex gi = 0; gi < gates_.size(); ++gi)
            if (is_comb(gates_[gi].prim) && indeg[gi] > 0)
                throw InputError("combinational cycle through gate '" + gates_[gi].id +
                                 "'");
    }
}

void Netlist::finalize() {
    check_pins();
    build_connectivity();
    build_comb_topo();
    finalized_ = true;
}

std::vector<const Port*> Netlist::input_ports() const {
    std::vector<const Port*> r;
    for (const auto& p : ports_)
        if (p.is_input) r.push_back(&p);
    return r;
}

std::vector<const Port*> Netlist::output_ports() const {
    std::vector<const Port*> r;
    for (const auto& p : ports_)
        if (!p.is_input) r.push_back(&p);
    return r;
}

std::vector<GateIndex> Netlist::gates_of(Prim prim) const {
    std::vector<GateIndex> r;
    for (GateIndex gi = 0; gi < gates_.size(); ++gi)
        if (gates_[gi].prim == prim) r.push_back(gi);
    std::sort(r.begin(), r.end(),
              [&](GateIndex a, GateIndex b) { return gates_[a].id < gates_[b].id; });
    return r;
}

std::vector<GateIndex> Netlist::ff_gates() const {
    std::vector<GateIndex> r;
    for (GateIndex gi = 0; gi < gates_.size(); ++gi)
        if (is_ff(gates_[gi].prim)) r.push_back(gi);
    std::sort(r.begin(), r.end(),
              [&](GateIndex a, GateIndex b) { return gates_[a].id < gates_[b].id; });
    return r;
}

const std::vector<GateIndex>& Netlist::comb_topo_order() const {
    if (!finalized_) throw InternalError("netlist not finalized");
    return comb_topo_;
}

} // namespace lutrev
