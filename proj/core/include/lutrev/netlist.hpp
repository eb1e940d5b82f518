#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lutrev/error.hpp"

namespace lutrev {

using NetIndex = uint32_t;
using GateIndex = uint32_t;
inline constexpr uint32_t kInvalidIndex = 0xffffffffu;

enum class Prim : uint8_t {
    Lut1, Lut2, Lut3, Lut4, Lut5, Lut6,
    Carry4,
    Muxf7, Muxf8,
    Fdre, Fdse, Fdce, Fdpe,
    Ramb,
};

const char* prim_name(Prim p);
// Throws InputError on unknown names. GND/VCC are handled by the parsers
// (rewritten to constant nets) and are not Prim values.
Prim prim_from_name(const std::string& name);

inline bool is_lut(Prim p) { return p >= Prim::Lut1 && p <= Prim::Lut6; }
inline int lut_width(Prim p) { return int(p) - int(Prim::Lut1) + 1; }
inline Prim lut_prim(int width) {
    if (width < 1 || width > 6) throw InternalError("lut width out of range");
    return Prim(int(Prim::Lut1) + width - 1);
}
inline bool is_ff(Prim p) { return p >= Prim::Fdre && p <= Prim::Fdpe; }
inline bool is_muxf(Prim p) { return p == Prim::Muxf7 || p == Prim::Muxf8; }
// Combinational for traversal purposes. CARRY4 counts; FF and RAM cut paths.
inline bool is_comb(Prim p) { return !is_ff(p) && p != Prim::Ramb; }

// Fixed pin numbering. LUTs: I0..I(k-1) then O. All FF types share the layout
// C, CE, D, <reset>, Q where <reset> is R/S/CLR/PRE depending on the type.
namespace pin {
inline constexpr uint16_t kCarryCi = 0, kCarryCyinit = 1, kCarryDi0 = 2, kCarryS0 = 6,
                          kCarryO0 = 10, kCarryCo0 = 14;
inline constexpr uint16_t kFfC = 0, kFfCe = 1, kFfD = 2, kFfRst = 3, kFfQ = 4;
inline constexpr uint16_t kMuxI0 = 0, kMuxI1 = 1, kMuxS = 2, kMuxO = 3;
inline uint16_t lut_in(int i) { return uint16_t(i); }
inline uint16_t lut_out(Prim p) { return uint16_t(lut_width(p)); }
inline uint16_t carry_di(int i) { return uint16_t(kCarryDi0 + i); }
inline uint16_t carry_s(int i) { return uint16_t(kCarryS0 + i); }
inline uint16_t carry_o(int i) { return uint16_t(kCarryO0 + i); }
inline uint16_t carry_co(int i) { return uint16_t(kCarryCo0 + i); }
} // namespace pin

enum class NetKind : uint8_t { Signal, Const0, Const1 };

struct PinRef {
    GateIndex gate = kInvalidIndex;
    uint16_t pin = 0;
    bool valid() const { return gate != kInvalidIndex; }
    bool operator==(const PinRef&) const = default;
};

struct Net {
    std::string id;
    NetKind kind = NetKind::Signal;
    PinRef driver;                // invalid for primary inputs and constants
    std::vector<PinRef> loads;    // gate input pins, in gate/pin order after finalize
};

struct Gate {
    std::string id;
    Prim prim = Prim::Lut1;
    uint64_t init = 0;                  // LUT truth bits or FF initial value
    std::vector<NetIndex> pins;         // indexed by the fixed pin numbering
    std::vector<std::string> ram_pins;  // RAMB only: declared pin names
    std::vector<uint8_t> ram_is_out;    // RAMB only: per-pin output flag
};

struct Port {
    std::string name;
    bool is_input = false;
    std::vector<NetIndex> bits;   // LSB first
};

// Per-gate pin metadata. For RAMB the answers come from the gate's declared
// pin list; for everything else from the fixed tables.
int pin_count(const Gate& g);
const std::string& pin_name(const Gate& g, uint16_t pin);
bool pin_is_output(const Gate& g, uint16_t pin);
// Resolves a textual pin name for a primitive; accepts both "DI0" and "DI[0]"
// spellings. Returns kInvalidIndex-sized value on failure via throw.
uint16_t pin_index(const Gate& g, const std::string& name);

class Netlist {
public:
    std::string name = "top";

    NetIndex add_net(const std::string& id, NetKind kind = NetKind::Signal);
    NetIndex net_by_id(const std::string& id) const;        // kInvalidIndex if absent
    NetIndex require_net(const std::string& id) const;      // throws if absent
    NetIndex const_net(bool value);                         // creates "$0"/"$1" lazily

    GateIndex add_gate(const std::string& id, Prim prim, uint64_t init,
                       std::vector<NetIndex> pins);
    GateIndex add_ram_gate(const std::string& id,
                           const std::vector<std::pair<std::string, NetIndex>>& pins);
    GateIndex gate_by_id(const std::string& id) const;

    void add_port(const std::string& name, bool is_input, std::vector<NetIndex> bits);

    // Wires driver/load lists and checks structural invariants:
    // one driver per net, all pins present, combinational graph acyclic.
    void finalize();
    bool finalized() const { return finalized_; }

    const std::vector<Gate>& gates() const { return gates_; }
    const std::vector<Net>& nets() const { return nets_; }
    const std::vector<Port>& ports() const { return ports_; }
    const Gate& gate(GateIndex g) const { return gates_[g]; }
    const Net& net(NetIndex n) const { return nets_[n]; }
    Net& net_mut(NetIndex n) { return nets_[n]; }

    bool is_const(NetIndex n) const { return nets_[n].kind != NetKind::Signal; }
    bool const_value(NetIndex n) const { return nets_[n].kind == NetKind::Const1; }
    bool is_primary_input(NetIndex n) const { return pi_flags_[n]; }
    bool is_primary_output(NetIndex n) const { return po_flags_[n]; }

    std::vector<const Port*> input_ports() const;
    std::vector<const Port*> output_ports() const;

    // Gate indices of the given primitive, ordered by gate id.
    std::vector<GateIndex> gates_of(Prim prim) const;
    std::vector<GateIndex> ff_gates() const;

    // Combinational gates in dependency order (sources first). Valid after
    // finalize. FF/RAM outputs, primary inputs and constants are sources.
    const std::vector<GateIndex>& comb_topo_order() const;

private:
    std::vector<Gate> gates_;
    std::vector<Net> nets_;
    std::vector<Port> ports_;
    std::unordered_map<std::string, NetIndex> net_index_;
    std::unordered_map<std::string, GateIndex> gate_index_;
    std::vector<uint8_t> pi_flags_, po_flags_;
    std::vector<GateIndex> comb_topo_;
    NetIndex const0_ = kInvalidIndex, const1_ = kInvalidIndex;
    bool finalized_ = false;

    void check_pins() ;
    void build_connectivity();
    void build_comb_topo();
};

} // namespace lutrev
