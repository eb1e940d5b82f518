#pragma once

#include <functional>
#include <vector>

#include "lutrev/netlist.hpp"

namespace lutrev {

// A cone of logic anchored at a pin. For reverse cones the frontier is the
// support: the nets where backward traversal stopped (primary inputs,
// constants, or outputs of boundary gates). For forward cones the frontier
// holds the nets at which forward traversal stopped (nets loading boundary
// gates or marked as primary outputs). Gates are in dependency order,
// sources first; the frontier keeps BFS discovery order.
struct Cone {
    PinRef root;
    std::vector<GateIndex> gates;
    std::vector<NetIndex> frontier;
};

enum class ConeDir { Reverse, Forward };

// Returns true when traversal must not pass through this gate.
using BoundaryFn = std::function<bool(const Netlist&, GateIndex)>;

// Default boundary: flip-flops, RAM blocks and CARRY4s.
bool default_cone_boundary(const Netlist& nl, GateIndex g);

// Like the default but lets CARRY4 through (used for regions spanning whole
// chains).
bool seq_cone_boundary(const Netlist& nl, GateIndex g);

Cone extract_cone(const Netlist& nl, PinRef root, ConeDir dir,
                  const BoundaryFn& boundary = default_cone_boundary);

// Convenience: reverse cone of the net feeding an input pin.
inline Cone input_cone(const Netlist& nl, GateIndex g, uint16_t pin,
                       const BoundaryFn& boundary = default_cone_boundary) {
    return extract_cone(nl, PinRef{g, pin}, ConeDir::Reverse, boundary);
}

} // namespace lutrev
