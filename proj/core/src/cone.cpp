#include "lutrev/cone.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace lutrev {

bool default_cone_boundary(const Netlist& nl, GateIndex g) {
    Prim p = nl.gate(g).prim;
    return is_ff(p) || p == Prim::Ramb || p == Prim::Carry4;
}

bool seq_cone_boundary(const Netlist& nl, GateIndex g) {
    Prim p = nl.gate(g).prim;
    return is_ff(p) || p == Prim::Ramb;
}

namespace {

Cone reverse_cone(const Netlist& nl, PinRef root, const BoundaryFn& boundary) {
    Cone cone;
    cone.root = root;
    std::unordered_set<NetIndex> net_seen;
    std::unordered_set<GateIndex> gate_seen;
    std::deque<NetIndex> queue;

    auto visit_net = [&](NetIndex n) {
        if (!net_seen.insert(n).second) return;
        queue.push_back(n);
    };
    visit_net(nl.gate(root.gate).pins[root.pin]);

    std::vector<GateIndex> discovered;   // reverse BFS order
    while (!queue.empty()) {
        NetIndex ni = queue.front();
        queue.pop_front();
        const Net& n = nl.net(ni);
        bool stop = n.kind != NetKind::Signal || !n.driver.valid() ||
                    boundary(nl, n.driver.gate);
        if (stop) {
            // Constants are not part of the support.
            if (n.kind == NetKind::Signal) cone.frontier.push_back(ni);
            continue;
        }
        GateIndex gi = n.driver.gate;
        if (gate_seen.insert(gi).second) {
            discovered.push_back(gi);
            const Gate& g = nl.gate(gi);
            for (uint16_t p = 0; p < g.pins.size(); ++p)
                if (!pin_is_output(g, p)) visit_net(g.pins[p]);
        }
    }
    // Reverse traversal discovers consumers before producers; a stable
    // partition by dependency depth gives sources-first order.
    std::reverse(discovered.begin(), discovered.end());
    // The reversed discovery order is not necessarily topological when gates
    // share fan-in at different depths; fix up with a local Kahn pass that
    // preserves discovery order among ready gates.
    std::unordered_map<GateIndex, uint32_t> indeg;
    std::unordered_map<GateIndex, std::vector<GateIndex>> succ;
    for (GateIndex gi : discovered) indeg[gi] = 0;
    for (GateIndex gi : discovered) {
        const Gate& g = nl.gate(gi);
        for (uint16_t p = 0; p < g.pins.size(); ++p) {
            if (pin_is_output(g, p)) continue;
            const Net& n = nl.net(g.pins[p]);
            if (n.kind != NetKind::Signal || !n.driver.valid()) continue;
            if (indeg.count(n.driver.gate)) {
                succ[n.driver.gate].push_back(gi);
                ++indeg[gi];
            }
        }
    }
    std::deque<GateIndex> ready;
    for (GateIndex gi : discovered)
        if (indeg[gi] == 0) ready.push_back(gi);
    while (!ready.empty()) {
        GateIndex gi = ready.front();
        ready.pop_front();
        cone.gates.push_back(gi);
        for (GateIndex s : succ[gi])
            if (--indeg[s] == 0) ready.push_back(s);
    }
    if (cone.gates.size() != discovered.size())
        throw InternalError("cycle inside cone");
    return cone;
}

Cone forward_cone(const Netlist& nl, PinRef root, const BoundaryFn& boundary) {
    Cone cone;
    cone.root = root;
    std::unordered_set<NetIndex> net_seen, frontier_seen;
    std::unordered_set<GateIndex> gate_seen;
    std::deque<NetIndex> queue;

    auto visit_net = [&](NetIndex n) {
        if (!net_seen.insert(n).second) return;
        queue.push_back(n);
    };
    visit_net(nl.gate(root.gate).pins[root.pin]);

    std::vector<GateIndex> discovered;
    auto mark_frontier = [&](NetIndex n) {
        if (frontier_seen.insert(n).second) cone.frontier.push_back(n);
    };
    while (!queue.empty()) {
        NetIndex ni = queue.front();
        queue.pop_front();
        const Net& n = nl.net(ni);
        if (nl.is_primary_output(ni)) {
            // A primary output is a module boundary even when the net also
            // feeds further logic.
            mark_frontier(ni);
            continue;
        }
        for (const PinRef& load : n.loads) {
            if (boundary(nl, load.gate)) {
                mark_frontier(ni);
                continue;
            }
            GateIndex gi = load.gate;
            if (gate_seen.insert(gi).second) {
                discovered.push_back(gi);
                const Gate& g = nl.gate(gi);
                for (uint16_t p = 0; p < g.pins.size(); ++p)
                    if (pin_is_output(g, p)) visit_net(g.pins[p]);
            }
        }
    }
    // Forward discovery is already close to dependency order; run the same
    // stabilizing Kahn pass for exactness.
    std::unordered_map<GateIndex, uint32_t> indeg;
    std::unordered_map<GateIndex, std::vector<GateIndex>> succ;
    for (GateIndex gi : discovered) indeg[gi] = 0;
    for (GateIndex gi : discovered) {
        const Gate& g = nl.gate(gi);
        for (uint16_t p = 0; p < g.pins.size(); ++p) {
            if (pin_is_output(g, p)) continue;
            const Net& n = nl.net(g.pins[p]);
            if (n.kind != NetKind::Signal || !n.driver.valid()) continue;
            if (indeg.count(n.driver.gate)) {
                succ[n.driver.gate].push_back(gi);
                ++indeg[gi];
            }
        }
    }
    std::deque<GateIndex> ready;
    for (GateIndex gi : discovered)
        if (indeg[gi] == 0) ready.push_back(gi);
    std::vector<GateIndex> ordered;
    while (!ready.empty()) {
        GateIndex gi = ready.front();
        ready.pop_front();
        ordered.push_back(gi);
        for (GateIndex s : succ[gi])
            if (--indeg[s] == 0) ready.push_back(s);
    }
    if (ordered.size() != discovered.size()) throw InternalError("cycle inside cone");
    cone.gates = std::move(ordered);
    return cone;
}

} // namespace

Cone extract_cone(const Netlist& nl, PinRef root, ConeDir dir, const BoundaryFn& boundary) {
    if (!nl.finalized()) throw InternalError("netlist not finalized");
    if (!root.valid() || root.gate >= nl.gates().size())
        throw InternalError("cone root out of range");
    return dir == ConeDir::Reverse ? reverse_cone(nl, root, boundary)
                                   : forward_cone(nl, root, boundary);
}

} // namespace lutrev
