#pragma once

#include <string>

#include "lutrev/netlist.hpp"

namespace lutrev {

// JSON netlist exchange format:
//   {
//     "name": "top",
//     "ports": [{"name": "a", "dir": "input", "bits": ["a0", "a1"]}, ...],
//     "gates": [{"id": "g1", "type": "LUT2", "init": "6",
//                "conns": {"I0": "a0", "I1": "b0", "O": "s0"}}, ...]
//   }
// Port bits are LSB first. Constant connections use "$0" / "$1". GND/VCC
// gates are accepted and folded into constant nets. A CARRY4 with no CI or
// CYINIT connection gets constant zero there; an omitted output pin gets a
// fresh unloaded net.
Netlist read_netlist_json(const std::string& text);
Netlist read_netlist_json_file(const std::string& path);

std::string write_netlist_json(const Netlist& nl);
void write_netlist_json_file(const Netlist& nl, const std::string& path);

} // namespace lutrev
