#pragma once

#include <string>

#include "lutrev/netlist.hpp"

namespace lutrev {

// Structural Verilog reader for the flattened netlist style Vivado writes:
// one module, wire/input/output declarations (scalar or vector), primitive
// instantiations with named connections and #(.INIT(...)) parameters, and
// constant or feedthrough assigns. Behavioral constructs are rejected.
// Errors carry line/column positions.
Netlist read_netlist_verilog(const std::string& text);
Netlist read_netlist_verilog_file(const std::string& path);

} // namespace lutrev
