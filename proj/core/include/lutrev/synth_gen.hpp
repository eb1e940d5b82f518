#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lutrev/netlist.hpp"

namespace lutrev {

// Options for one generated design. `permuted` randomizes LUT pin order
// (with matching INIT rewrites) and per-bit operand-side choices where the
// operator allows it; `registered` wraps operands and results in flip-flop
// stages. Both default off for plain combinational designs.
struct GenOptions {
    std::string kind = "adder";
    unsigned width = 8;
    bool permuted = false;
    bool registered = false;
    uint64_t seed = 1;
};

// Ground-truth label for one embedded module: the gates that realize it and
// the ports carrying its operands, for checking detector output against what
// was actually built.
struct GenLabel {
    std::string kind;
    std::string op;
    unsigned width = 0;
    std::vector<std::string> gate_ids;
    std::vector<std::string> input_ports;
    std::string output_port;
    std::string select_port;
    std::map<uint64_t, std::string> op_map;
};

struct GenDesign {
    Netlist netlist;
    std::vector<GenLabel> labels;
};

// Kinds: adder, subtractor, comparator-{ge,gt,le,lt,eq}, addsub, alu,
// counter-{r,s,c,p}, shiftreg-{r,s,c,p} (suffix picks the reset kind),
// register, bitwise-{and,or,xor,nand,nor,xnor,not,mux}, aes-analog,
// hilbert-analog, mixed.
const std::vector<std::string>& generator_kinds();

// Builds the requested design, finalized. Throws InputError on unknown kind
// or unusable width.
GenDesign generate(const GenOptions& opt);

// Merges independent designs into one netlist. Net, gate and port names get
// a "u<k>_" prefix; a port named "clk" is shared unprefixed across parts.
GenDesign compose(const std::string& name, const std::vector<GenDesign>& parts);

std::string labels_to_json(const std::vector<GenLabel>& labels);
std::vector<GenLabel> labels_from_json(const std::string& text);
void labels_to_json_file(const std::string& path, const std::vector<GenLabel>& labels);
std::vector<GenLabel> labels_from_json_file(const std::string& path);

} // namespace lutrev
