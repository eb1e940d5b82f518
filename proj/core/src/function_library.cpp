#include "lutrev/function_library.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "lutrev/npn.hpp"

namespace lutrev {

using nlohmann::json;

namespace {

TtBits canon(uint64_t bits, unsigned nvars) {
    return npn_canonical(TtBits{bits, nvars}).canonical;
}

} // namespace

FunctionLibrary FunctionLibrary::builtin() {
    FunctionLibrary lib;
    TtBits xor2 = canon(0x6, 2);      // covers XNOR through output negation
    TtBits buf = canon(0x2, 1);       // covers the inverted-DI wiring too
    TtBits zero = canon(0x0, 0);
    lib.add_entry(LibEntry{"add", xor2, buf, 0, OutSite::Word, true});
    lib.add_entry(LibEntry{"sub", xor2, buf, 1, OutSite::Word, true});
    lib.add_entry(LibEntry{"ge", xor2, buf, 1, OutSite::Carry, true});
    lib.add_entry(LibEntry{"gt", xor2, buf, 0, OutSite::Carry, true});
    lib.add_entry(LibEntry{"eq", xor2, zero, 1, OutSite::Carry, true});
    lib.check_injective();
    return lib;
}

void FunctionLibrary::add_entry(LibEntry e) {
    entries_.push_back(std::move(e));
}

void FunctionLibrary::check_injective() const {
    std::set<std::tuple<uint64_t, unsigned, uint64_t, unsigned, int, int>> seen;
    for (const auto& e : entries_) {
        auto key = std::make_tuple(e.s_class.bits, e.s_class.nvars, e.di_class.bits,
                                   e.di_class.nvars, e.cyinit, int(e.site));
        if (!seen.insert(key).second)
            throw InputError("operator library is not injective: duplicate key for '" +
                             e.op + "'");
    }
}

const LibEntry* FunctionLibrary::lookup(const TtBits& s, const TtBits& di, int cyinit,
                                        OutSite site) const {
    for (const auto& e : entries_)
        if (e.s_class == s && e.di_class == di && e.cyinit == cyinit && e.site == site)
            return &e;
    return nullptr;
}

std::vector<const LibEntry*> FunctionLibrary::lookup_classes(const TtBits& s,
                                                             const TtBits& di) const {
    std::vector<const LibEntry*> out;
    for (const auto& e : entries_)
        if (e.s_class == s && e.di_class == di) out.push_back(&e);
    return out;
}

FunctionLibrary FunctionLibrary::from_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("library JSON parse error: ") + e.what());
    }
    FunctionLibrary lib;
    if (!root.contains("entries") || !root["entries"].is_array())
        throw InputError("library JSON needs an \"entries\" array");
    for (const auto& je : root["entries"]) {
        LibEntry e;
        e.op = je.at("op").get<std::string>();
        e.s_class.nvars = je.at("s_vars").get<unsigned>();
        e.di_class.nvars = je.at("di_vars").get<unsigned>();
        e.s_class.bits = std::stoull(je.at("s").get<std::string>(), nullptr, 16);
        e.di_class.bits = std::stoull(je.at("di").get<std::string>(), nullptr, 16);
        std::string cy = je.at("cyinit").get<std::string>();
        if (cy != "0" && cy != "1") throw InputError("library cyinit must be 0 or 1");
        e.cyinit = cy == "1" ? 1 : 0;
        std::string site = je.at("site").get<std::string>();
        if (site == "word") e.site = OutSite::Word;
        else if (site == "carry") e.site = OutSite::Carry;
        else throw InputError("library site must be \"word\" or \"carry\"");
        e.di_reads_first = je.value("di_reads_first", true);
        // Stored classes must already be canonical; normalize defensively so
        // a hand-edited file still behaves.
        e.s_class = npn_canonical(e.s_class).canonical;
        e.di_class = npn_canonical(e.di_class).canonical;
        lib.add_entry(std::move(e));
    }
    lib.check_injective();
    return lib;
}

FunctionLibrary FunctionLibrary::from_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

std::string FunctionLibrary::to_json() const {
    json root;
    root["entries"] = json::array();
    for (const auto& e : entries_) {
        json je;
        je["op"] = e.op;
        je["s"] = tt_to_hex(e.s_class);
        je["s_vars"] = e.s_class.nvars;
        je["di"] = tt_to_hex(e.di_class);
        je["di_vars"] = e.di_class.nvars;
        je["cyinit"] = e.cyinit ? "1" : "0";
        je["site"] = e.site == OutSite::Word ? "word" : "carry";
        je["di_reads_first"] = e.di_reads_first;
        root["entries"].push_back(std::move(je));
    }
    return root.dump(1, ' ') + "\n";
}

uint64_t apply_word_op(const std::string& op, uint64_t a, uint64_t b, unsigned width) {
    uint64_t mask = width >= 64 ? ~uint64_t(0) : ((uint64_t(1) << width) - 1);
    a &= mask;
    b &= mask;
    uint64_t r;
    if (op == "add") r = a + b;
    else if (op == "sub") r = a - b;
    else if (op == "and") r = a & b;
    else if (op == "or") r = a | b;
    else if (op == "xor") r = a ^ b;
    else if (op == "nand") r = ~(a & b);
    else if (op == "nor") r = ~(a | b);
    else if (op == "xnor") r = ~(a ^ b);
    else if (op == "eq") r = a == b ? 1 : 0;
    else if (op == "ne") r = a != b ? 1 : 0;
    else if (op == "lt") r = a < b ? 1 : 0;
    else if (op == "le") r = a <= b ? 1 : 0;
    else if (op == "gt") r = a > b ? 1 : 0;
    else if (op == "ge") r = a >= b ? 1 : 0;
    else if (op == "shl1") r = a << 1;
    else if (op == "shr1") r = a >> 1;
    else throw InternalError("unknown word op '" + op + "'");
    return r & mask;
}

bool is_known_word_op(const std::string& op) {
    static const std::set<std::string> ops = {
        "add", "sub", "and", "or", "xor", "nand", "nor", "xnor",
        "eq", "ne", "lt", "le", "gt", "ge", "shl1", "shr1",
    };
    return ops.count(op) != 0;
}

const std::vector<std::string>& alu_reference_ops() {
    static const std::vector<std::string> ops = {
        "add", "sub", "and", "or", "xor", "nand", "nor", "xnor",
        "eq", "ne", "lt", "le", "gt", "ge", "shl1", "shr1",
    };
    return ops;
}

} // namespace lutrev
