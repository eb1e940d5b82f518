#include "lutrev/netlist_json.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace lutrev {

using nlohmann::json;

namespace {

uint64_t parse_hex_init(const std::string& s, const std::string& gate_id) {
    std::string digits = s;
    if (digits.rfind("0x", 0) == 0 || digits.rfind("0X", 0) == 0) digits = digits.substr(2);
    if (digits.empty() || digits.size() > 16)
        throw InputError("gate '" + gate_id + "': bad INIT '" + s + "'");
    uint64_t v = 0;
    for (char c : digits) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else throw InputError("gate '" + gate_id + "': bad INIT '" + s + "'");
        v = (v << 4) | uint64_t(d);
    }
    return v;
}

std::string init_to_hex(const Gate& g) {
    int digits = 1;
    if (is_lut(g.prim)) {
        int bits = 1 << lut_width(g.prim);
        digits = (bits + 3) / 4;
    }
    static const char* hexc = "0123456789abcdef";
    std::string out(size_t(digits), '0');
    uint64_t v = g.init;
    for (int i = digits - 1; i >= 0; --i) {
        out[size_t(i)] = hexc[v & 0xf];
        v >>= 4;
    }
    return out;
}

NetIndex conn_net(Netlist& nl, const std::string& ref) {
    if (ref == "$0") return nl.const_net(false);
    if (ref == "$1") return nl.const_net(true);
    return nl.add_net(ref);
}

const json& require(const json& obj, const char* key, const std::string& what) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw InputError(what + ": missing \"" + key + "\"");
    return *it;
}

} // namespace

Netlist read_netlist_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("JSON parse error: ") + e.what());
    }
    if (!root.is_object()) throw InputError("netlist JSON root must be an object");

    Netlist nl;
    nl.name = root.value("name", "top");

    // GND/VCC instances turn their output nets into constants. Collect the
    // rewrites first so gate connections can be remapped on the fly.
    std::unordered_map<std::string, bool> const_rewrites;
    if (root.contains("gates")) {
        for (const auto& jg : root["gates"]) {
            std::string type = require(jg, "type", "gate").get<std::string>();
            if (type != "GND" && type != "VCC") continue;
            const json& conns = require(jg, "conns", "gate");
            for (auto it = conns.begin(); it != conns.end(); ++it) {
                // GND output pin is G, VCC output pin is P.
                if (it.key() == "G" || it.key() == "P")
                    const_rewrites[it.value().get<std::string>()] = (type == "VCC");
            }
        }
    }
    auto resolve = [&](const std::string& ref) -> NetIndex {
        auto it = const_rewrites.find(ref);
        if (it != const_rewrites.end()) return nl.const_net(it->second);
        return conn_net(nl, ref);
    };

    if (root.contains("ports")) {
        if (!root["ports"].is_array()) throw InputError("\"ports\" must be an array");
        for (const auto& jp : root["ports"]) {
            std::string name = require(jp, "name", "port").get<std::string>();
            std::string dir = require(jp, "dir", "port '" + name + "'").get<std::string>();
            if (dir != "input" && dir != "output")
                throw InputError("port '" + name + "': dir must be \"input\" or \"output\"");
            std::vector<NetIndex> bits;
            for (const auto& jb : require(jp, "bits", "port '" + name + "'")) {
                std::string ref = jb.get<std::string>();
                if (ref == "$0" || ref == "$1")
                    throw InputError("port '" + name + "' references a constant net");
                bits.push_back(resolve(ref));
            }
            nl.add_port(name, dir == "input", std::move(bits));
        }
    }

    if (root.contains("gates")) {
        if (!root["gates"].is_array()) throw InputError("\"gates\" must be an array");
        for (const auto& jg : root["gates"]) {
            std::string id = require(jg, "id", "gate").get<std::string>();
            std::string type = require(jg, "type", "gate '" + id + "'").get<std::string>();
            if (type == "GND" || type == "VCC") continue;
            Prim prim = prim_from_name(type);
            const json& conns = require(jg, "conns", "gate '" + id + "'");
            if (!conns.is_object())
                throw InputError("gate '" + id + "': \"conns\" must be an object");

            if (prim == Prim::Ramb) {
                std::vector<std::pair<std::string, NetIndex>> pins;
                for (auto it = conns.begin(); it != conns.end(); ++it)
                    pins.emplace_back(it.key(), resolve(it.value().get<std::string>()));
                std::sort(pins.begin(), pins.end(),
                          [](auto& a, auto& b) { return a.first < b.first; });
                nl.add_ram_gate(id, pins);
                continue;
            }

            uint64_t init = 0;
            if (jg.contains("init"))
                init = parse_hex_init(jg["init"].get<std::string>(), id);
            else if (is_lut(prim))
                throw InputError("gate '" + id + "': LUT without INIT");

            Gate proto;
            proto.prim = prim;
            proto.id = id;
            std::vector<NetIndex> pins(size_t(pin_count(proto)), kInvalidIndex);
            for (auto it = conns.begin(); it != conns.end(); ++it) {
                uint16_t pi = pin_index(proto, it.key());
                if (pins[pi] != kInvalidIndex)
                    throw InputError("gate '" + id + "': pin '" + it.key() +
                                     "' connected twice");
                pins[pi] = resolve(it.value().get<std::string>());
            }
            if (prim == Prim::Carry4) {
                // Chain heads often leave CI (or CYINIT) dangling; both default
                // to constant zero. Unused outputs get fresh dead nets.
                if (pins[pin::kCarryCi] == kInvalidIndex)
                    pins[pin::kCarryCi] = nl.const_net(false);
                if (pins[pin::kCarryCyinit] == kInvalidIndex)
                    pins[pin::kCarryCyinit] = nl.const_net(false);
            }
            for (size_t p = 0; p < pins.size(); ++p) {
                if (pins[p] != kInvalidIndex) continue;
                if (pin_is_output(proto, uint16_t(p)))
                    pins[p] = nl.add_net(id + "." + pin_name(proto, uint16_t(p)) + "$nc");
                // Unconnected inputs stay invalid; finalize reports them.
            }
            nl.add_gate(id, prim, init, std::move(pins));
        }
    }

    nl.finalize();
    return nl;
}

Netlist read_netlist_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_netlist_json(ss.str());
}

std::string write_netlist_json(const Netlist& nl) {
    json root;
    root["name"] = nl.name;
    root["ports"] = json::array();
    for (const auto& p : nl.ports()) {
        json jp;
        jp["name"] = p.name;
        jp["dir"] = p.is_input ? "input" : "output";
        json bits = json::array();
        for (NetIndex b : p.bits) bits.push_back(nl.net(b).id);
        jp["bits"] = std::move(bits);
        root["ports"].push_back(std::move(jp));
    }
    root["gates"] = json::array();
    for (const auto& g : nl.gates()) {
        json jg;
        jg["id"] = g.id;
        jg["type"] = prim_name(g.prim);
        if (is_lut(g.prim) || is_ff(g.prim)) jg["init"] = init_to_hex(g);
        json conns = json::object();
        for (uint16_t p = 0; p < g.pins.size(); ++p) {
            const Net& n = nl.net(g.pins[p]);
            std::string ref = n.kind == NetKind::Const0   ? "$0"
                              : n.kind == NetKind::Const1 ? "$1"
                                                          : n.id;
            conns[pin_name(g, p)] = ref;
        }
        jg["conns"] = std::move(conns);
        root["gates"].push_back(std::move(jg));
    }
    return root.dump(1, ' ') + "\n";
}

void write_netlist_json_file(const Netlist& nl, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open '" + path + "' for writing");
    out << write_netlist_json(nl);
}

} // namespace lutrev
