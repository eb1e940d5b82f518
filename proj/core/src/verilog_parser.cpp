#include "lutrev/verilog_parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <variant>

namespace lutrev {

namespace {

struct Token {
    enum Kind { Id, Number, Sized, Punct, End } kind = End;
    std::string text;  // identifier, digits, or punctuation
    uint64_t value = 0;
    int width = 0;     // Sized only
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw InputError(msg, tok_.line, tok_.col);
    }

private:
    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;

    int cur() const { return pos_ < src_.size() ? (unsigned char)src_[pos_] : -1; }
    int at(size_t off) const {
        return pos_ + off < src_.size() ? (unsigned char)src_[pos_ + off] : -1;
    }
    void bump() {
        if (cur() == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        for (;;) {
            while (isspace(cur())) bump();
            if (cur() == '/' && at(1) == '/') {
                while (cur() != -1 && cur() != '\n') bump();
            } else if (cur() == '/' && at(1) == '*') {
                bump(); bump();
                while (cur() != -1 && !(cur() == '*' && at(1) == '/')) bump();
                if (cur() == -1) throw InputError("unterminated comment", line_, col_);
                bump(); bump();
            } else if (cur() == '(' && at(1) == '*') {
                // attribute instance, e.g. (* KEEP = "yes" *)
                bump(); bump();
                while (cur() != -1 && !(cur() == '*' && at(1) == ')')) bump();
                if (cur() == -1) throw InputError("unterminated attribute", line_, col_);
                bump(); bump();
            } else if (cur() == '`') {
                // compiler directive such as `timescale; skip the line
                while (cur() != -1 && cur() != '\n') bump();
            } else {
                break;
            }
        }
    }

    void advance() {
        skip_space();
        tok_ = Token{};
        tok_.line = line_;
        tok_.col = col_;
        int c = cur();
        if (c == -1) {
            tok_.kind = Token::End;
            return;
        }
        if (c == '\\') {
            // escaped identifier, terminated by whitespace
            bump();
            std::string id;
            while (cur() != -1 && !isspace(cur())) {
                id.push_back(char(cur()));
                bump();
            }
            if (id.empty()) throw InputError("empty escaped identifier", tok_.line, tok_.col);
            tok_.kind = Token::Id;
            tok_.text = std::move(id);
            return;
        }
        if (isalpha(c) || c == '_' || c == '$') {
            std::string id;
            while (isalnum(cur()) || cur() == '_' || cur() == '$') {
                id.push_back(char(cur()));
                bump();
            }
            tok_.kind = Token::Id;
            tok_.text = std::move(id);
            return;
        }
        if (isdigit(c)) {
            std::string digits;
            while (isdigit(cur()) || cur() == '_') {
                if (cur() != '_') digits.push_back(char(cur()));
                bump();
            }
            skip_space();
            if (cur() == '\'') {
                bump();
                int base = cur();
                if (base == 's' || base == 'S') { bump(); base = cur(); }
                int radix;
                switch (tolower(base)) {
                case 'b': radix = 2; break;
                case 'o': radix = 8; break;
                case 'd': radix = 10; break;
                case 'h': radix = 16; break;
                default: throw InputError("bad literal base", line_, col_);
                }
                bump();
                skip_space();
                uint64_t v = 0;
                bool any = false;
                for (;;) {
                    int d = cur();
                    if (d == '_') { bump(); continue; }
                    int dv;
                    if (d >= '0' && d <= '9') dv = d - '0';
                    else if (d >= 'a' && d <= 'f') dv = d - 'a' + 10;
                    else if (d >= 'A' && d <= 'F') dv = d - 'A' + 10;
                    else break;
                    if (dv >= radix) break;
                    v = v * uint64_t(radix) + uint64_t(dv);
                    any = true;
                    bump();
                }
                if (!any) throw InputError("literal has no digits", line_, col_);
                tok_.kind = Token::Sized;
                tok_.width = std::stoi(digits);
                if (tok_.width < 1 || tok_.width > 64)
                    throw InputError("literal width out of range", tok_.line, tok_.col);
                tok_.value = v;
                return;
            }
            tok_.kind = Token::Number;
            tok_.text = digits;
            tok_.value = std::stoull(digits);
            return;
        }
        static const std::string two_char[] = {};
        (void)two_char;
        tok_.kind = Token::Punct;
        tok_.text = std::string(1, char(c));
        bump();
    }
};

// One bit of a connection expression: a named net or a constant.
struct BitRef {
    std::string net;   // empty when constant
    bool cval = false;
    bool is_const() const { return net.empty(); }
};

struct Connection {
    std::string pin;
    std::vector<BitRef> bits;  // LSB first; empty = unconnected
    int line = 0, col = 0;
};

struct Instance {
    std::string type, name;
    std::optional<uint64_t> init;
    int init_width = 0;
    std::vector<Connection> conns;
    int line = 0, col = 0;
};

struct VectorDecl {
    int lo = 0, hi = 0;   // inclusive bit indices; lo==hi==-1 for scalar
    bool scalar = true;
};

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    Netlist run() {
        parse_module();
        if (lex_.peek().kind != Token::End) lex_.fail("content after endmodule");
        return build();
    }

private:
    Lexer lex_;
    std::string module_name_;
    std::vector<std::string> header_ports_;
    std::map<std::string, VectorDecl> decls_;              // declaration order irrelevant
    std::map<std::string, bool> port_dirs_;                // name -> is_input
    std::vector<std::pair<std::string, BitRef>> assigns_;  // lhs bit net -> rhs
    std::vector<Instance> insts_;

    Token expect_id(const char* what) {
        if (lex_.peek().kind != Token::Id) lex_.fail(std::string("expected ") + what);
        return lex_.take();
    }
    void expect_punct(const char* p) {
        if (lex_.peek().kind != Token::Punct || lex_.peek().text != p)
            lex_.fail(std::string("expected '") + p + "'");
        lex_.take();
    }
    bool accept_punct(const char* p) {
        if (lex_.peek().kind == Token::Punct && lex_.peek().text == p) {
            lex_.take();
            return true;
        }
        return false;
    }

    static bool is_keyword(const std::string& s) {
        return s == "module" || s == "endmodule" || s == "input" || s == "output" ||
               s == "inout" || s == "wire" || s == "assign";
    }

    void parse_module() {
        Token kw = expect_id("'module'");
        if (kw.text != "module") lex_.fail("expected 'module'");
        module_name_ = expect_id("module name").text;
        if (accept_punct("(")) {
            if (!accept_punct(")")) {
                for (;;) {
                    if (lex_.peek().kind == Token::Id &&
                        (lex_.peek().text == "input" || lex_.peek().text == "output")) {
                        parse_ansi_port();
                    } else {
                        header_ports_.push_back(expect_id("port name").text);
                    }
                    if (accept_punct(",")) continue;
                    expect_punct(")");
                    break;
                }
            }
        }
        expect_punct(";");
        for (;;) {
            Token t = lex_.peek();
            if (t.kind == Token::End) lex_.fail("missing endmodule");
            if (t.kind != Token::Id) lex_.fail("expected declaration or instance");
            if (t.text == "endmodule") {
                lex_.take();
                return;
            }
            if (t.text == "input" || t.text == "output" || t.text == "wire") {
                parse_decl();
            } else if (t.text == "inout") {
                lex_.fail("inout ports are not supported");
            } else if (t.text == "assign") {
                parse_assign();
            } else if (t.text == "module") {
                lex_.fail("nested or multiple modules are not supported");
            } else if (t.text == "always" || t.text == "initial" || t.text == "reg") {
                lex_.fail("behavioral constructs are not supported");
            } else {
                parse_instance();
            }
        }
    }

    VectorDecl parse_range() {
        VectorDecl v;
        if (accept_punct("[")) {
            if (lex_.peek().kind != Token::Number) lex_.fail("expected bit index");
            int a = int(lex_.take().value);
            expect_punct(":");
            if (lex_.peek().kind != Token::Number) lex_.fail("expected bit index");
            int b = int(lex_.take().value);
            expect_punct("]");
            v.scalar = false;
            v.lo = std::min(a, b);
            v.hi = std::max(a, b);
        }
        return v;
    }

    void declare(const std::string& name, const VectorDecl& v, int line, int col) {
        auto it = decls_.find(name);
        if (it == decls_.end()) {
            decls_.emplace(name, v);
            return;
        }
        // Vivado declares ports as both "output x;" and "wire x;". Accept
        // redeclaration with an identical shape.
        if (it->second.scalar != v.scalar || it->second.lo != v.lo || it->second.hi != v.hi)
            throw InputError("'" + name + "' redeclared with a different range", line, col);
    }

    void parse_ansi_port() {
        Token dir = lex_.take();
        if (lex_.peek().kind == Token::Id && lex_.peek().text == "wire") lex_.take();
        VectorDecl v = parse_range();
        Token name = expect_id("port name");
        declare(name.text, v, name.line, name.col);
        port_dirs_[name.text] = dir.text == "input";
        header_ports_.push_back(name.text);
    }

    void parse_decl() {
        Token kw = lex_.take();
        if (lex_.peek().kind == Token::Id && lex_.peek().text == "wire") lex_.take();
        VectorDecl v = parse_range();
        for (;;) {
            Token name = expect_id("identifier");
            declare(name.text, v, name.line, name.col);
            if (kw.text != "wire") port_dirs_[name.text] = kw.text == "input";
            if (accept_punct(",")) continue;
            expect_punct(";");
            break;
        }
    }

    std::vector<BitRef> net_bits(const std::string& name, int line, int col) {
        auto it = decls_.find(name);
        if (it == decls_.end())
            throw InputError("undeclared identifier '" + name + "'", line, col);
        std::vector<BitRef> bits;
        if (it->second.scalar) {
            bits.push_back(BitRef{name, false});
        } else {
            for (int i = it->second.lo; i <= it->second.hi; ++i)
                bits.push_back(BitRef{name + "[" + std::to_string(i) + "]", false});
        }
        return bits;
    }

    // identifier | identifier[i] | identifier[m:l] | sized literal | {concat}
    std::vector<BitRef> parse_expr() {
        Token t = lex_.peek();
        if (t.kind == Token::Sized) {
            lex_.take();
            std::vector<BitRef> bits;
            for (int i = 0; i < t.width; ++i)
                bits.push_back(BitRef{"", ((t.value >> i) & 1) != 0});
            return bits;
        }
        if (t.kind == Token::Punct && t.text == "{") {
            lex_.take();
            std::vector<std::vector<BitRef>> parts;
            for (;;) {
                parts.push_back(parse_expr());
                if (accept_punct(",")) continue;
                expect_punct("}");
                break;
            }
            std::vector<BitRef> bits;  // concat lists MSB part first
            for (auto it = parts.rbegin(); it != parts.rend(); ++it)
                bits.insert(bits.end(), it->begin(), it->end());
            return bits;
        }
        if (t.kind != Token::Id) lex_.fail("expected net expression");
        Token name = lex_.take();
        if (accept_punct("[")) {
            if (lex_.peek().kind != Token::Number) lex_.fail("expected bit index");
            int a = int(lex_.take().value);
            if (accept_punct(":")) {
                if (lex_.peek().kind != Token::Number) lex_.fail("expected bit index");
                int b = int(lex_.take().value);
                expect_punct("]");
                auto all = net_bits(name.text, name.line, name.col);
                auto decl = decls_.at(name.text);
                int lo = std::min(a, b), hi = std::max(a, b);
                if (decl.scalar || lo < decl.lo || hi > decl.hi)
                    throw InputError("part-select out of range on '" + name.text + "'",
                                     name.line, name.col);
                std::vector<BitRef> bits(all.begin() + (lo - decl.lo),
                                         all.begin() + (hi - decl.lo + 1));
                return bits;
            }
            expect_punct("]");
            auto it = decls_.find(name.text);
            if (it == decls_.end())
                throw InputError("undeclared identifier '" + name.text + "'", name.line,
                                 name.col);
            if (it->second.scalar || a < it->second.lo || a > it->second.hi)
                throw InputError("bit-select out of range on '" + name.text + "'",
                                 name.line, name.col);
            return {BitRef{name.text + "[" + std::to_string(a) + "]", false}};
        }
        return net_bits(name.text, name.line, name.col);
    }

    void parse_assign() {
        lex_.take();  // assign
        Token lhs_tok = lex_.peek();
        std::vector<BitRef> lhs = parse_expr();
        expect_punct("=");
        std::vector<BitRef> rhs = parse_expr();
        expect_punct(";");
        if (lhs.size() != rhs.size())
            throw InputError("assign width mismatch", lhs_tok.line, lhs_tok.col);
        for (size_t i = 0; i < lhs.size(); ++i) {
            if (lhs[i].is_const())
                throw InputError("assign to a constant", lhs_tok.line, lhs_tok.col);
            assigns_.emplace_back(lhs[i].net, rhs[i]);
        }
    }

    void parse_instance() {
        Instance inst;
        Token type = lex_.take();
        inst.type = type.text;
        inst.line = type.line;
        inst.col = type.col;
        if (inst.type != "GND" && inst.type != "VCC") {
            try {
                prim_from_name(inst.type);
            } catch (const InputError& e) {
                throw InputError(e.what(), type.line, type.col);
            }
        }
        if (accept_punct("#")) {
            expect_punct("(");
            for (;;) {
                expect_punct(".");
                Token pname = expect_id("parameter name");
                expect_punct("(");
                Token val = lex_.peek();
                uint64_t v = 0;
                int width = 0;
                if (val.kind == Token::Sized) {
                    lex_.take();
                    v = val.value;
                    width = val.width;
                } else if (val.kind == Token::Number) {
                    lex_.take();
                    v = val.value;
                } else if (val.kind == Token::Id &&
                           (val.text == "TRUE" || val.text == "FALSE")) {
                    lex_.take();
                    v = val.text == "TRUE" ? 1 : 0;
                } else if (val.kind == Token::Punct && val.text == "\"") {
                    lex_.fail("string parameters are not supported");
                } else {
                    lex_.fail("expected parameter value");
                }
                expect_punct(")");
                if (pname.text == "INIT") {
                    inst.init = v;
                    inst.init_width = width;
                } else if (inst.type.rfind("RAMB", 0) == 0) {
                    // RAM blocks are opaque; their parameters are irrelevant here.
                } else if (v != 0) {
                    throw InputError("unsupported parameter '" + pname.text +
                                     "' with nonzero value on " + inst.type,
                                     pname.line, pname.col);
                }
                if (accept_punct(",")) continue;
                expect_punct(")");
                break;
            }
        }
        inst.name = expect_id("instance name").text;
        expect_punct("(");
        if (!accept_punct(")")) {
            for (;;) {
                expect_punct(".");
                Token pin = expect_id("pin name");
                Connection c;
                c.pin = pin.text;
                c.line = pin.line;
                c.col = pin.col;
                expect_punct("(");
                if (!accept_punct(")")) {
                    c.bits = parse_expr();
                    expect_punct(")");
                }
                inst.conns.push_back(std::move(c));
                if (accept_punct(",")) continue;
                expect_punct(")");
                break;
            }
        }
        expect_punct(";");
        insts_.push_back(std::move(inst));
    }

    Netlist build() {
        Netlist nl;
        nl.name = module_name_;

        // Constant sources: GND/VCC cells plus constant assigns. Feedthrough
        // assigns are plain aliases. Resolve chains up front.
        std::map<std::string, BitRef> alias;
        for (const auto& inst : insts_) {
            if (inst.type != "GND" && inst.type != "VCC") continue;
            for (const auto& c : inst.conns) {
                if (c.pin != "G" && c.pin != "P") continue;
                for (const auto& b : c.bits)
                    if (!b.is_const()) alias[b.net] = BitRef{"", inst.type == "VCC"};
            }
        }
        for (const auto& [lhs, rhs] : assigns_) {
            if (alias.count(lhs))
                throw InputError("net '" + lhs + "' assigned more than once");
            alias[lhs] = rhs;
        }
        auto resolve = [&](BitRef b) {
            int hops = 0;
            while (!b.is_const()) {
                auto it = alias.find(b.net);
                if (it == alias.end()) break;
                b = it->second;
                if (++hops > int(alias.size()))
                    throw InputError("assign cycle through net '" + b.net + "'");
            }
            return b;
        };
        auto to_net = [&](const BitRef& raw) -> NetIndex {
            BitRef b = resolve(raw);
            if (b.is_const()) return nl.const_net(b.cval);
            return nl.add_net(b.net);
        };

        for (const std::string& pname : header_ports_) {
            auto dir = port_dirs_.find(pname);
            if (dir == port_dirs_.end())
                throw InputError("port '" + pname + "' has no direction declaration");
            auto decl = decls_.find(pname);
            if (decl == decls_.end())
                throw InputError("port '" + pname + "' is not declared");
            std::vector<NetIndex> bits;
            if (decl->second.scalar) {
                bits.push_back(to_net(BitRef{pname, false}));
            } else {
                for (int i = decl->second.lo; i <= decl->second.hi; ++i)
                    bits.push_back(to_net(BitRef{pname + "[" + std::to_string(i) + "]", false}));
            }
            nl.add_port(pname, dir->second, std::move(bits));
        }

        for (const auto& inst : insts_) {
            if (inst.type == "GND" || inst.type == "VCC") continue;
            Prim prim = prim_from_name(inst.type);

            if (prim == Prim::Ramb) {
                std::vector<std::pair<std::string, NetIndex>> pins;
                for (const auto& c : inst.conns) {
                    if (c.bits.empty()) continue;
                    if (c.bits.size() == 1) {
                        pins.emplace_back(c.pin, to_net(c.bits[0]));
                    } else {
                        for (size_t i = 0; i < c.bits.size(); ++i)
                            pins.emplace_back(c.pin + "[" + std::to_string(i) + "]",
                                              to_net(c.bits[i]));
                    }
                }
                std::sort(pins.begin(), pins.end(),
                          [](auto& a, auto& b) { return a.first < b.first; });
                nl.add_ram_gate(inst.name, pins);
                continue;
            }

            Gate proto;
            proto.prim = prim;
            proto.id = inst.name;
            std::vector<NetIndex> pins(size_t(pin_count(proto)), kInvalidIndex);
            for (const auto& c : inst.conns) {
                if (c.bits.empty()) continue;
                if (c.bits.size() != 1)
                    throw InputError("pin '" + c.pin + "' of '" + inst.name +
                                     "' needs a 1-bit connection", c.line, c.col);
                uint16_t pi = pin_index(proto, c.pin);
                if (pins[pi] != kInvalidIndex)
                    throw InputError("pin '" + c.pin + "' of '" + inst.name +
                                     "' connected twice", c.line, c.col);
                pins[pi] = to_net(c.bits[0]);
            }

            uint64_t init = 0;
            if (inst.init) {
                init = *inst.init;
                if (is_lut(prim) && inst.init_width != 0 &&
                    inst.init_width != (1 << lut_width(prim)))
                    throw InputError("INIT width mismatch on '" + inst.name + "'",
                                     inst.line, inst.col);
            } else if (is_lut(prim)) {
                throw InputError("LUT '" + inst.name + "' has no INIT", inst.line,
                                 inst.col);
            }

            if (prim == Prim::Carry4) {
                if (pins[pin::kCarryCi] == kInvalidIndex)
                    pins[pin::kCarryCi] = nl.const_net(false);
                if (pins[pin::kCarryCyinit] == kInvalidIndex)
                    pins[pin::kCarryCyinit] = nl.const_net(false);
            }
            for (size_t p = 0; p < pins.size(); ++p) {
                if (pins[p] != kInvalidIndex) continue;
                if (pin_is_output(proto, uint16_t(p)))
                    pins[p] = nl.add_net(inst.name + "." + pin_name(proto, uint16_t(p)) +
                                         "$nc");
            }
            nl.add_gate(inst.name, prim, init, std::move(pins));
        }

        nl.finalize();
        return nl;
    }
};

} // namespace

Netlist read_netlist_verilog(const std::string& text) {
    Parser p(text);
    return p.run();
}

Netlist read_netlist_verilog_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_netlist_verilog(ss.str());
}

} // namespace lutrev
