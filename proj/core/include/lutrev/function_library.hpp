#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lutrev/truth_table.hpp"

namespace lutrev {

// Where an operator's result leaves the carry chain: the O pins as a word,
// or a single CO bit (comparators).
enum class OutSite : uint8_t { Word, Carry };

// A recognizable carry-chain operator: canonical classes of the per-bit
// functions feeding the S and DI pins, the required initial carry, and the
// output site. The full tuple is the lookup key.
struct LibEntry {
    std::string op;        // "add", "sub", "ge", "gt", "eq"
    TtBits s_class;
    TtBits di_class;
    int cyinit = 0;        // required constant initial carry
    OutSite site = OutSite::Word;
    // How DI relates to the operands: for asymmetric ops the DI cone reads
    // one operand, either directly (the first operand) or inverted (the
    // second). Symmetric ops ignore the distinction.
    bool di_reads_first = true;
};

class FunctionLibrary {
public:
    // Built-in operator set: add, sub, ge, gt, eq.
    static FunctionLibrary builtin();
    static FunctionLibrary from_json(const std::string& text);
    static FunctionLibrary from_json_file(const std::string& path);
    std::string to_json() const;

    const std::vector<LibEntry>& entries() const { return entries_; }

    const LibEntry* lookup(const TtBits& s_canon, const TtBits& di_canon, int cyinit,
                           OutSite site) const;

    // All entries matching the (S, DI) class pair regardless of carry/site.
    std::vector<const LibEntry*> lookup_classes(const TtBits& s_canon,
                                                const TtBits& di_canon) const;

    void add_entry(LibEntry e);

private:
    std::vector<LibEntry> entries_;

    // No two entries may share the full (S, DI, CYINIT, site) key.
    void check_injective() const;
};

// Word-level reference semantics shared by opcode discovery, the emitted-RTL
// evaluator and the test oracles. Comparison ops return 0 or 1. Results are
// masked to width bits.
uint64_t apply_word_op(const std::string& op, uint64_t a, uint64_t b, unsigned width);
bool is_known_word_op(const std::string& op);

// Candidate operations tried during opcode discovery, in match order.
const std::vector<std::string>& alu_reference_ops();

} // namespace lutrev
