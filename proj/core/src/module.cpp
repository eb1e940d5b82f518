#include "lutrev/module.hpp"

namespace lutrev {

const char* module_kind_name(ModuleKind k) {
    switch (k) {
    case ModuleKind::Adder: return "adder";
    case ModuleKind::Subtractor: return "subtractor";
    case ModuleKind::Comparator: return "comparator";
    case ModuleKind::AddSub: return "addsub";
    case ModuleKind::Alu: return "alu";
    case ModuleKind::Counter: return "counter";
    case ModuleKind::ShiftRegister: return "shift_register";
    case ModuleKind::Register: return "register";
    case ModuleKind::BitwiseWord: return "bitwise";
    case ModuleKind::UnknownCarry: return "unknown_carry";
    }
    return "?";
}

} // namespace lutrev
