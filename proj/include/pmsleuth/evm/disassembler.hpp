#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pmsleuth/bytes.hpp"
#include "pmsleuth/evm/opcodes.hpp"

namespace pmsleuth::evm {

/// One decoded instruction. For PUSHn, push_data always holds exactly n bytes;
/// if the bytecode ends mid-push the missing bytes are zero and `padding`
/// records how many were synthesized, so serialization stays byte-exact.
struct Instruction {
    std::uint32_t offset = 0;
    std::uint8_t opcode = 0;
    Bytes push_data;
    std::uint8_t padding = 0;

    std::uint32_t extent() const {
        return 1 + static_cast<std::uint32_t>(push_data.size());
    }
    bool operator==(const Instruction&) const = default;
};

struct BytecodeProgram {
    Bytes code;
    std::vector<Instruction> instructions;
};

/// Linear disassembly covering every byte. Total: unknown opcodes decode as
/// 1-byte instructions, truncated pushes are zero-padded.
inline BytecodeProgram disassemble(std::span<const std::uint8_t> code) {
    BytecodeProgram prog;
    prog.code.assign(code.begin(), code.end());
    std::size_t pos = 0;
    while (pos < code.size()) {
        Instruction ins;
        ins.offset = static_cast<std::uint32_t>(pos);
        ins.opcode = code[pos];
        unsigned width = push_width(ins.opcode);
        if (width > 0) {
            std::size_t avail = std::min<std::size_t>(width, code.size() - pos - 1);
            ins.push_data.assign(code.begin() + pos + 1, code.begin() + pos + 1 + avail);
            ins.push_data.resize(width, 0);
            ins.padding = static_cast<std::uint8_t>(width - avail);
        }
        pos += ins.extent();
        prog.instructions.push_back(std::move(ins));
    }
    return prog;
}

/// Inverse of disassemble: concatenated instruction bytes minus any padding.
inline Bytes serialize(const BytecodeProgram& prog) {
    Bytes out;
    out.reserve(prog.code.size());
    for (const Instruction& ins : prog.instructions) {
        out.push_back(ins.opcode);
        out.insert(out.end(), ins.push_data.begin(),
                   ins.push_data.end() - ins.padding);
    }
    return out;
}

} // namespace pmsleuth::evm
