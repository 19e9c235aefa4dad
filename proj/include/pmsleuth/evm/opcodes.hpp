#pragma once

#include <cstdint>
#include <string>

namespace pmsleuth::evm {

// Opcodes the scanner cares about. Everything else is handled generically.
enum Opcode : std::uint8_t {
    OP_STOP = 0x00,
    OP_EQ = 0x14,
    OP_AND = 0x16,
    OP_SHR = 0x1c,
    OP_CALLDATALOAD = 0x35,
    OP_CODECOPY = 0x39,
    OP_SLOAD = 0x54,
    OP_SSTORE = 0x55,
    OP_JUMP = 0x56,
    OP_JUMPI = 0x57,
    OP_GAS = 0x5a,
    OP_JUMPDEST = 0x5b,
    OP_PUSH0 = 0x5f,
    OP_PUSH1 = 0x60,
    OP_PUSH4 = 0x63,
    OP_PUSH20 = 0x73,
    OP_PUSH32 = 0x7f,
    OP_DUP1 = 0x80,
    OP_SWAP1 = 0x90,
    OP_MSTORE = 0x52,
    OP_CREATE = 0xf0,
    OP_CALL = 0xf1,
    OP_CALLCODE = 0xf2,
    OP_RETURN = 0xf3,
    OP_DELEGATECALL = 0xf4,
    OP_STATICCALL = 0xfa,
    OP_REVERT = 0xfd,
    OP_INVALID = 0xfe,
    OP_SELFDESTRUCT = 0xff,
};

/// Number of immediate data bytes following the opcode (nonzero for PUSH1..PUSH32).
inline unsigned push_width(std::uint8_t opcode) {
    if (opcode >= OP_PUSH1 && opcode <= OP_PUSH32)
        return opcode - OP_PUSH1 + 1;
    return 0;
}

inline bool is_push(std::uint8_t opcode) { return push_width(opcode) > 0; }

inline bool is_call_family(std::uint8_t opcode) {
    return opcode == OP_CALL || opcode == OP_CALLCODE || opcode == OP_DELEGATECALL ||
           opcode == OP_STATICCALL;
}

/// Mnemonic for diagnostics and DOT dumps; unknown opcodes render as UNKNOWN_0xNN.
inline std::string opcode_name(std::uint8_t opcode) {
    switch (opcode) {
    case 0x00: return "STOP";
    case 0x01: return "ADD";
    case 0x02: return "MUL";
    case 0x03: return "SUB";
    case 0x04: return "DIV";
    case 0x05: return "SDIV";
    case 0x06: return "MOD";
    case 0x07: return "SMOD";
    case 0x08: return "ADDMOD";
    case 0x09: return "MULMOD";
    case 0x0a: return "EXP";
    case 0x0b: return "SIGNEXTEND";
    case 0x10: return "LT";
    case 0x11: return "GT";
    case 0x12: return "SLT";
    case 0x13: return "SGT";
    case 0x14: return "EQ";
    case 0x15: return "ISZERO";
    case 0x16: return "AND";
    case 0x17: return "OR";
    case 0x18: return "XOR";
    case 0x19: return "NOT";
    case 0x1a: return "BYTE";
    case 0x1b: return "SHL";
    case 0x1c: return "SHR";
    case 0x1d: return "SAR";
    case 0x20: return "KECCAK256";
    case 0x30: return "ADDRESS";
    case 0x31: return "BALANCE";
    case 0x32: return "ORIGIN";
    case 0x33: return "CALLER";
    case 0x34: return "CALLVALUE";
    case 0x35: return "CALLDATALOAD";
    case 0x36: return "CALLDATASIZE";
    case 0x37: return "CALLDATACOPY";
    case 0x38: return "CODESIZE";
    case 0x39: return "CODECOPY";
    case 0x3a: return "GASPRICE";
    case 0x3b: return "EXTCODESIZE";
    case 0x3c: return "EXTCODECOPY";
    case 0x3d: return "RETURNDATASIZE";
    case 0x3e: return "RETURNDATACOPY";
    case 0x3f: return "EXTCODEHASH";
    case 0x40: return "BLOCKHASH";
    case 0x41: return "COINBASE";
    case 0x42: return "TIMESTAMP";
    case 0x43: return "NUMBER";
    case 0x44: return "PREVRANDAO";
    case 0x45: return "GASLIMIT";
    case 0x46: return "CHAINID";
    case 0x47: return "SELFBALANCE";
    case 0x48: return "BASEFEE";
    case 0x50: return "POP";
    case 0x51: return "MLOAD";
    case 0x52: return "MSTORE";
    case 0x53: return "MSTORE8";
    case 0x54: return "SLOAD";
    case 0x55: return "SSTORE";
    case 0x56: return "JUMP";
    case 0x57: return "JUMPI";
    case 0x58: return "PC";
    case 0x59: return "MSIZE";
    case 0x5a: return "GAS";
    case 0x5b: return "JUMPDEST";
    case 0x5f: return "PUSH0";
    case 0xf0: return "CREATE";
    case 0xf1: return "CALL";
    case 0xf2: return "CALLCODE";
    case 0xf3: return "RETURN";
    case 0xf4: return "DELEGATECALL";
    case 0xf5: return "CREATE2";
    case 0xfa: return "STATICCALL";
    case 0xfd: return "REVERT";
    case 0xfe: return "INVALID";
    case 0xff: return "SELFDESTRUCT";
    default: break;
    }
    if (opcode >= OP_PUSH1 && opcode <= OP_PUSH32)
        return "PUSH" + std::to_string(opcode - OP_PUSH1 + 1);
    if (opcode >= 0x80 && opcode <= 0x8f)
        return "DUP" + std::to_string(opcode - 0x80 + 1);
    if (opcode >= 0x90 && opcode <= 0x9f)
        return "SWAP" + std::to_string(opcode - 0x90 + 1);
    if (opcode >= 0xa0 && opcode <= 0xa4)
        return "LOG" + std::to_string(opcode - 0xa0);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "UNKNOWN_0x%02x", opcode);
    return buf;
}

} // namespace pmsleuth::evm
