#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "pmsleuth/bytes.hpp"
#include "pmsleuth/evm/disassembler.hpp"
#include "pmsleuth/json.hpp"

namespace pmsleuth::evm {

enum class CallKind { Call, StaticCall, DelegateCall, CallCode };

inline CallKind call_kind_of(std::uint8_t opcode) {
    switch (opcode) {
    case OP_STATICCALL: return CallKind::StaticCall;
    case OP_DELEGATECALL: return CallKind::DelegateCall;
    case OP_CALLCODE: return CallKind::CallCode;
    default: return CallKind::Call;
    }
}

inline std::string call_kind_name(CallKind k) {
    switch (k) {
    case CallKind::Call: return "call";
    case CallKind::StaticCall: return "staticcall";
    case CallKind::DelegateCall: return "delegatecall";
    case CallKind::CallCode: return "callcode";
    }
    return "call";
}

struct ConstantAddress {
    Address value;
    bool operator==(const ConstantAddress&) const = default;
};
struct StorageSlotRef {
    Word slot;
    bool operator==(const StorageSlotRef&) const = default;
};
struct UnresolvedCallee {
    bool operator==(const UnresolvedCallee&) const = default;
};

/// How the callee address of an external call is known: a hard-coded
/// constant, a storage slot to read, or not statically resolvable
/// (calldata-provided addresses stay Unresolved and are surfaced as gaps).
using CalleeResolution = std::variant<ConstantAddress, StorageSlotRef, UnresolvedCallee>;

struct ExternalCallSite {
    std::uint32_t call_offset = 0;
    CallKind call_kind = CallKind::Call;
    CalleeResolution callee = UnresolvedCallee{};
    std::optional<Selector> selector;

    bool operator==(const ExternalCallSite&) const = default;
};

/// Behavior information extracted from attack-contract runtime bytecode.
struct BehaviorReport {
    std::optional<Address> contract_address;
    std::set<Selector> implemented_selectors;
    std::vector<ExternalCallSite> call_sites;

    bool operator==(const BehaviorReport&) const = default;
};

struct ScanOptions {
    // Instructions inspected before each CALL-family opcode when attributing
    // selectors and callee addresses.
    std::size_t lookback_window = 64;
};

// 0xffffffff shows up as a selector mask, never as a real selector.
inline bool is_selector_mask(const Selector& s) {
    return s.bytes == std::array<std::uint8_t, 4>{0xff, 0xff, 0xff, 0xff};
}

// PUSH20 of all-ones is the address mask older compilers emit before AND.
inline bool is_address_mask(const Address& a) {
    return std::all_of(a.bytes.begin(), a.bytes.end(),
                       [](std::uint8_t b) { return b == 0xff; });
}

/// Instruction indices of PUSH4s that participate in a dispatcher comparison
/// (an EQ within the next 3 instructions). These are the selectors the
/// contract itself implements, not selectors it calls.
inline std::vector<std::size_t> dispatcher_push4_indices(const BytecodeProgram& prog) {
    std::vector<std::size_t> out;
    const auto& ins = prog.instructions;
    for (std::size_t i = 0; i < ins.size(); ++i) {
        if (ins[i].opcode != OP_PUSH4) continue;
        for (std::size_t j = i + 1; j < ins.size() && j <= i + 3; ++j) {
            if (ins[j].opcode == OP_EQ) {
                out.push_back(i);
                break;
            }
        }
    }
    return out;
}

/// PUSH4 values compared via EQ in dispatcher patterns, minus the 0xffffffff mask.
inline std::set<Selector> extract_implemented_selectors(const BytecodeProgram& prog) {
    std::set<Selector> out;
    for (std::size_t i : dispatcher_push4_indices(prog)) {
        Selector s = Selector::from_bytes(prog.instructions[i].push_data);
        if (!is_selector_mask(s))
            out.insert(s);
    }
    return out;
}

/// One site per CALL-family opcode. Within the lookback window, the nearest
/// preceding PUSH4 not claimed by a dispatcher comparison becomes the selector;
/// a PUSH20 (or PUSH32 whose upper 12 bytes are zero) becomes a constant
/// callee; otherwise an adjacent PUSHn+SLOAD pair names a storage slot.
inline std::vector<ExternalCallSite> extract_external_calls(const BytecodeProgram& prog,
                                                            const ScanOptions& opts = {}) {
    std::vector<ExternalCallSite> sites;
    const auto& ins = prog.instructions;

    std::vector<std::size_t> dispatcher = dispatcher_push4_indices(prog);
    auto is_dispatcher_push = [&](std::size_t idx) {
        return std::binary_search(dispatcher.begin(), dispatcher.end(), idx);
    };

    for (std::size_t i = 0; i < ins.size(); ++i) {
        if (!is_call_family(ins[i].opcode)) continue;

        ExternalCallSite site;
        site.call_offset = ins[i].offset;
        site.call_kind = call_kind_of(ins[i].opcode);

        std::size_t window_start = i > opts.lookback_window ? i - opts.lookback_window : 0;

        std::optional<Selector> selector;
        std::optional<Address> const_addr;
        std::optional<Word> slot;
        for (std::size_t j = i; j-- > window_start;) {
            const Instruction& prev = ins[j];
            if (!selector && prev.opcode == OP_PUSH4 && !is_dispatcher_push(j)) {
                Selector s = Selector::from_bytes(prev.push_data);
                if (!is_selector_mask(s)) selector = s;
            }
            if (!const_addr && prev.opcode == OP_PUSH20) {
                Address a = Address::from_bytes(prev.push_data);
                if (!a.is_zero() && !is_address_mask(a)) const_addr = a;
            }
            if (!const_addr && prev.opcode == OP_PUSH32) {
                Word w = Word::from_bytes(prev.push_data);
                bool top_zero = std::all_of(w.bytes.begin(), w.bytes.begin() + 12,
                                            [](std::uint8_t b) { return b == 0; });
                Address a = address_from_word(w);
                if (top_zero && !a.is_zero() && !is_address_mask(a)) const_addr = a;
            }
            if (!slot && prev.opcode == OP_SLOAD && j > window_start) {
                const Instruction& before = ins[j - 1];
                if (is_push(before.opcode)) {
                    Word w;
                    std::copy(before.push_data.begin(), before.push_data.end(),
                              w.bytes.end() - before.push_data.size());
                    slot = w;
                }
            }
        }

        site.selector = selector;
        if (const_addr)
            site.callee = ConstantAddress{*const_addr};
        else if (slot)
            site.callee = StorageSlotRef{*slot};
        else
            site.callee = UnresolvedCallee{};
        sites.push_back(std::move(site));
    }
    return sites;
}

/// Heuristic for constructor bytecode: a CODECOPY and a RETURN both within the
/// first 50 instructions, plus a plausible CBOR metadata trailer.
inline bool looks_like_creation_code(const BytecodeProgram& prog) {
    const auto& ins = prog.instructions;
    bool codecopy = false, ret = false;
    for (std::size_t i = 0; i < ins.size() && i < 50; ++i) {
        if (ins[i].opcode == OP_CODECOPY) codecopy = true;
        if (ins[i].opcode == OP_RETURN) ret = true;
    }
    if (!codecopy || !ret) return false;

    // Metadata trailer: last two bytes are a big-endian length that fits and
    // points at a CBOR map header (0xa1/0xa2/0xa3).
    const Bytes& code = prog.code;
    if (code.size() < 4) return false;
    std::size_t meta_len = (static_cast<std::size_t>(code[code.size() - 2]) << 8) |
                           code[code.size() - 1];
    if (meta_len == 0 || meta_len + 2 > code.size()) return false;
    std::uint8_t head = code[code.size() - 2 - meta_len];
    return head == 0xa1 || head == 0xa2 || head == 0xa3;
}

/// Full behavior extraction over runtime bytecode. Throws CreationCodeError
/// when handed constructor code; callers must supply deployed runtime code.
inline BehaviorReport extract_behavior(const BytecodeProgram& prog,
                                       std::optional<Address> contract_address = {},
                                       const ScanOptions& opts = {}) {
    if (looks_like_creation_code(prog))
        throw CreationCodeError(
            "input looks like constructor/creation bytecode (CODECOPY+RETURN in "
            "the first 50 instructions and a metadata trailer); supply the "
            "deployed runtime code instead");
    BehaviorReport report;
    report.contract_address = contract_address;
    report.implemented_selectors = extract_implemented_selectors(prog);
    report.call_sites = extract_external_calls(prog, opts);
    return report;
}

inline Json callee_to_json(const CalleeResolution& callee) {
    Json j;
    if (const auto* c = std::get_if<ConstantAddress>(&callee)) {
        j["type"] = "constant";
        j["address"] = c->value.hex();
    } else if (const auto* s = std::get_if<StorageSlotRef>(&callee)) {
        j["type"] = "storage_slot";
        j["slot"] = s->slot.hex();
    } else {
        j["type"] = "unresolved";
    }
    return j;
}

inline CalleeResolution callee_from_json(const Json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "constant")
        return ConstantAddress{Address::from_hex(j.at("address").get<std::string>())};
    if (type == "storage_slot")
        return StorageSlotRef{Word::from_hex(j.at("slot").get<std::string>())};
    if (type == "unresolved")
        return UnresolvedCallee{};
    throw Error("unknown callee resolution type: " + type);
}

/// Stable JSON form: lowercase 0x hex, fixed key order, selectors sorted.
inline Json to_json(const BehaviorReport& report) {
    Json j;
    j["schema"] = "behavior-report/1";
    j["contract_address"] =
        report.contract_address ? Json(report.contract_address->hex()) : Json(nullptr);
    Json selectors = Json::array();
    for (const Selector& s : report.implemented_selectors)
        selectors.push_back(s.hex());
    j["implemented_selectors"] = std::move(selectors);
    Json sites = Json::array();
    for (const ExternalCallSite& site : report.call_sites) {
        Json sj;
        sj["call_offset"] = site.call_offset;
        sj["call_kind"] = call_kind_name(site.call_kind);
        sj["callee"] = callee_to_json(site.callee);
        sj["selector"] = site.selector ? Json(site.selector->hex()) : Json(nullptr);
        sites.push_back(std::move(sj));
    }
    j["call_sites"] = std::move(sites);
    return j;
}

inline BehaviorReport behavior_report_from_json(const Json& j) {
    BehaviorReport report;
    if (j.contains("contract_address") && !j.at("contract_address").is_null())
        report.contract_address =
            Address::from_hex(j.at("contract_address").get<std::string>());
    for (const auto& s : j.at("implemented_selectors"))
        report.implemented_selectors.insert(Selector::from_hex(s.get<std::string>()));
    for (const auto& sj : j.at("call_sites")) {
        ExternalCallSite site;
        site.call_offset = sj.at("call_offset").get<std::uint32_t>();
        const std::string kind = sj.at("call_kind").get<std::string>();
        if (kind == "call") site.call_kind = CallKind::Call;
        else if (kind == "staticcall") site.call_kind = CallKind::StaticCall;
        else if (kind == "delegatecall") site.call_kind = CallKind::DelegateCall;
        else if (kind == "callcode") site.call_kind = CallKind::CallCode;
        else throw Error("unknown call kind: " + kind);
        site.callee = callee_from_json(sj.at("callee"));
        if (sj.contains("selector") && !sj.at("selector").is_null())
            site.selector = Selector::from_hex(sj.at("selector").get<std::string>());
        report.call_sites.push_back(std::move(site));
    }
    return report;
}

} // namespace pmsleuth::evm
