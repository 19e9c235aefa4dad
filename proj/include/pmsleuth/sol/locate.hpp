#pragma once

#include <string>
#include <variant>
#include <vector>

#include "pmsleuth/bytes.hpp"
#include "pmsleuth/sol/contracts.hpp"

namespace pmsleuth::sol {

/// A callee function pinpointed in verified source, ready for prompting.
struct FunctionSnippet {
    Address address;
    std::string signature_text;
    Selector selector;
    std::string file;
    SourceSpan byte_span;
    std::string source_text;
    NodeId node = 0;              // FunctionDefinition or getter VariableDeclaration
    std::string qualified_name;   // "Contract.fn"
    bool is_getter = false;
};

struct SelectorNotFound {
    Selector wanted;
    std::vector<std::string> candidates; // visible signatures, most-derived first
};

using LocateResult = std::variant<FunctionSnippet, SelectorNotFound>;

/// Finds the externally visible function (or synthesized public getter) whose
/// canonical signature hashes to `selector`, resolving overrides through the
/// contract's linearization (most-derived wins).
inline LocateResult locate_callee_function(const ContractContext& ctx, const Address& address,
                                           Selector selector) {
    std::vector<std::string> candidates;
    for (const auto& entry : ctx.visible_entries()) {
        candidates.push_back(entry.signature);
        if (entry.selector != selector) continue;
        FunctionSnippet snip;
        snip.address = address;
        snip.signature_text = entry.signature;
        snip.selector = entry.selector;
        snip.file = entry.node.unit().path();
        snip.byte_span = entry.node.span();
        snip.source_text = ctx.cu().text_of(entry.node);
        snip.node = entry.node.id();
        snip.qualified_name = ctx.qualified_name(entry.node);
        snip.is_getter = entry.is_getter;
        return snip;
    }
    return SelectorNotFound{selector, std::move(candidates)};
}

} // namespace pmsleuth::sol
