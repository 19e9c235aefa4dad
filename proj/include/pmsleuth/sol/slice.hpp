#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pmsleuth/sol/dependency.hpp"
#include "pmsleuth/sol/taint.hpp"

namespace pmsleuth::sol {

enum class SliceDirection { Backward, Forward };

struct SliceStatement {
    SourceSpan span;
    std::string text;
    std::string function;

    bool operator==(const SliceStatement&) const = default;
};

/// Ordered set of whole source statements relevant to a dependency or taint
/// graph. Statements are source-ordered within each function; functions
/// follow ICG topological order (callees first).
struct CodeSlice {
    std::vector<SliceStatement> statements;
    SliceDirection direction = SliceDirection::Backward;

    std::string render() const {
        std::string out;
        for (const auto& s : statements) {
            out += s.text;
            out += "\n";
        }
        return out;
    }
};

namespace detail {

inline CodeSlice slice_from_spans(
    const FactsCache& facts, const Icg& icg,
    const std::map<std::string, std::set<SourceSpan>>& spans_by_fn,
    SliceDirection direction) {
    CodeSlice slice;
    slice.direction = direction;

    for (std::uint32_t idx : icg.topological_order()) {
        const Icg::Node& node = icg.nodes[idx];
        auto it = spans_by_fn.find(node.qualified_name);
        if (it == spans_by_fn.end()) continue;
        auto fn = facts.ctx().callable(node.fn_node);
        const std::string path = fn ? fn->unit().path() : "";
        for (const SourceSpan& span : it->second) {
            SliceStatement stmt;
            stmt.span = span;
            stmt.function = node.qualified_name;
            stmt.text = facts.ctx().cu().text_at(path, span);
            slice.statements.push_back(std::move(stmt));
        }
    }
    return slice;
}

} // namespace detail

/// Whole statements containing any PCDG node, deduplicated and ordered.
inline CodeSlice backward_slice(const FactsCache& facts, const Icg& icg, const Pcdg& g) {
    std::map<std::string, std::set<SourceSpan>> spans;
    for (const auto& n : g.nodes)
        spans[n.function].insert(n.statement_span);
    return detail::slice_from_spans(facts, icg, spans, SliceDirection::Backward);
}

/// Whole statements containing any PEPG node or sink, deduplicated and ordered.
inline CodeSlice forward_slice(const FactsCache& facts, const Icg& icg, const Pepg& g) {
    std::map<std::string, std::set<SourceSpan>> spans;
    for (const auto& n : g.nodes)
        spans[n.function].insert(n.statement_span);
    for (const auto& s : g.sinks)
        spans[s.function].insert(s.statement_span);
    return detail::slice_from_spans(facts, icg, spans, SliceDirection::Forward);
}

} // namespace pmsleuth::sol
