#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pmsleuth/sol/facts.hpp"

namespace pmsleuth::sol {

/// Facts for every function reached during ICG construction. Filled once,
/// read-only afterwards.
class FactsCache {
public:
    explicit FactsCache(const ContractContext& ctx) : ctx_(&ctx) {}

    const FunctionFacts& of(NodeView fn) {
        auto it = cache_.find(fn.id());
        if (it != cache_.end()) return it->second;
        facts::Extractor ex(*ctx_, fn);
        auto [pos, _] = cache_.emplace(fn.id(), ex.run());
        return pos->second;
    }

    const FunctionFacts* find(NodeId fn_id) const {
        auto it = cache_.find(fn_id);
        return it == cache_.end() ? nullptr : &it->second;
    }

    const FunctionFacts* find_by_name(const std::string& qualified) const {
        for (const auto& [id, f] : cache_)
            if (f.qualified_name == qualified) return &f;
        return nullptr;
    }

    const ContractContext& ctx() const { return *ctx_; }

private:
    const ContractContext* ctx_;
    std::map<NodeId, FunctionFacts> cache_;
};

/// Intra-call graph rooted at one externally visible entry function. Edges
/// stay within the linearized contract; external calls remain leaf
/// annotations inside the statement facts.
struct Icg {
    struct Node {
        std::string qualified_name;
        NodeId fn_node = 0;
        bool is_modifier = false;
    };
    struct Edge {
        std::uint32_t caller = 0;
        std::uint32_t callee = 0;
        NodeId call_site = 0;
    };

    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::uint32_t entry = 0;

    std::optional<std::uint32_t> index_of(NodeId fn_node) const {
        for (std::uint32_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].fn_node == fn_node) return i;
        return std::nullopt;
    }

    std::optional<std::uint32_t> index_by_name(const std::string& qualified) const {
        for (std::uint32_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].qualified_name == qualified) return i;
        return std::nullopt;
    }

    /// Callees-before-callers order; cycles and ties broken by name.
    std::vector<std::uint32_t> topological_order() const {
        std::vector<std::uint32_t> order;
        std::vector<bool> done(nodes.size(), false);
        while (order.size() < nodes.size()) {
            std::optional<std::uint32_t> pick;
            auto better = [&](std::uint32_t a, std::uint32_t b) {
                return nodes[a].qualified_name < nodes[b].qualified_name;
            };
            // prefer nodes whose callees are all done
            for (std::uint32_t i = 0; i < nodes.size(); ++i) {
                if (done[i]) continue;
                bool ready = true;
                for (const Edge& e : edges)
                    if (e.caller == i && !done[e.callee] && e.callee != i) ready = false;
                if (ready && (!pick || better(i, *pick))) pick = i;
            }
            if (!pick) { // cycle: take the lexicographically smallest remaining
                for (std::uint32_t i = 0; i < nodes.size(); ++i)
                    if (!done[i] && (!pick || better(i, *pick))) pick = i;
            }
            done[*pick] = true;
            order.push_back(*pick);
        }
        return order;
    }
};

/// Builds the ICG by walking internal calls, modifier invocations and
/// inherited-function calls from the entry. Throws NotFoundError when the
/// entry does not resolve.
inline Icg build_icg(FactsCache& facts, const std::string& entry_qualified) {
    auto entry = facts.ctx().resolve_qualified(entry_qualified);
    if (!entry || !entry->is("FunctionDefinition"))
        throw NotFoundError("entry function " + entry_qualified + " not found in contract " +
                            facts.ctx().contract().str("name"));

    Icg icg;
    std::map<NodeId, std::uint32_t> index;

    auto add_node = [&](NodeView fn) -> std::uint32_t {
        auto it = index.find(fn.id());
        if (it != index.end()) return it->second;
        Icg::Node node;
        node.qualified_name = facts.ctx().qualified_name(fn);
        node.fn_node = fn.id();
        node.is_modifier = fn.is("ModifierDefinition");
        icg.nodes.push_back(node);
        std::uint32_t idx = static_cast<std::uint32_t>(icg.nodes.size() - 1);
        index[fn.id()] = idx;
        return idx;
    };

    std::vector<NodeView> worklist{*entry};
    add_node(*entry);
    std::set<NodeId> expanded;
    while (!worklist.empty()) {
        NodeView fn = worklist.back();
        worklist.pop_back();
        if (!expanded.insert(fn.id()).second) continue;
        std::uint32_t caller_idx = index.at(fn.id());
        const FunctionFacts& ff = facts.of(fn);

        for (const auto& [site, modifier_id] : ff.modifier_invocations) {
            auto decl = facts.ctx().callable(modifier_id);
            if (!decl) continue;
            std::uint32_t callee_idx = add_node(*decl);
            icg.edges.push_back({caller_idx, callee_idx, site});
            worklist.push_back(*decl);
        }
        for (const auto& stmt : ff.statements) {
            for (const auto& call : stmt.calls) {
                if (!call.internal) continue;
                auto decl = facts.ctx().callable(call.callee_id);
                if (!decl) continue;
                std::uint32_t callee_idx = add_node(*decl);
                icg.edges.push_back({caller_idx, callee_idx, call.call_node});
                worklist.push_back(*decl);
            }
        }
    }
    return icg;
}

} // namespace pmsleuth::sol
