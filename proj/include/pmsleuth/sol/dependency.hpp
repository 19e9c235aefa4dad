#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pmsleuth/json.hpp"
#include "pmsleuth/sol/icg.hpp"

namespace pmsleuth::sol {

enum class OriginKind { ExternalCallResult, EntryParameter, StorageRead };

inline std::string origin_kind_name(OriginKind k) {
    switch (k) {
    case OriginKind::ExternalCallResult: return "external_call_result";
    case OriginKind::EntryParameter: return "entry_parameter";
    case OriginKind::StorageRead: return "storage_read";
    }
    return "?";
}

/// Price calculation dependency graph: backward data-dependency closure
/// rooted at the target occurrence. Edges point from an occurrence to what it
/// depends on, annotated with the mediating assignment statement.
struct Pcdg {
    struct Edge {
        OccKey from;
        OccKey to;
        NodeId via_statement = 0;
        auto operator<=>(const Edge&) const = default;
    };
    struct Origin {
        OccKey node;
        OriginKind kind = OriginKind::StorageRead;
        std::string detail;
    };

    VarOccurrence target;
    std::vector<VarOccurrence> nodes;
    std::vector<Edge> edges;
    std::vector<Origin> external_origins;

    const VarOccurrence* node_of(OccKey key) const {
        for (const auto& n : nodes)
            if (key_of(n) == key) return &n;
        return nullptr;
    }
};

namespace detail {

/// Shared worklist machinery for the backward traversal.
class PcdgBuilder {
public:
    PcdgBuilder(FactsCache& facts, const Icg& icg) : facts_(facts), icg_(icg) {
        for (const auto& node : icg.nodes) {
            auto decl = facts.ctx().callable(node.fn_node);
            if (decl) fn_facts_[node.qualified_name] = &facts.of(*decl);
        }
        entry_name_ = icg.nodes.at(icg.entry).qualified_name;
    }

    Pcdg run(const VarOccurrence& target) {
        auto located = locate(target);
        if (!located)
            throw NotFoundError("target occurrence of \"" + target.var_name +
                                "\" not found in " + target.function);
        Pcdg out;
        out.target = located->first.occ;
        seed(*located);
        out.nodes = sorted_nodes();
        out.edges.assign(edges_.begin(), edges_.end());
        std::sort(out.edges.begin(), out.edges.end());
        for (const auto& [key, origin] : origins_)
            out.external_origins.push_back(origin);
        return out;
    }

private:
    using Occurrence = facts::Occurrence;
    using StatementFact = facts::StatementFact;

    // (occurrence, owning statement or nullptr for parameter declarations)
    using Located = std::pair<Occurrence, const StatementFact*>;

    std::optional<Located> locate(const VarOccurrence& target) const {
        auto it = fn_facts_.find(target.function);
        if (it == fn_facts_.end()) return std::nullopt;
        const FunctionFacts& ff = *it->second;
        for (const auto& stmt : ff.statements) {
            for (const auto& d : stmt.defs)
                if (d.occ.ast_node == target.ast_node && d.occ.occ_kind == target.occ_kind)
                    return Located{d, &stmt};
            for (const auto& u : stmt.uses)
                if (u.occ.ast_node == target.ast_node && u.occ.occ_kind == target.occ_kind)
                    return Located{u, &stmt};
        }
        for (const auto& p : ff.params)
            if (p.occ.ast_node == target.ast_node) return Located{p, nullptr};
        return std::nullopt;
    }

    void seed(const Located& located) {
        const auto& [occ, stmt] = located;
        add_node(occ);
        const FunctionFacts& ff = *fn_facts_.at(occ.occ.function);
        if (occ.occ.occ_kind == OccKind::Def) {
            if (stmt)
                expand_def(occ, *stmt, ff);
            else
                handle_param(occ, ff, std::nullopt);
        } else {
            request_defs(ff, occ);
        }
    }

    void add_node(const Occurrence& o) { nodes_.emplace(key_of(o.occ), o.occ); }

    void add_edge(OccKey from, OccKey to, NodeId via) { edges_.insert({from, to, via}); }

    void mark_origin(const Occurrence& o, OriginKind kind, std::string detail) {
        OccKey key = key_of(o.occ);
        if (!origins_.count(key))
            origins_[key] = Pcdg::Origin{key, kind, std::move(detail)};
    }

    void expand_def(const Occurrence& def, const StatementFact& stmt,
                    const FunctionFacts& ff) {
        if (!expanded_.insert(key_of(def.occ)).second) return;
        add_node(def);
        for (const auto& use : stmt.uses) {
            add_node(use);
            add_edge(key_of(def.occ), key_of(use.occ), stmt.stmt_node);
            request_defs(ff, use);
        }
        for (const auto& call : stmt.calls) {
            if (call.internal)
                bind_returns(def, call);
            else
                mark_origin(def, OriginKind::ExternalCallResult, call.callee_text + "()");
        }
    }

    void request_defs(const FunctionFacts& ff, const Occurrence& use) {
        add_node(use);
        std::size_t defs_found = 0;
        for (const auto& stmt : ff.statements) {
            for (const auto& d : stmt.defs) {
                if (d.decl != use.decl) continue;
                ++defs_found;
                add_node(d);
                add_edge(key_of(use.occ), key_of(d.occ), stmt.stmt_node);
                expand_def(d, stmt, ff);
            }
        }
        if (use.is_state) {
            // storage reads see writes from every function in the ICG
            for (const auto& [name, other] : fn_facts_) {
                if (name == ff.qualified_name) continue;
                for (const auto& stmt : other->statements) {
                    for (const auto& d : stmt.defs) {
                        if (d.decl != use.decl) continue;
                        ++defs_found;
                        add_node(d);
                        add_edge(key_of(use.occ), key_of(d.occ), stmt.stmt_node);
                        expand_def(d, stmt, *other);
                    }
                }
            }
            if (defs_found == 0)
                mark_origin(use, OriginKind::StorageRead, use.occ.var_name);
            return;
        }
        if (use.is_param) {
            const Occurrence* param = param_occurrence(ff, use.decl);
            if (param) {
                add_node(*param);
                add_edge(key_of(use.occ), key_of(param->occ), param->occ.ast_node);
                handle_param(*param, ff, param_index(ff, use.decl));
            }
        }
    }

    const Occurrence* param_occurrence(const FunctionFacts& ff, NodeId decl) const {
        for (const auto& p : ff.params)
            if (p.decl == decl) return &p;
        return nullptr;
    }

    std::optional<std::size_t> param_index(const FunctionFacts& ff, NodeId decl) const {
        for (std::size_t i = 0; i < ff.param_decls.size(); ++i)
            if (ff.param_decls[i] == decl) return i;
        return std::nullopt;
    }

    void handle_param(const Occurrence& param, const FunctionFacts& ff,
                      std::optional<std::size_t> position) {
        add_node(param);
        if (ff.qualified_name == entry_name_) {
            mark_origin(param, OriginKind::EntryParameter, param.occ.var_name);
            return;
        }
        if (!position) position = param_index(ff, param.decl);
        if (!position) return;
        if (!params_bound_.insert(param.decl).second) return;

        auto callee_idx = icg_.index_by_name(ff.qualified_name);
        if (!callee_idx) return;
        for (const auto& edge : icg_.edges) {
            if (edge.callee != *callee_idx) continue;
            const std::string& caller_name = icg_.nodes[edge.caller].qualified_name;
            auto cit = fn_facts_.find(caller_name);
            if (cit == fn_facts_.end()) continue;
            const FunctionFacts& caller = *cit->second;
            for (const auto& stmt : caller.statements) {
                for (const auto& call : stmt.calls) {
                    if (call.call_node != edge.call_site) continue;
                    if (*position >= call.args.size()) continue;
                    for (const auto& arg : call.args[*position]) {
                        add_node(arg);
                        add_edge(key_of(param.occ), key_of(arg.occ), stmt.stmt_node);
                        request_defs(caller, arg);
                    }
                }
            }
        }
    }

    void bind_returns(const Occurrence& def, const facts::CallFact& call) {
        auto decl = facts_.ctx().callable(call.callee_id);
        if (!decl) return;
        const FunctionFacts& callee = facts_.of(*decl);
        for (const auto& stmt : callee.statements) {
            if (!stmt.is_return) continue;
            for (const auto& use : stmt.uses) {
                add_node(use);
                add_edge(key_of(def.occ), key_of(use.occ), stmt.stmt_node);
                request_defs(callee, use);
            }
        }
        for (NodeId nr : callee.named_return_decls) {
            for (const auto& stmt : callee.statements) {
                for (const auto& d : stmt.defs) {
                    if (d.decl != nr) continue;
                    add_node(d);
                    add_edge(key_of(def.occ), key_of(d.occ), stmt.stmt_node);
                    expand_def(d, stmt, callee);
                }
            }
        }
    }

    std::vector<VarOccurrence> sorted_nodes() const {
        std::vector<VarOccurrence> out;
        out.reserve(nodes_.size());
        for (const auto& [key, occ] : nodes_)
            out.push_back(occ);
        std::sort(out.begin(), out.end(), [](const VarOccurrence& a, const VarOccurrence& b) {
            return std::tie(a.function, a.statement_span.start, a.ast_node, a.occ_kind) <
                   std::tie(b.function, b.statement_span.start, b.ast_node, b.occ_kind);
        });
        return out;
    }

    FactsCache& facts_;
    const Icg& icg_;
    std::map<std::string, const FunctionFacts*> fn_facts_;
    std::string entry_name_;

    std::map<OccKey, VarOccurrence> nodes_;
    std::set<Pcdg::Edge> edges_;
    std::map<OccKey, Pcdg::Origin> origins_;
    std::set<OccKey> expanded_;
    std::set<NodeId> params_bound_;
};

} // namespace detail

/// Backward data-dependency analysis rooted at the target occurrence,
/// following assignments, tuple fan-out, and call/return bindings across the
/// ICG. Throws NotFoundError when the target cannot be located.
inline Pcdg backward_dependency(FactsCache& facts, const Icg& icg,
                                const VarOccurrence& target) {
    detail::PcdgBuilder builder(facts, icg);
    return builder.run(target);
}

inline Json to_json(const Pcdg& g) {
    Json j;
    j["kind"] = "pcdg";
    Json target;
    target["function"] = g.target.function;
    target["node"] = g.target.ast_node;
    target["var"] = g.target.var_name;
    j["target"] = std::move(target);
    Json nodes = Json::array();
    for (const auto& n : g.nodes) {
        Json nj;
        nj["node"] = n.ast_node;
        nj["kind"] = n.occ_kind == OccKind::Def ? "def" : "use";
        nj["var"] = n.var_name;
        nj["function"] = n.function;
        nj["statement_start"] = n.statement_span.start;
        nj["statement_length"] = n.statement_span.length;
        nodes.push_back(std::move(nj));
    }
    j["nodes"] = std::move(nodes);
    Json edges = Json::array();
    for (const auto& e : g.edges) {
        Json ej;
        ej["from"] = e.from.node;
        ej["from_kind"] = e.from.kind == OccKind::Def ? "def" : "use";
        ej["depends_on"] = e.to.node;
        ej["to_kind"] = e.to.kind == OccKind::Def ? "def" : "use";
        ej["via_statement"] = e.via_statement;
        edges.push_back(std::move(ej));
    }
    j["edges"] = std::move(edges);
    Json origins = Json::array();
    for (const auto& o : g.external_origins) {
        Json oj;
        oj["node"] = o.node.node;
        oj["kind"] = origin_kind_name(o.kind);
        oj["detail"] = o.detail;
        origins.push_back(std::move(oj));
    }
    j["external_origins"] = std::move(origins);
    return j;
}

} // namespace pmsleuth::sol
