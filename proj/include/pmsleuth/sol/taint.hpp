#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pmsleuth/json.hpp"
#include "pmsleuth/sol/icg.hpp"

namespace pmsleuth::sol {

enum class SinkKind { ExternalCall, Transfer, Return, StateWrite };

inline std::string sink_kind_name(SinkKind k) {
    switch (k) {
    case SinkKind::ExternalCall: return "external_call";
    case SinkKind::Transfer: return "transfer";
    case SinkKind::Return: return "return";
    case SinkKind::StateWrite: return "state_write";
    }
    return "?";
}

struct SinkSite {
    SinkKind kind = SinkKind::ExternalCall;
    NodeId ast_node = 0; // call node, return statement, or assignment statement
    std::string function;
    SourceSpan statement_span;
    std::string label; // callee text, variable name, or "return"

    auto operator<=>(const SinkSite&) const = default;
};

/// Price exploitation propagation graph: forward taint closure from the
/// manipulated price occurrence, with sinks where the tainted value escapes.
struct Pepg {
    struct Edge {
        OccKey from;
        OccKey to;
        NodeId via_statement = 0;
        auto operator<=>(const Edge&) const = default;
    };
    struct SinkEdge {
        OccKey from;
        std::size_t sink = 0;
        auto operator<=>(const SinkEdge&) const = default;
    };

    VarOccurrence source;
    std::vector<VarOccurrence> nodes;
    std::vector<Edge> edges;
    std::vector<SinkSite> sinks;
    std::vector<SinkEdge> sink_edges;
};

namespace detail {

inline bool transfer_shaped(const std::string& member) {
    std::string lower;
    lower.reserve(member.size());
    for (char c : member)
        lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return lower.find("transfer") != std::string::npos || lower == "send";
}

class PepgBuilder {
public:
    PepgBuilder(FactsCache& facts, const Icg& icg) : facts_(facts), icg_(icg) {
        for (const auto& node : icg.nodes) {
            auto decl = facts.ctx().callable(node.fn_node);
            if (decl) ordered_fns_.push_back(&facts.of(*decl));
        }
        entry_name_ = icg.nodes.at(icg.entry).qualified_name;
    }

    Pepg run(const VarOccurrence& source) {
        const facts::Occurrence* src = locate(source);
        if (!src)
            throw NotFoundError("taint source occurrence of \"" + source.var_name +
                                "\" not found in " + source.function);
        Pepg out;
        out.source = src->occ;
        source_key_ = key_of(src->occ);
        add_node(*src);
        writers_of(source.function, *src).insert(source_key_);

        // Monotone in nodes and edges; taint sets may shrink under strong
        // updates, so iterate until the graph stops growing (bounded rounds).
        std::size_t rounds = 2 * ordered_fns_.size() + 8;
        for (std::size_t r = 0; r < rounds; ++r) {
            std::size_t before = nodes_.size() + edges_.size() + sinks_.size();
            for (const FunctionFacts* ff : ordered_fns_)
                pass_function(*ff);
            std::size_t after = nodes_.size() + edges_.size() + sinks_.size();
            if (after == before) break;
        }

        for (const auto& [key, occ] : nodes_)
            out.nodes.push_back(occ);
        std::sort(out.nodes.begin(), out.nodes.end(),
                  [](const VarOccurrence& a, const VarOccurrence& b) {
                      return std::tie(a.function, a.statement_span.start, a.ast_node,
                                      a.occ_kind) < std::tie(b.function,
                                                             b.statement_span.start,
                                                             b.ast_node, b.occ_kind);
                  });
        out.edges.assign(edges_.begin(), edges_.end());
        std::sort(out.edges.begin(), out.edges.end());
        out.sinks.assign(sinks_.begin(), sinks_.end());
        for (const auto& [from, sink] : sink_edge_set_) {
            auto it = std::find(out.sinks.begin(), out.sinks.end(), sink);
            out.sink_edges.push_back(
                {from, static_cast<std::size_t>(it - out.sinks.begin())});
        }
        std::sort(out.sink_edges.begin(), out.sink_edges.end());
        out.sink_edges.erase(std::unique(out.sink_edges.begin(), out.sink_edges.end()),
                             out.sink_edges.end());
        return out;
    }

private:
    using Occurrence = facts::Occurrence;
    using StatementFact = facts::StatementFact;

    const Occurrence* locate(const VarOccurrence& source) const {
        for (const FunctionFacts* ff : ordered_fns_) {
            if (ff->qualified_name != source.function) continue;
            for (const auto& stmt : ff->statements) {
                for (const auto& d : stmt.defs)
                    if (d.occ.ast_node == source.ast_node &&
                        d.occ.occ_kind == source.occ_kind)
                        return &d;
                for (const auto& u : stmt.uses)
                    if (u.occ.ast_node == source.ast_node &&
                        u.occ.occ_kind == source.occ_kind)
                        return &u;
            }
            for (const auto& p : ff->params)
                if (p.occ.ast_node == source.ast_node) return &p;
        }
        return nullptr;
    }

    // Taint is tracked as the set of def occurrences ("writers") that made a
    // variable tainted, so every tainted use links back to its writers.
    std::set<OccKey>& writers_of(const std::string& fn, const Occurrence& o) {
        if (o.is_state) return state_writers_[o.decl];
        return local_writers_[{fn, o.decl}];
    }

    const std::set<OccKey>* find_writers(const std::string& fn, const Occurrence& o) const {
        if (o.is_state) {
            auto it = state_writers_.find(o.decl);
            return it == state_writers_.end() || it->second.empty() ? nullptr : &it->second;
        }
        auto it = local_writers_.find({fn, o.decl});
        return it == local_writers_.end() || it->second.empty() ? nullptr : &it->second;
    }

    bool is_tainted(const std::string& fn, const Occurrence& o) const {
        return find_writers(fn, o) != nullptr;
    }

    void add_node(const Occurrence& o) { nodes_.emplace(key_of(o.occ), o.occ); }

    void add_edge(OccKey from, OccKey to, NodeId via) { edges_.insert({from, to, via}); }

    void add_sink(const Occurrence& from, SinkSite sink) {
        add_node(from);
        auto [it, _] = sinks_.insert(std::move(sink));
        sink_edge_set_.insert({key_of(from.occ), *it});
    }

    /// Connects a tainted use back to the writers that tainted its variable.
    void link_use(const std::string& fn, const Occurrence& u, NodeId via) {
        add_node(u);
        if (const auto* writers = find_writers(fn, u))
            for (const OccKey& w : *writers)
                if (w != key_of(u.occ)) add_edge(w, key_of(u.occ), via);
    }

    void taint(const std::string& fn, const Occurrence& writer) {
        writers_of(fn, writer).insert(key_of(writer.occ));
    }

    void untaint(const std::string& fn, const Occurrence& o) {
        if (o.is_state) return; // storage writes are never strong updates
        auto it = local_writers_.find({fn, o.decl});
        if (it != local_writers_.end()) it->second.clear();
    }

    /// Tainted return-value occurrences of a callee, if any.
    std::vector<const Occurrence*> tainted_returns(const FunctionFacts& callee) const {
        std::vector<const Occurrence*> out;
        for (const auto& stmt : callee.statements) {
            if (stmt.is_return) {
                for (const auto& u : stmt.uses)
                    if (is_tainted(callee.qualified_name, u)) out.push_back(&u);
            }
            for (const auto& d : stmt.defs)
                if (callee.named_return_decls.count(d.decl) &&
                    is_tainted(callee.qualified_name, d))
                    out.push_back(&d);
        }
        return out;
    }

    const FunctionFacts* facts_by_id(NodeId fn_id) const {
        for (const FunctionFacts* ff : ordered_fns_)
            if (ff->fn_node == fn_id) return ff;
        return nullptr;
    }

    void pass_function(const FunctionFacts& ff) {
        const std::string& fn = ff.qualified_name;
        for (const auto& stmt : ff.statements) {
            std::vector<const Occurrence*> tainted_uses;
            for (const auto& u : stmt.uses)
                if (is_tainted(fn, u)) tainted_uses.push_back(&u);

            bool is_source_stmt = false;
            for (const auto& d : stmt.defs)
                if (key_of(d.occ) == source_key_) is_source_stmt = true;

            // internal callees with tainted returns feed this statement too
            std::vector<std::pair<const facts::CallFact*, std::vector<const Occurrence*>>>
                tainted_calls;
            for (const auto& call : stmt.calls) {
                if (!call.internal) continue;
                const FunctionFacts* callee = facts_by_id(call.callee_id);
                if (!callee) continue;
                auto rets = tainted_returns(*callee);
                if (!rets.empty()) tainted_calls.emplace_back(&call, std::move(rets));
            }

            bool taints_defs = !tainted_uses.empty() || !tainted_calls.empty() ||
                               is_source_stmt;

            if (taints_defs) {
                for (const auto& d : stmt.defs) {
                    add_node(d);
                    taint(fn, d);
                    for (const auto* u : tainted_uses) {
                        add_node(*u);
                        add_edge(key_of(u->occ), key_of(d.occ), stmt.stmt_node);
                    }
                    for (const auto& [call, rets] : tainted_calls)
                        for (const auto* r : rets)
                            add_edge(key_of(r->occ), key_of(d.occ), stmt.stmt_node);
                    if (d.is_state && !(is_source_stmt && key_of(d.occ) == source_key_)) {
                        add_sink(d, SinkSite{SinkKind::StateWrite, stmt.stmt_node, fn,
                                             stmt.span, d.occ.var_name});
                    }
                }
            } else if (stmt.top_level && stmt.assign_op == "=" &&
                       stmt.simple_scalar_assign && !stmt.defs.empty() &&
                       !is_source_stmt) {
                // direct unconditional reassignment from untainted rvalue
                untaint(fn, stmt.defs.front());
            }

            // calls: tainted arguments cross into callees or hit sinks
            for (const auto& call : stmt.calls) {
                if (call.internal) {
                    const FunctionFacts* callee = facts_by_id(call.callee_id);
                    if (!callee) continue;
                    for (std::size_t pos = 0;
                         pos < call.args.size() && pos < callee->param_decls.size(); ++pos) {
                        for (const auto& arg : call.args[pos]) {
                            if (!is_tainted(fn, arg)) continue;
                            const Occurrence* param = nullptr;
                            for (const auto& p : callee->params)
                                if (p.decl == callee->param_decls[pos]) param = &p;
                            if (!param) continue;
                            add_node(arg);
                            add_node(*param);
                            add_edge(key_of(arg.occ), key_of(param->occ), stmt.stmt_node);
                            taint(callee->qualified_name, *param);
                        }
                    }
                } else {
                    for (const auto& arg_list : call.args) {
                        for (const auto& arg : arg_list) {
                            if (!is_tainted(fn, arg)) continue;
                            SinkKind kind = transfer_shaped(call.member_name)
                                                ? SinkKind::Transfer
                                                : SinkKind::ExternalCall;
                            add_sink(arg, SinkSite{kind, call.call_node, fn, stmt.span,
                                                   call.callee_text + "()"});
                        }
                    }
                }
            }

            if (stmt.is_return && fn == entry_name_) {
                for (const auto* u : tainted_uses)
                    add_sink(*u, SinkSite{SinkKind::Return, stmt.stmt_node, fn, stmt.span,
                                          "return"});
            }
        }
    }

    FactsCache& facts_;
    const Icg& icg_;
    std::vector<const FunctionFacts*> ordered_fns_;
    std::string entry_name_;

    OccKey source_key_;
    std::uint32_t source_stmt_start_ = 0;
    std::map<std::string, std::set<NodeId>> tainted_local_;
    std::set<NodeId> tainted_state_;
    std::map<OccKey, VarOccurrence> nodes_;
    std::set<Pepg::Edge> edges_;
    std::set<SinkSite> sinks_;
    std::set<std::pair<OccKey, SinkSite>> sink_edge_set_;
};

} // namespace detail

/// Forward taint propagation from the manipulated price occurrence across the
/// ICG, recording Transfer/ExternalCall/Return/StateWrite sinks. No
/// sanitizers; direct scalar reassignment is the only kill.
inline Pepg taint_propagate(FactsCache& facts, const Icg& icg, const VarOccurrence& source) {
    detail::PepgBuilder builder(facts, icg);
    return builder.run(source);
}

inline Json to_json(const Pepg& g) {
    Json j;
    j["kind"] = "pepg";
    Json source;
    source["function"] = g.source.function;
    source["node"] = g.source.ast_node;
    source["var"] = g.source.var_name;
    j["source"] = std::move(source);
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
        ej["to"] = e.to.node;
        ej["to_kind"] = e.to.kind == OccKind::Def ? "def" : "use";
        ej["via_statement"] = e.via_statement;
        edges.push_back(std::move(ej));
    }
    j["edges"] = std::move(edges);
    Json sinks = Json::array();
    for (const auto& s : g.sinks) {
        Json sj;
        sj["kind"] = sink_kind_name(s.kind);
        sj["node"] = s.ast_node;
        sj["function"] = s.function;
        sj["label"] = s.label;
        sinks.push_back(std::move(sj));
    }
    j["sinks"] = std::move(sinks);
    Json sink_edges = Json::array();
    for (const auto& se : g.sink_edges) {
        Json ej;
        ej["from"] = se.from.node;
        ej["sink"] = se.sink;
        sink_edges.push_back(std::move(ej));
    }
    j["sink_edges"] = std::move(sink_edges);
    return j;
}

} // namespace pmsleuth::sol
