#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pmsleuth/sol/contracts.hpp"

namespace pmsleuth::sol {

enum class OccKind { Def, Use };

/// One occurrence of a variable in the analyzed source, at the granularity
/// the dependency and taint graphs work with.
struct VarOccurrence {
    std::string function; // qualified name of the containing function/modifier
    NodeId ast_node = 0;
    std::string var_name;
    OccKind occ_kind = OccKind::Use;
    SourceSpan statement_span;

    bool operator==(const VarOccurrence&) const = default;
};

/// Graph-node identity: an AST node can carry both a Def and a Use (e.g. the
/// lvalue of a compound assignment).
struct OccKey {
    NodeId node = 0;
    OccKind kind = OccKind::Use;
    auto operator<=>(const OccKey&) const = default;
};

inline OccKey key_of(const VarOccurrence& o) { return {o.ast_node, o.occ_kind}; }

namespace facts {

struct Occurrence {
    VarOccurrence occ;
    NodeId decl = 0; // resolved declaration node
    bool is_state = false;
    bool is_param = false;
};

struct CallFact {
    NodeId call_node = 0;
    bool internal = false;
    NodeId callee_id = 0;     // FunctionDefinition/ModifierDefinition for internal calls
    std::string callee_text;  // source text of the callee expression
    std::string member_name;  // trailing member (or plain name) of the callee
    std::vector<std::vector<Occurrence>> args;
};

struct StatementFact {
    NodeId stmt_node = 0;
    SourceSpan span;
    std::string function;
    bool top_level = false;
    bool is_return = false;
    std::string assign_op;          // "=", "+=", ... ; empty when not an assignment
    bool simple_scalar_assign = false; // single bare-identifier lvalue
    std::vector<Occurrence> defs;
    std::vector<Occurrence> uses;
    std::vector<CallFact> calls;
};

struct FunctionFacts {
    std::string qualified_name;
    NodeId fn_node = 0;
    bool is_modifier = false;
    std::vector<Occurrence> params;        // Def occurrences at parameter declarations
    std::vector<NodeId> param_decls;       // in declaration order
    std::vector<Occurrence> named_returns; // Def occurrences at named return declarations
    std::set<NodeId> named_return_decls;
    std::vector<StatementFact> statements; // source order
    std::vector<std::pair<NodeId, NodeId>> modifier_invocations; // (site, modifier def)
};

inline bool is_builtin_name(const std::string& name) {
    static const std::set<std::string> names = {
        "require", "assert",  "revert",   "keccak256", "sha256",  "ripemd160",
        "ecrecover", "addmod", "mulmod",  "selfdestruct", "gasleft", "blockhash",
        "payable",  "type",   "abi",      "msg",       "block",   "tx",
        "now",      "this",   "super"};
    return names.count(name) > 0;
}

/// Extracts def/use/call facts for one function or modifier definition.
class Extractor {
public:
    Extractor(const ContractContext& ctx, NodeView fn) : ctx_(ctx), fn_(fn) {}

    FunctionFacts run() {
        out_.qualified_name = ctx_.qualified_name(fn_);
        out_.fn_node = fn_.id();
        out_.is_modifier = fn_.is("ModifierDefinition");

        if (auto params = fn_.child("parameters")) {
            for (const NodeView& p : params->list("parameters")) {
                if (p.str("name").empty()) {
                    out_.param_decls.push_back(p.id());
                    continue; // unnamed parameter still occupies a position
                }
                out_.param_decls.push_back(p.id());
                out_.params.push_back(decl_occurrence(p, OccKind::Def));
                param_set_.insert(p.id());
            }
        }
        if (auto rets = fn_.child("returnParameters")) {
            for (const NodeView& r : rets->list("parameters")) {
                if (r.str("name").empty()) continue;
                out_.named_returns.push_back(decl_occurrence(r, OccKind::Def));
                out_.named_return_decls.insert(r.id());
            }
        }
        for (const NodeView& inv : fn_.list("modifiers")) {
            auto name_node = inv.child("modifierName");
            if (!name_node) continue;
            auto ref = name_node->ref();
            if (!ref) continue;
            auto decl = ctx_.callable(*ref);
            if (decl && decl->is("ModifierDefinition"))
                out_.modifier_invocations.emplace_back(inv.id(), *ref);
            // base-constructor invocations resolve to contracts and are skipped
        }
        if (auto body = fn_.child("body"))
            walk_block(*body, /*top_level=*/true);

        for (auto& stmt : out_.statements) {
            mark_param_flags(stmt.defs);
            mark_param_flags(stmt.uses);
            for (auto& call : stmt.calls)
                for (auto& arg : call.args)
                    mark_param_flags(arg);
        }
        return std::move(out_);
    }

private:
    void mark_param_flags(std::vector<Occurrence>& occs) {
        for (auto& o : occs)
            o.is_param = param_set_.count(o.decl) > 0;
    }

    Occurrence decl_occurrence(NodeView decl, OccKind kind) {
        Occurrence o;
        o.occ.function = out_.qualified_name;
        o.occ.ast_node = decl.id();
        o.occ.var_name = decl.str("name");
        o.occ.occ_kind = kind;
        o.occ.statement_span = decl.span();
        o.decl = decl.id();
        o.is_state = decl.flag("stateVariable");
        return o;
    }

    void walk_block(NodeView block, bool top_level) {
        for (const NodeView& stmt : block.list("statements"))
            walk_stmt(stmt, top_level);
    }

    void walk_stmt(NodeView stmt, bool top_level) {
        const std::string kind = stmt.node_type();
        if (kind == "Block") {
            walk_block(stmt, false);
        } else if (kind == "UncheckedBlock") {
            walk_block(stmt, top_level);
        } else if (kind == "VariableDeclarationStatement") {
            StatementFact fact = new_fact(stmt, top_level);
            fact.assign_op = "=";
            auto decls = stmt.list_with_nulls("declarations");
            for (const auto& d : decls)
                if (d) fact.defs.push_back(decl_stmt_occurrence(*d, stmt.span()));
            fact.simple_scalar_assign = fact.defs.size() == 1 && decls.size() == 1;
            if (auto init = stmt.child("initialValue"))
                collect_expr(*init, fact, fact.uses);
            out_.statements.push_back(std::move(fact));
        } else if (kind == "ExpressionStatement") {
            auto expr = stmt.child("expression");
            if (!expr) return;
            walk_expr_stmt(*expr, stmt, top_level);
        } else if (kind == "Return") {
            StatementFact fact = new_fact(stmt, top_level);
            fact.is_return = true;
            if (auto expr = stmt.child("expression"))
                collect_expr(*expr, fact, fact.uses);
            out_.statements.push_back(std::move(fact));
        } else if (kind == "IfStatement") {
            // data dependence only: the condition does not join the graphs
            if (auto t = stmt.child("trueBody")) walk_stmt(*t, false);
            if (auto f = stmt.child("falseBody")) walk_stmt(*f, false);
        } else if (kind == "ForStatement") {
            if (auto init = stmt.child("initializationExpression")) walk_stmt(*init, false);
            if (auto loop = stmt.child("loopExpression")) walk_stmt(*loop, false);
            if (auto body = stmt.child("body")) walk_stmt(*body, false);
        } else if (kind == "WhileStatement" || kind == "DoWhileStatement") {
            if (auto body = stmt.child("body")) walk_stmt(*body, false);
        }
        // PlaceholderStatement, EmitStatement, Break/Continue: nothing to record
    }

    void walk_expr_stmt(NodeView expr, NodeView stmt, bool top_level) {
        const std::string kind = expr.node_type();
        if (kind == "Assignment") {
            StatementFact fact = new_fact(stmt, top_level);
            fact.assign_op = expr.str("operator", "=");
            auto lhs = expr.child("leftHandSide");
            if (lhs) {
                collect_lvalue(*lhs, fact);
                fact.simple_scalar_assign = fact.defs.size() == 1 && lhs->is("Identifier");
            }
            if (fact.assign_op != "=") {
                // compound assignment also reads the lvalue
                for (const auto& d : fact.defs) {
                    Occurrence use = d;
                    use.occ.occ_kind = OccKind::Use;
                    fact.uses.push_back(use);
                }
            }
            if (auto rhs = expr.child("rightHandSide"))
                collect_expr(*rhs, fact, fact.uses);
            out_.statements.push_back(std::move(fact));
        } else if (kind == "FunctionCall") {
            StatementFact fact = new_fact(stmt, top_level);
            collect_expr(expr, fact, fact.uses);
            out_.statements.push_back(std::move(fact));
        } else if (kind == "UnaryOperation") {
            // x++ / x-- / delete x: def + use of the base variable
            StatementFact fact = new_fact(stmt, top_level);
            if (auto sub = expr.child("subExpression")) {
                collect_lvalue(*sub, fact);
                for (const auto& d : fact.defs) {
                    Occurrence use = d;
                    use.occ.occ_kind = OccKind::Use;
                    fact.uses.push_back(use);
                }
            }
            out_.statements.push_back(std::move(fact));
        }
    }

    StatementFact new_fact(NodeView stmt, bool top_level) {
        StatementFact fact;
        fact.stmt_node = stmt.id();
        fact.span = stmt.span();
        fact.function = out_.qualified_name;
        fact.top_level = top_level;
        return fact;
    }

    Occurrence decl_stmt_occurrence(NodeView decl, SourceSpan stmt_span) {
        Occurrence o = decl_occurrence(decl, OccKind::Def);
        o.occ.statement_span = stmt_span;
        return o;
    }

    std::optional<Occurrence> identifier_occurrence(NodeView ident, OccKind kind,
                                                    SourceSpan stmt_span) {
        auto ref = ident.ref();
        if (!ref) return std::nullopt;
        auto decl = ctx_.cu().node(*ref);
        if (!decl || !decl->is("VariableDeclaration")) return std::nullopt;
        Occurrence o;
        o.occ.function = out_.qualified_name;
        o.occ.ast_node = ident.id();
        o.occ.var_name = ident.str("name");
        o.occ.occ_kind = kind;
        o.occ.statement_span = stmt_span;
        o.decl = *ref;
        o.is_state = decl->flag("stateVariable");
        return o;
    }

    void collect_lvalue(NodeView expr, StatementFact& fact) {
        const std::string kind = expr.node_type();
        if (kind == "Identifier") {
            if (auto o = identifier_occurrence(expr, OccKind::Def, fact.span))
                fact.defs.push_back(*o);
        } else if (kind == "TupleExpression") {
            for (const NodeView& c : expr.list("components"))
                collect_lvalue(c, fact);
        } else if (kind == "IndexAccess") {
            if (auto base = expr.child("baseExpression")) collect_lvalue(*base, fact);
            if (auto idx = expr.child("indexExpression")) collect_expr(*idx, fact, fact.uses);
        } else if (kind == "MemberAccess") {
            if (auto base = expr.child("expression")) collect_lvalue(*base, fact);
        }
    }

    /// Collects variable occurrences and call facts from an rvalue expression.
    void collect_expr(NodeView expr, StatementFact& fact, std::vector<Occurrence>& uses) {
        const std::string kind = expr.node_type();
        if (kind == "Identifier") {
            if (auto o = identifier_occurrence(expr, OccKind::Use, fact.span))
                uses.push_back(*o);
        } else if (kind == "BinaryOperation") {
            if (auto l = expr.child("leftExpression")) collect_expr(*l, fact, uses);
            if (auto r = expr.child("rightExpression")) collect_expr(*r, fact, uses);
        } else if (kind == "UnaryOperation") {
            if (auto s = expr.child("subExpression")) collect_expr(*s, fact, uses);
        } else if (kind == "Conditional") {
            if (auto c = expr.child("condition")) collect_expr(*c, fact, uses);
            if (auto t = expr.child("trueExpression")) collect_expr(*t, fact, uses);
            if (auto f = expr.child("falseExpression")) collect_expr(*f, fact, uses);
        } else if (kind == "TupleExpression") {
            for (const NodeView& c : expr.list("components"))
                collect_expr(c, fact, uses);
        } else if (kind == "IndexAccess") {
            if (auto base = expr.child("baseExpression")) collect_expr(*base, fact, uses);
            if (auto idx = expr.child("indexExpression")) collect_expr(*idx, fact, uses);
        } else if (kind == "MemberAccess") {
            if (auto base = expr.child("expression")) collect_expr(*base, fact, uses);
        } else if (kind == "FunctionCallOptions") {
            if (auto inner = expr.child("expression")) collect_expr(*inner, fact, uses);
            for (const NodeView& o : expr.list("options"))
                collect_expr(o, fact, uses);
        } else if (kind == "FunctionCall") {
            collect_call(expr, fact, uses);
        }
        // Literals, type names, NewExpression targets: no occurrences
    }

    void collect_call(NodeView call, StatementFact& fact, std::vector<Occurrence>& uses) {
        const std::string call_kind = call.str("kind", "functionCall");
        auto args = call.list("arguments");
        if (call_kind == "typeConversion" || call_kind == "structConstructorCall") {
            for (const NodeView& a : args)
                collect_expr(a, fact, uses);
            return;
        }

        auto callee = call.child("expression");
        while (callee && callee->is("FunctionCallOptions"))
            callee = callee->child("expression");
        if (!callee) return;

        CallFact cf;
        cf.call_node = call.id();
        bool record = false;

        if (callee->is("Identifier")) {
            auto ref = callee->ref();
            const std::string name = callee->str("name");
            if (ref && ctx_.is_linearized_callable(*ref)) {
                cf.internal = true;
                cf.callee_id = *ref;
                cf.member_name = name;
                cf.callee_text = ctx_.cu().text_of(*callee);
                record = true;
            } else {
                // builtin (require, keccak256, ...) or free function: arguments
                // are plain uses, no call edge
            }
        } else if (callee->is("MemberAccess")) {
            auto ref = callee->ref();
            const std::string member = callee->str("memberName");
            auto base = callee->child("expression");
            bool builtin_base = base && base->is("Identifier") && !base->ref() &&
                                is_builtin_name(base->str("name"));
            if (ref && ctx_.is_linearized_callable(*ref)) {
                // super.f() / Base.f(): dispatches inside this contract
                cf.internal = true;
                cf.callee_id = *ref;
                cf.member_name = member;
                cf.callee_text = ctx_.cu().text_of(*callee);
                record = true;
            } else if (!builtin_base) {
                cf.internal = false;
                cf.member_name = member;
                cf.callee_text = ctx_.cu().text_of(*callee);
                record = true;
            }
            if (base) collect_expr(*base, fact, uses);
        } else if (callee->is("FunctionCall")) {
            // e.g. IERC20(addr).balanceOf — conversion call in callee position
            collect_expr(*callee, fact, uses);
        }

        for (const NodeView& a : args) {
            std::vector<Occurrence> arg_occs;
            collect_expr(a, fact, arg_occs);
            for (const auto& o : arg_occs)
                uses.push_back(o);
            cf.args.push_back(std::move(arg_occs));
        }
        if (record)
            fact.calls.push_back(std::move(cf));
    }

    const ContractContext& ctx_;
    NodeView fn_;
    FunctionFacts out_;
    std::set<NodeId> param_set_;
};

} // namespace facts

using facts::FunctionFacts;

} // namespace pmsleuth::sol
