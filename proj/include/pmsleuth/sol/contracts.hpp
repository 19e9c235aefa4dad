#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pmsleuth/abi/selector.hpp"
#include "pmsleuth/sol/ast.hpp"

namespace pmsleuth::sol {

/// All ContractDefinition nodes across the unit's files, in file order.
inline std::vector<NodeView> all_contracts(const CompilationUnit& cu) {
    std::vector<NodeView> out;
    for (const AstUnit& unit : cu.units())
        for (const NodeView& n : unit.root().list("nodes"))
            if (n.is("ContractDefinition"))
                out.push_back(n);
    return out;
}

inline std::optional<NodeView> find_contract(const CompilationUnit& cu,
                                             const std::string& name) {
    for (const NodeView& c : all_contracts(cu))
        if (c.str("name") == name)
            return c;
    return std::nullopt;
}

namespace detail {
inline std::string canonical_type_impl(NodeView type_name, const CompilationUnit& cu,
                                       std::set<NodeId>& visiting);

inline std::string canonical_elementary(const std::string& name) {
    if (name == "uint") return "uint256";
    if (name == "int") return "int256";
    if (name == "byte") return "bytes1";
    return name; // address payable appears as name "address" in the AST
}

inline std::string struct_tuple(NodeView struct_def, const CompilationUnit& cu,
                                std::set<NodeId>& visiting) {
    if (!visiting.insert(struct_def.id()).second)
        throw AbiTypeError("recursive struct " + struct_def.str("name") +
                           " cannot be ABI-encoded");
    std::string out = "(";
    bool first = true;
    for (const NodeView& member : struct_def.list("members")) {
        if (!first) out += ",";
        first = false;
        auto tn = member.child("typeName");
        if (!tn)
            throw AbiTypeError("struct member " + member.str("name") + " has no typeName");
        out += canonical_type_impl(*tn, cu, visiting);
    }
    out += ")";
    visiting.erase(struct_def.id());
    return out;
}

inline std::string canonical_type_impl(NodeView type_name, const CompilationUnit& cu,
                                       std::set<NodeId>& visiting) {
    const std::string kind = type_name.node_type();
    if (kind == "ElementaryTypeName")
        return canonical_elementary(type_name.str("name"));
    if (kind == "UserDefinedTypeName" || kind == "IdentifierPath") {
        auto ref = type_name.ref();
        if (!ref)
            throw AbiTypeError("unresolved user-defined type " + type_name.str("name"));
        auto decl = cu.node(*ref);
        if (!decl)
            throw AbiTypeError("user-defined type references unknown node " +
                               std::to_string(*ref));
        const std::string decl_kind = decl->node_type();
        if (decl_kind == "ContractDefinition") return "address";
        if (decl_kind == "EnumDefinition") return "uint8";
        if (decl_kind == "StructDefinition") return struct_tuple(*decl, cu, visiting);
        throw AbiTypeError("unsupported user-defined type kind " + decl_kind + " for " +
                           decl->str("name"));
    }
    if (kind == "ArrayTypeName") {
        auto base = type_name.child("baseType");
        if (!base) throw AbiTypeError("array type has no baseType");
        std::string out = canonical_type_impl(*base, cu, visiting);
        auto len = type_name.child("length");
        out += "[";
        if (len && len->is("Literal")) out += len->str("value");
        out += "]";
        return out;
    }
    if (kind == "Mapping")
        throw AbiTypeError("mapping types cannot appear as ABI parameters");
    if (kind == "FunctionTypeName")
        throw AbiTypeError("function-type parameters are not supported (" +
                           type_name.str("name", "function") + ")");
    throw AbiTypeError("unsupported parameter type kind " + kind);
}
} // namespace detail

/// Canonical ABI type text for a typeName node (uint normalization,
/// contract/interface/enum mapping, arrays, struct-to-tuple expansion).
inline std::string canonical_type(NodeView type_name, const CompilationUnit& cu) {
    std::set<NodeId> visiting;
    return detail::canonical_type_impl(type_name, cu, visiting);
}

/// Canonical signature text of a FunctionDefinition:
/// name(type1,type2,...) with ABI-canonical types and no spaces.
inline std::string canonicalize_signature(NodeView fn, const CompilationUnit& cu) {
    std::string out = fn.str("name");
    out += "(";
    auto params = fn.child("parameters");
    bool first = true;
    if (params) {
        for (const NodeView& p : params->list("parameters")) {
            if (!first) out += ",";
            first = false;
            auto tn = p.child("typeName");
            if (!tn)
                throw AbiTypeError("parameter " + p.str("name") + " has no typeName");
            out += canonical_type(*tn, cu);
        }
    }
    out += ")";
    return out;
}

/// Signature of the compiler-generated getter for a public state variable:
/// mapping keys and array indices become parameters.
inline std::optional<std::string> getter_signature(NodeView var_decl,
                                                   const CompilationUnit& cu) {
    if (!var_decl.flag("stateVariable") || var_decl.str("visibility") != "public")
        return std::nullopt;
    std::vector<std::string> keys;
    auto tn = var_decl.child("typeName");
    while (tn) {
        const std::string kind = tn->node_type();
        if (kind == "Mapping") {
            auto key = tn->child("keyType");
            if (!key) return std::nullopt;
            keys.push_back(canonical_type(*key, cu));
            tn = tn->child("valueType");
        } else if (kind == "ArrayTypeName") {
            keys.push_back("uint256");
            tn = tn->child("baseType");
        } else {
            break;
        }
    }
    std::string out = var_decl.str("name");
    out += "(";
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (i) out += ",";
        out += keys[i];
    }
    out += ")";
    return out;
}

/// Resolves one analyzed contract: its C3 linearization (as recorded by the
/// compiler), the functions and modifiers visible through it, and qualified
/// naming. Immutable once built.
class ContractContext {
public:
    static ContractContext build(const CompilationUnit& cu, const std::string& contract_name) {
        auto contract = find_contract(cu, contract_name);
        if (!contract)
            throw NotFoundError("contract " + contract_name + " not found in sources");
        ContractContext ctx;
        ctx.cu_ = &cu;
        ctx.contract_ = *contract;
        if (contract->has("linearizedBaseContracts")) {
            for (const Json& idj : contract->raw()["linearizedBaseContracts"]) {
                if (!idj.is_number()) continue;
                auto base = cu.node(idj.get<NodeId>());
                if (base && base->is("ContractDefinition"))
                    ctx.linearized_.push_back(*base);
            }
        }
        if (ctx.linearized_.empty())
            ctx.linearized_.push_back(*contract);
        for (const NodeView& c : ctx.linearized_) {
            for (const NodeView& member : c.list("nodes")) {
                if (member.is("FunctionDefinition") || member.is("ModifierDefinition"))
                    ctx.callables_[member.id()] = member;
                ctx.member_contract_[member.id()] = c.str("name"); // incl. state vars
            }
        }
        return ctx;
    }

    const CompilationUnit& cu() const { return *cu_; }
    NodeView contract() const { return contract_; }
    const std::vector<NodeView>& linearized() const { return linearized_; }

    /// True when the declaration id belongs to a function or modifier defined
    /// anywhere in this contract's linearization.
    bool is_linearized_callable(NodeId id) const { return callables_.count(id) > 0; }

    std::optional<NodeView> callable(NodeId id) const {
        auto it = callables_.find(id);
        if (it == callables_.end()) return std::nullopt;
        return it->second;
    }

    /// "<DefiningContract>.<member>" for functions/modifiers in the linearization.
    std::string qualified_name(NodeView callable_node) const {
        auto it = member_contract_.find(callable_node.id());
        std::string contract_name =
            it != member_contract_.end() ? it->second : contract_.str("name");
        return contract_name + "." + callable_node.str("name");
    }

    /// Most-derived function or modifier with the given plain name.
    std::optional<NodeView> resolve_by_name(const std::string& name) const {
        for (const NodeView& c : linearized_)
            for (const NodeView& member : c.list("nodes"))
                if ((member.is("FunctionDefinition") || member.is("ModifierDefinition")) &&
                    member.str("name") == name)
                    return member;
        return std::nullopt;
    }

    /// Resolves "Contract.fn" or plain "fn" in linearization order.
    std::optional<NodeView> resolve_qualified(const std::string& qualified) const {
        auto dot = qualified.find('.');
        if (dot == std::string::npos) return resolve_by_name(qualified);
        const std::string contract_name = qualified.substr(0, dot);
        const std::string fn_name = qualified.substr(dot + 1);
        for (const NodeView& c : linearized_) {
            if (c.str("name") != contract_name) continue;
            for (const NodeView& member : c.list("nodes"))
                if ((member.is("FunctionDefinition") || member.is("ModifierDefinition")) &&
                    member.str("name") == fn_name)
                    return member;
        }
        return std::nullopt;
    }

    struct VisibleEntry {
        std::string signature;
        Selector selector;
        NodeView node; // FunctionDefinition or public state VariableDeclaration
        bool is_getter;
    };

    /// Externally dispatchable surface: public/external functions plus public
    /// state-variable getters, most-derived override first.
    std::vector<VisibleEntry> visible_entries() const {
        std::vector<VisibleEntry> out;
        std::set<std::string> seen;
        for (const NodeView& c : linearized_) {
            for (const NodeView& member : c.list("nodes")) {
                if (member.is("FunctionDefinition") && member.str("kind") == "function") {
                    const std::string vis = member.str("visibility");
                    if (vis != "public" && vis != "external") continue;
                    std::string sig;
                    try {
                        sig = canonicalize_signature(member, *cu_);
                    } catch (const AbiTypeError&) {
                        continue; // not externally dispatchable
                    }
                    if (!seen.insert(sig).second) continue;
                    out.push_back({sig, abi::compute_selector(sig), member, false});
                } else if (member.is("VariableDeclaration")) {
                    auto sig = getter_signature(member, *cu_);
                    if (!sig) continue;
                    if (!seen.insert(*sig).second) continue;
                    out.push_back({*sig, abi::compute_selector(*sig), member, true});
                }
            }
        }
        return out;
    }

private:
    const CompilationUnit* cu_ = nullptr;
    NodeView contract_;
    std::vector<NodeView> linearized_;
    std::map<NodeId, NodeView> callables_;
    std::map<NodeId, std::string> member_contract_;
};

} // namespace pmsleuth::sol
