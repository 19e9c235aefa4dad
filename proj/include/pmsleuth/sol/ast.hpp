#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pmsleuth/errors.hpp"
#include "pmsleuth/json.hpp"

namespace pmsleuth::sol {

using NodeId = std::uint64_t;

struct SourceSpan {
    std::uint32_t start = 0;
    std::uint32_t length = 0;
    std::int32_t file_index = -1;

    std::uint32_t end() const { return start + length; }
    auto operator<=>(const SourceSpan&) const = default;
};

/// Parses the solc "start:length:fileIndex" src attribute.
inline SourceSpan parse_src(std::string_view src, std::string_view node_type) {
    SourceSpan span;
    int field = 0;
    std::uint64_t value = 0;
    bool has_digit = false, negative = false;
    auto commit = [&]() {
        if (field == 0) span.start = static_cast<std::uint32_t>(value);
        else if (field == 1) span.length = static_cast<std::uint32_t>(value);
        else span.file_index = negative ? -1 : static_cast<std::int32_t>(value);
    };
    for (char c : src) {
        if (c == ':') {
            if (!has_digit && !negative)
                throw AstSchemaError("malformed src \"" + std::string(src) + "\" on " +
                                     std::string(node_type));
            commit();
            ++field;
            value = 0;
            has_digit = false;
            negative = false;
        } else if (c == '-') {
            negative = true;
        } else if (c >= '0' && c <= '9') {
            value = value * 10 + static_cast<std::uint64_t>(c - '0');
            has_digit = true;
        } else {
            throw AstSchemaError("malformed src \"" + std::string(src) + "\" on " +
                                 std::string(node_type));
        }
    }
    if (field != 2 || !has_digit)
        throw AstSchemaError("malformed src \"" + std::string(src) + "\" on " +
                             std::string(node_type));
    commit();
    return span;
}

class AstUnit;

/// Lightweight handle to one AST node inside an AstUnit.
class NodeView {
public:
    NodeView() = default;
    NodeView(const AstUnit* unit, const Json* node) : unit_(unit), node_(node) {}

    bool valid() const { return node_ != nullptr; }
    const Json& raw() const { return *node_; }
    const AstUnit& unit() const { return *unit_; }

    NodeId id() const { return node_->at("id").get<NodeId>(); }
    std::string node_type() const { return node_->at("nodeType").get<std::string>(); }
    bool is(std::string_view type) const {
        return node_->at("nodeType").get_ref<const std::string&>() == type;
    }
    SourceSpan span() const {
        return parse_src(node_->at("src").get_ref<const std::string&>(), node_type());
    }

    bool has(const char* key) const { return node_->contains(key) && !(*node_)[key].is_null(); }

    std::string str(const char* key, std::string fallback = "") const {
        if (!has(key) || !(*node_)[key].is_string()) return fallback;
        return (*node_)[key].get<std::string>();
    }

    bool flag(const char* key) const {
        return has(key) && (*node_)[key].is_boolean() && (*node_)[key].get<bool>();
    }

    /// referencedDeclaration-style attribute; negative ids (builtins) map to nullopt.
    std::optional<NodeId> ref(const char* key = "referencedDeclaration") const {
        if (!has(key) || !(*node_)[key].is_number()) return std::nullopt;
        auto v = (*node_)[key].get<std::int64_t>();
        if (v < 0) return std::nullopt;
        return static_cast<NodeId>(v);
    }

    /// Object-valued child that is itself an AST node.
    std::optional<NodeView> child(const char* key) const {
        if (!has(key)) return std::nullopt;
        const Json& v = (*node_)[key];
        if (!v.is_object() || !v.contains("nodeType")) return std::nullopt;
        return NodeView(unit_, &v);
    }

    /// Array-valued child; null entries (e.g. skipped tuple components) are dropped.
    std::vector<NodeView> list(const char* key) const {
        std::vector<NodeView> out;
        if (!has(key)) return out;
        const Json& v = (*node_)[key];
        if (!v.is_array()) return out;
        for (const Json& item : v)
            if (item.is_object() && item.contains("nodeType"))
                out.emplace_back(unit_, &item);
        return out;
    }

    /// Array-valued child keeping null slots (needed for tuple declarations).
    std::vector<std::optional<NodeView>> list_with_nulls(const char* key) const {
        std::vector<std::optional<NodeView>> out;
        if (!has(key)) return out;
        const Json& v = (*node_)[key];
        if (!v.is_array()) return out;
        for (const Json& item : v) {
            if (item.is_object() && item.contains("nodeType"))
                out.emplace_back(NodeView(unit_, &item));
            else
                out.emplace_back(std::nullopt);
        }
        return out;
    }

    /// All direct child nodes in source order.
    std::vector<NodeView> children() const;

    bool operator==(const NodeView& other) const { return node_ == other.node_; }

private:
    const AstUnit* unit_ = nullptr;
    const Json* node_ = nullptr;
};

/// One parsed compiler AST file. Nodes are indexed by id; unknown node kinds
/// are retained opaquely. Immutable after construction.
class AstUnit {
public:
    /// Parses a standard Solidity compiler JSON AST (compact form) for one file.
    static AstUnit parse(std::string_view json_text, std::string path_hint = "") {
        AstUnit unit;
        Json doc = Json::parse(json_text, nullptr, false, true);
        if (doc.is_discarded()) {
            // Re-parse with exceptions to recover the byte offset.
            try {
                (void)Json::parse(json_text);
            } catch (const nlohmann::json::parse_error& e) {
                throw AstParseError(std::string("AST JSON parse error: ") + e.what(),
                                    e.byte);
            }
            throw AstParseError("AST JSON parse error", 0);
        }
        if (!doc.is_object() || !doc.contains("nodeType"))
            throw AstSchemaError("top-level AST value is not a node object");
        unit.doc_ = std::make_shared<const Json>(std::move(doc));
        unit.path_ = unit.doc_->contains("absolutePath") && (*unit.doc_)["absolutePath"].is_string()
                         ? (*unit.doc_)["absolutePath"].get<std::string>()
                         : std::move(path_hint);
        unit.index_node(*unit.doc_);
        return unit;
    }

    const std::string& path() const { return path_; }
    NodeView root() const { return NodeView(this, doc_.get()); }

    std::optional<NodeView> find(NodeId id) const {
        auto it = by_id_.find(id);
        if (it == by_id_.end()) return std::nullopt;
        return NodeView(this, it->second);
    }

    std::optional<NodeView> parent_of(NodeId id) const {
        auto it = parent_.find(id);
        if (it == parent_.end() || it->second == nullptr) return std::nullopt;
        return NodeView(this, it->second);
    }

    /// Every node in the unit, in document order.
    std::vector<NodeView> all_nodes() const {
        std::vector<NodeView> out;
        out.reserve(by_id_.size());
        collect(*doc_, out);
        return out;
    }

private:
    void collect(const Json& node, std::vector<NodeView>& out) const {
        out.emplace_back(this, &node);
        for (const auto& kid : direct_children(node))
            collect(*kid, out);
    }

    static std::vector<const Json*> direct_children(const Json& node) {
        std::vector<const Json*> kids;
        for (const auto& [key, value] : node.items()) {
            (void)key;
            if (value.is_object() && value.contains("nodeType")) {
                kids.push_back(&value);
            } else if (value.is_array()) {
                for (const Json& item : value)
                    if (item.is_object() && item.contains("nodeType"))
                        kids.push_back(&item);
            }
        }
        // Document key order is alphabetical in compiler output; source spans
        // give the syntactic order.
        std::stable_sort(kids.begin(), kids.end(), [](const Json* a, const Json* b) {
            auto sa = a->contains("src") && (*a)["src"].is_string()
                          ? parse_src((*a)["src"].get_ref<const std::string&>(), "*").start
                          : 0u;
            auto sb = b->contains("src") && (*b)["src"].is_string()
                          ? parse_src((*b)["src"].get_ref<const std::string&>(), "*").start
                          : 0u;
            return sa < sb;
        });
        return kids;
    }

    void index_node(const Json& node, const Json* parent = nullptr) {
        const std::string node_type = node.at("nodeType").get<std::string>();
        if (!node.contains("id") || !node["id"].is_number_unsigned())
            throw AstSchemaError("AST node of kind " + node_type + " is missing an id");
        if (!node.contains("src") || !node["src"].is_string())
            throw AstSchemaError("AST node of kind " + node_type + " is missing src");
        NodeId id = node["id"].get<NodeId>();
        (void)parse_src(node["src"].get_ref<const std::string&>(), node_type);
        if (by_id_.count(id))
            throw AstSchemaError("duplicate AST node id " + std::to_string(id));
        by_id_[id] = &node;
        parent_[id] = parent;
        for (const Json* kid : direct_children(node))
            index_node(*kid, &node);
    }

    std::shared_ptr<const Json> doc_;
    std::string path_;
    std::unordered_map<NodeId, const Json*> by_id_;
    std::unordered_map<NodeId, const Json*> parent_;

    friend class NodeView;
};

inline std::vector<NodeView> NodeView::children() const {
    std::vector<NodeView> out;
    for (const Json* kid : AstUnit::direct_children(*node_))
        out.emplace_back(unit_, kid);
    return out;
}

/// Parses one compiler-emitted JSON AST file.
inline AstUnit load_ast(std::string_view json_text, std::string path_hint = "") {
    return AstUnit::parse(json_text, std::move(path_hint));
}

/// A set of AST units compiled together (shared id space) plus the source
/// texts they refer to, for span-to-text extraction.
class CompilationUnit {
public:
    CompilationUnit() = default;
    CompilationUnit(std::vector<AstUnit> units, std::map<std::string, std::string> sources)
        : units_(std::move(units)), sources_(std::move(sources)) {
        for (std::size_t i = 0; i < units_.size(); ++i) {
            for (const NodeView& n : units_[i].all_nodes()) {
                if (unit_of_.count(n.id()))
                    throw AstSchemaError("duplicate node id " + std::to_string(n.id()) +
                                         " across AST units; units must come from one "
                                         "compiler run");
                unit_of_[n.id()] = i;
            }
            auto src = sources_.find(units_[i].path());
            if (src != sources_.end()) {
                for (const NodeView& n : units_[i].all_nodes()) {
                    SourceSpan s = n.span();
                    if (s.end() > src->second.size())
                        throw AstSchemaError("node " + std::to_string(n.id()) +
                                             " span exceeds file bounds in " +
                                             units_[i].path());
                }
            }
        }
    }

    const std::vector<AstUnit>& units() const { return units_; }
    const std::map<std::string, std::string>& sources() const { return sources_; }

    std::optional<NodeView> node(NodeId id) const {
        auto it = unit_of_.find(id);
        if (it == unit_of_.end()) return std::nullopt;
        return units_[it->second].find(id);
    }

    const AstUnit& unit_of(const NodeView& n) const { return n.unit(); }

    /// Source text behind a node's span; empty when the file text is unknown.
    std::string text_of(const NodeView& n) const {
        auto src = sources_.find(n.unit().path());
        if (src == sources_.end()) return "";
        SourceSpan s = n.span();
        if (s.end() > src->second.size()) return "";
        return src->second.substr(s.start, s.length);
    }

    std::string text_at(const std::string& path, SourceSpan s) const {
        auto src = sources_.find(path);
        if (src == sources_.end() || s.end() > src->second.size()) return "";
        return src->second.substr(s.start, s.length);
    }

private:
    std::vector<AstUnit> units_;
    std::map<std::string, std::string> sources_;
    std::unordered_map<NodeId, std::size_t> unit_of_;
};

} // namespace pmsleuth::sol
