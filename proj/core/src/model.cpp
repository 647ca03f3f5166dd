#include "lgre/model.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

namespace lgre {

namespace {

bool is_element_name(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

bool is_relation_name(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
        return false;
    }
    if (s == "T" || s == "some" || s == "ex") {
        return false;
    }
    return is_element_name(s);
}

}  // namespace

RelationalModel::RelationalModel(std::vector<ElementId> domain, UnaryInterpretation unary,
                                 BinaryInterpretation binary) {
    if (domain.empty()) {
        throw ModelError("domain must be nonempty");
    }
    std::sort(domain.begin(), domain.end());
    for (std::size_t i = 0; i < domain.size(); ++i) {
        if (i > 0 && domain[i] == domain[i - 1]) {
            throw ModelError("duplicate element '" + domain[i] + "'");
        }
        if (!is_element_name(domain[i])) {
            throw ModelError("invalid element name '" + domain[i] + "'");
        }
        index_.emplace(domain[i], i);
    }
    names_ = std::move(domain);
    const std::size_t n = names_.size();

    for (const auto& [p, members] : unary) {
        if (!is_relation_name(p)) {
            throw ModelError("invalid relation name '" + p + "'");
        }
        if (binary.count(p) != 0) {
            throw ModelError("relation '" + p + "' declared both unary and binary");
        }
        std::vector<char> row(n, 0);
        for (const auto& v : members) {
            row[index_of(v)] = 1;
        }
        unary_names_.push_back(p);
        unary_.push_back(std::move(row));
    }
    for (const auto& [r, tuples] : binary) {
        if (!is_relation_name(r)) {
            throw ModelError("invalid relation name '" + r + "'");
        }
        std::vector<std::vector<Index>> succ(n), pred(n);
        for (const auto& [u, v] : tuples) {
            const Index iu = index_of(u);
            const Index iv = index_of(v);
            succ[iu].push_back(iv);
            pred[iv].push_back(iu);
        }
        for (auto& list : succ) std::sort(list.begin(), list.end());
        for (auto& list : pred) std::sort(list.begin(), list.end());
        binary_names_.push_back(r);
        succ_.push_back(std::move(succ));
        pred_.push_back(std::move(pred));
        edge_counts_.push_back(tuples.size());
    }
}

std::optional<Index> RelationalModel::find(const ElementId& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Index RelationalModel::index_of(const ElementId& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) {
        throw ModelError("unknown element '" + v + "'");
    }
    return it->second;
}

std::optional<std::size_t> RelationalModel::unary_index(const std::string& p) const {
    auto it = std::lower_bound(unary_names_.begin(), unary_names_.end(), p);
    if (it == unary_names_.end() || *it != p) return std::nullopt;
    return static_cast<std::size_t>(it - unary_names_.begin());
}

std::optional<std::size_t> RelationalModel::binary_index(const std::string& r) const {
    auto it = std::lower_bound(binary_names_.begin(), binary_names_.end(), r);
    if (it == binary_names_.end() || *it != r) return std::nullopt;
    return static_cast<std::size_t>(it - binary_names_.begin());
}

bool RelationalModel::has_edge(std::size_t r, Index u, Index v) const {
    const auto& list = succ_[r][u];
    return std::binary_search(list.begin(), list.end(), v);
}

std::size_t RelationalModel::unary_count(std::size_t p) const {
    return static_cast<std::size_t>(std::count(unary_[p].begin(), unary_[p].end(), 1));
}

UnaryInterpretation RelationalModel::unary_interpretation() const {
    UnaryInterpretation out;
    for (std::size_t p = 0; p < unary_names_.size(); ++p) {
        auto& members = out[unary_names_[p]];
        for (Index v = 0; v < size(); ++v) {
            if (holds(p, v)) members.insert(names_[v]);
        }
    }
    return out;
}

BinaryInterpretation RelationalModel::binary_interpretation() const {
    BinaryInterpretation out;
    for (std::size_t r = 0; r < binary_names_.size(); ++r) {
        auto& tuples = out[binary_names_[r]];
        for (Index u = 0; u < size(); ++u) {
            for (Index v : succ_[r][u]) tuples.emplace(names_[u], names_[v]);
        }
    }
    return out;
}

bool operator==(const RelationalModel& a, const RelationalModel& b) {
    return a.names_ == b.names_ && a.unary_names_ == b.unary_names_ &&
           a.binary_names_ == b.binary_names_ && a.unary_ == b.unary_ && a.succ_ == b.succ_;
}

ModelBuilder& ModelBuilder::element(ElementId v) {
    domain_.push_back(std::move(v));
    return *this;
}

ModelBuilder& ModelBuilder::declare_unary(const std::string& p) {
    unary_[p];
    return *this;
}

ModelBuilder& ModelBuilder::declare_binary(const std::string& r) {
    binary_[r];
    return *this;
}

ModelBuilder& ModelBuilder::unary(const std::string& p, ElementId v) {
    unary_[p].insert(std::move(v));
    return *this;
}

ModelBuilder& ModelBuilder::binary(const std::string& r, ElementId u, ElementId v) {
    binary_[r].emplace(std::move(u), std::move(v));
    return *this;
}

RelationalModel ModelBuilder::build() const {
    return RelationalModel(domain_, unary_, binary_);
}

std::size_t model_size(const RelationalModel& m) {
    std::size_t total = m.size();
    for (std::size_t p = 0; p < m.unary_names().size(); ++p) total += m.unary_count(p);
    for (std::size_t r = 0; r < m.binary_names().size(); ++r) total += m.edge_count(r);
    return total;
}

std::set<std::string> unary_profile(const RelationalModel& m, const ElementId& v) {
    const Index i = m.index_of(v);
    std::set<std::string> out;
    for (std::size_t p = 0; p < m.unary_names().size(); ++p) {
        if (m.holds(p, i)) out.insert(m.unary_names()[p]);
    }
    return out;
}

std::set<ElementId> successors(const RelationalModel& m, const std::string& r,
                               const ElementId& v) {
    const Index i = m.index_of(v);
    auto ri = m.binary_index(r);
    if (!ri) {
        throw ModelError("unknown binary relation '" + r + "'");
    }
    std::set<ElementId> out;
    for (Index j : m.successors(*ri, i)) out.insert(m.name(j));
    return out;
}

Unraveling unravel(const RelationalModel& m, const ElementId& root, std::size_t depth) {
    struct Pending {
        ElementId node;
        Index source;
        std::size_t depth;
    };
    ModelBuilder builder;
    for (const auto& p : m.unary_names()) builder.declare_unary(p);
    for (const auto& r : m.binary_names()) builder.declare_binary(r);

    std::map<ElementId, ElementId> origin;
    std::size_t counter = 0;
    auto make_node = [&](Index source) {
        ElementId node = m.name(source) + "_" + std::to_string(counter++);
        builder.element(node);
        for (std::size_t p = 0; p < m.unary_names().size(); ++p) {
            if (m.holds(p, source)) builder.unary(m.unary_names()[p], node);
        }
        origin.emplace(node, m.name(source));
        return node;
    };

    const Index start = m.index_of(root);
    ElementId tree_root = make_node(start);
    std::deque<Pending> queue{{tree_root, start, 0}};
    while (!queue.empty()) {
        Pending cur = queue.front();
        queue.pop_front();
        if (cur.depth == depth) continue;
        for (std::size_t r = 0; r < m.binary_names().size(); ++r) {
            for (Index next : m.successors(r, cur.source)) {
                ElementId child = make_node(next);
                builder.binary(m.binary_names()[r], cur.node, child);
                queue.push_back({child, next, cur.depth + 1});
            }
        }
    }
    return Unraveling{builder.build(), std::move(tree_root), std::move(origin)};
}

bool is_tree(const RelationalModel& m, const ElementId& root) {
    const Index start = m.index_of(root);
    std::vector<std::size_t> indegree(m.size(), 0);
    for (std::size_t r = 0; r < m.binary_names().size(); ++r) {
        for (Index u = 0; u < m.size(); ++u) {
            for (Index v : m.successors(r, u)) ++indegree[v];
        }
    }
    if (indegree[start] != 0) return false;
    for (Index v = 0; v < m.size(); ++v) {
        if (v != start && indegree[v] != 1) return false;
    }
    // With unit in-degrees everywhere but the root, reaching every node from
    // the root rules out cycles.
    std::vector<char> seen(m.size(), 0);
    std::vector<Index> stack{start};
    seen[start] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        Index u = stack.back();
        stack.pop_back();
        for (std::size_t r = 0; r < m.binary_names().size(); ++r) {
            for (Index v : m.successors(r, u)) {
                if (seen[v]) return false;
                seen[v] = 1;
                ++reached;
                stack.push_back(v);
            }
        }
    }
    return reached == m.size();
}

Quotient quotient(const RelationalModel& m, const std::vector<std::vector<ElementId>>& classes) {
    std::vector<std::optional<std::size_t>> class_index(m.size());
    std::vector<ElementId> class_names;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (classes[c].empty()) {
            throw ModelError("partition contains an empty class");
        }
        for (const auto& v : classes[c]) {
            const Index i = m.index_of(v);
            if (class_index[i]) {
                throw ModelError("element '" + v + "' occurs in more than one class");
            }
            class_index[i] = c;
        }
        class_names.push_back(*std::min_element(classes[c].begin(), classes[c].end()));
    }
    for (Index v = 0; v < m.size(); ++v) {
        if (!class_index[v]) {
            throw ModelError("element '" + m.name(v) + "' is not covered by the partition");
        }
    }
    ModelBuilder builder;
    for (const auto& name : class_names) builder.element(name);
    for (const auto& p : m.unary_names()) builder.declare_unary(p);
    for (const auto& r : m.binary_names()) builder.declare_binary(r);

    std::map<ElementId, ElementId> class_of;
    for (Index v = 0; v < m.size(); ++v) {
        const ElementId& cls = class_names[*class_index[v]];
        class_of.emplace(m.name(v), cls);
        for (std::size_t p = 0; p < m.unary_names().size(); ++p) {
            if (m.holds(p, v)) builder.unary(m.unary_names()[p], cls);
        }
        for (std::size_t r = 0; r < m.binary_names().size(); ++r) {
            for (Index w : m.successors(r, v)) {
                builder.binary(m.binary_names()[r], cls, class_names[*class_index[w]]);
            }
        }
    }
    return Quotient{builder.build(), std::move(class_of)};
}

RelationalModel linear_order_model(std::size_t n) {
    if (n == 0) {
        throw ModelError("linear order needs at least one element");
    }
    ModelBuilder builder;
    builder.declare_binary("r");
    for (std::size_t i = 1; i <= n; ++i) {
        builder.element(std::to_string(i));
        for (std::size_t j = i + 1; j <= n; ++j) {
            builder.binary("r", std::to_string(i), std::to_string(j));
        }
    }
    return builder.build();
}

RelationalModel reachable_submodel(const RelationalModel& m, const ElementId& root) {
    const Index start = m.index_of(root);
    std::vector<char> seen(m.size(), 0);
    std::vector<Index> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
        Index u = stack.back();
        stack.pop_back();
        for (std::size_t r = 0; r < m.binary_names().size(); ++r) {
            for (Index v : m.successors(r, u)) {
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            }
        }
    }
    ModelBuilder builder;
    for (const auto& p : m.unary_names()) builder.declare_unary(p);
    for (const auto& r : m.binary_names()) builder.declare_binary(r);
    for (Index v = 0; v < m.size(); ++v) {
        if (!seen[v]) continue;
        builder.element(m.name(v));
        for (std::size_t p = 0; p < m.unary_names().size(); ++p) {
            if (m.holds(p, v)) builder.unary(m.unary_names()[p], m.name(v));
        }
        for (std::size_t r = 0; r < m.binary_names().size(); ++r) {
            for (Index w : m.successors(r, v)) builder.binary(m.binary_names()[r], m.name(v), m.name(w));
        }
    }
    return builder.build();
}

}  // namespace lgre
