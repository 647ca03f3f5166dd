#include "lgre/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

namespace lgre {

const std::set<Property>& properties(Language l) {
    using P = Property;
    static const std::set<Property> fol{P::atom_l, P::atom_r, P::zig, P::zag, P::inj_l, P::inj_r};
    static const std::set<Property> epfol{P::atom_l, P::zig, P::inj_l};
    static const std::set<Property> alc{P::atom_l, P::atom_r, P::zig, P::zag};
    static const std::set<Property> el{P::atom_l, P::zig};
    static const std::set<Property> elan{P::atom_l, P::atom_r, P::zig};
    switch (l) {
        case Language::fol: return fol;
        case Language::epfol: return epfol;
        case Language::alc: return alc;
        case Language::el: return el;
        case Language::elan: return elan;
    }
    throw std::logic_error("unreachable");
}

std::string to_string(Language l) {
    switch (l) {
        case Language::fol: return "FOL";
        case Language::epfol: return "EPFOL";
        case Language::alc: return "ALC";
        case Language::el: return "EL";
        case Language::elan: return "ELAN";
    }
    throw std::logic_error("unreachable");
}

std::string to_string(Property p) {
    switch (p) {
        case Property::atom_l: return "atom-L";
        case Property::atom_r: return "atom-R";
        case Property::zig: return "zig";
        case Property::zag: return "zag";
        case Property::inj_l: return "inj-L";
        case Property::inj_r: return "inj-R";
    }
    throw std::logic_error("unreachable");
}

Language parse_language(const std::string& tag) {
    std::string upper;
    for (char c : tag) upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (upper == "FOL") return Language::fol;
    if (upper == "EPFOL") return Language::epfol;
    if (upper == "ALC") return Language::alc;
    if (upper == "EL") return Language::el;
    if (upper == "ELAN") return Language::elan;
    throw std::invalid_argument("unknown logic '" + tag + "' (expected FOL, EPFOL, ALC, EL or ELAN)");
}

// ---------------------------------------------------------------------------
// Nodes and interning
// ---------------------------------------------------------------------------

class DlNode {
public:
    DlKind kind;
    std::string name;
    std::shared_ptr<const DlNode> left;
    std::shared_ptr<const DlNode> right;
    std::uint64_t serial;
};

class FoNode {
public:
    FoKind kind;
    std::string name;
    std::vector<int> variables;
    std::shared_ptr<const FoNode> left;
    std::shared_ptr<const FoNode> right;
    std::uint64_t serial;
};

namespace {

inline void hash_combine(std::size_t& seed, std::size_t value) {
    seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

struct NodeKey {
    int kind;
    std::string name;
    std::vector<int> variables;
    const void* left;
    const void* right;

    bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
    std::size_t operator()(const NodeKey& k) const {
        std::size_t seed = std::hash<int>{}(k.kind);
        hash_combine(seed, std::hash<std::string>{}(k.name));
        for (int v : k.variables) hash_combine(seed, std::hash<int>{}(v));
        hash_combine(seed, std::hash<const void*>{}(k.left));
        hash_combine(seed, std::hash<const void*>{}(k.right));
        return seed;
    }
};

// Weak table: a node is shared while alive and its entry is dropped by the
// deleter. Insertion and removal are serialized by one mutex.
template <class Node>
class Interner {
public:
    template <class Make>
    std::shared_ptr<const Node> intern(NodeKey key, Make make) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = table_.find(key);
        if (it != table_.end()) {
            if (auto live = it->second.lock()) return live;
        }
        Node* raw = make(next_serial_++);
        std::shared_ptr<const Node> node(raw, [this, key](const Node* n) { release(key, n); });
        table_[std::move(key)] = node;
        return node;
    }

private:
    void release(const NodeKey& key, const Node* node) {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = table_.find(key);
            if (it != table_.end() && it->second.expired()) table_.erase(it);
        }
        // Children are released outside the lock; their deleters re-enter.
        delete node;
    }

    std::mutex mutex_;
    std::unordered_map<NodeKey, std::weak_ptr<const Node>, NodeKeyHash> table_;
    std::uint64_t next_serial_ = 0;
};

Interner<DlNode>& dl_table() {
    static auto* table = new Interner<DlNode>();
    return *table;
}

Interner<FoNode>& fo_table() {
    static auto* table = new Interner<FoNode>();
    return *table;
}

}  // namespace

struct DlInterner {
    static DlFormula make(DlKind kind, std::string name, const DlNode* l, const DlNode* r,
                          std::shared_ptr<const DlNode> left, std::shared_ptr<const DlNode> right) {
        NodeKey key{static_cast<int>(kind), name, {}, l, r};
        auto node = dl_table().intern(std::move(key), [&](std::uint64_t serial) {
            return new DlNode{kind, name, left, right, serial};
        });
        return DlFormula(std::move(node));
    }
};

struct FoInterner {
    static FoFormula make(FoKind kind, std::string name, std::vector<int> variables,
                          std::shared_ptr<const FoNode> left, std::shared_ptr<const FoNode> right) {
        NodeKey key{static_cast<int>(kind), name, variables, left.get(), right.get()};
        auto node = fo_table().intern(std::move(key), [&](std::uint64_t serial) {
            return new FoNode{kind, name, variables, left, right, serial};
        });
        return FoFormula(std::move(node));
    }
};

DlFormula DlFormula::top() { return DlInterner::make(DlKind::top, "", nullptr, nullptr, {}, {}); }

DlFormula DlFormula::atom(const std::string& p) {
    return DlInterner::make(DlKind::atom, p, nullptr, nullptr, {}, {});
}

DlFormula DlFormula::negation(const DlFormula& child) {
    return DlInterner::make(DlKind::negation, "", child.node(), nullptr, child.node_, {});
}

DlFormula DlFormula::conjunction(const DlFormula& left, const DlFormula& right) {
    return DlInterner::make(DlKind::conjunction, "", left.node(), right.node(), left.node_,
                            right.node_);
}

DlFormula DlFormula::exists(const std::string& r, const DlFormula& child) {
    return DlInterner::make(DlKind::exists, r, child.node(), nullptr, child.node_, {});
}

DlKind DlFormula::kind() const { return node_->kind; }
const std::string& DlFormula::name() const { return node_->name; }
std::uint64_t DlFormula::serial() const { return node_->serial; }

DlFormula DlFormula::left() const {
    if (!node_->left) throw std::logic_error("formula node has no child");
    return DlFormula(node_->left);
}

DlFormula DlFormula::right() const {
    if (!node_->right) throw std::logic_error("formula node has no right child");
    return DlFormula(node_->right);
}

DlFormula dl_conjunction(const std::vector<DlFormula>& conjuncts) {
    if (conjuncts.empty()) return DlFormula::top();
    DlFormula out = conjuncts.front();
    for (std::size_t i = 1; i < conjuncts.size(); ++i) out = DlFormula::conjunction(out, conjuncts[i]);
    return out;
}

FoFormula FoFormula::top() { return FoInterner::make(FoKind::top, "", {}, {}, {}); }

FoFormula FoFormula::inequality(int i, int j) {
    if (i < 1 || j < 1) throw std::invalid_argument("variable indices start at 1");
    return FoInterner::make(FoKind::inequality, "", {i, j}, {}, {});
}

FoFormula FoFormula::relation(const std::string& r, std::vector<int> variables) {
    if (variables.empty()) throw std::invalid_argument("relation atom needs arguments");
    for (int v : variables) {
        if (v < 1) throw std::invalid_argument("variable indices start at 1");
    }
    return FoInterner::make(FoKind::relation, r, std::move(variables), {}, {});
}

FoFormula FoFormula::negation(const FoFormula& child) {
    return FoInterner::make(FoKind::negation, "", {}, child.node_, {});
}

FoFormula FoFormula::conjunction(const FoFormula& left, const FoFormula& right) {
    return FoInterner::make(FoKind::conjunction, "", {}, left.node_, right.node_);
}

FoFormula FoFormula::exists(int variable, const FoFormula& child) {
    if (variable < 1) throw std::invalid_argument("variable indices start at 1");
    return FoInterner::make(FoKind::exists, "", {variable}, child.node_, {});
}

FoKind FoFormula::kind() const { return node_->kind; }
const std::string& FoFormula::name() const { return node_->name; }
const std::vector<int>& FoFormula::variables() const { return node_->variables; }
std::uint64_t FoFormula::serial() const { return node_->serial; }

FoFormula FoFormula::left() const {
    if (!node_->left) throw std::logic_error("formula node has no child");
    return FoFormula(node_->left);
}

FoFormula FoFormula::right() const {
    if (!node_->right) throw std::logic_error("formula node has no right child");
    return FoFormula(node_->right);
}

FoFormula fo_conjunction(const std::vector<FoFormula>& conjuncts) {
    if (conjuncts.empty()) return FoFormula::top();
    FoFormula out = conjuncts.front();
    for (std::size_t i = 1; i < conjuncts.size(); ++i) out = FoFormula::conjunction(out, conjuncts[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Structural queries
// ---------------------------------------------------------------------------

namespace {

bool has_child(DlKind k) { return k == DlKind::negation || k == DlKind::conjunction || k == DlKind::exists; }
bool has_child(FoKind k) { return k == FoKind::negation || k == FoKind::conjunction || k == FoKind::exists; }
bool has_right(DlKind k) { return k == DlKind::conjunction; }
bool has_right(FoKind k) { return k == FoKind::conjunction; }

template <class F>
std::size_t count_dag(const F& phi) {
    std::unordered_set<const void*> seen;
    std::vector<F> stack{phi};
    while (!stack.empty()) {
        F cur = stack.back();
        stack.pop_back();
        if (!seen.insert(cur.node()).second) continue;
        if (has_child(cur.kind())) stack.push_back(cur.left());
        if (has_right(cur.kind())) stack.push_back(cur.right());
    }
    return seen.size();
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    return a > max - b ? max : a + b;
}

template <class F>
std::uint64_t count_tree(const F& phi, std::unordered_map<const void*, std::uint64_t>& memo) {
    auto it = memo.find(phi.node());
    if (it != memo.end()) return it->second;
    std::uint64_t total = 1;
    if (has_child(phi.kind())) total = saturating_add(total, count_tree(phi.left(), memo));
    if (has_right(phi.kind())) total = saturating_add(total, count_tree(phi.right(), memo));
    memo.emplace(phi.node(), total);
    return total;
}

bool dl_negation_free(const DlFormula& phi, bool allow_atomic,
                      std::unordered_map<const void*, bool>& memo) {
    auto it = memo.find(phi.node());
    if (it != memo.end()) return it->second;
    bool ok = true;
    switch (phi.kind()) {
        case DlKind::top:
        case DlKind::atom:
            break;
        case DlKind::negation:
            ok = allow_atomic && phi.left().kind() == DlKind::atom;
            break;
        case DlKind::conjunction:
            ok = dl_negation_free(phi.left(), allow_atomic, memo) &&
                 dl_negation_free(phi.right(), allow_atomic, memo);
            break;
        case DlKind::exists:
            ok = dl_negation_free(phi.left(), allow_atomic, memo);
            break;
    }
    memo.emplace(phi.node(), ok);
    return ok;
}

bool fo_negation_free(const FoFormula& phi, std::unordered_map<const void*, bool>& memo) {
    auto it = memo.find(phi.node());
    if (it != memo.end()) return it->second;
    bool ok = true;
    switch (phi.kind()) {
        case FoKind::negation:
            ok = false;
            break;
        case FoKind::conjunction:
            ok = fo_negation_free(phi.left(), memo) && fo_negation_free(phi.right(), memo);
            break;
        case FoKind::exists:
            ok = fo_negation_free(phi.left(), memo);
            break;
        default:
            break;
    }
    memo.emplace(phi.node(), ok);
    return ok;
}

}  // namespace

bool in_fragment(const DlFormula& phi, Language l) {
    std::unordered_map<const void*, bool> memo;
    switch (l) {
        case Language::el:
        case Language::epfol:
            return dl_negation_free(phi, false, memo);
        case Language::elan:
            return dl_negation_free(phi, true, memo);
        case Language::alc:
        case Language::fol:
            return true;
    }
    throw std::logic_error("unreachable");
}

bool in_fragment(const FoFormula& phi, Language l) {
    std::unordered_map<const void*, bool> memo;
    switch (l) {
        case Language::epfol:
            return fo_negation_free(phi, memo);
        case Language::fol:
            return true;
        default:
            return false;
    }
}

bool in_fragment(const Formula& phi, Language l) {
    return std::visit([l](const auto& f) { return in_fragment(f, l); }, phi);
}

std::size_t dag_size(const DlFormula& phi) { return count_dag(phi); }
std::size_t dag_size(const FoFormula& phi) { return count_dag(phi); }
std::size_t dag_size(const Formula& phi) {
    return std::visit([](const auto& f) { return dag_size(f); }, phi);
}

std::uint64_t tree_size(const DlFormula& phi) {
    std::unordered_map<const void*, std::uint64_t> memo;
    return count_tree(phi, memo);
}

std::uint64_t tree_size(const FoFormula& phi) {
    std::unordered_map<const void*, std::uint64_t> memo;
    return count_tree(phi, memo);
}

std::uint64_t tree_size(const Formula& phi) {
    return std::visit([](const auto& f) { return tree_size(f); }, phi);
}

namespace {

void collect_free(const FoFormula& phi, std::set<int>& bound, std::set<int>& out) {
    switch (phi.kind()) {
        case FoKind::top:
            return;
        case FoKind::inequality:
        case FoKind::relation:
            for (int v : phi.variables()) {
                if (bound.count(v) == 0) out.insert(v);
            }
            return;
        case FoKind::negation:
            collect_free(phi.left(), bound, out);
            return;
        case FoKind::conjunction:
            collect_free(phi.left(), bound, out);
            collect_free(phi.right(), bound, out);
            return;
        case FoKind::exists: {
            const int v = phi.variables().front();
            const bool fresh = bound.insert(v).second;
            collect_free(phi.left(), bound, out);
            if (fresh) bound.erase(v);
            return;
        }
    }
}

bool standard_binders(const FoFormula& phi, const std::set<int>& free, std::set<int>& seen,
                      int& last) {
    switch (phi.kind()) {
        case FoKind::negation:
            return standard_binders(phi.left(), free, seen, last);
        case FoKind::conjunction:
            return standard_binders(phi.left(), free, seen, last) &&
                   standard_binders(phi.right(), free, seen, last);
        case FoKind::exists: {
            const int v = phi.variables().front();
            if (free.count(v) != 0 || !seen.insert(v).second || v <= last) return false;
            last = v;
            return standard_binders(phi.left(), free, seen, last);
        }
        default:
            return true;
    }
}

FoFormula translate(const DlFormula& phi, int var, int& next) {
    switch (phi.kind()) {
        case DlKind::top:
            return FoFormula::top();
        case DlKind::atom:
            return FoFormula::relation(phi.name(), {var});
        case DlKind::negation:
            return FoFormula::negation(translate(phi.left(), var, next));
        case DlKind::conjunction: {
            FoFormula left = translate(phi.left(), var, next);
            FoFormula right = translate(phi.right(), var, next);
            return FoFormula::conjunction(left, right);
        }
        case DlKind::exists: {
            const int bound = next++;
            FoFormula body = translate(phi.left(), bound, next);
            return FoFormula::exists(
                bound, FoFormula::conjunction(FoFormula::relation(phi.name(), {var, bound}), body));
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

std::set<int> free_variables(const FoFormula& phi) {
    std::set<int> bound, out;
    collect_free(phi, bound, out);
    return out;
}

bool has_standard_variables(const FoFormula& phi) {
    const std::set<int> free = free_variables(phi);
    std::set<int> seen;
    int last = free.empty() ? 0 : *free.rbegin();
    return standard_binders(phi, free, seen, last);
}

FoFormula st_translation(const DlFormula& phi, int first) {
    if (first < 1) throw std::invalid_argument("variable indices start at 1");
    int next = first + 1;
    return translate(phi, first, next);
}

}  // namespace lgre
