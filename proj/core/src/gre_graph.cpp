#include "lgre/gre_graph.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace lgre {

bool DescriptionGraph::has_unary(std::size_t node, std::size_t p) const {
    return std::find(unary.begin(), unary.end(), Unary{node, p}) != unary.end();
}

bool DescriptionGraph::has_edge(std::size_t r, std::size_t from, std::size_t to) const {
    return std::find(edges.begin(), edges.end(), Edge{r, from, to}) != edges.end();
}

std::optional<std::size_t> DescriptionGraph::node_of(Index g_element) const {
    for (std::size_t i = 0; i < image.size(); ++i) {
        if (image[i] == g_element) return i;
    }
    return std::nullopt;
}

std::string DescriptionGraph::node_name(const RelationalModel& g, std::size_t node) const {
    if (language == Language::epfol) return g.name(image.at(node));
    return "n" + std::to_string(node);
}

RelationalModel DescriptionGraph::model(const RelationalModel& g) const {
    ModelBuilder b;
    for (std::size_t i = 0; i < image.size(); ++i) b.element(node_name(g, i));
    for (const auto& p : g.unary_names()) b.declare_unary(p);
    for (const auto& r : g.binary_names()) b.declare_binary(r);
    for (const auto& u : unary) b.unary(g.unary_names()[u.p], node_name(g, u.node));
    for (const auto& e : edges) {
        b.binary(g.binary_names()[e.r], node_name(g, e.from), node_name(g, e.to));
    }
    return b.build();
}

std::map<ElementId, ElementId> DescriptionGraph::mapping(const RelationalModel& g) const {
    std::map<ElementId, ElementId> out;
    for (std::size_t i = 0; i < image.size(); ++i) out.emplace(node_name(g, i), g.name(image[i]));
    return out;
}

std::string DescriptionGraph::describe(const RelationalModel& g) const {
    std::ostringstream out;
    bool first = true;
    auto sep = [&] {
        if (!first) out << ' ';
        first = false;
    };
    for (const auto& u : unary) {
        sep();
        out << g.unary_names()[u.p] << '(' << node_name(g, u.node) << ')';
    }
    for (const auto& e : edges) {
        sep();
        out << g.binary_names()[e.r] << '(' << node_name(g, e.from) << ',' << node_name(g, e.to)
            << ')';
    }
    if (first) out << node_name(g, 0);
    return out.str();
}

double atom_count(const DescriptionGraph& h) {
    return static_cast<double>(h.node_count() + h.fact_count());
}

DescriptionGraph initial_graph(const RelationalModel& g, const ElementId& target, Language l) {
    if (l != Language::epfol && l != Language::el) {
        throw std::invalid_argument("graph-based GRE supports EPFOL and EL, not " + to_string(l));
    }
    DescriptionGraph h;
    h.language = l;
    h.image.push_back(g.index_of(target));
    return h;
}

std::set<ElementId> distractors(const RelationalModel& g, const ElementId& target,
                                const DescriptionGraph& h, const SimulationOptions& options) {
    const RelationalModel hm = h.model(g);
    const ElementId root = h.node_name(g, 0);
    std::set<ElementId> out;
    if (h.language == Language::el) {
        const SimulationRelation rel = maximal_simulation(hm, g, Language::el, options);
        for (const auto& [u, v] : rel.pairs) {
            if (u == root && v != target) out.insert(v);
        }
        return out;
    }
    for (const auto& n : g.domain()) {
        if (n != target && similarity_query(hm, root, g, n, Language::epfol, options)) {
            out.insert(n);
        }
    }
    return out;
}

namespace {

void add_unary_extensions(const RelationalModel& g, const DescriptionGraph& h, std::size_t node,
                          std::vector<DescriptionGraph>& out) {
    for (std::size_t p = 0; p < g.unary_names().size(); ++p) {
        if (g.holds(p, h.image[node]) && !h.has_unary(node, p)) {
            DescriptionGraph next = h;
            next.unary.push_back({node, p});
            out.push_back(std::move(next));
        }
    }
}

std::vector<std::size_t> depths(const DescriptionGraph& h) {
    std::vector<std::size_t> depth(h.node_count(), 0);
    // Children are always created after their parent.
    for (const auto& e : h.edges) depth[e.to] = depth[e.from] + 1;
    return depth;
}

}  // namespace

std::vector<DescriptionGraph> extend_epfol(const RelationalModel& g, const DescriptionGraph& h) {
    std::vector<DescriptionGraph> out;
    for (std::size_t node = 0; node < h.node_count(); ++node) {
        add_unary_extensions(g, h, node, out);
        for (std::size_t r = 0; r < g.binary_names().size(); ++r) {
            for (Index w : g.successors(r, h.image[node])) {
                const auto target = h.node_of(w);
                if (target && h.has_edge(r, node, *target)) continue;
                DescriptionGraph next = h;
                std::size_t to;
                if (target) {
                    to = *target;
                } else {
                    to = next.image.size();
                    next.image.push_back(w);
                }
                next.edges.push_back({r, node, to});
                out.push_back(std::move(next));
            }
        }
    }
    return out;
}

std::vector<DescriptionGraph> extend_el(const RelationalModel& g, const DescriptionGraph& h,
                                        std::size_t max_depth) {
    std::vector<DescriptionGraph> out;
    const auto depth = depths(h);
    std::vector<std::size_t> order(h.node_count());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return depth[a] < depth[b]; });
    for (std::size_t node : order) {
        add_unary_extensions(g, h, node, out);
        if (depth[node] >= max_depth) continue;
        for (std::size_t r = 0; r < g.binary_names().size(); ++r) {
            for (Index x : g.successors(r, h.image[node])) {
                const bool present = std::any_of(h.edges.begin(), h.edges.end(), [&](const auto& e) {
                    return e.r == r && e.from == node && h.image[e.to] == x;
                });
                if (present) continue;
                DescriptionGraph next = h;
                next.edges.push_back({r, node, next.image.size()});
                next.image.push_back(x);
                out.push_back(std::move(next));
            }
        }
    }
    return out;
}

FoFormula build_formula_epfol(const RelationalModel& g, const DescriptionGraph& h) {
    std::vector<FoFormula> conjuncts;
    const int n = static_cast<int>(h.node_count());
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) conjuncts.push_back(FoFormula::inequality(i, j));
    }
    for (const auto& e : h.edges) {
        conjuncts.push_back(FoFormula::relation(
            g.binary_names()[e.r],
            {static_cast<int>(e.from) + 1, static_cast<int>(e.to) + 1}));
    }
    std::vector<DescriptionGraph::Unary> unary = h.unary;
    std::stable_sort(unary.begin(), unary.end(), [](const auto& a, const auto& b) {
        return a.node != b.node ? a.node < b.node : a.p < b.p;
    });
    for (const auto& u : unary) {
        conjuncts.push_back(
            FoFormula::relation(g.unary_names()[u.p], {static_cast<int>(u.node) + 1}));
    }
    FoFormula body = fo_conjunction(conjuncts);
    for (int i = n; i >= 2; --i) body = FoFormula::exists(i, body);
    return body;
}

namespace {

bool tree_rooted_at_zero(const DescriptionGraph& h) {
    std::vector<std::size_t> indegree(h.node_count(), 0);
    for (const auto& e : h.edges) {
        if (e.from >= h.node_count() || e.to >= h.node_count()) return false;
        ++indegree[e.to];
    }
    if (indegree[0] != 0) return false;
    for (std::size_t i = 1; i < h.node_count(); ++i) {
        if (indegree[i] != 1) return false;
    }
    std::vector<char> seen(h.node_count(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        const std::size_t x = stack.back();
        stack.pop_back();
        for (const auto& e : h.edges) {
            if (e.from == x && !seen[e.to]) {
                seen[e.to] = 1;
                stack.push_back(e.to);
            }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

DlFormula el_node(const RelationalModel& g, const DescriptionGraph& h, std::size_t node) {
    std::vector<std::size_t> props;
    for (const auto& u : h.unary) {
        if (u.node == node) props.push_back(u.p);
    }
    std::sort(props.begin(), props.end());
    std::vector<DlFormula> conjuncts;
    for (std::size_t p : props) conjuncts.push_back(DlFormula::atom(g.unary_names()[p]));
    for (const auto& e : h.edges) {
        if (e.from == node) {
            conjuncts.push_back(DlFormula::exists(g.binary_names()[e.r], el_node(g, h, e.to)));
        }
    }
    return dl_conjunction(conjuncts);
}

}  // namespace

DlFormula build_formula_el(const RelationalModel& g, const DescriptionGraph& h) {
    if (!tree_rooted_at_zero(h)) {
        throw std::invalid_argument("EL realization needs a tree rooted at v_H");
    }
    return el_node(g, h, 0);
}

namespace {

// Depth-bounded EL simulation by Jacobi rounds: after d rounds, v is kept
// in row u iff v satisfies every EL formula of depth <= d true at u.
std::vector<std::vector<char>> bounded_el_similarity(const RelationalModel& g, std::size_t d) {
    const std::size_t n = g.size();
    std::vector<std::vector<char>> rel(n, std::vector<char>(n, 1));
    for (Index u = 0; u < n; ++u) {
        for (Index v = 0; v < n; ++v) {
            for (std::size_t p = 0; p < g.unary_names().size(); ++p) {
                if (g.holds(p, u) && !g.holds(p, v)) rel[u][v] = 0;
            }
        }
    }
    for (std::size_t round = 0; round < d; ++round) {
        auto next = rel;
        bool changed = false;
        for (Index u = 0; u < n; ++u) {
            for (Index v = 0; v < n; ++v) {
                if (!rel[u][v]) continue;
                for (std::size_t r = 0; r < g.binary_names().size() && next[u][v]; ++r) {
                    for (Index u2 : g.successors(r, u)) {
                        const auto& succ = g.successors(r, v);
                        if (std::none_of(succ.begin(), succ.end(),
                                         [&](Index v2) { return rel[u2][v2] != 0; })) {
                            next[u][v] = 0;
                            changed = true;
                            break;
                        }
                    }
                }
            }
        }
        rel = std::move(next);
        if (!changed) break;
    }
    return rel;
}

DescriptionGraph reachable_graph(const RelationalModel& g, Index target) {
    DescriptionGraph h;
    h.language = Language::epfol;
    h.image.push_back(target);
    for (std::size_t i = 0; i < h.image.size(); ++i) {
        for (std::size_t r = 0; r < g.binary_names().size(); ++r) {
            for (Index w : g.successors(r, h.image[i])) {
                if (!h.node_of(w)) h.image.push_back(w);
            }
        }
    }
    for (std::size_t i = 0; i < h.image.size(); ++i) {
        for (std::size_t p = 0; p < g.unary_names().size(); ++p) {
            if (g.holds(p, h.image[i])) h.unary.push_back({i, p});
        }
        for (std::size_t r = 0; r < g.binary_names().size(); ++r) {
            for (Index w : g.successors(r, h.image[i])) h.edges.push_back({r, i, *h.node_of(w)});
        }
    }
    return h;
}

std::string canonical_tree(const DescriptionGraph& h, std::size_t node) {
    std::vector<std::size_t> props;
    for (const auto& u : h.unary) {
        if (u.node == node) props.push_back(u.p);
    }
    std::sort(props.begin(), props.end());
    std::vector<std::string> children;
    for (const auto& e : h.edges) {
        if (e.from == node) children.push_back(std::to_string(e.r) + canonical_tree(h, e.to));
    }
    std::sort(children.begin(), children.end());
    std::string out = "(" + std::to_string(h.image[node]) + ":";
    for (std::size_t p : props) out += std::to_string(p) + ",";
    for (const auto& c : children) out += c;
    return out + ")";
}

std::string state_key(const DescriptionGraph& h) {
    if (h.language == Language::el) return canonical_tree(h, 0);
    std::vector<std::pair<Index, std::size_t>> unary;
    for (const auto& u : h.unary) unary.emplace_back(h.image[u.node], u.p);
    std::vector<std::tuple<std::size_t, Index, Index>> edges;
    for (const auto& e : h.edges) edges.emplace_back(e.r, h.image[e.from], h.image[e.to]);
    std::sort(unary.begin(), unary.end());
    std::sort(edges.begin(), edges.end());
    std::string out;
    for (const auto& [v, p] : unary) out += std::to_string(v) + "." + std::to_string(p) + ";";
    out += "|";
    for (const auto& [r, a, b] : edges) {
        out += std::to_string(r) + "." + std::to_string(a) + "." + std::to_string(b) + ";";
    }
    return out;
}

std::string show_set(const std::set<ElementId>& s) {
    std::string out = "{";
    for (const auto& v : s) out += (out.size() > 1 ? ", " : "") + v;
    return out + "}";
}

// Algorithm 4 run under an increasing cost bound: each pass explores only
// graphs whose cost is within the bound, so the first pass that finds a
// description finds a cheapest one, and the search terminates on cyclic
// scenes whatever the cost function.
class Search {
public:
    Search(const RelationalModel& g, const ElementId& target, Language l,
           const GraphOptions& options)
        : g_(g), target_(target), l_(l), options_(options),
          max_depth_(g.size() * g.size()) {}

    std::optional<DescriptionGraph> run() {
        const DescriptionGraph start = initial_graph(g_, target_, l_);
        double bound = options_.cost(start);
        for (;;) {
            if (options_.trace) *options_.trace << "bound " << bound << '\n';
            best_.reset();
            visited_.clear();
            next_bound_ = std::numeric_limits<double>::infinity();
            find(start, 0, bound);
            if (best_) return best_;
            if (next_bound_ == std::numeric_limits<double>::infinity()) return std::nullopt;
            bound = next_bound_;
        }
    }

private:
    void find(const DescriptionGraph& h, std::size_t level, double bound) {
        const double cost = options_.cost(h);
        const std::string indent(2 * level, ' ');
        if (cost > bound) {
            next_bound_ = std::min(next_bound_, cost);
            return;
        }
        if (best_ && best_cost_ <= cost) {
            if (options_.trace) {
                *options_.trace << indent << "cost " << cost << " [" << h.describe(g_)
                                << "] pruned\n";
            }
            return;
        }
        if (!visited_.insert(state_key(h)).second) return;
        const auto found = distractors(g_, target_, h, options_.simulation);
        if (options_.trace) {
            *options_.trace << indent << "cost " << cost << " [" << h.describe(g_)
                            << "] distractors " << show_set(found) << '\n';
        }
        if (found.empty()) {
            // Strict improvement: the prune above already rejects ties, so
            // the first graph found at the lowest cost is kept.
            best_ = h;
            best_cost_ = cost;
            return;
        }
        const auto next = l_ == Language::el ? extend_el(g_, h, max_depth_) : extend_epfol(g_, h);
        for (const auto& h2 : next) find(h2, level + 1, bound);
    }

    const RelationalModel& g_;
    const ElementId& target_;
    Language l_;
    const GraphOptions& options_;
    std::size_t max_depth_;
    std::optional<DescriptionGraph> best_;
    double best_cost_ = 0;
    double next_bound_ = 0;
    std::unordered_set<std::string> visited_;
};

// Cheapest EL tree under atom count, by dynamic programming. A tree rooted
// at a node mapped to x has cost 1 + its unary facts + (1 + cost) per child,
// and its extension is the intersection of the atom extensions and the
// r-preimages of the children's extensions. Level d holds, for every x, the
// cheapest cost of each extension reachable by trees of depth <= d, and only
// pairs not beaten by a smaller set at no higher cost are passed up.
//
// An optimal tree never gives a node two r-children mapped to the same
// element, since merging them is cheaper and shrinks the extension, so the
// result is a graph extend_el could have built.
class ElTable {
public:
    using Mask = std::uint64_t;
    static constexpr std::size_t max_domain = 16;

    ElTable(const RelationalModel& g, std::size_t max_depth, std::ostream* trace)
        : g_(g), max_depth_(max_depth), trace_(trace) {
        const std::size_t n = g.size();
        unary_.assign(g.unary_names().size(), 0);
        for (std::size_t p = 0; p < unary_.size(); ++p)
            for (Index v = 0; v < n; ++v)
                if (g.holds(p, v)) unary_[p] |= bit(v);
    }

    std::optional<DescriptionGraph> solve(Index target) {
        levels_.clear();
        for (std::size_t d = 0; d <= max_depth_; ++d) {
            levels_.push_back(build_level(d));
            if (trace_) {
                *trace_ << "depth " << d << '\n';
                for (const auto& [mask, cost] : levels_.back().frontier[target])
                    *trace_ << "  cost " << cost << " extension " << show(mask) << '\n';
            }
            if (d > 0 && levels_[d].frontier == levels_[d - 1].frontier) break;
        }
        const Level& top = levels_.back();
        if (!top.entries[target].count(bit(target))) return std::nullopt;
        DescriptionGraph h;
        h.language = Language::el;
        h.image.push_back(target);
        realize(h, 0, levels_.size() - 1, target, bit(target));
        return h;
    }

private:
    struct Move {
        enum Kind { start, atom, child } kind = start;
        Mask from = 0;
        std::size_t p_or_r = 0;
        Index y = 0;
        Mask child_mask = 0;
    };
    struct Entry {
        std::size_t cost;
        Move move;
    };
    struct Level {
        std::vector<std::unordered_map<Mask, Entry>> entries;
        std::vector<std::vector<std::pair<Mask, std::size_t>>> frontier;
    };

    static Mask bit(Index v) { return Mask{1} << v; }

    std::string show(Mask m) const {
        std::string out = "{";
        for (Index v = 0; v < g_.size(); ++v)
            if (m & bit(v)) out += (out.size() > 1 ? ", " : "") + g_.name(v);
        return out + "}";
    }

    Mask preimage(std::size_t r, Mask m) const {
        Mask out = 0;
        for (Index u = 0; u < g_.size(); ++u)
            for (Index w : g_.successors(r, u))
                if (m & bit(w)) {
                    out |= bit(u);
                    break;
                }
        return out;
    }

    Level build_level(std::size_t d) {
        const std::size_t n = g_.size();
        Level level;
        level.entries.resize(n);
        level.frontier.resize(n);
        // child options per (r, y): preimage mask, cost, child mask
        struct Option {
            std::size_t r;
            Index y;
            Mask pre;
            std::size_t cost;
            Mask child;
        };
        std::vector<std::vector<Option>> options(n);
        if (d > 0) {
            const Level& below = levels_[d - 1];
            for (Index x = 0; x < n; ++x)
                for (std::size_t r = 0; r < g_.binary_names().size(); ++r)
                    for (Index y : g_.successors(r, x))
                        for (const auto& [mask, cost] : below.frontier[y])
                            options[x].push_back({r, y, preimage(r, mask), cost + 1, mask});
        }
        for (Index x = 0; x < n; ++x) {
            auto& dist = level.entries[x];
            using Item = std::pair<std::size_t, Mask>;
            std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
            const Mask all = n == 64 ? ~Mask{0} : (Mask{1} << n) - 1;
            dist[all] = {1, {}};
            queue.push({1, all});
            std::vector<std::pair<Mask, std::size_t>> settled;
            auto relax = [&](Mask next, std::size_t cost, const Move& move) {
                auto it = dist.find(next);
                if (it != dist.end() && it->second.cost <= cost) return;
                dist[next] = {cost, move};
                queue.push({cost, next});
            };
            while (!queue.empty()) {
                const auto [cost, mask] = queue.top();
                queue.pop();
                if (dist.at(mask).cost != cost) continue;
                const bool dominated = std::any_of(settled.begin(), settled.end(), [&](const auto& s) {
                    return s.first != mask && (s.first & ~mask) == 0 && s.second <= cost;
                });
                if (dominated || std::count_if(settled.begin(), settled.end(),
                                               [&](const auto& s) { return s.first == mask; }))
                    continue;
                settled.emplace_back(mask, cost);
                for (std::size_t p = 0; p < unary_.size(); ++p) {
                    const Mask next = mask & unary_[p];
                    if ((unary_[p] & bit(x)) && next != mask)
                        relax(next, cost + 1, {Move::atom, mask, p, 0, 0});
                }
                for (const auto& o : options[x]) {
                    const Mask next = mask & o.pre;
                    if (next != mask) relax(next, cost + o.cost, {Move::child, mask, o.r, o.y, o.child});
                }
            }
            std::sort(settled.begin(), settled.end());
            level.frontier[x] = std::move(settled);
        }
        return level;
    }

    void realize(DescriptionGraph& h, std::size_t node, std::size_t d, Index x, Mask mask) const {
        std::vector<Move> moves;
        for (Mask m = mask;;) {
            const Move& move = levels_[d].entries[x].at(m).move;
            if (move.kind == Move::start) break;
            moves.push_back(move);
            m = move.from;
        }
        std::reverse(moves.begin(), moves.end());
        for (const auto& move : moves)
            if (move.kind == Move::atom) h.unary.push_back({node, move.p_or_r});
        for (const auto& move : moves) {
            if (move.kind != Move::child) continue;
            const std::size_t child = h.image.size();
            h.image.push_back(move.y);
            h.edges.push_back({move.p_or_r, node, child});
            realize(h, child, d - 1, move.y, move.child_mask);
        }
    }

    const RelationalModel& g_;
    std::size_t max_depth_;
    std::ostream* trace_;
    std::vector<Mask> unary_;
    std::vector<Level> levels_;
};

bool is_atom_count(const CostFunction& cost) {
    auto* f = cost.target<double (*)(const DescriptionGraph&)>();
    return f && *f == &atom_count;
}

}  // namespace

std::optional<GraphResult> make_re(const RelationalModel& g, const ElementId& target, Language l,
                                   const GraphOptions& options) {
    const Index t = g.index_of(target);
    initial_graph(g, target, l);

    // Bounds check: the largest graph the search could reach still has
    // distractors, so no description exists.
    if (l == Language::epfol) {
        if (!distractors(g, target, reachable_graph(g, t), options.simulation).empty()) {
            return std::nullopt;
        }
    } else {
        const auto rel = bounded_el_similarity(g, g.size() * g.size());
        for (Index v = 0; v < g.size(); ++v) {
            if (v != t && rel[t][v]) return std::nullopt;
        }
    }

    std::optional<DescriptionGraph> best;
    if (l == Language::el && is_atom_count(options.cost) && g.size() <= ElTable::max_domain) {
        best = ElTable(g, g.size() * g.size(), options.trace).solve(t);
    } else {
        best = Search(g, target, l, options).run();
    }
    if (!best) return std::nullopt;
    Formula formula = l == Language::el ? Formula{build_formula_el(g, *best)}
                                        : Formula{build_formula_epfol(g, *best)};
    if (extension(formula, g) != std::set<ElementId>{target}) {
        throw std::logic_error("graph search produced a formula that does not describe " + target);
    }
    const double cost = options.cost(*best);
    return GraphResult{std::move(formula), std::move(*best), cost};
}

}  // namespace lgre
