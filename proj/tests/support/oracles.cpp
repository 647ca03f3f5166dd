#include "oracles.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include "lgre/errors.hpp"

namespace lgre::testing {

namespace {

bool has_unary(const RelationalModel& m, const std::string& p, Index v) {
    auto k = m.unary_index(p);
    return k && m.holds(*k, v);
}

bool has_binary(const RelationalModel& m, const std::string& r, Index u, Index v) {
    auto k = m.binary_index(r);
    return k && m.has_edge(*k, u, v);
}

std::set<std::string> all_unary(const RelationalModel& a, const RelationalModel& b) {
    std::set<std::string> out(a.unary_names().begin(), a.unary_names().end());
    out.insert(b.unary_names().begin(), b.unary_names().end());
    return out;
}

std::set<std::string> all_binary(const RelationalModel& a, const RelationalModel& b) {
    std::set<std::string> out(a.binary_names().begin(), a.binary_names().end());
    out.insert(b.binary_names().begin(), b.binary_names().end());
    return out;
}

std::vector<Index> reachable(const RelationalModel& m, Index root) {
    std::vector<char> seen(m.size(), 0);
    std::vector<Index> stack = {root}, order;
    seen[root] = 1;
    while (!stack.empty()) {
        Index x = stack.back();
        stack.pop_back();
        order.push_back(x);
        for (std::size_t r = 0; r < m.binary_names().size(); ++r)
            for (Index y = 0; y < m.size(); ++y)
                if (m.has_edge(r, x, y) && !seen[y]) {
                    seen[y] = 1;
                    stack.push_back(y);
                }
    }
    std::sort(order.begin(), order.end());
    return order;
}

// Calls visit(h) for every injective h: [0, k) -> [0, n) with h[0] fixed to
// `first` when first is given.
void for_each_injection(std::size_t k, std::size_t n, std::optional<Index> first,
                        const std::function<bool(const std::vector<Index>&)>& visit) {
    std::vector<Index> h(k);
    std::vector<char> used(n, 0);
    std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
        if (i == k) return visit(h);
        for (Index t = 0; t < n; ++t) {
            if (used[t]) continue;
            if (i == 0 && first && t != *first) continue;
            used[t] = 1;
            h[i] = t;
            const bool stop = go(i + 1);
            used[t] = 0;
            if (stop) return true;
        }
        return false;
    };
    if (k <= n) go(0);
}

// Disjoint union with elements renamed L_x and R_x.
RelationalModel disjoint_union(const RelationalModel& a, const RelationalModel& b) {
    ModelBuilder out;
    for (const auto& p : all_unary(a, b)) out.declare_unary(p);
    for (const auto& r : all_binary(a, b)) out.declare_binary(r);
    auto add = [&](const RelationalModel& m, const std::string& tag) {
        for (const auto& x : m.domain()) out.element(tag + x);
        for (const auto& [p, xs] : m.unary_interpretation())
            for (const auto& x : xs) out.unary(p, tag + x);
        for (const auto& [r, es] : m.binary_interpretation())
            for (const auto& [x, y] : es) out.binary(r, tag + x, tag + y);
    };
    add(a, "L_");
    add(b, "R_");
    return out.build();
}

using Mask = std::uint64_t;

std::set<Mask> closure(const RelationalModel& m, Language l) {
    const std::size_t n = m.size();
    if (n > 63) throw std::invalid_argument("closure oracle: at most 63 elements");
    const Mask full = (Mask{1} << n) - 1;
    std::vector<Mask> work;
    std::set<Mask> sets;
    auto add = [&](Mask x) {
        if (sets.insert(x).second) work.push_back(x);
    };
    add(full);
    for (std::size_t p = 0; p < m.unary_names().size(); ++p) {
        Mask x = 0;
        for (Index v = 0; v < n; ++v)
            if (m.holds(p, v)) x |= Mask{1} << v;
        add(x);
        if (l == Language::elan) add(full & ~x);
    }
    while (!work.empty()) {
        Mask x = work.back();
        work.pop_back();
        std::vector<Mask> snapshot(sets.begin(), sets.end());
        for (Mask y : snapshot) add(x & y);
        for (std::size_t r = 0; r < m.binary_names().size(); ++r) {
            Mask d = 0;
            for (Index u = 0; u < n; ++u)
                for (Index v = 0; v < n; ++v)
                    if ((x >> v & 1U) && m.has_edge(r, u, v)) d |= Mask{1} << u;
            add(d);
        }
        if (l == Language::alc) add(full & ~x);
    }
    return sets;
}

}  // namespace

bool satisfies(const DlFormula& phi, const RelationalModel& m, Index v) {
    switch (phi.kind()) {
        case DlKind::top:
            return true;
        case DlKind::atom: {
            auto p = m.unary_index(phi.name());
            if (!p) throw EvaluationError("unknown unary " + phi.name());
            return m.holds(*p, v);
        }
        case DlKind::negation:
            return !satisfies(phi.left(), m, v);
        case DlKind::conjunction:
            return satisfies(phi.left(), m, v) && satisfies(phi.right(), m, v);
        case DlKind::exists: {
            auto r = m.binary_index(phi.name());
            if (!r) throw EvaluationError("unknown binary " + phi.name());
            for (Index w = 0; w < m.size(); ++w)
                if (m.has_edge(*r, v, w) && satisfies(phi.left(), m, w)) return true;
            return false;
        }
    }
    return false;
}

std::set<ElementId> naive_eval_dl(const DlFormula& phi, const RelationalModel& m) {
    std::set<ElementId> out;
    for (Index v = 0; v < m.size(); ++v)
        if (satisfies(phi, m, v)) out.insert(m.name(v));
    return out;
}

bool satisfies(const FoFormula& phi, const RelationalModel& m, std::map<int, Index>& env) {
    auto value = [&](int x) {
        auto it = env.find(x);
        if (it == env.end()) throw EvaluationError("free variable x" + std::to_string(x));
        return it->second;
    };
    switch (phi.kind()) {
        case FoKind::top:
            return true;
        case FoKind::inequality:
            return value(phi.variables()[0]) != value(phi.variables()[1]);
        case FoKind::relation: {
            const auto& xs = phi.variables();
            if (xs.size() == 1) {
                auto p = m.unary_index(phi.name());
                if (!p) throw EvaluationError("unknown unary " + phi.name());
                return m.holds(*p, value(xs[0]));
            }
            auto r = m.binary_index(phi.name());
            if (!r || xs.size() != 2) throw EvaluationError("unknown binary " + phi.name());
            return m.has_edge(*r, value(xs[0]), value(xs[1]));
        }
        case FoKind::negation:
            return !satisfies(phi.left(), m, env);
        case FoKind::conjunction:
            return satisfies(phi.left(), m, env) && satisfies(phi.right(), m, env);
        case FoKind::exists: {
            const int x = phi.variables()[0];
            auto saved = env.find(x) == env.end() ? std::optional<Index>{} : env[x];
            bool found = false;
            for (Index w = 0; w < m.size() && !found; ++w) {
                env[x] = w;
                found = satisfies(phi.left(), m, env);
            }
            if (saved) env[x] = *saved;
            else env.erase(x);
            return found;
        }
    }
    return false;
}

std::set<Tuple> naive_eval_fo(const FoFormula& phi, const RelationalModel& m, std::size_t n) {
    std::set<Tuple> out;
    std::vector<Index> t(n, 0);
    while (true) {
        std::map<int, Index> env;
        for (std::size_t i = 0; i < n; ++i) env[static_cast<int>(i + 1)] = t[i];
        if (satisfies(phi, m, env)) {
            Tuple names;
            for (Index x : t) names.push_back(m.name(x));
            out.insert(names);
        }
        std::size_t i = n;
        while (i > 0 && ++t[i - 1] == m.size()) t[--i] = 0;
        if (i == 0) break;
    }
    return out;
}

std::set<std::set<ElementId>> definable_sets(const RelationalModel& m, Language l) {
    std::set<std::set<ElementId>> out;
    for (Mask x : closure(m, l)) {
        std::set<ElementId> s;
        for (Index v = 0; v < m.size(); ++v)
            if (x >> v & 1U) s.insert(m.name(v));
        out.insert(s);
    }
    return out;
}

PairSet semantic_similarity(const RelationalModel& m, Language l) {
    const auto sets = closure(m, l);
    PairSet out;
    for (Index u = 0; u < m.size(); ++u)
        for (Index v = 0; v < m.size(); ++v) {
            bool ok = true;
            for (Mask x : sets)
                if ((x >> u & 1U) && !(x >> v & 1U)) ok = false;
            if (ok) out.insert({m.name(u), m.name(v)});
        }
    return out;
}

PairSet semantic_similarity(const RelationalModel& m1, const RelationalModel& m2, Language l) {
    const RelationalModel both = disjoint_union(m1, m2);
    PairSet out;
    for (const auto& [x, y] : semantic_similarity(both, l))
        if (x.rfind("L_", 0) == 0 && y.rfind("R_", 0) == 0) out.insert({x.substr(2), y.substr(2)});
    return out;
}

bool injective_hom_exists(const RelationalModel& m1, const ElementId& u, const RelationalModel& m2,
                          const ElementId& v) {
    const auto nodes = reachable(m1, m1.index_of(u));
    // position 0 must be u
    std::vector<Index> order = {m1.index_of(u)};
    for (Index x : nodes)
        if (x != order[0]) order.push_back(x);
    bool found = false;
    for_each_injection(order.size(), m2.size(), m2.index_of(v), [&](const std::vector<Index>& h) {
        for (std::size_t i = 0; i < order.size(); ++i) {
            for (const auto& p : m1.unary_names())
                if (has_unary(m1, p, order[i]) && !has_unary(m2, p, h[i])) return false;
            for (std::size_t j = 0; j < order.size(); ++j)
                for (const auto& r : m1.binary_names())
                    if (has_binary(m1, r, order[i], order[j]) && !has_binary(m2, r, h[i], h[j]))
                        return false;
        }
        found = true;
        return true;
    });
    return found;
}

bool isomorphic_at(const RelationalModel& m1, const ElementId& u, const RelationalModel& m2,
                   const ElementId& v) {
    if (m1.size() != m2.size()) return false;
    std::vector<Index> order = {m1.index_of(u)};
    for (Index x = 0; x < m1.size(); ++x)
        if (x != order[0]) order.push_back(x);
    const auto unary = all_unary(m1, m2);
    const auto binary = all_binary(m1, m2);
    bool found = false;
    for_each_injection(order.size(), m2.size(), m2.index_of(v), [&](const std::vector<Index>& h) {
        for (std::size_t i = 0; i < order.size(); ++i) {
            for (const auto& p : unary)
                if (has_unary(m1, p, order[i]) != has_unary(m2, p, h[i])) return false;
            for (std::size_t j = 0; j < order.size(); ++j)
                for (const auto& r : binary)
                    if (has_binary(m1, r, order[i], order[j]) != has_binary(m2, r, h[i], h[j]))
                        return false;
        }
        found = true;
        return true;
    });
    return found;
}

PairSet brute_similarity(const RelationalModel& m, Language l) {
    if (l != Language::epfol && l != Language::fol)
        throw std::invalid_argument("brute_similarity: EPFOL or FOL");
    PairSet out;
    for (const auto& u : m.domain())
        for (const auto& v : m.domain())
            if (l == Language::epfol ? injective_hom_exists(m, u, m, v) : isomorphic_at(m, u, m, v))
                out.insert({u, v});
    return out;
}

std::optional<std::size_t> brute_min_epfol_cost(const RelationalModel& m, const ElementId& target) {
    struct Fact {
        bool unary;
        std::size_t rel;
        Index a, b;
    };
    const Index t = m.index_of(target);
    const auto nodes = reachable(m, t);
    std::vector<Fact> facts;
    for (Index x : nodes) {
        for (std::size_t p = 0; p < m.unary_names().size(); ++p)
            if (m.holds(p, x)) facts.push_back({true, p, x, x});
        for (std::size_t r = 0; r < m.binary_names().size(); ++r)
            for (Index y = 0; y < m.size(); ++y)
                if (m.has_edge(r, x, y)) facts.push_back({false, r, x, y});
    }
    if (facts.size() > 22) throw std::invalid_argument("brute_min_epfol_cost: too many facts");

    std::optional<std::size_t> best;
    for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << facts.size()); ++subset) {
        std::vector<Fact> chosen;
        for (std::size_t i = 0; i < facts.size(); ++i)
            if (subset >> i & 1U) chosen.push_back(facts[i]);
        // nodes reachable from the target through chosen edges
        std::vector<Index> hnodes = {t};
        for (bool grew = true; grew;) {
            grew = false;
            for (const auto& f : chosen)
                if (!f.unary && std::count(hnodes.begin(), hnodes.end(), f.a) &&
                    !std::count(hnodes.begin(), hnodes.end(), f.b)) {
                    hnodes.push_back(f.b);
                    grew = true;
                }
        }
        bool valid = true;
        for (const auto& f : chosen)
            if (!std::count(hnodes.begin(), hnodes.end(), f.a)) valid = false;
        if (!valid) continue;
        const std::size_t cost = hnodes.size() + chosen.size();
        if (best && *best <= cost) continue;

        auto pos = [&](Index x) {
            return static_cast<std::size_t>(std::find(hnodes.begin(), hnodes.end(), x) -
                                            hnodes.begin());
        };
        bool sound = true;
        for_each_injection(hnodes.size(), m.size(), std::nullopt, [&](const std::vector<Index>& h) {
            if (h[0] == t) return false;
            for (const auto& f : chosen) {
                if (f.unary ? !m.holds(f.rel, h[pos(f.a)])
                            : !m.has_edge(f.rel, h[pos(f.a)], h[pos(f.b)]))
                    return false;
            }
            sound = false;
            return true;
        });
        if (sound) best = cost;
    }
    return best;
}

bool is_simulation(const PairSet& rel, const RelationalModel& m1, const RelationalModel& m2,
                   Language l) {
    const bool atom_r = l == Language::elan || l == Language::alc;
    const bool zag = l == Language::alc;
    const auto unary = all_unary(m1, m2);
    const auto binary = all_binary(m1, m2);
    for (const auto& [un, vn] : rel) {
        const Index u = m1.index_of(un), v = m2.index_of(vn);
        for (const auto& p : unary) {
            if (has_unary(m1, p, u) && !has_unary(m2, p, v)) return false;
            if (atom_r && has_unary(m2, p, v) && !has_unary(m1, p, u)) return false;
        }
        for (const auto& r : binary) {
            for (Index u2 = 0; u2 < m1.size(); ++u2) {
                if (!has_binary(m1, r, u, u2)) continue;
                bool matched = false;
                for (Index v2 = 0; v2 < m2.size(); ++v2)
                    if (has_binary(m2, r, v, v2) && rel.count({m1.name(u2), m2.name(v2)}))
                        matched = true;
                if (!matched) return false;
            }
            if (!zag) continue;
            for (Index v2 = 0; v2 < m2.size(); ++v2) {
                if (!has_binary(m2, r, v, v2)) continue;
                bool matched = false;
                for (Index u2 = 0; u2 < m1.size(); ++u2)
                    if (has_binary(m1, r, u, u2) && rel.count({m1.name(u2), m2.name(v2)}))
                        matched = true;
                if (!matched) return false;
            }
        }
    }
    return true;
}

}  // namespace lgre::testing
