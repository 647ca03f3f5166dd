#include "lgre/simulation.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace lgre {

namespace {

using Matrix = std::vector<std::vector<char>>;

// Relation symbols of one model looked up in the other by name.
struct Alignment {
    std::vector<std::optional<std::size_t>> unary12, unary21, binary12, binary21;

    Alignment(const RelationalModel& m1, const RelationalModel& m2) {
        for (const auto& p : m1.unary_names()) unary12.push_back(m2.unary_index(p));
        for (const auto& p : m2.unary_names()) unary21.push_back(m1.unary_index(p));
        for (const auto& r : m1.binary_names()) binary12.push_back(m2.binary_index(r));
        for (const auto& r : m2.binary_names()) binary21.push_back(m1.binary_index(r));
    }
};

class Pairing {
public:
    Pairing(const RelationalModel& m1, const RelationalModel& m2)
        : m1_(m1), m2_(m2), align_(m1, m2) {}

    bool atom_l(Index u, Index v) const {
        for (std::size_t p = 0; p < align_.unary12.size(); ++p) {
            if (m1_.holds(p, u) && !(align_.unary12[p] && m2_.holds(*align_.unary12[p], v))) {
                return false;
            }
        }
        return true;
    }

    bool atom_r(Index u, Index v) const {
        for (std::size_t p = 0; p < align_.unary21.size(); ++p) {
            if (m2_.holds(p, v) && !(align_.unary21[p] && m1_.holds(*align_.unary21[p], u))) {
                return false;
            }
        }
        return true;
    }

    bool zig(const Matrix& rel, Index u, Index v) const {
        for (std::size_t r = 0; r < align_.binary12.size(); ++r) {
            for (Index u2 : m1_.successors(r, u)) {
                bool found = false;
                if (align_.binary12[r]) {
                    for (Index v2 : m2_.successors(*align_.binary12[r], v)) {
                        if (rel[u2][v2]) {
                            found = true;
                            break;
                        }
                    }
                }
                if (!found) return false;
            }
        }
        return true;
    }

    bool zag(const Matrix& rel, Index u, Index v) const {
        for (std::size_t r = 0; r < align_.binary21.size(); ++r) {
            for (Index v2 : m2_.successors(r, v)) {
                bool found = false;
                if (align_.binary21[r]) {
                    for (Index u2 : m1_.successors(*align_.binary21[r], u)) {
                        if (rel[u2][v2]) {
                            found = true;
                            break;
                        }
                    }
                }
                if (!found) return false;
            }
        }
        return true;
    }

    // Edge r1(a,b) of m1 is present in m2 between the images.
    bool edge_preserved(std::size_t r1, Index a2, Index b2) const {
        return align_.binary12[r1] && m2_.has_edge(*align_.binary12[r1], a2, b2);
    }

    bool edge_reflected(std::size_t r2, Index a1, Index b1) const {
        return align_.binary21[r2] && m1_.has_edge(*align_.binary21[r2], a1, b1);
    }

    const Alignment& alignment() const { return align_; }

private:
    const RelationalModel& m1_;
    const RelationalModel& m2_;
    Alignment align_;
};

void check_cap(const RelationalModel& m1, const RelationalModel& m2,
               const SimulationOptions& options, Language l) {
    const std::size_t n = std::max(m1.size(), m2.size());
    if (n > options.cap) {
        throw CapExceeded(to_string(l) + " simulation is computed by brute force; domain of " +
                          std::to_string(n) + " elements exceeds the cap of " +
                          std::to_string(options.cap));
    }
}

// Gauss-Seidel refinement: sweep all live pairs in sorted order, dropping
// those that fail zig (and zag for ALC), until a sweep changes nothing.
Matrix refine(const RelationalModel& m1, const RelationalModel& m2, Language l,
              std::size_t& rounds) {
    const auto& props = properties(l);
    Pairing pairing(m1, m2);
    const bool want_r = props.count(Property::atom_r) != 0;
    const bool want_zag = props.count(Property::zag) != 0;
    Matrix rel(m1.size(), std::vector<char>(m2.size(), 0));
    for (Index u = 0; u < m1.size(); ++u) {
        for (Index v = 0; v < m2.size(); ++v) {
            rel[u][v] = pairing.atom_l(u, v) && (!want_r || pairing.atom_r(u, v));
        }
    }
    rounds = 0;
    for (;;) {
        bool changed = false;
        for (Index u = 0; u < m1.size(); ++u) {
            for (Index v = 0; v < m2.size(); ++v) {
                if (!rel[u][v]) continue;
                if (!pairing.zig(rel, u, v) || (want_zag && !pairing.zag(rel, u, v))) {
                    rel[u][v] = 0;
                    changed = true;
                }
            }
        }
        if (!changed) break;
        ++rounds;
    }
    return rel;
}

std::vector<Index> reachable(const RelationalModel& m, Index root) {
    std::vector<char> seen(m.size(), 0);
    std::vector<Index> order{root};
    seen[root] = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t r = 0; r < m.binary_names().size(); ++r) {
            for (Index w : m.successors(r, order[i])) {
                if (!seen[w]) {
                    seen[w] = 1;
                    order.push_back(w);
                }
            }
        }
    }
    return order;
}

// Backtracking search for the EPFOL/FOL witness. Source elements are
// assigned in `order`; a source element's image must pass the unary checks
// and agree on every edge to an already-assigned element.
class MappingSearch {
public:
    MappingSearch(const RelationalModel& m1, const RelationalModel& m2, bool isomorphism)
        : m1_(m1), m2_(m2), iso_(isomorphism), pairing_(m1, m2) {}

    std::optional<std::vector<std::optional<Index>>> run(Index u, Index v) {
        if (iso_) {
            if (m1_.size() != m2_.size()) return std::nullopt;
            order_ = connected_order(u);
        } else {
            order_ = reachable(m1_, u);
        }
        image_.assign(m1_.size(), std::nullopt);
        used_.assign(m2_.size(), 0);
        position_.assign(m1_.size(), -1);
        for (std::size_t i = 0; i < order_.size(); ++i) position_[order_[i]] = static_cast<int>(i);
        if (!compatible(u, v)) return std::nullopt;
        assign(u, v);
        if (extend(1)) return image_;
        return std::nullopt;
    }

private:
    // For isomorphisms every element is mapped; walk edges both ways from u
    // first so that candidates get constrained early.
    std::vector<Index> connected_order(Index u) const {
        std::vector<char> seen(m1_.size(), 0);
        std::vector<Index> order;
        auto grow = [&](Index start) {
            std::deque<Index> queue{start};
            seen[start] = 1;
            while (!queue.empty()) {
                const Index x = queue.front();
                queue.pop_front();
                order.push_back(x);
                for (std::size_t r = 0; r < m1_.binary_names().size(); ++r) {
                    for (Index y : m1_.successors(r, x)) {
                        if (!seen[y]) {
                            seen[y] = 1;
                            queue.push_back(y);
                        }
                    }
                    for (Index y : m1_.predecessors(r, x)) {
                        if (!seen[y]) {
                            seen[y] = 1;
                            queue.push_back(y);
                        }
                    }
                }
            }
        };
        grow(u);
        for (Index x = 0; x < m1_.size(); ++x) {
            if (!seen[x]) grow(x);
        }
        return order;
    }

    bool degrees_match(Index x, Index y) const {
        const auto& align = pairing_.alignment();
        for (std::size_t r = 0; r < align.binary12.size(); ++r) {
            const std::size_t out1 = m1_.successors(r, x).size();
            const std::size_t in1 = m1_.predecessors(r, x).size();
            std::size_t out2 = 0, in2 = 0;
            if (align.binary12[r]) {
                out2 = m2_.successors(*align.binary12[r], y).size();
                in2 = m2_.predecessors(*align.binary12[r], y).size();
            }
            if (out1 != out2 || in1 != in2) return false;
        }
        return true;
    }

    bool compatible(Index x, Index y) const {
        if (used_[y]) return false;
        if (!pairing_.atom_l(x, y)) return false;
        if (iso_ && (!pairing_.atom_r(x, y) || !degrees_match(x, y))) return false;
        const auto& align = pairing_.alignment();
        for (std::size_t r = 0; r < align.binary12.size(); ++r) {
            if (m1_.has_edge(r, x, x) && !pairing_.edge_preserved(r, y, y)) return false;
            for (Index z : m1_.successors(r, x)) {
                if (image_[z] && !pairing_.edge_preserved(r, y, *image_[z])) return false;
            }
            for (Index z : m1_.predecessors(r, x)) {
                if (image_[z] && !pairing_.edge_preserved(r, *image_[z], y)) return false;
            }
        }
        if (iso_) {
            // Edges of m2 between images must come from edges of m1.
            for (std::size_t r = 0; r < align.binary21.size(); ++r) {
                if (m2_.has_edge(r, y, y) && !pairing_.edge_reflected(r, x, x)) return false;
                for (Index z = 0; z < m1_.size(); ++z) {
                    if (!image_[z]) continue;
                    if (m2_.has_edge(r, y, *image_[z]) && !pairing_.edge_reflected(r, x, z)) {
                        return false;
                    }
                    if (m2_.has_edge(r, *image_[z], y) && !pairing_.edge_reflected(r, z, x)) {
                        return false;
                    }
                }
            }
        }
        return true;
    }

    void assign(Index x, Index y) {
        image_[x] = y;
        used_[y] = 1;
    }

    void unassign(Index x) {
        used_[*image_[x]] = 0;
        image_[x].reset();
    }

    // Candidates for x: successors of the image of an assigned predecessor
    // when one exists, otherwise the whole target domain.
    std::vector<Index> candidates(Index x) const {
        const auto& align = pairing_.alignment();
        for (std::size_t r = 0; r < align.binary12.size(); ++r) {
            for (Index z : m1_.predecessors(r, x)) {
                if (image_[z] && position_[z] >= 0) {
                    if (!align.binary12[r]) return {};
                    return m2_.successors(*align.binary12[r], *image_[z]);
                }
            }
        }
        std::vector<Index> all(m2_.size());
        for (Index y = 0; y < m2_.size(); ++y) all[y] = y;
        return all;
    }

    bool extend(std::size_t i) {
        if (i == order_.size()) return true;
        const Index x = order_[i];
        for (Index y : candidates(x)) {
            if (!compatible(x, y)) continue;
            assign(x, y);
            if (extend(i + 1)) return true;
            unassign(x);
        }
        return false;
    }

    const RelationalModel& m1_;
    const RelationalModel& m2_;
    bool iso_;
    Pairing pairing_;
    std::vector<Index> order_;
    std::vector<int> position_;
    std::vector<std::optional<Index>> image_;
    std::vector<char> used_;
};

bool brute_force(Language l) { return l == Language::epfol || l == Language::fol; }

std::optional<std::vector<std::optional<Index>>> search_witness(const RelationalModel& m1,
                                                                Index u,
                                                                const RelationalModel& m2,
                                                                Index v, Language l) {
    MappingSearch search(m1, m2, l == Language::fol);
    return search.run(u, v);
}

std::string show(const Pair& p) { return "(" + p.first + "," + p.second + ")"; }

}  // namespace

std::vector<Violation> check_properties(const PairSet& rel, const RelationalModel& m1,
                                        const RelationalModel& m2,
                                        const std::set<Property>& props) {
    std::vector<Violation> out;
    Matrix matrix(m1.size(), std::vector<char>(m2.size(), 0));
    for (const auto& [a, b] : rel) matrix[m1.index_of(a)][m2.index_of(b)] = 1;
    Pairing pairing(m1, m2);
    const Alignment& align = pairing.alignment();

    for (const auto& pair : rel) {
        const Index u = m1.index_of(pair.first);
        const Index v = m2.index_of(pair.second);
        if (props.count(Property::atom_l)) {
            for (std::size_t p = 0; p < align.unary12.size(); ++p) {
                if (m1.holds(p, u) && !(align.unary12[p] && m2.holds(*align.unary12[p], v))) {
                    out.push_back({Property::atom_l, {pair},
                                   pair.first + " is in " + m1.unary_names()[p] + " but " +
                                       pair.second + " is not"});
                }
            }
        }
        if (props.count(Property::atom_r)) {
            for (std::size_t p = 0; p < align.unary21.size(); ++p) {
                if (m2.holds(p, v) && !(align.unary21[p] && m1.holds(*align.unary21[p], u))) {
                    out.push_back({Property::atom_r, {pair},
                                   pair.second + " is in " + m2.unary_names()[p] + " but " +
                                       pair.first + " is not"});
                }
            }
        }
        if (props.count(Property::zig)) {
            for (std::size_t r = 0; r < align.binary12.size(); ++r) {
                for (Index u2 : m1.successors(r, u)) {
                    bool found = false;
                    if (align.binary12[r]) {
                        for (Index v2 : m2.successors(*align.binary12[r], v)) {
                            found = found || matrix[u2][v2];
                        }
                    }
                    if (!found) {
                        out.push_back({Property::zig, {pair},
                                       m1.binary_names()[r] + " edge " + pair.first + "->" +
                                           m1.name(u2) + " has no matching edge from " +
                                           pair.second});
                    }
                }
            }
        }
        if (props.count(Property::zag)) {
            for (std::size_t r = 0; r < align.binary21.size(); ++r) {
                for (Index v2 : m2.successors(r, v)) {
                    bool found = false;
                    if (align.binary21[r]) {
                        for (Index u2 : m1.successors(*align.binary21[r], u)) {
                            found = found || matrix[u2][v2];
                        }
                    }
                    if (!found) {
                        out.push_back({Property::zag, {pair},
                                       m2.binary_names()[r] + " edge " + pair.second + "->" +
                                           m2.name(v2) + " has no matching edge from " +
                                           pair.first});
                    }
                }
            }
        }
    }

    // inj-L: every element of m1 has exactly one partner, no two share one.
    auto injective = [&](Property clause, std::size_t n_from, std::size_t n_to, bool forward,
                         const RelationalModel& from, const RelationalModel& to) {
        std::vector<std::vector<Index>> partners(n_from);
        for (Index a = 0; a < n_from; ++a) {
            for (Index b = 0; b < n_to; ++b) {
                if (forward ? matrix[a][b] : matrix[b][a]) partners[a].push_back(b);
            }
        }
        std::map<Index, Index> taken;
        for (Index a = 0; a < n_from; ++a) {
            if (partners[a].size() != 1) {
                std::vector<Pair> w;
                for (Index b : partners[a]) {
                    w.push_back(forward ? Pair{from.name(a), to.name(b)}
                                        : Pair{to.name(b), from.name(a)});
                }
                out.push_back({clause, w,
                               from.name(a) + " has " + std::to_string(partners[a].size()) +
                                   " partners, expected exactly one"});
                continue;
            }
            const Index b = partners[a].front();
            auto [it, fresh] = taken.emplace(b, a);
            if (!fresh) {
                const Pair first = forward ? Pair{from.name(it->second), to.name(b)}
                                           : Pair{to.name(b), from.name(it->second)};
                const Pair second = forward ? Pair{from.name(a), to.name(b)}
                                            : Pair{to.name(b), from.name(a)};
                out.push_back({clause, {first, second},
                               show(first) + " and " + show(second) + " share a partner"});
            }
        }
    };
    if (props.count(Property::inj_l)) {
        injective(Property::inj_l, m1.size(), m2.size(), true, m1, m2);
    }
    if (props.count(Property::inj_r)) {
        injective(Property::inj_r, m2.size(), m1.size(), false, m2, m1);
    }
    return out;
}

SimulationRelation maximal_simulation(const RelationalModel& m1, const RelationalModel& m2,
                                      Language l, const SimulationOptions& options) {
    SimulationRelation out{m1, m2, l, {}, 0};
    if (brute_force(l)) {
        check_cap(m1, m2, options, l);
        for (Index u = 0; u < m1.size(); ++u) {
            for (Index v = 0; v < m2.size(); ++v) {
                if (search_witness(m1, u, m2, v, l)) out.pairs.emplace(m1.name(u), m2.name(v));
            }
        }
        return out;
    }
    const Matrix rel = refine(m1, m2, l, out.rounds);
    for (Index u = 0; u < m1.size(); ++u) {
        for (Index v = 0; v < m2.size(); ++v) {
            if (rel[u][v]) out.pairs.emplace(m1.name(u), m2.name(v));
        }
    }
    return out;
}

std::set<ElementId> simulator_set(const RelationalModel& m, const ElementId& v, Language l,
                                  const SimulationOptions& options) {
    const Index iv = m.index_of(v);
    std::set<ElementId> out;
    if (brute_force(l)) {
        check_cap(m, m, options, l);
        for (Index u = 0; u < m.size(); ++u) {
            if (search_witness(m, iv, m, u, l)) out.insert(m.name(u));
        }
        return out;
    }
    std::size_t rounds = 0;
    const Matrix rel = refine(m, m, l, rounds);
    for (Index u = 0; u < m.size(); ++u) {
        if (rel[iv][u]) out.insert(m.name(u));
    }
    return out;
}

bool similarity_query(const RelationalModel& m1, const ElementId& u, const RelationalModel& m2,
                      const ElementId& v, Language l, const SimulationOptions& options) {
    const Index iu = m1.index_of(u);
    const Index iv = m2.index_of(v);
    if (brute_force(l)) {
        check_cap(m1, m2, options, l);
        return search_witness(m1, iu, m2, iv, l).has_value();
    }
    std::size_t rounds = 0;
    return refine(m1, m2, l, rounds)[iu][iv] != 0;
}

std::optional<std::map<ElementId, ElementId>> find_witness(const RelationalModel& m1,
                                                           const ElementId& u,
                                                           const RelationalModel& m2,
                                                           const ElementId& v, Language l,
                                                           const SimulationOptions& options) {
    if (!brute_force(l)) {
        throw std::invalid_argument("witness search is only defined for EPFOL and FOL");
    }
    check_cap(m1, m2, options, l);
    auto image = search_witness(m1, m1.index_of(u), m2, m2.index_of(v), l);
    if (!image) return std::nullopt;
    std::map<ElementId, ElementId> out;
    for (Index x = 0; x < m1.size(); ++x) {
        if ((*image)[x]) out.emplace(m1.name(x), m2.name(*(*image)[x]));
    }
    return out;
}

std::vector<std::vector<ElementId>> mutual_similarity_classes(const SimulationRelation& rel) {
    if (!(rel.source == rel.target)) {
        throw std::invalid_argument("mutual similarity needs a relation on a single model");
    }
    const RelationalModel& m = rel.source;
    std::vector<char> placed(m.size(), 0);
    std::vector<std::vector<ElementId>> out;
    for (Index u = 0; u < m.size(); ++u) {
        if (placed[u]) continue;
        std::vector<ElementId> cls{m.name(u)};
        placed[u] = 1;
        for (Index v = u + 1; v < m.size(); ++v) {
            if (!placed[v] && rel.contains(m.name(u), m.name(v)) &&
                rel.contains(m.name(v), m.name(u))) {
                cls.push_back(m.name(v));
                placed[v] = 1;
            }
        }
        out.push_back(std::move(cls));
    }
    return out;
}

}  // namespace lgre
