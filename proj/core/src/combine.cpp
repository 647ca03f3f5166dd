#include "lgre/combine.hpp"

#include <stdexcept>

namespace lgre {

bool MinimizedScene::singleton(const ElementId& v) const {
    auto it = class_of.find(v);
    if (it == class_of.end()) throw ModelError("unknown element '" + v + "'");
    for (const auto& cls : classes) {
        if (cls.front() == it->second) return cls.size() == 1;
    }
    return false;
}

MinimizedScene minimize(const RelationalModel& m, Language l, const SimulationOptions& options) {
    MinimizedScene out{l, m, {}, {}, std::nullopt};
    if (l == Language::el || l == Language::elan) {
        SimulationState state = compute_gre(m, l);
        std::set<ElementId> placed;
        for (const auto& u : m.domain()) {
            if (placed.count(u)) continue;
            std::vector<ElementId> cls{u};
            placed.insert(u);
            for (const auto& v : state.S.at(u)) {
                if (!placed.count(v) && state.S.at(v).count(u)) {
                    cls.push_back(v);
                    placed.insert(v);
                }
            }
            out.classes.push_back(std::move(cls));
        }
        out.simulation = std::move(state);
    } else {
        out.classes = mutual_similarity_classes(maximal_simulation(m, m, l, options));
    }
    Quotient q = quotient(m, out.classes);
    out.model = std::move(q.model);
    out.class_of = std::move(q.class_of);
    return out;
}

std::optional<GraphResult> describe_via_minimization(const RelationalModel& m, const ElementId& v,
                                                     Language l, const GraphOptions& options) {
    if (l != Language::epfol && l != Language::el) {
        throw std::invalid_argument("graph-based GRE supports EPFOL and EL, not " + to_string(l));
    }
    const MinimizedScene scene = minimize(m, l, options.simulation);
    if (!scene.singleton(v)) return std::nullopt;
    auto result = make_re(scene.model, scene.class_of.at(v), l, options);
    if (l == Language::el) return result;
    // Merging EPFOL-similar elements loses counting information (two
    // distinct successors may become one), so a quotient answer is only
    // kept if it still describes v in the original scene.
    if (result && extension(result->formula, m) == std::set<ElementId>{v}) return result;
    return make_re(m, v, l, options);
}

}  // namespace lgre
