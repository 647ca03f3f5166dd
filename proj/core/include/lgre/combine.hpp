#pragma once

#include <map>
#include <optional>
#include <vector>

#include "lgre/gre_graph.hpp"
#include "lgre/gre_sim.hpp"
#include "lgre/model.hpp"

namespace lgre {

/// A scene collapsed by mutual ℒ-similarity.
struct MinimizedScene {
    Language language;
    RelationalModel model;
    /// Element of the original scene -> its class in `model`, named after
    /// the class's smallest member.
    std::map<ElementId, ElementId> class_of;
    std::vector<std::vector<ElementId>> classes;
    /// For EL and ELAN the classes come from a simulator-set run, kept here
    /// so its formulas can serve as a first answer.
    std::optional<SimulationState> simulation;

    bool singleton(const ElementId& v) const;
};

MinimizedScene minimize(const RelationalModel& m, Language l,
                        const SimulationOptions& options = {});

/// Graph search on the minimized scene; ℒ must be EPFOL or EL. Returns
/// nothing when v shares its class, since no formula separates mutually
/// similar elements. The result always describes v in the original scene.
std::optional<GraphResult> describe_via_minimization(const RelationalModel& m, const ElementId& v,
                                                     Language l, const GraphOptions& options = {});

}  // namespace lgre
