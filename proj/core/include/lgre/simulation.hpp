#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lgre/formula.hpp"
#include "lgre/model.hpp"

namespace lgre {

using Pair = std::pair<ElementId, ElementId>;
using PairSet = std::set<Pair>;

/// The maximal ℒ-simulation between two models, as the set of pairs (u, v)
/// with u in the source and v in the target.
struct SimulationRelation {
    RelationalModel source;
    RelationalModel target;
    Language language;
    PairSet pairs;
    /// Refinement sweeps that removed at least one pair (EL/ELAN/ALC only).
    std::size_t rounds = 0;

    bool contains(const ElementId& u, const ElementId& v) const {
        return pairs.count({u, v}) != 0;
    }
};

struct Violation {
    Property clause;
    /// The pair (or pairs, for the injectivity clauses) the clause fails on.
    std::vector<Pair> witnesses;
    std::string message;
};

/// Every failure of a named clause. Relation symbols of the two models are
/// matched by name. inj-L asks for a total injective function from m1's
/// domain, inj-R for the same from m2's domain in the inverse direction.
std::vector<Violation> check_properties(const PairSet& rel, const RelationalModel& m1,
                                        const RelationalModel& m2,
                                        const std::set<Property>& props);

struct SimulationOptions {
    /// EPFOL/FOL give up with CapExceeded when either domain is larger.
    std::size_t cap = 12;
};

SimulationRelation maximal_simulation(const RelationalModel& m1, const RelationalModel& m2,
                                      Language l, const SimulationOptions& options = {});

std::set<ElementId> simulator_set(const RelationalModel& m, const ElementId& v, Language l,
                                  const SimulationOptions& options = {});

bool similarity_query(const RelationalModel& m1, const ElementId& u, const RelationalModel& m2,
                      const ElementId& v, Language l, const SimulationOptions& options = {});

/// For EPFOL an injective homomorphism from the part of m1 reachable from u
/// into m2, for FOL an isomorphism of the whole models; in both cases u is
/// sent to v. Only EPFOL and FOL are accepted.
std::optional<std::map<ElementId, ElementId>> find_witness(const RelationalModel& m1,
                                                           const ElementId& u,
                                                           const RelationalModel& m2,
                                                           const ElementId& v, Language l,
                                                           const SimulationOptions& options = {});

/// Classes of mutually similar elements of a relation whose source and target
/// are the same model, each sorted, ordered by smallest member.
std::vector<std::vector<ElementId>> mutual_similarity_classes(const SimulationRelation& rel);

}  // namespace lgre
