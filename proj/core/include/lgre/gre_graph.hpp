#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lgre/formula.hpp"
#include "lgre/model.hpp"
#include "lgre/simulation.hpp"

namespace lgre {

/// A description graph H together with its mapping f into the scene G.
/// Node 0 is v_H and maps to the target. Unary and binary symbols are
/// indices into G's sorted vocabulary.
///
/// EPFOL graphs are subgraphs of G, so f is injective and nodes are named
/// after their images. EL graphs are trees grown over the unraveling of G,
/// with nodes named n0, n1, ...
struct DescriptionGraph {
    struct Unary {
        std::size_t node;
        std::size_t p;
        friend bool operator==(const Unary&, const Unary&) = default;
    };
    struct Edge {
        std::size_t r;
        std::size_t from;
        std::size_t to;
        friend bool operator==(const Edge&, const Edge&) = default;
    };

    Language language = Language::epfol;
    std::vector<Index> image;
    std::vector<Unary> unary;
    std::vector<Edge> edges;

    std::size_t node_count() const { return image.size(); }
    std::size_t fact_count() const { return unary.size() + edges.size(); }
    bool has_unary(std::size_t node, std::size_t p) const;
    bool has_edge(std::size_t r, std::size_t from, std::size_t to) const;
    /// First node with the given image, if any.
    std::optional<std::size_t> node_of(Index g_element) const;

    std::string node_name(const RelationalModel& g, std::size_t node) const;
    /// H as a model over G's full vocabulary.
    RelationalModel model(const RelationalModel& g) const;
    /// f, by element names.
    std::map<ElementId, ElementId> mapping(const RelationalModel& g) const;
    /// Facts as text, e.g. `dog(b) small(b) sniffs(b,a)`.
    std::string describe(const RelationalModel& g) const;

    friend bool operator==(const DescriptionGraph&, const DescriptionGraph&) = default;
};

/// Must be monotone: adding a fact never lowers the cost.
using CostFunction = std::function<double(const DescriptionGraph&)>;

/// Nodes plus unary facts plus edges.
double atom_count(const DescriptionGraph& h);

struct GraphOptions {
    CostFunction cost = atom_count;
    /// Indented search tree: one line per visited graph with its cost and
    /// distractors, and a line per cost bound.
    std::ostream* trace = nullptr;
    SimulationOptions simulation;
};

struct GraphResult {
    Formula formula;
    DescriptionGraph graph;
    double cost;
};

/// The single node v_H mapped to `target`, no facts.
DescriptionGraph initial_graph(const RelationalModel& g, const ElementId& target, Language l);

/// Elements other than the target that v_H can be ℒ-simulated by.
std::set<ElementId> distractors(const RelationalModel& g, const ElementId& target,
                                const DescriptionGraph& h, const SimulationOptions& options = {});

/// Every graph obtained by copying one missing fact at a node of H from G.
/// Edges may add their endpoint as a new node.
std::vector<DescriptionGraph> extend_epfol(const RelationalModel& g, const DescriptionGraph& h);

/// Unary additions as for EPFOL, plus, for every r edge (f(u), x) of G with
/// no r child of u mapped to x, a fresh child mapped to x. Nodes at depth
/// `max_depth` get no children.
std::vector<DescriptionGraph> extend_el(const RelationalModel& g, const DescriptionGraph& h,
                                        std::size_t max_depth);

/// ex x2 ... ex xn . (pairwise inequalities & edges & unary facts), with
/// node i as x_{i+1}.
FoFormula build_formula_epfol(const RelationalModel& g, const DescriptionGraph& h);

/// Unary facts of a node, then some r . child for each child edge. Throws
/// std::invalid_argument unless H is a tree rooted at node 0.
DlFormula build_formula_el(const RelationalModel& g, const DescriptionGraph& h);

/// Minimal-cost ℒ-description of `target` in `g` for ℒ in {EPFOL, EL}, or
/// nothing when none exists. EL under atom_count on models of at most 16
/// elements is solved by a table of cheapest trees per extension, which the
/// trace prints depth by depth; every other case runs the graph search.
std::optional<GraphResult> make_re(const RelationalModel& g, const ElementId& target, Language l,
                                   const GraphOptions& options = {});

}  // namespace lgre
