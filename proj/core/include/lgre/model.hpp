#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lgre/errors.hpp"

namespace lgre {

/// Elements are named by strings and ordered lexicographically. Every
/// iteration over a domain in this library follows that order.
using ElementId = std::string;

/// Position of an element in the sorted domain of one particular model.
using Index = std::size_t;

using UnaryInterpretation = std::map<std::string, std::set<ElementId>>;
using BinaryInterpretation =
    std::map<std::string, std::set<std::pair<ElementId, ElementId>>>;

/// A finite relational model: a nonempty domain plus interpretations of
/// unary and binary relation symbols. Immutable once built.
///
/// Elements, unary names and binary names are each stored in sorted order,
/// and the index-based accessors refer to those positions. Adjacency is kept
/// in both directions so refinement algorithms can walk predecessors.
class RelationalModel {
public:
    /// Validates all invariants: nonempty domain, no duplicate elements,
    /// interpretations only mention declared elements, and no name is used
    /// both as a unary and a binary relation.
    RelationalModel(std::vector<ElementId> domain, UnaryInterpretation unary,
                    BinaryInterpretation binary);

    const std::vector<ElementId>& domain() const { return names_; }
    std::size_t size() const { return names_.size(); }

    bool contains(const ElementId& v) const { return find(v).has_value(); }
    std::optional<Index> find(const ElementId& v) const;
    /// Throws ModelError for an unknown element.
    Index index_of(const ElementId& v) const;
    const ElementId& name(Index i) const { return names_.at(i); }

    const std::vector<std::string>& unary_names() const { return unary_names_; }
    const std::vector<std::string>& binary_names() const { return binary_names_; }
    std::optional<std::size_t> unary_index(const std::string& p) const;
    std::optional<std::size_t> binary_index(const std::string& r) const;

    bool holds(std::size_t p, Index v) const { return unary_[p][v] != 0; }
    const std::vector<Index>& successors(std::size_t r, Index v) const { return succ_[r][v]; }
    const std::vector<Index>& predecessors(std::size_t r, Index v) const { return pred_[r][v]; }
    bool has_edge(std::size_t r, Index u, Index v) const;

    std::size_t unary_count(std::size_t p) const;
    std::size_t edge_count(std::size_t r) const { return edge_counts_[r]; }

    UnaryInterpretation unary_interpretation() const;
    BinaryInterpretation binary_interpretation() const;

    friend bool operator==(const RelationalModel& a, const RelationalModel& b);

private:
    std::vector<ElementId> names_;
    std::map<ElementId, Index> index_;
    std::vector<std::string> unary_names_;
    std::vector<std::string> binary_names_;
    std::vector<std::vector<char>> unary_;
    std::vector<std::vector<std::vector<Index>>> succ_;
    std::vector<std::vector<std::vector<Index>>> pred_;
    std::vector<std::size_t> edge_counts_;
};

/// Incremental construction helper; `build()` performs the validation.
class ModelBuilder {
public:
    ModelBuilder& element(ElementId v);
    ModelBuilder& declare_unary(const std::string& p);
    ModelBuilder& declare_binary(const std::string& r);
    ModelBuilder& unary(const std::string& p, ElementId v);
    ModelBuilder& binary(const std::string& r, ElementId u, ElementId v);
    RelationalModel build() const;

private:
    std::vector<ElementId> domain_;
    UnaryInterpretation unary_;
    BinaryInterpretation binary_;
};

/// |domain| plus the number of tuples in every relation.
std::size_t model_size(const RelationalModel& m);

std::set<std::string> unary_profile(const RelationalModel& m, const ElementId& v);

std::set<ElementId> successors(const RelationalModel& m, const std::string& r,
                               const ElementId& v);

/// Tree unfolding of `m` from `root`, cut at `depth` edges.
struct Unraveling {
    RelationalModel tree;
    ElementId root;
    /// Tree node -> element of the source model it copies.
    std::map<ElementId, ElementId> origin;
};

Unraveling unravel(const RelationalModel& m, const ElementId& root, std::size_t depth);

/// Single root, every other node has exactly one incoming edge, every node
/// reachable from the root, no cycles.
bool is_tree(const RelationalModel& m, const ElementId& root);

struct Quotient {
    RelationalModel model;
    /// Element of the input -> class id. A class is named after its
    /// lexicographically smallest member.
    std::map<ElementId, ElementId> class_of;
};

/// `classes` must partition the domain. A class is in a unary relation when
/// some member is, and classes are related when some members are.
Quotient quotient(const RelationalModel& m, const std::vector<std::vector<ElementId>>& classes);

/// Domain {1..n}, one binary relation `r` with (i,j) for every i < j.
RelationalModel linear_order_model(std::size_t n);

/// Forward-reachable part of `m` from `root` (all binary relations), with
/// the vocabulary of `m` kept declared.
RelationalModel reachable_submodel(const RelationalModel& m, const ElementId& root);

}  // namespace lgre
