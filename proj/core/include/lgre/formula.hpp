#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "lgre/model.hpp"

namespace lgre {

enum class Language { fol, epfol, alc, el, elan };

enum class Property { atom_l, atom_r, zig, zag, inj_l, inj_r };

/// Simulation clauses characterizing each language.
const std::set<Property>& properties(Language l);

std::string to_string(Language l);
std::string to_string(Property p);
/// Accepts the tags FOL, EPFOL, ALC, EL, ELAN (case-insensitive).
Language parse_language(const std::string& tag);

// ---------------------------------------------------------------------------
// Description-logic layer: T | p | !phi | phi & phi | some r . phi
// ---------------------------------------------------------------------------

enum class DlKind { top, atom, negation, conjunction, exists };

class DlNode;

/// Handle to a hash-consed node. Structurally equal formulas are the same
/// node, so `==` is pointer identity.
class DlFormula {
public:
    static DlFormula top();
    static DlFormula atom(const std::string& p);
    static DlFormula negation(const DlFormula& child);
    static DlFormula conjunction(const DlFormula& left, const DlFormula& right);
    static DlFormula exists(const std::string& r, const DlFormula& child);

    DlKind kind() const;
    /// Unary name for atoms, binary name for exists.
    const std::string& name() const;
    /// Child of negation and exists; left conjunct of a conjunction.
    DlFormula left() const;
    DlFormula right() const;

    const DlNode* node() const { return node_.get(); }
    /// Creation serial of the node; unique among live nodes.
    std::uint64_t serial() const;

    friend bool operator==(const DlFormula& a, const DlFormula& b) { return a.node_ == b.node_; }
    friend bool operator<(const DlFormula& a, const DlFormula& b) { return a.serial() < b.serial(); }

private:
    explicit DlFormula(std::shared_ptr<const DlNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const DlNode> node_;
    friend class DlNode;
    friend struct DlInterner;
};

/// Left-nested conjunction in list order; the empty list is T.
DlFormula dl_conjunction(const std::vector<DlFormula>& conjuncts);

// ---------------------------------------------------------------------------
// First-order layer: T | xi != xj | r(x..) | !phi | phi & phi | ex xi . phi
// ---------------------------------------------------------------------------

enum class FoKind { top, inequality, relation, negation, conjunction, exists };

class FoNode;

class FoFormula {
public:
    static FoFormula top();
    static FoFormula inequality(int i, int j);
    static FoFormula relation(const std::string& r, std::vector<int> variables);
    static FoFormula negation(const FoFormula& child);
    static FoFormula conjunction(const FoFormula& left, const FoFormula& right);
    /// Binds variable x_`variable` in `child`.
    static FoFormula exists(int variable, const FoFormula& child);

    FoKind kind() const;
    const std::string& name() const;
    /// Arguments of a relation atom, the pair of an inequality, or the
    /// single bound variable of an exists.
    const std::vector<int>& variables() const;
    FoFormula left() const;
    FoFormula right() const;

    const FoNode* node() const { return node_.get(); }
    std::uint64_t serial() const;

    friend bool operator==(const FoFormula& a, const FoFormula& b) { return a.node_ == b.node_; }
    friend bool operator<(const FoFormula& a, const FoFormula& b) { return a.serial() < b.serial(); }

private:
    explicit FoFormula(std::shared_ptr<const FoNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const FoNode> node_;
    friend class FoNode;
    friend struct FoInterner;
};

FoFormula fo_conjunction(const std::vector<FoFormula>& conjuncts);

using Formula = std::variant<DlFormula, FoFormula>;

// ---------------------------------------------------------------------------
// Structural queries
// ---------------------------------------------------------------------------

/// EL: no negation. ELAN: negation only directly above atoms. ALC: any DL
/// formula. EPFOL: no negation. FOL: anything. A DL formula is judged for
/// EPFOL/FOL by its standard translation; a first-order formula is never a
/// member of EL, ELAN or ALC.
bool in_fragment(const DlFormula& phi, Language l);
bool in_fragment(const FoFormula& phi, Language l);
bool in_fragment(const Formula& phi, Language l);

/// Number of distinct DAG nodes.
std::size_t dag_size(const DlFormula& phi);
std::size_t dag_size(const FoFormula& phi);
std::size_t dag_size(const Formula& phi);

/// Node count of the expanded syntax tree, computed over the DAG and
/// saturating at UINT64_MAX.
std::uint64_t tree_size(const DlFormula& phi);
std::uint64_t tree_size(const FoFormula& phi);
std::uint64_t tree_size(const Formula& phi);

std::set<int> free_variables(const FoFormula& phi);

/// True when no variable is bound twice, no variable occurs both free and
/// bound, and bound indices increase left to right.
bool has_standard_variables(const FoFormula& phi);

/// Standard translation with free variable x_`first`. Every existential
/// binds a fresh index larger than all indices used to its left.
FoFormula st_translation(const DlFormula& phi, int first = 1);

// ---------------------------------------------------------------------------
// Text
// ---------------------------------------------------------------------------

std::string render(const DlFormula& phi);
std::string render(const FoFormula& phi);
std::string render(const Formula& phi);

DlFormula parse_dl(const std::string& text);
FoFormula parse_fo(const std::string& text);

enum class Layer { dl, fo };
Formula parse_formula(const std::string& text, Layer layer);

// ---------------------------------------------------------------------------
// Semantics
// ---------------------------------------------------------------------------

/// Extension of a DL formula as a membership vector over m's sorted domain.
std::vector<char> eval_dl_mask(const DlFormula& phi, const RelationalModel& m);
std::set<ElementId> eval_dl(const DlFormula& phi, const RelationalModel& m);

using Tuple = std::vector<ElementId>;

/// Extension at arity n, as a row-major membership vector of length |D|^n.
std::vector<char> eval_fo_mask(const FoFormula& phi, const RelationalModel& m, std::size_t n);
std::set<Tuple> eval_fo(const FoFormula& phi, const RelationalModel& m, std::size_t n);

/// Elements satisfying a formula with (at most) x1 free.
std::set<ElementId> extension(const Formula& phi, const RelationalModel& m);

}  // namespace lgre
