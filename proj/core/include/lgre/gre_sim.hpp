#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgre/formula.hpp"
#include "lgre/model.hpp"

namespace lgre {

/// One refinement step: remove w from S(u) because (u,v) is an r edge and no
/// r-successor of w lies in S(v).
struct Choice {
    ElementId u;
    ElementId v;
    ElementId w;
    std::string r;
};

/// A scheduler emitted a step whose guard does not hold.
class SchedulerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Decides which pending refinement step runs next.
///
/// fifo keeps per-edge counters and a queue of steps in discovery order.
/// naive rescans every (r, u, v, w) in sorted order and takes the first
/// enabled step. The two linear-order schedules and explicit scripts emit
/// their fixed steps first and then hand over to fifo until the fixpoint.
struct Scheduler {
    enum class Kind { fifo, naive, adversarial_exponential, quadratic, script };

    Kind kind = Kind::fifo;
    std::vector<Choice> steps;

    static Scheduler fifo() { return {Kind::fifo, {}}; }
    static Scheduler naive() { return {Kind::naive, {}}; }
    /// Only valid on linear_order_model(n).
    static Scheduler adversarial_exponential() { return {Kind::adversarial_exponential, {}}; }
    /// Only valid on linear_order_model(n).
    static Scheduler quadratic() { return {Kind::quadratic, {}}; }
    static Scheduler script(std::vector<Choice> steps) { return {Kind::script, std::move(steps)}; }

    /// Tags: fifo, naive, adversarial, quadratic.
    static Scheduler parse(const std::string& tag);
};

std::string to_string(Scheduler::Kind kind);

/// The fixed steps of the two linear-order schedules for n elements.
std::vector<Choice> adversarial_schedule(std::size_t n);
std::vector<Choice> quadratic_schedule(std::size_t n);

struct RefinementStats {
    /// Counter initializations, counter decrements and queue pops (fifo), or
    /// guard evaluations (naive and scripted prefixes).
    std::uint64_t operations = 0;
    /// Executed steps, one element removed from one S(u) each.
    std::uint64_t removals = 0;
    /// Number of times the loop invariant was checked.
    std::uint64_t invariant_checks = 0;
};

struct SimulationState {
    Language language = Language::el;
    std::map<ElementId, std::set<ElementId>> S;
    /// Empty when only similarity was computed.
    std::map<ElementId, DlFormula> F;
    RefinementStats stats;
};

struct GreSimOptions {
    /// Evaluate every F(u) after initialization and after every step and
    /// throw std::logic_error when the loop invariant fails.
    bool check_invariant = false;
    /// One line per step: `remove w from S(u) because r,v`.
    std::ostream* trace = nullptr;
};

/// S(v) is the EL (or ELAN) simulator set of v. L must be EL or ELAN.
SimulationState compute_similarity(const RelationalModel& m, Language l,
                                   const Scheduler& sched = Scheduler::fifo(),
                                   const GreSimOptions& options = {});

/// As compute_similarity, and also builds F(v) with extension S(v).
SimulationState compute_gre(const RelationalModel& m, Language l,
                            const Scheduler& sched = Scheduler::fifo(),
                            const GreSimOptions& options = {});

/// F(v) when S(v) = {v}, nothing otherwise. Throws ModelError for an element
/// the state does not know.
std::optional<DlFormula> re_for(const SimulationState& state, const ElementId& v);

/// Some F(v) with v in T whose extension is exactly T. Sound only: a set
/// may have an EL description even when no single F(v) is one.
std::optional<DlFormula> re_for_set(const SimulationState& state, const std::set<ElementId>& T);

struct Blowup {
    std::size_t dag_size;
    std::uint64_t tree_size;
    DlFormula formula;
};

/// Sizes of F(1) after compute_gre on linear_order_model(n).
Blowup measure_blowup(std::size_t n, const Scheduler& sched);

}  // namespace lgre
