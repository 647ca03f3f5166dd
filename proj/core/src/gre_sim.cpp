#include "lgre/gre_sim.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <ostream>
#include <tuple>

namespace lgre {

namespace {

class Engine {
public:
    Engine(const RelationalModel& m, Language l, bool build_f, const GreSimOptions& options)
        : m_(m), l_(l), build_f_(build_f), options_(options) {
        if (l != Language::el && l != Language::elan) {
            throw std::invalid_argument("simulator-set GRE supports EL and ELAN, not " +
                                        to_string(l));
        }
        const std::size_t n = m.size();
        in_s_.assign(n, std::vector<char>(n, 0));
        for (Index v = 0; v < n; ++v) {
            for (Index u = 0; u < n; ++u) in_s_[v][u] = initially_simulates(v, u);
        }
        if (build_f_) {
            for (Index v = 0; v < n; ++v) {
                std::vector<DlFormula> literals;
                for (std::size_t p = 0; p < m.unary_names().size(); ++p) {
                    const DlFormula atom = DlFormula::atom(m.unary_names()[p]);
                    if (m.holds(p, v)) {
                        literals.push_back(atom);
                    } else if (l == Language::elan) {
                        literals.push_back(DlFormula::negation(atom));
                    }
                }
                f_.push_back(dl_conjunction(literals));
            }
            conjuncts_.resize(n);
        }
        check_invariant();
    }

    void run(const Scheduler& sched) {
        switch (sched.kind) {
            case Scheduler::Kind::fifo:
                break;
            case Scheduler::Kind::naive:
                run_naive();
                return;
            case Scheduler::Kind::adversarial_exponential:
                require_linear_order("adversarial");
                run_script(adversarial_schedule(m_.size()));
                break;
            case Scheduler::Kind::quadratic:
                require_linear_order("quadratic");
                run_script(quadratic_schedule(m_.size()));
                break;
            case Scheduler::Kind::script:
                run_script(sched.steps);
                break;
        }
        run_fifo();
    }

    SimulationState state() && {
        SimulationState out;
        out.language = l_;
        for (Index v = 0; v < m_.size(); ++v) {
            auto& set = out.S[m_.name(v)];
            for (Index u = 0; u < m_.size(); ++u) {
                if (in_s_[v][u]) set.insert(m_.name(u));
            }
            if (build_f_) out.F.emplace(m_.name(v), f_[v]);
        }
        out.stats = stats_;
        return out;
    }

private:
    bool initially_simulates(Index v, Index u) const {
        for (std::size_t p = 0; p < m_.unary_names().size(); ++p) {
            if (m_.holds(p, v) && !m_.holds(p, u)) return false;
            if (l_ == Language::elan && m_.holds(p, u) && !m_.holds(p, v)) return false;
        }
        return true;
    }

    void require_linear_order(const char* tag) const {
        if (m_.size() < 2 || !(m_ == linear_order_model(m_.size()))) {
            throw SchedulerError(std::string("the ") + tag +
                                 " schedule is defined only on the linear-order family");
        }
    }

    bool guard(std::size_t r, Index u, Index v, Index w) const {
        if (!m_.has_edge(r, u, v) || !in_s_[u][w]) return false;
        for (Index x : m_.successors(r, w)) {
            if (in_s_[v][x]) return false;
        }
        return true;
    }

    void remove(std::size_t r, Index u, Index v, Index w) {
        in_s_[u][w] = 0;
        ++stats_.removals;
        if (options_.trace) {
            *options_.trace << "remove " << m_.name(w) << " from S(" << m_.name(u)
                            << ") because " << m_.binary_names()[r] << ',' << m_.name(v) << '\n';
        }
        if (build_f_) {
            const DlFormula diamond = DlFormula::exists(m_.binary_names()[r], f_[v]);
            if (conjuncts_[u].insert(diamond).second) {
                f_[u] = DlFormula::conjunction(f_[u], diamond);
            }
        }
        if (counting_) {
            for (std::size_t r2 = 0; r2 < m_.binary_names().size(); ++r2) {
                for (Index x : m_.predecessors(r2, w)) {
                    ++stats_.operations;
                    if (--count_[r2][x][u] == 0 && !m_.predecessors(r2, u).empty()) enqueue(r2, u, x);
                }
            }
        }
        check_invariant();
    }

    void check_invariant() {
        if (!options_.check_invariant || !build_f_) return;
        ++stats_.invariant_checks;
        for (Index u = 0; u < m_.size(); ++u) {
            const auto ext = eval_dl_mask(f_[u], m_);
            if (!ext[u]) {
                throw std::logic_error("loop invariant broken: " + m_.name(u) +
                                       " does not satisfy F(" + m_.name(u) + ")");
            }
            for (Index x = 0; x < m_.size(); ++x) {
                if (ext[x] && !in_s_[u][x]) {
                    throw std::logic_error("loop invariant broken: " + m_.name(x) +
                                           " satisfies F(" + m_.name(u) + ") but is not in S(" +
                                           m_.name(u) + ")");
                }
            }
        }
    }

    void run_script(const std::vector<Choice>& steps) {
        for (const Choice& c : steps) {
            const auto u = m_.find(c.u), v = m_.find(c.v), w = m_.find(c.w);
            const auto r = m_.binary_index(c.r);
            const std::string shown =
                "(u=" + c.u + ", v=" + c.v + ", w=" + c.w + ", r=" + c.r + ")";
            if (!u || !v || !w || !r) {
                throw SchedulerError("scheduler step " + shown + " names an unknown element or relation");
            }
            ++stats_.operations;
            if (!guard(*r, *u, *v, *w)) {
                throw SchedulerError("scheduler step " + shown + " violates the refinement guard");
            }
            remove(*r, *u, *v, *w);
        }
    }

    void run_naive() {
        const std::size_t n = m_.size();
        for (;;) {
            bool found = false;
            for (std::size_t r = 0; r < m_.binary_names().size() && !found; ++r) {
                for (Index u = 0; u < n && !found; ++u) {
                    for (Index v : m_.successors(r, u)) {
                        for (Index w = 0; w < n; ++w) {
                            ++stats_.operations;
                            if (guard(r, u, v, w)) {
                                remove(r, u, v, w);
                                found = true;
                                break;
                            }
                        }
                        if (found) break;
                    }
                }
            }
            if (!found) return;
        }
    }

    // count_[r][w][v] = |succ_r(w) ∩ S(v)|. When it drops to zero, w joins
    // the pending set of (r, v), and every u with an r edge to v must lose
    // w. Pending sets are processed whole, in queue order, so all removals
    // caused by one v share the same F(v).
    void run_fifo() {
        const std::size_t n = m_.size();
        const std::size_t nr = m_.binary_names().size();
        count_.assign(nr, std::vector<std::vector<std::size_t>>(n, std::vector<std::size_t>(n, 0)));
        pending_.assign(nr, std::vector<std::vector<Index>>(n));
        queued_.assign(nr, std::vector<char>(n, 0));
        for (std::size_t r = 0; r < nr; ++r) {
            for (Index v = 0; v < n; ++v) {
                for (Index x = 0; x < n; ++x) {
                    if (!in_s_[v][x]) continue;
                    for (Index w : m_.predecessors(r, x)) {
                        ++stats_.operations;
                        ++count_[r][w][v];
                    }
                }
            }
        }
        counting_ = true;
        for (std::size_t r = 0; r < nr; ++r) {
            for (Index v = 0; v < n; ++v) {
                if (m_.predecessors(r, v).empty()) continue;
                for (Index w = 0; w < n; ++w) {
                    ++stats_.operations;
                    if (count_[r][w][v] == 0) enqueue(r, v, w);
                }
            }
        }
        while (!queue_.empty()) {
            const auto [r, v] = queue_.front();
            queue_.pop_front();
            queued_[r][v] = 0;
            const std::vector<Index> batch = std::move(pending_[r][v]);
            pending_[r][v].clear();
            for (Index u : m_.predecessors(r, v)) {
                for (Index w : batch) {
                    ++stats_.operations;
                    if (in_s_[u][w]) remove(r, u, v, w);
                }
            }
        }
        counting_ = false;
    }

    void enqueue(std::size_t r, Index v, Index w) {
        pending_[r][v].push_back(w);
        if (!queued_[r][v]) {
            queued_[r][v] = 1;
            queue_.emplace_back(r, v);
        }
    }

    const RelationalModel& m_;
    Language l_;
    bool build_f_;
    GreSimOptions options_;
    std::vector<std::vector<char>> in_s_;
    std::vector<DlFormula> f_;
    std::vector<std::set<DlFormula>> conjuncts_;
    std::vector<std::vector<std::vector<std::size_t>>> count_;
    std::vector<std::vector<std::vector<Index>>> pending_;
    std::vector<std::vector<char>> queued_;
    std::deque<std::pair<std::size_t, Index>> queue_;
    bool counting_ = false;
    RefinementStats stats_;
};

SimulationState run(const RelationalModel& m, Language l, const Scheduler& sched,
                    const GreSimOptions& options, bool build_f) {
    Engine engine(m, l, build_f, options);
    engine.run(sched);
    return std::move(engine).state();
}

}  // namespace

Scheduler Scheduler::parse(const std::string& tag) {
    std::string t;
    for (char c : tag) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t == "fifo") return fifo();
    if (t == "naive") return naive();
    if (t == "adversarial" || t == "adversarial-exponential") return adversarial_exponential();
    if (t == "quadratic") return quadratic();
    throw std::invalid_argument("unknown scheduler '" + tag +
                                "' (expected fifo, naive, adversarial or quadratic)");
}

std::string to_string(Scheduler::Kind kind) {
    switch (kind) {
        case Scheduler::Kind::fifo: return "fifo";
        case Scheduler::Kind::naive: return "naive";
        case Scheduler::Kind::adversarial_exponential: return "adversarial";
        case Scheduler::Kind::quadratic: return "quadratic";
        case Scheduler::Kind::script: return "script";
    }
    return "";
}

std::vector<Choice> adversarial_schedule(std::size_t n) {
    std::vector<Choice> out;
    for (std::size_t i = 1; i + 1 <= n; ++i) {
        const std::string vw = std::to_string(n - i + 1);
        for (std::size_t u = n - i; u >= 1; --u) out.push_back({std::to_string(u), vw, vw, "r"});
    }
    return out;
}

// The chain step at k removes k+1 from S(k) and needs S(k+1) to hold no
// element above k+1, so after each chain step the remaining larger elements
// are dropped from S(k) through the same edge, which adds no conjunct. S(1)
// is instead cleared by separate steps v = w = n, ..., 3, each adding its own
// diamond to F(1).
std::vector<Choice> quadratic_schedule(std::size_t n) {
    std::vector<Choice> out;
    for (std::size_t k = n - 1; k >= 1; --k) {
        const std::string next = std::to_string(k + 1);
        out.push_back({std::to_string(k), next, next, "r"});
        if (k == 1) break;
        for (std::size_t w = n; w >= k + 2; --w) {
            out.push_back({std::to_string(k), next, std::to_string(w), "r"});
        }
    }
    for (std::size_t w = n; w >= 3; --w) {
        out.push_back({"1", std::to_string(w), std::to_string(w), "r"});
    }
    return out;
}

SimulationState compute_similarity(const RelationalModel& m, Language l, const Scheduler& sched,
                                   const GreSimOptions& options) {
    return run(m, l, sched, options, false);
}

SimulationState compute_gre(const RelationalModel& m, Language l, const Scheduler& sched,
                            const GreSimOptions& options) {
    return run(m, l, sched, options, true);
}

std::optional<DlFormula> re_for(const SimulationState& state, const ElementId& v) {
    auto it = state.S.find(v);
    if (it == state.S.end()) throw ModelError("unknown element '" + v + "'");
    auto f = state.F.find(v);
    if (f == state.F.end()) throw std::invalid_argument("state carries no formulas");
    if (it->second.size() == 1 && *it->second.begin() == v) return f->second;
    return std::nullopt;
}

std::optional<DlFormula> re_for_set(const SimulationState& state, const std::set<ElementId>& T) {
    if (T.empty()) throw std::invalid_argument("target set must be nonempty");
    for (const auto& v : T) {
        if (state.S.count(v) == 0) throw ModelError("unknown element '" + v + "'");
    }
    for (const auto& v : T) {
        if (state.S.at(v) == T) {
            auto f = state.F.find(v);
            if (f == state.F.end()) throw std::invalid_argument("state carries no formulas");
            return f->second;
        }
    }
    return std::nullopt;
}

Blowup measure_blowup(std::size_t n, const Scheduler& sched) {
    if (n < 2) throw std::invalid_argument("blow-up needs n >= 2");
    const SimulationState state = compute_gre(linear_order_model(n), Language::el, sched);
    const DlFormula f = state.F.at("1");
    return {dag_size(f), tree_size(f), f};
}

}  // namespace lgre
