#include <map>
#include <unordered_map>

#include "lgre/formula.hpp"

namespace lgre {

namespace {

using Mask = std::vector<char>;

class DlEvaluator {
public:
    explicit DlEvaluator(const RelationalModel& m) : m_(m) {}

    const Mask& eval(const DlFormula& phi) {
        auto it = memo_.find(phi.node());
        if (it != memo_.end()) return it->second;
        const std::size_t n = m_.size();
        Mask out(n, 0);
        switch (phi.kind()) {
            case DlKind::top:
                out.assign(n, 1);
                break;
            case DlKind::atom: {
                auto p = m_.unary_index(phi.name());
                if (!p) throw EvaluationError("model has no unary relation '" + phi.name() + "'");
                for (Index v = 0; v < n; ++v) out[v] = m_.holds(*p, v) ? 1 : 0;
                break;
            }
            case DlKind::negation: {
                const Mask& c = eval(phi.left());
                for (Index v = 0; v < n; ++v) out[v] = c[v] ? 0 : 1;
                break;
            }
            case DlKind::conjunction: {
                const Mask& a = eval(phi.left());
                const Mask& b = eval(phi.right());
                for (Index v = 0; v < n; ++v) out[v] = (a[v] && b[v]) ? 1 : 0;
                break;
            }
            case DlKind::exists: {
                auto r = m_.binary_index(phi.name());
                if (!r) throw EvaluationError("model has no binary relation '" + phi.name() + "'");
                const Mask& c = eval(phi.left());
                for (Index v = 0; v < n; ++v) {
                    for (Index w : m_.successors(*r, v)) {
                        if (c[w]) {
                            out[v] = 1;
                            break;
                        }
                    }
                }
                break;
            }
        }
        return memo_.emplace(phi.node(), std::move(out)).first->second;
    }

private:
    const RelationalModel& m_;
    std::unordered_map<const void*, Mask> memo_;
};

// Row-major tuples: position 0 is the most significant digit, so appending a
// component multiplies the index by |D|.
class FoEvaluator {
public:
    explicit FoEvaluator(const RelationalModel& m) : m_(m) {}

    // `env[i]` is the tuple position holding x_i, or -1 when x_i is unbound.
    Mask eval(const FoFormula& phi, std::size_t arity, const std::vector<int>& env) {
        const Key key{phi.node(), arity, env};
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Mask out = compute(phi, arity, env);
        memo_.emplace(key, out);
        return out;
    }

private:
    using Key = std::tuple<const void*, std::size_t, std::vector<int>>;

    std::size_t power(std::size_t arity) const {
        std::size_t total = 1;
        for (std::size_t i = 0; i < arity; ++i) {
            total *= m_.size();
            if (total > (std::size_t{1} << 28)) {
                throw EvaluationError("first-order extension too large to enumerate");
            }
        }
        return total;
    }

    int position(const std::vector<int>& env, int variable) const {
        if (variable < 0 || static_cast<std::size_t>(variable) >= env.size() || env[variable] < 0) {
            throw EvaluationError("free variable x" + std::to_string(variable) + " out of range");
        }
        return env[variable];
    }

    // Decode one component of a row-major tuple index.
    std::size_t component(std::size_t index, std::size_t arity, int pos) const {
        std::size_t shift = 1;
        for (std::size_t i = static_cast<std::size_t>(pos) + 1; i < arity; ++i) shift *= m_.size();
        return (index / shift) % m_.size();
    }

    Mask compute(const FoFormula& phi, std::size_t arity, const std::vector<int>& env) {
        const std::size_t total = power(arity);
        Mask out(total, 0);
        switch (phi.kind()) {
            case FoKind::top:
                out.assign(total, 1);
                break;
            case FoKind::inequality: {
                const int a = position(env, phi.variables()[0]);
                const int b = position(env, phi.variables()[1]);
                for (std::size_t t = 0; t < total; ++t) {
                    out[t] = component(t, arity, a) != component(t, arity, b) ? 1 : 0;
                }
                break;
            }
            case FoKind::relation: {
                const auto& vars = phi.variables();
                if (vars.size() == 1) {
                    auto p = m_.unary_index(phi.name());
                    if (!p) throw EvaluationError("model has no unary relation '" + phi.name() + "'");
                    const int a = position(env, vars[0]);
                    for (std::size_t t = 0; t < total; ++t) {
                        out[t] = m_.holds(*p, component(t, arity, a)) ? 1 : 0;
                    }
                } else if (vars.size() == 2) {
                    auto r = m_.binary_index(phi.name());
                    if (!r) throw EvaluationError("model has no binary relation '" + phi.name() + "'");
                    const int a = position(env, vars[0]);
                    const int b = position(env, vars[1]);
                    for (std::size_t t = 0; t < total; ++t) {
                        out[t] = m_.has_edge(*r, component(t, arity, a), component(t, arity, b)) ? 1 : 0;
                    }
                } else {
                    throw EvaluationError("relations of arity " + std::to_string(vars.size()) +
                                          " are not supported");
                }
                break;
            }
            case FoKind::negation: {
                const Mask c = eval(phi.left(), arity, env);
                for (std::size_t t = 0; t < total; ++t) out[t] = c[t] ? 0 : 1;
                break;
            }
            case FoKind::conjunction: {
                const Mask a = eval(phi.left(), arity, env);
                const Mask b = eval(phi.right(), arity, env);
                for (std::size_t t = 0; t < total; ++t) out[t] = (a[t] && b[t]) ? 1 : 0;
                break;
            }
            case FoKind::exists: {
                // The bound variable is read from the new last position,
                // which renames it to x_{n+1} without touching the AST.
                const int bound = phi.variables().front();
                std::vector<int> inner = env;
                if (static_cast<std::size_t>(bound) >= inner.size()) inner.resize(bound + 1, -1);
                inner[bound] = static_cast<int>(arity);
                const Mask body = eval(phi.left(), arity + 1, inner);
                const std::size_t d = m_.size();
                for (std::size_t t = 0; t < total; ++t) {
                    for (std::size_t a = 0; a < d; ++a) {
                        if (body[t * d + a]) {
                            out[t] = 1;
                            break;
                        }
                    }
                }
                break;
            }
        }
        return out;
    }

    const RelationalModel& m_;
    std::map<Key, Mask> memo_;
};

}  // namespace

std::vector<char> eval_dl_mask(const DlFormula& phi, const RelationalModel& m) {
    DlEvaluator ev(m);
    return ev.eval(phi);
}

std::set<ElementId> eval_dl(const DlFormula& phi, const RelationalModel& m) {
    const Mask mask = eval_dl_mask(phi, m);
    std::set<ElementId> out;
    for (Index v = 0; v < m.size(); ++v) {
        if (mask[v]) out.insert(m.name(v));
    }
    return out;
}

std::vector<char> eval_fo_mask(const FoFormula& phi, const RelationalModel& m, std::size_t n) {
    for (int v : free_variables(phi)) {
        if (static_cast<std::size_t>(v) > n) {
            throw EvaluationError("free variable x" + std::to_string(v) + " exceeds arity " +
                                  std::to_string(n));
        }
    }
    std::vector<int> env(n + 1, -1);
    for (std::size_t i = 1; i <= n; ++i) env[i] = static_cast<int>(i - 1);
    FoEvaluator ev(m);
    return ev.eval(phi, n, env);
}

std::set<Tuple> eval_fo(const FoFormula& phi, const RelationalModel& m, std::size_t n) {
    const Mask mask = eval_fo_mask(phi, m, n);
    std::set<Tuple> out;
    const std::size_t d = m.size();
    for (std::size_t t = 0; t < mask.size(); ++t) {
        if (!mask[t]) continue;
        Tuple tuple(n);
        std::size_t rest = t;
        for (std::size_t i = n; i-- > 0;) {
            tuple[i] = m.name(rest % d);
            rest /= d;
        }
        out.insert(std::move(tuple));
    }
    return out;
}

std::set<ElementId> extension(const Formula& phi, const RelationalModel& m) {
    if (const auto* dl = std::get_if<DlFormula>(&phi)) return eval_dl(*dl, m);
    std::set<ElementId> out;
    for (const auto& t : eval_fo(std::get<FoFormula>(phi), m, 1)) out.insert(t.front());
    return out;
}

}  // namespace lgre
