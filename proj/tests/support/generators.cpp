#include "generators.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "lgre/model_io.hpp"

#ifndef LGRE_DATA_DIR
#error "LGRE_DATA_DIR must point at the data/ directory"
#endif

namespace lgre::testing {

namespace {

const std::vector<std::string> kUnary = {"p", "q", "s", "u"};
const std::vector<std::string> kBinary = {"r", "t", "w"};

template <class T>
const T& pick(std::mt19937& rng, const std::vector<T>& items) {
    std::uniform_int_distribution<std::size_t> d(0, items.size() - 1);
    return items[d(rng)];
}

bool coin(std::mt19937& rng, double p) { return std::bernoulli_distribution(p)(rng); }

DlFormula leaf(std::mt19937& rng, const RelationalModel& m, bool negated_atoms) {
    if (m.unary_names().empty() || coin(rng, 0.15)) return DlFormula::top();
    DlFormula a = DlFormula::atom(pick(rng, m.unary_names()));
    if (negated_atoms && coin(rng, 0.35)) return DlFormula::negation(a);
    return a;
}

DlFormula grow(std::mt19937& rng, const RelationalModel& m, std::size_t depth, Language l) {
    const bool atomic_negation = l == Language::elan;
    if (depth == 0 || coin(rng, 0.2)) return leaf(rng, m, atomic_negation);
    std::vector<int> kinds = {0, 1};  // conjunction, exists
    if (l == Language::alc) kinds.push_back(2);
    if (m.binary_names().empty()) kinds.erase(kinds.begin() + 1);
    switch (pick(rng, kinds)) {
        case 0:
            return DlFormula::conjunction(grow(rng, m, depth - 1, l), grow(rng, m, depth - 1, l));
        case 1:
            return DlFormula::exists(pick(rng, m.binary_names()), grow(rng, m, depth - 1, l));
        default:
            return DlFormula::negation(grow(rng, m, depth - 1, l));
    }
}

}  // namespace

RelationalModel random_model(std::mt19937& rng, const RandomModelShape& shape) {
    std::uniform_int_distribution<std::size_t> size(shape.min_size, shape.max_size);
    const std::size_t n = size(rng);
    ModelBuilder b;
    for (std::size_t i = 0; i < n; ++i) b.element("e" + std::to_string(i));
    for (std::size_t k = 0; k < shape.unary; ++k) {
        b.declare_unary(kUnary.at(k));
        for (std::size_t i = 0; i < n; ++i)
            if (coin(rng, shape.p_unary)) b.unary(kUnary[k], "e" + std::to_string(i));
    }
    for (std::size_t k = 0; k < shape.binary; ++k) {
        b.declare_binary(kBinary.at(k));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (coin(rng, shape.p_edge))
                    b.binary(kBinary[k], "e" + std::to_string(i), "e" + std::to_string(j));
    }
    return b.build();
}

DlFormula random_dl(std::mt19937& rng, const RelationalModel& m, std::size_t depth,
                    bool negation) {
    return grow(rng, m, depth, negation ? Language::alc : Language::el);
}

DlFormula random_dl_in(std::mt19937& rng, const RelationalModel& m, std::size_t depth,
                       Language l) {
    if (l != Language::el && l != Language::elan && l != Language::alc)
        throw std::invalid_argument("random_dl_in: EL, ELAN or ALC only");
    return grow(rng, m, depth, l);
}

std::string scene_path() { return std::string(LGRE_DATA_DIR) + "/scene.lgre"; }

RelationalModel scene() { return load_model(scene_path()); }

std::vector<RelationalModel> functional_models_up_to_iso(std::size_t max_size) {
    const std::vector<ElementId> names = {"a", "b", "c", "d", "e", "f"};
    if (max_size > names.size()) throw std::invalid_argument("max_size too large");
    std::vector<RelationalModel> out;
    for (std::size_t n = 1; n <= max_size; ++n) {
        // A model is a labeling (bit per element) plus a successor per element,
        // where n stands for "no successor".
        std::set<std::vector<std::size_t>> seen;
        std::size_t functions = 1;
        for (std::size_t i = 0; i < n; ++i) functions *= n + 1;
        for (std::size_t labels = 0; labels < (std::size_t{1} << n); ++labels) {
            for (std::size_t code = 0; code < functions; ++code) {
                std::vector<std::size_t> succ(n);
                std::size_t c = code;
                for (std::size_t i = 0; i < n; ++i) {
                    succ[i] = c % (n + 1);
                    c /= n + 1;
                }
                std::vector<std::size_t> perm(n);
                std::iota(perm.begin(), perm.end(), std::size_t{0});
                std::vector<std::size_t> best;
                do {
                    // perm maps old index -> new index
                    std::vector<std::size_t> key(2 * n);
                    for (std::size_t i = 0; i < n; ++i) {
                        key[perm[i]] = (labels >> i) & 1U;
                        key[n + perm[i]] = succ[i] == n ? n : perm[succ[i]];
                    }
                    if (best.empty() || key < best) best = key;
                } while (std::next_permutation(perm.begin(), perm.end()));
                if (!seen.insert(best).second) continue;
                ModelBuilder b;
                b.declare_unary("p").declare_binary("r");
                for (std::size_t i = 0; i < n; ++i) b.element(names[i]);
                for (std::size_t i = 0; i < n; ++i) {
                    if (best[i]) b.unary("p", names[i]);
                    if (best[n + i] != n) b.binary("r", names[i], names[best[n + i]]);
                }
                out.push_back(b.build());
            }
        }
    }
    return out;
}

}  // namespace lgre::testing
