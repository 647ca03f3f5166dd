#include <doctest.h>

#include <map>
#include <random>

#include "generators.hpp"
#include "lgre/formula.hpp"
#include "lgre/model_io.hpp"
#include "oracles.hpp"

using namespace lgre;
using lgre::testing::scene;

namespace {

using Set = std::set<ElementId>;

const char* kGamma1 = "dog & small & some sniffs . dog";
const char* kGamma2 = "dog(x1) & small(x1) & !ex x2 . !!(!!cat(x2) & !!sniffs(x1,x2))";
const char* kGamma3 = "dog(x1) & ex x2 . (x1 != x2 & dog(x2) & sniffs(x1,x2))";
const char* kGamma4 = "dog(x1) & ex x2 . (cat(x2) & small(x2) & sniffs(x2,x1))";

// Random first-order formula over the variables in `vars`. Bound variables
// take fresh indices above `next`.
FoFormula random_fo(std::mt19937& rng, const RelationalModel& m, std::vector<int> vars, int& next,
                    std::size_t depth) {
    auto pick_var = [&] {
        return vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng)];
    };
    auto pick_name = [&](const std::vector<std::string>& names) {
        return names[std::uniform_int_distribution<std::size_t>(0, names.size() - 1)(rng)];
    };
    switch (std::uniform_int_distribution<int>(0, depth == 0 ? 2 : 5)(rng)) {
        case 0:
            if (vars.size() < 2) return FoFormula::top();
            return FoFormula::inequality(pick_var(), pick_var());
        case 1:
            if (m.unary_names().empty()) return FoFormula::top();
            return FoFormula::relation(pick_name(m.unary_names()), {pick_var()});
        case 2:
            if (m.binary_names().empty()) return FoFormula::top();
            return FoFormula::relation(pick_name(m.binary_names()), {pick_var(), pick_var()});
        case 3:
            return FoFormula::negation(random_fo(rng, m, vars, next, depth - 1));
        case 4: {
            FoFormula a = random_fo(rng, m, vars, next, depth - 1);
            return FoFormula::conjunction(a, random_fo(rng, m, vars, next, depth - 1));
        }
        default: {
            const int x = ++next;
            vars.push_back(x);
            return FoFormula::exists(x, random_fo(rng, m, vars, next, depth - 1));
        }
    }
}

std::set<Tuple> all_tuples(const RelationalModel& m, std::size_t n) {
    return lgre::testing::naive_eval_fo(FoFormula::top(), m, n);
}

// Every node's parent references, counted with multiplicity.
void count_references(const DlFormula& phi, std::map<const DlNode*, int>& refs,
                      std::set<const DlNode*>& seen) {
    if (!seen.insert(phi.node()).second) return;
    std::vector<DlFormula> children;
    switch (phi.kind()) {
        case DlKind::negation:
        case DlKind::exists:
            children = {phi.left()};
            break;
        case DlKind::conjunction:
            children = {phi.left(), phi.right()};
            break;
        default:
            break;
    }
    for (const auto& c : children) {
        ++refs[c.node()];
        count_references(c, refs, seen);
    }
}

bool shares_nodes(const DlFormula& phi) {
    std::map<const DlNode*, int> refs;
    std::set<const DlNode*> seen;
    count_references(phi, refs, seen);
    for (const auto& [node, n] : refs)
        if (n > 1) return true;
    return false;
}

std::uint64_t expanded_size(const DlFormula& phi) {
    switch (phi.kind()) {
        case DlKind::negation:
        case DlKind::exists:
            return 1 + expanded_size(phi.left());
        case DlKind::conjunction:
            return 1 + expanded_size(phi.left()) + expanded_size(phi.right());
        default:
            return 1;
    }
}

}  // namespace

TEST_SUITE("logic") {

TEST_CASE("property sets per language") {
    using P = Property;
    CHECK(properties(Language::fol) ==
          std::set<P>{P::atom_l, P::atom_r, P::zig, P::zag, P::inj_l, P::inj_r});
    CHECK(properties(Language::epfol) == std::set<P>{P::atom_l, P::zig, P::inj_l});
    CHECK(properties(Language::alc) == std::set<P>{P::atom_l, P::atom_r, P::zig, P::zag});
    CHECK(properties(Language::el) == std::set<P>{P::atom_l, P::zig});
    CHECK(properties(Language::elan) == std::set<P>{P::atom_l, P::atom_r, P::zig});
    for (auto l : {Language::fol, Language::epfol, Language::alc, Language::el, Language::elan})
        CHECK(parse_language(to_string(l)) == l);
    CHECK(parse_language("elan") == Language::elan);
    CHECK_THROWS(parse_language("modal"));
}

TEST_CASE("description-logic extensions on the scene") {
    const RelationalModel s = scene();
    CHECK(eval_dl(parse_dl(kGamma1), s) == Set{"b"});
    CHECK(eval_dl(DlFormula::top(), s) == Set{"a", "b", "c", "d", "e"});
    CHECK(eval_dl(parse_dl("cat & small"), s) == Set{"c"});
    CHECK(eval_dl(parse_dl("beagle"), s) == Set{"d"});
    CHECK(eval_dl(parse_dl("!dog"), s) == Set{"c", "e"});
    CHECK_THROWS_AS(eval_dl(parse_dl("tabby"), s), EvaluationError);
    CHECK_THROWS_AS(eval_dl(parse_dl("some chases . T"), s), EvaluationError);
}

TEST_CASE("first-order extensions on the scene") {
    const RelationalModel s = scene();
    CHECK(extension(Formula{parse_fo(kGamma2)}, s) == Set{"b"});
    CHECK(extension(Formula{parse_fo(kGamma3)}, s) == Set{"b"});
    CHECK(extension(Formula{parse_fo(kGamma4)}, s) == Set{"b"});
    std::set<Tuple> off_diagonal;
    for (const auto& x : s.domain())
        for (const auto& y : s.domain())
            if (x != y) off_diagonal.insert({x, y});
    CHECK(eval_fo(FoFormula::inequality(1, 2), s, 2) == off_diagonal);
    CHECK(eval_fo(FoFormula::top(), s, 0) == std::set<Tuple>{Tuple{}});
    CHECK_THROWS_AS(eval_fo(parse_fo("sniffs(x1,x3)"), s, 2), EvaluationError);
    CHECK_THROWS_AS(eval_fo(parse_fo("chases(x1,x1)"), s, 1), EvaluationError);
}

TEST_CASE("standard translation") {
    CHECK(st_translation(parse_dl("some sniffs . dog")) ==
          parse_fo("ex x2 . (sniffs(x1,x2) & dog(x2))"));
    CHECK(st_translation(DlFormula::top()) == FoFormula::top());
    CHECK(st_translation(parse_dl("!p & q"), 3) == parse_fo("!p(x3) & q(x3)"));

    std::mt19937 rng(3);
    const RelationalModel s = scene();
    for (int i = 0; i < 300; ++i) {
        const DlFormula phi = lgre::testing::random_dl(rng, s, 5);
        const FoFormula st = st_translation(phi);
        CHECK(free_variables(st).size() <= 1);
        if (!free_variables(st).empty()) CHECK(*free_variables(st).begin() == 1);
        CHECK(has_standard_variables(st));
        CHECK(in_fragment(st, Language::epfol) == in_fragment(phi, Language::el));
    }
}

TEST_CASE("st_translation agrees with direct evaluation on random inputs") {
    std::mt19937 rng(29);
    for (int i = 0; i < 250; ++i) {
        const RelationalModel m = lgre::testing::random_model(rng, {1, 5, 2, 2, 0.4, 0.3});
        const DlFormula phi = lgre::testing::random_dl(rng, m, 5);
        const auto direct = eval_dl(phi, m);
        CHECK(direct == lgre::testing::naive_eval_dl(phi, m));
        std::set<ElementId> via_fo;
        for (const auto& t : eval_fo(st_translation(phi), m, 1)) via_fo.insert(t[0]);
        CHECK(direct == via_fo);
    }
}

TEST_CASE("first-order evaluation matches the naive evaluator and the boolean laws") {
    std::mt19937 rng(41);
    for (int i = 0; i < 200; ++i) {
        const RelationalModel m = lgre::testing::random_model(rng, {1, 4, 2, 1, 0.5, 0.3});
        const std::size_t n = 1 + i % 2;
        std::vector<int> free(n);
        for (std::size_t k = 0; k < n; ++k) free[k] = static_cast<int>(k + 1);
        int next = static_cast<int>(n);
        const FoFormula a = random_fo(rng, m, free, next, 5);
        next = static_cast<int>(n);
        const FoFormula b = random_fo(rng, m, free, next, 5);
        const auto ea = eval_fo(a, m, n);
        CHECK(ea == lgre::testing::naive_eval_fo(a, m, n));

        std::set<Tuple> complement;
        for (const auto& t : all_tuples(m, n))
            if (!ea.count(t)) complement.insert(t);
        CHECK(eval_fo(FoFormula::negation(a), m, n) == complement);

        const auto eb = eval_fo(b, m, n);
        std::set<Tuple> both;
        for (const auto& t : ea)
            if (eb.count(t)) both.insert(t);
        CHECK(eval_fo(FoFormula::conjunction(a, b), m, n) == both);
    }
}

TEST_CASE("fragment membership") {
    CHECK_FALSE(in_fragment(Formula{parse_fo(kGamma2)}, Language::epfol));
    CHECK_FALSE(in_fragment(Formula{parse_fo(kGamma2)}, Language::el));
    CHECK(in_fragment(Formula{parse_fo(kGamma2)}, Language::fol));
    CHECK(in_fragment(Formula{parse_fo(kGamma3)}, Language::epfol));
    CHECK(in_fragment(Formula{parse_fo(kGamma4)}, Language::epfol));
    CHECK_FALSE(in_fragment(Formula{parse_fo(kGamma3)}, Language::el));
    CHECK(in_fragment(parse_dl(kGamma1), Language::el));
    CHECK(in_fragment(parse_dl(kGamma1), Language::epfol));

    CHECK(in_fragment(parse_dl("dog & some sniffs . T"), Language::el));
    CHECK_FALSE(in_fragment(parse_dl("!(some sniffs . T)"), Language::elan));
    CHECK(in_fragment(parse_dl("!small"), Language::elan));
    CHECK_FALSE(in_fragment(parse_dl("!small"), Language::el));
    CHECK_FALSE(in_fragment(parse_dl("!!small"), Language::elan));
    CHECK(in_fragment(parse_dl("!(some sniffs . T)"), Language::alc));
    CHECK_FALSE(in_fragment(parse_dl("!(some sniffs . T)"), Language::epfol));
    CHECK(in_fragment(parse_dl("!(some sniffs . T)"), Language::fol));
    CHECK_FALSE(in_fragment(parse_fo("dog(x1)"), Language::alc));

    std::mt19937 rng(8);
    const RelationalModel s = scene();
    for (int i = 0; i < 200; ++i) {
        for (auto l : {Language::el, Language::elan, Language::alc}) {
            const DlFormula phi = lgre::testing::random_dl_in(rng, s, 4, l);
            CHECK(in_fragment(phi, l));
            CHECK(in_fragment(phi, Language::alc));
        }
    }
}

TEST_CASE("parsing and rendering") {
    const DlFormula g1 = parse_dl(kGamma1);
    const DlFormula dog = DlFormula::atom("dog");
    CHECK(g1 == dl_conjunction({dog, DlFormula::atom("small"), DlFormula::exists("sniffs", dog)}));
    CHECK(g1 == parse_dl(render(g1)));
    CHECK(parse_dl("T") == DlFormula::top());
    CHECK(render(DlFormula::top()) == "T");

    const FoFormula g3 = parse_fo("ex x2 . (sniffs(x1,x2) & x1 != x2 & dog(x2)) & dog(x1)");
    CHECK(extension(Formula{g3}, scene()) == Set{"b"});
    CHECK(parse_fo(render(g3)) == g3);

    // precedence and associativity
    const auto p = DlFormula::atom("p"), q = DlFormula::atom("q"), s = DlFormula::atom("s");
    CHECK(parse_dl("p & q & s") == DlFormula::conjunction(DlFormula::conjunction(p, q), s));
    CHECK(parse_dl("!p & q") == DlFormula::conjunction(DlFormula::negation(p), q));
    CHECK(parse_dl("some r . p & q") == DlFormula::exists("r", DlFormula::conjunction(p, q)));
    CHECK(parse_dl("(some r . p) & q") == DlFormula::conjunction(DlFormula::exists("r", p), q));
    CHECK(parse_dl("p & (q & s)") == DlFormula::conjunction(p, DlFormula::conjunction(q, s)));
    CHECK(parse_fo("ex x2 . p(x2) & q(x1)") ==
          FoFormula::exists(2, FoFormula::conjunction(FoFormula::relation("p", {2}),
                                                      FoFormula::relation("q", {1}))));

    CHECK_THROWS_AS(parse_dl("p &"), ParseError);
    CHECK_THROWS_AS(parse_dl("some . p"), ParseError);
    CHECK_THROWS_AS(parse_dl("(p"), ParseError);
    CHECK_THROWS_AS(parse_fo("ex y . p(y)"), ParseError);
    CHECK_THROWS_AS(parse_fo("p(x1"), ParseError);
    try {
        parse_dl("p & & q");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 5);
    }
}

TEST_CASE("rendering round trips and identifies nodes") {
    std::mt19937 rng(13);
    const RelationalModel s = scene();
    std::vector<DlFormula> pool;
    for (int i = 0; i < 300; ++i) {
        const DlFormula phi = lgre::testing::random_dl(rng, s, 4);
        CHECK(parse_dl(render(phi)) == phi);
        const FoFormula st = st_translation(phi);
        CHECK(parse_fo(render(st)) == st);
        pool.push_back(phi);
    }
    for (std::size_t i = 0; i < pool.size(); ++i)
        for (std::size_t j = i; j < pool.size(); j += 7)
            CHECK((pool[i] == pool[j]) == (render(pool[i]) == render(pool[j])));
}

TEST_CASE("dag and tree sizes") {
    const DlFormula top = DlFormula::top();
    const DlFormula phi = DlFormula::conjunction(top, DlFormula::exists("r", top));
    CHECK(dag_size(phi) == 3);
    CHECK(tree_size(phi) == 4);

    DlFormula doubling = DlFormula::atom("p");
    for (int k = 1; k <= 20; ++k) {
        doubling = DlFormula::conjunction(doubling, doubling);
        CHECK(dag_size(doubling) == static_cast<std::size_t>(k + 1));
        CHECK(tree_size(doubling) == (std::uint64_t{1} << (k + 1)) - 1);
    }
    for (int k = 21; k <= 70; ++k) doubling = DlFormula::conjunction(doubling, doubling);
    CHECK(tree_size(doubling) == UINT64_MAX);

    std::mt19937 rng(19);
    const RelationalModel s = scene();
    for (int i = 0; i < 300; ++i) {
        const DlFormula f = lgre::testing::random_dl(rng, s, 6);
        CHECK(tree_size(f) == expanded_size(f));
        CHECK(tree_size(f) >= dag_size(f));
        CHECK((tree_size(f) == dag_size(f)) == !shares_nodes(f));
        CHECK(tree_size(st_translation(f)) >= dag_size(st_translation(f)));
    }
}

}  // TEST_SUITE
