#include "cli.hpp"

#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lgre/combine.hpp"
#include "lgre/formula.hpp"
#include "lgre/gre_graph.hpp"
#include "lgre/gre_sim.hpp"
#include "lgre/model_io.hpp"
#include "lgre/simulation.hpp"

namespace lgre::cli {

namespace {

using nlohmann::json;

struct Config {
    std::string model;
    std::vector<std::string> targets;
    std::string logic = "EL";
    std::string algo;
    std::string cost = "atom-count";
    std::string scheduler = "fifo";
    std::string format = "text";
    bool debug = false;
    std::string formula;
    std::string layer = "auto";
    std::string output;
    std::size_t n = 0;
    std::size_t cap = 12;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string show_set(const std::set<ElementId>& s) {
    std::string out = "{";
    for (const auto& v : s) out += (out.size() > 1 ? ", " : "") + v;
    return out + "}";
}

json as_array(const std::set<ElementId>& s) { return json(std::vector<ElementId>(s.begin(), s.end())); }

int cmd_describe(const Config& c, std::ostream& out, std::ostream& err) {
    const RelationalModel m = load_model(c.model);
    const Language l = parse_language(c.logic);
    std::string algo = c.algo;
    if (algo.empty()) algo = (l == Language::el || l == Language::elan) ? "sim" : "graph";
    if (algo == "sim" && l != Language::el && l != Language::elan) {
        throw UsageError("--algo sim supports EL and ELAN, not " + to_string(l));
    }
    if (algo != "sim" && l != Language::el && l != Language::epfol) {
        throw UsageError("--algo " + algo + " supports EPFOL and EL, not " + to_string(l));
    }
    std::set<ElementId> targets;
    for (const auto& t : c.targets) {
        if (!m.contains(t)) throw UsageError("unknown target '" + t + "'");
        targets.insert(t);
    }
    if (algo != "sim" && targets.size() != 1) {
        throw UsageError("--algo " + algo + " describes exactly one target");
    }

    std::optional<Formula> formula;
    std::optional<double> cost;
    if (algo == "sim") {
        GreSimOptions options;
        if (c.debug) options.trace = &err;
        const SimulationState state = compute_gre(m, l, Scheduler::parse(c.scheduler), options);
        auto f = targets.size() == 1 ? re_for(state, *targets.begin()) : re_for_set(state, targets);
        if (f) formula = *f;
    } else {
        GraphOptions options;
        if (c.debug) options.trace = &err;
        auto result = algo == "graph" ? make_re(m, *targets.begin(), l, options)
                                      : describe_via_minimization(m, *targets.begin(), l, options);
        if (result) {
            formula = result->formula;
            cost = result->cost;
        }
    }

    if (c.format == "json") {
        json doc = {{"formula", nullptr}, {"extension", json::array()}, {"dag_size", nullptr},
                    {"tree_size", nullptr}, {"cost", nullptr}};
        if (formula) {
            doc["formula"] = render(*formula);
            doc["extension"] = as_array(extension(*formula, m));
            doc["dag_size"] = dag_size(*formula);
            doc["tree_size"] = tree_size(*formula);
            if (cost) doc["cost"] = *cost;
        }
        out << doc.dump() << '\n';
    } else if (formula) {
        out << render(*formula) << '\n';
    } else {
        out << "no referring expression\n";
    }
    return formula ? ok : no_expression;
}

int cmd_simulate(const Config& c, std::ostream& out) {
    const RelationalModel m = load_model(c.model);
    SimulationOptions options;
    options.cap = c.cap;
    const SimulationRelation rel = maximal_simulation(m, m, parse_language(c.logic), options);
    std::map<ElementId, std::set<ElementId>> simsets;
    for (const auto& v : m.domain()) simsets[v];
    for (const auto& [u, v] : rel.pairs) simsets[u].insert(v);
    if (c.format == "json") {
        json doc = json::object();
        for (const auto& [v, s] : simsets) doc[v] = as_array(s);
        out << doc.dump() << '\n';
    } else {
        for (const auto& [v, s] : simsets) out << v << ": " << show_set(s) << '\n';
    }
    return ok;
}

Formula parse_auto(const std::string& text) {
    try {
        return parse_dl(text);
    } catch (const ParseError& dl_error) {
        try {
            return parse_fo(text);
        } catch (const ParseError& fo_error) {
            // Report whichever reading got further into the text.
            const bool fo_further = std::make_pair(fo_error.line(), fo_error.column()) >
                                    std::make_pair(dl_error.line(), dl_error.column());
            throw fo_further ? fo_error : dl_error;
        }
    }
}

int cmd_eval(const Config& c, std::ostream& out) {
    const RelationalModel m = load_model(c.model);
    Formula f = c.layer == "dl"   ? Formula{parse_dl(c.formula)}
                : c.layer == "fo" ? Formula{parse_fo(c.formula)}
                                  : parse_auto(c.formula);
    const auto ext = extension(f, m);
    if (c.format == "json") {
        json doc = {{"formula", render(f)},
                    {"extension", as_array(ext)},
                    {"dag_size", dag_size(f)},
                    {"tree_size", tree_size(f)}};
        out << doc.dump() << '\n';
    } else {
        out << show_set(ext) << '\n';
    }
    return ok;
}

int cmd_minimize(const Config& c, std::ostream& out) {
    const RelationalModel m = load_model(c.model);
    SimulationOptions options;
    options.cap = c.cap;
    const MinimizedScene scene = minimize(m, parse_language(c.logic), options);
    if (!c.output.empty()) save_model(scene.model, c.output);
    if (c.format == "json") {
        json doc = {{"classes", scene.class_of}};
        if (c.output.empty()) doc["model"] = json::parse(model_to_json(scene.model));
        out << doc.dump() << '\n';
        return ok;
    }
    if (c.output.empty()) {
        out << render_model(scene.model);
        for (const auto& [v, cls] : scene.class_of) out << "# " << v << " -> " << cls << '\n';
    } else {
        for (const auto& [v, cls] : scene.class_of) out << v << " -> " << cls << '\n';
    }
    return ok;
}

int cmd_blowup(const Config& c, std::ostream& out) {
    const Blowup b = measure_blowup(c.n, Scheduler::parse(c.scheduler));
    if (c.format == "json") {
        json doc = {{"n", c.n}, {"scheduler", c.scheduler}, {"dag_size", b.dag_size},
                    {"tree_size", b.tree_size}};
        out << doc.dump() << '\n';
    } else {
        out << "dag_size " << b.dag_size << '\n' << "tree_size " << b.tree_size << '\n';
    }
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Referring-expression generation over finite relational models", "lgre"};
    app.require_subcommand(1);
    Config c;
    const std::vector<std::string> formats{"text", "json"};
    const std::vector<std::string> logics{"FOL", "EPFOL", "ALC", "EL", "ELAN"};
    auto logic_check = CLI::IsMember(logics, CLI::ignore_case);

    auto* describe = app.add_subcommand("describe", "Find a referring expression for a target");
    describe->add_option("--model", c.model, "Model file (.json or text)")->required();
    describe->add_option("--target", c.targets, "Target element; repeat for a target set")
        ->required();
    describe->add_option("--logic", c.logic, "FOL, EPFOL, ALC, EL or ELAN")->check(logic_check);
    describe->add_option("--algo", c.algo, "sim, graph or combined")
        ->check(CLI::IsMember({"sim", "graph", "combined"}));
    describe->add_option("--cost", c.cost, "Cost of a description graph")
        ->check(CLI::IsMember({"atom-count"}));
    describe->add_option("--scheduler", c.scheduler, "fifo, naive, adversarial or quadratic")
        ->check(CLI::IsMember({"fifo", "naive", "adversarial", "quadratic"}));
    describe->add_option("--format", c.format)->check(CLI::IsMember(formats));
    describe->add_flag("--debug", c.debug, "Trace refinement steps or the search tree to stderr");

    auto* simulate = app.add_subcommand("simulate", "Print the simulator set of every element");
    simulate->add_option("--model", c.model)->required();
    simulate->add_option("--logic", c.logic)->check(logic_check);
    simulate->add_option("--cap", c.cap, "Largest domain for EPFOL/FOL brute force");
    simulate->add_option("--format", c.format)->check(CLI::IsMember(formats));

    auto* eval = app.add_subcommand("eval", "Print the extension of a formula");
    eval->add_option("--model", c.model)->required();
    eval->add_option("--formula", c.formula)->required();
    eval->add_option("--layer", c.layer, "dl, fo or auto")
        ->check(CLI::IsMember({"auto", "dl", "fo"}));
    eval->add_option("--format", c.format)->check(CLI::IsMember(formats));

    auto* minimize_cmd = app.add_subcommand("minimize", "Collapse mutually similar elements");
    minimize_cmd->add_option("--model", c.model)->required();
    minimize_cmd->add_option("--logic", c.logic)->check(logic_check);
    minimize_cmd->add_option("--output", c.output, "Write the quotient model here");
    minimize_cmd->add_option("--cap", c.cap, "Largest domain for EPFOL/FOL brute force");
    minimize_cmd->add_option("--format", c.format)->check(CLI::IsMember(formats));

    auto* blowup = app.add_subcommand("blowup", "Size of F(1) on the linear order of n elements");
    blowup->add_option("--n", c.n)->required()->check(CLI::Range(std::size_t{2}, std::size_t{4096}));
    blowup->add_option("--scheduler", c.scheduler)
        ->check(CLI::IsMember({"fifo", "naive", "adversarial", "quadratic"}));
    blowup->add_option("--format", c.format)->check(CLI::IsMember(formats));

    std::vector<const char*> argv{"lgre"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? ok : usage;
    }

    try {
        if (*describe) return cmd_describe(c, out, err);
        if (*simulate) return cmd_simulate(c, out);
        if (*eval) return cmd_eval(c, out);
        if (*minimize_cmd) return cmd_minimize(c, out);
        if (*blowup) return cmd_blowup(c, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    }
    return usage;
}

}  // namespace lgre::cli
