#include "hyptctl/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hyptctl/dot.hpp"
#include "hyptctl/formula_parser.hpp"
#include "hyptctl/fragment.hpp"
#include "hyptctl/imitator.hpp"
#include "hyptctl/model_parser.hpp"
#include "hyptctl/oracle.hpp"
#include "hyptctl/reduce.hpp"

namespace hyptctl {

namespace {

constexpr const char* kVersion = "hyptctl 0.1.0";

TopPtr formula_from_arg(const std::string& arg) {
    if (std::filesystem::exists(arg)) return load_formula_file(arg);
    return parse_formula(arg);
}

ParamValuation parse_valuation(const std::string& text) {
    ParamValuation v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("valuation entries look like p1=3/2: '" + item + "'");
        std::string name = item.substr(0, eq);
        auto val = rational_from_string(item.substr(eq + 1));
        if (!val) throw std::runtime_error("bad rational in valuation: '" + item + "'");
        v[name] = *val;
    }
    return v;
}

/// The single temporal node the export path compiles; Boolean structure
/// around it is handled by the built-in driver instead.
const TemporalFormula* single_temporal_node(const TopPtr& e) {
    if (!e) return nullptr;
    if (e->kind == TopExpr::Kind::Temporal) return &e->temporal;
    const TemporalFormula* found = nullptr;
    for (const TopPtr& child : {e->a, e->b}) {
        const TemporalFormula* f = single_temporal_node(child);
        if (f) {
            if (found) return nullptr;  // more than one
            found = f;
        }
    }
    return found;
}

struct CommonOpts {
    std::string model_path;
    std::string formula_arg;
    std::string backend = "builtin";
    std::string time_domain = "dense";
    double timeout = 300.0;
    int max_depth = 0;
    int jobs = 1;
    unsigned seed = 0;
    bool json = false;

    SynthOptions synth() const {
        SynthOptions o;
        o.timeout_seconds = timeout;
        if (max_depth > 0) o.max_depth = max_depth;
        o.time_domain = time_domain == "discrete" ? SynthOptions::TimeDomain::Discrete
                                                  : SynthOptions::TimeDomain::Dense;
        return o;
    }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_backend = true) {
    cmd->add_option("-m,--model", o.model_path, "model file (.pta)")->required();
    cmd->add_option("-f,--formula", o.formula_arg, "formula file or inline text")->required();
    if (with_backend)
        cmd->add_option("--backend", o.backend, "builtin|export")
            ->check(CLI::IsMember({"builtin", "export"}));
    cmd->add_option("--timeout", o.timeout, "seconds per temporal sub-call");
    cmd->add_option("--max-depth", o.max_depth, "exploration depth cut (0 = unbounded)");
    cmd->add_option("--time", o.time_domain, "dense|discrete")
        ->check(CLI::IsMember({"dense", "discrete"}));
    cmd->add_option("--jobs", o.jobs, "worker parallelism (results are unaffected)");
    cmd->add_option("--seed", o.seed, "seed for randomized test generators only");
}

int do_export(const Pta& model, const TopPtr& psi, const std::string& outdir,
              const std::string& base, std::ostream& out, std::ostream& err) {
    TopPtr core = desugar(psi);
    const TemporalFormula* node = single_temporal_node(core);
    if (!node) {
        err << "error: the export path needs exactly one temporal operator; "
               "split the formula or use the builtin backend\n";
        return 2;
    }
    ReductionArtifacts art = build_reduction(model, *node);
    for (auto& w : art.warnings) err << "warning: " << w << "\n";
    auto [mp, pp] = export_imitator(art, outdir, base);
    out << "wrote " << mp << "\n";
    out << "wrote " << pp << "\n";
    std::ofstream dot(std::filesystem::path(outdir) / (base + ".dot"));
    dot << to_dot(art.product);
    out << "wrote " << (std::filesystem::path(outdir) / (base + ".dot")).string() << "\n";
    if (!art.ext_legend.empty()) {
        out << "fresh propositions:\n";
        for (auto& [prop, pred] : art.ext_legend) out << "  " << prop << " = " << pred << "\n";
    }
    return 0;
}

}  // namespace

int cli_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Model checking and parameter synthesis for parametric timed automata "
                 "against nest-free timed hyperproperties"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonOpts synth_o, check_o, reduce_o, classify_o;
    std::string synth_out, reduce_out = "out";
    bool check_universal = false;

    CLI::App* synth = app.add_subcommand("synth", "synthesize the parameter valuation set");
    add_common(synth, synth_o);
    synth->add_flag("--json", synth_o.json, "print the set as JSON with exact fractions");
    synth->add_option("-o,--outdir", synth_out, "directory for export artifacts");

    CLI::App* check = app.add_subcommand("check", "decide emptiness and print a witness");
    add_common(check, check_o);
    check->add_flag("--universal", check_universal,
                    "check that every valuation satisfies the formula");

    CLI::App* reduce = app.add_subcommand("reduce", "build and export the reduced product");
    add_common(reduce, reduce_o, /*with_backend=*/false);
    reduce->add_option("-o,--outdir", reduce_out, "output directory");

    CLI::App* classify = app.add_subcommand("classify", "report the decidable-fragment flags");
    add_common(classify, classify_o, /*with_backend=*/false);

    std::string oracle_model, oracle_formula, oracle_valuation, oracle_grid;
    int oracle_horizon = 10;
    CLI::App* oracle = app.add_subcommand("oracle", "bounded discrete-time reference evaluation");
    oracle->add_option("--model", oracle_model, "model file")->required();
    oracle->add_option("--formula", oracle_formula, "formula file or inline text")->required();
    oracle->add_option("--valuation", oracle_valuation, "p1=2,p2=3");
    oracle->add_option("--horizon", oracle_horizon, "duration and step bound");
    oracle->add_option("--exists-grid", oracle_grid,
                       "comma-separated candidates for exists-quantified parameters");

    std::string dump_model, dump_formula;
    int dump_compose = 1;
    bool dump_dot = false, dump_observers = false;
    CLI::App* dump = app.add_subcommand("dump", "render a model");
    dump->add_option("-m,--model", dump_model, "model file")->required();
    dump->add_flag("--dot", dump_dot, "Graphviz output");
    dump->add_option("--self-compose", dump_compose, "render the n-fold self-composition");
    dump->add_option("-f,--formula", dump_formula, "formula whose observers to render");
    dump->add_flag("--observers", dump_observers,
                   "render the formula's observers with a fresh-proposition legend");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (synth->parsed()) {
            Pta model = load_pta_file(synth_o.model_path);
            TopPtr psi = formula_from_arg(synth_o.formula_arg);
            if (synth_o.backend == "export") {
                std::string base = std::filesystem::path(synth_o.model_path).stem().string();
                return do_export(model, psi, synth_out.empty() ? "out" : synth_out, base, out,
                                 err);
            }
            try {
                ReduceOutcome r = reduce_synth(model, psi, synth_o.synth());
                for (auto& w : r.warnings) err << "warning: " << w << "\n";
                out << (synth_o.json ? r.result.to_json() : r.result.to_text()) << "\n";
                return r.truncated ? 3 : 0;
            } catch (const BackendUnsupported& e) {
                err << "error: " << e.message << "\n";
                return 2;
            }
        }
        if (check->parsed()) {
            Pta model = load_pta_file(check_o.model_path);
            TopPtr psi = formula_from_arg(check_o.formula_arg);
            try {
                CheckOutcome r = model_check(model, psi, check_o.synth(), check_universal);
                for (auto& w : r.warnings) err << "warning: " << w << "\n";
                switch (r.verdict) {
                    case CheckOutcome::Verdict::Sat: {
                        out << "SAT\n";
                        if (r.witness) {
                            out << "witness:";
                            for (auto& [p, v] : *r.witness)
                                out << " " << p << "=" << rational_to_string(v);
                            out << "\n";
                        }
                        return 0;
                    }
                    case CheckOutcome::Verdict::Unsat: out << "UNSAT\n"; return 1;
                    case CheckOutcome::Verdict::Unknown:
                        out << "UNKNOWN (truncated exploration)\n";
                        return 3;
                }
            } catch (const BackendUnsupported& e) {
                err << "error: " << e.message << "\n";
                return 2;
            }
        }
        if (reduce->parsed()) {
            Pta model = load_pta_file(reduce_o.model_path);
            TopPtr psi = formula_from_arg(reduce_o.formula_arg);
            std::string base = std::filesystem::path(reduce_o.model_path).stem().string();
            return do_export(model, psi, reduce_out, base, out, err);
        }
        if (classify->parsed()) {
            Pta model = load_pta_file(classify_o.model_path);
            TopPtr psi = formula_from_arg(classify_o.formula_arg);
            FragmentReport r =
                classify_fragment(model, psi, classify_o.time_domain == "discrete");
            out << r.to_text();
            return 0;
        }
        if (oracle->parsed()) {
            Pta model = load_pta_file(oracle_model);
            TopPtr psi = formula_from_arg(oracle_formula);
            ParamValuation v =
                oracle_valuation.empty() ? ParamValuation{} : parse_valuation(oracle_valuation);
            std::vector<Rational> grid;
            if (!oracle_grid.empty()) {
                std::stringstream ss(oracle_grid);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    auto q = rational_from_string(item);
                    if (!q) throw std::runtime_error("bad rational in grid: " + item);
                    grid.push_back(*q);
                }
            }
            bool holds = oracle_eval_top(model, v, psi, oracle_horizon, grid);
            out << (holds ? "true" : "false") << "\n";
            return 0;
        }
        if (dump->parsed()) {
            Pta model = load_pta_file(dump_model);
            if (dump_observers) {
                if (dump_formula.empty()) {
                    err << "usage error: --observers needs a formula\n";
                    return 2;
                }
                TopPtr psi = desugar(formula_from_arg(dump_formula));
                const TemporalFormula* node = single_temporal_node(psi);
                if (!node) {
                    err << "error: the formula needs exactly one temporal operator\n";
                    return 2;
                }
                ReductionArtifacts art = build_reduction(model, *node);
                out << "# fresh propositions\n";
                for (auto& [prop, pred] : art.ext_legend)
                    out << "#   " << prop << " = " << pred << "\n";
                ObserverProduct obs =
                    build_observer_product(TopExpr::mk_temporal(art.reduced));
                for (auto& o : obs.observers) out << to_dot(o);
                return 0;
            }
            if (dump_compose > 1) model = self_compose(model, dump_compose).pta;
            if (dump_dot)
                out << to_dot(model);
            else
                out << "locations: " << model.locations.size()
                    << ", edges: " << model.edges.size() << "\n";
            return 0;
        }
    } catch (const ParseError& e) {
        err << "error: " << e.to_string() << "\n";
        return 2;
    } catch (const IdentifierError& e) {
        err << "error: " << e.message << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace hyptctl
