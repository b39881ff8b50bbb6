// keyform: command-line front end for the key form / contractibility library.
//
//   keyform analyze   [spec] [--series S | --pairs P | --generic G] [--r N] [--json] [--force-keyforms]
//   keyform keyforms  [spec] ... [--all]
//   keyform classify  [spec] ...
//   keyform dualgraph [spec] ... [--format dot|json]
//   keyform singlepair [spec] ... --poly F
//   keyform sweep     [--max-p N] [--seed S]
//
// Exit codes: 0 success (whatever the verdict), 2 parse error, 3 precondition violation, 4 internal error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "keyform/report.hpp"

namespace {

struct Options {
    std::string spec_file, series, pairs, generic, poly, format = "dot";
    std::int64_t r = -1;
    bool json = false, all = false, force = false;
    std::int64_t max_p = 7;
    std::uint64_t seed = 20240501;
};

void add_input(CLI::App* c, Options& o) {
    c->add_option("spec", o.spec_file, "spec file (key = value lines)");
    c->add_option("--series", o.series, "local series, e.g. \"u^(3/5) + u^2\"");
    c->add_option("--pairs", o.pairs, "characteristic pairs, e.g. \"[(3,5),(23,2)]\"");
    c->add_option("--generic", o.generic, "generic degree-wise series with one xi*x^r term");
    c->add_option("--r", o.r, "number of extra blow-ups");
    c->add_flag("--json", o.json, "machine-readable output");
}

keyform::CurveSpec load(const Options& o) {
    keyform::CurveSpec s;
    if (!o.spec_file.empty()) {
        std::ifstream in(o.spec_file);
        if (!in) throw keyform::PreconditionError("cannot open spec file " + o.spec_file);
        std::stringstream buf;
        buf << in.rdbuf();
        s = keyform::parse_spec(buf.str());
        if (!o.series.empty() || !o.pairs.empty() || !o.generic.empty())
            throw keyform::PreconditionError("give either a spec file or --series/--pairs/--generic");
        if (o.r >= 0) s.r = o.r;
        return s;
    }
    return keyform::make_spec(o.series, o.pairs, o.generic, o.r < 0 ? 0 : o.r);
}

void emit(const keyform::Json& j, bool json) {
    if (json) std::cout << j.dump(2) << "\n";
    else std::cout << keyform::render_text(j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"key forms, semigroup conditions and dual graphs of curve germs"};
    app.require_subcommand(1);
    Options o;
    auto* analyze = app.add_subcommand("analyze", "full report");
    add_input(analyze, o);
    analyze->add_flag("--force-keyforms", o.force, "compute key forms even when not contractible");
    auto* keyforms = app.add_subcommand("keyforms", "essential key forms");
    add_input(keyforms, o);
    keyforms->add_flag("--all", o.all, "print every key form");
    auto* classify = app.add_subcommand("classify", "semigroup conditions");
    add_input(classify, o);
    auto* dualgraph = app.add_subcommand("dualgraph", "weighted dual graph");
    add_input(dualgraph, o);
    dualgraph->add_option("--format", o.format, "dot or json")->check(CLI::IsMember({"dot", "json"}));
    auto* singlepair = app.add_subcommand("singlepair", "one-pair truncation test");
    add_input(singlepair, o);
    singlepair->add_option("--poly", o.poly, "Weierstrass polynomial in u, v")->required();
    auto* sweep = app.add_subcommand("sweep", "single-pair coherence sweep");
    sweep->add_option("--max-p", o.max_p, "largest p");
    sweep->add_option("--seed", o.seed, "seed for random witness coefficients");
    sweep->add_flag("--json", o.json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (analyze->parsed()) emit(keyform::analyze_json(load(o), o.force), o.json);
        else if (keyforms->parsed()) emit(keyform::keyforms_json(load(o), o.all), o.json);
        else if (classify->parsed()) emit(keyform::classify_json(load(o)), o.json);
        else if (singlepair->parsed()) emit(keyform::singlepair_json(load(o), o.poly), o.json);
        else if (sweep->parsed()) emit(keyform::sweep_json(o.max_p, o.seed), o.json);
        else if (dualgraph->parsed()) {
            auto s = load(o);
            if (o.format == "json" || o.json) std::cout << keyform::dualgraph_json(s).dump(2) << "\n";
            else std::cout << keyform::export_dot(keyform::build_dual_graph(s.characteristic(), s.r));
        }
    } catch (const keyform::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const keyform::PreconditionError& e) {
        std::cerr << "precondition: " << e.what() << "\n";
        return 3;
    } catch (const keyform::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
