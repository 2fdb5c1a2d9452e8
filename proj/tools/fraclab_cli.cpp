// Command-line front end for the experiment harness.

#include <cstdio>
#include <exception>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fraclab/lab/config.hpp"
#include "fraclab/lab/experiments.hpp"
#include "fraclab/lab/output.hpp"

using namespace fraclab::lab;

namespace {

struct Overrides {
    std::string config;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    bool serial = false;
};

ExperimentConfig resolve(ExperimentKind kind, const Overrides& o) {
    ExperimentConfig c = o.config.empty() ? default_config(kind) : load_config(o.config);
    c.kind = kind;
    if (o.out_dir) c.out_dir = *o.out_dir;
    if (o.seed) c.seed = *o.seed;
    if (o.tol) c.quadrature.rel_tol = *o.tol;
    if (o.serial) c.serial = true;
    c.validate();
    return c;
}

int report(const std::vector<ExperimentTable>& tables, const ExperimentConfig& c) {
    const OutputPaths p = emit_outputs(tables, c);
    std::fputs(format_summary(tables).c_str(), stdout);
    std::printf("wrote %s\n", p.csv.c_str());
    bool ok = true;
    for (const ExperimentTable& t : tables) ok = ok && t.all_passed();
    return ok ? 0 : 1;
}

// Quick end-to-end pass over every module at reduced sizes.
int selftest(const Overrides& o) {
    std::vector<ExperimentTable> tables;
    ExperimentConfig base = resolve(ExperimentKind::solve, o);

    ExperimentConfig solve1 = base;
    solve1.datum = "constant:1";
    solve1.grid = {0.0, 0.9, 0.999};
    ExperimentTable t = run_solve(solve1);
    double worst = 0.0;
    for (const ExperimentRow& r : t.rows) worst = std::max(worst, std::abs(r.value - 1.0));
    t.checks.push_back({"constant datum reproduced", worst <= 1e-6, fmt::format("max |u - 1| {:.3e}", worst)});
    tables.push_back(t);

    ExperimentConfig lower = default_config(ExperimentKind::sweep_lower);
    lower.grid = {0.9, 0.99};
    lower.out_dir = base.out_dir;
    tables.push_back(run_lower_bound_sweep(lower));

    ExperimentConfig dini = default_config(ExperimentKind::check_dini);
    tables.push_back(run_dini_check(dini));
    dini.modulus = "log_inverse:1";
    dini.expect = "divergent";
    tables.push_back(run_dini_check(dini));

    ExperimentConfig cancel = default_config(ExperimentKind::cancellation);
    cancel.grid = {0.0, 0.9, 0.99};
    tables.push_back(run_cancellation_experiment(cancel));

    tables.push_back(run_operator_check(default_config(ExperimentKind::apply_operator)));

    ExperimentConfig geo = default_config(ExperimentKind::check_geometry);
    geo.boundary_points = 8;
    geo.samples = 1000;
    tables.push_back(run_geometry_check(geo));
    geo.domain = "cusp";
    geo.expect = "violated";
    tables.push_back(run_geometry_check(geo));

    ExperimentConfig out = base;
    out.id = "selftest";
    return report(tables, out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dirichlet problems for 2s-stable operators: solver, checks and experiment sweeps"};
    app.require_subcommand(1);
    Overrides o;
    std::string out_dir;
    std::uint64_t seed = 0;
    double tol = 0.0;

    const std::map<std::string, std::pair<std::optional<ExperimentKind>, std::string>> commands = {
        {"solve", {ExperimentKind::solve, "solve u(t e1) on the grid"}},
        {"sweep-upper", {ExperimentKind::sweep_upper, "ratio |u - g(e1)| / sigma(1 - t)"}},
        {"sweep-lower", {ExperimentKind::sweep_lower, "lower bound sweep"}},
        {"blowup", {ExperimentKind::blowup, "difference quotient for a non-Dini modulus"}},
        {"cancellation", {ExperimentKind::cancellation, "odd datum: u vanishes on the e1 axis"}},
        {"check-dini", {ExperimentKind::check_dini, "Dini integral of a modulus"}},
        {"check-geometry", {ExperimentKind::check_geometry, "exterior paraboloid test on a domain"}},
        {"apply-operator", {ExperimentKind::apply_operator, "operator of the barrier against its closed form"}},
        {"selftest", {std::nullopt, "quick check of every module"}},
    };
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, entry] : commands) {
        CLI::App* sub = app.add_subcommand(name, entry.second);
        sub->add_option("--config", o.config, "key=value configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out-dir", out_dir, "directory for CSV, plot data and summary");
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("--tol", tol, "relative quadrature tolerance")->check(CLI::PositiveNumber);
        sub->add_flag("--serial", o.serial, "run without OpenMP threads");
        subs[name] = sub;
    }
    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& [name, sub] : subs) {
            if (!sub->parsed()) continue;
            if (sub->count("--out-dir")) o.out_dir = out_dir;
            if (sub->count("--seed")) o.seed = seed;
            if (sub->count("--tol")) o.tol = tol;
            const auto& kind = commands.at(name).first;
            if (!kind) return selftest(o);
            const ExperimentConfig c = resolve(*kind, o);
            return report({run_experiment(c)}, c);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
