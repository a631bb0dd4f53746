// frx: command line front end.
//
//   frx run --config FILE [overrides...]
//   frx remainder [--p-min N] [--p-max N] [--samples N] [--seed S] [--output DIR]
//
// Exit status: 0 completed, 2 diverged (partial CSV kept), 1 error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "frx/config.hpp"
#include "frx/runner.hpp"

namespace {

struct RunFlags {
    std::string config;
    std::optional<std::string> kind, scheme, elements, precision, output;
    std::optional<int> p, threads;
    std::optional<double> re, ma, tend, cfl, dt;
    std::optional<unsigned long> seed;
    bool profile = false;
};

frx::RunConfig merge(const RunFlags& f) {
    frx::RunConfig c = f.config.empty() ? frx::RunConfig{} : frx::parse_config_file(f.config);
    if (f.kind) c.kind = frx::parse_case(*f.kind);
    if (f.scheme) c.schemes = frx::parse_scheme_list(*f.scheme);
    if (f.p) c.p = *f.p;
    if (f.elements) c.elements = frx::parse_elements(*f.elements);
    if (f.re) c.re = *f.re;
    if (f.ma) c.ma = *f.ma;
    if (f.precision) c.precision = frx::parse_precision(*f.precision);
    if (f.tend) c.tEnd = *f.tend;
    if (f.cfl) c.cfl = *f.cfl;
    if (f.dt) c.dt = *f.dt;
    if (f.output) c.output = *f.output;
    if (f.profile) c.profile = true;
    if (f.seed) c.seed = *f.seed;
    if (f.threads) c.threads = *f.threads;
    frx::validate(c);
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"High-order flux reconstruction solver: storage-scheme aliasing study"};
    app.require_subcommand(1);

    RunFlags rf;
    auto* run = app.add_subcommand("run", "run a case from a config file; flags override the file");
    run->add_option("--config", rf.config, "config file (flat TOML)")->required()->check(CLI::ExistingFile);
    run->add_option("--case", rf.kind, "icv | tgv | remainder");
    run->add_option("--scheme", rf.scheme, "A|B|C|D or a comma list");
    run->add_option("--p", rf.p, "polynomial order");
    run->add_option("--elements", rf.elements, "NX,NY,NZ");
    run->add_option("--re", rf.re, "Reynolds number (tgv)");
    run->add_option("--ma", rf.ma, "Mach number (tgv)");
    run->add_option("--precision", rf.precision, "fp32 | fp64");
    run->add_option("--tend", rf.tend, "final time");
    run->add_option("--cfl", rf.cfl, "CFL number for the fixed step");
    run->add_option("--dt", rf.dt, "fixed time step (overrides --cfl)");
    run->add_option("--output", rf.output, "output directory");
    run->add_flag("--profile", rf.profile, "time RK steps per scheme instead of a full run");
    run->add_option("--seed", rf.seed, "random seed");
    run->add_option("--threads", rf.threads, "worker threads (0 = default)");

    int pMin = 2, pMax = 5, samples = 100;
    unsigned long seed = 0;
    std::string remOut = "out";
    auto* rem = app.add_subcommand("remainder", "u^2 / u^4 interpolation remainder sweep to CSV");
    rem->add_option("--p-min", pMin, "lowest order")->capture_default_str();
    rem->add_option("--p-max", pMax, "highest order")->capture_default_str();
    rem->add_option("--samples", samples, "random series per order")->capture_default_str();
    rem->add_option("--seed", seed, "random seed")->capture_default_str();
    rem->add_option("--output", remOut, "output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : frx::kError;
    }

    try {
        if (*run) return frx::run(merge(rf));
        frx::RunConfig c;
        c.kind = frx::CaseKind::remainder;
        c.pMin = pMin;
        c.pMax = pMax;
        c.samples = samples;
        c.seed = seed;
        c.output = remOut;
        return frx::run(c);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return frx::kError;
    }
}
