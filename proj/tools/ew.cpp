// ew: drives the random-matrix experiments and writes reproducible CSVs.
//
// Exit codes: 0 success, 1 validation error, 2 I/O error, 3 numerical error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ew/cli.hpp"

namespace {

struct Flags {
    std::string config_path;
    std::string spec_name;
    bool spec_given = false;
    double param = 0.0;
    bool param_given = false;
};

void add_common(CLI::App* cmd, ew::RunConfig& rc, Flags& fl) {
    cmd->add_option("--config", fl.config_path, "JSON config file; flags override it");
    cmd->add_option("--spec", fl.spec_name,
                    "process kind: IIDGaussian, IIDRademacher, AR1, MarkovTwoState, "
                    "EquiCorrelated");
    cmd->add_option("--param", fl.param, "process parameter (phi / stay_prob / rho)");
    cmd->add_option("--n", rc.n, "matrix dimension");
    cmd->add_option("--n-grid", rc.n_grid, "dimension grid")->delimiter(',');
    cmd->add_option("--k", rc.k, "moment order");
    cmd->add_option("--trials", rc.trials, "number of Monte Carlo trials");
    cmd->add_option("--seed", rc.seed, "base seed")->envname("EW_SEED");
    cmd->add_option("--bins", rc.bins, "histogram bin / grid point count");
    cmd->add_option("--out", rc.out, "output CSV path");
    cmd->add_option("--threads", rc.threads, "worker threads");
}

void finalize(const CLI::App* cmd, ew::RunConfig& rc, const Flags& fl) {
    // precedence: flag > config file > default
    if (!fl.config_path.empty()) {
        std::ifstream in(fl.config_path);
        if (!in) throw ew::io_error("cannot open config file: " + fl.config_path);
        nlohmann::json j;
        in >> j;
        ew::RunConfig from_file = rc;
        ew::apply_config_file(from_file, j);
        for (const char* name :
             {"--n", "--n-grid", "--k", "--trials", "--seed", "--bins", "--out",
              "--threads"}) {
            if (cmd->count(name) > 0) continue;
            // keep file value for unset flags
            if (std::string(name) == "--n") rc.n = from_file.n;
            else if (std::string(name) == "--n-grid") rc.n_grid = from_file.n_grid;
            else if (std::string(name) == "--k") rc.k = from_file.k;
            else if (std::string(name) == "--trials") rc.trials = from_file.trials;
            else if (std::string(name) == "--seed") rc.seed = from_file.seed;
            else if (std::string(name) == "--bins") rc.bins = from_file.bins;
            else if (std::string(name) == "--out") rc.out = from_file.out;
            else if (std::string(name) == "--threads") rc.threads = from_file.threads;
        }
        if (cmd->count("--spec") == 0 && cmd->count("--param") == 0)
            rc.spec = from_file.spec;
    }
    if (cmd->count("--spec") > 0) rc.spec.kind = ew::kind_from_name(fl.spec_name);
    if (cmd->count("--param") > 0) rc.spec.param = fl.param;
    ew::validate(rc.spec);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semicircle-law experiments for matrices with stationary diagonals"};
    app.require_subcommand(1);

    ew::RunConfig rc;
    rc.threads = ew::default_threads();
    Flags fl;

    auto* simulate = app.add_subcommand("simulate", "eigenvalue trials: KS distance, moments, histogram");
    auto* partitions = app.add_subcommand("partitions", "exact pair-partition sequence counts");
    auto* oracle = app.add_subcommand("oracle", "exact Wick trace moment vs Monte Carlo");
    auto* fluctuation = app.add_subcommand("fluctuation", "fourth-moment fluctuation scaling");
    auto* semicircle = app.add_subcommand("semicircle", "semicircle density/CDF/moment tables");
    for (auto* cmd : {simulate, partitions, oracle, fluctuation, semicircle})
        add_common(cmd, rc, fl);

    CLI11_PARSE(app, argc, argv);
    auto* cmd = app.get_subcommands().front();

    try {
        finalize(cmd, rc, fl);
        if (cmd == simulate) ew::cmd_simulate(rc);
        else if (cmd == partitions) ew::cmd_partitions(rc);
        else if (cmd == oracle) ew::cmd_oracle(rc);
        else if (cmd == fluctuation) ew::cmd_fluctuation(rc);
        else ew::cmd_semicircle(rc);
    } catch (const ew::io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ew::numerical_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
