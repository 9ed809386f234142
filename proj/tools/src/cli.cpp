#include "might_cli/cli.hpp"

#include <ostream>

#include <CLI11.hpp>

#include "might/errors.hpp"
#include "might/parallel.hpp"

namespace might::cli {
namespace {

void add_threads(CLI::App* cmd, int& threads) {
    threads = default_worker_count();
    cmd->add_option("--threads", threads, "Worker threads (default: MIGHT_THREADS or 1)")
        ->check(CLI::PositiveNumber);
}

void add_solver(CLI::App* cmd, SolverOverrides& o) {
    cmd->add_option("--kappa", o.kappa, "Threshold decay factor in (0, 1)");
    cmd->add_option("--c0", o.c0, "Column scaling constant");
    cmd->add_option("--c1", o.c1, "Final dynamic threshold constant");
    cmd->add_option("--c2", o.c2, "Initial threshold constant");
    cmd->add_option("--c3", o.c3, "Fixed-stage threshold constant");
    cmd->add_option("--c4", o.c4, "Fixed-stage length constant");
    cmd->add_option("--c-ic", o.c_ic, "Information criterion penalty weight");
    cmd->add_option("--s0-grid", o.s0_grid, "Candidate s0 values")->delimiter(',');
    cmd->add_option("--max-iters", o.max_total_iters, "Iteration cap per solve");
    cmd->add_option("--global-s0", o.global_s0, "Use one s0 for every node instead of tuning");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Joint estimation of Gaussian graphical models by multi-task hard thresholding",
                 "might"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);

    EstimateArgs est;
    auto* c_est = app.add_subcommand("estimate", "Fit K precision matrices from K datasets");
    c_est->add_option("--data", est.data, "CSV file of one dataset (repeat per dataset)")
        ->required();
    c_est->add_option("--out", est.out, "Output directory")->required();
    c_est->add_option("--config", est.config, "JSON configuration file");
    c_est->add_flag("--no-symmetrize", est.no_symmetrize, "Write the column-wise estimate");
    c_est->add_flag("--no-center", est.no_center, "Do not subtract column means");
    add_threads(c_est, est.threads);
    add_solver(c_est, est.overrides);

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Write one synthetic replication to disk");
    c_sim->add_option("--spec", sim.spec, "Experiment spec JSON (defaults when omitted)");
    c_sim->add_option("--out", sim.out, "Output directory")->required();
    c_sim->add_option("--replication", sim.replication, "Replication number, 1-based");

    BenchmarkArgs bench;
    auto* c_bench = app.add_subcommand("benchmark", "Run a replicated synthetic experiment");
    c_bench->add_option("--spec", bench.spec, "Experiment spec JSON (defaults when omitted)");
    c_bench->add_option("--out", bench.out, "Output directory")->required();
    c_bench->add_option("--replications", bench.replications, "Override the replication count");
    c_bench->add_option("--seed", bench.seed, "Override the master seed");
    add_threads(c_bench, bench.threads);

    InferArgs inf;
    auto* c_inf = app.add_subcommand("infer", "Standard errors, z-scores and confidence intervals");
    c_inf->add_option("--data", inf.data, "CSV file of one dataset (repeat per dataset)")
        ->required();
    c_inf->add_option("--estimate", inf.estimate, "Directory holding theta_<k>.csv")->required();
    c_inf->add_option("--out", inf.out, "Output CSV (stdout when omitted)");
    c_inf->add_option("--level", inf.level, "Confidence level in (0, 1)");
    c_inf->add_option("--hypothesized", inf.hypothesized, "Null value for the z-scores");
    c_inf->add_flag("--no-center", inf.no_center, "Do not subtract column means");
    add_threads(c_inf, inf.threads);

    ClassifyArgs cls;
    auto* c_cls = app.add_subcommand("classify", "Quadratic discriminant analysis, one class per dataset");
    c_cls->add_option("--data", cls.data, "CSV file of one class (repeat per class)");
    c_cls->add_option("--split", cls.split, "Training fraction per class")
        ->check(CLI::Range(0.0, 1.0));
    c_cls->add_option("--seed", cls.seed, "Seed of the stratified split");
    c_cls->add_option("--rounding", cls.rounding, "Training size rounding: floor or nearest");
    c_cls->add_option("--train", cls.train, "Training CSV of one class (repeat per class)");
    c_cls->add_option("--test", cls.test, "Test CSV of one class (repeat per class)");
    c_cls->add_option("--estimate", cls.estimate, "Use precision matrices from this directory");
    c_cls->add_option("--estimate-on", cls.estimate_on, "Refit on this portion (only 'train')");
    c_cls->add_option("--config", cls.config, "JSON configuration file for the refit");
    c_cls->add_option("--out", cls.out, "Output directory")->required();
    c_cls->add_flag("--no-center", cls.no_center, "Do not center classes before the refit");
    add_threads(c_cls, cls.threads);
    add_solver(c_cls, cls.overrides);
    c_cls->get_option("--estimate")->excludes(c_cls->get_option("--estimate-on"));
    c_cls->get_option("--split")->excludes(c_cls->get_option("--train"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*c_est) cmd_estimate(est, out);
        else if (*c_sim) cmd_simulate(sim, out);
        else if (*c_bench) cmd_benchmark(bench, out);
        else if (*c_inf) cmd_infer(inf, out, err);
        else if (*c_cls) cmd_classify(cls, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.category() == ErrorCategory::input ? 2 : 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace might::cli
