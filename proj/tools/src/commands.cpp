#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <tuple>

#include "might/errors.hpp"
#include "might/inference.hpp"
#include "might/io.hpp"
#include "might/parallel.hpp"
#include "might_cli/cli.hpp"

namespace might::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void make_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw FileError(dir, "cannot create directory: " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

std::string theta_name(std::size_t k) { return "theta_" + std::to_string(k + 1) + ".csv"; }

void write_matrices(const std::string& dir, const std::string& stem,
                    const std::vector<Matrix>& matrices, const std::vector<std::string>& names) {
    for (std::size_t k = 0; k < matrices.size(); ++k)
        io::write_csv(join(dir, stem + std::to_string(k + 1) + ".csv"), matrices[k], names);
}

std::vector<std::string> default_names(Index p) {
    std::vector<std::string> names;
    for (Index i = 0; i < p; ++i) names.push_back("V" + std::to_string(i + 1));
    return names;
}

json node_trace_json(const NodeTrace& t) {
    const SolveTrace& s = t.solve;
    return {{"node", t.node + 1},
            {"s0", t.s0},
            {"criteria", t.criteria},
            {"iterations", s.iterations},
            {"stage_boundary", s.stage_boundary},
            {"union_support", s.union_support},
            {"total_support", s.total_support},
            {"residual_sq_norm", s.residual_sq_norm},
            {"lambda_0", s.lambda_0},
            {"lambda_inf", s.lambda_inf},
            {"lambda_fix", s.lambda_fix},
            {"sigma_dynamic", s.sigma_dynamic},
            {"sigma_fixed", s.sigma_fixed},
            {"lambdas", s.lambdas}};
}

json supports_json(const JointPrecision& fit, const std::vector<std::string>& names) {
    const SupportSets sets = support_sets(fit);
    auto one_based = [](const std::vector<Index>& v) {
        std::vector<Index> out;
        for (Index i : v) out.push_back(i + 1);
        return out;
    };
    json nodes = json::array();
    for (Index j = 0; j < fit.num_covariates(); ++j) {
        json per = json::array();
        for (std::size_t k = 0; k < fit.num_datasets(); ++k)
            per.push_back(one_based(sets.neighbors[k][static_cast<std::size_t>(j)]));
        const auto ju = static_cast<std::size_t>(j);
        nodes.push_back({{"node", j + 1},
                         {"name", names[ju]},
                         {"neighbors", per},
                         {"union", one_based(sets.union_neighbors[ju])},
                         {"union_size", sets.union_size[ju]},
                         {"edge_count", sets.edge_count[ju]},
                         {"average_frequency", sets.average_frequency(j)}});
    }
    return {{"covariates", names},
            {"symmetrized", fit.symmetrized},
            {"indexing", "1-based"},
            {"nodes", nodes}};
}

DatasetCollection prepare(const DatasetCollection& raw, bool center_data) {
    validate(raw);
    return center_data ? center(raw) : raw;
}

DatasetCollection load(const std::vector<std::string>& paths, bool center_data) {
    if (paths.empty()) throw InvalidArgument("at least one --data file is required");
    return prepare(io::load_collection(paths), center_data);
}

EstimateConfig load_estimate_config(const std::string& path, const SolverOverrides& overrides) {
    EstimateConfig config;
    if (!path.empty()) config = estimate_config_from_json(read_json(path));
    overrides.apply(config.options.solver);
    if (overrides.global_s0) config.options.global_s0 = overrides.global_s0;
    return config;
}

}  // namespace

const char* version() { return MIGHT_VERSION; }

void SolverOverrides::apply(SolverConfig& c) const {
    if (kappa) c.kappa = *kappa;
    if (c0) c.c0 = *c0;
    if (c1) c.c1 = *c1;
    if (c2) c.c2 = *c2;
    if (c3) c.c3 = *c3;
    if (c4) c.c4 = *c4;
    if (c_ic) c.c_ic = *c_ic;
    if (s0_grid) c.s0_grid = *s0_grid;
    if (max_total_iters) c.max_total_iters = *max_total_iters;
}

JointPrecision read_estimate(const std::string& dir, std::size_t num_datasets) {
    JointPrecision fit;
    for (std::size_t k = 0; k < num_datasets; ++k) {
        const std::string path = join(dir, theta_name(k));
        Matrix m = io::read_csv(path).values;
        if (m.rows() != m.cols())
            throw FileError(path, "precision matrix is not square");
        if (k > 0 && m.rows() != fit.matrices.front().rows())
            throw DimensionMismatch(path + " has a different size than " + join(dir, theta_name(0)));
        fit.matrices.push_back(std::move(m));
    }
    fit.symmetrized = std::all_of(fit.matrices.begin(), fit.matrices.end(),
                                  [](const Matrix& m) { return m == m.transpose(); });
    return fit;
}

void cmd_estimate(const EstimateArgs& args, std::ostream& log) {
    EstimateConfig config = load_estimate_config(args.config, args.overrides);
    if (args.no_symmetrize) config.symmetrize = false;
    if (args.no_center) config.center = false;
    config.options.workers = args.threads;

    const DatasetCollection data = load(args.data, config.center);
    const EstimateResult result = estimate(data, config.options);
    const JointPrecision fit = config.symmetrize ? symmetrize(result.precision) : result.precision;

    make_dir(args.out);
    write_matrices(args.out, "theta_", fit.matrices, data.covariate_names());
    write_json(join(args.out, "supports.json"), supports_json(fit, data.covariate_names()));

    json nodes = json::array();
    for (const NodeTrace& t : result.traces) nodes.push_back(node_trace_json(t));
    json trace = {{"version", version()},
                  {"command", "estimate"},
                  {"inputs", args.data},
                  {"config", to_json(config)},
                  {"s0_grid", config.options.solver.resolved_grid(data.num_datasets())},
                  {"p", data.num_covariates()},
                  {"n", [&] {
                       std::vector<Index> n;
                       for (std::size_t k = 0; k < data.num_datasets(); ++k)
                           n.push_back(data.num_observations(k));
                       return n;
                   }()},
                  {"nodes", nodes}};
    write_json(join(args.out, "trace.json"), trace);
    log << "estimated " << fit.num_datasets() << " precision matrices of size "
        << fit.num_covariates() << " into " << args.out << '\n';
}

void cmd_simulate(const SimulateArgs& args, std::ostream& log) {
    ExperimentSpec spec = args.spec.empty() ? ExperimentSpec{} : spec_from_json(read_json(args.spec));
    spec.check();
    if (args.replication < 1) throw InvalidArgument("--replication is 1-based");
    const int index = args.replication - 1;
    const auto [truth, data] = simulate_replication(spec, index);

    make_dir(args.out);
    const auto names = default_names(spec.p);
    write_matrices(args.out, "truth_theta_", truth.theta, names);
    write_matrices(args.out, "data_", data.datasets(), names);

    json edges = json::array();
    for (const auto& [i, j] : truth.base_edges) edges.push_back({i + 1, j + 1});
    write_json(join(args.out, "truth.json"),
               {{"version", version()},
                {"spec", to_json(spec)},
                {"replication", args.replication},
                {"seed", replication_seed(spec.seed, index)},
                {"base_edges", edges},
                {"realized_s0", truth.realized_s0},
                {"realized_s", truth.realized_s}});
    log << "wrote " << spec.K << " datasets and true precision matrices into " << args.out << '\n';
}

void cmd_benchmark(const BenchmarkArgs& args, std::ostream& log) {
    ExperimentSpec spec = args.spec.empty() ? ExperimentSpec{} : spec_from_json(read_json(args.spec));
    if (args.replications) spec.replications = *args.replications;
    if (args.seed) spec.seed = *args.seed;
    spec.check();
    const ExperimentTable table = run_experiment(spec, args.threads);

    make_dir(args.out);
    const std::string results = join(args.out, "results.csv");
    std::ofstream csv(results);
    if (!csv) throw FileError(results, "cannot write file");
    csv << "replication,seed,metric,value\n";
    for (const ReplicationRecord& row : table.rows) {
        const std::pair<const char*, double> values[] = {
            {"frobenius", row.metrics.frobenius}, {"max_l2", row.metrics.max_l2},
            {"mcc_edge", row.metrics.mcc_edge},   {"mcc_ngbr", row.metrics.mcc_ngbr},
            {"realized_s0", row.realized_s0},
            {"realized_s", static_cast<double>(row.realized_s)}};
        for (const auto& [name, value] : values)
            csv << row.index + 1 << ',' << row.seed << ',' << name << ','
                << io::format_double(value) << '\n';
    }
    csv.close();
    if (!csv) throw FileError(results, "write failed");

    auto summary = [](const MetricSummary& s) {
        return json{{"mean", s.mean}, {"std_error", s.std_error}};
    };
    json walls = json::array();
    for (const ReplicationRecord& row : table.rows) walls.push_back(row.wall_seconds);
    write_json(join(args.out, "summary.json"),
               {{"version", version()},
                {"spec", to_json(spec)},
                {"replications", table.rows.size()},
                {"metrics",
                 {{"frobenius", summary(table.frobenius)},
                  {"max_l2", summary(table.max_l2)},
                  {"mcc_edge", summary(table.mcc_edge)},
                  {"mcc_ngbr", summary(table.mcc_ngbr)}}},
                {"wall_seconds", {{"total", table.total_wall_seconds}, {"per_replication", walls}}}});

    char line[256];
    std::snprintf(line, sizeof line,
                  "frobenius %.3f (%.3f)  max_l2 %.3f (%.3f)  mcc_edge %.2f  mcc_ngbr %.2f\n",
                  table.frobenius.mean, table.frobenius.std_error, table.max_l2.mean,
                  table.max_l2.std_error, 100 * table.mcc_edge.mean, 100 * table.mcc_ngbr.mean);
    log << line;
}

void cmd_infer(const InferArgs& args, std::ostream& table, std::ostream& log) {
    if (!(args.level > 0.0 && args.level < 1.0))
        throw InvalidArgument("--level must lie in (0, 1)");
    const DatasetCollection data = load(args.data, !args.no_center);
    const JointPrecision fit = read_estimate(args.estimate, data.num_datasets());
    if (fit.num_covariates() != data.num_covariates())
        throw DimensionMismatch("estimate has " + std::to_string(fit.num_covariates()) +
                                " covariates, data has " + std::to_string(data.num_covariates()));
    const InferenceResult result = z_scores(data, fit, args.level, args.hypothesized, args.threads);

    if (!args.out.empty()) {
        const fs::path parent = fs::path(args.out).parent_path();
        if (!parent.empty()) make_dir(parent.string());
    }
    std::ofstream file;
    std::ostream* os = &table;
    if (!args.out.empty()) {
        file.open(args.out);
        if (!file) throw FileError(args.out, "cannot write file");
        os = &file;
    }
    *os << "k,j,i,estimate,std_error,z,ci_low,ci_high\n";
    for (const InferenceEntry& e : result.entries)
        *os << e.dataset + 1 << ',' << e.node + 1 << ',' << e.row + 1 << ','
            << io::format_double(e.estimate) << ',' << io::format_double(e.std_error) << ','
            << io::format_double(e.z_score) << ',' << io::format_double(e.ci_low) << ','
            << io::format_double(e.ci_high) << '\n';
    if (file.is_open()) {
        file.close();
        if (!file) throw FileError(args.out, "write failed");
        log << result.entries.size() << " entries written to " << args.out << '\n';
    }
    if (result.floored > 0)
        log << "warning: " << result.floored << " variance estimates hit the floor\n";
}

void cmd_classify(const ClassifyArgs& args, std::ostream& log) {
    const bool use_split = args.split.has_value();
    if (use_split == !args.train.empty())
        throw InvalidArgument("give either --data with --split, or --train and --test");
    if (use_split && args.data.empty()) throw InvalidArgument("--split needs --data files");
    if (!use_split && args.test.empty()) throw InvalidArgument("--train needs --test files");
    if (!use_split && args.train.size() != args.test.size())
        throw DimensionMismatch("--train has " + std::to_string(args.train.size()) +
                                " classes, --test has " + std::to_string(args.test.size()));
    if (args.estimate_on != "train") throw InvalidArgument("--estimate-on accepts only 'train'");
    SplitRounding rounding = SplitRounding::floor;
    if (args.rounding == "nearest") rounding = SplitRounding::nearest;
    else if (args.rounding != "floor") throw InvalidArgument("--rounding is 'floor' or 'nearest'");

    DatasetCollection train, test;
    if (use_split) {
        DatasetCollection all = io::load_collection(args.data);
        validate(all);
        std::tie(train, test) = stratified_split(all, *args.split, args.seed, rounding);
    } else {
        train = io::load_collection(args.train);
        test = io::load_collection(args.test);
        validate(train);
        if (test.num_covariates() != train.num_covariates())
            throw DimensionMismatch("test files have " + std::to_string(test.num_covariates()) +
                                    " covariates, training files have " +
                                    std::to_string(train.num_covariates()));
    }
    if (train.num_datasets() < 2) throw InvalidArgument("classification needs at least 2 classes");

    JointPrecision fit;
    json source;
    if (!args.estimate.empty()) {
        fit = read_estimate(args.estimate, train.num_datasets());
        if (fit.num_covariates() != train.num_covariates())
            throw DimensionMismatch("estimate does not match the number of covariates");
        source = {{"estimate", args.estimate}};
    } else {
        EstimateConfig config = load_estimate_config(args.config, args.overrides);
        if (args.no_center) config.center = false;
        config.options.workers = args.threads;
        const DatasetCollection fit_data = prepare(train, config.center);
        fit = estimate(fit_data, config.options).precision;
        if (config.symmetrize) fit = symmetrize(fit);
        source = {{"estimate_on", "train"}, {"config", to_json(config)}};
    }

    const QdaModel model = fit_qda(train, fit);
    const std::vector<Classification> predictions = predict(model, test, args.threads);
    std::vector<std::size_t> truth, predicted;
    for (std::size_t k = 0; k < test.num_datasets(); ++k)
        for (Index l = 0; l < test.num_observations(k); ++l) truth.push_back(k);
    for (const Classification& c : predictions) predicted.push_back(c.label);
    const ClassificationReport report = report_from_labels(truth, predicted, model.num_classes());

    make_dir(args.out);
    const std::string pred_path = join(args.out, "predictions.csv");
    std::ofstream csv(pred_path);
    if (!csv) throw FileError(pred_path, "cannot write file");
    csv << "class,row,predicted";
    for (std::size_t k = 0; k < model.num_classes(); ++k) csv << ",score_" << k + 1;
    csv << '\n';
    std::size_t at = 0;
    for (std::size_t k = 0; k < test.num_datasets(); ++k)
        for (Index l = 0; l < test.num_observations(k); ++l, ++at) {
            const Classification& c = predictions[at];
            csv << k + 1 << ',' << l + 1 << ',' << c.label + 1;
            for (Index s = 0; s < c.scores.size(); ++s) csv << ',' << io::format_double(c.scores(s));
            csv << '\n';
        }
    csv.close();
    if (!csv) throw FileError(pred_path, "write failed");

    std::vector<std::vector<double>> confusion;
    for (Index r = 0; r < report.confusion.rows(); ++r) {
        std::vector<double> row;
        for (Index c = 0; c < report.confusion.cols(); ++c) row.push_back(report.confusion(r, c));
        confusion.push_back(row);
    }
    json split = use_split ? json{{"fraction", *args.split}, {"seed", args.seed},
                                  {"rounding", args.rounding}}
                           : json(nullptr);
    write_json(join(args.out, "report.json"),
               {{"version", version()},
                {"classes", model.num_classes()},
                {"split", split},
                {"source", source},
                {"tpr", report.tpr},
                {"fpr", report.fpr},
                {"accuracy", report.accuracy},
                {"mcc", report.mcc},
                {"confusion", confusion}});
    char line[160];
    std::snprintf(line, sizeof line, "accuracy %.4f  tpr %.4f  fpr %.4f  mcc %.4f\n",
                  report.accuracy, report.tpr, report.fpr, report.mcc);
    log << line;
}

}  // namespace might::cli
