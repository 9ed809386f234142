#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include <might/inference.hpp>
#include <might/io.hpp>
#include <might/simbench.hpp>
#include <might_cli/cli.hpp>

#include "helpers.hpp"

using namespace might;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "might");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes one replication of a small synthetic instance and returns its files.
std::vector<std::string> write_instance(const fs::path& dir, std::size_t K, std::uint64_t seed,
                                        Index n = 80) {
    ExperimentSpec spec;
    spec.p = 10;
    spec.K = K;
    spec.n = {n};
    spec.edge_prob = 0.25;
    spec.seed = seed;
    const auto rep = simulate_replication(spec, 0);
    std::vector<std::string> files;
    for (std::size_t k = 0; k < K; ++k) {
        const auto path = (dir / ("d" + std::to_string(k + 1) + ".csv")).string();
        io::write_csv(path, rep.data.dataset(k), rep.data.covariate_names());
        files.push_back(path);
    }
    return files;
}

std::vector<std::string> data_flags(const std::vector<std::string>& files,
                                    const std::string& flag = "--data") {
    std::vector<std::string> out;
    for (const auto& f : files) {
        out.push_back(flag);
        out.push_back(f);
    }
    return out;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("estimate writes matrices, supports and trace") {
    const auto dir = test::scratch_dir("cli_estimate");
    const auto files = write_instance(dir, 2, 1);
    const auto r = run_cli(concat({"estimate", "--out", (dir / "out").string()}, data_flags(files)));
    REQUIRE(r.code == 0);
    for (const char* f : {"theta_1.csv", "theta_2.csv", "supports.json", "trace.json"})
        CHECK(fs::exists(dir / "out" / f));
    const auto theta = io::read_csv((dir / "out" / "theta_1.csv").string());
    CHECK(theta.values == theta.values.transpose());
    const auto trace = nlohmann::json::parse(slurp(dir / "out" / "trace.json"));
    CHECK(trace.at("config").at("symmetrize") == true);
    for (const char* key : {"c0", "c1", "c2", "c3", "c4", "c_ic", "kappa"})
        CHECK(trace.at("config").at("solver").contains(key));
    CHECK(trace.at("version") == cli::version());
    const auto supports = nlohmann::json::parse(slurp(dir / "out" / "supports.json"));
    CHECK(supports.at("nodes").size() == 10);
}

TEST_CASE("no-symmetrize is honoured and recorded") {
    const auto dir = test::scratch_dir("cli_nosym");
    const auto files = write_instance(dir, 2, 2);
    const auto r = run_cli(concat({"estimate", "--no-symmetrize", "--out", (dir / "out").string()},
                                  data_flags(files)));
    REQUIRE(r.code == 0);
    const auto trace = nlohmann::json::parse(slurp(dir / "out" / "trace.json"));
    CHECK(trace.at("config").at("symmetrize") == false);
    bool asymmetric = false;
    for (const char* f : {"theta_1.csv", "theta_2.csv"}) {
        const Matrix m = io::read_csv((dir / "out" / f).string()).values;
        asymmetric = asymmetric || m != m.transpose();
    }
    CHECK(asymmetric);
}

TEST_CASE("input errors exit with 2 and name the path") {
    const auto dir = test::scratch_dir("cli_errors");
    const std::string missing = (dir / "missing.csv").string();
    auto r = run_cli({"estimate", "--data", missing, "--out", (dir / "out").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find(missing) != std::string::npos);

    Matrix x = test::gaussian(20, 3, 1);
    x.col(1).setConstant(2.0);
    io::write_csv((dir / "const.csv").string(), x, {"a", "b", "c"});
    r = run_cli({"estimate", "--data", (dir / "const.csv").string(), "--out", (dir / "o2").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("covariate 2") != std::string::npos);

    CHECK(run_cli({"estimate"}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("solver failures exit with 3 and name the node") {
    const auto dir = test::scratch_dir("cli_numeric");
    Matrix x = test::gaussian(100, 4, 5);
    for (Index i = 1; i < 4; ++i) x.col(i) = x.col(0) + 0.05 * x.col(i);
    io::write_csv((dir / "bad.csv").string(), x, {"a", "b", "c", "d"});
    const auto r = run_cli({"estimate", "--data", (dir / "bad.csv").string(), "--out",
                            (dir / "out").string(), "--no-center", "--c0", "50", "--c1", "1e-6",
                            "--c3", "1e-6"});
    CHECK(r.code == 3);
    CHECK(r.err.find("node") != std::string::npos);
}

TEST_CASE("benchmark rejects invalid specs and is reproducible") {
    const auto dir = test::scratch_dir("cli_bench");
    nlohmann::json spec = {{"p", 10}, {"K", 2}, {"n", 60}, {"rho", 0.5}, {"r", 0.2},
                           {"edge_prob", 0.2}, {"replications", 2}, {"seed", 3}};
    std::ofstream(dir / "spec.json") << spec.dump();
    const std::string s = (dir / "spec.json").string();
    REQUIRE(run_cli({"benchmark", "--spec", s, "--out", (dir / "a").string()}).code == 0);
    REQUIRE(run_cli({"benchmark", "--spec", s, "--out", (dir / "b").string(), "--threads", "4"}).code == 0);
    CHECK(slurp(dir / "a" / "results.csv") == slurp(dir / "b" / "results.csv"));
    const auto summary = nlohmann::json::parse(slurp(dir / "a" / "summary.json"));
    CHECK(summary.at("metrics").contains("frobenius"));
    CHECK(summary.contains("wall_seconds"));

    CHECK(run_cli({"benchmark", "--spec", s, "--out", (dir / "c").string(), "--replications", "0"}).code == 2);
    spec["rho"] = 1.0;
    std::ofstream(dir / "bad.json") << spec.dump();
    CHECK(run_cli({"benchmark", "--spec", (dir / "bad.json").string(), "--out", (dir / "d").string()}).code == 2);
    spec["rho"] = 0.5;
    spec["bogus"] = 1;
    std::ofstream(dir / "unknown.json") << spec.dump();
    CHECK(run_cli({"benchmark", "--spec", (dir / "unknown.json").string(), "--out", (dir / "e").string()}).code == 2);
}

TEST_CASE("simulate writes truth and data") {
    const auto dir = test::scratch_dir("cli_simulate");
    nlohmann::json spec = {{"p", 8}, {"K", 2}, {"n", 30}, {"replications", 1}, {"seed", 4}};
    std::ofstream(dir / "spec.json") << spec.dump();
    REQUIRE(run_cli({"simulate", "--spec", (dir / "spec.json").string(), "--out", (dir / "o").string()}).code == 0);
    for (const char* f : {"truth_theta_1.csv", "truth_theta_2.csv", "data_1.csv", "data_2.csv", "truth.json"})
        CHECK(fs::exists(dir / "o" / f));
    CHECK(io::read_csv((dir / "o" / "data_2.csv").string()).values.rows() == 30);
}

TEST_CASE("infer round trip matches in-memory inference") {
    const auto dir = test::scratch_dir("cli_infer");
    const auto files = write_instance(dir, 2, 6, 200);
    REQUIRE(run_cli(concat({"estimate", "--out", (dir / "est").string()}, data_flags(files))).code == 0);
    const auto r = run_cli(concat({"infer", "--estimate", (dir / "est").string(), "--out",
                                   (dir / "inf.csv").string()}, data_flags(files)));
    REQUIRE(r.code == 0);
    const auto table = io::read_csv((dir / "inf.csv").string());
    CHECK(table.header == std::vector<std::string>{"k", "j", "i", "estimate", "std_error", "z",
                                                   "ci_low", "ci_high"});

    const auto data = center(io::load_collection(files));
    JointPrecision fit;
    for (int k = 1; k <= 2; ++k)
        fit.matrices.push_back(io::read_csv((dir / "est" / ("theta_" + std::to_string(k) + ".csv")).string()).values);
    const auto mem = z_scores(data, fit, 0.95);
    REQUIRE(static_cast<Index>(mem.entries.size()) == table.values.rows());
    for (std::size_t e = 0; e < mem.entries.size(); ++e) {
        const auto row = table.values.row(static_cast<Index>(e));
        CHECK(row(0) == double(mem.entries[e].dataset + 1));
        CHECK(row(1) == double(mem.entries[e].node + 1));
        CHECK(row(2) == double(mem.entries[e].row + 1));
        CHECK(row(4) == mem.entries[e].std_error);
        CHECK(row(6) == mem.entries[e].ci_low);
    }
    CHECK(run_cli(concat({"infer", "--estimate", (dir / "est").string(), "--level", "1.5"},
                         data_flags(files))).code == 2);
}

TEST_CASE("infer on an empty support writes only diagonal rows") {
    const auto dir = test::scratch_dir("cli_infer_empty");
    const auto files = write_instance(dir, 1, 7);
    fs::create_directories(dir / "est");
    io::write_csv((dir / "est" / "theta_1.csv").string(), Matrix::Identity(10, 10),
                  io::read_csv(files[0]).header);
    const auto r = run_cli({"infer", "--data", files[0], "--estimate", (dir / "est").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("k,j,i,estimate,std_error,z,ci_low,ci_high\n", 0) == 0);
    // One row per diagonal entry and nothing off the diagonal.
    std::istringstream lines(r.out);
    std::string line;
    int rows = -1;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 10);
}

TEST_CASE("classify separates distinct classes and refits on the training split") {
    const auto dir = test::scratch_dir("cli_classify");
    std::vector<std::string> files;
    for (int k = 0; k < 2; ++k) {
        Matrix x = test::gaussian(60, 4, 30 + k);
        x.array() += 20.0 * k;
        files.push_back((dir / ("c" + std::to_string(k) + ".csv")).string());
        io::write_csv(files.back(), x, {"a", "b", "c", "d"});
    }
    const auto r = run_cli(concat({"classify", "--split", "0.8", "--seed", "7", "--out",
                                   (dir / "out").string()}, data_flags(files)));
    REQUIRE(r.code == 0);
    const auto report = nlohmann::json::parse(slurp(dir / "out" / "report.json"));
    CHECK(report.at("accuracy") == 1.0);
    CHECK(fs::exists(dir / "out" / "predictions.csv"));
    CHECK(io::read_csv((dir / "out" / "predictions.csv").string()).values.rows() == 24);

    Matrix wrong = test::gaussian(10, 3, 1);
    io::write_csv((dir / "w.csv").string(), wrong, {"a", "b", "c"});
    CHECK(run_cli({"classify", "--split", "0.8", "--data", files[0], "--data",
                   (dir / "w.csv").string(), "--out", (dir / "o2").string()}).code == 2);
}

TEST_CASE("outputs do not depend on the thread count") {
    const auto dir = test::scratch_dir("cli_threads");
    const auto files = write_instance(dir, 3, 9);
    std::string first;
    for (const char* t : {"1", "4", "8"}) {
        const auto out = dir / (std::string("o") + t);
        REQUIRE(run_cli(concat({"estimate", "--threads", t, "--out", out.string()}, data_flags(files))).code == 0);
        const std::string all = slurp(out / "theta_1.csv") + slurp(out / "theta_3.csv") +
                                slurp(out / "supports.json") + slurp(out / "trace.json");
        if (first.empty()) first = all;
        CHECK(all == first);
    }
}

}  // TEST_SUITE
