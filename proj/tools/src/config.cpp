#include "might_cli/config.hpp"

#include <fstream>
#include <initializer_list>
#include <string_view>

#include "might/errors.hpp"

namespace might::cli {
namespace {

void reject_unknown(const nlohmann::json& j, std::string_view where,
                    std::initializer_list<std::string_view> known) {
    if (!j.is_object()) throw InvalidArgument(std::string(where) + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (std::string_view k : known) ok = ok || key == k;
        if (!ok) throw InvalidArgument("unknown key '" + key + "' in " + std::string(where));
    }
}

template <class T>
void read(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InvalidArgument(std::string("bad value for '") + key + "'");
    }
}

void read_optional(const nlohmann::json& j, const char* key, std::optional<double>& out) {
    if (!j.contains(key)) return;
    if (j.at(key).is_null()) {
        out.reset();
        return;
    }
    double v = 0;
    read(j, key, v);
    out = v;
}

nlohmann::json optional_json(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const SolverConfig& c) {
    return {{"kappa", c.kappa}, {"c0", c.c0}, {"c1", c.c1}, {"c2", c.c2}, {"c3", c.c3},
            {"c4", c.c4}, {"c_ic", c.c_ic}, {"s0_grid", c.s0_grid},
            {"max_total_iters", c.max_total_iters}, {"scale_by_noise", c.scale_by_noise}};
}

SolverConfig solver_from_json(const nlohmann::json& j, SolverConfig c) {
    reject_unknown(j, "solver", {"kappa", "c0", "c1", "c2", "c3", "c4", "c_ic", "s0_grid",
                                 "max_total_iters", "scale_by_noise"});
    read(j, "kappa", c.kappa);
    read(j, "c0", c.c0);
    read(j, "c1", c.c1);
    read(j, "c2", c.c2);
    read(j, "c3", c.c3);
    read(j, "c4", c.c4);
    read(j, "c_ic", c.c_ic);
    read(j, "s0_grid", c.s0_grid);
    read(j, "max_total_iters", c.max_total_iters);
    read(j, "scale_by_noise", c.scale_by_noise);
    return c;
}

nlohmann::json to_json(const EstimateConfig& c) {
    return {{"solver", to_json(c.options.solver)},
            {"global_s0", optional_json(c.options.global_s0)},
            {"symmetrize", c.symmetrize},
            {"center", c.center}};
}

EstimateConfig estimate_config_from_json(const nlohmann::json& j) {
    reject_unknown(j, "config", {"solver", "global_s0", "symmetrize", "center"});
    EstimateConfig c;
    if (j.contains("solver")) c.options.solver = solver_from_json(j.at("solver"));
    read_optional(j, "global_s0", c.options.global_s0);
    read(j, "symmetrize", c.symmetrize);
    read(j, "center", c.center);
    return c;
}

nlohmann::json to_json(const ExperimentSpec& s) {
    return {{"p", s.p}, {"K", s.K}, {"n", s.n}, {"edge_prob", s.edge_prob}, {"rho", s.rho},
            {"r", s.r}, {"replications", s.replications}, {"seed", s.seed},
            {"solver", to_json(s.solver)}, {"global_s0", optional_json(s.global_s0)},
            {"symmetrize", s.symmetrize}};
}

ExperimentSpec spec_from_json(const nlohmann::json& j) {
    reject_unknown(j, "spec", {"p", "K", "n", "edge_prob", "rho", "r", "replications", "seed",
                               "solver", "global_s0", "symmetrize", "description"});
    ExperimentSpec s;
    read(j, "p", s.p);
    read(j, "K", s.K);
    if (j.contains("n")) {
        if (j.at("n").is_array()) {
            read(j, "n", s.n);
        } else {
            Index n = 0;
            read(j, "n", n);
            s.n = {n};
        }
    }
    read(j, "edge_prob", s.edge_prob);
    read(j, "rho", s.rho);
    read(j, "r", s.r);
    read(j, "replications", s.replications);
    read(j, "seed", s.seed);
    if (j.contains("solver")) s.solver = solver_from_json(j.at("solver"));
    read_optional(j, "global_s0", s.global_s0);
    read(j, "symmetrize", s.symmetrize);
    return s;
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileError(path, "cannot open file");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FileError(path, std::string("invalid JSON: ") + e.what());
    }
}

void write_json(const std::string& path, const nlohmann::json& value) {
    std::ofstream out(path);
    if (!out) throw FileError(path, "cannot write file");
    out << value.dump(2) << '\n';
    if (!out) throw FileError(path, "write failed");
}

}  // namespace might::cli
