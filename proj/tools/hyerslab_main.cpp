// Batch command-line interface: validate algebra specs, solve derivation-type
// solution spaces, run the scaled-iterate limit, and run full experiments.
// Exit codes: 0 pass, 1 assertion/convergence failure, 2 usage/parse error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hyerslab/experiment.hpp"

namespace {

using namespace hyerslab;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

Json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return Json::parse(f);
}

int cmd_validate(const std::string& path) {
    Json spec;
    try {
        spec = load_json(path);
    } catch (const std::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        Algebra a = algebra_from_spec(spec);
        ViolationReport rep = validate(a);
        Json out = violation_report_to_json(rep);
        out["dim"] = a.dim();
        out["norm"] = to_string(a.norm_kind());
        std::cout << dump_deterministic(out);
        return rep.ok() ? kExitPass : kExitFail;
    } catch (const MissingUnit& e) {
        std::cout << dump_deterministic(Json{{"valid", false}, {"error", e.what()}});
        return kExitFail;
    } catch (const DimensionMismatch& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return kExitUsage;
    }
}

int cmd_solve(const std::string& path, const std::string& kind_str) {
    Json spec;
    SolutionKind kind;
    try {
        spec = load_json(path);
        kind = solution_kind_from_string(kind_str);
    } catch (const std::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        auto alg = std::make_shared<const Algebra>(make_algebra(spec));
        Bimodule mod = Bimodule::self_module(alg);
        SolutionSpace space;
        switch (kind) {
            case SolutionKind::derivation: space = solve_derivations(*alg, mod); break;
            case SolutionKind::jordan_derivation:
                space = solve_jordan_derivations(*alg, mod);
                break;
            case SolutionKind::generalized_derivation_pair:
                space = solve_generalized_derivation_pairs(*alg, mod);
                break;
            case SolutionKind::generalized_jordan_pair:
                space = solve_generalized_jordan_pairs(*alg, mod);
                break;
            case SolutionKind::right_multiplier: space = right_multiplier_space(*alg, mod); break;
        }
        std::cout << dump_deterministic(solution_space_to_json(space));
        return kExitPass;
    } catch (const RankUncertain& e) {
        Json spectrum = Json::array();
        for (double s : e.spectrum) spectrum.push_back(s);
        std::cout << dump_deterministic(
            Json{{"error", "rank_uncertain"}, {"spectrum", spectrum}});
        return kExitFail;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentReport& rep,
                   const std::string& out_dir) {
    Json j = experiment_report_to_json(rep, cfg);
    std::string stem = out_dir + "/" + cfg.id;
    write_file_atomic(stem + "_report.json", dump_deterministic(j));
    if (rep.f_limit.limit.rows() > 0) {
        std::ostringstream os;
        write_history_csv(os, rep.f_limit);
        write_file_atomic(stem + "_history_f.csv", os.str());
    }
    if (rep.g_limit.limit.rows() > 0) {
        std::ostringstream os;
        write_history_csv(os, rep.g_limit);
        write_file_atomic(stem + "_history_g.csv", os.str());
    }
}

struct Overrides {
    std::optional<uint64_t> seed;
    std::optional<int> samples;
    std::optional<double> tol;
    std::optional<std::string> direction;

    /// Overrides mutate the parsed config before hashing, so the echoed
    /// config and the report id always describe what actually ran.
    Json apply(Json j) const {
        if (seed) j["seed"] = *seed;
        if (samples) j["samples"] = *samples;
        if (tol) j["tolerances"]["iteration"] = *tol;
        if (direction) j["direction"] = *direction;
        return j;
    }
};

int cmd_experiment(const std::string& path, const Overrides& ov, const std::string& out_dir) {
    ExperimentConfig cfg;
    try {
        Json j = load_json(path);
        size_t pos = path.find_last_of('/');
        std::string base = pos == std::string::npos ? std::string(".") : path.substr(0, pos);
        cfg = ExperimentConfig::from_json(ov.apply(j), base);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }
    ExperimentReport rep = run_experiment(cfg);
    if (out_dir.empty()) {
        std::cout << dump_deterministic(experiment_report_to_json(rep, cfg));
    } else {
        write_outputs(cfg, rep, out_dir);
        std::cout << cfg.id << (rep.passed ? " passed" : " failed") << "\n";
    }
    return rep.passed ? kExitPass : kExitFail;
}

int cmd_hyers(const std::string& path, const Overrides& ov, const std::string& out_dir) {
    ExperimentConfig cfg;
    try {
        Json j = load_json(path);
        size_t pos = path.find_last_of('/');
        std::string base = pos == std::string::npos ? std::string(".") : path.substr(0, pos);
        cfg = ExperimentConfig::from_json(ov.apply(j), base);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        PreparedExperiment ws = prepare_experiment(cfg);
        HyersOptions opts;
        opts.direction = cfg.resolved_direction();
        opts.n_max = cfg.n_max;
        opts.tol = cfg.tolerances.iteration;
        opts.linearity_tol = cfg.tolerances.linearity;
        opts.seed = cfg.seed ^ 0xf00du;
        HyersResult res = hyers_limit(ws.f, opts);
        Json out{{"id", cfg.id},
                 {"status", to_string(res.status)},
                 {"direction", to_string(res.direction)},
                 {"iterations_used", res.iterations_used},
                 {"linearized", res.linearized},
                 {"matrix_agreement", res.matrix_agreement},
                 {"linearity", linearity_report_to_json(res.linearity)},
                 {"limit", matrix_to_json(res.limit)}};
        if (out_dir.empty()) {
            std::cout << dump_deterministic(out);
        } else {
            write_file_atomic(out_dir + "/" + cfg.id + "_hyers.json", dump_deterministic(out));
            std::ostringstream os;
            write_history_csv(os, res);
            write_file_atomic(out_dir + "/" + cfg.id + "_history_f.csv", os.str());
            std::cout << cfg.id << " " << to_string(res.status) << "\n";
        }
        return res.ok() ? kExitPass : kExitFail;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
}

int cmd_report_merge(const std::vector<std::string>& inputs, const std::string& out_path) {
    Json merged = Json::object();
    Json reports = Json::array();
    bool all_passed = true;
    try {
        for (const std::string& p : inputs) {
            Json j = load_json(p);
            all_passed = all_passed && j.value("passed", false);
            reports.push_back(std::move(j));
        }
    } catch (const std::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    }
    merged["all_passed"] = all_passed;
    merged["count"] = reports.size();
    merged["reports"] = reports;
    std::string text = dump_deterministic(merged);
    if (out_path.empty())
        std::cout << text;
    else
        write_file_atomic(out_path, text);
    return all_passed ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for derivation-type stability experiments"};
    app.require_subcommand(1);

    std::string spec_path, config_path, out_dir, kind = "jordan_derivation", merge_out;
    std::vector<std::string> merge_inputs;
    Overrides ov;
    uint64_t seed_val = 0;
    int samples_val = 0;
    double tol_val = 0;
    std::string dir_val;

    CLI::App* validate_cmd = app.add_subcommand("validate", "check an algebra spec file");
    validate_cmd->add_option("spec", spec_path, "algebra spec JSON")->required();

    CLI::App* solve_cmd = app.add_subcommand("solve", "solve a derivation-type solution space");
    solve_cmd->add_option("spec", spec_path, "algebra spec JSON")->required();
    solve_cmd->add_option("--kind", kind,
                          "derivation | jordan_derivation | generalized_derivation_pair | "
                          "generalized_jordan_pair | right_multiplier");

    auto add_common = [&](CLI::App* c) {
        c->add_option("config", config_path, "experiment config JSON")->required();
        c->add_option("--out", out_dir, "output directory (files named by config hash)");
        c->add_option("--seed", seed_val, "override seed");
        c->add_option("--samples", samples_val, "override sample count");
        c->add_option("--tol", tol_val, "override iteration tolerance");
        c->add_option("--direction", dir_val, "override direction");
    };
    CLI::App* hyers_cmd = app.add_subcommand("hyers", "run the scaled-iterate limit only");
    add_common(hyers_cmd);
    CLI::App* exp_cmd = app.add_subcommand("experiment", "run the full experiment pipeline");
    add_common(exp_cmd);

    CLI::App* merge_cmd = app.add_subcommand("report-merge", "merge report JSON files");
    merge_cmd->add_option("inputs", merge_inputs, "report files")->required();
    merge_cmd->add_option("--out", merge_out, "merged output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    auto fill = [&](CLI::App* c) {
        if (c->count("--seed")) ov.seed = seed_val;
        if (c->count("--samples")) ov.samples = samples_val;
        if (c->count("--tol")) ov.tol = tol_val;
        if (c->count("--direction")) ov.direction = dir_val;
    };

    try {
        if (validate_cmd->parsed()) return cmd_validate(spec_path);
        if (solve_cmd->parsed()) return cmd_solve(spec_path, kind);
        if (hyers_cmd->parsed()) {
            fill(hyers_cmd);
            return cmd_hyers(config_path, ov, out_dir);
        }
        if (exp_cmd->parsed()) {
            fill(exp_cmd);
            return cmd_experiment(config_path, ov, out_dir);
        }
        if (merge_cmd->parsed()) return cmd_report_merge(merge_inputs, merge_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}
