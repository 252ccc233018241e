#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <cfloat>
#include <cstring>
#include <sys/wait.h>

#include "hyerslab/rng.hpp"
#include <fstream>
#include <sstream>

#include "hyerslab/experiment.hpp"

using namespace hyerslab;

namespace {

#ifdef HYERSLAB_CLI_PATH
const char* cli_path = HYERSLAB_CLI_PATH;
#else
const char* cli_path = nullptr;
#endif

int run_cli(const std::string& args, std::string* out = nullptr) {
    REQUIRE(cli_path != nullptr);
    std::string cmd = std::string(cli_path) + " " + args + " > cli_out.tmp 2> cli_err.tmp";
    int rc = std::system(cmd.c_str());
    if (out) {
        std::ifstream f("cli_out.tmp");
        std::ostringstream ss;
        ss << f.rdbuf();
        *out = ss.str();
    }
    return WEXITSTATUS(rc);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::trunc);
    f << text;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("doubles serialize with 17 significant digits and round-trip") {
    CHECK(format_double(0.05) == "0.050000000000000003");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(3.141592653589793) == "3.1415926535897931");
    CHECK(format_double(std::nan("")) == "null");
    // round trip
    double v = 0.1 + 0.2;
    CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("format_double round-trips random finite doubles") {
    Rng rng(424242);
    int checked = 0;
    while (checked < 2000) {
        uint64_t bits = rng.next_u64();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        // stod raises out_of_range on subnormals, so keep to the normal range
        if (!std::isfinite(v) || (v != 0.0 && std::abs(v) < DBL_MIN)) continue;
        ++checked;
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("deterministic dump: ordered keys, stable layout") {
    Json j;
    j["zeta"] = 1;
    j["alpha"] = 0.25;
    j["nested"] = Json{{"b", true}, {"a", Json::array({1.5, 2.5})}};
    std::string s1 = dump_deterministic(j);
    std::string s2 = dump_deterministic(j);
    CHECK(s1 == s2);
    // insertion order preserved (zeta first)
    CHECK(s1.find("zeta") < s1.find("alpha"));
    CHECK(s1.find("0.25") != std::string::npos);
}

TEST_CASE("matrix json round trip") {
    CMatrix m(2, 3);
    m(0, 0) = cx(1.5, -2.5);
    m(1, 2) = cx(0, 1e-17);
    CMatrix back = matrix_from_json(matrix_to_json(m));
    CHECK(back == m);
}

TEST_CASE("history csv has the documented columns") {
    auto alg = std::make_shared<const Algebra>(matrix_algebra(1));
    auto mod = std::make_shared<const Bimodule>(Bimodule::self_module(alg));
    MapUnderTest f = make_perturbed(alg, mod, LinearMap::identity(1),
                                    PerturbationModel::bounded(0.1, 3));
    ControlFunction phi = ControlFunction::constant(0.3);
    HyersOptions opts;
    opts.control = &phi;
    opts.check_linearity = false;
    HyersResult r = hyers_limit(f, opts);
    std::ostringstream os;
    write_history_csv(os, r);
    std::string s = os.str();
    CHECK(s.rfind("basis_index,n,distance,scaled_bound\n", 0) == 0);
    CHECK(s.find("\n0,1,") != std::string::npos);
}

TEST_CASE("cli validate: exit 0 / 1 / 2") {
    write_text("spec_ok.json", R"({"kind": "matrix", "n": 2})");
    CHECK(run_cli("validate spec_ok.json") == 0);

    // M2 matrix units with E12*E21 redeclared as E22: breaks associativity
    // ((E12 E21) E12 = 0 while E12 (E21 E12) = E12), unit axioms intact
    write_text("spec_bad.json", R"({
      "dim": 4,
      "structure": [[0,0,0,1,0],[0,1,1,1,0],[1,2,3,1,0],[1,3,1,1,0],
                    [2,0,2,1,0],[2,1,3,1,0],[3,2,2,1,0],[3,3,3,1,0]],
      "unit": [[1,0],[0,0],[0,0],[1,0]]
    })");
    CHECK(run_cli("validate spec_bad.json") == 1);

    write_text("spec_malformed.json", "{ not json");
    CHECK(run_cli("validate spec_malformed.json") == 2);
    CHECK(run_cli("validate no_such_file.json") == 2);
}

TEST_CASE("cli solve: dimensions on stdout, deterministic bytes") {
    write_text("spec_c.json", R"({"kind": "matrix", "n": 1})");
    std::string out1, out2;
    CHECK(run_cli("solve spec_c.json --kind jordan_derivation", &out1) == 0);
    Json j = Json::parse(out1);
    CHECK(j.at("dimension").get<int>() == 0);

    write_text("spec_m2.json", R"({"kind": "matrix", "n": 2})");
    CHECK(run_cli("solve spec_m2.json --kind jordan_derivation", &out1) == 0);
    CHECK(Json::parse(out1).at("dimension").get<int>() == 3);
    CHECK(run_cli("solve spec_m2.json --kind jordan_derivation", &out2) == 0);
    CHECK(out1 == out2);

    CHECK(run_cli("solve spec_m2.json --kind generalized_jordan_pair", &out1) == 0);
    CHECK(Json::parse(out1).at("dimension").get<int>() == 7);

    write_text("spec_dual.json", R"({"kind": "dual_numbers"})");
    CHECK(run_cli("solve spec_dual.json --kind jordan_derivation", &out1) == 0);
    CHECK(Json::parse(out1).at("dimension").get<int>() == 1);

    CHECK(run_cli("solve spec_m2.json --kind no_such_kind") == 2);
}

TEST_CASE("cli experiment: byte-identical reports for a fixed config and seed") {
    write_text("exp_small.json", R"({
      "mode": "stability",
      "algebra": {"kind": "matrix", "n": 2},
      "bimodule": "self",
      "solution_index": 0,
      "perturbation_f": {"kind": "bounded", "theta": 0.05, "direction_seed": 101},
      "perturbation_g": {"kind": "bounded", "theta": 0.05, "direction_seed": 202},
      "control": {"kind": "constant", "theta": "measured"},
      "direction": "auto",
      "samples": 300,
      "seed": 42
    })");
    std::string o1, o2;
    CHECK(run_cli("experiment exp_small.json", &o1) == 0);
    CHECK(run_cli("experiment exp_small.json", &o2) == 0);
    CHECK(o1 == o2);
    Json rep = Json::parse(o1);
    CHECK(rep.at("passed").get<bool>());
    CHECK(rep.at("seed").get<uint64_t>() == 42);
    CHECK(rep.at("config").at("samples").get<int>() == 300);

    // --out writes report + histories named by the config hash
    std::string id = rep.at("id").get<std::string>();
    CHECK(run_cli("experiment exp_small.json --out .") == 0);
    CHECK(!slurp(id + "_report.json").empty());
    CHECK(slurp(id + "_history_f.csv").rfind("basis_index", 0) == 0);
    CHECK(slurp(id + "_history_g.csv").rfind("basis_index", 0) == 0);

    // a seed override changes the id (the echoed config describes the run)
    std::string o3;
    CHECK(run_cli("experiment exp_small.json --seed 43", &o3) == 0);
    CHECK(Json::parse(o3).at("id").get<std::string>() != id);

    CHECK(run_cli("experiment no_such.json") == 2);
}

TEST_CASE("cli hyers subcommand emits a limit and history") {
    write_text("hyers_cfg.json", R"({
      "mode": "stability",
      "algebra": {"kind": "matrix", "n": 2},
      "perturbation_f": {"kind": "bounded", "theta": 0.05, "direction_seed": 101},
      "perturbation_g": {"kind": "bounded", "theta": 0.05, "direction_seed": 202},
      "samples": 300,
      "seed": 42
    })");
    std::string out;
    CHECK(run_cli("hyers hyers_cfg.json", &out) == 0);
    Json j = Json::parse(out);
    CHECK(j.at("status").get<std::string>() == "converged");
    CHECK(j.at("linearized").get<bool>());
}

TEST_CASE("cli report-merge aggregates pass flags") {
    write_text("rep_a.json", R"({"id": "a", "passed": true})");
    write_text("rep_b.json", R"({"id": "b", "passed": false})");
    std::string out;
    CHECK(run_cli("report-merge rep_a.json rep_a.json", &out) == 0);
    CHECK(Json::parse(out).at("all_passed").get<bool>());
    CHECK(run_cli("report-merge rep_a.json rep_b.json", &out) == 1);
    Json merged = Json::parse(out);
    CHECK(!merged.at("all_passed").get<bool>());
    CHECK(merged.at("count").get<int>() == 2);
    CHECK(run_cli("report-merge rep_a.json missing.json") == 2);
}

TEST_CASE("thread cap does not change results") {
    // per-index substreams + sequential reduction: the parallel schedule must
    // be invisible in the output bytes
    write_text("exp_threads.json", R"({
      "mode": "stability",
      "algebra": {"kind": "matrix", "n": 2},
      "perturbation_f": {"kind": "bounded", "theta": 0.05, "direction_seed": 101},
      "perturbation_g": {"kind": "bounded", "theta": 0.05, "direction_seed": 202},
      "control": {"kind": "constant", "theta": "measured"},
      "samples": 400,
      "seed": 9
    })");
    REQUIRE(cli_path != nullptr);
    auto run_with_threads = [&](const char* n) {
        std::string cmd = std::string("HYERSLAB_THREADS=") + n + " " + cli_path +
                          " experiment exp_threads.json > threads_" + n + ".json 2>/dev/null";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    CHECK(run_with_threads("1") == 0);
    CHECK(run_with_threads("4") == 0);
    CHECK(slurp("threads_1.json") == slurp("threads_4.json"));
    CHECK(!slurp("threads_1.json").empty());
}

TEST_CASE("pair solves report the d-minus-delta right multiplier observation") {
    write_text("spec_m2b.json", R"({"kind": "matrix", "n": 2})");
    std::string out;
    CHECK(run_cli("solve spec_m2b.json --kind generalized_jordan_pair", &out) == 0);
    Json j = Json::parse(out);
    REQUIRE(j.contains("d_minus_delta_rm_residual"));
    CHECK(j.at("d_minus_delta_rm_residual").get<double>() <= 1e-8);
}

#ifdef HYERSLAB_CONFIG_DIR
TEST_CASE("shipped configs run their pipelines (reduced samples)") {
    struct Entry {
        const char* name;
        int expect_exit;
    };
    for (const auto& [name, expect_exit] : std::vector<Entry>{
             {"m2_bounded.json", 0},
             {"m2_power_p05.json", 0},
             {"m2_power_p2_desc.json", 0},
             {"m2_power_p2_asc.json", 1},
             {"dual_bounded.json", 0},
             {"m2_superstab_bounded.json", 0},
             {"m2_superstab_p025.json", 0},
             {"m2_superstab_p05.json", 0}}) {
        std::string cfg = std::string(HYERSLAB_CONFIG_DIR) + "/" + name;
        INFO(name);
        CHECK(run_cli("experiment " + cfg + " --samples 400", nullptr) == expect_exit);
    }
}
#endif

TEST_CASE("cli usage errors exit 2") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("frobnicate x.json") == 2);
}
