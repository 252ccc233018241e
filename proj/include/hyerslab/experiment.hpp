#pragma once

#include "hyerslab/json_out.hpp"
#include "hyerslab/verify.hpp"

namespace hyerslab {

// ============================================================================
// Experiment configuration (batch JSON in, report JSON + CSV histories out)
// ============================================================================

struct PerturbationSpec {
    std::string kind = "none";  // none | bounded | power
    double theta = 0;
    double p = 0;
    uint64_t direction_seed = 1;

    PerturbationModel model() const;
};

struct ControlSpec {
    std::string kind = "constant";  // constant | power
    bool measured = true;           // theta taken from the sampled defect maxima
    double theta = 0;               // used when !measured
    double p = std::numeric_limits<double>::quiet_NaN();  // power kind; defaults to pert_f.p
};

struct ToleranceSet {
    double iteration = 1e-8;
    double defect = 1e-6;
    double bound_slack = 1e-9;
    double linearity = 1e-9;
};

struct ExperimentConfig {
    std::string mode = "stability";  // stability | superstability
    Json algebra;                    // inline spec (file refs resolved at parse)
    Json bimodule = "self";
    int solution_index = 0;
    PerturbationSpec pert_f, pert_g;
    ControlSpec control;
    std::string direction = "auto";  // auto resolves to ascending iff p < 1
    int samples = 10000;             // >= 100
    uint64_t seed = 1;
    int n_max = 40;
    ToleranceSet tolerances;
    double norm_lo = 1e-2, norm_hi = 1e2;
    int torus_grid = 8;

    Json echo;       // parsed config, echoed verbatim into the report
    std::string id;  // content hash of the echo; doubles as the output stem

    static ExperimentConfig from_json(const Json& j, const std::string& base_dir = ".");
    static ExperimentConfig from_file(const std::string& path);

    Direction resolved_direction() const;
};

// ============================================================================
// Pipelines
// ============================================================================

/// Everything an experiment runs on: validated spaces, the oracle pair that
/// seeds it, and the perturbed maps.
struct PreparedExperiment {
    std::shared_ptr<const Algebra> algebra;
    std::shared_ptr<const Bimodule> bimodule;
    SolutionSpace pairs;
    LinearMap d0, delta0;
    MapUnderTest f, g;
};

PreparedExperiment prepare_experiment(const ExperimentConfig& cfg);

struct StageResult {
    std::string stage;
    bool passed = false;
    std::string detail;
};

struct ExperimentReport {
    std::string id;
    std::string mode;
    bool passed = false;
    std::vector<StageResult> stages;

    // measured envelopes
    double theta_hat = 0;      // max sampled main defect at c = 0
    double theta_hat_aux = 0;  // max sampled auxiliary defect
    DefectReport defect_main, defect_main_full, defect_aux;

    // limits
    HyersResult f_limit, g_limit;

    // structure of the limit
    DefectReport gjd_sweep, jordan_sweep;

    // bound verification
    std::string control_kind;
    double control_theta_used = std::numeric_limits<double>::quiet_NaN();
    double control_p_used = std::numeric_limits<double>::quiet_NaN();
    BoundReport bound;
    bool has_bound = false;
    BoundReport bound_strict;  // constant theta_hat only (bounded perturbations)
    bool has_bound_strict = false;

    double uniqueness_gap = std::numeric_limits<double>::quiet_NaN();

    // superstability mode
    DecaySlope decay;
    double decay_expected = std::numeric_limits<double>::quiet_NaN();
    bool reconstructed_direction = false;  // descending variant, built by symmetry
};

/// Oracle pair -> perturbed maps -> measured envelopes -> limits -> asserted:
/// (i) C-linearity of the limit, (ii) limit structure defects, (iii) the
/// ||f - d|| bound with the measured control, (iv) schedule-independence of
/// the limit. Stage failures are recorded with labels, never thrown.
ExperimentReport run_stability_experiment(const ExperimentConfig& cfg);

/// Proof-mechanism checks at desk scale: exact fixed point, decay rate of the
/// scaled square-identity defect, torus-additivity of the extracted delta,
/// and recovery under a decaying envelope.
ExperimentReport run_superstability_check(const ExperimentConfig& cfg);

/// Dispatch on cfg.mode.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

Json experiment_report_to_json(const ExperimentReport& rep, const ExperimentConfig& cfg);

}  // namespace hyerslab
