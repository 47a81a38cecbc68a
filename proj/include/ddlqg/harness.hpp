#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddlqg/io.hpp"
#include "ddlqg/lmi_builders.hpp"
#include "ddlqg/lqg_controller.hpp"
#include "ddlqg/lti_sim.hpp"

namespace ddlqg {

enum class Scenario { BatchReactorNoiseFree, BatchReactorNoisy, RotatingTarget, Custom };

Scenario scenario_from_string(const std::string& s);
std::string to_string(Scenario s);

/// Everything a reproduction run needs. Unset matrices are filled with the
/// scenario defaults by normalize().
struct ExperimentConfig {
    Scenario scenario = Scenario::BatchReactorNoiseFree;
    int rank_ew = 0;  // >0 restricts process noise to Ew with that rank
    Eigen::MatrixXd Wx, Wu, Nx, Ny;
    double alpha1 = 0.2;
    double alpha2 = 0.2;
    int T = 0;            // offline sample count (0: scenario default)
    int horizon = 200;    // online simulation length
    int window = 100;     // steps entering the averaged estimation error
    double offline_noise_bar = 0.0;
    double online_noise_bar = 0.0;
    double x0_scale = 1.0;  // online initial state drawn uniformly at this amplitude
    double eta1 = 2.0;
    double sdp_tol = 1e-8;
    bool zonotope_baseline = false;
    std::vector<std::uint64_t> seeds;
    std::string output_dir = "out";
    std::optional<io::SystemConfig> custom;

    void normalize();  // fill scenario defaults for unset fields
};

ExperimentConfig default_config(Scenario scenario);
ExperimentConfig config_from_json(const nlohmann::json& j);

struct SeedResult {
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;  // "<stage>: <what>" when !ok
    double mean_error = 0.0;
    double decay_slope = 0.0;
    double per_step_seconds = 0.0;
    double rho_xi0 = 0.0;
    double similarity_residual = 0.0;
    double sup_state_norm = 0.0;  // over steps [20, horizon]
    bool diverged = false;
    double psi_max_eig = 0.0;
    double zonotope_mean_error = 0.0;  // rotating-target baseline
    double kalman_oracle_mean_error = 0.0;
    int containment_violations = -1;  // -1: baseline not run
};

struct ExperimentReport {
    bool ok = false;
    nlohmann::json summary;
    std::vector<SeedResult> per_seed;
    Eigen::MatrixXd K, L;        // gains of the first seed (noise-free: the gains)
    Eigen::MatrixXd Kbar, Lbar;  // Riccati oracle gains
};

/// Runs the configured experiment over all seeds (worker pool), writing
/// trace_<seed>.csv, gains.json and summary.json into output_dir.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Offline open-loop collection: x(0) and inputs i.i.d. uniform in [-1, 1],
/// noise per the spec. Input/initial-state stream and noise stream are both
/// derived deterministically from `seed`.
TrajectoryData collect_data(const LtiSystem& sys, int T, double noise_bar,
                            const std::optional<Eigen::MatrixXd>& Ew, std::uint64_t seed);

}  // namespace ddlqg
