#include "ddlqg/harness.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <thread>

#include "ddlqg/benchmarks.hpp"
#include "ddlqg/riccati.hpp"
#include "ddlqg/rng.hpp"
#include "ddlqg/sdp/solver.hpp"

namespace ddlqg {

namespace {

constexpr std::uint64_t kNoiseStreamSalt = 0x5DEECE66DULL;
constexpr std::uint64_t kOnlineStreamSalt = 0x9E3779B97F4A7C15ULL;

template <typename F>
auto stage(const std::string& name, F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        throw std::runtime_error(name + ": " + e.what());
    }
}

void parallel_over(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

std::optional<Eigen::MatrixXd> rank_limited_ew(int nx, int rank) {
    if (rank <= 0 || rank >= nx) return std::nullopt;  // full-rank process noise
    return Eigen::MatrixXd(Eigen::MatrixXd::Identity(nx, nx).leftCols(rank));
}

struct SeedArtifacts {
    SeedResult result;
    Eigen::MatrixXd K, L;
};

double sup_norm_after(const ClosedLoopTrace& trace, int from) {
    double sup = 0.0;
    for (int t = from; t < trace.steps; ++t) sup = std::max(sup, trace.X.col(t).norm());
    return sup;
}

}  // namespace

Scenario scenario_from_string(const std::string& s) {
    if (s == "batch_reactor_noise_free") return Scenario::BatchReactorNoiseFree;
    if (s == "batch_reactor_noisy") return Scenario::BatchReactorNoisy;
    if (s == "rotating_target") return Scenario::RotatingTarget;
    if (s == "custom") return Scenario::Custom;
    throw std::invalid_argument("unknown scenario: " + s);
}

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::BatchReactorNoiseFree: return "batch_reactor_noise_free";
        case Scenario::BatchReactorNoisy: return "batch_reactor_noisy";
        case Scenario::RotatingTarget: return "rotating_target";
        case Scenario::Custom: return "custom";
    }
    return "?";
}

void ExperimentConfig::normalize() {
    const ExperimentConfig def = default_config(scenario);
    if (Wx.size() == 0) Wx = def.Wx;
    if (Wu.size() == 0) Wu = def.Wu;
    if (Nx.size() == 0) Nx = def.Nx;
    if (Ny.size() == 0) Ny = def.Ny;
    if (T <= 0) T = def.T;
    if (seeds.empty()) seeds = def.seeds;
    if (scenario == Scenario::Custom && custom) {
        const auto& sys = custom->sys;
        if (Wx.size() == 0 || Wx.rows() != sys.nx())
            Wx = Eigen::MatrixXd::Identity(sys.nx(), sys.nx());
        if (Wu.size() == 0 || Wu.rows() != sys.nu())
            Wu = Eigen::MatrixXd::Identity(sys.nu(), sys.nu());
        if (Nx.size() == 0 || Nx.rows() != sys.nx())
            Nx = Eigen::MatrixXd::Identity(sys.nx(), sys.nx());
        if (Ny.size() == 0 || Ny.rows() != sys.ny())
            Ny = Eigen::MatrixXd::Identity(sys.ny(), sys.ny());
        if (custom->T > 0 && T <= 0) T = custom->T;
    }
}

ExperimentConfig default_config(Scenario scenario) {
    ExperimentConfig c;
    c.scenario = scenario;
    c.seeds.resize(20);
    for (int i = 0; i < 20; ++i) c.seeds[static_cast<std::size_t>(i)] = i + 1;
    switch (scenario) {
        case Scenario::BatchReactorNoiseFree:
            c.T = 15;
            c.Wx = Eigen::MatrixXd::Identity(4, 4);
            c.Wu = Eigen::MatrixXd::Identity(2, 2);
            c.Nx = 0.02 * Eigen::MatrixXd::Identity(4, 4);
            c.Ny = 0.02 * Eigen::MatrixXd::Identity(2, 2);
            c.offline_noise_bar = 0.0;
            c.online_noise_bar = 0.02;
            c.x0_scale = 1.0;
            break;
        case Scenario::BatchReactorNoisy:
            c.T = 15;
            c.rank_ew = 4;
            c.Wx = Eigen::MatrixXd::Identity(4, 4);
            c.Wu = Eigen::MatrixXd::Identity(2, 2);
            c.Nx = 0.02 * Eigen::MatrixXd::Identity(4, 4);
            c.Ny = 0.02 * Eigen::MatrixXd::Identity(2, 2);
            c.alpha1 = 0.2;
            c.alpha2 = 0.2;
            c.offline_noise_bar = 0.02;
            c.online_noise_bar = 0.02;
            c.x0_scale = 10.0;
            break;
        case Scenario::RotatingTarget:
            c.T = 20;
            c.Wx = Eigen::MatrixXd::Identity(2, 2);
            c.Wu = Eigen::MatrixXd::Identity(1, 1);
            c.Nx = Eigen::MatrixXd::Identity(2, 2);
            c.Ny = Eigen::MatrixXd::Identity(4, 4);
            c.alpha1 = 0.2;
            c.alpha2 = 1.0;
            c.offline_noise_bar = 1.0;
            c.online_noise_bar = 1.0;
            c.x0_scale = 1.0;
            c.zonotope_baseline = true;
            break;
        case Scenario::Custom:
            c.T = 0;
            break;
    }
    return c;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c = default_config(scenario_from_string(j.value("scenario", "batch_reactor_noise_free")));
    if (j.contains("rank_ew")) c.rank_ew = j["rank_ew"].get<int>();
    if (j.contains("Wx")) c.Wx = io::matrix_from_json(j["Wx"]);
    if (j.contains("Wu")) c.Wu = io::matrix_from_json(j["Wu"]);
    if (j.contains("Nx")) c.Nx = io::matrix_from_json(j["Nx"]);
    if (j.contains("Ny")) c.Ny = io::matrix_from_json(j["Ny"]);
    if (j.contains("alpha1")) c.alpha1 = j["alpha1"].get<double>();
    if (j.contains("alpha2")) c.alpha2 = j["alpha2"].get<double>();
    if (j.contains("T")) c.T = j["T"].get<int>();
    if (j.contains("horizon")) c.horizon = j["horizon"].get<int>();
    if (j.contains("window")) c.window = j["window"].get<int>();
    if (j.contains("offline_noise_bar")) c.offline_noise_bar = j["offline_noise_bar"].get<double>();
    if (j.contains("online_noise_bar")) c.online_noise_bar = j["online_noise_bar"].get<double>();
    if (j.contains("x0_scale")) c.x0_scale = j["x0_scale"].get<double>();
    if (j.contains("eta1")) c.eta1 = j["eta1"].get<double>();
    if (j.contains("sdp_tol")) c.sdp_tol = j["sdp_tol"].get<double>();
    if (j.contains("zonotope_baseline")) c.zonotope_baseline = j["zonotope_baseline"].get<bool>();
    if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (j.contains("num_seeds")) {
        c.seeds.resize(j["num_seeds"].get<std::size_t>());
        for (std::size_t i = 0; i < c.seeds.size(); ++i) c.seeds[i] = i + 1;
    }
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("system")) c.custom = io::system_config_from_json(j["system"]);
    c.normalize();
    return c;
}

TrajectoryData collect_data(const LtiSystem& sys, int T, double noise_bar,
                            const std::optional<Eigen::MatrixXd>& Ew, std::uint64_t seed) {
    Rng rng(seed);
    const Eigen::VectorXd x0 = rng.uniform_vector(sys.nx(), 1.0);
    Eigen::MatrixXd inputs(sys.nu(), T);
    for (int t = 0; t < T; ++t) inputs.col(t) = rng.uniform_vector(sys.nu(), 1.0);
    NoiseSpec spec = noise_bar > 0.0
                         ? NoiseSpec::uniform(noise_bar, noise_bar, seed ^ kNoiseStreamSalt)
                         : NoiseSpec::zero();
    spec.Ew = Ew;
    return simulate_openloop(sys, x0, inputs, spec);
}

namespace {

struct Pipeline {
    LtiSystem sys;
    ExperimentConfig cfg;
    std::optional<Eigen::MatrixXd> Ew;
    bool noise_free = false;
    std::string outdir;
};

// Zonotope set-based estimation replayed on a recorded closed-loop run,
// plus a ground-truth steady-state Kalman run with the oracle gain.
void run_baselines(const Pipeline& pl, const TrajectoryData& data, const ClosedLoopTrace& trace,
                   const Eigen::MatrixXd& Lbar, SeedResult& r) {
    const int nx = pl.sys.nx(), ny = pl.sys.ny();
    const double wbar = pl.cfg.online_noise_bar, vbar = pl.cfg.online_noise_bar;

    const Zonotope Zw = Zonotope::box(nx, std::max(wbar, pl.cfg.offline_noise_bar));
    const Zonotope Zv = Zonotope::box(ny, std::max(vbar, pl.cfg.offline_noise_bar));
    const MatrixZonotope Mw = noise_matrix_zonotope(Zw, data.samples());
    const MatrixZonotope Mv = noise_matrix_zonotope(Zv, data.samples());
    const MatrixZonotope MSigma = system_matrix_zonotope(data, Mw);
    const MatrixZonotope MC = output_matrix_zonotope(data, Mv);

    Zonotope reach = Zonotope::box(nx, pl.cfg.x0_scale);  // contains the drawn x(0)
    int violations = 0;
    double zono_sum = 0.0;
    const int last = std::min(pl.cfg.window, trace.steps - 1);
    for (int t = 0; t < trace.steps; ++t) {
        Zonotope updated = intersect_measurement(reach, trace.Y.col(t), MC, Zv);
        updated = reduce_generators(updated, 5 * nx);
        if (!contains(updated, trace.X.col(t))) ++violations;
        if (t >= 1 && t <= last) zono_sum += (center(updated) - trace.X.col(t)).norm();
        if (t + 1 < trace.steps) reach = propagate(updated, trace.U.col(t), MSigma, Zw);
    }
    r.containment_violations = violations;
    r.zonotope_mean_error = zono_sum / pl.cfg.window;

    // Steady-state Kalman recursion on the true model (oracle reference).
    Eigen::VectorXd xkf = Eigen::VectorXd::Zero(nx);
    double kf_sum = 0.0;
    for (int t = 0; t < trace.steps; ++t) {
        if (t >= 1 && t <= last) kf_sum += (xkf - trace.X.col(t)).norm();
        xkf = pl.sys.A * xkf + pl.sys.B * trace.U.col(t) +
              Lbar * (trace.Y.col(t) - pl.sys.C * xkf);
    }
    r.kalman_oracle_mean_error = kf_sum / pl.cfg.window;
}

SeedArtifacts run_seed(const Pipeline& pl, std::uint64_t seed, const Eigen::MatrixXd& Lbar) {
    SeedArtifacts art;
    art.result.seed = seed;
    try {
        const TrajectoryData data = stage("collect", [&] {
            return collect_data(pl.sys, pl.cfg.T, pl.cfg.offline_noise_bar, pl.Ew, seed);
        });
        io::write_trajectory_csv(pl.outdir + "/data_" + std::to_string(seed) + ".csv", data);

        PseudoInverseSplit split;
        Eigen::MatrixXd K, L;
        if (pl.noise_free) {
            K = stage("solve-lqr", [&] {
                const auto model = build_lqr_data_sdp(data, pl.cfg.Wx, pl.cfg.Wu);
                const auto sol = sdp::solve(model, pl.cfg.sdp_tol);
                if (sol.status != sdp::SdpStatus::Optimal)
                    throw std::runtime_error(std::string("status ") + sdp::to_string(sol.status));
                return recover_lqr_gain(model, sol, data);
            });
            split = pseudo_inverse_split(data);
            L = stage("solve-kalman", [&] {
                const auto model = build_kalman_data_sdp(data, split, pl.cfg.Nx, pl.cfg.Ny);
                const auto sol = sdp::solve(model, pl.cfg.sdp_tol);
                if (sol.status != sdp::SdpStatus::Optimal)
                    throw std::runtime_error(std::string("status ") + sdp::to_string(sol.status));
                return recover_kalman_gain(model, sol);
            });
        } else {
            K = stage("solve-lqr", [&] {
                const auto model = build_lqr_regularized_sdp(data, pl.cfg.Wx, pl.cfg.Wu, pl.cfg.alpha1);
                const auto sol = sdp::solve(model, pl.cfg.sdp_tol);
                if (sol.status != sdp::SdpStatus::Optimal)
                    throw std::runtime_error(std::string("status ") + sdp::to_string(sol.status));
                return recover_lqr_gain(model, sol, data);
            });
            split = stage("solve-phi", [&] { return norm_minimizing_split(data, pl.cfg.sdp_tol); });
            L = stage("solve-robust", [&] {
                const auto model =
                    build_kalman_robust_sdp(data, split, pl.cfg.Nx, pl.cfg.Ny, pl.cfg.alpha2);
                const auto sol = sdp::solve(model, pl.cfg.sdp_tol);
                if (sol.status != sdp::SdpStatus::Optimal)
                    throw std::runtime_error(std::string("status ") + sdp::to_string(sol.status));
                const Eigen::MatrixXd Sigma = model.value(sol.x, model.var("Sigma"));
                const Eigen::MatrixXd Pi = model.value(sol.x, model.var("Pi"));
                art.result.psi_max_eig =
                    gap_diagnostics(data, Sigma, Pi, split, pl.cfg.eta1).psi_max_eig;
                return recover_kalman_gain(model, sol);
            });
        }
        art.K = K;
        art.L = L;

        const ClosedLoopTrace trace = stage("simulate", [&] {
            ControllerRealization ctrl = build_controller(data, split, K, L);
            Rng rng(seed ^ kOnlineStreamSalt);
            const Eigen::VectorXd x0 = rng.uniform_vector(pl.sys.nx(), pl.cfg.x0_scale);
            NoiseSpec spec = pl.cfg.online_noise_bar > 0.0
                                 ? NoiseSpec::uniform(pl.cfg.online_noise_bar,
                                                      pl.cfg.online_noise_bar,
                                                      seed * 1000003ULL + 17ULL)
                                 : NoiseSpec::zero();
            spec.Ew = pl.Ew;
            return simulate_closed_loop(pl.sys, ctrl, x0, spec, pl.cfg.horizon);
        });
        io::write_trace_csv(pl.outdir + "/trace_" + std::to_string(seed) + ".csv", trace);

        const CompositeReport comp =
            stage("composite", [&] { return composite_stability(data, split, K, L, pl.sys); });
        const EstimationMetrics metrics = estimation_metrics(trace, pl.cfg.window);

        art.result.mean_error = metrics.mean_error;
        art.result.decay_slope = metrics.decay_slope;
        art.result.per_step_seconds = metrics.per_step_seconds;
        art.result.rho_xi0 = comp.rho_xi0;
        art.result.similarity_residual = comp.similarity_residual;
        art.result.diverged = trace.diverged;
        art.result.sup_state_norm = sup_norm_after(trace, std::min(20, trace.steps));

        if (pl.cfg.zonotope_baseline)
            stage("zonotope-baseline", [&] {
                run_baselines(pl, data, trace, Lbar, art.result);
                return 0;
            });
        art.result.ok = true;
    } catch (const std::exception& e) {
        art.result.ok = false;
        art.result.error = e.what();
    }
    return art;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& raw) {
    ExperimentConfig cfg = raw;
    cfg.normalize();

    Pipeline pl;
    pl.cfg = cfg;
    pl.outdir = cfg.output_dir;
    switch (cfg.scenario) {
        case Scenario::BatchReactorNoiseFree:
            pl.sys = batch_reactor();
            pl.noise_free = true;
            break;
        case Scenario::BatchReactorNoisy:
            pl.sys = batch_reactor();
            pl.Ew = rank_limited_ew(4, cfg.rank_ew);
            break;
        case Scenario::RotatingTarget:
            pl.sys = rotating_target();
            break;
        case Scenario::Custom:
            if (!cfg.custom) throw std::invalid_argument("run_experiment: custom scenario without a system");
            pl.sys = cfg.custom->sys;
            pl.noise_free = cfg.offline_noise_bar == 0.0;
            break;
    }

    std::filesystem::create_directories(pl.outdir);

    ExperimentReport report;
    report.Kbar = lqr_gain(pl.sys.A, pl.sys.B, cfg.Wx, cfg.Wu);
    report.Lbar = kalman_gain(pl.sys.A, pl.sys.C, cfg.Nx, cfg.Ny).second;

    std::vector<SeedArtifacts> artifacts(cfg.seeds.size());
    parallel_over(cfg.seeds.size(), [&](std::size_t i) {
        artifacts[i] = run_seed(pl, cfg.seeds[i], report.Lbar);
    });

    report.per_seed.reserve(artifacts.size());
    int ok_count = 0;
    double err_sum = 0, err_sq = 0, step_time_sum = 0;
    int stable_count = 0;
    nlohmann::json per_seed_json = nlohmann::json::array();
    double gain_err_K = 0, gain_err_L = 0;
    for (const auto& art : artifacts) {
        const SeedResult& r = art.result;
        report.per_seed.push_back(r);
        if (r.ok) {
            if (report.K.size() == 0) {
                report.K = art.K;
                report.L = art.L;
            }
            ++ok_count;
            err_sum += r.mean_error;
            err_sq += r.mean_error * r.mean_error;
            step_time_sum += r.per_step_seconds;
            if (r.rho_xi0 < 1.0) ++stable_count;
            gain_err_K += (art.K - report.Kbar).norm();
            gain_err_L += (art.L - report.Lbar).norm();
        }
        nlohmann::json js{{"seed", r.seed},
                          {"ok", r.ok},
                          {"mean_error", r.mean_error},
                          {"decay_slope", r.decay_slope},
                          {"per_step_seconds", r.per_step_seconds},
                          {"rho_xi0", r.rho_xi0},
                          {"similarity_residual", r.similarity_residual},
                          {"sup_state_norm", r.sup_state_norm},
                          {"diverged", r.diverged},
                          {"psi_max_eig", r.psi_max_eig}};
        if (!r.ok) js["error"] = r.error;
        if (r.containment_violations >= 0) {
            js["containment_violations"] = r.containment_violations;
            js["zonotope_mean_error"] = r.zonotope_mean_error;
            js["kalman_oracle_mean_error"] = r.kalman_oracle_mean_error;
        }
        per_seed_json.push_back(std::move(js));
    }
    report.ok = ok_count == static_cast<int>(artifacts.size());

    const double n = std::max(1, ok_count);
    const double mean_err = err_sum / n;
    const double std_err = ok_count > 1 ? std::sqrt(std::max(0.0, err_sq / n - mean_err * mean_err))
                                        : 0.0;

    nlohmann::json summary;
    summary["scenario"] = to_string(cfg.scenario);
    summary["T"] = cfg.T;
    summary["horizon"] = cfg.horizon;
    summary["window"] = cfg.window;
    summary["alpha1"] = cfg.alpha1;
    summary["alpha2"] = cfg.alpha2;
    summary["offline_noise_bar"] = cfg.offline_noise_bar;
    summary["online_noise_bar"] = cfg.online_noise_bar;
    summary["x0_scale"] = cfg.x0_scale;
    summary["rank_ew"] = cfg.rank_ew;
    summary["seeds_ok"] = ok_count;
    summary["seeds_total"] = artifacts.size();
    summary["mean_error_mean"] = mean_err;
    summary["mean_error_std"] = std_err;
    summary["mean_per_step_seconds"] = ok_count > 0 ? step_time_sum / n : 0.0;
    summary["stable_xi0_count"] = stable_count;
    summary["gain_error_K_mean"] = ok_count > 0 ? gain_err_K / n : -1.0;
    summary["gain_error_L_mean"] = ok_count > 0 ? gain_err_L / n : -1.0;
    summary["per_seed"] = std::move(per_seed_json);
    report.summary = summary;

    nlohmann::json gains;
    gains["K"] = io::matrix_to_json(report.K);
    gains["L"] = io::matrix_to_json(report.L);
    gains["Kbar_dare"] = io::matrix_to_json(report.Kbar);
    gains["Lbar_dare"] = io::matrix_to_json(report.Lbar);
    io::write_json(pl.outdir + "/gains.json", gains);
    io::write_json(pl.outdir + "/summary.json", summary);
    return report;
}

}  // namespace ddlqg
