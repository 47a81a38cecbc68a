#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "ddlqg/lmi_builders.hpp"
#include "ddlqg/lti_sim.hpp"

namespace ddlqg {

/// Dynamic output-feedback controller assembled purely from data matrices:
///   xhat(t+1) = Acl xhat(t) + L y(t),   u(t) = K xhat(t)
/// with Acl = X1 Phi1 + X1 Phi2 K - L Y0 Phi1 and xhat(0) = 0.
struct ControllerRealization {
    Eigen::MatrixXd Acl;
    Eigen::MatrixXd L;
    Eigen::MatrixXd K;
    Eigen::VectorXd xhat;

    int nx() const { return static_cast<int>(Acl.rows()); }
    int ny() const { return static_cast<int>(L.cols()); }
    int nu() const { return static_cast<int>(K.rows()); }

    void reset() { xhat.setZero(); }
};

ControllerRealization build_controller(const TrajectoryData& data, const PseudoInverseSplit& split,
                                       const Eigen::MatrixXd& K, const Eigen::MatrixXd& L);

/// One controller update: u = K xhat from the pre-update estimate, then
/// xhat <- Acl xhat + L y. Returns (u, xhat_next).
std::pair<Eigen::VectorXd, Eigen::VectorXd> controller_step(ControllerRealization& ctrl,
                                                            const Eigen::VectorXd& y);

/// Composite closed-loop matrices built from data and the stored noise:
/// Xi0 acts on [x; xhat], Xi3 = Xi1 + Xi2 acts on [x; e]; Xi3 is similar
/// to Xi0, so their spectra must coincide.
struct CompositeReport {
    Eigen::MatrixXd Xi0, Xi1, Xi2, Xi3;
    double rho_xi0 = 0.0;
    double rho_xi1 = 0.0;
    double xi2_norm = 0.0;
    double similarity_residual = 0.0;  // eigenvalue multiset distance Xi0 vs Xi3
    double data_model_mismatch = 0.0;  // ||(X1 - W0) Phi1 - A||_max against ground truth
    std::vector<std::complex<double>> eig_xi0, eig_xi3;
};

CompositeReport composite_stability(const TrajectoryData& data, const PseudoInverseSplit& split,
                                    const Eigen::MatrixXd& K, const Eigen::MatrixXd& L,
                                    const LtiSystem& sys);

/// Closed-loop record: one column per step for x, xhat, u, y plus the
/// estimation error norms.
struct ClosedLoopTrace {
    Eigen::MatrixXd X, Xhat, U, Y;
    Eigen::VectorXd err_norm;
    bool diverged = false;
    int steps = 0;
    double controller_step_seconds = 0.0;  // mean wall time per controller_step
    std::optional<CompositeReport> composite;
};

/// Simulates the plant under the controller for `horizon` steps. A state
/// norm above 1e12 stops the run with diverged = true and the last finite
/// step recorded.
ClosedLoopTrace simulate_closed_loop(const LtiSystem& sys, ControllerRealization ctrl,
                                     const Eigen::VectorXd& x0, const NoiseSpec& noise,
                                     int horizon);

struct EstimationMetrics {
    double mean_error = 0.0;        // (1/window) sum_{t=1..window} ||e(t)||
    double decay_slope = 0.0;       // LS slope of log||e(t)|| over steps [5, 60]
    double per_step_seconds = 0.0;  // controller_step mean wall time
};

EstimationMetrics estimation_metrics(const ClosedLoopTrace& trace, int window = 100);

}  // namespace ddlqg
