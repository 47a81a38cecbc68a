#pragma once

#include <Eigen/Dense>

#include "ddlqg/lti_sim.hpp"
#include "ddlqg/sdp/model.hpp"
#include "ddlqg/sdp/solver.hpp"

namespace ddlqg {

/// Right-inverse pair [Phi1 Phi2] of Phi0 = [X0; U0], either the
/// Moore-Penrose block split or the norm-minimizing one.
struct PseudoInverseSplit {
    enum class Source { MoorePenrose, NormMinimizing };

    Eigen::MatrixXd phi1;  // T x nx
    Eigen::MatrixXd phi2;  // T x nu
    Source source = Source::MoorePenrose;

    Eigen::MatrixXd stacked() const {
        Eigen::MatrixXd m(phi1.rows(), phi1.cols() + phi2.cols());
        m << phi1, phi2;
        return m;
    }
};

/// Moore-Penrose right inverse of [X0; U0], split into state and input
/// column blocks. Throws RankConditionError when rank([X0;U0]) < nx + nu.
PseudoInverseSplit pseudo_inverse_split(const TrajectoryData& data);

/// Max-norm of Phi0 [phi1 phi2] - I.
double right_inverse_residual(const TrajectoryData& data, const PseudoInverseSplit& split);

enum class ModelBasedVariant { Lqr, Kalman };

/// Model-based H2 synthesis SDPs, convexified by Y = K P (LQR) or
/// Pi = Sigma L (Kalman). LQR variables: gamma, Y, P, G; Kalman variables:
/// epsilon, Pi, Sigma, Upsilon.
sdp::SdpModel build_model_based_sdp(const LtiSystem& sys, const Eigen::MatrixXd& W1,
                                    const Eigen::MatrixXd& W2, ModelBasedVariant variant);

/// Data-based LQR SDP (noise-free form). Variables: gamma, Q, P, G.
sdp::SdpModel build_lqr_data_sdp(const TrajectoryData& data, const Eigen::MatrixXd& Wx,
                                 const Eigen::MatrixXd& Wu);

/// Data-based LQR SDP with the soft regularizer alpha1 * tr(M1).
sdp::SdpModel build_lqr_regularized_sdp(const TrajectoryData& data, const Eigen::MatrixXd& Wx,
                                        const Eigen::MatrixXd& Wu, double alpha1);

/// Data-based steady-state Kalman SDP. Variables: epsilon, Pi, Sigma, Upsilon.
sdp::SdpModel build_kalman_data_sdp(const TrajectoryData& data, const PseudoInverseSplit& split,
                                    const Eigen::MatrixXd& Nx, const Eigen::MatrixXd& Ny);

/// Right-inverse selection SDP minimizing tr(M2) >= ||Phi1||_F^2.
/// Variables: rho, M2, Phi1, Phi2.
sdp::SdpModel build_phi_min_sdp(const TrajectoryData& data);

/// Extracts the norm-minimizing split from a solved build_phi_min_sdp model.
PseudoInverseSplit extract_split(const sdp::SdpModel& model, const sdp::SdpSolution& sol);

/// Builds, solves and extracts the norm-minimizing split in one call.
PseudoInverseSplit norm_minimizing_split(const TrajectoryData& data, double tol = 1e-8);

/// Robust data-based Kalman SDP with spectral-norm soft penalty alpha2.
/// Adds epigraph scalars s_Upsilon, s_Sigma, s_Pi for the three norms.
sdp::SdpModel build_kalman_robust_sdp(const TrajectoryData& data, const PseudoInverseSplit& split,
                                      const Eigen::MatrixXd& Nx, const Eigen::MatrixXd& Ny,
                                      double alpha2);

/// K = U0 Q P^{-1} from a solved data-based LQR model.
Eigen::MatrixXd recover_lqr_gain(const sdp::SdpModel& model, const sdp::SdpSolution& sol,
                                 const TrajectoryData& data);

/// K = Y P^{-1} from a solved model-based LQR model.
Eigen::MatrixXd recover_model_lqr_gain(const sdp::SdpModel& model, const sdp::SdpSolution& sol);

/// L = Sigma^{-1} Pi from a solved Kalman model (data-based or model-based).
Eigen::MatrixXd recover_kalman_gain(const sdp::SdpModel& model, const sdp::SdpSolution& sol);

/// Noise-gap quantities between the ideal noisy-data Kalman SDP constraint
/// and its certainty-equivalent version: Theta (certainty-equivalent
/// constraint core), M (the gap pulled back to sample space), and
/// Psi = Phi1' M Phi1. The stabilization certificate asks
/// lambda_max(Psi) <= 1 - 1/eta1; the sufficient spectral bound is
/// ||M|| * ||Phi1' Phi1|| <= 1 - 1/eta1.
struct GapDiagnostics {
    Eigen::MatrixXd Theta;
    Eigen::MatrixXd M;
    Eigen::MatrixXd Psi;
    double psi_norm = 0.0;
    double psi_max_eig = 0.0;
    double m_norm = 0.0;
    double phi_gram_norm = 0.0;
    double margin = 0.0;  // 1 - 1/eta1
    bool certificate_holds = false;
    bool sufficient_bound_holds = false;
};

GapDiagnostics gap_diagnostics(const TrajectoryData& data, const Eigen::MatrixXd& Sigma,
                               const Eigen::MatrixXd& Pi, const PseudoInverseSplit& split,
                               double eta1 = 2.0);

/// Most negative slack over the original (pre-Schur) constraints of each
/// program, evaluated at a solved model. A feasible solution of the lowered
/// LMIs must give slack >= -1e-6.
double model_lqr_original_slack(const LtiSystem& sys, const Eigen::MatrixXd& Wx,
                                const Eigen::MatrixXd& Wu, const sdp::SdpModel& model,
                                const sdp::SdpSolution& sol);
double model_kalman_original_slack(const LtiSystem& sys, const Eigen::MatrixXd& Nx,
                                   const Eigen::MatrixXd& Ny, const sdp::SdpModel& model,
                                   const sdp::SdpSolution& sol);
double lqr_data_original_slack(const TrajectoryData& data, const Eigen::MatrixXd& Wx,
                               const Eigen::MatrixXd& Wu, const sdp::SdpModel& model,
                               const sdp::SdpSolution& sol);
double lqr_regularized_original_slack(const TrajectoryData& data, const Eigen::MatrixXd& Wx,
                                      const Eigen::MatrixXd& Wu, double alpha1,
                                      const sdp::SdpModel& model, const sdp::SdpSolution& sol);
double kalman_data_original_slack(const TrajectoryData& data, const PseudoInverseSplit& split,
                                  const Eigen::MatrixXd& Nx, const Eigen::MatrixXd& Ny,
                                  const sdp::SdpModel& model, const sdp::SdpSolution& sol);
double kalman_robust_original_slack(const TrajectoryData& data, const PseudoInverseSplit& split,
                                    const Eigen::MatrixXd& Nx, const Eigen::MatrixXd& Ny,
                                    double alpha2, const sdp::SdpModel& model,
                                    const sdp::SdpSolution& sol);
double phi_min_original_slack(const TrajectoryData& data, const sdp::SdpModel& model,
                              const sdp::SdpSolution& sol);

}  // namespace ddlqg
