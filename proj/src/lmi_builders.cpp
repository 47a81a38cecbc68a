#include "ddlqg/lmi_builders.hpp"

#include <stdexcept>

#include "ddlqg/errors.hpp"
#include "ddlqg/linalg.hpp"

namespace ddlqg {

using sdp::MatExpr;
using sdp::SdpModel;
using sdp::VarRef;

namespace {

Eigen::MatrixXd stack_phi0(const TrajectoryData& data) {
    Eigen::MatrixXd phi0(data.nx() + data.nu(), data.samples());
    phi0 << data.X0, data.U0;
    return phi0;
}

void require_rank_condition(const TrajectoryData& data) {
    if (!check_rank_condition(data))
        throw RankConditionError("rank([X0; U0]) < nx + nu: data do not satisfy the rank condition");
}

/// Positive-definite solve X * P^{-1} applied from the right, with the
/// P >= I floor check.
Eigen::MatrixXd right_solve_pd(const Eigen::MatrixXd& X, const Eigen::MatrixXd& P,
                               const char* what) {
    if (min_eigenvalue_sym(P) < 1.0 - 1e-6)
        throw DegenerateSolutionError(std::string(what) + ": matrix not positive definite above the P >= I floor");
    Eigen::LLT<Eigen::MatrixXd> llt(symmetrize(P));
    if (llt.info() != Eigen::Success)
        throw DegenerateSolutionError(std::string(what) + ": factorization failed");
    return llt.solve(X.transpose()).transpose();
}

}  // namespace

PseudoInverseSplit pseudo_inverse_split(const TrajectoryData& data) {
    require_rank_condition(data);
    const Eigen::MatrixXd pinv = pseudo_inverse(stack_phi0(data));
    PseudoInverseSplit split;
    split.phi1 = pinv.leftCols(data.nx());
    split.phi2 = pinv.rightCols(data.nu());
    split.source = PseudoInverseSplit::Source::MoorePenrose;
    return split;
}

double right_inverse_residual(const TrajectoryData& data, const PseudoInverseSplit& split) {
    const int n = data.nx() + data.nu();
    return (stack_phi0(data) * split.stacked() - Eigen::MatrixXd::Identity(n, n))
        .cwiseAbs()
        .maxCoeff();
}

sdp::SdpModel build_model_based_sdp(const LtiSystem& sys, const Eigen::MatrixXd& W1,
                                    const Eigen::MatrixXd& W2, ModelBasedVariant variant) {
    SdpModel model;
    if (variant == ModelBasedVariant::Lqr) {
        if (W1.rows() != sys.nx() || W2.rows() != sys.nu())
            throw std::invalid_argument("build_model_based_sdp: weight dimensions mismatch");
        const VarRef gamma = model.add_scalar("gamma");
        const VarRef Y = model.add_matrix("Y", sys.nu(), sys.nx());
        const VarRef P = model.add_symmetric("P", sys.nx());
        const VarRef G = model.add_symmetric("G", sys.nu());
        const MatExpr Pe = MatExpr::variable(P);
        const MatExpr Ge = MatExpr::variable(G);
        const MatExpr closed = sys.A * Pe + sys.B * MatExpr::variable(Y);  // (A + BK) P
        const MatExpr PmI = Pe - MatExpr::constant(Eigen::MatrixXd::Identity(sys.nx(), sys.nx()));
        model.add_lmi(MatExpr::blocks({{PmI, closed}, {closed.transpose(), Pe}}));
        model.add_lmi(PmI);
        model.add_lmi(MatExpr::blocks(
            {{Ge, MatExpr::variable(Y)}, {MatExpr::variable(Y).transpose(), Pe}}));
        model.add_lmi(MatExpr::variable(gamma) - (W1 * Pe).trace() - (W2 * Ge).trace());
        model.minimize(gamma);
    } else {
        if (W1.rows() != sys.nx() || W2.rows() != sys.ny())
            throw std::invalid_argument("build_model_based_sdp: weight dimensions mismatch");
        const VarRef eps = model.add_scalar("epsilon");
        const VarRef Pi = model.add_matrix("Pi", sys.nx(), sys.ny());
        const VarRef Sigma = model.add_symmetric("Sigma", sys.nx());
        const VarRef Ups = model.add_symmetric("Upsilon", sys.ny());
        const MatExpr Se = MatExpr::variable(Sigma);
        const MatExpr Ue = MatExpr::variable(Ups);
        const MatExpr Pie = MatExpr::variable(Pi);
        const MatExpr closed = Se * sys.A - Pie * sys.C;  // Sigma (A - LC)
        const MatExpr SmI = Se - MatExpr::constant(Eigen::MatrixXd::Identity(sys.nx(), sys.nx()));
        model.add_lmi(MatExpr::blocks({{SmI, closed.transpose()}, {closed, Se}}));
        model.add_lmi(SmI);
        model.add_lmi(MatExpr::blocks({{Ue, Pie.transpose()}, {Pie, Se}}));
        model.add_lmi(MatExpr::variable(eps) - (W1 * Se).trace() - (W2 * Ue).trace());
        model.minimize(eps);
    }
    return model;
}

sdp::SdpModel build_lqr_data_sdp(const TrajectoryData& data, const Eigen::MatrixXd& Wx,
                                 const Eigen::MatrixXd& Wu) {
    require_rank_condition(data);
    SdpModel model;
    const int nx = data.nx(), nu = data.nu(), T = data.samples();
    const VarRef gamma = model.add_scalar("gamma");
    const VarRef Q = model.add_matrix("Q", T, nx);
    const VarRef P = model.add_symmetric("P", nx);
    const VarRef G = model.add_symmetric("G", nu);
    const MatExpr Pe = MatExpr::variable(P);
    const MatExpr Ge = MatExpr::variable(G);
    const MatExpr Qe = MatExpr::variable(Q);
    const MatExpr X1Q = data.X1 * Qe;
    const MatExpr U0Q = data.U0 * Qe;
    const MatExpr PmI = Pe - MatExpr::constant(Eigen::MatrixXd::Identity(nx, nx));
    model.add_lmi(MatExpr::blocks({{PmI, X1Q}, {X1Q.transpose(), Pe}}));
    model.add_lmi(MatExpr::blocks({{Ge, U0Q}, {U0Q.transpose(), Pe}}));
    model.add_lmi(MatExpr::variable(gamma) - (Wx * Pe).trace() - (Wu * Ge).trace());
    model.add_equality(data.X0 * Qe - Pe, Eigen::MatrixXd::Zero(nx, nx));
    model.minimize(gamma);
    return model;
}

sdp::SdpModel build_lqr_regularized_sdp(const TrajectoryData& data, const Eigen::MatrixXd& Wx,
                                        const Eigen::MatrixXd& Wu, double alpha1) {
    if (alpha1 <= 0.0) throw std::invalid_argument("build_lqr_regularized_sdp: alpha1 must be > 0");
    require_rank_condition(data);
    SdpModel model;
    const int nx = data.nx(), nu = data.nu(), T = data.samples();
    const VarRef gamma = model.add_scalar("gamma");
    const VarRef Q = model.add_matrix("Q", T, nx);
    const VarRef P = model.add_symmetric("P", nx);
    const VarRef G = model.add_symmetric("G", nu);
    const VarRef M1 = model.add_symmetric("M1", T);
    const MatExpr Pe = MatExpr::variable(P);
    const MatExpr Ge = MatExpr::variable(G);
    const MatExpr Qe = MatExpr::variable(Q);
    const MatExpr M1e = MatExpr::variable(M1);
    const MatExpr X1Q = data.X1 * Qe;
    const MatExpr U0Q = data.U0 * Qe;
    const MatExpr PmI = Pe - MatExpr::constant(Eigen::MatrixXd::Identity(nx, nx));
    model.add_lmi(MatExpr::blocks({{PmI, X1Q}, {X1Q.transpose(), Pe}}));
    model.add_lmi(MatExpr::blocks({{Ge, U0Q}, {U0Q.transpose(), Pe}}));
    model.add_lmi(MatExpr::blocks({{M1e, Qe}, {Qe.transpose(), Pe}}));
    model.add_lmi(MatExpr::variable(gamma) - (Wx * Pe).trace() - (Wu * Ge).trace() -
                  M1e.trace().scaled(alpha1));
    model.add_equality(data.X0 * Qe - Pe, Eigen::MatrixXd::Zero(nx, nx));
    model.minimize(gamma);
    return model;
}

sdp::SdpModel build_kalman_data_sdp(const TrajectoryData& data, const PseudoInverseSplit& split,
                                    const Eigen::MatrixXd& Nx, const Eigen::MatrixXd& Ny) {
    require_rank_condition(data);
    SdpModel model;
    const int nx = data.nx(), ny = data.ny();
    const Eigen::MatrixXd X1phi = data.X1 * split.phi1;  // data image of A
    const Eigen::MatrixXd Y0phi = data.Y0 * split.phi1;  // data image of C
    const VarRef eps = model.add_scalar("epsilon");
    const VarRef Pi = model.add_matrix("Pi", nx, ny);
    const VarRef Sigma = model.add_symmetric("Sigma", nx);
    const VarRef Ups = model.add_symmetric("Upsilon", ny);
    const MatExpr Se = MatExpr::variable(Sigma);
    const MatExpr Ue = MatExpr::variable(Ups);
    const MatExpr Pie = MatExpr::variable(Pi);
    const MatExpr S = Se * X1phi + Pie * Y0phi;  // (Sigma X1 + Pi Y0) Phi1
    const MatExpr SmI = Se - MatExpr::constant(Eigen::MatrixXd::Identity(nx, nx));
    model.add_lmi(MatExpr::blocks({{SmI, S.transpose()}, {S, Se}}));
    model.add_lmi(MatExpr::blocks({{Ue, Pie.transpose()}, {Pie, Se}}));
    model.add_lmi(MatExpr::variable(eps) - (Nx * Se).trace() - (Ny * Ue).trace());
    model.minimize(eps);
    return model;
}

sdp::SdpModel build_phi_min_sdp(const TrajectoryData& data) {
    require_rank_condition(data);
    SdpModel model;
    const int nx = data.nx(), nu = data.nu(), T = data.samples();
    const VarRef rho = model.add_scalar("rho");
    const VarRef M2 = model.add_symmetric("M2", nx);
    const VarRef Phi1 = model.add_matrix("Phi1", T, nx);
    const VarRef Phi2 = model.add_matrix("Phi2", T, nu);
    const MatExpr M2e = MatExpr::variable(M2);
    const MatExpr P1e = MatExpr::variable(Phi1);
    model.add_lmi(MatExpr::blocks(
        {{M2e, P1e.transpose()},
         {P1e, MatExpr::constant(Eigen::MatrixXd::Identity(T, T))}}));
    model.add_lmi(MatExpr::variable(rho) - M2e.trace());
    const Eigen::MatrixXd phi0 = stack_phi0(data);
    Eigen::MatrixXd rhs1 = Eigen::MatrixXd::Zero(nx + nu, nx);
    rhs1.topRows(nx).setIdentity();
    Eigen::MatrixXd rhs2 = Eigen::MatrixXd::Zero(nx + nu, nu);
    rhs2.bottomRows(nu).setIdentity();
    model.add_equality(phi0 * P1e, rhs1);
    model.add_equality(phi0 * MatExpr::variable(Phi2), rhs2);
    model.minimize(rho);
    return model;
}

PseudoInverseSplit extract_split(const sdp::SdpModel& model, const sdp::SdpSolution& sol) {
    PseudoInverseSplit split;
    split.phi1 = model.value(sol.x, model.var("Phi1"));
    split.phi2 = model.value(sol.x, model.var("Phi2"));
    split.source = PseudoInverseSplit::Source::NormMinimizing;
    return split;
}

PseudoInverseSplit norm_minimizing_split(const TrajectoryData& data, double tol) {
    const SdpModel model = build_phi_min_sdp(data);
    const sdp::SdpSolution sol = sdp::solve(model, tol);
    if (sol.status != sdp::SdpStatus::Optimal)
        throw NoConvergenceError("norm_minimizing_split: SDP did not reach optimality",
                                 sol.duality_gap);
    return extract_split(model, sol);
}

sdp::SdpModel build_kalman_robust_sdp(const TrajectoryData& data, const PseudoInverseSplit& split,
                                      const Eigen::MatrixXd& Nx, const Eigen::MatrixXd& Ny,
                                      double alpha2) {
    if (alpha2 <= 0.0) throw std::invalid_argument("build_kalman_robust_sdp: alpha2 must be > 0");
    require_rank_condition(data);
    SdpModel model;
    const int nx = data.nx(), ny = data.ny();
    const Eigen::MatrixXd X1phi = data.X1 * split.phi1;
    const Eigen::MatrixXd Y0phi = data.Y0 * split.phi1;
    const VarRef eps = model.add_scalar("epsilon");
    const VarRef Pi = model.add_matrix("Pi", nx, ny);
    const VarRef Sigma = model.add_symmetric("Sigma", nx);
    const VarRef Ups = model.add_symmetric("Upsilon", ny);
    const VarRef sU = model.add_scalar("s_Upsilon");
    const VarRef sS = model.add_scalar("s_Sigma");
    const VarRef sP = model.add_scalar("s_Pi");
    const MatExpr Se = MatExpr::variable(Sigma);
    const MatExpr Ue = MatExpr::variable(Ups);
    const MatExpr Pie = MatExpr::variable(Pi);
    const MatExpr S = Se * X1phi + Pie * Y0phi;
    const MatExpr SmI = Se - MatExpr::constant(Eigen::MatrixXd::Identity(nx, nx));
    model.add_lmi(MatExpr::blocks({{SmI, S.transpose()}, {S, Se}}));
    model.add_lmi(MatExpr::blocks({{Ue, Pie.transpose()}, {Pie, Se}}));
    // Spectral-norm epigraphs: s I - X >= 0 for the symmetric PSD variables,
    // 2x2 block form for the rectangular Pi.
    const auto eye = [](int n) { return Eigen::MatrixXd::Identity(n, n); };
    model.add_lmi(MatExpr::scalar_times(sU, eye(ny)) - Ue);
    model.add_lmi(MatExpr::scalar_times(sS, eye(nx)) - Se);
    model.add_lmi(MatExpr::blocks({{MatExpr::scalar_times(sP, eye(nx)), Pie},
                                   {Pie.transpose(), MatExpr::scalar_times(sP, eye(ny))}}));
    model.add_lmi(MatExpr::variable(eps) - (Nx * Se).trace() - (Ny * Ue).trace() -
                  (MatExpr::variable(sU) + MatExpr::variable(sS) + MatExpr::variable(sP))
                      .scaled(alpha2));
    model.minimize(eps);
    return model;
}

Eigen::MatrixXd recover_lqr_gain(const sdp::SdpModel& model, const sdp::SdpSolution& sol,
                                 const TrajectoryData& data) {
    const Eigen::MatrixXd Q = model.value(sol.x, model.var("Q"));
    const Eigen::MatrixXd P = model.value(sol.x, model.var("P"));
    return right_solve_pd(data.U0 * Q, P, "recover_lqr_gain");
}

Eigen::MatrixXd recover_model_lqr_gain(const sdp::SdpModel& model, const sdp::SdpSolution& sol) {
    const Eigen::MatrixXd Y = model.value(sol.x, model.var("Y"));
    const Eigen::MatrixXd P = model.value(sol.x, model.var("P"));
    return right_solve_pd(Y, P, "recover_model_lqr_gain");
}

Eigen::MatrixXd recover_kalman_gain(const sdp::SdpModel& model, const sdp::SdpSolution& sol) {
    const Eigen::MatrixXd Pi = model.value(sol.x, model.var("Pi"));
    const Eigen::MatrixXd Sigma = model.value(sol.x, model.var("Sigma"));
    if (min_eigenvalue_sym(Sigma) < 1.0 - 1e-6)
        throw DegenerateSolutionError("recover_kalman_gain: Sigma below the Sigma >= I floor");
    return Eigen::LLT<Eigen::MatrixXd>(symmetrize(Sigma)).solve(Pi);
}

GapDiagnostics gap_diagnostics(const TrajectoryData& data, const Eigen::MatrixXd& Sigma,
                               const Eigen::MatrixXd& Pi, const PseudoInverseSplit& split,
                               double eta1) {
    if (!data.has_ground_truth())
        throw GroundTruthUnavailableError("gap_diagnostics: W0/V0 not stored in the data");
    if (eta1 < 1.0) throw std::invalid_argument("gap_diagnostics: eta1 must be >= 1");

    const Eigen::LLT<Eigen::MatrixXd> llt(symmetrize(Sigma));
    if (llt.info() != Eigen::Success)
        throw DegenerateSolutionError("gap_diagnostics: Sigma not positive definite");

    // S = Sigma X1 + Pi Y0 (certainty-equivalent); N uses the de-noised data.
    const Eigen::MatrixXd S = Sigma * data.X1 + Pi * data.Y0;
    const Eigen::MatrixXd N = Sigma * (data.X1 - *data.W0) + Pi * (data.Y0 - *data.V0);

    GapDiagnostics diag;
    diag.Theta = symmetrize(split.phi1.transpose() * S.transpose() * llt.solve(S) * split.phi1 -
                            Sigma);
    // Gap between the ideal noisy-data constraint core and the
    // certainty-equivalent one, pulled back to sample space.
    diag.M = symmetrize(N.transpose() * llt.solve(N) - S.transpose() * llt.solve(S));
    diag.Psi = symmetrize(split.phi1.transpose() * diag.M * split.phi1);
    diag.psi_norm = spectral_norm(diag.Psi);
    diag.psi_max_eig = max_eigenvalue_sym(diag.Psi);
    diag.m_norm = spectral_norm(diag.M);
    diag.phi_gram_norm = spectral_norm(split.phi1.transpose() * split.phi1);
    diag.margin = 1.0 - 1.0 / eta1;
    diag.certificate_holds = diag.psi_max_eig <= diag.margin;
    diag.sufficient_bound_holds = diag.m_norm * diag.phi_gram_norm <= diag.margin;
    return diag;
}

namespace {

// min over: -lambda_max for <= constraints, lambda_min for >= constraints.
double upper_slack(const Eigen::MatrixXd& lhs) { return -max_eigenvalue_sym(lhs); }
double lower_slack(const Eigen::MatrixXd& lhs) { return min_eigenvalue_sym(lhs); }

Eigen::MatrixXd pd_inverse_apply(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Xt) {
    return Eigen::LLT<Eigen::MatrixXd>(symmetrize(P)).solve(Xt);
}

}  // namespace

double model_lqr_original_slack(const LtiSystem& sys, const Eigen::MatrixXd& Wx,
                                const Eigen::MatrixXd& Wu, const sdp::SdpModel& model,
                                const sdp::SdpSolution& sol) {
    const Eigen::MatrixXd Y = model.value(sol.x, model.var("Y"));
    const Eigen::MatrixXd P = model.value(sol.x, model.var("P"));
    const Eigen::MatrixXd G = model.value(sol.x, model.var("G"));
    const double gamma = model.value(sol.x, model.var("gamma"))(0, 0);
    const int nx = sys.nx();
    const Eigen::MatrixXd APBY = sys.A * P + sys.B * Y;
    double slack = upper_slack(APBY * pd_inverse_apply(P, APBY.transpose()) - P +
                               Eigen::MatrixXd::Identity(nx, nx));
    slack = std::min(slack, lower_slack(P - Eigen::MatrixXd::Identity(nx, nx)));
    slack = std::min(slack, lower_slack(G - Y * pd_inverse_apply(P, Y.transpose())));
    slack = std::min(slack, gamma - (Wx * P).trace() - (Wu * G).trace());
    return slack;
}

double model_kalman_original_slack(const LtiSystem& sys, const Eigen::MatrixXd& Nx,
                                   const Eigen::MatrixXd& Ny, const sdp::SdpModel& model,
                                   const sdp::SdpSolution& sol) {
    const Eigen::MatrixXd Pi = model.value(sol.x, model.var("Pi"));
    const Eigen::MatrixXd Sigma = model.value(sol.x, model.var("Sigma"));
    const Eigen::MatrixXd Ups = model.value(sol.x, model.var("Upsilon"));
    const double eps = model.value(sol.x, model.var("epsilon"))(0, 0);
    const int nx = sys.nx();
    const Eigen::MatrixXd SAC = Sigma * sys.A - Pi * sys.C;  // Sigma (A - LC)
    double slack = upper_slack(SAC.transpose() * pd_inverse_apply(Sigma, SAC) - Sigma +
                               Eigen::MatrixXd::Identity(nx, nx));
    slack = std::min(slack, lower_slack(Sigma - Eigen::MatrixXd::Identity(nx, nx)));
    slack = std::min(slack, lower_slack(Ups - Pi.transpose() * pd_inverse_apply(Sigma, Pi)));
    slack = std::min(slack, eps - (Nx * Sigma).trace() - (Ny * Ups).trace());
    return slack;
}

double lqr_data_original_slack(const TrajectoryData& data, const Eigen::MatrixXd& Wx,
                               const Eigen::MatrixXd& Wu, const sdp::SdpModel& model,
                               const sdp::SdpSolution& sol) {
    const Eigen::MatrixXd Q = model.value(sol.x, model.var("Q"));
    const Eigen::MatrixXd P = model.value(sol.x, model.var("P"));
    const Eigen::MatrixXd G = model.value(sol.x, model.var("G"));
    const double gamma = model.value(sol.x, model.var("gamma"))(0, 0);
    const int nx = data.nx();
    const Eigen::MatrixXd X1Q = data.X1 * Q;
    const Eigen::MatrixXd U0Q = data.U0 * Q;
    double slack = upper_slack(X1Q * pd_inverse_apply(P, X1Q.transpose()) - P +
                               Eigen::MatrixXd::Identity(nx, nx));
    slack = std::min(slack, lower_slack(P - Eigen::MatrixXd::Identity(nx, nx)));
    slack = std::min(slack, lower_slack(G - U0Q * pd_inverse_apply(P, U0Q.transpose())));
    slack = std::min(slack, gamma - (Wx * P).trace() - (Wu * G).trace());
    slack = std::min(slack, -(data.X0 * Q - P).cwiseAbs().maxCoeff());
    return slack;
}

double lqr_regularized_original_slack(const TrajectoryData& data, const Eigen::MatrixXd& Wx,
                                      const Eigen::MatrixXd& Wu, double alpha1,
                                      const sdp::SdpModel& model, const sdp::SdpSolution& sol) {
    const Eigen::MatrixXd Q = model.value(sol.x, model.var("Q"));
    const Eigen::MatrixXd P = model.value(sol.x, model.var("P"));
    const Eigen::MatrixXd G = model.value(sol.x, model.var("G"));
    const Eigen::MatrixXd M1 = model.value(sol.x, model.var("M1"));
    const double gamma = model.value(sol.x, model.var("gamma"))(0, 0);
    const int nx = data.nx();
    const Eigen::MatrixXd X1Q = data.X1 * Q;
    const Eigen::MatrixXd U0Q = data.U0 * Q;
    double slack = upper_slack(X1Q * pd_inverse_apply(P, X1Q.transpose()) - P +
                               Eigen::MatrixXd::Identity(nx, nx));
    slack = std::min(slack, lower_slack(P - Eigen::MatrixXd::Identity(nx, nx)));
    slack = std::min(slack, lower_slack(G - U0Q * pd_inverse_apply(P, U0Q.transpose())));
    slack = std::min(slack, lower_slack(M1 - Q * pd_inverse_apply(P, Q.transpose())));
    slack = std::min(slack, gamma - (Wx * P).trace() - (Wu * G).trace() - alpha1 * M1.trace());
    slack = std::min(slack, -(data.X0 * Q - P).cwiseAbs().maxCoeff());
    return slack;
}

double kalman_data_original_slack(const TrajectoryData& data, const PseudoInverseSplit& split,
                                  const Eigen::MatrixXd& Nx, const Eigen::MatrixXd& Ny,
                                  const sdp::SdpModel& model, const sdp::SdpSolution& sol) {
    const Eigen::MatrixXd Pi = model.value(sol.x, model.var("Pi"));
    const Eigen::MatrixXd Sigma = model.value(sol.x, model.var("Sigma"));
    const Eigen::MatrixXd Ups = model.value(sol.x, model.var("Upsilon"));
    const double eps = model.value(sol.x, model.var("epsilon"))(0, 0);
    const int nx = data.nx();
    const Eigen::MatrixXd S = (Sigma * data.X1 + Pi * data.Y0) * split.phi1;
    double slack = upper_slack(S.transpose() * pd_inverse_apply(Sigma, S) - Sigma +
                               Eigen::MatrixXd::Identity(nx, nx));
    slack = std::min(slack, lower_slack(Sigma - Eigen::MatrixXd::Identity(nx, nx)));
    slack = std::min(slack, lower_slack(Ups - Pi.transpose() * pd_inverse_apply(Sigma, Pi)));
    slack = std::min(slack, eps - (Nx * Sigma).trace() - (Ny * Ups).trace());
    return slack;
}

double kalman_robust_original_slack(const TrajectoryData& data, const PseudoInverseSplit& split,
                                    const Eigen::MatrixXd& Nx, const Eigen::MatrixXd& Ny,
                                    double alpha2, const sdp::SdpModel& model,
                                    const sdp::SdpSolution& sol) {
    const Eigen::MatrixXd Pi = model.value(sol.x, model.var("Pi"));
    const Eigen::MatrixXd Sigma = model.value(sol.x, model.var("Sigma"));
    const Eigen::MatrixXd Ups = model.value(sol.x, model.var("Upsilon"));
    const double eps = model.value(sol.x, model.var("epsilon"))(0, 0);
    const double sU = model.value(sol.x, model.var("s_Upsilon"))(0, 0);
    const double sS = model.value(sol.x, model.var("s_Sigma"))(0, 0);
    const double sP = model.value(sol.x, model.var("s_Pi"))(0, 0);
    const int nx = data.nx();
    const Eigen::MatrixXd S = (Sigma * data.X1 + Pi * data.Y0) * split.phi1;
    double slack = upper_slack(S.transpose() * pd_inverse_apply(Sigma, S) - Sigma +
                               Eigen::MatrixXd::Identity(nx, nx));
    slack = std::min(slack, lower_slack(Sigma - Eigen::MatrixXd::Identity(nx, nx)));
    slack = std::min(slack, lower_slack(Ups - Pi.transpose() * pd_inverse_apply(Sigma, Pi)));
    slack = std::min(slack, sU - spectral_norm(Ups));
    slack = std::min(slack, sS - spectral_norm(Sigma));
    slack = std::min(slack, sP - spectral_norm(Pi));
    slack = std::min(slack,
                     eps - (Nx * Sigma).trace() - (Ny * Ups).trace() - alpha2 * (sU + sS + sP));
    return slack;
}

double phi_min_original_slack(const TrajectoryData& data, const sdp::SdpModel& model,
                              const sdp::SdpSolution& sol) {
    const Eigen::MatrixXd M2 = model.value(sol.x, model.var("M2"));
    const Eigen::MatrixXd phi1 = model.value(sol.x, model.var("Phi1"));
    const Eigen::MatrixXd phi2 = model.value(sol.x, model.var("Phi2"));
    const double rho = model.value(sol.x, model.var("rho"))(0, 0);
    PseudoInverseSplit split{phi1, phi2, PseudoInverseSplit::Source::NormMinimizing};
    double slack = lower_slack(M2 - phi1.transpose() * phi1);
    slack = std::min(slack, rho - M2.trace());
    slack = std::min(slack, -right_inverse_residual(data, split));
    return slack;
}

}  // namespace ddlqg
