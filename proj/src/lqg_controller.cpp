#include "ddlqg/lqg_controller.hpp"

#include <chrono>
#include <stdexcept>

#include "ddlqg/errors.hpp"
#include "ddlqg/linalg.hpp"

namespace ddlqg {

ControllerRealization build_controller(const TrajectoryData& data, const PseudoInverseSplit& split,
                                       const Eigen::MatrixXd& K, const Eigen::MatrixXd& L) {
    const int nx = data.nx(), nu = data.nu(), ny = data.ny();
    if (K.rows() != nu || K.cols() != nx)
        throw std::invalid_argument("build_controller: K must be nu x nx");
    if (L.rows() != nx || L.cols() != ny)
        throw std::invalid_argument("build_controller: L must be nx x ny");
    if (split.phi1.rows() != data.samples() || split.phi2.rows() != data.samples())
        throw std::invalid_argument("build_controller: split does not match the data length");

    ControllerRealization ctrl;
    ctrl.Acl = data.X1 * split.phi1 + data.X1 * split.phi2 * K - L * data.Y0 * split.phi1;
    ctrl.L = L;
    ctrl.K = K;
    ctrl.xhat = Eigen::VectorXd::Zero(nx);
    return ctrl;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> controller_step(ControllerRealization& ctrl,
                                                            const Eigen::VectorXd& y) {
    const Eigen::VectorXd u = ctrl.K * ctrl.xhat;  // pre-update estimate
    ctrl.xhat = ctrl.Acl * ctrl.xhat + ctrl.L * y;
    return {u, ctrl.xhat};
}

CompositeReport composite_stability(const TrajectoryData& data, const PseudoInverseSplit& split,
                                    const Eigen::MatrixXd& K, const Eigen::MatrixXd& L,
                                    const LtiSystem& sys) {
    if (!data.has_ground_truth())
        throw GroundTruthUnavailableError("composite_stability: W0/V0 not stored in the data");

    const int nx = data.nx();
    const Eigen::MatrixXd X1c = data.X1 - *data.W0;  // de-noised state shift, equals A Phi0
    const Eigen::MatrixXd Y0c = data.Y0 - *data.V0;
    const Eigen::MatrixXd A_data = X1c * split.phi1;
    const Eigen::MatrixXd BK_data = X1c * split.phi2 * K;
    const Eigen::MatrixXd Acl = data.X1 * split.phi1 + data.X1 * split.phi2 * K -
                                L * data.Y0 * split.phi1;

    CompositeReport rep;
    rep.Xi0.resize(2 * nx, 2 * nx);
    rep.Xi0 << A_data, BK_data, L * Y0c * split.phi1, Acl;

    rep.Xi1.setZero(2 * nx, 2 * nx);
    rep.Xi1.topLeftCorner(nx, nx) = A_data + BK_data;
    rep.Xi1.topRightCorner(nx, nx) = BK_data;
    rep.Xi1.bottomRightCorner(nx, nx) = (data.X1 - L * data.Y0) * split.phi1;

    rep.Xi2.setZero(2 * nx, 2 * nx);
    rep.Xi2.bottomLeftCorner(nx, nx) =
        *data.W0 * split.phi1 + *data.W0 * split.phi2 * K - L * *data.V0 * split.phi1;
    rep.Xi2.bottomRightCorner(nx, nx) = *data.W0 * split.phi2 * K;

    rep.Xi3 = rep.Xi1 + rep.Xi2;
    rep.rho_xi0 = spectral_radius(rep.Xi0);
    rep.rho_xi1 = spectral_radius(rep.Xi1);
    rep.xi2_norm = spectral_norm(rep.Xi2);
    rep.similarity_residual = eigenvalue_multiset_distance(rep.Xi0, rep.Xi3);
    rep.data_model_mismatch = (A_data - sys.A).cwiseAbs().maxCoeff();
    rep.eig_xi0 = sorted_eigenvalues(rep.Xi0);
    rep.eig_xi3 = sorted_eigenvalues(rep.Xi3);
    return rep;
}

ClosedLoopTrace simulate_closed_loop(const LtiSystem& sys, ControllerRealization ctrl,
                                     const Eigen::VectorXd& x0, const NoiseSpec& noise,
                                     int horizon) {
    if (horizon < 1) throw std::invalid_argument("simulate_closed_loop: horizon must be >= 1");
    if (x0.size() != sys.nx())
        throw std::invalid_argument("simulate_closed_loop: x0 dimension mismatch");
    if (ctrl.nx() != sys.nx() || ctrl.ny() != sys.ny() || ctrl.nu() != sys.nu())
        throw std::invalid_argument("simulate_closed_loop: controller/plant dimension mismatch");

    auto [W, V] = generate_noise(noise, sys.nx(), sys.ny(), horizon);

    ClosedLoopTrace trace;
    trace.X.resize(sys.nx(), horizon);
    trace.Xhat.resize(sys.nx(), horizon);
    trace.U.resize(sys.nu(), horizon);
    trace.Y.resize(sys.ny(), horizon);
    trace.err_norm.resize(horizon);

    Eigen::VectorXd x = x0;
    double step_seconds = 0.0;
    int t = 0;
    for (; t < horizon; ++t) {
        if (!x.allFinite() || x.norm() > 1e12) {
            trace.diverged = true;
            break;
        }
        const Eigen::VectorXd y = sys.C * x + V.col(t);
        trace.X.col(t) = x;
        trace.Xhat.col(t) = ctrl.xhat;
        trace.Y.col(t) = y;
        trace.err_norm(t) = (x - ctrl.xhat).norm();

        const auto tic = std::chrono::steady_clock::now();
        const auto [u, xhat_next] = controller_step(ctrl, y);
        step_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - tic).count();

        trace.U.col(t) = u;
        x = sys.A * x + sys.B * u + W.col(t);
    }
    trace.steps = t;
    if (t < horizon) {
        trace.X.conservativeResize(Eigen::NoChange, t);
        trace.Xhat.conservativeResize(Eigen::NoChange, t);
        trace.U.conservativeResize(Eigen::NoChange, t);
        trace.Y.conservativeResize(Eigen::NoChange, t);
        trace.err_norm.conservativeResize(t);
    }
    trace.controller_step_seconds = t > 0 ? step_seconds / t : 0.0;
    return trace;
}

EstimationMetrics estimation_metrics(const ClosedLoopTrace& trace, int window) {
    EstimationMetrics m;
    m.per_step_seconds = trace.controller_step_seconds;
    const int n = trace.steps;
    if (n < 2) return m;

    // Average ||e(t)|| over t = 1..window (the paper's running average
    // starts at the first informed estimate).
    const int last = std::min(window, n - 1);
    double sum = 0.0;
    for (int t = 1; t <= last; ++t) sum += trace.err_norm(t);
    m.mean_error = sum / window;

    // Least-squares slope of log||e(t)|| over steps [5, 60], skipping the
    // transient and the floating-point floor.
    const int lo = 5, hi = std::min(60, n - 1);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int t = lo; t <= hi; ++t) {
        const double e = trace.err_norm(t);
        if (e < 1e-14) continue;
        const double ly = std::log(e);
        sx += t;
        sy += ly;
        sxx += static_cast<double>(t) * t;
        sxy += t * ly;
        ++cnt;
    }
    if (cnt >= 2 && cnt * sxx - sx * sx > 0)
        m.decay_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    return m;
}

}  // namespace ddlqg
