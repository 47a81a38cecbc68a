#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ddlqg/lti_sim.hpp"

namespace ddlqg {

/// Set {c + G beta : ||beta||_inf <= 1}. Zero generator columns mean a point.
struct Zonotope {
    Eigen::VectorXd c;
    Eigen::MatrixXd G;

    Zonotope() = default;
    Zonotope(Eigen::VectorXd center, Eigen::MatrixXd generators);
    static Zonotope point(const Eigen::VectorXd& center);
    /// Centered box with per-component radius `amplitude`.
    static Zonotope box(int dim, double amplitude);

    int dim() const { return static_cast<int>(c.size()); }
    int generators() const { return static_cast<int>(G.cols()); }
};

/// Set of matrices {C + sum_i beta_i G[i] : |beta_i| <= 1}.
struct MatrixZonotope {
    Eigen::MatrixXd C;
    std::vector<Eigen::MatrixXd> G;

    int rows() const { return static_cast<int>(C.rows()); }
    int cols() const { return static_cast<int>(C.cols()); }
    int generators() const { return static_cast<int>(G.size()); }
};

/// Matrix zonotope enveloping all noise sequence matrices [n(0) .. n(T-1)]
/// with each column in Zn: one generator per (noise generator, column) pair.
MatrixZonotope noise_matrix_zonotope(const Zonotope& Zn, int T);

/// M_Sigma = (X1 - M_w) [X0; U0]^+ : envelope of [A B] consistent with the
/// data when the process noise matrix lies in Mw.
MatrixZonotope system_matrix_zonotope(const TrajectoryData& data, const MatrixZonotope& Mw);

/// M_C = (Y0 - M_v) X0^+ : envelope of C (X0 must have full row rank).
MatrixZonotope output_matrix_zonotope(const TrajectoryData& data, const MatrixZonotope& Mv);

/// One-step reachable set R_next = M_Sigma (R x {u}) + Zw with the
/// generator-cross-term over-approximation. Output generator count is
/// g_R + xi*(g_R + 1) + g_w for xi = M_Sigma generators.
Zonotope propagate(const Zonotope& R, const Eigen::VectorXd& u, const MatrixZonotope& MSigma,
                   const Zonotope& Zw);

/// Girard-style order reduction: keep the largest-norm generators, box the
/// rest. No-op when the count is already within max_generators.
Zonotope reduce_generators(const Zonotope& z, int max_generators);

/// Frobenius-optimal intersection scaling: minimizer of
/// || [(I - lambda C_M) Gt, -lambda G_M^(i), -lambda Gv, -lambda G_M^(i) Gt] ||_F^2
/// via the normal equations (minimum-norm solution when the Gram matrix is
/// singular).
Eigen::MatrixXd lambda_star(const Zonotope& R, const MatrixZonotope& MC, const Zonotope& Zv);

/// Measurement update: over-approximation of the intersection of R with the
/// set of states consistent with y under C in MC and v in Zv. Passing
/// `lambda` overrides the optimal scaling (nullptr computes lambda_star).
Zonotope intersect_measurement(const Zonotope& R, const Eigen::VectorXd& y,
                               const MatrixZonotope& MC, const Zonotope& Zv,
                               const Eigen::MatrixXd* lambda = nullptr);

inline Eigen::VectorXd center(const Zonotope& z) { return z.c; }

/// Membership test by coefficient feasibility (small linear program).
bool contains(const Zonotope& z, const Eigen::VectorXd& x, double tol = 1e-7);

}  // namespace ddlqg
