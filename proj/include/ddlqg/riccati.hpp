#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>

namespace ddlqg {

/// Converged fixed point of a discrete-time algebraic Riccati equation.
struct DareSolution {
    Eigen::MatrixXd P;
    int iterations = 0;
    double residual = 0.0;
};

/// Solves A'PA - P - A'PB(Wu + B'PB)^{-1}B'PA + Wx = 0 by value iteration
/// P_{k+1} = A'P_kA - A'P_kB(Wu + B'P_kB)^{-1}B'P_kA + Wx starting from
/// P0 (default Wx), symmetrizing each step. The inner inverse is applied
/// through an SPD factorization.
///
/// Throws std::invalid_argument when Wu is not positive definite and
/// NoConvergenceError (carrying the last residual) when max_iter is hit.
DareSolution solve_dare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                        const Eigen::MatrixXd& Wx, const Eigen::MatrixXd& Wu, double tol = 1e-12,
                        int max_iter = 100000,
                        const std::optional<Eigen::MatrixXd>& P0 = std::nullopt);

/// Frobenius norm of the DARE residual at P.
double dare_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& Wx,
                     const Eigen::MatrixXd& Wu, const Eigen::MatrixXd& P);

/// Optimal LQR gain Kbar = -(Wu + B'PB)^{-1}B'PA with P from solve_dare.
Eigen::MatrixXd lqr_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         const Eigen::MatrixXd& Wx, const Eigen::MatrixXd& Wu);

/// Steady-state Kalman pair: Sigma solving the filtering DARE and
/// Lbar = A Sigma C'(C Sigma C' + Ny)^{-1}. Computed through LQR duality
/// on (A', C', Nx, Ny).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> kalman_gain(const Eigen::MatrixXd& A,
                                                        const Eigen::MatrixXd& C,
                                                        const Eigen::MatrixXd& Nx,
                                                        const Eigen::MatrixXd& Ny);

/// max |eig(M)| < 1 - margin.
bool is_schur_stable(const Eigen::MatrixXd& M, double margin = 1e-9);

}  // namespace ddlqg
