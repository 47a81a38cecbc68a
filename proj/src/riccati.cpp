#include "ddlqg/riccati.hpp"

#include <stdexcept>

#include "ddlqg/errors.hpp"
#include "ddlqg/linalg.hpp"

namespace ddlqg {

namespace {

// (Wu + B'PB)^{-1} B'PA through an LLT factorization.
Eigen::MatrixXd gain_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::MatrixXd& Wu, const Eigen::MatrixXd& P) {
    const Eigen::MatrixXd G = symmetrize(Wu + B.transpose() * P * B);
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("solve_dare: Wu + B'PB not positive definite");
    return llt.solve(B.transpose() * P * A);
}

}  // namespace

double dare_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& Wx,
                     const Eigen::MatrixXd& Wu, const Eigen::MatrixXd& P) {
    const Eigen::MatrixXd R =
        A.transpose() * P * A - P - A.transpose() * P * B * gain_solve(A, B, Wu, P) + Wx;
    return R.norm();
}

DareSolution solve_dare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                        const Eigen::MatrixXd& Wx, const Eigen::MatrixXd& Wu, double tol,
                        int max_iter, const std::optional<Eigen::MatrixXd>& P0) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n || B.rows() != n)
        throw std::invalid_argument("solve_dare: dimension mismatch between A and B");
    if (Wx.rows() != n || Wx.cols() != n)
        throw std::invalid_argument("solve_dare: Wx dimension mismatch");
    if (Wu.rows() != B.cols() || Wu.cols() != B.cols())
        throw std::invalid_argument("solve_dare: Wu dimension mismatch");
    {
        Eigen::LLT<Eigen::MatrixXd> llt(symmetrize(Wu));
        if (llt.info() != Eigen::Success)
            throw std::invalid_argument("solve_dare: Wu must be positive definite");
    }

    Eigen::MatrixXd P = P0 ? symmetrize(*P0) : symmetrize(Wx);
    DareSolution sol;
    double step = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= max_iter; ++k) {
        const Eigen::MatrixXd K = gain_solve(A, B, Wu, P);
        Eigen::MatrixXd next =
            symmetrize(A.transpose() * P * A - A.transpose() * P * B * K + Wx);
        step = (next - P).norm();
        P = std::move(next);
        sol.iterations = k;
        if (step <= tol) {
            sol.residual = dare_residual(A, B, Wx, Wu, P);
            if (sol.residual <= tol || step == 0.0) {
                sol.P = P;
                return sol;
            }
        }
    }
    sol.residual = dare_residual(A, B, Wx, Wu, P);
    if (sol.residual <= tol) {
        sol.P = P;
        return sol;
    }
    throw NoConvergenceError("solve_dare: no convergence within max_iter", sol.residual);
}

Eigen::MatrixXd lqr_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         const Eigen::MatrixXd& Wx, const Eigen::MatrixXd& Wu) {
    const DareSolution sol = solve_dare(A, B, Wx, Wu);
    return -gain_solve(A, B, Wu, sol.P);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> kalman_gain(const Eigen::MatrixXd& A,
                                                        const Eigen::MatrixXd& C,
                                                        const Eigen::MatrixXd& Nx,
                                                        const Eigen::MatrixXd& Ny) {
    // Duality: the filtering DARE is the control DARE on (A', C', Nx, Ny).
    const DareSolution sol = solve_dare(A.transpose(), C.transpose(), Nx, Ny);
    const Eigen::MatrixXd& Sigma = sol.P;
    const Eigen::MatrixXd S = symmetrize(C * Sigma * C.transpose() + Ny);
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("kalman_gain: C Sigma C' + Ny not positive definite");
    // L = A Sigma C' (C Sigma C' + Ny)^{-1}, solved from the right.
    const Eigen::MatrixXd L = llt.solve(C * Sigma * A.transpose()).transpose();
    return {Sigma, L};
}

bool is_schur_stable(const Eigen::MatrixXd& M, double margin) {
    if (M.rows() != M.cols()) throw std::invalid_argument("is_schur_stable: matrix must be square");
    return spectral_radius(M) < 1.0 - margin;
}

}  // namespace ddlqg
