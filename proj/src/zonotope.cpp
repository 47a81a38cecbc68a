#include "ddlqg/zonotope.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "ddlqg/errors.hpp"
#include "ddlqg/linalg.hpp"
#include "ddlqg/sdp/solver.hpp"

namespace ddlqg {

Zonotope::Zonotope(Eigen::VectorXd center, Eigen::MatrixXd generators)
    : c(std::move(center)), G(std::move(generators)) {
    if (G.size() == 0) G.resize(c.size(), 0);
    if (G.rows() != c.size()) throw std::invalid_argument("Zonotope: generator row count mismatch");
}

Zonotope Zonotope::point(const Eigen::VectorXd& center) {
    return Zonotope(center, Eigen::MatrixXd(center.size(), 0));
}

Zonotope Zonotope::box(int dim, double amplitude) {
    return Zonotope(Eigen::VectorXd::Zero(dim),
                    amplitude * Eigen::MatrixXd::Identity(dim, dim));
}

MatrixZonotope noise_matrix_zonotope(const Zonotope& Zn, int T) {
    if (T < 1) throw std::invalid_argument("noise_matrix_zonotope: T must be >= 1");
    MatrixZonotope M;
    M.C = Zn.c.replicate(1, T);
    M.G.reserve(static_cast<std::size_t>(Zn.generators()) * T);
    for (int i = 0; i < Zn.generators(); ++i)
        for (int t = 0; t < T; ++t) {
            Eigen::MatrixXd g = Eigen::MatrixXd::Zero(Zn.dim(), T);
            g.col(t) = Zn.G.col(i);
            M.G.push_back(std::move(g));
        }
    return M;
}

MatrixZonotope system_matrix_zonotope(const TrajectoryData& data, const MatrixZonotope& Mw) {
    if (!check_rank_condition(data))
        throw RankConditionError("system_matrix_zonotope: rank([X0; U0]) < nx + nu");
    if (Mw.rows() != data.nx() || Mw.cols() != data.samples())
        throw std::invalid_argument("system_matrix_zonotope: Mw dimension mismatch");
    Eigen::MatrixXd phi0(data.nx() + data.nu(), data.samples());
    phi0 << data.X0, data.U0;
    const Eigen::MatrixXd pinv = pseudo_inverse(phi0);
    MatrixZonotope M;
    M.C = (data.X1 - Mw.C) * pinv;
    M.G.reserve(Mw.G.size());
    for (const auto& g : Mw.G) M.G.push_back(-g * pinv);
    return M;
}

MatrixZonotope output_matrix_zonotope(const TrajectoryData& data, const MatrixZonotope& Mv) {
    if (numerical_rank(data.X0) != data.nx())
        throw RankConditionError("output_matrix_zonotope: X0 not full row rank");
    if (Mv.rows() != data.ny() || Mv.cols() != data.samples())
        throw std::invalid_argument("output_matrix_zonotope: Mv dimension mismatch");
    const Eigen::MatrixXd pinv = pseudo_inverse(data.X0);
    MatrixZonotope M;
    M.C = (data.Y0 - Mv.C) * pinv;
    M.G.reserve(Mv.G.size());
    for (const auto& g : Mv.G) M.G.push_back(-g * pinv);
    return M;
}

Zonotope propagate(const Zonotope& R, const Eigen::VectorXd& u, const MatrixZonotope& MSigma,
                   const Zonotope& Zw) {
    const int nx = R.dim();
    const int nu = static_cast<int>(u.size());
    if (MSigma.cols() != nx + nu || MSigma.rows() != nx)
        throw std::invalid_argument("propagate: MSigma dimension mismatch");
    if (Zw.dim() != nx) throw std::invalid_argument("propagate: Zw dimension mismatch");

    Eigen::VectorXd cz(nx + nu);
    cz << R.c, u;
    Eigen::MatrixXd Gz = Eigen::MatrixXd::Zero(nx + nu, R.generators());
    Gz.topRows(nx) = R.G;

    const int xi = MSigma.generators();
    const int gr = R.generators();
    Zonotope out;
    out.c = MSigma.C * cz + Zw.c;
    out.G.resize(nx, gr + xi * (gr + 1) + Zw.generators());
    int col = 0;
    out.G.middleCols(col, gr) = MSigma.C * Gz;
    col += gr;
    for (int i = 0; i < xi; ++i) out.G.col(col++) = MSigma.G[i] * cz;
    for (int i = 0; i < xi; ++i) {
        out.G.middleCols(col, gr) = MSigma.G[i] * Gz;
        col += gr;
    }
    out.G.middleCols(col, Zw.generators()) = Zw.G;
    return out;
}

Zonotope reduce_generators(const Zonotope& z, int max_generators) {
    const int n = z.dim();
    if (z.generators() <= max_generators) return z;
    const int keep = std::max(0, max_generators - n);

    std::vector<int> order(z.generators());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return z.G.col(a).norm() > z.G.col(b).norm(); });

    Zonotope out;
    out.c = z.c;
    out.G.resize(n, keep + n);
    Eigen::VectorXd boxed = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < z.generators(); ++k) {
        if (k < keep)
            out.G.col(k) = z.G.col(order[k]);
        else
            boxed += z.G.col(order[k]).cwiseAbs();
    }
    out.G.rightCols(n) = boxed.asDiagonal();
    return out;
}

Eigen::MatrixXd lambda_star(const Zonotope& R, const MatrixZonotope& MC, const Zonotope& Zv) {
    const int nx = R.dim();
    const int ny = MC.rows();
    if (MC.cols() != nx) throw std::invalid_argument("lambda_star: MC dimension mismatch");
    if (Zv.dim() != ny) throw std::invalid_argument("lambda_star: Zv dimension mismatch");

    // Normal equations of the row-wise least squares: lambda * Gram = Rhs.
    const Eigen::MatrixXd CG = MC.C * R.G;
    Eigen::MatrixXd gram = CG * CG.transpose() + Zv.G * Zv.G.transpose();
    for (const auto& g : MC.G) {
        gram += g * g.transpose();
        const Eigen::MatrixXd gG = g * R.G;
        gram += gG * gG.transpose();
    }
    const Eigen::MatrixXd rhs = R.G * CG.transpose();
    // Minimum-norm solution when the Gram matrix is singular.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(symmetrize(gram));
    return cod.solve(rhs.transpose()).transpose();
}

namespace {

Eigen::MatrixXd drop_zero_columns(const Eigen::MatrixXd& G) {
    std::vector<int> cols;
    for (int j = 0; j < G.cols(); ++j)
        if (G.col(j).norm() > 0.0) cols.push_back(j);
    Eigen::MatrixXd out(G.rows(), static_cast<int>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<int>(j)) = G.col(cols[j]);
    return out;
}

}  // namespace

Zonotope intersect_measurement(const Zonotope& R, const Eigen::VectorXd& y,
                               const MatrixZonotope& MC, const Zonotope& Zv,
                               const Eigen::MatrixXd* lambda) {
    const int nx = R.dim();
    const int ny = MC.rows();
    if (y.size() != ny) throw std::invalid_argument("intersect_measurement: y dimension mismatch");
    const Eigen::MatrixXd lam = lambda ? *lambda : lambda_star(R, MC, Zv);
    if (lam.rows() != nx || lam.cols() != ny)
        throw std::invalid_argument("intersect_measurement: lambda dimension mismatch");

    Zonotope out;
    out.c = R.c + lam * (y - MC.C * R.c - Zv.c);
    const int xi = MC.generators();
    const int gr = R.generators();
    Eigen::MatrixXd G(nx, gr + xi + Zv.generators() + xi * gr);
    int col = 0;
    G.middleCols(col, gr) = (Eigen::MatrixXd::Identity(nx, nx) - lam * MC.C) * R.G;
    col += gr;
    for (int i = 0; i < xi; ++i) G.col(col++) = -lam * MC.G[i] * R.c;
    G.middleCols(col, Zv.generators()) = -lam * Zv.G;
    col += Zv.generators();
    for (int i = 0; i < xi; ++i) {
        G.middleCols(col, gr) = -lam * MC.G[i] * R.G;
        col += gr;
    }
    out.G = drop_zero_columns(G);
    return out;
}

bool contains(const Zonotope& z, const Eigen::VectorXd& x, double tol) {
    if (x.size() != z.dim()) throw std::invalid_argument("contains: dimension mismatch");
    const Eigen::VectorXd d = x - z.c;
    if (z.generators() == 0) return d.cwiseAbs().maxCoeff() <= tol;

    // min t s.t. -t <= beta_i <= t, G beta = d; contained iff t* <= 1.
    sdp::SdpModel lp;
    const auto t = lp.add_scalar("t");
    const auto beta = lp.add_matrix("beta", z.generators(), 1);
    for (int i = 0; i < z.generators(); ++i) {
        Eigen::MatrixXd pick = Eigen::MatrixXd::Zero(1, z.generators());
        pick(0, i) = 1.0;
        const auto bi = pick * sdp::MatExpr::variable(beta);
        lp.add_lmi(sdp::MatExpr::variable(t) - bi);
        lp.add_lmi(sdp::MatExpr::variable(t) + bi);
    }
    lp.add_equality(z.G * sdp::MatExpr::variable(beta), d);
    lp.minimize(t);

    const auto sol = sdp::solve(lp, 1e-9, 300);
    if (sol.status == sdp::SdpStatus::Infeasible) return false;
    if (sol.status != sdp::SdpStatus::Optimal) return false;
    return sol.objective <= 1.0 + tol;
}

}  // namespace ddlqg
