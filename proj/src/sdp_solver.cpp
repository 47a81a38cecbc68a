#include "ddlqg/sdp/solver.hpp"

#include <cmath>

#include "ddlqg/linalg.hpp"

namespace ddlqg::sdp {

const char* to_string(SdpStatus s) {
    switch (s) {
        case SdpStatus::Optimal: return "Optimal";
        case SdpStatus::Infeasible: return "Infeasible";
        case SdpStatus::MaxIter: return "MaxIter";
        case SdpStatus::NumericalTrouble: return "NumericalTrouble";
    }
    return "?";
}

namespace {

struct BlockState {
    Eigen::MatrixXd S;     // primal slack
    Eigen::MatrixXd Z;     // dual
    Eigen::MatrixXd W;     // NT scaling point, W Z W = S
    Eigen::MatrixXd Winv;
    Eigen::MatrixXd Sinv;
};

Eigen::MatrixXd evaluate_block(const LmiBlock& blk, const Eigen::VectorXd& x) {
    Eigen::MatrixXd F = blk.F0;
    for (const auto& [k, Fk] : blk.terms) F += x(k) * Fk;
    return F;
}

// Largest step alpha <= 1 keeping X + alpha dX positive definite.
double max_step(const Eigen::MatrixXd& X, const Eigen::MatrixXd& dX) {
    Eigen::LLT<Eigen::MatrixXd> llt(X);
    if (llt.info() != Eigen::Success) return 0.0;
    const Eigen::MatrixXd L = llt.matrixL();
    Eigen::MatrixXd M = L.triangularView<Eigen::Lower>().solve(dX);
    M = L.triangularView<Eigen::Lower>().solve(M.transpose());
    const double lam = min_eigenvalue_sym(M);
    if (lam >= 0.0) return 1.0;
    return std::min(1.0, -1.0 / lam);
}

}  // namespace

SdpSolution solve(const SdpModel& model, double tol, int max_iter) {
    const int m = model.num_vars();
    const auto& blocks = model.blocks();
    const int p = model.num_equalities();
    const Eigen::MatrixXd A = model.eq_matrix();
    const Eigen::VectorXd b = model.eq_vector();
    const Eigen::VectorXd& c = model.objective();

    int nu_total = 0;
    for (const auto& blk : blocks) nu_total += blk.dim;
    if (nu_total == 0) throw std::invalid_argument("sdp::solve: model has no LMI blocks");

    SdpSolution sol;
    sol.x = Eigen::VectorXd::Zero(m);
    if (p > 0) {
        // Least-squares start satisfying the equalities.
        sol.x = A.completeOrthogonalDecomposition().solve(b);
    }
    sol.y = Eigen::VectorXd::Zero(p);

    double init_scale = 1.0;
    for (const auto& blk : blocks)
        init_scale = std::max(init_scale, evaluate_block(blk, sol.x).cwiseAbs().maxCoeff());

    std::vector<BlockState> st(blocks.size());
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        st[j].S = init_scale * Eigen::MatrixXd::Identity(blocks[j].dim, blocks[j].dim);
        st[j].Z = Eigen::MatrixXd::Identity(blocks[j].dim, blocks[j].dim);
    }

    const double bscale = 1.0 + (p > 0 ? b.cwiseAbs().maxCoeff() : 0.0);
    const double cscale = 1.0 + (m > 0 ? c.cwiseAbs().maxCoeff() : 0.0);
    double fscale = 1.0;
    for (const auto& blk : blocks) fscale = std::max(fscale, blk.F0.cwiseAbs().maxCoeff());

    const double theta0 = 1.0 + std::sqrt(static_cast<double>(nu_total));
    const auto finalize_quality = [&](SdpSolution& s) {
        s.objective = c.dot(s.x);
        s.lmi_min_eig = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < blocks.size(); ++j)
            s.lmi_min_eig = std::min(s.lmi_min_eig, min_eigenvalue_sym(evaluate_block(blocks[j], s.x)));
        s.eq_residual = p > 0 ? (A * s.x - b).cwiseAbs().maxCoeff() : 0.0;
        double dobj = p > 0 ? b.dot(s.y) : 0.0;
        double rd = 0.0;
        Eigen::VectorXd dres = c;
        if (p > 0) dres -= A.transpose() * s.y;
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            dobj -= (blocks[j].F0.array() * s.Z[j].array()).sum();
            for (const auto& [k, Fk] : blocks[j].terms)
                dres(k) -= (Fk.array() * s.Z[j].array()).sum();
        }
        rd = m > 0 ? dres.cwiseAbs().maxCoeff() : 0.0;
        s.dual_residual = rd;
        s.duality_gap =
            std::abs(s.objective - dobj) / (1.0 + std::max(std::abs(s.objective), std::abs(dobj)));
    };

    Eigen::VectorXd x = sol.x;
    Eigen::VectorXd y = sol.y;

    for (int iter = 1; iter <= max_iter; ++iter) {
        sol.iterations = iter;

        // Residuals.
        Eigen::VectorXd rd = c;                       // c - A'y - <F_i, Z>
        if (p > 0) rd -= A.transpose() * y;
        Eigen::VectorXd rp = p > 0 ? Eigen::VectorXd(b - A * x) : Eigen::VectorXd();
        std::vector<Eigen::MatrixXd> rS(blocks.size());
        double mu = 0.0;
        double rs_norm = 0.0;
        double dobj = p > 0 ? b.dot(y) : 0.0;
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            for (const auto& [k, Fk] : blocks[j].terms)
                rd(k) -= (Fk.array() * st[j].Z.array()).sum();
            rS[j] = evaluate_block(blocks[j], x) - st[j].S;
            rs_norm = std::max(rs_norm, rS[j].cwiseAbs().maxCoeff());
            mu += (st[j].S.array() * st[j].Z.array()).sum();
            dobj -= (blocks[j].F0.array() * st[j].Z.array()).sum();
        }
        mu /= nu_total;

        const double pobj = c.dot(x);
        const double rp_rel = p > 0 ? rp.cwiseAbs().maxCoeff() / bscale : 0.0;
        const double rd_rel = rd.cwiseAbs().maxCoeff() / cscale;
        const double rs_rel = rs_norm / (1.0 + fscale);
        const double gap_rel =
            std::abs(pobj - dobj) / (1.0 + std::max(std::abs(pobj), std::abs(dobj)));
        const double mu_rel = mu / (1.0 + std::abs(pobj));

        sol.objective_history.push_back(pobj);

        if (std::max({rp_rel, rd_rel, rs_rel}) <= tol && std::max(gap_rel, mu_rel) <= tol) {
            sol.x = x;
            sol.y = y;
            sol.Z.resize(blocks.size());
            for (std::size_t j = 0; j < blocks.size(); ++j) sol.Z[j] = st[j].Z;
            sol.status = SdpStatus::Optimal;
            finalize_quality(sol);
            return sol;
        }

        // Primal infeasibility: dual iterates blowing up along an improving ray.
        double theta = y.size() > 0 ? y.cwiseAbs().maxCoeff() : 0.0;
        for (const auto& bs : st) theta = std::max(theta, bs.Z.cwiseAbs().maxCoeff());
        if (theta > 1e8 * theta0) {
            Eigen::VectorXd ray = c - rd;  // A'y + <F_i, Z> scaled by theta
            const double ray_res = ray.cwiseAbs().maxCoeff() / theta;
            double ray_obj = p > 0 ? b.dot(y) : 0.0;
            for (std::size_t j = 0; j < blocks.size(); ++j)
                ray_obj -= (blocks[j].F0.array() * st[j].Z.array()).sum();
            sol.x = x;
            sol.y = y;
            sol.Z.resize(blocks.size());
            for (std::size_t j = 0; j < blocks.size(); ++j) sol.Z[j] = st[j].Z;
            sol.status = (ray_res <= 1e-4 && ray_obj / theta > 1e-10) ? SdpStatus::Infeasible
                                                                      : SdpStatus::NumericalTrouble;
            finalize_quality(sol);
            return sol;
        }

        // Nesterov-Todd scaling per block: W = Ls G^{-1/2} Ls' with
        // G = Ls' Z Ls and S = Ls Ls'.
        bool scaling_ok = true;
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            Eigen::LLT<Eigen::MatrixXd> llt(st[j].S);
            if (llt.info() != Eigen::Success) {
                scaling_ok = false;
                break;
            }
            const Eigen::MatrixXd Ls = llt.matrixL();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
                symmetrize(Ls.transpose() * st[j].Z * Ls));
            if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
                scaling_ok = false;
                break;
            }
            const Eigen::VectorXd ghalf = es.eigenvalues().cwiseSqrt();
            const Eigen::MatrixXd U = es.eigenvectors();
            st[j].W = symmetrize(Ls * U * ghalf.cwiseInverse().asDiagonal() * U.transpose() *
                                 Ls.transpose());
            Eigen::MatrixXd Lsinv =
                Ls.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(blocks[j].dim,
                                                                                  blocks[j].dim));
            st[j].Winv = symmetrize(Lsinv.transpose() * U * ghalf.asDiagonal() * U.transpose() * Lsinv);
            st[j].Sinv = symmetrize(Lsinv.transpose() * Lsinv);
        }
        if (!scaling_ok) {
            sol.x = x;
            sol.y = y;
            sol.Z.resize(blocks.size());
            for (std::size_t j = 0; j < blocks.size(); ++j) sol.Z[j] = st[j].Z;
            sol.status = SdpStatus::NumericalTrouble;
            finalize_quality(sol);
            return sol;
        }

        // Schur complement H_ab = sum_blocks <F_a, Winv F_b Winv>.
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, m);
        std::vector<std::vector<Eigen::MatrixXd>> scaled_terms(blocks.size());
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            const auto& terms = blocks[j].terms;
            scaled_terms[j].resize(terms.size());
            for (std::size_t a = 0; a < terms.size(); ++a)
                scaled_terms[j][a] = st[j].Winv * terms[a].second * st[j].Winv;
            for (std::size_t a = 0; a < terms.size(); ++a)
                for (std::size_t b2 = a; b2 < terms.size(); ++b2) {
                    const double h =
                        (terms[a].second.array() * scaled_terms[j][b2].array()).sum();
                    H(terms[a].first, terms[b2].first) += h;
                    if (terms[a].first != terms[b2].first) H(terms[b2].first, terms[a].first) += h;
                }
        }
        const double reg = 1e-12 * std::max(1.0, H.diagonal().maxCoeff());
        H.diagonal().array() += reg;

        Eigen::MatrixXd KKT = Eigen::MatrixXd::Zero(m + p, m + p);
        KKT.topLeftCorner(m, m) = H;
        if (p > 0) {
            KKT.topRightCorner(m, p) = -A.transpose();
            KKT.bottomLeftCorner(p, m) = A;
            KKT.bottomRightCorner(p, p).diagonal().array() += reg;
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(KKT);

        // One direction for a given centering target sigma*mu.
        const auto compute_direction = [&](double sigma_mu, Eigen::VectorXd& dx,
                                           Eigen::VectorXd& dy, std::vector<Eigen::MatrixXd>& dS,
                                           std::vector<Eigen::MatrixXd>& dZ) -> bool {
            std::vector<Eigen::MatrixXd> Rt(blocks.size());
            Eigen::VectorXd g = Eigen::VectorXd::Zero(m + p);
            for (std::size_t j = 0; j < blocks.size(); ++j) {
                Rt[j] = sigma_mu * st[j].Sinv - st[j].Z - st[j].Winv * rS[j] * st[j].Winv;
                for (const auto& [k, Fk] : blocks[j].terms)
                    g(k) += (Fk.array() * Rt[j].array()).sum();
            }
            g.head(m) -= rd;
            if (p > 0) g.tail(p) = rp;

            Eigen::VectorXd step = lu.solve(g);
            step += lu.solve(g - KKT * step);  // one refinement pass
            if (!step.allFinite()) return false;
            dx = step.head(m);
            dy = p > 0 ? Eigen::VectorXd(step.tail(p)) : Eigen::VectorXd();

            dS.resize(blocks.size());
            dZ.resize(blocks.size());
            for (std::size_t j = 0; j < blocks.size(); ++j) {
                Eigen::MatrixXd dF = Eigen::MatrixXd::Zero(blocks[j].dim, blocks[j].dim);
                for (const auto& [k, Fk] : blocks[j].terms) dF += dx(k) * Fk;
                dS[j] = dF + rS[j];
                dZ[j] = symmetrize(Rt[j] - st[j].Winv * dF * st[j].Winv);
            }
            return true;
        };

        Eigen::VectorXd dx, dy;
        std::vector<Eigen::MatrixXd> dS, dZ;
        if (!compute_direction(0.0, dx, dy, dS, dZ)) {
            sol.x = x;
            sol.y = y;
            sol.Z.resize(blocks.size());
            for (std::size_t j = 0; j < blocks.size(); ++j) sol.Z[j] = st[j].Z;
            sol.status = SdpStatus::NumericalTrouble;
            finalize_quality(sol);
            return sol;
        }

        double ap = 1.0, ad = 1.0;
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            ap = std::min(ap, max_step(st[j].S, dS[j]));
            ad = std::min(ad, max_step(st[j].Z, dZ[j]));
        }
        double mu_aff = 0.0;
        for (std::size_t j = 0; j < blocks.size(); ++j)
            mu_aff += ((st[j].S + 0.98 * ap * dS[j]).array() *
                       (st[j].Z + 0.98 * ad * dZ[j]).array())
                          .sum();
        mu_aff = std::max(mu_aff / nu_total, 0.0);
        double sigma = std::pow(mu_aff / mu, 3.0);
        sigma = std::clamp(sigma, 1e-8, 1.0);

        if (!compute_direction(sigma * mu, dx, dy, dS, dZ)) {
            sol.x = x;
            sol.y = y;
            sol.Z.resize(blocks.size());
            for (std::size_t j = 0; j < blocks.size(); ++j) sol.Z[j] = st[j].Z;
            sol.status = SdpStatus::NumericalTrouble;
            finalize_quality(sol);
            return sol;
        }

        ap = 1.0;
        ad = 1.0;
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            ap = std::min(ap, max_step(st[j].S, dS[j]));
            ad = std::min(ad, max_step(st[j].Z, dZ[j]));
        }
        ap = std::min(1.0, 0.98 * ap);
        ad = std::min(1.0, 0.98 * ad);
        if (ap < 1e-10 && ad < 1e-10) {
            sol.x = x;
            sol.y = y;
            sol.Z.resize(blocks.size());
            for (std::size_t j = 0; j < blocks.size(); ++j) sol.Z[j] = st[j].Z;
            sol.status = SdpStatus::NumericalTrouble;
            finalize_quality(sol);
            return sol;
        }

        x += ap * dx;
        if (p > 0) y += ad * dy;
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            st[j].S = symmetrize(st[j].S + ap * dS[j]);
            st[j].Z = symmetrize(st[j].Z + ad * dZ[j]);
        }
    }

    sol.x = x;
    sol.y = y;
    sol.Z.resize(blocks.size());
    for (std::size_t j = 0; j < blocks.size(); ++j) sol.Z[j] = st[j].Z;
    sol.status = SdpStatus::MaxIter;
    finalize_quality(sol);
    return sol;
}

ResidualReport residuals(const SdpModel& model, const SdpSolution& sol) {
    if (sol.x.size() != model.num_vars())
        throw std::invalid_argument("residuals: solution dimension mismatch");
    ResidualReport rep;
    rep.lmi_min_eig = std::numeric_limits<double>::infinity();
    for (const auto& blk : model.blocks()) {
        Eigen::MatrixXd F = blk.F0;
        for (const auto& [k, Fk] : blk.terms) F += sol.x(k) * Fk;
        rep.lmi_min_eig = std::min(rep.lmi_min_eig, min_eigenvalue_sym(F));
    }
    rep.eq_residual = model.num_equalities() > 0
                          ? (model.eq_matrix() * sol.x - model.eq_vector()).cwiseAbs().maxCoeff()
                          : 0.0;
    const double pobj = model.objective().dot(sol.x);
    double dobj = model.num_equalities() > 0 ? model.eq_vector().dot(sol.y) : 0.0;
    if (sol.Z.size() == model.blocks().size()) {
        for (std::size_t j = 0; j < model.blocks().size(); ++j)
            dobj -= (model.blocks()[j].F0.array() * sol.Z[j].array()).sum();
        rep.gap = std::abs(pobj - dobj) / (1.0 + std::max(std::abs(pobj), std::abs(dobj)));
    } else {
        rep.gap = std::numeric_limits<double>::infinity();
    }
    return rep;
}

}  // namespace ddlqg::sdp
