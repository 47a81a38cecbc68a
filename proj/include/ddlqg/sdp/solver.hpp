#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ddlqg/sdp/model.hpp"

namespace ddlqg::sdp {

enum class SdpStatus { Optimal, Infeasible, MaxIter, NumericalTrouble };

const char* to_string(SdpStatus s);

struct SdpSolution {
    SdpStatus status = SdpStatus::NumericalTrouble;
    Eigen::VectorXd x;
    double objective = std::numeric_limits<double>::quiet_NaN();

    /// Smallest eigenvalue over all LMI blocks evaluated at x.
    double lmi_min_eig = -std::numeric_limits<double>::infinity();
    /// Max-norm equality violation ||A_eq x - b_eq||_inf.
    double eq_residual = std::numeric_limits<double>::infinity();
    /// Max-norm dual feasibility violation.
    double dual_residual = std::numeric_limits<double>::infinity();
    /// Relative primal-dual objective gap.
    double duality_gap = std::numeric_limits<double>::infinity();

    std::vector<Eigen::MatrixXd> Z;  // dual blocks
    Eigen::VectorXd y;               // equality multipliers
    std::vector<double> objective_history;
    int iterations = 0;
};

/// Primal-dual interior-point solve with Nesterov-Todd scaling, dense
/// linear algebra, infeasible start, Mehrotra-style adaptive centering.
SdpSolution solve(const SdpModel& model, double tol = 1e-8, int max_iter = 200);

struct ResidualReport {
    double lmi_min_eig = 0.0;
    double eq_residual = 0.0;
    double gap = 0.0;
};

/// Recomputes the optimality measures of a candidate solution from scratch
/// (primal LMI minimum eigenvalue, equality residual, relative duality gap).
ResidualReport residuals(const SdpModel& model, const SdpSolution& sol);

}  // namespace ddlqg::sdp
