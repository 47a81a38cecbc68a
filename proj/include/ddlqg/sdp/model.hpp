#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace ddlqg::sdp {

/// Handle to a named decision variable (scalar, full matrix, or symmetric
/// matrix stored by its upper triangle).
struct VarRef {
    int offset = 0;
    int rows = 0;
    int cols = 0;
    bool symmetric = false;
    std::string name;

    int count() const { return symmetric ? rows * (rows + 1) / 2 : rows * cols; }
};

/// Scalar index of entry (i, j) of a variable within the stacked decision
/// vector. Symmetric variables map (i, j) and (j, i) to the same scalar.
int scalar_index(const VarRef& v, int i, int j);

/// Matrix-valued affine expression in the scalar decision variables:
/// constant + sum_k x_k * Coeff_k.
class MatExpr {
public:
    MatExpr() = default;

    static MatExpr constant(const Eigen::MatrixXd& m);
    static MatExpr zero(int rows, int cols);
    static MatExpr variable(const VarRef& v);
    /// s * coeff for a scalar variable s.
    static MatExpr scalar_times(const VarRef& s, const Eigen::MatrixXd& coeff);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    MatExpr operator+(const MatExpr& o) const;
    MatExpr operator-(const MatExpr& o) const;
    MatExpr operator-() const;
    MatExpr transpose() const;
    MatExpr scaled(double s) const;

    /// lhs * expr with a constant matrix.
    friend MatExpr operator*(const Eigen::MatrixXd& lhs, const MatExpr& e);
    /// expr * rhs with a constant matrix.
    MatExpr operator*(const Eigen::MatrixXd& rhs) const;

    /// Assembles a block matrix from a rectangular grid of expressions.
    static MatExpr blocks(const std::vector<std::vector<MatExpr>>& grid);

    /// 1x1 expression holding the trace.
    MatExpr trace() const;

    const Eigen::MatrixXd& constant_part() const { return constant_; }
    const std::map<int, Eigen::MatrixXd>& coefficients() const { return coeff_; }

private:
    int rows_ = 0, cols_ = 0;
    Eigen::MatrixXd constant_;
    std::map<int, Eigen::MatrixXd> coeff_;  // scalar variable index -> coefficient matrix
};

/// One LMI block F0 + sum_k x_k F_k >= 0 in dense symmetric storage.
struct LmiBlock {
    int dim = 0;
    Eigen::MatrixXd F0;
    std::vector<std::pair<int, Eigen::MatrixXd>> terms;
};

/// Standard-form semidefinite program: minimize c'x subject to LMI blocks
/// affine in x and linear equalities A_eq x = b_eq.
class SdpModel {
public:
    VarRef add_scalar(const std::string& name);
    VarRef add_matrix(const std::string& name, int rows, int cols);
    VarRef add_symmetric(const std::string& name, int n);

    /// Sets the objective to the given scalar variable.
    void minimize(const VarRef& scalar);
    void add_objective_term(const VarRef& v, int i, int j, double coeff);

    /// Adds expr >= 0 (expr must be symmetric within 1e-12).
    void add_lmi(const MatExpr& expr);
    /// Adds expr == rhs entrywise.
    void add_equality(const MatExpr& expr, const Eigen::MatrixXd& rhs);

    int num_vars() const { return num_vars_; }
    const Eigen::VectorXd& objective() const { return c_; }
    const std::vector<LmiBlock>& blocks() const { return blocks_; }
    const std::vector<VarRef>& variables() const { return vars_; }
    VarRef var(const std::string& name) const;

    int num_equalities() const { return static_cast<int>(eq_rhs_.size()); }
    Eigen::MatrixXd eq_matrix() const;
    Eigen::VectorXd eq_vector() const;

    /// Extracts the matrix value of a variable from a decision vector.
    Eigen::MatrixXd value(const Eigen::VectorXd& x, const VarRef& v) const;

    /// Self-describing dump (objective, dense blocks, equalities) so an
    /// external solver can cross-check the program.
    nlohmann::json to_json() const;

private:
    void grow(int extra);

    int num_vars_ = 0;
    Eigen::VectorXd c_;
    std::vector<VarRef> vars_;
    std::vector<LmiBlock> blocks_;
    std::vector<std::map<int, double>> eq_rows_;
    std::vector<double> eq_rhs_;
};

}  // namespace ddlqg::sdp
