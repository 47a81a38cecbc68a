#include "ddlqg/sdp/model.hpp"

#include <stdexcept>

namespace ddlqg::sdp {

int scalar_index(const VarRef& v, int i, int j) {
    if (i < 0 || j < 0 || i >= v.rows || j >= v.cols)
        throw std::invalid_argument("scalar_index: entry out of range for " + v.name);
    if (!v.symmetric) return v.offset + i * v.cols + j;
    if (i > j) std::swap(i, j);
    // Row-wise upper triangle: row i starts after sum_{r<i} (n - r) entries.
    const int n = v.rows;
    return v.offset + i * n - i * (i - 1) / 2 + (j - i);
}

MatExpr MatExpr::constant(const Eigen::MatrixXd& m) {
    MatExpr e;
    e.rows_ = static_cast<int>(m.rows());
    e.cols_ = static_cast<int>(m.cols());
    e.constant_ = m;
    return e;
}

MatExpr MatExpr::zero(int rows, int cols) { return constant(Eigen::MatrixXd::Zero(rows, cols)); }

MatExpr MatExpr::variable(const VarRef& v) {
    MatExpr e;
    e.rows_ = v.rows;
    e.cols_ = v.cols;
    e.constant_ = Eigen::MatrixXd::Zero(v.rows, v.cols);
    if (!v.symmetric) {
        for (int i = 0; i < v.rows; ++i)
            for (int j = 0; j < v.cols; ++j) {
                Eigen::MatrixXd m = Eigen::MatrixXd::Zero(v.rows, v.cols);
                m(i, j) = 1.0;
                e.coeff_[scalar_index(v, i, j)] = std::move(m);
            }
    } else {
        for (int i = 0; i < v.rows; ++i)
            for (int j = i; j < v.cols; ++j) {
                Eigen::MatrixXd m = Eigen::MatrixXd::Zero(v.rows, v.cols);
                m(i, j) = 1.0;
                m(j, i) = 1.0;
                e.coeff_[scalar_index(v, i, j)] = std::move(m);
            }
    }
    return e;
}

MatExpr MatExpr::scalar_times(const VarRef& s, const Eigen::MatrixXd& coeff) {
    if (s.count() != 1) throw std::invalid_argument("scalar_times: variable is not a scalar");
    MatExpr e;
    e.rows_ = static_cast<int>(coeff.rows());
    e.cols_ = static_cast<int>(coeff.cols());
    e.constant_ = Eigen::MatrixXd::Zero(e.rows_, e.cols_);
    e.coeff_[s.offset] = coeff;
    return e;
}

MatExpr MatExpr::operator+(const MatExpr& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw std::invalid_argument("MatExpr: shape mismatch in addition");
    MatExpr e = *this;
    e.constant_ += o.constant_;
    for (const auto& [k, m] : o.coeff_) {
        auto it = e.coeff_.find(k);
        if (it == e.coeff_.end())
            e.coeff_[k] = m;
        else
            it->second += m;
    }
    return e;
}

MatExpr MatExpr::operator-(const MatExpr& o) const { return *this + (-o); }

MatExpr MatExpr::operator-() const { return scaled(-1.0); }

MatExpr MatExpr::scaled(double s) const {
    MatExpr e = *this;
    e.constant_ *= s;
    for (auto& [k, m] : e.coeff_) m *= s;
    return e;
}

MatExpr MatExpr::transpose() const {
    MatExpr e;
    e.rows_ = cols_;
    e.cols_ = rows_;
    e.constant_ = constant_.transpose();
    for (const auto& [k, m] : coeff_) e.coeff_[k] = m.transpose();
    return e;
}

MatExpr operator*(const Eigen::MatrixXd& lhs, const MatExpr& e) {
    if (lhs.cols() != e.rows_) throw std::invalid_argument("MatExpr: shape mismatch in left product");
    MatExpr r;
    r.rows_ = static_cast<int>(lhs.rows());
    r.cols_ = e.cols_;
    r.constant_ = lhs * e.constant_;
    for (const auto& [k, m] : e.coeff_) r.coeff_[k] = lhs * m;
    return r;
}

MatExpr MatExpr::operator*(const Eigen::MatrixXd& rhs) const {
    if (cols_ != rhs.rows()) throw std::invalid_argument("MatExpr: shape mismatch in right product");
    MatExpr r;
    r.rows_ = rows_;
    r.cols_ = static_cast<int>(rhs.cols());
    r.constant_ = constant_ * rhs;
    for (const auto& [k, m] : coeff_) r.coeff_[k] = m * rhs;
    return r;
}

MatExpr MatExpr::blocks(const std::vector<std::vector<MatExpr>>& grid) {
    if (grid.empty()) throw std::invalid_argument("MatExpr::blocks: empty grid");
    std::vector<int> row_h(grid.size(), 0), col_w(grid[0].size(), 0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i].size() != grid[0].size())
            throw std::invalid_argument("MatExpr::blocks: ragged grid");
        for (std::size_t j = 0; j < grid[i].size(); ++j) {
            if (row_h[i] == 0) row_h[i] = grid[i][j].rows();
            if (col_w[j] == 0) col_w[j] = grid[i][j].cols();
            if (grid[i][j].rows() != row_h[i] || grid[i][j].cols() != col_w[j])
                throw std::invalid_argument("MatExpr::blocks: inconsistent block shapes");
        }
    }
    int total_r = 0, total_c = 0;
    for (int h : row_h) total_r += h;
    for (int w : col_w) total_c += w;

    MatExpr e;
    e.rows_ = total_r;
    e.cols_ = total_c;
    e.constant_ = Eigen::MatrixXd::Zero(total_r, total_c);
    int r0 = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        int c0 = 0;
        for (std::size_t j = 0; j < grid[i].size(); ++j) {
            const MatExpr& b = grid[i][j];
            e.constant_.block(r0, c0, row_h[i], col_w[j]) = b.constant_;
            for (const auto& [k, m] : b.coeff_) {
                auto it = e.coeff_.find(k);
                if (it == e.coeff_.end()) {
                    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(total_r, total_c);
                    full.block(r0, c0, row_h[i], col_w[j]) = m;
                    e.coeff_[k] = std::move(full);
                } else {
                    it->second.block(r0, c0, row_h[i], col_w[j]) += m;
                }
            }
            c0 += col_w[j];
        }
        r0 += row_h[i];
    }
    return e;
}

MatExpr MatExpr::trace() const {
    if (rows_ != cols_) throw std::invalid_argument("MatExpr::trace: expression not square");
    MatExpr e;
    e.rows_ = e.cols_ = 1;
    e.constant_ = Eigen::MatrixXd::Constant(1, 1, constant_.trace());
    for (const auto& [k, m] : coeff_) {
        const double t = m.trace();
        if (t != 0.0) e.coeff_[k] = Eigen::MatrixXd::Constant(1, 1, t);
    }
    return e;
}

void SdpModel::grow(int extra) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(num_vars_ + extra);
    c.head(num_vars_) = c_;
    c_ = std::move(c);
    num_vars_ += extra;
}

VarRef SdpModel::add_scalar(const std::string& name) { return add_matrix(name, 1, 1); }

VarRef SdpModel::add_matrix(const std::string& name, int rows, int cols) {
    VarRef v{num_vars_, rows, cols, false, name};
    grow(v.count());
    vars_.push_back(v);
    return v;
}

VarRef SdpModel::add_symmetric(const std::string& name, int n) {
    VarRef v{num_vars_, n, n, true, name};
    grow(v.count());
    vars_.push_back(v);
    return v;
}

void SdpModel::minimize(const VarRef& scalar) {
    if (scalar.count() != 1) throw std::invalid_argument("minimize: objective must be a scalar");
    c_.setZero();
    c_(scalar.offset) = 1.0;
}

void SdpModel::add_objective_term(const VarRef& v, int i, int j, double coeff) {
    c_(scalar_index(v, i, j)) += coeff;
}

void SdpModel::add_lmi(const MatExpr& expr) {
    if (expr.rows() != expr.cols()) throw std::invalid_argument("add_lmi: block must be square");
    LmiBlock blk;
    blk.dim = expr.rows();
    const auto check = [&](const Eigen::MatrixXd& m, const char* what) {
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            throw std::invalid_argument(std::string("add_lmi: asymmetric ") + what);
    };
    check(expr.constant_part(), "constant part");
    blk.F0 = 0.5 * (expr.constant_part() + expr.constant_part().transpose());
    for (const auto& [k, m] : expr.coefficients()) {
        if (m.cwiseAbs().maxCoeff() == 0.0) continue;
        check(m, "coefficient");
        blk.terms.emplace_back(k, 0.5 * (m + m.transpose()));
    }
    blocks_.push_back(std::move(blk));
}

void SdpModel::add_equality(const MatExpr& expr, const Eigen::MatrixXd& rhs) {
    if (expr.rows() != rhs.rows() || expr.cols() != rhs.cols())
        throw std::invalid_argument("add_equality: shape mismatch");
    for (int i = 0; i < expr.rows(); ++i)
        for (int j = 0; j < expr.cols(); ++j) {
            std::map<int, double> row;
            for (const auto& [k, m] : expr.coefficients())
                if (m(i, j) != 0.0) row[k] = m(i, j);
            const double b = rhs(i, j) - expr.constant_part()(i, j);
            if (row.empty()) {
                if (std::abs(b) > 1e-12)
                    throw std::invalid_argument("add_equality: inconsistent constant row");
                continue;
            }
            eq_rows_.push_back(std::move(row));
            eq_rhs_.push_back(b);
        }
}

VarRef SdpModel::var(const std::string& name) const {
    for (const auto& v : vars_)
        if (v.name == name) return v;
    throw std::invalid_argument("SdpModel: unknown variable " + name);
}

Eigen::MatrixXd SdpModel::eq_matrix() const {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(num_equalities(), num_vars_);
    for (std::size_t r = 0; r < eq_rows_.size(); ++r)
        for (const auto& [k, val] : eq_rows_[r]) A(static_cast<int>(r), k) = val;
    return A;
}

Eigen::VectorXd SdpModel::eq_vector() const {
    return Eigen::Map<const Eigen::VectorXd>(eq_rhs_.data(), static_cast<int>(eq_rhs_.size()));
}

Eigen::MatrixXd SdpModel::value(const Eigen::VectorXd& x, const VarRef& v) const {
    if (x.size() != num_vars_) throw std::invalid_argument("value: decision vector size mismatch");
    Eigen::MatrixXd m(v.rows, v.cols);
    for (int i = 0; i < v.rows; ++i)
        for (int j = 0; j < v.cols; ++j) m(i, j) = x(scalar_index(v, i, j));
    return m;
}

namespace {

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

nlohmann::json SdpModel::to_json() const {
    nlohmann::json j;
    j["num_vars"] = num_vars_;
    j["objective"] = std::vector<double>(c_.data(), c_.data() + c_.size());
    j["variables"] = nlohmann::json::array();
    for (const auto& v : vars_)
        j["variables"].push_back({{"name", v.name},
                                  {"offset", v.offset},
                                  {"rows", v.rows},
                                  {"cols", v.cols},
                                  {"symmetric", v.symmetric}});
    j["blocks"] = nlohmann::json::array();
    for (const auto& b : blocks_) {
        nlohmann::json blk;
        blk["dim"] = b.dim;
        blk["F0"] = matrix_json(b.F0);
        blk["terms"] = nlohmann::json::array();
        for (const auto& [k, m] : b.terms)
            blk["terms"].push_back({{"var", k}, {"coeff", matrix_json(m)}});
        j["blocks"].push_back(std::move(blk));
    }
    j["eq_lhs"] = matrix_json(eq_matrix());
    const Eigen::VectorXd b = eq_vector();
    j["eq_rhs"] = std::vector<double>(b.data(), b.data() + b.size());
    return j;
}

}  // namespace ddlqg::sdp
