#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace ddlqg {

inline Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
    return 0.5 * (m + m.transpose());
}

inline bool is_symmetric(const Eigen::MatrixXd& m, double tol = 1e-12) {
    if (m.rows() != m.cols()) return false;
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

/// Numerical rank: singular value counts as nonzero iff
/// sigma > max(rows, cols) * eps * sigma_max.
inline int numerical_rank(const Eigen::MatrixXd& m) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    const double thresh =
        static_cast<double>(std::max(m.rows(), m.cols())) * std::numeric_limits<double>::epsilon() * s(0);
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > thresh) ++r;
    return r;
}

inline double spectral_norm(const Eigen::MatrixXd& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
}

inline double spectral_radius(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline double min_eigenvalue_sym(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

inline double max_eigenvalue_sym(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

/// Moore-Penrose pseudo-inverse (minimum Frobenius norm right inverse for
/// full-row-rank input).
inline Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(m);
    return cod.pseudoInverse();
}

/// Symmetric square root of a PSD matrix (eigenvalue route; negative
/// round-off eigenvalues are clamped to zero).
inline Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(m));
    Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

/// Eigenvalues sorted by (modulus, real, imag) for multiset comparison.
inline std::vector<std::complex<double>> sorted_eigenvalues(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> v(es.eigenvalues().data(),
                                        es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma < mb;
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return v;
}

/// Largest pairwise distance between two sorted eigenvalue multisets.
inline double eigenvalue_multiset_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    auto ea = sorted_eigenvalues(a);
    auto eb = sorted_eigenvalues(b);
    if (ea.size() != eb.size()) return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (std::size_t i = 0; i < ea.size(); ++i) d = std::max(d, std::abs(ea[i] - eb[i]));
    return d;
}

}  // namespace ddlqg
