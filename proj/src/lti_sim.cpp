#include "ddlqg/lti_sim.hpp"

#include <stdexcept>

#include "ddlqg/linalg.hpp"
#include "ddlqg/rng.hpp"

namespace ddlqg {

LtiSystem::LtiSystem(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)) {
    if (A.rows() != A.cols()) throw std::invalid_argument("LtiSystem: A must be square");
    if (B.rows() != A.rows()) throw std::invalid_argument("LtiSystem: B row count must match A");
    if (C.cols() != A.cols()) throw std::invalid_argument("LtiSystem: C column count must match A");
}

namespace {

Eigen::MatrixXd krylov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    const int n = static_cast<int>(A.rows());
    Eigen::MatrixXd K(n, n * B.cols());
    Eigen::MatrixXd term = B;
    for (int i = 0; i < n; ++i) {
        K.middleCols(i * B.cols(), B.cols()) = term;
        term = A * term;
    }
    return K;
}

}  // namespace

bool LtiSystem::is_controllable() const { return numerical_rank(krylov(A, B)) == nx(); }

bool LtiSystem::is_observable() const {
    return numerical_rank(krylov(A.transpose(), C.transpose())) == nx();
}

NoiseSpec NoiseSpec::zero() { return NoiseSpec{}; }

NoiseSpec NoiseSpec::uniform(double wbar, double vbar, std::uint64_t seed) {
    NoiseSpec s;
    s.kind = NoiseKind::UniformBounded;
    s.wbar = wbar;
    s.vbar = vbar;
    s.seed = seed;
    return s;
}

NoiseSpec NoiseSpec::gaussian(Eigen::MatrixXd Nx, Eigen::MatrixXd Ny, std::uint64_t seed) {
    NoiseSpec s;
    s.kind = NoiseKind::Gaussian;
    s.Nx = std::move(Nx);
    s.Ny = std::move(Ny);
    s.seed = seed;
    return s;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> generate_noise(const NoiseSpec& spec, int nx, int ny,
                                                           int horizon) {
    if (horizon < 1) throw std::invalid_argument("generate_noise: horizon must be >= 1");
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(nx, horizon);
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(ny, horizon);
    switch (spec.kind) {
        case NoiseKind::Zero:
            break;
        case NoiseKind::UniformBounded: {
            if (spec.wbar < 0 || spec.vbar < 0)
                throw std::invalid_argument("generate_noise: negative amplitude bound");
            Rng rng(spec.seed);
            const int wdim = spec.Ew ? static_cast<int>(spec.Ew->cols()) : nx;
            if (spec.Ew && spec.Ew->rows() != nx)
                throw std::invalid_argument("generate_noise: Ew row count must equal nx");
            for (int t = 0; t < horizon; ++t) {
                Eigen::VectorXd eta = rng.uniform_vector(wdim, spec.wbar);
                W.col(t) = spec.Ew ? Eigen::VectorXd(*spec.Ew * eta) : eta;
                V.col(t) = rng.uniform_vector(ny, spec.vbar);
            }
            break;
        }
        case NoiseKind::Gaussian: {
            if (spec.Ew)
                throw std::invalid_argument("generate_noise: Ew is only supported with uniform noise");
            if (spec.Nx.rows() != nx || spec.Nx.cols() != nx || spec.Ny.rows() != ny ||
                spec.Ny.cols() != ny)
                throw std::invalid_argument("generate_noise: covariance dimensions mismatch");
            Rng rng(spec.seed);
            const Eigen::MatrixXd Sx = sqrt_psd(spec.Nx);
            const Eigen::MatrixXd Sy = sqrt_psd(spec.Ny);
            for (int t = 0; t < horizon; ++t) {
                W.col(t) = Sx * rng.gaussian_vector(nx);
                V.col(t) = Sy * rng.gaussian_vector(ny);
            }
            break;
        }
    }
    return {W, V};
}

TrajectoryData simulate_openloop(const LtiSystem& sys, const Eigen::VectorXd& x0,
                                 const Eigen::MatrixXd& inputs, const NoiseSpec& noise) {
    const int T = static_cast<int>(inputs.cols());
    if (T < 1) throw std::invalid_argument("simulate_openloop: need at least one input sample");
    if (x0.size() != sys.nx()) throw std::invalid_argument("simulate_openloop: x0 dimension mismatch");
    if (inputs.rows() != sys.nu())
        throw std::invalid_argument("simulate_openloop: input dimension mismatch");

    auto [W, V] = generate_noise(noise, sys.nx(), sys.ny(), T);

    TrajectoryData data;
    data.X0.resize(sys.nx(), T);
    data.X1.resize(sys.nx(), T);
    data.U0 = inputs;
    data.Y0.resize(sys.ny(), T);

    Eigen::VectorXd x = x0;
    for (int t = 0; t < T; ++t) {
        data.X0.col(t) = x;
        data.Y0.col(t) = sys.C * x + V.col(t);
        x = sys.A * x + sys.B * inputs.col(t) + W.col(t);
        data.X1.col(t) = x;
    }
    data.W0 = W;
    data.V0 = V;
    return data;
}

Eigen::MatrixXd hankel(const Eigen::MatrixXd& signal, int depth) {
    const int n = static_cast<int>(signal.rows());
    const int N = static_cast<int>(signal.cols());
    if (depth < 1 || depth > N) throw std::invalid_argument("hankel: need 1 <= depth <= length");
    Eigen::MatrixXd H(n * depth, N - depth + 1);
    for (int j = 0; j <= N - depth; ++j)
        for (int i = 0; i < depth; ++i) H.block(i * n, j, n, 1) = signal.col(j + i);
    return H;
}

bool is_persistently_exciting(const Eigen::MatrixXd& signal, int order, std::string* why) {
    const int n = static_cast<int>(signal.rows());
    const int N = static_cast<int>(signal.cols());
    if (order < 1) throw std::invalid_argument("is_persistently_exciting: order must be >= 1");
    if (order > N) {
        if (why) *why = "sequence shorter than the requested order";
        return false;
    }
    // Rank n*order needs at least n*order Hankel columns.
    if (N - order + 1 < n * order) {
        if (why)
            *why = "sequence too short: need length >= " + std::to_string(n * order + order - 1) +
                   " for order " + std::to_string(order);
        return false;
    }
    const bool ok = numerical_rank(hankel(signal, order)) == n * order;
    if (!ok && why) *why = "Hankel matrix rank deficient";
    return ok;
}

bool check_rank_condition(const TrajectoryData& data) {
    Eigen::MatrixXd phi0(data.nx() + data.nu(), data.samples());
    phi0 << data.X0, data.U0;
    return numerical_rank(phi0) == data.nx() + data.nu();
}

int minimum_excitation_length(int nx, int nu) { return nx + nu * (nx + 1); }

}  // namespace ddlqg
