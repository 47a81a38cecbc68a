#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace ddlqg {

/// Ground-truth discrete-time plant
///   x(t+1) = A x(t) + B u(t) + w(t)
///   y(t)   = C x(t) + v(t)
/// used only for data generation and oracle checks.
struct LtiSystem {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd C;

    LtiSystem() = default;
    LtiSystem(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c);

    int nx() const { return static_cast<int>(A.rows()); }
    int nu() const { return static_cast<int>(B.cols()); }
    int ny() const { return static_cast<int>(C.rows()); }

    bool is_controllable() const;
    bool is_observable() const;
};

enum class NoiseKind { Zero, UniformBounded, Gaussian };

/// Specification of the process/measurement noise acting on an experiment.
/// UniformBounded draws each component i.i.d. from [-wbar, wbar] (resp.
/// [-vbar, vbar]); Gaussian draws from N(0, Nx) / N(0, Ny). The optional
/// Ew maps a lower-dimensional uniform disturbance into the state equation,
/// w(t) = Ew * eta(t) with eta in [-wbar, wbar]^rank.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::Zero;
    double wbar = 0.0;
    double vbar = 0.0;
    Eigen::MatrixXd Nx;
    Eigen::MatrixXd Ny;
    std::uint64_t seed = 0;
    std::optional<Eigen::MatrixXd> Ew;

    static NoiseSpec zero();
    static NoiseSpec uniform(double wbar, double vbar, std::uint64_t seed);
    static NoiseSpec gaussian(Eigen::MatrixXd Nx, Eigen::MatrixXd Ny, std::uint64_t seed);
};

/// Offline record of a T-sample open-loop experiment, in matrix form:
/// X0 = [x(0) .. x(T-1)], X1 = [x(1) .. x(T)], U0, Y0, and (when generated
/// in simulation) the true noise realizations W0, V0.
struct TrajectoryData {
    Eigen::MatrixXd X0;
    Eigen::MatrixXd X1;
    Eigen::MatrixXd U0;
    Eigen::MatrixXd Y0;
    std::optional<Eigen::MatrixXd> W0;
    std::optional<Eigen::MatrixXd> V0;

    int samples() const { return static_cast<int>(X0.cols()); }
    int nx() const { return static_cast<int>(X0.rows()); }
    int nu() const { return static_cast<int>(U0.rows()); }
    int ny() const { return static_cast<int>(Y0.rows()); }

    bool has_ground_truth() const { return W0.has_value() && V0.has_value(); }
};

/// Draws the noise sequences (W is nx x T, V is ny x T) for the given spec.
/// Deterministic per seed.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> generate_noise(const NoiseSpec& spec, int nx, int ny,
                                                           int horizon);

/// Runs the plant open loop for T = inputs.cols() steps from x0 and records
/// the data matrices together with the realized noise.
TrajectoryData simulate_openloop(const LtiSystem& sys, const Eigen::VectorXd& x0,
                                 const Eigen::MatrixXd& inputs, const NoiseSpec& noise);

/// Block Hankel matrix of depth L: column j stacks signal columns j..j+L-1.
/// signal is n x N; the result is (n*L) x (N-L+1).
Eigen::MatrixXd hankel(const Eigen::MatrixXd& signal, int depth);

/// True iff rank(H_L(signal)) == n*L. When the sequence is too short for
/// that rank to be attainable the answer is false and *why (if given)
/// explains the failed length requirement.
bool is_persistently_exciting(const Eigen::MatrixXd& signal, int order,
                              std::string* why = nullptr);

/// rank([X0; U0]) == nx + nu, the data-based representation condition.
bool check_rank_condition(const TrajectoryData& data);

/// Minimum sample count for a persistently exciting experiment of order
/// nx + 1 to exist: T >= nx + nu*(nx + 1).
int minimum_excitation_length(int nx, int nu);

}  // namespace ddlqg
