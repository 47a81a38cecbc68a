#include "ddlqg/benchmarks.hpp"

namespace ddlqg {

LtiSystem batch_reactor() {
    Eigen::MatrixXd A(4, 4), B(4, 2), C(2, 4);
    A << 1.178, 0.001, 0.511, -0.403,
        -0.051, 0.661, -0.011, 0.061,
        0.076, 0.335, 0.560, 0.382,
        0.000, 0.335, 0.089, 0.849;
    B << 0.004, -0.087,
        0.467, 0.001,
        0.213, -0.235,
        0.213, -0.016;
    C << 1, 0, 1, -1,
        0, 1, 0, 0;
    return LtiSystem(A, B, C);
}

LtiSystem rotating_target() {
    Eigen::MatrixXd A(2, 2), B(2, 1), C(4, 2);
    A << 0.9455, -0.2426,
        0.2486, 0.9455;
    B << 0.1,
        0.0;
    C << 1, 0.4,
        0.9, -1.2,
        -0.8, 0.2,
        0, 0.7;
    return LtiSystem(A, B, C);
}

}  // namespace ddlqg
