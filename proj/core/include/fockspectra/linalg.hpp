#pragma once

#include <Eigen/Dense>

namespace fockspectra {

struct Inertia {
    int positive = 0;
    int negative = 0;
    int zero = 0;
};

/// Inertia of a dense symmetric matrix through a Bunch-Kaufman factorization.
/// Falls back to a full symmetric eigendecomposition when the factorization
/// reports a singular block.
Inertia matrix_inertia(const Eigen::MatrixXd& A);

/// Eigenvalue count above a threshold. `threshold_gap` estimates the distance
/// from mu to the nearest eigenvalue; `ambiguous` is set when that distance is
/// below 1e-9, in which case the integer count should not be trusted blindly.
struct EigenCount {
    int count = 0;
    double threshold_gap = 0.0;
    bool ambiguous = false;
};

/// Number of eigenvalues of the symmetric matrix K strictly greater than mu,
/// via the inertia of K - mu I.
EigenCount count_above(const Eigen::MatrixXd& K, double mu);

/// Number of eigenvalues strictly below mu.
EigenCount count_below(const Eigen::MatrixXd& K, double mu);

/// Same count through a full eigendecomposition; used as an oracle for the
/// inertia path in tests.
EigenCount count_above_eigensolver(const Eigen::MatrixXd& K, double mu);

} // namespace fockspectra
