#include "fockspectra/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <lapacke.h>

#include "fockspectra/errors.hpp"

namespace fockspectra {

namespace {

struct FactorResult {
    Inertia inertia;
    bool singular = false;          // an exactly singular block was hit
    Eigen::MatrixXd factored;       // dsytrf output, kept for solves
    std::vector<lapack_int> ipiv;
};

FactorResult factor_inertia(const Eigen::MatrixXd& A) {
    const lapack_int n = static_cast<lapack_int>(A.rows());
    FactorResult fr;
    fr.factored = A;
    fr.ipiv.resize(static_cast<std::size_t>(n));
    const lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, fr.factored.data(),
                                           n, fr.ipiv.data());
    if (info < 0) throw NumericalError("dsytrf: illegal argument");
    fr.singular = info > 0;

    const auto& F = fr.factored;
    lapack_int k = 0;
    while (k < n) {
        if (fr.ipiv[static_cast<std::size_t>(k)] > 0) {
            const double d = F(k, k);
            if (d > 0.0) ++fr.inertia.positive;
            else if (d < 0.0) ++fr.inertia.negative;
            else ++fr.inertia.zero;
            ++k;
        } else {
            const double a = F(k, k), b = F(k + 1, k), c = F(k + 1, k + 1);
            const double tr = a + c;
            const double disc = std::sqrt((a - c) * (a - c) + 4.0 * b * b);
            for (double lam : {0.5 * (tr + disc), 0.5 * (tr - disc)}) {
                if (lam > 0.0) ++fr.inertia.positive;
                else if (lam < 0.0) ++fr.inertia.negative;
                else ++fr.inertia.zero;
            }
            k += 2;
        }
    }
    return fr;
}

// Distance from 0 to the nearest eigenvalue of the factored matrix, estimated
// by a few inverse-power iterations on a fixed deterministic start vector.
double smallest_eigen_gap(const FactorResult& fr) {
    if (fr.singular) return 0.0;
    const lapack_int n = static_cast<lapack_int>(fr.factored.rows());
    Eigen::VectorXd v(n);
    // Fixed LCG so the estimate is reproducible.
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    for (lapack_int i = 0; i < n; ++i) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        v[i] = static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
    }
    v.normalize();
    double gap = 0.0;
    for (int it = 0; it < 4; ++it) {
        Eigen::VectorXd x = v;
        const lapack_int info =
            LAPACKE_dsytrs(LAPACK_COL_MAJOR, 'L', n, 1, fr.factored.data(), n,
                           fr.ipiv.data(), x.data(), n);
        if (info != 0) return 0.0;
        const double norm = x.norm();
        if (!std::isfinite(norm) || norm == 0.0) return 0.0;
        gap = 1.0 / norm;
        v = x / norm;
    }
    return gap;
}

Inertia inertia_by_eigensolver(const Eigen::MatrixXd& A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalError("symmetric eigendecomposition failed");
    const auto& ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    const double tol = static_cast<double>(A.rows()) * 1e-16 * scale;
    Inertia in;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] > tol) ++in.positive;
        else if (ev[i] < -tol) ++in.negative;
        else ++in.zero;
    }
    return in;
}

EigenCount count_with(const Eigen::MatrixXd& K, double mu, bool above) {
    if (!std::isfinite(mu)) throw std::invalid_argument("count: mu must be finite");
    if (K.rows() != K.cols()) throw std::invalid_argument("count: matrix must be square");
    Eigen::MatrixXd A = K;
    A.diagonal().array() -= mu;
    EigenCount out;
    FactorResult fr = factor_inertia(A);
    if (fr.singular) {
        // Exact zero pivot: fall back to the dense eigensolver.
        Inertia in = inertia_by_eigensolver(A);
        out.count = above ? in.positive : in.negative;
        out.threshold_gap = 0.0;
        out.ambiguous = true;
        return out;
    }
    out.count = above ? fr.inertia.positive : fr.inertia.negative;
    out.threshold_gap = smallest_eigen_gap(fr);
    out.ambiguous = out.threshold_gap < 1e-9;
    return out;
}

} // namespace

Inertia matrix_inertia(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("matrix_inertia: matrix must be square");
    FactorResult fr = factor_inertia(A);
    if (fr.singular) return inertia_by_eigensolver(A);
    return fr.inertia;
}

EigenCount count_above(const Eigen::MatrixXd& K, double mu) { return count_with(K, mu, true); }

EigenCount count_below(const Eigen::MatrixXd& K, double mu) { return count_with(K, mu, false); }

EigenCount count_above_eigensolver(const Eigen::MatrixXd& K, double mu) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalError("symmetric eigendecomposition failed");
    EigenCount out;
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()[i];
        if (lam > mu) ++out.count;
        gap = std::min(gap, std::abs(lam - mu));
    }
    out.threshold_gap = gap;
    out.ambiguous = gap < 1e-9;
    return out;
}

} // namespace fockspectra
