#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "fockspectra/birman_schwinger.hpp"
#include "fockspectra/model.hpp"

namespace fockspectra {

/// Shape parameters of the spherical threshold kernel. s and l are the
/// Hessian ratios of the pair dispersion (s = L2/L1, l = 1/sqrt(1-s^2)), so
/// they are invariant under joint rescaling of the hopping weights.
struct EfimovParams {
    double s = 0.0;
    double l = 0.0;
    int ell_max = 8;
    double y_max = 10.0;
    int legendre_points = 64;

    void validate() const;

    static EfimovParams from_model(const ModelParams& m);
    static EfimovParams from_ratio(double s);
};

/// Closed interval [first, second] of spectral-parameter values.
using Interval = std::array<double, 2>;

struct EfimovResult {
    double mu = 1.0;
    double u0_coefficient = 0.0;  // U(mu); the asymptotic coefficient when mu = 1
    std::vector<std::vector<Interval>> per_degree_thresholds;
};

/// Degree-ell eigenvalue of the spherical kernel operator at spectral
/// parameter lambda, computed by Gauss-Legendre quadrature of the
/// Funk-Hecke integral 2 pi int_{-1}^{1} K(t; lambda) P_ell(t) dt.
/// Even in lambda.
double s_hat_eigenvalue(const EfimovParams& ep, int ell, double lambda);

/// Closed-form degree-zero symbol l sinh(y arcsin s) / (s y cosh(pi y / 2)),
/// with the analytic limit at y = 0. Cross-validates s_hat_eigenvalue.
double s0_closed_form(const EfimovParams& ep, double y);

/// Eigenvalues of the spherical kernel above mu at parameter lambda, counted
/// with multiplicity 2 ell + 1 per degree. Throws EllMaxTooSmall if the
/// degree cutoff cannot be certified against mu.
int count_sphere(const EfimovParams& ep, double mu, double lambda);

/// U(mu) = (4 pi)^{-1} int n(mu, S(y)) dy, computed per degree by locating
/// the threshold sets {y >= 0 : s_ell(y) > mu} with a scan plus bisection.
/// No monotonicity of the symbol is assumed: crossings are accumulated as
/// intervals, and a half-step verification scan guards against unresolved
/// crossings.
EfimovResult U_of_mu(const EfimovParams& ep, double mu);

/// Degree-ell block of the half-line convolution operator with kernel
/// (2 pi)^{-2} l / (cosh(x - x') + s t), discretized by the midpoint rule on
/// (0, r). Entries depend only on x - x'.
SymmetricKernelMatrix assemble_S_r(const EfimovParams& ep, double r,
                                   int points_per_unit, int ell);

/// n(mu, S_r) summed over degrees with multiplicity 2 ell + 1.
int sr_count(const EfimovParams& ep, double mu, double r, int points_per_unit,
             int ell_max);

/// Least-squares slope of N against |log|z||.
double log_slope_fit(const std::vector<std::pair<double, int>>& samples);

} // namespace fockspectra
