#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fockspectra/model.hpp"
#include "fockspectra/torus.hpp"

namespace fockspectra {

enum class Verdict { resonance, zero_eigenvalue, subcritical, supercritical };

/// Criticality classification of the fiber at total quasi-momentum 0.
struct ClassificationReport {
    double delta00 = 0.0;    // determinant value at (p, z) = (0, 0)
    double v_at_zero = 0.0;  // channel function at the origin
    Verdict verdict = Verdict::subcritical;
    double tolerance = 0.0;  // zero test used for |delta00|
};

enum class SpectrumCase { i, ii, iii };

/// Band structure of the essential spectrum: a two-particle branch [a, b]
/// glued to the pair band [0, M]. Case i: [a, b] u [0, M] with b < 0;
/// case ii: [a, M] with a < 0; case iii: [0, M] alone.
struct SpectralBands {
    SpectrumCase case_tag = SpectrumCase::iii;
    double a = 0.0;
    double b = 0.0;
    double M = 0.0;
    bool hypothesis_ok = true;  // whether delta(p, M) <= 0 held at every node
};

struct DeltaExtrema {
    double min_value = 0.0;
    double max_value = 0.0;
    TorusPoint argmin;
    TorusPoint argmax;
    std::vector<std::size_t> region_d;  // grid node indices where delta(p, 0) < 0
};

/// Least-squares diagnostics of the threshold singularity of the determinant
/// in z at p = 0, together with three closed-form coefficient predictions
/// that genuinely disagree with each other. The measured coefficient is the
/// authority; the predictions are reported for comparison, never asserted.
struct SqrtSingularityFit {
    double exponent = 0.0;     // growth exponent of delta(0,-zeta^2)-delta(0,0) in zeta
    double coefficient = 0.0;  // linear-in-zeta coefficient, dyadic Richardson estimate
    // 2 pi^2 v(0)^2 sqrt(L1^2-L2^2) / (L1^2 sqrt(det W)), from the threshold
    // expansion of the determinant.
    double expansion_prediction = 0.0;
    // 4 sqrt(2) pi^2 v(0)^2 / (L1^{3/2} sqrt(det W)), from the scaling form of
    // the determinant near the origin.
    double scaling_prediction = 0.0;
    // 2^{3/2} pi^2 v(0)^2 / (L1^{3/2} sqrt(det W)), from integrating the
    // Gaussian approximation of the pair dispersion directly.
    double gaussian_direct = 0.0;
};

/// Lambda(p) = integral of v^2(t) / w(p, t) over the torus.
double lambda_fn(const ModelParams& m, const TorusPoint& p, const Grid& grid);

/// Fiber determinant delta(p, z) = u(p) - z - (1/2) integral v^2(t)/(w_p(t)-z).
/// Requires z <= min_q w(p, q); the boundary value z == m_w(p) needs a graded
/// grid when v(0) != 0.
double delta(const ModelParams& m, const TorusPoint& p, double z, const Grid& grid);

/// delta(p, z) at every grid node, sharing one set of quadrature tables.
/// Requires z < 0 so the spectral parameter stays below every fiber band.
std::vector<double> delta_at_all_nodes(const ModelParams& m, double z, const Grid& grid);

/// Unique negative eigenvalue of the fiber at quasi-momentum p, when the
/// determinant changes sign below zero; found by bisection (the determinant
/// is strictly decreasing in z). |delta(p, z)| < root_tol at the returned
/// root; absent when the determinant stays nonnegative.
std::optional<double> bound_state(const ModelParams& m, const TorusPoint& p,
                                  const Grid& grid, double root_tol = 1e-10);

/// Coupling c* that places the determinant zero exactly at (0, 0). The
/// dependence of delta(0, 0) on c is affine, so this is a closed-form solve
/// on the quadrature value: c* = (1/2) Lambda(0).
double tune_coupling(const ModelParams& m, const Grid& grid);

double default_classify_tol(const ModelParams& m);

ClassificationReport classify(const ModelParams& m, const Grid& grid, double tol);
inline ClassificationReport classify(const ModelParams& m, const Grid& grid) {
    return classify(m, grid, default_classify_tol(m));
}

/// Extrema of p -> delta(p, 0) over the grid, refined locally around the
/// extremal nodes, plus the node set where the value is negative.
DeltaExtrema delta_extrema(const ModelParams& m, const Grid& grid);

/// Essential-spectrum bands selected by the sign pattern of delta(., 0).
/// Band endpoints are node sweeps refined around the extremal node.
SpectralBands essential_spectrum(const ModelParams& m, const Grid& grid);

/// Requires a tuned model (|delta(0,0)| < 1e-8). Fits the threshold
/// singularity over the dyadic ladder zeta = 1e-1 * 2^-k, k = 0..9.
SqrtSingularityFit sqrt_coefficient_measure(const ModelParams& m, const Grid& grid);

/// Growth exponent of delta(p, 0) in |p| along a fixed direction, dyadic
/// ladder |p| = 1e-1 * 2^-k, k = 0..6. Requires a tuned model; throws
/// NumericalError if a sample is non-positive.
double delta_exponent_fit(const ModelParams& m, const Grid& grid);

std::string to_string(Verdict v);
std::string to_string(SpectrumCase c);

} // namespace fockspectra
