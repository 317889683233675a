#include "fockspectra/friedrichs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fockspectra/parallel.hpp"

namespace fockspectra {

namespace {

// Quadrature tables for sweeping delta over many (p, z) pairs on one grid.
// Half-angle factors per node turn each w(p, t) evaluation into a handful of
// multiplies instead of three sine calls.
struct DeltaEvaluator {
    const ModelParams m;
    const Grid& grid;
    double l1, l2;
    std::vector<double> v2w;    // weight * v^2 at each node
    std::vector<double> eps_t;  // dispersion at each node
    std::vector<double> st0, st1, st2, ct0, ct1, ct2;

    DeltaEvaluator(const ModelParams& mm, const Grid& g)
        : m(mm), grid(g), l1(mm.hop1()), l2(mm.hop2()) {
        const std::size_t n = g.size();
        v2w.resize(n);
        eps_t.resize(n);
        st0.resize(n); st1.resize(n); st2.resize(n);
        ct0.resize(n); ct1.resize(n); ct2.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const TorusPoint& t = g.nodes[i];
            const double v = v_eval(m, t);
            v2w[i] = g.weights[i] * v * v;
            eps_t[i] = eps(t);
            st0[i] = std::sin(0.5 * t[0]); ct0[i] = std::cos(0.5 * t[0]);
            st1[i] = std::sin(0.5 * t[1]); ct1[i] = std::cos(0.5 * t[1]);
            st2[i] = std::sin(0.5 * t[2]); ct2[i] = std::cos(0.5 * t[2]);
        }
    }

    // integral of v^2(t) / (w(p, t) - z), compensated summation: downstream
    // Richardson steps on near-threshold differences need the sum accurate to
    // a few ulps, not n ulps.
    double Q(const TorusPoint& p, double z) const {
        const double sp0 = std::sin(0.5 * p[0]), cp0 = std::cos(0.5 * p[0]);
        const double sp1 = std::sin(0.5 * p[1]), cp1 = std::cos(0.5 * p[1]);
        const double sp2 = std::sin(0.5 * p[2]), cp2 = std::cos(0.5 * p[2]);
        const double base = l1 * eps(p) - z;
        double acc = 0.0, comp = 0.0;
        const std::size_t n = grid.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double a0 = sp0 * ct0[i] + cp0 * st0[i];
            const double a1 = sp1 * ct1[i] + cp1 * st1[i];
            const double a2 = sp2 * ct2[i] + cp2 * st2[i];
            const double wpt = base + 2.0 * l2 * (a0 * a0 + a1 * a1 + a2 * a2) + l1 * eps_t[i];
            const double term = v2w[i] / wpt - comp;
            const double next = acc + term;
            comp = (next - acc) - term;
            acc = next;
        }
        return acc;
    }

    double delta_at(const TorusPoint& p, double z) const {
        return u_eval(m, p) - z - 0.5 * Q(p, z);
    }
};

void check_delta_value(double val, const TorusPoint& p, double z) {
    if (!std::isfinite(val)) {
        throw NumericalError("delta: non-finite quadrature at p = (" +
                             std::to_string(p[0]) + ", " + std::to_string(p[1]) + ", " +
                             std::to_string(p[2]) + "), z = " + std::to_string(z));
    }
}

void check_delta_preconditions(const ModelParams& m, const TorusPoint& p, double z,
                               const Grid& grid) {
    const double mw = m_w_closed(m, p);
    if (z > mw)
        throw std::invalid_argument("delta: z = " + std::to_string(z) +
                                    " lies above min_q w(p, q) = " + std::to_string(mw));
    if (z == mw && grid.grading_gamma == 1 && v_eval(m, TorusPoint{}) != 0.0)
        throw PreconditionViolation(
            "delta: boundary value z = m_w(p) with v(0) != 0 requires a graded grid");
}

// z floor below every possible determinant root: the determinant behaves like
// -z there, while |u| and w are bounded by the hopping weights.
double bracket_floor(const ModelParams& m) {
    const double umax = std::max(std::abs(m.c), std::abs(m.c + 6.0));
    const double wmax = 6.0 * (2.0 * m.hop1() + m.hop2());
    return -10.0 * (umax + wmax);
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys,
                    double* rms_residual = nullptr) {
    const std::size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    const double icept = (sy - slope * sx) / n;
    if (rms_residual) {
        double ss = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = std::log(ys[i]) - (slope * std::log(xs[i]) + icept);
            ss += r * r;
        }
        *rms_residual = std::sqrt(ss / n);
    }
    return slope;
}

// Derivative-free coordinate descent used to polish node-level extrema.
// objective(p) may return +inf to reject a point.
template <class Obj>
TorusPoint refine_point(const Obj& objective, TorusPoint p, double step,
                        double min_step = 1e-9) {
    double val = objective(p);
    while (step > min_step) {
        bool improved = false;
        for (int ax = 0; ax < 3; ++ax) {
            for (double sgn : {1.0, -1.0}) {
                TorusPoint q = p;
                q[ax] += sgn * step;
                const double v = objective(q);
                if (v < val) {
                    val = v;
                    p = q;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return p;
}

std::optional<double> bound_state_impl(const DeltaEvaluator& ev, const TorusPoint& p,
                                       double root_tol) {
    // Search below min(0, m_w(p)): the negative spectrum. The window between
    // zero and the fiber band bottom belongs to the nonnegative part of the
    // pair band and is not a bound state of the full system.
    const double mw = m_w_closed(ev.m, p);
    const double z_hi = std::min(0.0, mw) - 1e-12;
    double f_hi = ev.delta_at(p, z_hi);
    if (!(f_hi < 0.0)) return std::nullopt;

    double z_lo = bracket_floor(ev.m);
    double f_lo = ev.delta_at(p, z_lo);
    if (!(f_lo > 0.0))
        throw NumericalError("bound_state: determinant not positive at the z floor");

    double lo = z_lo, hi = z_hi;
    double best_z = lo, best_f = std::abs(f_lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;  // interval collapsed to one ulp
        const double fm = ev.delta_at(p, mid);
        if (std::abs(fm) < best_f) { best_f = std::abs(fm); best_z = mid; }
        if (best_f < root_tol) return best_z;
        if (fm > 0.0) lo = mid; else hi = mid;
    }
    if (best_f < root_tol) return best_z;
    throw NumericalError("bound_state: bisection failed to reach tolerance");
}

} // namespace

double lambda_fn(const ModelParams& m, const TorusPoint& p, const Grid& grid) {
    m.validate();
    DeltaEvaluator ev(m, grid);
    const double val = ev.Q(p, 0.0);
    if (!std::isfinite(val)) {
        // Re-run through the checked quadrature to name the offending node.
        integrate(
            [&](const TorusPoint& t) {
                const double v = v_eval(m, t);
                return v * v / w_eval(m, p, t);
            },
            grid);
        throw NumericalError("lambda_fn: non-finite quadrature");
    }
    return val;
}

double delta(const ModelParams& m, const TorusPoint& p, double z, const Grid& grid) {
    m.validate();
    check_delta_preconditions(m, p, z, grid);
    DeltaEvaluator ev(m, grid);
    const double val = ev.delta_at(p, z);
    check_delta_value(val, p, z);
    return val;
}

std::vector<double> delta_at_all_nodes(const ModelParams& m, double z, const Grid& grid) {
    m.validate();
    if (!(z < 0.0))
        throw std::invalid_argument("delta_at_all_nodes: z must be negative");
    DeltaEvaluator ev(m, grid);
    std::vector<double> vals(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        vals[i] = ev.delta_at(grid.nodes[i], z);
    });
    for (std::size_t i = 0; i < vals.size(); ++i)
        check_delta_value(vals[i], grid.nodes[i], z);
    return vals;
}

std::optional<double> bound_state(const ModelParams& m, const TorusPoint& p,
                                  const Grid& grid, double root_tol) {
    m.validate();
    DeltaEvaluator ev(m, grid);
    return bound_state_impl(ev, p, root_tol);
}

double tune_coupling(const ModelParams& m, const Grid& grid) {
    m.validate();
    DeltaEvaluator ev(m, grid);
    const double lam0 = ev.Q(TorusPoint{}, 0.0);
    if (!std::isfinite(lam0))
        throw NumericalError("tune_coupling: non-finite Lambda(0)");
    return 0.5 * lam0;
}

double default_classify_tol(const ModelParams& m) {
    return 1e-8 * (1.0 + std::abs(m.c));
}

ClassificationReport classify(const ModelParams& m, const Grid& grid, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("classify: tol must be positive");
    ClassificationReport rep;
    rep.tolerance = tol;
    rep.delta00 = delta(m, TorusPoint{}, 0.0, grid);
    rep.v_at_zero = v_eval(m, TorusPoint{});
    if (std::abs(rep.delta00) <= tol)
        rep.verdict = rep.v_at_zero != 0.0 ? Verdict::resonance : Verdict::zero_eigenvalue;
    else
        rep.verdict = rep.delta00 > 0.0 ? Verdict::subcritical : Verdict::supercritical;
    return rep;
}

DeltaExtrema delta_extrema(const ModelParams& m, const Grid& grid) {
    m.validate();
    DeltaEvaluator ev(m, grid);
    const std::size_t n = grid.size();
    std::vector<double> vals(n);
    parallel_for(n, [&](std::size_t i) { vals[i] = ev.delta_at(grid.nodes[i], 0.0); });

    std::size_t imin = 0, imax = 0;
    DeltaExtrema out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(vals[i]))
            throw NumericalError("delta_extrema: non-finite determinant at a node");
        if (vals[i] < vals[imin]) imin = i;
        if (vals[i] > vals[imax]) imax = i;
        if (vals[i] < 0.0) out.region_d.push_back(i);
    }

    const double step = kTwoPi / grid.n_per_axis;
    auto down = [&](const TorusPoint& p) { return ev.delta_at(p, 0.0); };
    auto up = [&](const TorusPoint& p) { return -ev.delta_at(p, 0.0); };
    out.argmin = refine_point(down, grid.nodes[imin], step);
    out.argmax = refine_point(up, grid.nodes[imax], step);
    out.min_value = ev.delta_at(out.argmin, 0.0);
    out.max_value = ev.delta_at(out.argmax, 0.0);
    return out;
}

SpectralBands essential_spectrum(const ModelParams& m, const Grid& grid) {
    m.validate();
    DeltaEvaluator ev(m, grid);
    const std::size_t n = grid.size();

    std::vector<double> d0(n);
    parallel_for(n, [&](std::size_t i) { d0[i] = ev.delta_at(grid.nodes[i], 0.0); });
    double dmin = d0[0], dmax = d0[0];
    for (double v : d0) { dmin = std::min(dmin, v); dmax = std::max(dmax, v); }

    SpectralBands bands;
    bands.M = global_max_M(m, grid);
    if (dmax < 0.0) bands.case_tag = SpectrumCase::i;
    else if (dmin < 0.0) bands.case_tag = SpectrumCase::ii;
    else bands.case_tag = SpectrumCase::iii;

    if (bands.case_tag != SpectrumCase::iii) {
        constexpr double kAbsent = std::numeric_limits<double>::infinity();
        std::vector<double> zs(n, kAbsent);
        parallel_for(n, [&](std::size_t i) {
            if (d0[i] < 0.0) {
                auto z = bound_state_impl(ev, grid.nodes[i], 1e-10);
                if (z) zs[i] = *z;
            }
        });
        std::size_t imin = 0;
        double zmin = kAbsent, zmax = -kAbsent;
        std::size_t imax = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (zs[i] < zmin) { zmin = zs[i]; imin = i; }
            if (zs[i] != kAbsent && zs[i] > zmax) { zmax = zs[i]; imax = i; }
        }
        if (zmin == kAbsent)
            throw NumericalError("essential_spectrum: negative determinant without a bound state");

        const double step = kTwoPi / grid.n_per_axis;
        auto zval = [&](const TorusPoint& p) {
            auto z = bound_state_impl(ev, p, 1e-10);
            return z ? *z : kAbsent;
        };
        TorusPoint pa = refine_point(zval, grid.nodes[imin], step, 1e-6);
        bands.a = zval(pa);
        if (bands.case_tag == SpectrumCase::i) {
            auto zneg = [&](const TorusPoint& p) {
                auto z = bound_state_impl(ev, p, 1e-10);
                return z ? -*z : kAbsent;
            };
            TorusPoint pb = refine_point(zneg, grid.nodes[imax], step, 1e-6);
            bands.b = zval(pb);
        } else {
            bands.b = 0.0;  // the branch closes onto the band bottom
        }
    } else {
        bands.a = 0.0;
        bands.b = 0.0;
    }

    // Upper-edge hypothesis: delta(p, M) <= 0 at every node. The value sits
    // above the fiber band, so the integrand flips sign; a non-finite hit
    // counts as a violation rather than an error.
    std::vector<char> ok(n, 1);
    parallel_for(n, [&](std::size_t i) {
        const double v = ev.delta_at(grid.nodes[i], bands.M);
        ok[i] = (std::isfinite(v) && v <= 0.0) ? 1 : 0;
    });
    bands.hypothesis_ok = std::all_of(ok.begin(), ok.end(), [](char c) { return c == 1; });
    return bands;
}

SqrtSingularityFit sqrt_coefficient_measure(const ModelParams& m, const Grid& grid) {
    m.validate();
    DeltaEvaluator ev(m, grid);
    const double d00 = ev.delta_at(TorusPoint{}, 0.0);
    if (!(std::abs(d00) < 1e-8))
        throw PreconditionViolation("sqrt_coefficient_measure: model is not tuned, |delta(0,0)| = " +
                                    std::to_string(std::abs(d00)));

    std::vector<double> zetas, gs;
    for (int k = 0; k <= 9; ++k) {
        const double zeta = 0.1 * std::pow(2.0, -k);
        const double g = ev.delta_at(TorusPoint{}, -zeta * zeta) - d00;
        if (!(g > 0.0))
            throw NumericalError("sqrt_coefficient_measure: non-positive increment at zeta = " +
                                 std::to_string(zeta));
        zetas.push_back(zeta);
        gs.push_back(g);
    }

    SqrtSingularityFit fit;
    double rms = 0.0;
    fit.exponent = loglog_slope(zetas, gs, &rms);
    if (rms > 0.25)
        throw NumericalError("sqrt_coefficient_measure: power-law fit residual too large");

    // Dyadic Richardson step on g/zeta removes the next-order term exactly,
    // so the linear coefficient survives even when it is zero.
    const std::size_t k = zetas.size() - 1;
    fit.coefficient = 2.0 * gs[k] / zetas[k] - gs[k - 1] / zetas[k - 1];

    const AssumptionParams ap = assumption_params(m);
    const double v0 = v_eval(m, TorusPoint{});
    const double det_w = ap.W[0][0] * (ap.W[1][1] * ap.W[2][2] - ap.W[1][2] * ap.W[2][1]) -
                         ap.W[0][1] * (ap.W[1][0] * ap.W[2][2] - ap.W[1][2] * ap.W[2][0]) +
                         ap.W[0][2] * (ap.W[1][0] * ap.W[2][1] - ap.W[1][1] * ap.W[2][0]);
    const double pi2 = M_PI * M_PI;
    const double sqdet = std::sqrt(det_w);
    fit.expansion_prediction = 2.0 * pi2 * v0 * v0 * std::sqrt(ap.L1 * ap.L1 - ap.L2 * ap.L2) /
                   (ap.L1 * ap.L1 * sqdet);
    fit.scaling_prediction = 4.0 * std::sqrt(2.0) * pi2 * v0 * v0 / (std::pow(ap.L1, 1.5) * sqdet);
    fit.gaussian_direct = 2.0 * std::sqrt(2.0) * pi2 * v0 * v0 / (std::pow(ap.L1, 1.5) * sqdet);
    return fit;
}

double delta_exponent_fit(const ModelParams& m, const Grid& grid) {
    m.validate();
    DeltaEvaluator ev(m, grid);
    std::vector<double> rhos, ds;
    for (int k = 0; k <= 6; ++k) {
        const double rho = 0.1 * std::pow(2.0, -k);
        const double d = ev.delta_at(TorusPoint{rho, 0.0, 0.0}, 0.0);
        if (!(d > 0.0))
            throw NumericalError("delta_exponent_fit: non-positive determinant at |p| = " +
                                 std::to_string(rho));
        rhos.push_back(rho);
        ds.push_back(d);
    }
    return loglog_slope(rhos, ds);
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::resonance: return "resonance";
        case Verdict::zero_eigenvalue: return "zero_eigenvalue";
        case Verdict::subcritical: return "subcritical";
        case Verdict::supercritical: return "supercritical";
    }
    return "?";
}

std::string to_string(SpectrumCase c) {
    switch (c) {
        case SpectrumCase::i: return "i";
        case SpectrumCase::ii: return "ii";
        case SpectrumCase::iii: return "iii";
    }
    return "?";
}

} // namespace fockspectra
