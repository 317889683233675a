#include "fockspectra/model.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fockspectra {

void ModelParams::validate() const {
    if (!std::isfinite(c) || !std::isfinite(u0))
        throw InvalidModel("model: c and u0 must be finite");
    if (preset == Preset::remark27) {
        if (!(l1 > 0.0) || !(l2 > 0.0))
            throw InvalidModel("remark27: hopping weights must be positive");
        if (l1 == l2)
            throw InvalidModel("remark27: hopping weights must differ (l1 != l2)");
    } else {
        if (v_choice != ChannelFn::epsilon)
            throw InvalidModel("remark24: channel function is pinned to the dispersion");
    }
}

ModelParams ModelParams::remark24(double c, double u0) {
    ModelParams m;
    m.preset = Preset::remark24;
    m.c = c;
    m.l1 = m.l2 = 1.0;
    m.v_choice = ChannelFn::epsilon;
    m.u0 = u0;
    m.validate();
    return m;
}

ModelParams ModelParams::remark27(double l1, double l2, ChannelFn v, double c, double u0) {
    ModelParams m;
    m.preset = Preset::remark27;
    m.c = c;
    m.l1 = l1;
    m.l2 = l2;
    m.v_choice = v;
    m.u0 = u0;
    m.validate();
    return m;
}

double eps(const TorusPoint& p) {
    const double s0 = std::sin(0.5 * p[0]);
    const double s1 = std::sin(0.5 * p[1]);
    const double s2 = std::sin(0.5 * p[2]);
    return 2.0 * (s0 * s0 + s1 * s1 + s2 * s2);
}

double u_eval(const ModelParams& m, const TorusPoint& p) { return eps(p) + m.c; }

double v_eval(const ModelParams& m, const TorusPoint& p) {
    switch (m.v_choice) {
        case ChannelFn::epsilon: return eps(p);
        case ChannelFn::constant_one: return 1.0;
        case ChannelFn::zero_test: return 0.0;
    }
    return 0.0;
}

double w_eval(const ModelParams& m, const TorusPoint& p, const TorusPoint& q) {
    const TorusPoint pq{p[0] + q[0], p[1] + q[1], p[2] + q[2]};
    return m.hop1() * eps(p) + m.hop2() * eps(pq) + m.hop1() * eps(q);
}

namespace {

// Per-axis profile of q -> w(p, q):
//   phi(a, q) = l2 (1 - cos(a + q)) + l1 (1 - cos q),
// so that w(p, q) = l1 eps(p) + sum_i phi(p_i, q_i).
double axis_phi(double l1, double l2, double a, double q) {
    const double sa = std::sin(0.5 * (a + q));
    const double sq = std::sin(0.5 * q);
    return 2.0 * (l2 * sa * sa + l1 * sq * sq);
}

double axis_phi_d1(double l1, double l2, double a, double q) {
    return l2 * std::sin(a + q) + l1 * std::sin(q);
}

double axis_phi_d2(double l1, double l2, double a, double q) {
    return l2 * std::cos(a + q) + l1 * std::cos(q);
}

// Stable per-axis gap (l1 + l2) - r(a) with r(a) = |l2 e^{ia} + l1|.
double axis_min_gap(double l1, double l2, double a) {
    const double s = std::sin(0.5 * a);
    const double r = std::hypot(l2 * std::cos(a) + l1, l2 * std::sin(a));
    return 4.0 * l1 * l2 * s * s / ((l1 + l2) + r);
}

} // namespace

double m_w_closed(const ModelParams& m, const TorusPoint& p) {
    const double l1 = m.hop1(), l2 = m.hop2();
    double acc = l1 * eps(p);
    for (int i = 0; i < 3; ++i) acc += axis_min_gap(l1, l2, p[i]);
    return acc;
}

TorusPoint q0_closed(const ModelParams& m, const TorusPoint& p) {
    const double l1 = m.hop1(), l2 = m.hop2();
    std::array<double, 3> q{};
    for (int i = 0; i < 3; ++i)
        q[i] = std::atan2(-l2 * std::sin(p[i]), l2 * std::cos(p[i]) + l1);
    return wrap(q);
}

MinSearchResult m_w_numeric(const ModelParams& m, const TorusPoint& p) {
    const double l1 = m.hop1(), l2 = m.hop2();
    MinSearchResult out;
    out.value = l1 * eps(p);
    std::array<double, 3> argmin{};

    for (int axis = 0; axis < 3; ++axis) {
        const double a = p[axis];
        // Coarse scan.
        const int nscan = 64;
        double best_q = 0.0, best_v = axis_phi(l1, l2, a, 0.0);
        for (int k = 0; k < nscan; ++k) {
            const double q = -M_PI + (k + 0.5) * (kTwoPi / nscan);
            const double v = axis_phi(l1, l2, a, q);
            if (v < best_v) { best_v = v; best_q = q; }
        }
        // Safeguarded Newton on the derivative.
        double q = best_q;
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            const double d1 = axis_phi_d1(l1, l2, a, q);
            if (std::abs(d1) < 1e-12) { converged = true; break; }
            const double d2 = axis_phi_d2(l1, l2, a, q);
            double step;
            if (d2 > 1e-14) {
                step = -d1 / d2;
                if (std::abs(step) > 0.5) step = (step > 0 ? 0.5 : -0.5);
            } else {
                step = (d1 > 0 ? -0.1 : 0.1);
            }
            q += step;
        }
        if (!converged) {
            // Flat axis (the profile does not depend on q) still qualifies.
            if (std::abs(axis_phi_d1(l1, l2, a, q)) > 1e-10)
                throw NumericalError("m_w_numeric: axis search failed to converge");
        }
        argmin[axis] = q;
        out.value += axis_phi(l1, l2, a, q);
    }
    out.argmin = wrap(argmin);
    return out;
}

namespace {

// Central finite-difference Hessian blocks of w at (0, 0); step chosen so the
// truncation error stays below 1e-8 for hopping weights of order ten.
void fd_hessian_blocks(const ModelParams& m, double h,
                       std::array<std::array<double, 3>, 3>& bpp,
                       std::array<std::array<double, 3>, 3>& bpq) {
    auto w = [&](const std::array<double, 3>& p, const std::array<double, 3>& q) {
        return w_eval(m, TorusPoint{p[0], p[1], p[2]}, TorusPoint{q[0], q[1], q[2]});
    };
    const std::array<double, 3> zero{};
    const double w00 = w(zero, zero);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i == j) {
                std::array<double, 3> e{};
                e[i] = h;
                std::array<double, 3> en{};
                en[i] = -h;
                bpp[i][i] = (w(e, zero) - 2.0 * w00 + w(en, zero)) / (h * h);
            } else {
                std::array<double, 3> pp{}, pm{}, mp{}, mm{};
                pp[i] = h; pp[j] = h;
                pm[i] = h; pm[j] = -h;
                mp[i] = -h; mp[j] = h;
                mm[i] = -h; mm[j] = -h;
                bpp[i][j] = (w(pp, zero) - w(pm, zero) - w(mp, zero) + w(mm, zero)) /
                            (4.0 * h * h);
            }
            std::array<double, 3> ei{}, ej{};
            ei[i] = h;
            ej[j] = h;
            std::array<double, 3> ein{}, ejn{};
            ein[i] = -h;
            ejn[j] = -h;
            bpq[i][j] = (w(ei, ej) - w(ei, ejn) - w(ein, ej) + w(ein, ejn)) / (4.0 * h * h);
        }
    }
}

} // namespace

AssumptionParams assumption_params(const ModelParams& m) {
    m.validate();
    const double l1 = m.hop1(), l2 = m.hop2();
    AssumptionParams ap;
    ap.L1 = l1 + l2;
    ap.L2 = l2;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) ap.W[i][j] = (i == j) ? 1.0 : 0.0;

    if (!(std::abs(ap.L2) < ap.L1))
        throw InvalidModel("assumption_params: degenerate Hessian, |L2| >= L1");

    std::array<std::array<double, 3>, 3> bpp{}, bpq{};
    fd_hessian_blocks(m, 1e-4, bpp, bpq);
    double res = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            res = std::max(res, std::abs(bpp[i][j] - ap.L1 * ap.W[i][j]));
            res = std::max(res, std::abs(bpq[i][j] - ap.L2 * ap.W[i][j]));
        }
    ap.fd_residual = res;

    ap.s = ap.L2 / ap.L1;
    ap.l = std::sqrt(ap.L1 * ap.L1 / (ap.L1 * ap.L1 - ap.L2 * ap.L2));
    ap.n_coef = (ap.L1 * ap.L1 - ap.L2 * ap.L2) / ap.L1;
    return ap;
}

double global_max_M(const ModelParams& m, const Grid& grid) {
    const double l1 = m.hop1(), l2 = m.hop2();
    // w is additive across axes; maximize the per-axis pair profile
    //   psi(a, b) = l1 (1 - cos a) + l2 (1 - cos(a + b)) + l1 (1 - cos b).
    auto psi = [&](double a, double b) {
        const double sa = std::sin(0.5 * a), sb = std::sin(0.5 * b), sab = std::sin(0.5 * (a + b));
        return 2.0 * (l1 * sa * sa + l2 * sab * sab + l1 * sb * sb);
    };

    std::vector<double> cand(grid.axis_nodes);
    for (int k = 0; k < 64; ++k) cand.push_back(-M_PI + (k + 0.5) * (kTwoPi / 64));

    double best = 0.0, ba = 0.0, bb = 0.0;
    for (double a : cand)
        for (double b : cand) {
            const double v = psi(a, b);
            if (v > best) { best = v; ba = a; bb = b; }
        }
    // Shrinking-box refinement; derivative-free so degenerate ridges are fine.
    double half = kTwoPi / 64;
    for (int iter = 0; iter < 60 && half > 1e-13; ++iter) {
        double na = ba, nb = bb, nv = best;
        for (int i = -4; i <= 4; ++i)
            for (int j = -4; j <= 4; ++j) {
                const double a = ba + i * half / 4, b = bb + j * half / 4;
                const double v = psi(a, b);
                if (v > nv) { nv = v; na = a; nb = b; }
            }
        ba = na; bb = nb; best = nv;
        half *= 0.6;
    }
    return 3.0 * best;
}

std::string to_string(Preset p) {
    return p == Preset::remark24 ? "remark24" : "remark27";
}

std::string to_string(ChannelFn v) {
    switch (v) {
        case ChannelFn::epsilon: return "epsilon";
        case ChannelFn::constant_one: return "constant_one";
        case ChannelFn::zero_test: return "zero_test";
    }
    return "?";
}

} // namespace fockspectra
