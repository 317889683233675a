#include "fockspectra/efimov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <string>

#include "fockspectra/errors.hpp"
#include "fockspectra/parallel.hpp"

namespace fockspectra {

namespace {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1]: Newton iteration on the Legendre recurrence.
GaussRule compute_gauss_legendre(int n) {
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

const GaussRule& gauss_rule(int n) {
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

double legendre_p(int ell, double t) {
    if (ell == 0) return 1.0;
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= ell; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// sinh(a*theta)/sinh(a*pi) for a >= 0, theta in (0, pi), without overflow.
double sinh_ratio(double a, double theta) {
    if (a == 0.0) return theta / M_PI;
    return std::exp(a * (theta - M_PI)) * (1.0 - std::exp(-2.0 * a * theta)) /
           (1.0 - std::exp(-2.0 * a * M_PI));
}

} // namespace

void EfimovParams::validate() const {
    if (!(s > 0.0 && s < 1.0))
        throw InvalidModel("efimov: s must lie in (0, 1)");
    const double l_ref = 1.0 / std::sqrt(1.0 - s * s);
    if (!(std::abs(l - l_ref) <= 1e-12 * l_ref))
        throw InvalidModel("efimov: l inconsistent with 1/sqrt(1-s^2)");
    if (ell_max < 2) throw InvalidModel("efimov: ell_max must be >= 2");
    if (!(y_max > 0.0)) throw InvalidModel("efimov: y_max must be positive");
    if (!(s0_closed_form(*this, y_max) < 0.5))
        throw InvalidModel("efimov: y_max too small, degree-zero symbol still above 1/2");
    if (legendre_points < 8) throw InvalidModel("efimov: legendre_points must be >= 8");
}

EfimovParams EfimovParams::from_model(const ModelParams& m) {
    const AssumptionParams ap = assumption_params(m);
    EfimovParams ep;
    ep.s = ap.s;
    ep.l = ap.l;
    if (ep.s > 0.8) ep.ell_max = 16;
    ep.validate();
    return ep;
}

EfimovParams EfimovParams::from_ratio(double s) {
    EfimovParams ep;
    ep.s = s;
    ep.l = 1.0 / std::sqrt(1.0 - s * s);
    if (ep.s > 0.8) ep.ell_max = 16;
    ep.validate();
    return ep;
}

double s_hat_eigenvalue(const EfimovParams& ep, int ell, double lambda) {
    if (ell < 0) throw std::invalid_argument("s_hat_eigenvalue: ell must be >= 0");
    if (!std::isfinite(lambda))
        throw std::invalid_argument("s_hat_eigenvalue: lambda must be finite");
    const double a = std::abs(lambda);
    const GaussRule& gr = gauss_rule(ep.legendre_points);
    double acc = 0.0;
    for (int i = 0; i < ep.legendre_points; ++i) {
        const double t = gr.nodes[i];
        const double theta = std::acos(ep.s * t);
        acc += gr.weights[i] * legendre_p(ell, t) * sinh_ratio(a, theta) /
               std::sqrt(1.0 - ep.s * ep.s * t * t);
    }
    return ep.l * acc;
}

double s0_closed_form(const EfimovParams& ep, double y) {
    const double a = std::asin(ep.s);
    const double ay = std::abs(y);
    if (ay == 0.0) return ep.l * a / ep.s;
    // sinh(a y) / cosh(pi y / 2) in exponential form to survive large y.
    const double b = ay * a, c = 0.5 * M_PI * ay;
    const double ratio = std::exp(b - c) * (1.0 - std::exp(-2.0 * b)) /
                         (1.0 + std::exp(-2.0 * c));
    return ep.l * ratio / (ep.s * ay);
}

namespace {

void check_degree_tail(const EfimovParams& ep, double mu) {
    const double tail = s_hat_eigenvalue(ep, ep.ell_max, 0.0);
    if (!(tail < 0.5 * mu))
        throw EllMaxTooSmall("degree cutoff ell_max = " + std::to_string(ep.ell_max) +
                             " not certified: s_ell(0) = " + std::to_string(tail) +
                             " vs mu/2 = " + std::to_string(0.5 * mu));
}

} // namespace

int count_sphere(const EfimovParams& ep, double mu, double lambda) {
    ep.validate();
    if (!(mu > 0.0)) throw std::invalid_argument("count_sphere: mu must be positive");
    check_degree_tail(ep, mu);
    int count = 0;
    for (int ell = 0; ell <= ep.ell_max; ++ell)
        if (s_hat_eigenvalue(ep, ell, lambda) > mu) count += 2 * ell + 1;
    return count;
}

namespace {

// Threshold set {y in [0, y_max] : f(y) > mu} as a union of intervals, by a
// fixed-step scan and bisection at each sign change. A half-step rescan must
// see the same number of crossings, otherwise a crossing was unresolved.
std::vector<Interval> threshold_intervals(const std::function<double(double)>& f,
                                          double mu, double y_max, double step) {
    auto crossings_at_step = [&](double st) {
        std::vector<double> cross;
        double prev_y = 0.0, prev_f = f(0.0) - mu;
        for (double y = st; y <= y_max + 0.5 * st; y += st) {
            const double yy = std::min(y, y_max);
            const double fy = f(yy) - mu;
            if ((prev_f > 0.0) != (fy > 0.0)) {
                double lo = prev_y, hi = yy;
                double flo = prev_f;
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = f(mid) - mu;
                    if ((flo > 0.0) == (fm > 0.0)) { lo = mid; flo = fm; }
                    else hi = mid;
                }
                cross.push_back(0.5 * (lo + hi));
            }
            prev_y = yy;
            prev_f = fy;
            if (yy == y_max) break;
        }
        return cross;
    };

    std::vector<double> cross = crossings_at_step(step);
    std::vector<double> verify = crossings_at_step(0.5 * step);
    if (cross.size() != verify.size())
        throw NumericalError("threshold set: unresolved crossing (scan refinement disagrees)");

    if (f(y_max) - mu > 0.0)
        throw NumericalError("threshold set: symbol still above mu at y_max");

    std::vector<Interval> out;
    bool inside = (f(0.0) - mu) > 0.0;
    double start = 0.0;
    for (double c : cross) {
        if (inside) out.push_back({start, c});
        else start = c;
        inside = !inside;
    }
    if (inside) out.push_back({start, y_max});
    return out;
}

} // namespace

EfimovResult U_of_mu(const EfimovParams& ep, double mu) {
    ep.validate();
    if (!(mu > 0.0)) throw std::invalid_argument("U_of_mu: mu must be positive");
    check_degree_tail(ep, mu);

    EfimovResult res;
    res.mu = mu;
    res.per_degree_thresholds.resize(static_cast<std::size_t>(ep.ell_max) + 1);

    double total = 0.0;
    for (int ell = 0; ell <= ep.ell_max; ++ell) {
        auto f = [&](double y) { return s_hat_eigenvalue(ep, ell, y); };
        auto intervals = threshold_intervals(f, mu, ep.y_max, 0.01);
        double measure = 0.0;
        for (const auto& iv : intervals) measure += iv[1] - iv[0];
        res.per_degree_thresholds[static_cast<std::size_t>(ell)] = std::move(intervals);
        total += (2.0 * ell + 1.0) * measure;
    }
    // The symbol is even in y, so the measure over the full line doubles the
    // half-line value: U = 2 * total / (4 pi).
    res.u0_coefficient = total / (2.0 * M_PI);
    return res;
}

SymmetricKernelMatrix assemble_S_r(const EfimovParams& ep, double r,
                                   int points_per_unit, int ell) {
    ep.validate();
    if (!(r > 0.0)) throw std::invalid_argument("assemble_S_r: r must be positive");
    if (points_per_unit < 8)
        throw std::invalid_argument("assemble_S_r: points_per_unit must be >= 8");
    if (ell < 0) throw std::invalid_argument("assemble_S_r: ell must be >= 0");

    const auto mdim = static_cast<Eigen::Index>(std::lround(r * points_per_unit));
    const double h = r / static_cast<double>(mdim);
    const GaussRule& gr = gauss_rule(ep.legendre_points);

    // Entries depend on x - x' only: one kernel evaluation per diagonal.
    std::vector<double> diag_kernel(static_cast<std::size_t>(mdim));
    parallel_for(static_cast<std::size_t>(mdim), [&](std::size_t k) {
        const double d = static_cast<double>(k) * h;
        if (d > 700.0) { diag_kernel[k] = 0.0; return; }
        const double ch = std::cosh(d);
        double acc = 0.0;
        for (int i = 0; i < ep.legendre_points; ++i)
            acc += gr.weights[i] * legendre_p(ell, gr.nodes[i]) / (ch + ep.s * gr.nodes[i]);
        diag_kernel[k] = ep.l * acc / (2.0 * M_PI);
    });

    SymmetricKernelMatrix K;
    K.dimension = static_cast<int>(mdim);
    K.z = 0.0;
    K.entries.resize(mdim, mdim);
    for (Eigen::Index i = 0; i < mdim; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = h * diag_kernel[static_cast<std::size_t>(i - j)];
            K.entries(i, j) = v;
            K.entries(j, i) = v;
        }
    return K;
}

int sr_count(const EfimovParams& ep, double mu, double r, int points_per_unit,
             int ell_max) {
    if (!(mu > 0.0)) throw std::invalid_argument("sr_count: mu must be positive");
    if (ell_max < 0) throw std::invalid_argument("sr_count: ell_max must be >= 0");
    int total = 0;
    for (int ell = 0; ell <= ell_max; ++ell) {
        SymmetricKernelMatrix block = assemble_S_r(ep, r, points_per_unit, ell);
        total += (2 * ell + 1) * count_above(block.entries, mu).count;
    }
    return total;
}

double log_slope_fit(const std::vector<std::pair<double, int>>& samples) {
    if (samples.size() < 3)
        throw std::invalid_argument("log_slope_fit: need at least 3 samples");
    std::vector<double> xs;
    for (const auto& [z, n] : samples) {
        if (!(z < 0.0)) throw std::invalid_argument("log_slope_fit: z values must be negative");
        xs.push_back(std::abs(std::log(std::abs(z))));
    }
    std::vector<double> uniq = xs;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    if (uniq.size() < 3)
        throw std::invalid_argument("log_slope_fit: degenerate abscissae");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        sx += xs[i];
        sy += samples[i].second;
        sxx += xs[i] * xs[i];
        sxy += xs[i] * samples[i].second;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace fockspectra
