#include "fockspectra/torus.hpp"

namespace fockspectra {

namespace {

double wrap1(double x) {
    // remainder() lands in [-pi, pi]; the half-open convention keeps +pi.
    double r = std::remainder(x, kTwoPi);
    if (r <= -M_PI) r += kTwoPi;
    return r;
}

double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

} // namespace

TorusPoint wrap(const std::array<double, 3>& raw) {
    for (double x : raw) {
        if (!std::isfinite(x)) throw std::invalid_argument("wrap: non-finite coordinate");
    }
    return TorusPoint{wrap1(raw[0]), wrap1(raw[1]), wrap1(raw[2])};
}

TorusPoint operator+(const TorusPoint& a, const TorusPoint& b) {
    return wrap({a[0] + b[0], a[1] + b[1], a[2] + b[2]});
}

TorusPoint operator-(const TorusPoint& a) {
    return wrap({-a[0], -a[1], -a[2]});
}

Grid make_grid(int n) {
    if (n < 2) throw std::invalid_argument("make_grid: n_per_axis must be >= 2");
    if (n % 2 != 0)
        throw std::invalid_argument("make_grid: n_per_axis must be even, otherwise the origin is a node");
    Grid g;
    g.n_per_axis = n;
    g.grading_gamma = 1;
    const double h = kTwoPi / n;
    g.axis_nodes.resize(n);
    g.axis_weights.assign(n, h);
    for (int k = 0; k < n; ++k) g.axis_nodes[k] = -M_PI + (k + 0.5) * h;

    g.nodes.reserve(static_cast<std::size_t>(n) * n * n);
    g.weights.assign(static_cast<std::size_t>(n) * n * n, h * h * h);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                g.nodes.emplace_back(g.axis_nodes[i], g.axis_nodes[j], g.axis_nodes[k]);
    return g;
}

Grid make_graded_grid(int n, int gamma) {
    if (gamma < 1 || gamma % 2 == 0)
        throw std::invalid_argument("make_graded_grid: gamma must be an odd positive integer");
    if (gamma == 1) return make_grid(n);
    if (n < 2) throw std::invalid_argument("make_graded_grid: n_per_axis must be >= 2");
    if (n % 2 != 0)
        throw std::invalid_argument("make_graded_grid: n_per_axis must be even, otherwise the origin is a node");

    Grid g;
    g.n_per_axis = n;
    g.grading_gamma = gamma;
    const double h = kTwoPi / n;
    const double scale = ipow(M_PI, gamma - 1);
    auto map = [&](double s) { return ipow(s, gamma) / scale; };

    // Shared cell boundaries make the weights telescope to exactly 2*pi.
    std::vector<double> bounds(static_cast<std::size_t>(n) + 1);
    bounds[0] = -M_PI;
    bounds[n] = M_PI;
    for (int k = 1; k < n; ++k) bounds[k] = -M_PI + k * h;

    g.axis_nodes.resize(n);
    g.axis_weights.resize(n);
    for (int k = 0; k < n; ++k) {
        g.axis_nodes[k] = map(-M_PI + (k + 0.5) * h);
        g.axis_weights[k] = map(bounds[k + 1]) - map(bounds[k]);
    }

    const std::size_t total = static_cast<std::size_t>(n) * n * n;
    g.nodes.reserve(total);
    g.weights.reserve(total);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                g.nodes.emplace_back(g.axis_nodes[i], g.axis_nodes[j], g.axis_nodes[k]);
                g.weights.push_back(g.axis_weights[i] * g.axis_weights[j] * g.axis_weights[k]);
            }
    return g;
}

} // namespace fockspectra
