#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "fockspectra/errors.hpp"

namespace fockspectra {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// A point of the three-torus (-pi, pi]^3. Addition and negation wrap back
/// into the fundamental cell.
struct TorusPoint {
    std::array<double, 3> coords{0.0, 0.0, 0.0};

    TorusPoint() = default;
    TorusPoint(double a, double b, double c) : coords{a, b, c} {}

    double operator[](std::size_t i) const { return coords[i]; }
    double& operator[](std::size_t i) { return coords[i]; }

    /// Euclidean norm of the representative in (-pi, pi]^3.
    double norm() const {
        return std::sqrt(coords[0] * coords[0] + coords[1] * coords[1] +
                         coords[2] * coords[2]);
    }
};

/// Maps a raw coordinate triple into (-pi, pi]^3. Throws on non-finite input.
TorusPoint wrap(const std::array<double, 3>& raw);

TorusPoint operator+(const TorusPoint& a, const TorusPoint& b);
TorusPoint operator-(const TorusPoint& a);

/// Product quadrature rule on the torus. Nodes never include the origin, so
/// integrands with an integrable singularity at 0 stay finite on the rule.
///
/// The uniform rule is the shifted-rectangle (midpoint) rule, which is
/// spectrally accurate for smooth periodic integrands. The graded rule maps
/// the midpoint nodes through the odd power law t = s^gamma / pi^(gamma-1)
/// per axis; each node's weight is the exact image width of its cell, so the
/// weights telescope to the full volume (2 pi)^3.
struct Grid {
    std::vector<TorusPoint> nodes;
    std::vector<double> weights;
    int n_per_axis = 0;
    int grading_gamma = 1;

    // Per-axis rule the 3D product is built from.
    std::vector<double> axis_nodes;
    std::vector<double> axis_weights;

    std::size_t size() const { return nodes.size(); }
};

/// Uniform midpoint rule with n nodes per axis. n must be even and >= 2;
/// an odd n would place a node at the origin.
Grid make_grid(int n_per_axis);

/// Power-law graded midpoint rule. gamma must be odd (the grading map has to
/// be odd to preserve parity symmetries of the node set); gamma = 1 is the
/// uniform rule.
Grid make_graded_grid(int n_per_axis, int gamma);

/// Quadrature sum over the grid in fixed node order with compensated
/// summation. Throws NumericalError naming the offending node if the
/// integrand is non-finite there.
template <class F>
double integrate(F&& f, const Grid& grid) {
    double acc = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        const double fi = f(grid.nodes[i]);
        if (!std::isfinite(fi)) {
            const TorusPoint& t = grid.nodes[i];
            throw NumericalError("integrate: non-finite integrand at node " +
                                 std::to_string(i) + " = (" + std::to_string(t[0]) +
                                 ", " + std::to_string(t[1]) + ", " +
                                 std::to_string(t[2]) + ")");
        }
        const double term = grid.weights[i] * fi - comp;
        const double next = acc + term;
        comp = (next - acc) - term;
        acc = next;
    }
    return acc;
}

} // namespace fockspectra
