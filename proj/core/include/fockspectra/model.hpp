#pragma once

#include <array>
#include <string>

#include "fockspectra/torus.hpp"

namespace fockspectra {

enum class Preset { remark24, remark27 };

/// One-particle channel function v.
enum class ChannelFn {
    epsilon,       // v = dispersion, vanishes at 0
    constant_one,  // v = 1
    zero_test      // v = 0; decouples the sectors, test use only
};

/// Concrete (u, v, w) triple of the cosine model family.
///
///   u(p)    = eps(p) + c
///   w(p, q) = l1 eps(p) + l2 eps(p+q) + l1 eps(q)
///
/// where eps is the nearest-neighbor lattice dispersion. The remark24 preset
/// pins the hopping weights to (1, 1) and v to the dispersion channel; the
/// remark27 preset takes arbitrary positive weights l1 != l2 and any channel.
struct ModelParams {
    Preset preset = Preset::remark27;
    double c = 0.0;
    double l1 = 1.0;
    double l2 = 1.0;
    ChannelFn v_choice = ChannelFn::epsilon;
    double u0 = 1.0;

    /// Effective hopping weights (remark24 forces (1, 1)).
    double hop1() const { return preset == Preset::remark24 ? 1.0 : l1; }
    double hop2() const { return preset == Preset::remark24 ? 1.0 : l2; }

    /// Throws InvalidModel if the parameters leave the admissible family.
    void validate() const;

    static ModelParams remark24(double c, double u0 = 1.0);
    static ModelParams remark27(double l1, double l2, ChannelFn v, double c,
                                double u0 = 1.0);
};

/// Parameters extracted from the Hessian blocks of w at (0, 0):
///   d^2w/dp dp = L1 W,   d^2w/dp dq = L2 W,   W positive definite.
/// For the cosine models W is the identity. The derived ratios feed the
/// asymptotic machinery: s = L2/L1, l = (L1^2/(L1^2-L2^2))^(1/2),
/// n_coef = (L1^2-L2^2)/L1.
struct AssumptionParams {
    double L1 = 0.0;
    double L2 = 0.0;
    std::array<std::array<double, 3>, 3> W{};
    double s = 0.0;
    double l = 0.0;
    double n_coef = 0.0;
    double fd_residual = 0.0;  // max deviation of the FD Hessian from (L1 W, L2 W)
};

/// Lattice dispersion eps(p) = 3 - cos p1 - cos p2 - cos p3, evaluated in the
/// cancellation-free form 2 sum_i sin^2(p_i / 2).
double eps(const TorusPoint& p);

double u_eval(const ModelParams& m, const TorusPoint& p);
double v_eval(const ModelParams& m, const TorusPoint& p);
double w_eval(const ModelParams& m, const TorusPoint& p, const TorusPoint& q);

/// min_q w(p, q) in closed form. Valid for the whole cosine family; exact to
/// rounding even for |p| far below sqrt(machine epsilon).
double m_w_closed(const ModelParams& m, const TorusPoint& p);

struct MinSearchResult {
    double value = 0.0;
    TorusPoint argmin;
};

/// min_q w(p, q) by numerical search (coarse scan + safeguarded Newton).
/// Independent of the closed form; the gradient at the reported argmin is
/// below 1e-10 in max norm. Throws NumericalError if the search stalls.
MinSearchResult m_w_numeric(const ModelParams& m, const TorusPoint& p);

/// Per-axis minimizer angle of q -> w(p, q); odd in p.
TorusPoint q0_closed(const ModelParams& m, const TorusPoint& p);

/// Hessian-derived parameters at the joint minimum (0, 0). Exact second
/// derivatives for the cosine family, cross-checked against central finite
/// differences. Throws InvalidModel when |L2| >= L1.
AssumptionParams assumption_params(const ModelParams& m);

/// Global maximum of w over the torus pair, located by a per-axis scan over
/// the grid's axis nodes (plus a fixed fallback lattice) and shrinking-box
/// refinement. The result dominates w at every product grid node.
double global_max_M(const ModelParams& m, const Grid& grid);

std::string to_string(Preset p);
std::string to_string(ChannelFn v);

} // namespace fockspectra
