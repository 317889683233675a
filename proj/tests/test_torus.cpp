#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fockspectra/model.hpp"
#include "fockspectra/torus.hpp"

using namespace fockspectra;

namespace {

// Series oracle for the modified Bessel value I0(1); converges in a handful
// of terms and is independent of any quadrature.
double bessel_i0_of_one() {
    double sum = 0.0, term = 1.0;
    for (int k = 0; k < 30; ++k) {
        sum += term;
        const double kk = k + 1.0;
        term *= 0.25 / (kk * kk);
    }
    return sum;
}

const double kVolume = kTwoPi * kTwoPi * kTwoPi;

} // namespace

TEST_CASE("wrap maps representatives into the half-open cell") {
    TorusPoint a = wrap({1.5 * M_PI, 0.0, 0.0});
    CHECK(a[0] == doctest::Approx(-0.5 * M_PI).epsilon(1e-15));

    TorusPoint b = wrap({M_PI, M_PI, M_PI});
    CHECK(b[0] == M_PI);
    CHECK(b[1] == M_PI);
    CHECK(b[2] == M_PI);

    TorusPoint c = wrap({-M_PI, 0.0, 0.0});
    CHECK(c[0] == M_PI);

    // periodicity: shifting by full turns does not move the point
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(-M_PI, M_PI);
    for (int it = 0; it < 50; ++it) {
        const double x = uni(rng);
        const int k = static_cast<int>(rng() % 7) - 3;
        TorusPoint p = wrap({x, 0, 0});
        TorusPoint q = wrap({x + kTwoPi * k, 0, 0});
        CHECK(p[0] == doctest::Approx(q[0]).epsilon(1e-13));
    }

    CHECK_THROWS_AS(wrap({std::nan(""), 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("uniform grid: node layout and weights") {
    CHECK_THROWS_AS(make_grid(1), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(3), std::invalid_argument);

    Grid g = make_grid(2);
    REQUIRE(g.size() == 8);
    for (const auto& t : g.nodes)
        for (int i = 0; i < 3; ++i)
            CHECK(std::abs(std::abs(t[i]) - 0.5 * M_PI) < 1e-15);

    for (int n : {2, 8, 16}) {
        Grid gn = make_grid(n);
        double sum = 0.0;
        double min_norm = 1e300;
        for (std::size_t i = 0; i < gn.size(); ++i) {
            sum += gn.weights[i];
            min_norm = std::min(min_norm, gn.nodes[i].norm());
        }
        CHECK(sum == doctest::Approx(kVolume).epsilon(1e-12));
        CHECK(min_norm > 0.0);
    }
}

TEST_CASE("graded grid: identity at gamma 1, exact mass, finer near origin") {
    CHECK_THROWS_AS(make_graded_grid(8, 2), std::invalid_argument);

    Grid a = make_graded_grid(8, 1);
    Grid b = make_grid(8);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.nodes[i][0] == b.nodes[i][0]);
        CHECK(a.weights[i] == b.weights[i]);
    }

    for (int n : {4, 16, 32}) {
        Grid g = make_graded_grid(n, 3);
        double sum = 0.0;
        for (double w : g.weights) sum += w;
        CHECK(sum == doctest::Approx(kVolume).epsilon(1e-12));
    }

    Grid g16 = make_graded_grid(16, 3);
    Grid u16 = make_grid(16);
    double graded_min = 1e300, uniform_min = 1e300;
    for (const auto& t : g16.nodes) graded_min = std::min(graded_min, t.norm());
    for (const auto& t : u16.nodes) uniform_min = std::min(uniform_min, t.norm());
    // smallest per-axis magnitude is the image of the half-cell node
    const double expected_axis = std::pow(M_PI / 16.0, 3) / (M_PI * M_PI);
    CHECK(graded_min == doctest::Approx(std::sqrt(3.0) * expected_axis).epsilon(1e-12));
    CHECK(graded_min < uniform_min);
}

TEST_CASE("integrate: volume, dispersion and a Bessel reference") {
    Grid g = make_grid(16);
    CHECK(integrate([](const TorusPoint&) { return 1.0; }, g) ==
          doctest::Approx(kVolume).epsilon(1e-12));

    ModelParams m = ModelParams::remark24(0.0);
    (void)m;
    CHECK(integrate([](const TorusPoint& t) { return eps(t); }, g) ==
          doctest::Approx(3.0 * kVolume).epsilon(1e-14));

    const double ref = kVolume * bessel_i0_of_one();
    const double val = integrate([](const TorusPoint& t) { return std::exp(std::cos(t[0])); }, g);
    CHECK(val == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("integrate is deterministic and reports bad nodes") {
    Grid g = make_graded_grid(8, 3);
    auto f = [](const TorusPoint& t) { return std::cos(t[0]) * std::exp(t[1]) + t[2]; };
    const double v1 = integrate(f, g);
    const double v2 = integrate(f, g);
    CHECK(v1 == v2);  // bit-identical

    auto bad = [](const TorusPoint& t) { return t[0] > 0 ? 1.0 : 1.0 / 0.0; };
    CHECK_THROWS_AS(integrate(bad, g), NumericalError);
}

TEST_CASE("spectral accuracy on a smooth periodic integrand") {
    const double ref = kVolume * bessel_i0_of_one();
    auto f = [](const TorusPoint& t) { return std::exp(std::cos(t[0])); };
    const double e8 = std::abs(integrate(f, make_grid(8)) - ref);
    const double e16 = std::abs(integrate(f, make_grid(16)) - ref);
    CHECK(e16 < 1e-6 * e8);
}

TEST_CASE("first-order convergence on the singular inverse dispersion") {
    ModelParams m = ModelParams::remark24(0.0);
    auto f = [&](const TorusPoint& t) { return 1.0 / w_eval(m, TorusPoint{}, t); };
    const double ref = integrate(f, make_graded_grid(64, 3));
    double prev = 1e300;
    for (int n : {8, 16, 32}) {
        const double err = std::abs(integrate(f, make_graded_grid(n, 3)) - ref);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("even integrands are blind to reflection of the node set") {
    for (int gamma : {1, 3}) {
        Grid g = make_graded_grid(16, gamma);
        auto f = [](const TorusPoint& t) { return eps(t) * eps(t); };
        auto f_reflected = [&](const TorusPoint& t) { return f(-t); };
        CHECK(integrate(f, g) == integrate(f_reflected, g));
    }
}
