#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fockspectra/birman_schwinger.hpp"
#include "fockspectra/friedrichs.hpp"

using namespace fockspectra;

namespace {

ModelParams resonance_model(double c = 0.0, double u0 = 1.0) {
    return ModelParams::remark27(2, 1, ChannelFn::constant_one, c, u0);
}

ModelParams tuned(ModelParams m, const Grid& g) {
    m.c = tune_coupling(m, g);
    return m;
}

} // namespace

TEST_CASE("kernel matrix is exactly symmetric and decays for deep z") {
    Grid g = make_graded_grid(6, 3);
    ModelParams m = tuned(resonance_model(), g);

    SymmetricKernelMatrix K = assemble_T(m, -0.25, g);
    CHECK((K.entries - K.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(K.dimension == 216);
    CHECK(K.z == -0.25);

    SymmetricKernelMatrix deep = assemble_T(m, -1e6, g);
    CHECK(deep.entries.cwiseAbs().maxCoeff() < 1e-9);
    CHECK(count_above(deep.entries, 1.0).count == 0);
}

TEST_CASE("diagonal kernel entry matches the direct formula") {
    Grid g = make_graded_grid(4, 3);
    ModelParams m = tuned(resonance_model(0.0, 1.0), g);
    const double z = -1.0;
    SymmetricKernelMatrix K = assemble_T(m, z, g);
    const std::size_t i = 17;
    const TorusPoint p = g.nodes[i];
    const double vi = v_eval(m, p);
    const double expected = g.weights[i] * vi * vi / delta(m, p, z, g) *
                            (0.5 / (w_eval(m, p, p) - z) + 1.0 / (m.u0 - z));
    CHECK(K.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) ==
          doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("kernel entries grow as z approaches the threshold") {
    Grid g = make_graded_grid(4, 3);
    ModelParams m = tuned(resonance_model(), g);
    SymmetricKernelMatrix far = assemble_T(m, -0.5, g);
    SymmetricKernelMatrix near = assemble_T(m, -0.1, g);
    std::mt19937 rng(7);
    for (int it = 0; it < 50; ++it) {
        const Eigen::Index i = static_cast<Eigen::Index>(rng() % 64);
        const Eigen::Index j = static_cast<Eigen::Index>(rng() % 64);
        CHECK(near.entries(i, j) >= far.entries(i, j));
    }
}

TEST_CASE("assembly preconditions") {
    Grid g = make_graded_grid(4, 3);
    Grid uniform = make_grid(4);
    ModelParams m = tuned(resonance_model(), g);
    CHECK_THROWS_AS(assemble_T(m, 0.5, g), std::invalid_argument);
    ModelParams mz = m;
    mz.u0 = -0.5;
    CHECK_THROWS_AS(assemble_T(mz, -0.5, g), std::invalid_argument);
    CHECK_THROWS_AS(assemble_T(m, -1e-5, uniform), std::invalid_argument);

    // determinant dips below zero between the branch and the band
    ModelParams sub = resonance_model(0.5 * m.c);
    CHECK_THROWS_AS(assemble_T(sub, -1e-3, g), PreconditionViolation);
}

TEST_CASE("split form: exact sum identity, rank-one remainder, Weyl bound") {
    Grid g = make_graded_grid(6, 3);
    ModelParams m = tuned(resonance_model(0.0, 0.0), g);
    REQUIRE(m.u0 == 0.0);

    ModelParams with_channel = m;
    with_channel.u0 = 1.0;
    CHECK_THROWS_AS(assemble_T_split(with_channel, -0.5, g), std::invalid_argument);

    auto [t1, t2] = assemble_T_split(m, -0.01, g);
    SymmetricKernelMatrix full = assemble_T(m, -0.01, g);
    const double scale = full.entries.cwiseAbs().maxCoeff();
    CHECK(((t1.entries + t2.entries) - full.entries).cwiseAbs().maxCoeff() <= 1e-14 * scale);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(t2.entries);
    CHECK(svd.singularValues()(1) < 1e-12 * svd.singularValues()(0));

    const int n_full = count_above(t1.entries + t2.entries, 1.0).count;
    const int n_t1 = count_above(t1.entries, 0.9).count;
    CHECK(n_full <= n_t1 + 1);
}

TEST_CASE("inertia counting against the dense eigensolver") {
    Eigen::MatrixXd I3 = Eigen::MatrixXd::Identity(3, 3);
    CHECK(count_above(I3, 1.0).count == 0);  // strict inequality

    Eigen::Vector3d d{2.0, 0.5, 0.5};
    CHECK(count_above(d.asDiagonal().toDenseMatrix(), 1.0).count == 1);

    std::mt19937 rng(42);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd A(50, 50);
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j <= i; ++j) {
            A(i, j) = gauss(rng);
            A(j, i) = A(i, j);
        }
    for (double mu : {-2.0, -0.5, 0.0, 0.5, 2.0}) {
        CHECK(count_above(A, mu).count == count_above_eigensolver(A, mu).count);
        CHECK(count_below(A, mu).count == 50 - count_above_eigensolver(A, mu).count);
    }
}

TEST_CASE("near-threshold eigenvalues are flagged, never silently rounded") {
    Eigen::Vector2d d{1.0 + 5e-10, 0.5};
    Eigen::MatrixXd K = d.asDiagonal().toDenseMatrix();
    EigenCount ec = count_above(K, 1.0);
    CHECK(ec.count == 1);
    CHECK(ec.ambiguous);
    CHECK(ec.threshold_gap < 1e-9);

    Eigen::Vector2d far{2.0, 0.5};
    EigenCount ok = count_above(far.asDiagonal().toDenseMatrix(), 1.0);
    CHECK_FALSE(ok.ambiguous);
}

TEST_CASE("zero channel gives an empty count") {
    Grid g = make_graded_grid(4, 3);
    ModelParams m = ModelParams::remark27(2, 1, ChannelFn::zero_test, 1.0, 1.0);
    for (double z : {-0.5, -0.1, -0.01}) CHECK(N_of_z(m, z, g).count == 0);
}

TEST_CASE("counts are nondecreasing toward the threshold and under refinement") {
    ModelParams proto = resonance_model();
    int prev = -1;
    Grid g8 = make_graded_grid(8, 3);
    ModelParams m = tuned(proto, g8);
    for (double z : {-1e-1, -1e-2, -1e-3}) {
        const int n = N_of_z(m, z, g8).count;
        CHECK(n >= prev);
        prev = n;
    }

    prev = -1;
    for (int n : {8, 10, 12}) {
        Grid g = make_graded_grid(n, 3);
        ModelParams mm = tuned(proto, g);
        const int count = N_of_z(mm, -1e-3, g).count;
        CHECK(count >= prev);
        prev = count;
    }
}

TEST_CASE("discrete Hamiltonian: block layout and decoupling") {
    Grid g2 = make_grid(2);
    ModelParams m = resonance_model(1.0, 1.0);
    DiscreteFock f2 = assemble_discrete_H(m, g2);
    CHECK(f2.dimension == 1 + 8 + 64);
    CHECK((f2.matrix - f2.matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
    // scalar sector never couples to the pair sector directly
    CHECK(f2.matrix.block(0, 9, 1, 64).cwiseAbs().maxCoeff() == 0.0);

    Grid g4 = make_grid(4);
    DiscreteFock f4 = assemble_discrete_H(m, g4);
    CHECK(f4.dimension == 4161);

    ModelParams mz = ModelParams::remark27(2, 1, ChannelFn::zero_test, 1.0, 1.0);
    DiscreteFock fz = assemble_discrete_H(mz, g2);
    CHECK(count_H_below(fz, -0.1).count == 0);
    // counts nondecreasing in z by definition
    CHECK(count_H_below(f2, -0.5).count <= count_H_below(f2, -0.1).count);

    Grid big = make_grid(8);
    CHECK_THROWS_AS(assemble_discrete_H(m, big), std::invalid_argument);
}

TEST_CASE("finite-dimensional counting identity on the coarse grid") {
    Grid g = make_grid(2);
    for (double u0 : {1.0, 2.5}) {
        ModelParams m = tuned(resonance_model(0.0, u0), g);
        DiscreteFock fock = assemble_discrete_H(m, g);
        for (double z : {-0.5, -0.1}) {
            const int direct = count_H_below(fock, z).count;
            const int bs = N_of_z(m, z, g).count;
            CHECK(direct == bs);
        }
    }
}
