#include "fockspectra/birman_schwinger.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "fockspectra/friedrichs.hpp"
#include "fockspectra/parallel.hpp"

namespace fockspectra {

namespace {

// Per-node data shared by the kernel assemblies: d_i = v(t_i) sqrt(w_i) /
// sqrt(delta(t_i, z)) and the pairwise dispersion sum w(t_i, t_j).
struct KernelTables {
    std::vector<double> d;
    Eigen::MatrixXd w_pair;
};

KernelTables build_tables(const ModelParams& m, double z, const Grid& grid) {
    const std::size_t n = grid.size();
    KernelTables tb;
    tb.d.resize(n);

    std::vector<double> dvals = delta_at_all_nodes(m, z, grid);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(dvals[i] > 0.0)) {
            const TorusPoint& t = grid.nodes[i];
            throw PreconditionViolation(
                "assemble_T: determinant not positive at node " + std::to_string(i) +
                " = (" + std::to_string(t[0]) + ", " + std::to_string(t[1]) + ", " +
                std::to_string(t[2]) + "), delta = " + std::to_string(dvals[i]));
        }
        tb.d[i] = v_eval(m, grid.nodes[i]) * std::sqrt(grid.weights[i]) / std::sqrt(dvals[i]);
    }

    tb.w_pair.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = i; j < n; ++j) {
            const double w = w_eval(m, grid.nodes[i], grid.nodes[j]);
            tb.w_pair(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w;
            tb.w_pair(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = w;
        }
    });
    return tb;
}

void check_assemble_preconditions(const ModelParams& m, double z, const Grid& grid) {
    m.validate();
    if (!(z < 0.0)) throw std::invalid_argument("assemble_T: z must be negative");
    if (z == m.u0) throw std::invalid_argument("assemble_T: z must differ from u0");
    if (grid.grading_gamma == 1 && z >= -1e-4)
        throw std::invalid_argument(
            "assemble_T: near-threshold z needs a graded grid (uniform rules cannot "
            "resolve kernels concentrated at |p| ~ sqrt(|z|))");
}

SymmetricKernelMatrix make_kernel(const Grid& grid, double z) {
    SymmetricKernelMatrix K;
    K.dimension = static_cast<int>(grid.size());
    K.n_per_axis = grid.n_per_axis;
    K.grading_gamma = grid.grading_gamma;
    K.z = z;
    return K;
}

} // namespace

SymmetricKernelMatrix assemble_T(const ModelParams& m, double z, const Grid& grid) {
    check_assemble_preconditions(m, z, grid);
    KernelTables tb = build_tables(m, z, grid);
    const std::size_t n = grid.size();

    SymmetricKernelMatrix K = make_kernel(grid, z);
    K.entries.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const double scalar_term = 1.0 / (m.u0 - z);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = i; j < n; ++j) {
            const double k = tb.d[i] * tb.d[j] *
                             (0.5 / (tb.w_pair(static_cast<Eigen::Index>(i),
                                               static_cast<Eigen::Index>(j)) - z) +
                              scalar_term);
            K.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = k;
            K.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = k;
        }
    });
    return K;
}

std::pair<SymmetricKernelMatrix, SymmetricKernelMatrix>
assemble_T_split(const ModelParams& m, double z, const Grid& grid) {
    if (m.u0 != 0.0)
        throw std::invalid_argument("assemble_T_split: requires u0 = 0");
    check_assemble_preconditions(m, z, grid);
    KernelTables tb = build_tables(m, z, grid);
    const std::size_t n = grid.size();

    SymmetricKernelMatrix T1 = make_kernel(grid, z);
    SymmetricKernelMatrix T2 = make_kernel(grid, z);
    T1.entries.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    T2.entries.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = i; j < n; ++j) {
            const double t1 = tb.d[i] * tb.d[j] * 0.5 /
                              (tb.w_pair(static_cast<Eigen::Index>(i),
                                         static_cast<Eigen::Index>(j)) - z);
            const double t2 = -tb.d[i] * tb.d[j] / z;
            T1.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t1;
            T1.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = t1;
            T2.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t2;
            T2.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = t2;
        }
    });
    return {std::move(T1), std::move(T2)};
}

EigenCount N_of_z(const ModelParams& m, double z, const Grid& grid) {
    if (m.u0 == 0.0) {
        auto [t1, t2] = assemble_T_split(m, z, grid);
        Eigen::MatrixXd sum = t1.entries + t2.entries;
        return count_above(sum, 1.0);
    }
    SymmetricKernelMatrix T = assemble_T(m, z, grid);
    return count_above(T.entries, 1.0);
}

DiscreteFock assemble_discrete_H(const ModelParams& m, const Grid& grid) {
    m.validate();
    const int n = grid.n_per_axis;
    if (n > 6)
        throw std::invalid_argument("assemble_discrete_H: n_per_axis must be <= 6");
    const std::size_t n3 = grid.size();
    const std::size_t dim = 1 + n3 + n3 * n3;

    DiscreteFock fock;
    fock.n_per_axis = n;
    fock.dimension = static_cast<int>(dim);
    fock.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                        static_cast<Eigen::Index>(dim));
    auto& H = fock.matrix;

    std::vector<double> v(n3), sw(n3);
    for (std::size_t k = 0; k < n3; ++k) {
        v[k] = v_eval(m, grid.nodes[k]);
        sw[k] = std::sqrt(grid.weights[k]);
    }

    H(0, 0) = m.u0;
    for (std::size_t k = 0; k < n3; ++k) {
        const auto row = static_cast<Eigen::Index>(1 + k);
        H(0, row) = sw[k] * v[k];
        H(row, 0) = sw[k] * v[k];
        H(row, row) = u_eval(m, grid.nodes[k]);
    }

    // Pair sector: diagonal dispersion plus the symmetrized creation block
    // C[k, (i,j)] = (sw_i v_i delta_jk + sw_j v_j delta_ik) / 2.
    const auto pair_base = static_cast<Eigen::Index>(1 + n3);
    for (std::size_t i = 0; i < n3; ++i) {
        for (std::size_t j = 0; j < n3; ++j) {
            const auto col = pair_base + static_cast<Eigen::Index>(i * n3 + j);
            H(col, col) = w_eval(m, grid.nodes[i], grid.nodes[j]);
            const auto row_j = static_cast<Eigen::Index>(1 + j);
            const auto row_i = static_cast<Eigen::Index>(1 + i);
            H(row_j, col) += 0.5 * sw[i] * v[i];
            H(col, row_j) += 0.5 * sw[i] * v[i];
            H(row_i, col) += 0.5 * sw[j] * v[j];
            H(col, row_i) += 0.5 * sw[j] * v[j];
        }
    }
    return fock;
}

EigenCount count_H_below(const DiscreteFock& fock, double z) {
    return count_below(fock.matrix, z);
}

} // namespace fockspectra
