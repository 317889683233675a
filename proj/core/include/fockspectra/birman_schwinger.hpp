#pragma once

#include <utility>

#include "fockspectra/linalg.hpp"
#include "fockspectra/model.hpp"
#include "fockspectra/torus.hpp"

namespace fockspectra {

/// Nystrom matrix of a symmetric integral operator: quadrature weights are
/// folded in as sqrt(w_i w_j) k(t_i, t_j), so the matrix is symmetric and its
/// nonzero spectrum matches the weighted collocation operator.
struct SymmetricKernelMatrix {
    int dimension = 0;
    Eigen::MatrixXd entries;
    int n_per_axis = 0;     // grid identity (0 when not built from a torus grid)
    int grading_gamma = 0;
    double z = 0.0;
};

/// Dense symmetric matrix of the truncated Fock Hamiltonian on the product
/// grid: one scalar sector, one one-particle sector (n^3 nodes) and the full
/// unsymmetrized pair sector (n^6 nodes). The pair block is diagonal and
/// nonnegative, so the antisymmetric part contributes nothing below zero.
struct DiscreteFock {
    int n_per_axis = 0;
    int dimension = 0;  // 1 + n^3 + n^6
    Eigen::MatrixXd matrix;
};

/// Birman-Schwinger operator at spectral parameter z < 0, z != u0. The
/// determinant entering the kernel is evaluated with the same quadrature
/// rule, which makes the finite-dimensional counting identity with
/// assemble_discrete_H exact. Requires the determinant to be positive at
/// every node. Near-threshold values (|z| <= 1e-4) require a graded grid.
SymmetricKernelMatrix assemble_T(const ModelParams& m, double z, const Grid& grid);

/// Splitting used when the scalar channel sits exactly at zero (u0 = 0):
/// first the pair-exchange part, second the rank-one scalar part. The sum
/// equals assemble_T with u0 = 0 entry by entry.
std::pair<SymmetricKernelMatrix, SymmetricKernelMatrix>
assemble_T_split(const ModelParams& m, double z, const Grid& grid);

/// Eigenvalue count of H below z through the Birman-Schwinger operator:
/// N(z) = #{eigenvalues of T(z) above 1}. Routes through the split form when
/// u0 = 0.
EigenCount N_of_z(const ModelParams& m, double z, const Grid& grid);

/// Direct discretization of the Fock Hamiltonian; n_per_axis <= 6.
DiscreteFock assemble_discrete_H(const ModelParams& m, const Grid& grid);

/// Eigenvalues of the discretized Hamiltonian strictly below z, by matrix
/// inertia. The independent oracle for N_of_z.
EigenCount count_H_below(const DiscreteFock& fock, double z);

} // namespace fockspectra
