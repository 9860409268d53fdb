#pragma once

// Dirichlet eigenbasis of the P1 pencil K_int phi = lambda M_int phi, the
// expansion coefficients alpha_k of the constant initial datum, eigenvalue
// clustering into (numerically) degenerate groups, and spectral-tail
// truncation bounds in the style of the Li-Yau lower bound
// lambda_k >= C*k (2D form with C = 2*pi/area by default).

#include "heatrig/fem.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <vector>

namespace heatrig {

using Matrix = Eigen::MatrixXd;

/// First `count` Dirichlet eigenpairs on a mesh.  `modes` holds full nodal
/// eigenfunctions (exact zeros at boundary vertices), M-orthonormal columns
/// in ascending eigenvalue order.  `alphas[k] = 1^T M phi_k` is the
/// coefficient of mode k in the expansion of the constant 1.  `groups`
/// clusters indices whose eigenvalues agree within relative tolerance 1e-6.
struct EigenBasis {
    Vector lambdas;
    Matrix modes;
    Vector alphas;
    Vector residuals;                 // ||K phi - lambda M phi||_2 / (lambda ||M phi||_2)
    std::vector<std::vector<int>> groups;
    double area = 0.0;
    double li_yau_c = 0.0;            // configured tail-bound constant

    int count() const { return static_cast<int>(lambdas.size()); }

    /// Eigenspace projection of the constant 1 onto group g:
    /// Phi_g = sum_{j in group} alpha_j phi_j.
    Vector group_projection(int g) const;
    /// Representative eigenvalue of group g (mean of members).
    double group_lambda(int g) const;
    /// M-mass carried by group g: sqrt(sum alpha_j^2).
    double group_mass(int g) const;
};

struct SpectralOptions {
    double cluster_rtol = 1e-6;   // relative gap that closes a group
    double residual_tol = 1e-10;  // relative eigen-residual target
    double li_yau_c = 0.0;        // 0 -> use 2*pi/area
    int dense_threshold = 800;    // dense solver below this many interior dofs
    int max_lanczos = 0;          // 0 -> automatic (scales with count)
};

/// Compute the first `count` eigenpairs.  Uses dense reduction for small
/// interior systems and a shift-inverted (sigma = 0) Lanczos iteration with
/// full M-reorthogonalization otherwise.  Throws on non-convergence, with
/// the achieved residuals in the message.
EigenBasis eigenbasis(const SystemMatrices& sys, int count, const SpectralOptions& opts = {});

/// Result of a tail-bound query: the smallest usable truncation index K, the
/// bound value at that K, and whether the requested tolerance was met within
/// the available modes (if not, K = count and `satisfied` is false).
struct TruncationResult {
    int K = 0;
    double bound = 0.0;
    bool satisfied = false;
};

/// Smallest K such that the computable tail bound
///   sum_{k > K, k <= count} |alpha_k| e^{-lambda_k t} ||phi_k||_inf
///     + geometric extension via lambda_k >= C k beyond the computed modes
/// is at most tol.  t must be positive.
TruncationResult truncation_index(const EigenBasis& basis, double t, double tol);

/// Solve the generalized symmetric pencil A x = lambda B x for the `count`
/// smallest eigenvalues (A SPD, B SPD) by shift-invert Lanczos at sigma = 0
/// with full B-reorthogonalization.  Exposed for reuse by the 1D sphere-band
/// reduction.  Returns ascending eigenvalues; columns of `vecs` are
/// B-orthonormal.  `max_iter = 0` chooses automatically.
void lanczos_smallest(const SpMat& A, const SpMat& B, int count, double residual_tol,
                      Vector& values, Matrix& vecs, int max_iter = 0);

/// Text export: per mode one line `k lambda alpha` followed by the nodal
/// values (one per line, 17 significant digits).
void export_eigenbasis(const EigenBasis& basis, std::ostream& out);

}  // namespace heatrig
