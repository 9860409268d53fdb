#pragma once

// Spectral evaluation of the Dirichlet heat flow u(t) = sum alpha_k
// e^{-lambda_k t} phi_k, its boundary flux as a weak conormal derivative, and
// the deviation of that flux from a boundary constant — the discrete form of
// the overdetermined constant-flux condition.
//
// The flux is recovered variationally: for a field u with zero trace whose
// (distributional) Laplacian is a nodal field w, the functional
//   g_i = <du/dnu, hat_i> = hat_i~^T (M w) + hat_i~^T (K u)
// over boundary hat functions reduces to the boundary rows of K u + M w,
// because hat_i~ can be taken as the nodal hat itself (extension
// independence).  The flux density q then solves B q = g on the boundary.

#include "heatrig/spectral.hpp"

#include <vector>

namespace heatrig {

/// Heat solution at one time: u(t), du/dt = Laplacian(u), the truncation
/// index used and whether the requested truncation tolerance was met.
struct HeatState {
    double t = 0.0;
    Vector u;
    Vector du_dt;
    int K_used = 0;
    bool truncation_ok = true;
    bool max_principle_ok = true;  // 0 <= u <= 1 + slack at interior vertices
};

/// Evaluate the truncated expansion at time t > 0 with spectral tail bound
/// `tol` (see truncation_index); K falls back to the full basis with
/// truncation_ok = false when the bound cannot be met.
HeatState heat_solution(const EigenBasis& basis, double t, double tol = 1e-8);

/// Weak conormal derivative pairing:
///   <du/dnu, psi> = ext(psi)^T (M w) + ext(psi)^T (K u)
/// where w is the nodal Laplacian of u and ext is the discrete harmonic
/// extension.  `field` must have zero boundary trace (checked to 1e-12).
double conormal_pairing(const SystemMatrices& sys, const Vector& field,
                        const Vector& laplacian_field, const Vector& psi_boundary);

/// Recovered boundary flux density with its B-weighted statistics.
struct FluxProfile {
    double t = 0.0;
    Vector q;                // per boundary vertex, sys.boundary order
    double mean = 0.0;       // (1^T B q) / (1^T B 1)
    double deviation = 0.0;  // ||q - mean||_B / ||q||_B
    double total = 0.0;      // 1^T B q = integral of the flux density
    bool near_null = false;  // the generating field carried < 1e-6 mass
    int K_used = 0;
};

/// Flux of an arbitrary zero-trace field with nodal Laplacian w.
FluxProfile flux_of_field(const SystemMatrices& sys, const Vector& field, const Vector& w);

/// Flux of the heat solution at state.t.
FluxProfile boundary_flux(const SystemMatrices& sys, const HeatState& state);

/// Per-time flux summary for the overdetermined condition at times (t_n).
struct OverdeterminationReport {
    std::vector<FluxProfile> profiles;
    double max_deviation = 0.0;
    double threshold = 0.0;
    bool pass = false;
    bool times_cluster_near_zero = false;  // all t_n below 10 * t_min
};

/// Evaluate flux deviation at each time and compare against `threshold`.
OverdeterminationReport check_discrete_overdetermination(const SystemMatrices& sys,
                                                         const EigenBasis& basis,
                                                         const std::vector<double>& times,
                                                         double threshold, double tol = 1e-8);

/// Flux of the eigenspace projection Phi_g (Laplacian = -Lambda_g Phi_g):
/// the per-mode rigidity mechanism.  Groups with M-mass below 1e-6 are
/// returned with near_null = true and a zero profile.
FluxProfile eigenspace_flux(const SystemMatrices& sys, const EigenBasis& basis, int group);

}  // namespace heatrig
