#pragma once

// The three rigidity mechanisms built on top of the heat-flow machinery:
//  * the torsion reduction: -Laplace(Phi) = 1, Phi = 0, with its spectral
//    series Phi = sum lambda_k^{-1} alpha_k phi_k and the constant-normal-
//    derivative (Serrin) indicator;
//  * the short-time heat-content expansion f(t) = int u(t^2) psi ~
//    c0 + c1 t + c2 t^2 with geometric targets
//    (int psi, -(2/sqrt(pi)) int_bnd psi, 1/2 int_bnd kappa psi);
//  * the interior-surface overdetermination on a conforming internal circle,
//    with trace constancy and omega-side flux constancy per condition.

#include "heatrig/heatflow.hpp"

#include <optional>
#include <string>
#include <vector>

namespace heatrig {

/// Direct and spectral torsion solutions with their relative L2 discrepancy.
struct TorsionPair {
    Vector direct;    // FEM solve of -Laplace(Phi)=1, Phi=0
    Vector spectral;  // K-term series sum lambda_k^{-1} alpha_k phi_k
    double discrepancy = 0.0;  // ||direct - spectral||_M / ||direct||_M
    int K = 0;
    bool positive_interior = true;  // maximum-principle check (warning flag)
};

TorsionPair torsion(const SystemMatrices& sys, const EigenBasis& basis, int K);

/// Flux profile of the direct torsion field (Laplacian = -1); the deviation
/// is the Serrin rigidity indicator.
FluxProfile serrin_check(const SystemMatrices& sys, const TorsionPair& pair);

/// Heat content f(t) = psi^T M u(t^2) evaluated with the full available
/// basis.  psi must be discrete-harmonic (relative interior residual <=
/// 1e-8); `truncation_ok` reports whether the 1e-10*area tail bound holds at
/// t^2.  `noise` is a running rounding-error estimate of the evaluated sum
/// (machine epsilon times the absolute-value sum of the contributions),
/// used as the measurement floor of the fit residual.
struct HeatContentSample {
    double t = 0.0;
    double value = 0.0;
    double noise = 0.0;
    bool truncation_ok = true;
};

HeatContentSample heat_content(const SystemMatrices& sys, const EigenBasis& basis,
                               const Vector& psi_field, double t);

/// Least-squares fit of samples (t, f) to c0 + c1 t + c2 t^2 plus the
/// geometric targets.  `residual` is the RMS fit residual floored by the
/// samples' evaluation noise (a fit cannot certify structure below the
/// precision of its data).
struct HeatContentFit {
    std::vector<HeatContentSample> samples;
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    double target0 = 0.0, target1 = 0.0, target2 = 0.0;
    double residual = 0.0;
    // Standard errors of c0, c1, c2: the floored residual propagated through
    // the normal matrix, se_j = residual * sqrt((A^T A)^{-1}_jj).  Over a
    // narrow window the quadratic coefficient amplifies sample noise by
    // ~1/width^2, so "is c_j consistent with zero" must be judged against
    // se_j, not against the raw residual.
    double se0 = 0.0, se1 = 0.0, se2 = 0.0;
    double t_min = 0.0, t_max = 0.0;
    bool window_widened = false;   // t_min raised by the spectral-tail rule
    bool truncation_limited = false;
};

struct FitOptions {
    double t_min = 0.05;
    double t_max = 0.18;
    int samples = 41;
    // The window is widened until the beyond-K spectral tail at t_min^2,
    // bounded by Cauchy-Schwarz as e^{-lambda_K t^2} sqrt(area - sum alpha^2)
    // * ||psi||_M, drops below `tail_fraction` of the heat-content scale.
    // The tail biases the fitted slope by up to tail_fraction * scale / t_min,
    // so the budget must sit well below the coefficient accuracy sought.
    double tail_fraction = 1e-3;
    double t_max_stretch = 2.5;  // t_max >= stretch * t_min after widening
};

/// Pure quadratic least-squares fit of prepared samples (used by tests and
/// by heat_content_fit).  Throws on an ill-conditioned window.
void fit_short_time(const std::vector<HeatContentSample>& samples, HeatContentFit& fit);

/// Sample f over the (possibly widened) window and fit.  The mesh supplies
/// the curvature target; psi_field must be discrete-harmonic.
HeatContentFit heat_content_fit(const Mesh& mesh, const SystemMatrices& sys,
                                const EigenBasis& basis, const Vector& psi_field,
                                const FitOptions& opts = {});

/// Relative standard deviation of the discrete boundary curvature over the
/// outer loop: the geometric form of the curvature-constancy rigidity verdict.
struct CurvatureReport {
    double mean = 0.0;
    double rel_std = 0.0;
    double integral = 0.0;  // int kappa ds over the outer loop
};

CurvatureReport curvature_constancy_check(const Mesh& mesh);

/// Interior-surface overdetermination on the conforming interface circle:
/// for each tau the relative variation of the trace u(tau) over interface
/// vertices, and for each t the omega-side consistent-flux deviation across
/// the interface.  The omega-side flux uses the submatrices assembled from
/// triangles inside the interface only.
struct InteriorSurfaceReport {
    std::vector<double> taus, trace_variation;  // per tau
    std::vector<double> times, flux_deviation;  // per t
    std::vector<double> flux_mean;
    double max_trace_variation = 0.0;
    double max_flux_deviation = 0.0;
    double threshold = 0.0;
    bool trace_pass = false;
    bool flux_pass = false;
};

InteriorSurfaceReport interior_surface_check(const Mesh& mesh, const SystemMatrices& sys,
                                             const EigenBasis& basis,
                                             const std::vector<double>& times,
                                             const std::vector<double>& taus,
                                             double threshold);

}  // namespace heatrig
