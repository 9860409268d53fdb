#pragma once

// One-dimensional reduction of the heat problem on rotationally invariant
// subsets of the unit sphere S^2: geodesic caps {theta < theta0} and bands
// {theta1 < theta < theta2}.  Initial data 1 is rotation-invariant, so the
// flow lives entirely in the axisymmetric (m = 0) sector and reduces to the
// weighted Sturm-Liouville problem
//
//     -(sin theta)^{-1} d/dtheta ( sin theta  d phi/dtheta ) = lambda phi
//
// with Dirichlet conditions at band edges and the natural (removable-
// singularity) condition at the pole for caps.  The module verifies the
// constant-flow property: caps and equator-symmetric bands drive equal flux
// densities through their boundary circles for all time, asymmetric bands
// do not.

#include "heatrig/spectral.hpp"

#include <vector>

namespace heatrig::sphereband {

struct BandSpec {
    double theta1 = 0.0;      // lower colatitude (0 for caps: the pole)
    double theta2 = 0.0;      // upper colatitude (Dirichlet edge)
    bool cap = false;         // true: {0 <= theta < theta2}, pole is free
    int n_points = 2000;      // nodes on the uniform theta-grid

    // Equator symmetry theta1 + theta2 == pi within 1e-12.
    bool symmetric() const;
    void validate() const;    // throws std::invalid_argument on bad ranges
};

BandSpec cap_spec(double theta0, int n_points = 2000);
BandSpec band_spec(double theta1, double theta2, int n_points = 2000);

// Assembled 1D weighted P1 system on the theta-grid.
struct BandSystem {
    BandSpec spec;
    Vector thetas;            // n_points grid nodes, uniform
    SpMat K;                  // weighted stiffness  int phi' psi' sin
    SpMat M;                  // weighted mass       int phi  psi  sin
    std::vector<int> boundary;  // Dirichlet node indices (1 for caps, 2 for bands)
    std::vector<int> free_nodes;
    double band_mass = 0.0;   // int sin theta dtheta = cos theta1 - cos theta2
};

BandSystem band_system(const BandSpec& spec);

struct BandEigenBasis {
    BandSpec spec;
    Vector lambdas;           // ascending
    Matrix modes;             // full nodal columns, zeros at Dirichlet nodes,
                              // orthonormal in the sin-weighted mass product
    Vector alphas;            // 1^T M phi_k = int phi_k sin theta dtheta
    Vector residuals;         // ||K phi - lambda M phi|| / lambda ||M phi||
    double band_mass = 0.0;

    int count() const { return static_cast<int>(lambdas.size()); }
};

// Smallest `count` eigenpairs of the reduced problem.  Orthonormality and
// eigen-residuals are verified to 1e-8 before returning.
BandEigenBasis band_eigenbasis(const BandSpec& spec, int count,
                               double residual_tol = 1e-10);

// Axisymmetric heat solution u(theta, t) with u(.,0) = 1, as full nodal values.
Vector band_heat(const BandEigenBasis& basis, double t);

// Outward flux densities at the boundary circles at time t, recovered from
// the weighted stiffness residual rows: q = (K u + M du/dt)[edge] / sin(edge).
// For caps only `q2` (the single boundary circle) is meaningful and q1 = q2.
struct EdgeFlux {
    double q1 = 0.0;          // circle theta = theta1 (bands only)
    double q2 = 0.0;          // circle theta = theta2
};

EdgeFlux band_flux(const BandSystem& sys, const BandEigenBasis& basis, double t);

// Constant-flow functional over a time grid.  The canonical zero-average test
// function on the two boundary circles is +1 on C1 and -|C1|/|C2| on C2, so
// F(t) = |C1| (q1 - q2); the scale-free gap is |q1 - q2| / max(|q1|, |q2|).
// Caps carry a single circle, where every zero-average function has zero
// axisymmetric component, so F vanishes identically.
struct ConstantFlowReport {
    BandSpec spec;
    std::vector<double> times;
    std::vector<double> q1, q2;
    std::vector<double> F;        // weighted functional |C1| (q1 - q2)
    std::vector<double> rel_gap;  // |q1 - q2| / max(|q1|, |q2|)
    double max_rel_gap = 0.0;
    double tol = 1e-6;            // grid-calibrated noise level
    bool pass = false;            // all rel_gap <= tol
};

ConstantFlowReport constant_flow_report(const BandSpec& spec,
                                        const std::vector<double>& times,
                                        int mode_count = 80, double tol = 1e-6);

}  // namespace heatrig::sphereband
