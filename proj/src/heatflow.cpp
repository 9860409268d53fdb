#include "heatrig/heatflow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heatrig {

HeatState heat_solution(const EigenBasis& basis, double t, double tol) {
    if (!(t > 0.0)) throw std::invalid_argument("heat_solution: t must be positive");
    if (t < 1e-4)
        throw std::invalid_argument(
            "heat_solution: t below 1e-4 rejected (spectral truncation unbounded; use the "
            "heat-content path for the short-time regime)");

    const TruncationResult tr = truncation_index(basis, t, tol);
    HeatState state;
    state.t = t;
    state.K_used = tr.K;
    state.truncation_ok = tr.satisfied;

    Vector coeff = Vector::Zero(basis.count());
    for (int k = 0; k < tr.K; ++k)
        coeff[k] = basis.alphas[k] * std::exp(-basis.lambdas[k] * t);
    state.u = basis.modes * coeff;
    state.du_dt = basis.modes * (-basis.lambdas.array() * coeff.array()).matrix();

    // Parabolic maximum principle as a warning flag: 0 <= u <= 1 + slack.
    const double slack = 1e-2;
    state.max_principle_ok =
        state.u.minCoeff() >= -slack && state.u.maxCoeff() <= 1.0 + slack;
    return state;
}

double conormal_pairing(const SystemMatrices& sys, const Vector& field,
                        const Vector& laplacian_field, const Vector& psi_boundary) {
    if (field.size() != sys.n() || laplacian_field.size() != sys.n())
        throw std::invalid_argument("conormal_pairing: field size mismatch");
    for (int v : sys.boundary)
        if (std::abs(field[v]) > 1e-12)
            throw std::invalid_argument("conormal_pairing: field has nonzero boundary trace");
    const Vector ext = discrete_harmonic_extension(sys, psi_boundary);
    return ext.dot(sys.M * laplacian_field) + ext.dot(sys.K * field);
}

FluxProfile flux_of_field(const SystemMatrices& sys, const Vector& field, const Vector& w) {
    // Boundary rows of K*field + M*w form the consistent flux functional g;
    // solving B q = g recovers the density.
    const Vector g_full = sys.K * field + sys.M * w;
    const Vector g = boundary_values(sys, g_full);

    FluxProfile prof;
    prof.q = sys.B_bnd_solver().solve(g);
    prof.total = g.sum();  // 1^T B q = 1^T g by the solve
    prof.mean = prof.total / sys.boundary_length;
    const Vector centered = (prof.q.array() - prof.mean).matrix();
    const double norm_q = std::sqrt(prof.q.dot(sys.B_bnd() * prof.q));
    const double norm_c = std::sqrt(centered.dot(sys.B_bnd() * centered));
    prof.deviation = norm_q > 0.0 ? norm_c / norm_q : 0.0;
    return prof;
}

FluxProfile boundary_flux(const SystemMatrices& sys, const HeatState& state) {
    FluxProfile prof = flux_of_field(sys, state.u, state.du_dt);
    prof.t = state.t;
    prof.K_used = state.K_used;
    return prof;
}

OverdeterminationReport check_discrete_overdetermination(const SystemMatrices& sys,
                                                         const EigenBasis& basis,
                                                         const std::vector<double>& times,
                                                         double threshold, double tol) {
    if (times.empty())
        throw std::invalid_argument("check_discrete_overdetermination: empty time list");
    for (double t : times)
        if (!(t > 0.0))
            throw std::invalid_argument("check_discrete_overdetermination: times must be positive");

    OverdeterminationReport rep;
    rep.threshold = threshold;
    for (double t : times) {
        const HeatState state = heat_solution(basis, t, tol);
        rep.profiles.push_back(boundary_flux(sys, state));
        rep.max_deviation = std::max(rep.max_deviation, rep.profiles.back().deviation);
    }
    const auto [mn, mx] = std::minmax_element(times.begin(), times.end());
    rep.times_cluster_near_zero = *mx < 10.0 * *mn;
    rep.pass = rep.max_deviation <= threshold;
    return rep;
}

FluxProfile eigenspace_flux(const SystemMatrices& sys, const EigenBasis& basis, int group) {
    if (group < 0 || group >= static_cast<int>(basis.groups.size()))
        throw std::invalid_argument("eigenspace_flux: no such group");
    FluxProfile prof;
    const double mass = basis.group_mass(group);
    if (mass < 1e-6) {
        // Projection of 1 onto this eigenspace is numerically zero (angular
        // modes on symmetric domains); its flux is not meaningful.
        prof.near_null = true;
        prof.q = Vector::Zero(static_cast<int>(sys.boundary.size()));
        return prof;
    }
    const Vector phi = basis.group_projection(group);
    const double lam = basis.group_lambda(group);
    prof = flux_of_field(sys, phi, (-lam * phi.array()).matrix());
    return prof;
}

}  // namespace heatrig
