#include "heatrig/rigidity.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace heatrig {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

TorsionPair torsion(const SystemMatrices& sys, const EigenBasis& basis, int K) {
    if (K < 1 || K > basis.count()) throw std::invalid_argument("torsion: K out of range");
    TorsionPair pair;
    pair.K = K;
    pair.direct = solve_dirichlet_poisson(sys, Vector::Ones(sys.n()));

    Vector coeff = Vector::Zero(basis.count());
    for (int k = 0; k < K; ++k) coeff[k] = basis.alphas[k] / basis.lambdas[k];
    pair.spectral = basis.modes * coeff;

    const Vector d = pair.direct - pair.spectral;
    pair.discrepancy = std::sqrt(d.dot(sys.M * d) / pair.direct.dot(sys.M * pair.direct));

    pair.positive_interior = true;
    for (int v : sys.interior)
        if (!(pair.direct[v] > 0.0)) pair.positive_interior = false;
    return pair;
}

FluxProfile serrin_check(const SystemMatrices& sys, const TorsionPair& pair) {
    // -Laplace(Phi) = 1, so the nodal Laplacian field is -1.
    return flux_of_field(sys, pair.direct, -Vector::Ones(sys.n()));
}

namespace {

void require_discrete_harmonic(const SystemMatrices& sys, const Vector& psi) {
    if (psi.size() != sys.n()) throw std::invalid_argument("heat_content: psi size mismatch");
    const Vector r = sys.restrict_interior(sys.K * psi);
    const double scale = std::sqrt(psi.dot(sys.M * psi)) + std::sqrt(std::abs(psi.dot(sys.K * psi)));
    if (r.norm() > 1e-8 * std::max(scale, 1e-300))
        throw std::invalid_argument(
            "heat_content: psi is not discrete-harmonic (build it with "
            "discrete_harmonic_extension)");
}

}  // namespace

HeatContentSample heat_content(const SystemMatrices& sys, const EigenBasis& basis,
                               const Vector& psi_field, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("heat_content: t must be positive");
    require_discrete_harmonic(sys, psi_field);

    const Vector p = basis.modes.transpose() * (sys.M * psi_field);
    const double psi_norm = std::sqrt(psi_field.dot(sys.M * psi_field));

    HeatContentSample s;
    s.t = t;
    const double t2 = t * t;
    double abs_sum = 0.0;
    double alpha_sum = 0.0;
    for (int k = 0; k < basis.count(); ++k) {
        const double w = std::exp(-basis.lambdas[k] * t2);
        s.value += basis.alphas[k] * p[k] * w;
        abs_sum += std::abs(basis.alphas[k] * p[k]) * w;
        alpha_sum += std::abs(basis.alphas[k]) * w;
    }
    // Running rounding-error estimate of the evaluation: the summation error
    // plus the propagated error of the projections p_k = psi^T M phi_k, whose
    // absolute accuracy is O(eps * ||psi||_M) each.
    s.noise = kEps * (abs_sum + psi_norm * alpha_sum);
    s.truncation_ok = truncation_index(basis, t2, 1e-10 * basis.area).satisfied;
    return s;
}

void fit_short_time(const std::vector<HeatContentSample>& samples, HeatContentFit& fit) {
    const int n = static_cast<int>(samples.size());
    if (n < 6) throw std::invalid_argument("fit_short_time: need at least 6 samples");
    for (int i = 1; i < n; ++i)
        if (!(samples[i].t > samples[i - 1].t))
            throw std::invalid_argument("fit_short_time: times must be strictly increasing");

    Matrix A(n, 3);
    Vector f(n);
    double max_noise = 0.0;
    for (int i = 0; i < n; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = samples[i].t;
        A(i, 2) = samples[i].t * samples[i].t;
        f[i] = samples[i].value;
        max_noise = std::max(max_noise, samples[i].noise);
    }

    Eigen::ColPivHouseholderQR<Matrix> qr(A);
    // Condition estimate of the Vandermonde columns; a collapsed window makes
    // the quadratic fit meaningless.
    const double rmax = std::abs(qr.matrixR()(0, 0));
    const double rmin = std::abs(qr.matrixR()(2, 2));
    if (!(rmin > 1e-10 * rmax))
        throw std::invalid_argument("fit_short_time: window too narrow (ill-conditioned fit); widen [t_min, t_max]");

    const Vector c = qr.solve(f);
    fit.c0 = c[0];
    fit.c1 = c[1];
    fit.c2 = c[2];
    const double rms = std::sqrt((A * c - f).squaredNorm() / n);
    // Floor the reported residual by the data's own evaluation noise: a
    // least-squares residual below the measurement precision of the samples
    // carries no information.
    fit.residual = std::max(rms, max_noise);
    const Eigen::Matrix3d normal_inv = (A.transpose() * A).inverse();
    fit.se0 = fit.residual * std::sqrt(normal_inv(0, 0));
    fit.se1 = fit.residual * std::sqrt(normal_inv(1, 1));
    fit.se2 = fit.residual * std::sqrt(normal_inv(2, 2));
    fit.samples = samples;
    fit.t_min = samples.front().t;
    fit.t_max = samples.back().t;
}

HeatContentFit heat_content_fit(const Mesh& mesh, const SystemMatrices& sys,
                                const EigenBasis& basis, const Vector& psi_field,
                                const FitOptions& opts) {
    require_discrete_harmonic(sys, psi_field);
    HeatContentFit fit;

    // Geometric targets: int psi, -(2/sqrt(pi)) int_bnd psi,
    // (1/2) int_bnd kappa psi.
    const Vector psi_b = boundary_values(sys, psi_field);
    fit.target0 = (sys.M * psi_field).sum();
    fit.target1 = -(2.0 / std::sqrt(std::numbers::pi)) * (sys.B_bnd() * psi_b).sum();
    Vector kappa(sys.boundary.size());
    {
        int at = 0;
        for (size_t li = 0; li < mesh.boundary_loops.size(); ++li) {
            const auto k = boundary_curvature(mesh, static_cast<int>(li));
            for (double v : k) kappa[at++] = v;
        }
    }
    fit.target2 = 0.5 * kappa.dot(sys.B_bnd() * psi_b);

    // Window widening: Cauchy-Schwarz bounds the beyond-basis part of f(t^2)
    // by e^{-lambda_K t^2} sqrt(area - sum alpha_k^2) ||psi||_M; raise t_min
    // until that is below tail_fraction of the heat-content scale.
    const double psi_norm = std::sqrt(psi_field.dot(sys.M * psi_field));
    const double rem = std::max(0.0, basis.area - basis.alphas.squaredNorm());
    const double lamK = basis.lambdas[basis.count() - 1];
    const double scale =
        std::max(std::abs(fit.target0), 0.01 * psi_norm * std::sqrt(basis.area));
    const double tail_amp = std::sqrt(rem) * psi_norm;
    double t_min = opts.t_min;
    if (tail_amp > opts.tail_fraction * scale) {
        const double t_needed =
            std::sqrt(std::log(tail_amp / (opts.tail_fraction * scale)) / lamK);
        if (t_needed > t_min) {
            t_min = t_needed;
            fit.window_widened = true;
        }
    }
    const double t_max = std::max(opts.t_max, opts.t_max_stretch * t_min);

    std::vector<HeatContentSample> samples;
    samples.reserve(opts.samples);
    for (int i = 0; i < opts.samples; ++i) {
        const double t = t_min + (t_max - t_min) * i / (opts.samples - 1);
        samples.push_back(heat_content(sys, basis, psi_field, t));
        if (!samples.back().truncation_ok) fit.truncation_limited = true;
    }
    fit_short_time(samples, fit);
    fit.t_min = t_min;
    fit.t_max = t_max;
    return fit;
}

CurvatureReport curvature_constancy_check(const Mesh& mesh) {
    const auto kappa = boundary_curvature(mesh, 0);
    const auto& loop = mesh.boundary_loops[0];
    const int n = static_cast<int>(loop.size());

    CurvatureReport rep;
    double wsum = 0.0, mean = 0.0;
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) {
        const Vec2& prev = mesh.vertices[loop[(i + n - 1) % n]];
        const Vec2& cur = mesh.vertices[loop[i]];
        const Vec2& next = mesh.vertices[loop[(i + 1) % n]];
        w[i] = 0.5 * ((cur - prev).norm() + (next - cur).norm());
        wsum += w[i];
        mean += w[i] * kappa[i];
        rep.integral += w[i] * kappa[i];
    }
    mean /= wsum;
    double var = 0.0;
    for (int i = 0; i < n; ++i) var += w[i] * (kappa[i] - mean) * (kappa[i] - mean);
    var /= wsum;
    rep.mean = mean;
    rep.rel_std = std::sqrt(var) / std::abs(mean);
    return rep;
}

namespace {

// Omega-side assembly: P1 stiffness/mass over the triangles strictly inside
// the interface circle, plus the 1D mass matrix of the interface ring.
struct OmegaSide {
    SpMat K, M;          // over all mesh vertices (rows outside omega are zero)
    SpMat B_iface;       // interface-ring mass, indexed by ring position
    double iface_length = 0.0;
};

OmegaSide assemble_omega_side(const Mesh& mesh) {
    const double rho = mesh.spec.interface_radius;
    const int n = mesh.num_vertices();
    OmegaSide os;
    std::vector<Eigen::Triplet<double>> kt, mt, bt;
    for (const auto& t : mesh.triangles) {
        const Vec2& p0 = mesh.vertices[t[0]];
        const Vec2& p1 = mesh.vertices[t[1]];
        const Vec2& p2 = mesh.vertices[t[2]];
        const Vec2 centroid = (p0 + p1 + p2) / 3.0;
        if (centroid.norm() >= rho) continue;
        const double A = 0.5 * ((p1.x() - p0.x()) * (p2.y() - p0.y()) -
                                (p1.y() - p0.y()) * (p2.x() - p0.x()));
        const Vec2 e[3] = {p2 - p1, p0 - p2, p1 - p0};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                kt.emplace_back(t[i], t[j], e[i].dot(e[j]) / (4.0 * A));
                mt.emplace_back(t[i], t[j], (A / 12.0) * (i == j ? 2.0 : 1.0));
            }
    }
    os.K.resize(n, n);
    os.M.resize(n, n);
    os.K.setFromTriplets(kt.begin(), kt.end());
    os.M.setFromTriplets(mt.begin(), mt.end());

    const auto& ring = mesh.interface_loop;
    const int nr = static_cast<int>(ring.size());
    for (int i = 0; i < nr; ++i) {
        const int j = (i + 1) % nr;
        const double L = (mesh.vertices[ring[j]] - mesh.vertices[ring[i]]).norm();
        os.iface_length += L;
        bt.emplace_back(i, i, L / 3.0);
        bt.emplace_back(j, j, L / 3.0);
        bt.emplace_back(i, j, L / 6.0);
        bt.emplace_back(j, i, L / 6.0);
    }
    os.B_iface.resize(nr, nr);
    os.B_iface.setFromTriplets(bt.begin(), bt.end());
    return os;
}

}  // namespace

InteriorSurfaceReport interior_surface_check(const Mesh& mesh,
                                             const SystemMatrices& /*sys*/,
                                             const EigenBasis& basis,
                                             const std::vector<double>& times,
                                             const std::vector<double>& taus,
                                             double threshold) {
    if (mesh.interface_loop.empty())
        throw std::invalid_argument("interior_surface_check: mesh carries no interface circle");
    {
        const auto mask = mesh.boundary_mask();
        for (int v : mesh.interface_loop)
            if (mask[v])
                throw std::invalid_argument("interior_surface_check: interface touches the boundary");
    }

    const OmegaSide os = assemble_omega_side(mesh);
    const auto& ring = mesh.interface_loop;
    const int nr = static_cast<int>(ring.size());
    Eigen::SimplicialLDLT<SpMat> Bfact(os.B_iface);
    if (Bfact.info() != Eigen::Success)
        throw std::runtime_error("interior_surface_check: interface mass factorization failed");

    InteriorSurfaceReport rep;
    rep.threshold = threshold;
    rep.taus = taus;
    rep.times = times;

    auto ring_deviation = [&](const Vector& vals, double& mean_out) {
        const Vector Bv = os.B_iface * vals;
        mean_out = Bv.sum() / os.iface_length;
        const Vector centered = (vals.array() - mean_out).matrix();
        const double nc = std::sqrt(centered.dot(os.B_iface * centered));
        const double nv = std::sqrt(vals.dot(os.B_iface * vals));
        return nv > 0.0 ? nc / nv : 0.0;
    };

    for (double tau : taus) {
        const HeatState st = heat_solution(basis, tau);
        Vector trace(nr);
        for (int i = 0; i < nr; ++i) trace[i] = st.u[ring[i]];
        double mean = 0.0;
        rep.trace_variation.push_back(ring_deviation(trace, mean));
        rep.max_trace_variation = std::max(rep.max_trace_variation, rep.trace_variation.back());
    }

    for (double t : times) {
        const HeatState st = heat_solution(basis, t);
        // Omega-side consistent flux through the interface: ring rows of
        // K_omega u + M_omega du_dt, then density recovery on the ring.
        const Vector g_full = os.K * st.u + os.M * st.du_dt;
        Vector g(nr);
        for (int i = 0; i < nr; ++i) g[i] = g_full[ring[i]];
        const Vector q = Bfact.solve(g);
        double mean = 0.0;
        const double dev = ring_deviation(q, mean);
        rep.flux_deviation.push_back(dev);
        rep.flux_mean.push_back(mean);
        rep.max_flux_deviation = std::max(rep.max_flux_deviation, dev);
    }

    rep.trace_pass = rep.max_trace_variation <= threshold;
    rep.flux_pass = rep.max_flux_deviation <= threshold;
    return rep;
}

}  // namespace heatrig
