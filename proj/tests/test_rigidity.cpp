#include "heatrig/rigidity.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace heatrig;

namespace {
constexpr double kPi = std::numbers::pi;

struct Setup {
    Mesh mesh;
    SystemMatrices sys;
    EigenBasis basis;
};

const Setup& disk() {
    static const Setup s = [] {
        Setup x{make_domain(DomainSpec::disk_spec(1.0, 0.1)), {}, {}};
        x.sys = assemble(x.mesh);
        x.basis = eigenbasis(x.sys, 80);
        return x;
    }();
    return s;
}
}  // namespace

TEST_CASE("torsion: direct vs spectral series, positivity") {
    const auto& s = disk();
    const TorsionPair pair = torsion(s.sys, s.basis, 40);
    CHECK(pair.positive_interior);
    CHECK(pair.discrepancy < 2e-2);
    // More series terms can only improve the M-norm discrepancy.
    const TorsionPair longer = torsion(s.sys, s.basis, 80);
    CHECK(longer.discrepancy <= pair.discrepancy + 1e-15);
    CHECK_THROWS_AS(torsion(s.sys, s.basis, 0), std::invalid_argument);
    CHECK_THROWS_AS(torsion(s.sys, s.basis, 81), std::invalid_argument);
}

TEST_CASE("torsion on the square: series converges by K = 50") {
    const std::vector<Vec2> square = {{0, 0}, {kPi, 0}, {kPi, kPi}, {0, kPi}};
    const Mesh mesh = make_domain(DomainSpec::polygon_spec(square, 0.25));
    const SystemMatrices sys = assemble(mesh);
    const EigenBasis basis = eigenbasis(sys, 50);
    const TorsionPair pair = torsion(sys, basis, 50);
    CHECK(pair.discrepancy < 1e-2);
    CHECK(pair.positive_interior);
}

TEST_CASE("serrin indicator: disk constant, mean -R/2") {
    const auto& s = disk();
    const FluxProfile prof = serrin_check(s.sys, torsion(s.sys, s.basis, 40));
    CHECK(prof.mean == doctest::Approx(-0.5).epsilon(1e-2));
    CHECK(prof.deviation < 2e-2);
}

TEST_CASE("heat content: spectral identity for psi = 1, harmonicity enforced") {
    const auto& s = disk();
    const Vector ones = Vector::Ones(s.sys.n());
    const HeatContentSample sample = heat_content(s.sys, s.basis, ones, 0.3);
    double expected = 0.0;
    for (int k = 0; k < s.basis.count(); ++k)
        expected += s.basis.alphas[k] * s.basis.alphas[k] *
                    std::exp(-s.basis.lambdas[k] * 0.3 * 0.3);
    CHECK(sample.value == doctest::Approx(expected).epsilon(1e-12));
    CHECK(sample.noise > 0.0);
    CHECK(sample.noise < 1e-10);

    Vector bad(s.sys.n());
    for (int v = 0; v < s.sys.n(); ++v) bad[v] = s.mesh.vertices[v].squaredNorm();
    CHECK_THROWS_AS(heat_content(s.sys, s.basis, bad, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(heat_content(s.sys, s.basis, ones, 0.0), std::invalid_argument);
}

TEST_CASE("quadratic fit: exact recovery and window conditioning guard") {
    std::vector<HeatContentSample> samples;
    for (int i = 0; i < 12; ++i) {
        HeatContentSample x;
        x.t = 0.05 + 0.01 * i;
        x.value = 2.0 - 3.0 * x.t + 0.5 * x.t * x.t;
        samples.push_back(x);
    }
    HeatContentFit fit;
    fit_short_time(samples, fit);
    CHECK(fit.c0 == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(fit.c1 == doctest::Approx(-3.0).epsilon(1e-9));
    CHECK(fit.c2 == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(fit.residual < 1e-12);
    // Standard errors scale with the residual and grow with coefficient
    // order: over a window of width 0.11 the quadratic coefficient amplifies
    // sample noise far more than the intercept does.
    CHECK(fit.se0 > 0.0);
    CHECK(fit.se1 > fit.se0);
    CHECK(fit.se2 > fit.se1);
    CHECK(fit.se2 < 1e-8);

    std::vector<HeatContentSample> narrow;
    for (int i = 0; i < 8; ++i) {
        HeatContentSample x;
        x.t = 0.1 + 1e-12 * i;
        x.value = 1.0;
        narrow.push_back(x);
    }
    HeatContentFit sink;
    CHECK_THROWS_AS(fit_short_time(narrow, sink), std::invalid_argument);

    std::vector<HeatContentSample> few(samples.begin(), samples.begin() + 3);
    CHECK_THROWS_AS(fit_short_time(few, sink), std::invalid_argument);
}

TEST_CASE("heat-content fit on the disk: coefficients near the geometric targets") {
    const auto& s = disk();
    const HeatContentFit fit =
        heat_content_fit(s.mesh, s.sys, s.basis, Vector::Ones(s.sys.n()));
    // Coarse mesh and an 80-mode basis: sanity-level tolerances (the
    // acceptance gate pins the tight ones at h = 0.05).
    CHECK(fit.c0 == doctest::Approx(kPi).epsilon(2e-2));
    CHECK(fit.c1 == doctest::Approx(-4.0 * std::sqrt(kPi)).epsilon(5e-2));
    CHECK(fit.c2 == doctest::Approx(kPi).epsilon(0.3));
    CHECK(fit.target0 == doctest::Approx(s.sys.area).epsilon(1e-12));
    CHECK(fit.target1 ==
          doctest::Approx(-(2.0 / std::sqrt(kPi)) * s.sys.boundary_length).epsilon(1e-12));
    CHECK(fit.target2 == doctest::Approx(kPi).epsilon(1e-10));  // half the turning sum
    // 80 modes cannot support t = 0.05: the tail rule must widen the window.
    CHECK(fit.window_widened);
    CHECK(fit.t_min > 0.05);
    CHECK(fit.t_max >= 2.5 * fit.t_min - 1e-12);
}

TEST_CASE("curvature constancy report separates disk from ellipse") {
    const CurvatureReport disk_rep = curvature_constancy_check(disk().mesh);
    CHECK(disk_rep.mean == doctest::Approx(1.0).epsilon(5e-3));
    CHECK(disk_rep.rel_std < 1e-10);
    CHECK(disk_rep.integral == doctest::Approx(2 * kPi).epsilon(1e-12));

    const CurvatureReport ell_rep =
        curvature_constancy_check(make_domain(DomainSpec::ellipse_spec(1.5, 1.0, 0.1)));
    CHECK(ell_rep.rel_std > 0.2);
    CHECK(ell_rep.integral == doctest::Approx(2 * kPi).epsilon(1e-12));
}

TEST_CASE("interior-surface check: concentric disks pass, missing interface throws") {
    const Mesh mesh = make_domain(DomainSpec::disk_spec(1.0, 0.1).with_interface(0.6));
    const SystemMatrices sys = assemble(mesh);
    const EigenBasis basis = eigenbasis(sys, 40);
    const std::vector<double> times = {0.1, 0.2, 0.4};
    const InteriorSurfaceReport rep =
        interior_surface_check(mesh, sys, basis, times, times, 0.05);
    CHECK(rep.trace_pass);
    CHECK(rep.flux_pass);
    CHECK(rep.max_trace_variation < 1e-3);
    CHECK(rep.trace_variation.size() == times.size());
    CHECK(rep.flux_deviation.size() == times.size());

    const auto& s = disk();
    CHECK_THROWS_AS(interior_surface_check(s.mesh, s.sys, s.basis, times, times, 0.05),
                    std::invalid_argument);
}

TEST_CASE("interior-surface check on the axisymmetric annulus is exact") {
    const Mesh mesh =
        make_domain(DomainSpec::annulus_spec(0.3, 1.0, 0.1).with_interface(0.6));
    const SystemMatrices sys = assemble(mesh);
    const EigenBasis basis = eigenbasis(sys, 40);
    const std::vector<double> times = {0.1, 0.3};
    const InteriorSurfaceReport rep =
        interior_surface_check(mesh, sys, basis, times, times, 0.02);
    CHECK(rep.trace_pass);
    CHECK(rep.flux_pass);
    CHECK(rep.max_trace_variation < 1e-10);
    CHECK(rep.max_flux_deviation < 1e-10);
}
