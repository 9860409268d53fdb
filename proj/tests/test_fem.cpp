#include "heatrig/fem.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace heatrig;

namespace {
constexpr double kPi = std::numbers::pi;

Mesh disk_mesh(double h = 0.1) { return make_domain(DomainSpec::disk_spec(1.0, h)); }
}  // namespace

TEST_CASE("assembly identities: K annihilates constants, M and B integrate 1") {
    const Mesh mesh = disk_mesh();
    const SystemMatrices sys = assemble(mesh);
    const int n = sys.n();

    const Vector ones = Vector::Ones(n);
    CHECK((sys.K * ones).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK(ones.dot(sys.M * ones) == doctest::Approx(mesh.area()).epsilon(1e-13));

    double perimeter = 0.0;
    const auto& loop = mesh.boundary_loops[0];
    for (size_t i = 0; i < loop.size(); ++i)
        perimeter +=
            (mesh.vertices[loop[(i + 1) % loop.size()]] - mesh.vertices[loop[i]]).norm();
    CHECK(ones.dot(sys.B * ones) == doctest::Approx(perimeter).epsilon(1e-13));
    CHECK(sys.area == doctest::Approx(mesh.area()).epsilon(1e-14));
    CHECK(sys.boundary_length == doctest::Approx(perimeter).epsilon(1e-13));
}

TEST_CASE("stiffness is exact on linear fields") {
    const Mesh mesh = disk_mesh();
    const SystemMatrices sys = assemble(mesh);
    Vector lin(sys.n());
    for (int v = 0; v < sys.n(); ++v)
        lin[v] = 3.0 * mesh.vertices[v].x() - 2.0 * mesh.vertices[v].y();
    // int |grad u|^2 = 13 * area for u = 3x - 2y.
    CHECK(lin.dot(sys.K * lin) == doctest::Approx(13.0 * mesh.area()).epsilon(1e-12));
}

TEST_CASE("torsion oracle: Poisson solve matches (1 - r^2)/4") {
    const Mesh mesh = disk_mesh(0.1);
    const SystemMatrices sys = assemble(mesh);
    const Vector phi = solve_dirichlet_poisson(sys, Vector::Ones(sys.n()));
    double max_err = 0.0;
    for (int v = 0; v < sys.n(); ++v) {
        const double exact = (1.0 - mesh.vertices[v].squaredNorm()) / 4.0;
        max_err = std::max(max_err, std::abs(phi[v] - exact));
    }
    CHECK(max_err < 2e-3);  // O(h^2) at h = 0.1
    for (int v : sys.boundary) CHECK(phi[v] == 0.0);
}

TEST_CASE("harmonic extension reproduces linear fields exactly") {
    const Mesh mesh = disk_mesh();
    const SystemMatrices sys = assemble(mesh);
    Vector trace(sys.boundary.size());
    for (size_t i = 0; i < sys.boundary.size(); ++i) {
        const Vec2& p = mesh.vertices[sys.boundary[i]];
        trace[i] = 1.0 + 2.0 * p.x() - 0.5 * p.y();
    }
    const Vector ext = discrete_harmonic_extension(sys, trace);
    for (int v = 0; v < sys.n(); ++v) {
        const Vec2& p = mesh.vertices[v];
        CHECK(ext[v] == doctest::Approx(1.0 + 2.0 * p.x() - 0.5 * p.y()).epsilon(1e-10));
    }
    // Round-trip of the boundary values.
    const Vector back = boundary_values(sys, ext);
    CHECK((back - trace).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("interior restriction and extension are inverse on interior dofs") {
    const SystemMatrices sys = assemble(disk_mesh());
    Vector full = Vector::LinSpaced(sys.n(), -1.0, 2.0);
    const Vector r = sys.restrict_interior(full);
    REQUIRE(r.size() == sys.n_interior());
    const Vector e = sys.extend_interior(r);
    for (int v : sys.interior) CHECK(e[v] == full[v]);
    for (int v : sys.boundary) CHECK(e[v] == 0.0);
}

TEST_CASE("assembly rejects degenerate triangles") {
    Mesh bad;
    bad.spec = DomainSpec::polygon_spec({{0, 0}, {1, 0}, {0, 1}}, 1.0);
    bad.vertices = {{0, 0}, {1, 0}, {0, 1}, {0.5, 0.5}};
    bad.triangles = {{0, 1, 2}, {3, 1, 2}};  // second has zero area (collinear)
    bad.vertex_param.assign(4, std::nan(""));
    CHECK_THROWS_AS(assemble(bad), std::runtime_error);
}

TEST_CASE("boundary mass supports only boundary vertices") {
    const SystemMatrices sys = assemble(disk_mesh());
    for (int v : sys.interior) {
        CHECK(sys.B.coeff(v, v) == 0.0);
        CHECK(sys.interior_index[v] >= 0);
    }
    for (int v : sys.boundary) {
        CHECK(sys.B.coeff(v, v) > 0.0);
        CHECK(sys.interior_index[v] == -1);
    }
}

TEST_CASE("coo export emits one line per stored entry") {
    const SystemMatrices sys = assemble(disk_mesh(0.3));
    std::ostringstream out;
    export_coo(sys.B_bnd(), out);
    int lines = 0;
    std::istringstream in(out.str());
    std::string line;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == sys.B_bnd().nonZeros());
}
