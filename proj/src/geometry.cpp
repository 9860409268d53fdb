#include "heatrig/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace heatrig {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Sector count of the structured polar meshes; ring j carries kSectors*j
// vertices so the mesh is invariant under rotation by 2*pi/kSectors.
constexpr int kSectors = 7;

double polygon_signed_area(const std::vector<Vec2>& p) {
    double s = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        const Vec2& u = p[i];
        const Vec2& v = p[(i + 1) % p.size()];
        s += u.x() * v.y() - u.y() * v.x();
    }
    return 0.5 * s;
}

double tri_signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

}  // namespace

// ---------------------------------------------------------------------------
// DomainSpec
// ---------------------------------------------------------------------------

DomainSpec DomainSpec::disk_spec(double R, double h) {
    DomainSpec s;
    s.family = Family::disk;
    s.radius = R;
    s.target_h = h;
    s.validate();
    return s;
}

DomainSpec DomainSpec::ellipse_spec(double a, double b, double h) {
    DomainSpec s;
    s.family = Family::ellipse;
    s.a = a;
    s.b = b;
    s.target_h = h;
    s.validate();
    return s;
}

DomainSpec DomainSpec::annulus_spec(double r, double R, double h) {
    DomainSpec s;
    s.family = Family::annulus;
    s.inner = r;
    s.outer = R;
    s.target_h = h;
    s.validate();
    return s;
}

DomainSpec DomainSpec::radial_spec(double eps, int m, double h) {
    DomainSpec s;
    s.family = Family::radial;
    s.eps = eps;
    s.m = m;
    s.target_h = h;
    s.validate();
    return s;
}

DomainSpec DomainSpec::polygon_spec(std::vector<Vec2> vertices, double h) {
    DomainSpec s;
    s.family = Family::polygon;
    s.poly = std::move(vertices);
    s.target_h = h;
    // Store CCW regardless of input orientation.
    if (polygon_signed_area(s.poly) < 0.0) std::reverse(s.poly.begin(), s.poly.end());
    s.validate();
    return s;
}

DomainSpec DomainSpec::with_interface(double rho) const {
    DomainSpec s = *this;
    s.interface_radius = rho;
    s.validate();
    return s;
}

void DomainSpec::validate() const {
    if (!(target_h > 0.0)) throw std::invalid_argument("target_h must be positive");
    switch (family) {
        case Family::disk:
            if (!(radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
            break;
        case Family::ellipse:
            if (!(a > 0.0) || !(b > 0.0))
                throw std::invalid_argument("ellipse semi-axes must be positive");
            break;
        case Family::annulus:
            if (!(inner > 0.0) || !(outer > inner))
                throw std::invalid_argument("annulus requires 0 < inner < outer");
            break;
        case Family::radial:
            if (!(std::abs(eps) < 1.0))
                throw std::invalid_argument("radial perturbation requires |eps| < 1");
            if (m < 0) throw std::invalid_argument("radial frequency m must be >= 0");
            break;
        case Family::polygon:
            if (poly.size() < 3) throw std::invalid_argument("polygon needs >= 3 vertices");
            if (std::abs(polygon_signed_area(poly)) < 1e-14)
                throw std::invalid_argument("polygon is degenerate");
            break;
    }
    if (interface_radius != 0.0) {
        if (!(interface_radius > 0.0))
            throw std::invalid_argument("interface radius must be positive");
        switch (family) {
            case Family::disk:
                if (!(interface_radius < radius))
                    throw std::invalid_argument("interface must be strictly inside the disk");
                break;
            case Family::ellipse:
                if (!(interface_radius < std::min(a, b)))
                    throw std::invalid_argument("interface must be strictly inside the ellipse");
                break;
            case Family::annulus:
                if (!(inner < interface_radius && interface_radius < outer))
                    throw std::invalid_argument("interface must lie strictly between the annulus radii");
                break;
            default:
                throw std::invalid_argument("interface circles are supported for disk, ellipse and annulus domains");
        }
    }
}

std::string DomainSpec::describe() const {
    char buf[256];
    switch (family) {
        case Family::disk:
            std::snprintf(buf, sizeof(buf), "disk(R=%g,h=%g", radius, target_h);
            break;
        case Family::ellipse:
            std::snprintf(buf, sizeof(buf), "ellipse(a=%g,b=%g,h=%g", a, b, target_h);
            break;
        case Family::annulus:
            std::snprintf(buf, sizeof(buf), "annulus(r=%g,R=%g,h=%g", inner, outer, target_h);
            break;
        case Family::radial:
            std::snprintf(buf, sizeof(buf), "radial(eps=%g,m=%d,h=%g", eps, m, target_h);
            break;
        case Family::polygon:
            std::snprintf(buf, sizeof(buf), "polygon(n=%zu,h=%g", poly.size(), target_h);
            break;
    }
    std::string out(buf);
    if (interface_radius > 0.0) {
        std::snprintf(buf, sizeof(buf), ",interface=%g", interface_radius);
        out += buf;
    }
    out += ")";
    return out;
}

// ---------------------------------------------------------------------------
// Mesh accessors
// ---------------------------------------------------------------------------

std::vector<int> Mesh::boundary_vertices() const {
    std::vector<int> out;
    for (const auto& loop : boundary_loops) out.insert(out.end(), loop.begin(), loop.end());
    return out;
}

std::vector<bool> Mesh::boundary_mask() const {
    std::vector<bool> mask(vertices.size(), false);
    for (const auto& loop : boundary_loops)
        for (int v : loop) mask[v] = true;
    return mask;
}

double Mesh::area() const {
    double s = 0.0;
    for (const auto& t : triangles)
        s += tri_signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
    return s;
}

std::vector<Vec2> Mesh::boundary_normals(int loop_index) const {
    const auto& loop = boundary_loops.at(loop_index);
    const int n = static_cast<int>(loop.size());
    std::vector<Vec2> normals(n);
    for (int i = 0; i < n; ++i) {
        const Vec2& prev = vertices[loop[(i + n - 1) % n]];
        const Vec2& next = vertices[loop[(i + 1) % n]];
        Vec2 tangent = next - prev;
        // Domain lies on the left of the loop, so the outward normal is the
        // tangent rotated clockwise by pi/2.
        Vec2 nrm(tangent.y(), -tangent.x());
        double len = nrm.norm();
        normals[i] = (len > 0.0) ? Vec2(nrm / len) : Vec2(0.0, 0.0);
    }
    return normals;
}

// ---------------------------------------------------------------------------
// Structured polar meshes
// ---------------------------------------------------------------------------

namespace {

// Triangulates the band between two concentric vertex rings with p and q
// vertices (indices A[0..p-1], B[0..q-1], both ordered CCW starting at angle
// 0).  The integer advance rule picks at every step the ring whose next
// vertex comes first in normalized angle, producing a deterministic,
// rotationally periodic zipper; ties resolve exactly in integer arithmetic.
void zip_rings(const std::vector<int>& A, const std::vector<int>& B,
               std::vector<std::array<int, 3>>& tris) {
    const std::int64_t p = static_cast<std::int64_t>(A.size());
    const std::int64_t q = static_cast<std::int64_t>(B.size());
    std::int64_t ia = 0, ib = 0;
    while (ia < p || ib < q) {
        const bool advance_inner =
            ia < p && (ib >= q || (ia + 1) * q <= (ib + 1) * p);
        if (advance_inner) {
            tris.push_back({A[ia % p], B[ib % q], A[(ia + 1) % p]});
            ++ia;
        } else {
            tris.push_back({A[ia % p], B[ib % q], B[(ib + 1) % q]});
            ++ib;
        }
    }
}

// A ring of the graded polar construction: `param[i]` is the polar angle of
// vertex i and `ids[i]` its mesh index.
struct Ring {
    std::vector<int> ids;
};

// Builds the simply-connected graded polar mesh: a center vertex, rings
// j=1..n with kSectors*j vertices, positioned by `place(j, theta)` which maps
// (ring index, angle) to a point.  Curve parameters stay NaN here; callers
// stamp them onto the rings that lie on analytic curves.
struct PolarBuild {
    std::vector<Vec2> vertices;
    std::vector<double> vparam;
    std::vector<std::array<int, 3>> triangles;
    std::vector<Ring> rings;  // rings[0] = innermost (j=1)
};

template <typename PlaceFn>
PolarBuild build_graded_polar(int n_rings, PlaceFn&& place) {
    PolarBuild out;
    out.vertices.push_back(place(0, 0.0));
    out.vparam.push_back(kNaN);
    for (int j = 1; j <= n_rings; ++j) {
        Ring ring;
        const int count = kSectors * j;
        for (int i = 0; i < count; ++i) {
            const double theta = 2.0 * kPi * i / count;
            ring.ids.push_back(static_cast<int>(out.vertices.size()));
            out.vertices.push_back(place(j, theta));
            out.vparam.push_back(kNaN);
        }
        out.rings.push_back(std::move(ring));
    }
    // Center fan.
    for (int i = 0; i < kSectors; ++i)
        out.triangles.push_back({0, out.rings[0].ids[i], out.rings[0].ids[(i + 1) % kSectors]});
    for (int j = 1; j < n_rings; ++j)
        zip_rings(out.rings[j - 1].ids, out.rings[j].ids, out.triangles);
    return out;
}

// Radius profile of the smooth simply-connected families at angle theta, for
// interpolating ring positions between the center (or an interface circle)
// and the analytic boundary.
double boundary_radius(const DomainSpec& spec, double theta) {
    switch (spec.family) {
        case Family::disk:
            return spec.radius;
        case Family::ellipse: {
            const double c = spec.b * std::cos(theta);
            const double s = spec.a * std::sin(theta);
            return spec.a * spec.b / std::hypot(c, s);
        }
        case Family::radial:
            return 1.0 + spec.eps * std::cos(spec.m * theta);
        default:
            throw std::logic_error("boundary_radius: not a smooth simply-connected family");
    }
}

// Effective mesh size in the reference (unit-ish) geometry so that mapped
// edge lengths stay near target_h.
double reference_h(const DomainSpec& spec) {
    switch (spec.family) {
        case Family::disk:
            return spec.target_h;
        case Family::ellipse:
            return spec.target_h;  // handled through boundary_radius directly
        case Family::radial:
            return spec.target_h / (1.0 + std::abs(spec.eps) * (1.0 + spec.m));
        default:
            return spec.target_h;
    }
}

double max_boundary_radius(const DomainSpec& spec) {
    switch (spec.family) {
        case Family::disk:
            return spec.radius;
        case Family::ellipse:
            return std::max(spec.a, spec.b);
        case Family::radial:
            return 1.0 + std::abs(spec.eps);
        default:
            return 1.0;
    }
}

Mesh build_smooth_simply_connected(const DomainSpec& spec) {
    // Ring radii are proportional to the boundary radius at each angle, so
    // every ring is a scaled copy of the boundary curve; with an interface
    // circle the inner region stays exactly circular up to |x| = rho and the
    // outer region blends the circle into the boundary curve.
    const double h = reference_h(spec);
    const double rmax = max_boundary_radius(spec);
    const bool with_iface = spec.interface_radius > 0.0;
    const double rho = spec.interface_radius;

    int n_inner = 0, n_outer = 0, n_rings = 0;
    if (with_iface) {
        n_inner = std::max(2, static_cast<int>(std::lround(rho / h)));
        n_outer = std::max(2, static_cast<int>(std::lround((rmax - rho) / h)));
        n_rings = n_inner + n_outer;
    } else {
        n_rings = std::max(2, static_cast<int>(std::lround(rmax / h)));
    }

    auto place = [&](int j, double theta) -> Vec2 {
        if (j == 0) return Vec2(0.0, 0.0);
        double r;
        if (!with_iface) {
            r = boundary_radius(spec, theta) * static_cast<double>(j) / n_rings;
        } else if (j <= n_inner) {
            r = rho * static_cast<double>(j) / n_inner;
        } else {
            const double s = static_cast<double>(j - n_inner) / n_outer;
            r = (1.0 - s) * rho + s * boundary_radius(spec, theta);
        }
        return Vec2(r * std::cos(theta), r * std::sin(theta));
    };

    PolarBuild pb = build_graded_polar(n_rings, place);

    Mesh mesh;
    mesh.spec = spec;
    mesh.vertices = std::move(pb.vertices);
    mesh.vertex_param = std::move(pb.vparam);
    mesh.triangles = std::move(pb.triangles);
    const Ring& outer = pb.rings.back();
    mesh.boundary_loops.push_back(outer.ids);
    for (size_t i = 0; i < outer.ids.size(); ++i)
        mesh.vertex_param[outer.ids[i]] = 2.0 * kPi * i / outer.ids.size();
    if (with_iface) {
        const Ring& iface = pb.rings[n_inner - 1];
        mesh.interface_loop = iface.ids;
        for (size_t i = 0; i < iface.ids.size(); ++i)
            mesh.vertex_param[iface.ids[i]] = 2.0 * kPi * i / iface.ids.size();
    }
    return mesh;
}

Mesh build_annulus(const DomainSpec& spec) {
    // Constant vertex count per ring; consecutive rings form quad strips that
    // are split along a fixed diagonal.  When an interface circle is
    // requested the ring radii are laid out piecewise-uniformly so that one
    // ring lands exactly on |x| = rho.
    const double r0 = spec.inner, r1 = spec.outer, h = spec.target_h;
    const double rmid = 0.5 * (r0 + r1);
    const int count = std::max(16, static_cast<int>(std::lround(2.0 * kPi * rmid / h)));
    const bool with_iface = spec.interface_radius > 0.0;

    std::vector<double> radii;
    radii.push_back(r0);
    if (with_iface) {
        const double rho = spec.interface_radius;
        const int n_in = std::max(1, static_cast<int>(std::lround((rho - r0) / h)));
        const int n_out = std::max(1, static_cast<int>(std::lround((r1 - rho) / h)));
        for (int j = 1; j <= n_in; ++j) radii.push_back(r0 + (rho - r0) * j / n_in);
        for (int j = 1; j <= n_out; ++j) radii.push_back(rho + (r1 - rho) * j / n_out);
    } else {
        const int n = std::max(2, static_cast<int>(std::lround((r1 - r0) / h)));
        for (int j = 1; j <= n; ++j) radii.push_back(r0 + (r1 - r0) * j / n);
    }
    const int n_rings = static_cast<int>(radii.size());

    Mesh mesh;
    mesh.spec = spec;
    std::vector<std::vector<int>> rings(n_rings);
    for (int j = 0; j < n_rings; ++j) {
        for (int i = 0; i < count; ++i) {
            const double theta = 2.0 * kPi * i / count;
            rings[j].push_back(mesh.num_vertices());
            mesh.vertices.emplace_back(radii[j] * std::cos(theta), radii[j] * std::sin(theta));
            mesh.vertex_param.push_back(kNaN);
        }
    }
    for (int j = 0; j + 1 < n_rings; ++j) {
        const auto& A = rings[j];
        const auto& B = rings[j + 1];
        for (int i = 0; i < count; ++i) {
            const int in = (i + 1) % count;
            mesh.triangles.push_back({A[i], B[i], B[in]});
            mesh.triangles.push_back({A[i], B[in], A[in]});
        }
    }
    // Outer loop CCW, inner loop CW (domain on the left of both).
    mesh.boundary_loops.push_back(rings.back());
    std::vector<int> inner_loop = rings.front();
    std::reverse(inner_loop.begin() + 1, inner_loop.end());
    mesh.boundary_loops.push_back(inner_loop);
    for (int j : {0, n_rings - 1})
        for (int i = 0; i < count; ++i)
            mesh.vertex_param[rings[j][i]] = 2.0 * kPi * i / count;
    if (with_iface) {
        int j_rho = -1;
        for (int j = 0; j < n_rings; ++j)
            if (std::abs(radii[j] - spec.interface_radius) < 1e-12) j_rho = j;
        if (j_rho < 0) throw std::logic_error("annulus interface ring not placed");
        mesh.interface_loop = rings[j_rho];
        for (int i = 0; i < count; ++i)
            mesh.vertex_param[rings[j_rho][i]] = 2.0 * kPi * i / count;
    }
    return mesh;
}

// ---------------------------------------------------------------------------
// Polygon fallback: Bowyer-Watson Delaunay on boundary subdivisions plus a
// hexagonal interior point lattice, then triangles outside the polygon are
// dropped.  Deterministic: the tiny lattice jitter is a fixed hash of the
// lattice coordinates (it breaks cocircular degeneracies of the regular
// lattice).
// ---------------------------------------------------------------------------

bool point_in_polygon(const std::vector<Vec2>& poly, const Vec2& p) {
    bool inside = false;
    const size_t n = poly.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double x = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
            if (p.x() < x) inside = !inside;
        }
    }
    return inside;
}

double dist_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double t = std::clamp(ab.squaredNorm() > 0 ? (p - a).dot(ab) / ab.squaredNorm() : 0.0, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

struct DelaunayTri {
    int v[3];
    Vec2 cc;      // circumcenter
    double rr;    // squared circumradius
};

DelaunayTri make_dtri(const std::vector<Vec2>& pts, int i, int j, int k) {
    DelaunayTri t;
    t.v[0] = i;
    t.v[1] = j;
    t.v[2] = k;
    const Vec2 &a = pts[i], &b = pts[j], &c = pts[k];
    const double d = 2.0 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
    const double b2 = (b - a).squaredNorm(), c2 = (c - a).squaredNorm();
    t.cc = a + Vec2(((c - a).y() * b2 - (b - a).y() * c2) / d,
                    ((b - a).x() * c2 - (c - a).x() * b2) / d);
    t.rr = (t.cc - a).squaredNorm();
    return t;
}

std::vector<std::array<int, 3>> bowyer_watson(const std::vector<Vec2>& input) {
    std::vector<Vec2> pts = input;
    // Super-triangle enclosing everything.
    Vec2 lo = pts[0], hi = pts[0];
    for (const Vec2& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const Vec2 mid = 0.5 * (lo + hi);
    const double span = std::max((hi - lo).maxCoeff(), 1e-6) * 64.0;
    const int s0 = static_cast<int>(pts.size());
    pts.emplace_back(mid + Vec2(-span, -span / 2));
    pts.emplace_back(mid + Vec2(span, -span / 2));
    pts.emplace_back(mid + Vec2(0.0, span));

    std::vector<DelaunayTri> tris;
    tris.push_back(make_dtri(pts, s0, s0 + 1, s0 + 2));
    for (int p = 0; p < s0; ++p) {
        std::vector<DelaunayTri> keep;
        std::map<std::pair<int, int>, int> edge_count;
        for (const auto& t : tris) {
            if ((pts[p] - t.cc).squaredNorm() <= t.rr * (1.0 + 1e-12)) {
                for (int e = 0; e < 3; ++e) {
                    int u = t.v[e], v = t.v[(e + 1) % 3];
                    if (u > v) std::swap(u, v);
                    edge_count[{u, v}]++;
                }
            } else {
                keep.push_back(t);
            }
        }
        // Hull of the cavity = edges seen exactly once.
        for (const auto& t : tris) {
            if (!((pts[p] - t.cc).squaredNorm() <= t.rr * (1.0 + 1e-12))) continue;
            for (int e = 0; e < 3; ++e) {
                const int u = t.v[e], v = t.v[(e + 1) % 3];
                int a = u, b = v;
                if (a > b) std::swap(a, b);
                if (edge_count[{a, b}] == 1) keep.push_back(make_dtri(pts, u, v, p));
            }
        }
        tris = std::move(keep);
    }
    std::vector<std::array<int, 3>> out;
    for (const auto& t : tris) {
        if (t.v[0] >= s0 || t.v[1] >= s0 || t.v[2] >= s0) continue;
        out.push_back({t.v[0], t.v[1], t.v[2]});
    }
    return out;
}

Mesh build_polygon(const DomainSpec& spec) {
    const double h = spec.target_h;
    Mesh mesh;
    mesh.spec = spec;

    // Boundary loop: subdivide every edge to spacing <= h.
    std::vector<int> loop;
    const size_t np = spec.poly.size();
    for (size_t e = 0; e < np; ++e) {
        const Vec2& a = spec.poly[e];
        const Vec2& b = spec.poly[(e + 1) % np];
        const int nseg = std::max(1, static_cast<int>(std::ceil((b - a).norm() / h)));
        for (int s = 0; s < nseg; ++s) {
            loop.push_back(mesh.num_vertices());
            mesh.vertices.push_back(a + (b - a) * (static_cast<double>(s) / nseg));
            mesh.vertex_param.push_back(kNaN);
        }
    }
    // Interior: hexagonal lattice clear of the boundary, with a deterministic
    // sub-roundoff-of-h jitter to avoid cocircular lattice degeneracies.
    Vec2 lo = spec.poly[0], hi = spec.poly[0];
    for (const Vec2& p : spec.poly) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double dy = h * std::sqrt(3.0) / 2.0;
    int row = 0;
    for (double y = lo.y() + dy; y < hi.y() - 0.25 * dy; y += dy, ++row) {
        const double x0 = lo.x() + ((row % 2) ? 0.75 * h : 0.25 * h);
        int col = 0;
        for (double x = x0; x < hi.x(); x += h, ++col) {
            std::uint64_t key = (static_cast<std::uint64_t>(row) << 32) ^ static_cast<std::uint64_t>(col);
            key = key * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull;
            const double jx = (static_cast<double>(key & 0xFFFF) / 65535.0 - 0.5) * 0.02 * h;
            const double jy = (static_cast<double>((key >> 16) & 0xFFFF) / 65535.0 - 0.5) * 0.02 * h;
            const Vec2 p(x + jx, y + jy);
            if (!point_in_polygon(spec.poly, p)) continue;
            double dmin = std::numeric_limits<double>::infinity();
            for (size_t e = 0; e < np; ++e)
                dmin = std::min(dmin, dist_to_segment(p, spec.poly[e], spec.poly[(e + 1) % np]));
            if (dmin < 0.6 * h) continue;
            mesh.vertices.push_back(p);
            mesh.vertex_param.push_back(kNaN);
        }
    }

    auto tris = bowyer_watson(mesh.vertices);
    for (const auto& t : tris) {
        Vec2 centroid = (mesh.vertices[t[0]] + mesh.vertices[t[1]] + mesh.vertices[t[2]]) / 3.0;
        if (!point_in_polygon(spec.poly, centroid)) continue;
        if (tri_signed_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]) > 0.0)
            mesh.triangles.push_back(t);
        else
            mesh.triangles.push_back({t[0], t[2], t[1]});
    }
    mesh.boundary_loops.push_back(std::move(loop));
    return mesh;
}

}  // namespace

Mesh make_domain(const DomainSpec& spec) {
    spec.validate();
    Mesh mesh;
    switch (spec.family) {
        case Family::disk:
        case Family::ellipse:
        case Family::radial:
            mesh = build_smooth_simply_connected(spec);
            break;
        case Family::annulus:
            mesh = build_annulus(spec);
            break;
        case Family::polygon:
            mesh = build_polygon(spec);
            break;
    }
    validate_mesh(mesh);
    return mesh;
}

// ---------------------------------------------------------------------------
// Refinement
// ---------------------------------------------------------------------------

namespace {

enum class CurveKind { none, outer, annulus_inner, interface_circle };

// All smooth curves are stored with the polar angle as parameter (every
// smooth family here is star-shaped about the origin), so the curve point is
// always r(theta)*(cos theta, sin theta).
Vec2 curve_point(const DomainSpec& spec, CurveKind kind, double theta) {
    switch (kind) {
        case CurveKind::outer: {
            const double r = (spec.family == Family::annulus) ? spec.outer
                                                              : boundary_radius(spec, theta);
            return Vec2(r * std::cos(theta), r * std::sin(theta));
        }
        case CurveKind::annulus_inner:
            return Vec2(spec.inner * std::cos(theta), spec.inner * std::sin(theta));
        case CurveKind::interface_circle:
            return Vec2(spec.interface_radius * std::cos(theta), spec.interface_radius * std::sin(theta));
        case CurveKind::none:
            break;
    }
    throw std::logic_error("curve_point: unsupported curve");
}

// The outer boundary of the ellipse stores the circle parameter theta of the
// map (a cos th, b sin th); for all other curves theta is the polar angle.
// Midpoint of two parameters with wraparound.
double param_midpoint(double t0, double t1) {
    double d = t1 - t0;
    while (d > kPi) d -= 2.0 * kPi;
    while (d < -kPi) d += 2.0 * kPi;
    double t = t0 + 0.5 * d;
    if (t < 0.0) t += 2.0 * kPi;
    if (t >= 2.0 * kPi) t -= 2.0 * kPi;
    return t;
}

}  // namespace

Mesh refine(const Mesh& mesh) {
    Mesh out;
    out.spec = mesh.spec;
    out.refinement_level = mesh.refinement_level + 1;
    out.vertices = mesh.vertices;
    out.vertex_param = mesh.vertex_param;

    const bool smooth = mesh.spec.family != Family::polygon;

    // Classify curve membership per vertex so edge midpoints can be projected.
    std::vector<CurveKind> kind(mesh.vertices.size(), CurveKind::none);
    if (smooth) {
        for (size_t li = 0; li < mesh.boundary_loops.size(); ++li) {
            const CurveKind k = (mesh.spec.family == Family::annulus && li == 1)
                                    ? CurveKind::annulus_inner
                                    : CurveKind::outer;
            for (int v : mesh.boundary_loops[li]) kind[v] = k;
        }
        for (int v : mesh.interface_loop) kind[v] = CurveKind::interface_circle;
    }

    std::map<std::pair<int, int>, int> midpoint;
    auto mid_of = [&](int u, int v) -> int {
        auto key = std::minmax(u, v);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        int id = out.num_vertices();
        Vec2 p = 0.5 * (mesh.vertices[u] + mesh.vertices[v]);
        double par = kNaN;
        if (smooth && kind[u] != CurveKind::none && kind[u] == kind[v]) {
            par = param_midpoint(mesh.vertex_param[u], mesh.vertex_param[v]);
            p = curve_point(mesh.spec, kind[u], par);
        }
        out.vertices.push_back(p);
        out.vertex_param.push_back(par);
        midpoint.emplace(key, id);
        return id;
    };

    // Guard: only project midpoints of edges that are actual consecutive loop
    // edges (two vertices of the same curve joined by a chord across the
    // domain must not be pulled to the curve).  Mark loop edges first.
    std::set<std::pair<int, int>> curve_edges;
    auto add_loop_edges = [&](const std::vector<int>& loop) {
        for (size_t i = 0; i < loop.size(); ++i) {
            auto key = std::minmax(loop[i], loop[(i + 1) % loop.size()]);
            curve_edges.insert(key);
        }
    };
    for (const auto& loop : mesh.boundary_loops) add_loop_edges(loop);
    if (!mesh.interface_loop.empty()) add_loop_edges(mesh.interface_loop);

    auto mid_of_guarded = [&](int u, int v) -> int {
        auto key = std::minmax(u, v);
        const bool on_curve = curve_edges.count(key) > 0;
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        if (!on_curve || !smooth || kind[u] == CurveKind::none || kind[u] != kind[v]) {
            int id = out.num_vertices();
            out.vertices.push_back(0.5 * (mesh.vertices[u] + mesh.vertices[v]));
            out.vertex_param.push_back(kNaN);
            midpoint.emplace(key, id);
            return id;
        }
        return mid_of(u, v);
    };

    for (const auto& t : mesh.triangles) {
        const int a = t[0], b = t[1], c = t[2];
        const int ab = mid_of_guarded(a, b);
        const int bc = mid_of_guarded(b, c);
        const int ca = mid_of_guarded(c, a);
        out.triangles.push_back({a, ab, ca});
        out.triangles.push_back({ab, b, bc});
        out.triangles.push_back({ca, bc, c});
        out.triangles.push_back({ab, bc, ca});
    }

    auto refine_loop = [&](const std::vector<int>& loop) {
        std::vector<int> next;
        for (size_t i = 0; i < loop.size(); ++i) {
            const int u = loop[i], v = loop[(i + 1) % loop.size()];
            next.push_back(u);
            next.push_back(midpoint.at(std::minmax(u, v)));
        }
        return next;
    };
    for (const auto& loop : mesh.boundary_loops) out.boundary_loops.push_back(refine_loop(loop));
    if (!mesh.interface_loop.empty()) out.interface_loop = refine_loop(mesh.interface_loop);

    validate_mesh(out);
    return out;
}

// ---------------------------------------------------------------------------
// Boundary geometry
// ---------------------------------------------------------------------------

double loop_turning_sum(const Mesh& mesh, const std::vector<int>& loop) {
    const int n = static_cast<int>(loop.size());
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2& prev = mesh.vertices[loop[(i + n - 1) % n]];
        const Vec2& cur = mesh.vertices[loop[i]];
        const Vec2& next = mesh.vertices[loop[(i + 1) % n]];
        const Vec2 e0 = cur - prev;
        const Vec2 e1 = next - cur;
        total += std::atan2(e0.x() * e1.y() - e0.y() * e1.x(), e0.dot(e1));
    }
    return total;
}

std::vector<double> boundary_curvature(const Mesh& mesh, int loop_index) {
    const auto& loop = mesh.boundary_loops.at(loop_index);
    const int n = static_cast<int>(loop.size());
    if (n < 4) throw std::invalid_argument("boundary_curvature: loop needs >= 4 vertices");
    std::vector<double> kappa(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const Vec2& prev = mesh.vertices[loop[(i + n - 1) % n]];
        const Vec2& cur = mesh.vertices[loop[i]];
        const Vec2& next = mesh.vertices[loop[(i + 1) % n]];
        const Vec2 e0 = cur - prev;
        const Vec2 e1 = next - cur;
        const double turn = std::atan2(e0.x() * e1.y() - e0.y() * e1.x(), e0.dot(e1));
        const double dual = 0.5 * (e0.norm() + e1.norm());
        kappa[i] = (dual > 0.0) ? turn / dual : 0.0;
    }
    return kappa;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

void validate_mesh(const Mesh& mesh) {
    const int nv = mesh.num_vertices();
    if (nv < 3 || mesh.triangles.empty()) throw std::runtime_error("mesh: too few vertices/triangles");
    if (mesh.vertex_param.size() != mesh.vertices.size())
        throw std::runtime_error("mesh: vertex_param size mismatch");

    for (const auto& t : mesh.triangles) {
        for (int v : t)
            if (v < 0 || v >= nv) throw std::runtime_error("mesh: triangle index out of range");
        if (tri_signed_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]) <= 0.0)
            throw std::runtime_error("mesh: non-positively-oriented triangle");
    }

    // Edge-manifold check.
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& t : mesh.triangles)
        for (int e = 0; e < 3; ++e)
            edge_count[std::minmax(t[e], t[(e + 1) % 3])]++;
    for (const auto& [edge, cnt] : edge_count)
        if (cnt > 2) throw std::runtime_error("mesh: non-manifold edge");

    std::set<std::pair<int, int>> loop_edges;
    std::vector<bool> on_loop(nv, false);
    for (const auto& loop : mesh.boundary_loops) {
        if (loop.size() < 3) throw std::runtime_error("mesh: boundary loop too short");
        for (size_t i = 0; i < loop.size(); ++i) {
            loop_edges.insert(std::minmax(loop[i], loop[(i + 1) % loop.size()]));
            if (on_loop[loop[i]]) throw std::runtime_error("mesh: boundary loops not disjoint");
            on_loop[loop[i]] = true;
        }
    }
    for (const auto& [edge, cnt] : edge_count) {
        const bool is_loop_edge = loop_edges.count(edge) > 0;
        if (cnt == 1 && !is_loop_edge)
            throw std::runtime_error("mesh: boundary edge missing from loops");
        if (cnt == 2 && is_loop_edge)
            throw std::runtime_error("mesh: loop edge is interior");
    }

    // Interface edges must be interior (each in exactly two triangles).
    if (!mesh.interface_loop.empty()) {
        const auto& il = mesh.interface_loop;
        for (size_t i = 0; i < il.size(); ++i) {
            auto e = std::minmax(il[i], il[(i + 1) % il.size()]);
            auto it = edge_count.find(e);
            if (it == edge_count.end() || it->second != 2)
                throw std::runtime_error("mesh: interface loop edge not conforming");
        }
    }
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

void save_mesh(const Mesh& mesh, std::ostream& out) {
    const auto mask = mesh.boundary_mask();
    out << mesh.num_vertices() << ' ' << mesh.num_triangles() << ' '
        << mesh.boundary_loops.size() << '\n';
    char buf[80];
    for (int i = 0; i < mesh.num_vertices(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %d\n", mesh.vertices[i].x(),
                      mesh.vertices[i].y(), mask[i] ? 0 : 1);
        out << buf;
    }
    for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    for (const auto& loop : mesh.boundary_loops) {
        out << loop.size() << '\n';
        for (size_t i = 0; i < loop.size(); ++i)
            out << loop[i] << (i + 1 == loop.size() ? '\n' : ' ');
    }
}

Mesh load_mesh(std::istream& in) {
    Mesh mesh;
    int nv = 0, nt = 0, nb = 0;
    if (!(in >> nv >> nt >> nb)) throw std::runtime_error("mesh load: bad header");
    mesh.vertices.resize(nv);
    mesh.vertex_param.assign(nv, kNaN);
    for (int i = 0; i < nv; ++i) {
        int flag = 0;
        if (!(in >> mesh.vertices[i].x() >> mesh.vertices[i].y() >> flag))
            throw std::runtime_error("mesh load: bad vertex line");
    }
    mesh.triangles.resize(nt);
    for (int i = 0; i < nt; ++i)
        if (!(in >> mesh.triangles[i][0] >> mesh.triangles[i][1] >> mesh.triangles[i][2]))
            throw std::runtime_error("mesh load: bad triangle line");
    for (int l = 0; l < nb; ++l) {
        size_t len = 0;
        if (!(in >> len)) throw std::runtime_error("mesh load: bad loop header");
        std::vector<int> loop(len);
        for (size_t i = 0; i < len; ++i)
            if (!(in >> loop[i])) throw std::runtime_error("mesh load: bad loop entry");
        mesh.boundary_loops.push_back(std::move(loop));
    }
    // Loaded meshes carry no analytic spec; mark as polygon so refine() uses
    // plain midpoints.
    mesh.spec.family = Family::polygon;
    mesh.spec.poly = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
    validate_mesh(mesh);
    return mesh;
}

}  // namespace heatrig
