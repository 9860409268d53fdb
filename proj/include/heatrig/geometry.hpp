#pragma once

// Conforming triangular meshes for the planar domain families used by the
// heat-flow rigidity experiments: disk, ellipse, annulus, star-shaped radial
// perturbations r(th) = 1 + eps*cos(m*th), and polygons.  Smooth families are
// meshed with a structured graded polar construction whose vertices lie on the
// exact analytic boundary; polygons fall back to a small Delaunay mesher.
//
// The smooth simply-connected meshes are built with a 7-fold rotational
// symmetry (ring j carries 7j vertices).  Because the cyclic group C7 acts
// exactly on the vertex set, the discrete Dirichlet Laplacian commutes with
// the rotation and the double eigenvalues of the disk stay numerically
// degenerate (splits at roundoff level rather than O(h^2)), which keeps
// eigenvalue clustering well defined on coarse meshes.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace heatrig {

using Vec2 = Eigen::Vector2d;

enum class Family { disk, ellipse, annulus, radial, polygon };

/// Declarative description of a planar domain.  `target_h` is the nominal
/// edge length; `interface_radius > 0` asks the mesher to insert the circle
/// |x| = rho as a conforming internal interface (used by the interior-surface
/// overdetermination checks).
struct DomainSpec {
    Family family = Family::disk;
    double radius = 1.0;              // disk
    double a = 1.5, b = 1.0;          // ellipse semi-axes
    double inner = 0.3, outer = 1.0;  // annulus radii
    double eps = 0.1;                 // radial perturbation amplitude
    int m = 5;                        // radial angular frequency
    std::vector<Vec2> poly;           // polygon vertices (simple, any orientation)
    double target_h = 0.05;
    double interface_radius = 0.0;

    static DomainSpec disk_spec(double R, double h);
    static DomainSpec ellipse_spec(double a, double b, double h);
    static DomainSpec annulus_spec(double r, double R, double h);
    static DomainSpec radial_spec(double eps, int m, double h);
    static DomainSpec polygon_spec(std::vector<Vec2> vertices, double h);

    /// Copy of this spec with a conforming internal interface circle.
    DomainSpec with_interface(double rho) const;

    /// Throws std::invalid_argument when a shape parameter is out of range.
    void validate() const;

    /// Stable one-line description (used in CSV metadata and config hashes).
    std::string describe() const;
};

/// Conforming triangulation.  Triangles are positively oriented.  Boundary
/// loops are ordered with the domain on the left (outer loops CCW, hole
/// loops CW).  `vertex_param` stores the analytic curve parameter (polar
/// angle) for vertices on a boundary or interface curve of a smooth family,
/// NaN elsewhere; `refine` uses it to project new midpoints back onto the
/// exact curve.
struct Mesh {
    DomainSpec spec;
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::vector<int>> boundary_loops;
    std::vector<int> interface_loop;   // CCW circle |x| = spec.interface_radius, empty if none
    std::vector<double> vertex_param;
    int refinement_level = 0;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_triangles() const { return static_cast<int>(triangles.size()); }

    /// Boundary vertices in loop order (all loops concatenated).
    std::vector<int> boundary_vertices() const;
    /// True at vertices lying on a boundary loop.
    std::vector<bool> boundary_mask() const;
    /// Sum of signed triangle areas (positive for valid meshes).
    double area() const;
    /// Outward unit normal per vertex of loop `loop_index` (loop order).
    std::vector<Vec2> boundary_normals(int loop_index) const;
};

/// Build a mesh for the requested domain.  Boundary vertices lie on the exact
/// analytic boundary (to roundoff) for the smooth families.
Mesh make_domain(const DomainSpec& spec);

/// Uniform 1:4 refinement.  New boundary/interface midpoints are projected
/// onto the analytic curve when the spec describes a smooth family.
Mesh refine(const Mesh& mesh);

/// Discrete signed curvature at each vertex of a boundary loop: turning angle
/// divided by dual arclength.  Sign convention: unit disk gives +1.
std::vector<double> boundary_curvature(const Mesh& mesh, int loop_index);

/// Turning-angle sum of a loop (should be +-2*pi).
double loop_turning_sum(const Mesh& mesh, const std::vector<int>& loop);

/// Structural validation: positive triangle areas, manifold edges (boundary
/// edges in exactly one triangle, interior edges in exactly two), boundary
/// loops consistent with the triangulation.  Throws std::runtime_error on
/// violation.
void validate_mesh(const Mesh& mesh);

/// Plain-text serialization: header `nv nt nb`, nv lines `x y interior_flag`,
/// nt lines `i j k`, then nb blocks (loop size followed by vertex indices).
/// Reals carry 17 significant digits so doubles round-trip exactly.
void save_mesh(const Mesh& mesh, std::ostream& out);
Mesh load_mesh(std::istream& in);

}  // namespace heatrig
