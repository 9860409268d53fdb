#pragma once

// Piecewise-linear (P1) finite element assembly and Dirichlet solves.  The
// stiffness K, mass M and boundary-mass B matrices realize the bilinear forms
// int grad(u).grad(v), int u*v and int_boundary u*v; all element integrals
// are closed-form, so the matrices are exact for the given mesh.

#include "heatrig/geometry.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <iosfwd>
#include <memory>
#include <vector>

namespace heatrig {

using SpMat = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// Assembled P1 system for a mesh: full (unrestricted) K, M, B plus the
/// interior/boundary dof bookkeeping and lazily cached factorizations of the
/// interior stiffness block (used by Poisson solves, harmonic extensions and
/// the shift-inverted eigensolver) and of the boundary mass (flux recovery).
struct SystemMatrices {
    SpMat K;  // stiffness, n x n
    SpMat M;  // mass, n x n
    SpMat B;  // boundary mass, n x n, supported on boundary vertices

    std::vector<int> boundary;        // boundary vertices in loop order
    std::vector<int> interior;        // ascending interior vertex ids
    std::vector<int> interior_index;  // vertex -> position in `interior`, -1 for boundary
    double area = 0.0;
    double boundary_length = 0.0;

    int n() const { return static_cast<int>(interior_index.size()); }
    int n_interior() const { return static_cast<int>(interior.size()); }

    /// Interior principal submatrices of K and M.
    const SpMat& K_int() const;
    const SpMat& M_int() const;
    /// Boundary principal submatrix of B (in `boundary` order).
    const SpMat& B_bnd() const;
    /// Cholesky factorization of K_int (SPD for connected meshes).
    const Eigen::SimplicialLDLT<SpMat>& K_int_solver() const;
    /// Cholesky factorization of the boundary block of B.
    const Eigen::SimplicialLDLT<SpMat>& B_bnd_solver() const;

    /// Gather/scatter between full nodal vectors and interior-restricted ones.
    Vector restrict_interior(const Vector& full) const;
    Vector extend_interior(const Vector& interior_values) const;

  private:
    struct Cache {
        bool have_blocks = false;
        SpMat K_int, M_int, B_bnd;
        std::unique_ptr<Eigen::SimplicialLDLT<SpMat>> K_fact, B_fact;
    };
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
    void ensure_blocks() const;
};

/// Assemble K, M, B for a validated mesh.  Throws when a triangle is
/// degenerate (area below 1e-14 of the mean element area).
SystemMatrices assemble(const Mesh& mesh);

/// Solve -Laplace(v) = f with v = 0 on the boundary:
/// K_int v_int = (M f)_int.  Returns the full nodal field (zeros on the
/// boundary).
Vector solve_dirichlet_poisson(const SystemMatrices& sys, const Vector& f);

/// Discrete harmonic extension of boundary data psi (given per boundary
/// vertex, in sys.boundary order): K_int ext_int = -K_{int,bnd} psi.
/// Returns the full nodal field matching psi on the boundary.
Vector discrete_harmonic_extension(const SystemMatrices& sys, const Vector& psi_boundary);

/// Extract the boundary values of a full nodal field, in sys.boundary order.
Vector boundary_values(const SystemMatrices& sys, const Vector& full);

/// Debug export of a sparse matrix in `row col value` coordinate format.
void export_coo(const SpMat& mat, std::ostream& out);

}  // namespace heatrig
