#include "heatrig/fem.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace heatrig {

namespace {

// Extract the principal submatrix indexed by `rows` (ascending or not; the
// result uses the order given).
SpMat submatrix(const SpMat& A, const std::vector<int>& rows) {
    const int n = A.rows();
    std::vector<int> pos(n, -1);
    for (size_t i = 0; i < rows.size(); ++i) pos[rows[i]] = static_cast<int>(i);
    std::vector<Eigen::Triplet<double>> trips;
    for (int col = 0; col < n; ++col) {
        if (pos[col] < 0) continue;
        for (SpMat::InnerIterator it(A, col); it; ++it) {
            if (pos[it.row()] < 0) continue;
            trips.emplace_back(pos[it.row()], pos[col], it.value());
        }
    }
    SpMat out(static_cast<int>(rows.size()), static_cast<int>(rows.size()));
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

}  // namespace

void SystemMatrices::ensure_blocks() const {
    if (cache_->have_blocks) return;
    cache_->K_int = submatrix(K, interior);
    cache_->M_int = submatrix(M, interior);
    cache_->B_bnd = submatrix(B, boundary);
    cache_->have_blocks = true;
}

const SpMat& SystemMatrices::K_int() const {
    ensure_blocks();
    return cache_->K_int;
}

const SpMat& SystemMatrices::M_int() const {
    ensure_blocks();
    return cache_->M_int;
}

const SpMat& SystemMatrices::B_bnd() const {
    ensure_blocks();
    return cache_->B_bnd;
}

const Eigen::SimplicialLDLT<SpMat>& SystemMatrices::K_int_solver() const {
    ensure_blocks();
    if (!cache_->K_fact) {
        cache_->K_fact = std::make_unique<Eigen::SimplicialLDLT<SpMat>>(cache_->K_int);
        if (cache_->K_fact->info() != Eigen::Success)
            throw std::runtime_error("fem: interior stiffness factorization failed");
    }
    return *cache_->K_fact;
}

const Eigen::SimplicialLDLT<SpMat>& SystemMatrices::B_bnd_solver() const {
    ensure_blocks();
    if (!cache_->B_fact) {
        cache_->B_fact = std::make_unique<Eigen::SimplicialLDLT<SpMat>>(cache_->B_bnd);
        if (cache_->B_fact->info() != Eigen::Success)
            throw std::runtime_error("fem: boundary mass factorization failed");
    }
    return *cache_->B_fact;
}

Vector SystemMatrices::restrict_interior(const Vector& full) const {
    Vector out(n_interior());
    for (int i = 0; i < n_interior(); ++i) out[i] = full[interior[i]];
    return out;
}

Vector SystemMatrices::extend_interior(const Vector& vi) const {
    Vector out = Vector::Zero(n());
    for (int i = 0; i < n_interior(); ++i) out[interior[i]] = vi[i];
    return out;
}

SystemMatrices assemble(const Mesh& mesh) {
    const int n = mesh.num_vertices();
    SystemMatrices sys;

    double mean_area = mesh.area() / std::max(1, mesh.num_triangles());

    std::vector<Eigen::Triplet<double>> kt, mt, bt;
    kt.reserve(mesh.num_triangles() * 9);
    mt.reserve(mesh.num_triangles() * 9);
    for (int ti = 0; ti < mesh.num_triangles(); ++ti) {
        const auto& t = mesh.triangles[ti];
        const Vec2& p0 = mesh.vertices[t[0]];
        const Vec2& p1 = mesh.vertices[t[1]];
        const Vec2& p2 = mesh.vertices[t[2]];
        const double area2 = (p1.x() - p0.x()) * (p2.y() - p0.y()) -
                             (p1.y() - p0.y()) * (p2.x() - p0.x());
        const double A = 0.5 * area2;
        if (!(A > 1e-14 * mean_area))
            throw std::runtime_error("fem: degenerate triangle " + std::to_string(ti));
        // Edge vectors opposite each vertex; grad(hat_i) = perp(e_i)/(2A),
        // hence K_e(i,j) = e_i.e_j / (4A).
        const Vec2 e0 = p2 - p1;
        const Vec2 e1 = p0 - p2;
        const Vec2 e2 = p1 - p0;
        const Vec2 e[3] = {e0, e1, e2};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                kt.emplace_back(t[i], t[j], e[i].dot(e[j]) / (4.0 * A));
                mt.emplace_back(t[i], t[j], (A / 12.0) * (i == j ? 2.0 : 1.0));
            }
    }

    double blen = 0.0;
    for (const auto& loop : mesh.boundary_loops) {
        const size_t nl = loop.size();
        for (size_t i = 0; i < nl; ++i) {
            const int u = loop[i];
            const int v = loop[(i + 1) % nl];
            const double L = (mesh.vertices[v] - mesh.vertices[u]).norm();
            blen += L;
            // P1 segment mass: L/6 * [[2,1],[1,2]].
            bt.emplace_back(u, u, L / 3.0);
            bt.emplace_back(v, v, L / 3.0);
            bt.emplace_back(u, v, L / 6.0);
            bt.emplace_back(v, u, L / 6.0);
        }
    }

    sys.K.resize(n, n);
    sys.M.resize(n, n);
    sys.B.resize(n, n);
    sys.K.setFromTriplets(kt.begin(), kt.end());
    sys.M.setFromTriplets(mt.begin(), mt.end());
    sys.B.setFromTriplets(bt.begin(), bt.end());

    sys.boundary = mesh.boundary_vertices();
    const auto mask = mesh.boundary_mask();
    sys.interior_index.assign(n, -1);
    for (int v = 0; v < n; ++v) {
        if (!mask[v]) {
            sys.interior_index[v] = static_cast<int>(sys.interior.size());
            sys.interior.push_back(v);
        }
    }
    sys.area = mesh.area();
    sys.boundary_length = blen;
    return sys;
}

Vector solve_dirichlet_poisson(const SystemMatrices& sys, const Vector& f) {
    if (f.size() != sys.n()) throw std::invalid_argument("poisson: f has wrong size");
    const Vector rhs_full = sys.M * f;
    const Vector rhs = sys.restrict_interior(rhs_full);
    const Vector vi = sys.K_int_solver().solve(rhs);
    const double rel = (sys.K_int() * vi - rhs).norm() / std::max(rhs.norm(), 1e-300);
    if (rel > 1e-10)
        throw std::runtime_error("poisson: solver residual above tolerance");
    return sys.extend_interior(vi);
}

Vector discrete_harmonic_extension(const SystemMatrices& sys, const Vector& psi_boundary) {
    if (psi_boundary.size() != static_cast<Eigen::Index>(sys.boundary.size()))
        throw std::invalid_argument("extension: psi has wrong size");
    // Full vector with psi on the boundary, zero inside; the interior values
    // solve K_int x = -(K psi_full)_int.
    Vector full = Vector::Zero(sys.n());
    for (size_t i = 0; i < sys.boundary.size(); ++i) full[sys.boundary[i]] = psi_boundary[i];
    const Vector rhs = -sys.restrict_interior(sys.K * full);
    const Vector xi = sys.K_int_solver().solve(rhs);
    for (int i = 0; i < sys.n_interior(); ++i) full[sys.interior[i]] = xi[i];
    return full;
}

Vector boundary_values(const SystemMatrices& sys, const Vector& full) {
    Vector out(sys.boundary.size());
    for (size_t i = 0; i < sys.boundary.size(); ++i) out[i] = full[sys.boundary[i]];
    return out;
}

void export_coo(const SpMat& mat, std::ostream& out) {
    char buf[96];
    for (int col = 0; col < mat.outerSize(); ++col)
        for (SpMat::InnerIterator it(mat, col); it; ++it) {
            std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", static_cast<int>(it.row()),
                          static_cast<int>(it.col()), it.value());
            out << buf;
        }
}

}  // namespace heatrig
