#include "heatrig/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace heatrig {

namespace {

// Deterministic start vector for the Lanczos iteration (fixed seed: the
// eigensolve must be reproducible run to run).
Vector lanczos_start(int n) {
    std::mt19937_64 rng(0x5eed5eedULL);
    Vector v(n);
    for (int i = 0; i < n; ++i)
        v[i] = 2.0 * (static_cast<double>(rng()) / static_cast<double>(UINT64_MAX)) - 1.0;
    return v;
}

}  // namespace

void lanczos_smallest(const SpMat& A, const SpMat& B, int count, double residual_tol,
                      Vector& values, Matrix& vecs, int max_iter) {
    const int n = static_cast<int>(A.rows());
    if (count < 1 || count > n) throw std::invalid_argument("lanczos: bad count");

    Eigen::SimplicialLDLT<SpMat> Afact(A);
    if (Afact.info() != Eigen::Success) throw std::runtime_error("lanczos: factorization failed");

    // Lanczos on the operator Op(v) = A^{-1} B v, self-adjoint in the B inner
    // product; Ritz values mu of Op are 1/lambda, so the largest mu give the
    // smallest lambda.  Full reorthogonalization keeps the basis B-orthonormal
    // to roundoff, which the degenerate eigenvalue clusters need.  The loop
    // exits as soon as the requested pairs converge, so the cap is generous.
    const int ncv_max =
        std::min(n, max_iter > 0 ? max_iter : std::max(4 * count + 160, 300));

    std::vector<Vector> V;          // B-orthonormal Lanczos vectors
    std::vector<double> alpha, beta;  // tridiagonal entries
    V.reserve(ncv_max + 1);

    Vector v = lanczos_start(n);
    {
        const double nb = std::sqrt(v.dot(B * v));
        v /= nb;
    }
    V.push_back(v);

    auto b_reorthogonalize = [&](Vector& w) {
        // Two passes of classical Gram-Schmidt against all stored vectors.
        for (int pass = 0; pass < 2; ++pass) {
            const Vector Bw = B * w;
            for (const Vector& q : V) w -= q.dot(Bw) * q;
        }
    };

    int converged_at = -1;
    Eigen::SelfAdjointEigenSolver<Matrix> tri_solver;

    for (int j = 0; j < ncv_max; ++j) {
        Vector w = Afact.solve(B * V[j]);
        const double a = w.dot(B * V[j]);
        w -= a * V[j];
        if (j > 0) w -= beta[j - 1] * V[j - 1];
        b_reorthogonalize(w);
        const double b = std::sqrt(std::max(0.0, w.dot(B * w)));
        alpha.push_back(a);

        const int m = j + 1;
        const bool basis_exhausted = b < 1e-14;

        // Convergence test every few steps once enough vectors exist.
        if (m >= count && (m % 10 == 0 || basis_exhausted || m == ncv_max)) {
            Matrix T = Matrix::Zero(m, m);
            for (int i = 0; i < m; ++i) T(i, i) = alpha[i];
            for (int i = 0; i + 1 < m; ++i) {
                T(i, i + 1) = beta[i];
                T(i + 1, i) = beta[i];
            }
            tri_solver.compute(T);
            // Ritz residual for Op: ||Op x - mu x||_B = |b * s_last|; convert
            // to a pencil-relative criterion via lambda = 1/mu.
            const auto& mu = tri_solver.eigenvalues();  // ascending
            bool ok = true;
            for (int k = 0; k < count; ++k) {
                const int idx = m - 1 - k;  // largest mu
                const double s_last = tri_solver.eigenvectors()(m - 1, idx);
                const double rel_res = std::abs(b * s_last) / std::max(std::abs(mu[idx]), 1e-300);
                if (rel_res > residual_tol) {
                    ok = false;
                    break;
                }
            }
            if (ok || basis_exhausted) {
                converged_at = m;
                break;
            }
        }
        if (basis_exhausted) {
            converged_at = m;
            break;
        }
        beta.push_back(b);
        V.push_back(w / b);
    }

    if (converged_at < 0) converged_at = static_cast<int>(alpha.size());
    const int m = converged_at;
    if (m < count)
        throw std::runtime_error("lanczos: Krylov space exhausted before finding requested modes");

    Matrix T = Matrix::Zero(m, m);
    for (int i = 0; i < m; ++i) T(i, i) = alpha[i];
    for (int i = 0; i + 1 < m; ++i) {
        T(i, i + 1) = beta[i];
        T(i + 1, i) = beta[i];
    }
    tri_solver.compute(T);

    values.resize(count);
    vecs.resize(n, count);
    for (int k = 0; k < count; ++k) {
        const int idx = m - 1 - k;  // largest mu = smallest lambda
        const double mu = tri_solver.eigenvalues()[idx];
        if (!(mu > 0.0)) throw std::runtime_error("lanczos: nonpositive Ritz value");
        values[k] = 1.0 / mu;
        Vector x = Vector::Zero(n);
        for (int i = 0; i < m; ++i) x += tri_solver.eigenvectors()(i, idx) * V[i];
        // Normalize in B (the Ritz combination is B-orthonormal to roundoff
        // already; renormalize for cleanliness).
        x /= std::sqrt(x.dot(B * x));
        vecs.col(k) = x;
    }

    // Verify achieved pencil residuals; refuse to return silently bad pairs.
    // The hard gate is 1e-8 relative (the eigenbasis contract); the in-loop
    // criterion drives residuals far below it.
    std::string bad;
    for (int k = 0; k < count; ++k) {
        const Vector r = A * vecs.col(k) - values[k] * (B * vecs.col(k));
        const double rel = r.norm() / (values[k] * (B * vecs.col(k)).norm());
        if (rel > std::max(1e-8, 100.0 * residual_tol)) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), " (%d: %.2e)", k, rel);
            bad += buf;
        }
    }
    if (!bad.empty())
        throw std::runtime_error("lanczos: residuals above tolerance" + bad);
}

namespace {

void dense_smallest(const SpMat& A, const SpMat& B, int count, Vector& values, Matrix& vecs) {
    Matrix Ad = Matrix(A);
    Matrix Bd = Matrix(B);
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(Ad, Bd);
    if (solver.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
    values = solver.eigenvalues().head(count);
    vecs = solver.eigenvectors().leftCols(count);
    // Eigen returns B-normalized vectors already; tidy up anyway.
    for (int k = 0; k < count; ++k) vecs.col(k) /= std::sqrt(vecs.col(k).dot(B * vecs.col(k)));
}

}  // namespace

Vector EigenBasis::group_projection(int g) const {
    const auto& grp = groups.at(g);
    Vector phi = Vector::Zero(modes.rows());
    for (int j : grp) phi += alphas[j] * modes.col(j);
    return phi;
}

double EigenBasis::group_lambda(int g) const {
    const auto& grp = groups.at(g);
    double s = 0.0;
    for (int j : grp) s += lambdas[j];
    return s / static_cast<double>(grp.size());
}

double EigenBasis::group_mass(int g) const {
    const auto& grp = groups.at(g);
    double s = 0.0;
    for (int j : grp) s += alphas[j] * alphas[j];
    return std::sqrt(s);
}

EigenBasis eigenbasis(const SystemMatrices& sys, int count, const SpectralOptions& opts) {
    const int ni = sys.n_interior();
    if (count < 1 || count > ni)
        throw std::invalid_argument("eigenbasis: count out of range");

    Vector values;
    Matrix vecs_int;
    if (ni <= opts.dense_threshold)
        dense_smallest(sys.K_int(), sys.M_int(), count, values, vecs_int);
    else
        lanczos_smallest(sys.K_int(), sys.M_int(), count, opts.residual_tol, values, vecs_int,
                         opts.max_lanczos);

    EigenBasis basis;
    basis.lambdas = values;
    basis.area = sys.area;
    basis.li_yau_c = opts.li_yau_c > 0.0 ? opts.li_yau_c : 2.0 * std::numbers::pi / sys.area;

    // Scatter interior eigenvectors to full nodal fields (exact zeros on the
    // boundary) and fix a deterministic sign: first significant entry > 0.
    basis.modes = Matrix::Zero(sys.n(), count);
    for (int k = 0; k < count; ++k) {
        Vector full = Vector::Zero(sys.n());
        for (int i = 0; i < ni; ++i) full[sys.interior[i]] = vecs_int(i, k);
        for (int i = 0; i < full.size(); ++i) {
            if (std::abs(full[i]) > 1e-8) {
                if (full[i] < 0) full = -full;
                break;
            }
        }
        basis.modes.col(k) = full;
    }

    basis.alphas.resize(count);
    basis.residuals.resize(count);
    for (int k = 0; k < count; ++k) {
        basis.alphas[k] = (sys.M * basis.modes.col(k)).sum();
        const Vector Mi = sys.M_int() * vecs_int.col(k);
        const Vector r = sys.K_int() * vecs_int.col(k) - values[k] * Mi;
        basis.residuals[k] = r.norm() / (values[k] * Mi.norm());
    }

    // Bessel-Parseval sanity: the expansion of 1 cannot exceed the area.
    const double sum_alpha2 = basis.alphas.squaredNorm();
    if (sum_alpha2 > basis.area * (1.0 + 1e-8))
        throw std::runtime_error("eigenbasis: Bessel inequality violated");

    // Cluster nearly equal eigenvalues.
    basis.groups.push_back({0});
    for (int k = 1; k < count; ++k) {
        const double prev = basis.lambdas[basis.groups.back().front()];
        if (basis.lambdas[k] <= prev * (1.0 + opts.cluster_rtol))
            basis.groups.back().push_back(k);
        else
            basis.groups.push_back({k});
    }

    // Li-Yau-type growth sanity check (2D: lambda_k >= C k).
    for (int k = 0; k < count; ++k) {
        if (basis.lambdas[k] < basis.li_yau_c * (k + 1) * (1.0 - 1e-9))
            throw std::runtime_error("eigenbasis: eigenvalue growth below Li-Yau bound");
    }

    return basis;
}

TruncationResult truncation_index(const EigenBasis& basis, double t, double tol) {
    if (!(t > 0.0)) throw std::invalid_argument("truncation_index: t must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("truncation_index: tol must be positive");
    const int n = basis.count();

    // Per-mode tail terms |alpha_k| e^{-lambda_k t} ||phi_k||_inf, plus a
    // geometric extension beyond the computed modes using lambda_k >= C k:
    // sum_{k > n} sqrt(area) * Cinf * e^{-C k t} <= A * e^{-C (n+1) t} / (1 - e^{-C t})
    // with the crude amplitude surrogate A = sqrt(area) * max_k ||phi_k||_inf.
    Vector terms(n);
    double max_inf = 0.0;
    for (int k = 0; k < n; ++k) {
        const double inf_norm = basis.modes.col(k).cwiseAbs().maxCoeff();
        max_inf = std::max(max_inf, inf_norm);
        terms[k] = std::abs(basis.alphas[k]) * std::exp(-basis.lambdas[k] * t) * inf_norm;
    }
    const double C = basis.li_yau_c;
    const double decay = std::exp(-C * t);
    const double beyond = std::sqrt(basis.area) * max_inf *
                          std::exp(-std::max(C * (n + 1), basis.lambdas[n - 1]) * t) /
                          (1.0 - decay);

    // tail(K) = sum of terms with index >= K plus the beyond-basis bound;
    // find the smallest K in [1, n] with tail(K) <= tol.
    TruncationResult res;
    double tail = beyond;
    if (tail <= tol) {
        res.K = n;
        res.bound = tail;
        res.satisfied = true;
        for (int K = n - 1; K >= 1; --K) {
            if (tail + terms[K] > tol) break;
            tail += terms[K];
            res.K = K;
            res.bound = tail;
        }
    } else {
        res.K = n;
        res.bound = tail;
        res.satisfied = false;
    }
    return res;
}

void export_eigenbasis(const EigenBasis& basis, std::ostream& out) {
    char buf[96];
    for (int k = 0; k < basis.count(); ++k) {
        std::snprintf(buf, sizeof(buf), "%d %.17g %.17g\n", k, basis.lambdas[k], basis.alphas[k]);
        out << buf;
        for (int i = 0; i < basis.modes.rows(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g\n", basis.modes(i, k));
            out << buf;
        }
    }
}

}  // namespace heatrig
