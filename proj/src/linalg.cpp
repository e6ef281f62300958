#include "zsync/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "zsync/rng.hpp"

namespace zsync::linalg {

namespace {

Vector random_unit(std::size_t n, Rng& rng) {
    Vector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
    v.normalize();
    return v;
}

double residual_norm(const SymmetricOperator& op, const Vector& v, double lambda) {
    Vector av(v.size());
    op.apply(v, av);
    return (av - lambda * v).norm();
}

EigenResult dense_top(const SymmetricOperator& op, std::size_t r) {
    Matrix a = to_dense(op);
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    const auto n = static_cast<Eigen::Index>(op.n);
    EigenResult out;
    out.iterations = op.n;
    for (std::size_t k = 0; k < r; ++k) {
        Eigen::Index col = n - 1 - static_cast<Eigen::Index>(k);
        Vector v = es.eigenvectors().col(col);
        canonical_sign(v);
        out.values.push_back(es.eigenvalues()[col]);
        out.residual = std::max(out.residual, (a * v - es.eigenvalues()[col] * v).norm());
        out.vectors.push_back(std::move(v));
    }
    out.converged = true;
    return out;
}

}  // namespace

void canonical_sign(Vector& v) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[best]) * (1.0 + 1e-12)) best = i;
    if (v.size() > 0 && v[best] < 0) v = -v;
}

Matrix to_dense(const SymmetricOperator& op) {
    const auto n = static_cast<Eigen::Index>(op.n);
    Matrix a(n, n);
    Vector e = Vector::Zero(n), y(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        e[j] = 1.0;
        op.apply(e, y);
        a.col(j) = y;
        e[j] = 0.0;
    }
    return 0.5 * (a + a.transpose());
}

std::vector<double> dense_spectrum(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    std::vector<double> vals(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(vals.rbegin(), vals.rend());
    return vals;
}

EigenResult top_eigenpairs(const SymmetricOperator& op, std::size_t r, const EigenOptions& opts) {
    const std::size_t n = op.n;
    if (n == 0) throw DimensionError("eigensolver: empty operator");
    r = std::min(r, n);
    if (r == 0) throw ParameterError("eigensolver: at least one eigenpair must be requested");
    if (n <= opts.dense_threshold) return dense_top(op, r);

    const std::size_t cap = std::min<std::size_t>(n, opts.max_basis ? opts.max_basis : 500);
    const auto N = static_cast<Eigen::Index>(n);
    Rng rng(opts.seed, 0x1a2c);
    Matrix basis(N, static_cast<Eigen::Index>(cap));
    std::vector<double> alpha, beta;
    Vector start = random_unit(n, rng);
    Vector w(N);
    std::size_t applications = 0;
    double last_estimate = 0.0;

    for (std::size_t restart = 0; restart <= opts.max_restarts; ++restart) {
        alpha.clear();
        beta.clear();
        Vector q = start;
        std::size_t m = 0;  // current basis size
        bool exhausted = false;
        Eigen::SelfAdjointEigenSolver<Matrix> tri;

        auto ritz_solve = [&](std::size_t size) {
            Matrix t = Matrix::Zero(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
            for (std::size_t k = 0; k < size; ++k) {
                t(k, k) = alpha[k];
                if (k + 1 < size) t(k, k + 1) = t(k + 1, k) = beta[k];
            }
            tri.compute(t);
        };

        while (true) {
            basis.col(static_cast<Eigen::Index>(m)) = q;
            op.apply(q, w);
            ++applications;
            double a = q.dot(w);
            w -= a * q;
            if (m > 0) w -= beta[m - 1] * basis.col(static_cast<Eigen::Index>(m - 1));
            auto active = basis.leftCols(static_cast<Eigen::Index>(m + 1));
            for (int pass = 0; pass < 2; ++pass) w -= active * (active.transpose() * w);
            alpha.push_back(a);
            double b = w.norm();
            ++m;

            const double scale = std::max({op.norm_bound, std::abs(a), 1.0});
            const bool breakdown = b <= 1e-12 * scale;
            if (m == n) exhausted = true;
            const bool at_cap = m == cap;
            if (breakdown && !exhausted && !at_cap) {
                // Invariant subspace found; continue with a fresh direction.
                Vector fresh = random_unit(n, rng);
                for (int pass = 0; pass < 2; ++pass) fresh -= active * (active.transpose() * fresh);
                if (fresh.norm() < 1e-10) {
                    exhausted = true;
                } else {
                    beta.push_back(0.0);
                    q = fresh.normalized();
                    continue;
                }
            }
            beta.push_back(breakdown ? 0.0 : b);

            const bool check = exhausted || at_cap || (m >= r && (m % 8 == 0 || m < 2 * r + 4));
            if (check && m >= r) {
                ritz_solve(m);
                const auto& s = tri.eigenvectors();
                double worst = 0.0;
                double spread = 0.0;
                for (std::size_t k = 0; k < r; ++k) {
                    auto col = static_cast<Eigen::Index>(m - 1 - k);
                    worst = std::max(worst, std::abs(beta[m - 1] * s(static_cast<Eigen::Index>(m - 1), col)));
                    spread = std::max(spread, std::abs(tri.eigenvalues()[col]));
                }
                last_estimate = worst;
                const double tol = std::max(opts.tol, 1e-13 * std::max(spread, 1.0));
                if (worst < tol || exhausted) {
                    EigenResult out;
                    out.iterations = applications;
                    for (std::size_t k = 0; k < r; ++k) {
                        auto col = static_cast<Eigen::Index>(m - 1 - k);
                        Vector v = basis.leftCols(static_cast<Eigen::Index>(m)) * s.col(col);
                        v.normalize();
                        canonical_sign(v);
                        double lam = tri.eigenvalues()[col];
                        out.residual = std::max(out.residual, residual_norm(op, v, lam));
                        out.values.push_back(lam);
                        out.vectors.push_back(std::move(v));
                    }
                    out.converged = out.residual < std::max(10.0 * tol, 1e-10 * spread);
                    if (out.converged || exhausted) return out;
                }
                if (at_cap) {
                    // Explicit restart from the sum of the wanted Ritz vectors.
                    Vector next = Vector::Zero(N);
                    for (std::size_t k = 0; k < r; ++k) {
                        auto col = static_cast<Eigen::Index>(m - 1 - k);
                        next += basis.leftCols(static_cast<Eigen::Index>(m)) * s.col(col);
                    }
                    start = next.normalized();
                    break;
                }
            }
            q = w / b;
        }
    }
    throw ConvergenceError("Lanczos did not converge", last_estimate);
}

EigenResult power_iteration(const SymmetricOperator& op, const EigenOptions& opts) {
    const std::size_t n = op.n;
    if (n == 0) throw DimensionError("power iteration: empty operator");
    const double shift = op.norm_bound;
    std::size_t max_iter = opts.max_iterations;
    if (max_iter == 0)
        max_iter = static_cast<std::size_t>(10.0 * n * std::max(1.0, std::log(static_cast<double>(n))));
    Rng rng(opts.seed, 0x9e37);
    Vector v = random_unit(n, rng);
    Vector av(v.size());
    EigenResult out;
    double lambda = 0.0, res = 0.0;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        op.apply(v, av);
        lambda = v.dot(av);
        res = (av - lambda * v).norm();
        out.iterations = it;
        if (res < opts.tol) {
            out.converged = true;
            break;
        }
        Vector next = av + shift * v;
        v = next.normalized();
    }
    canonical_sign(v);
    out.values = {lambda};
    out.vectors = {v};
    out.residual = res;
    return out;
}

SymmetricOperator adjacency_operator(const SignedGraph& g) {
    double bound = 0.0;
    for (double d : g.weighted_degrees()) bound = std::max(bound, d);
    return {g.size(),
            [&g](const Vector& x, Vector& y) {
                y.resize(x.size());
                g.multiply({x.data(), static_cast<std::size_t>(x.size())},
                           {y.data(), static_cast<std::size_t>(y.size())});
            },
            std::max(bound, 1e-300)};
}

SymmetricOperator normalized_adjacency_operator(const SignedGraph& g) {
    Vector inv_sqrt(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
        double d = g.weighted_degree(i);
        if (d <= 0.0) throw DegenerateError("normalization needs positive degree", i);
        inv_sqrt[static_cast<Eigen::Index>(i)] = 1.0 / std::sqrt(d);
    }
    return {g.size(),
            [&g, inv_sqrt](const Vector& x, Vector& y) {
                Vector scaled = x.cwiseProduct(inv_sqrt);
                y.resize(x.size());
                g.multiply({scaled.data(), static_cast<std::size_t>(scaled.size())},
                           {y.data(), static_cast<std::size_t>(y.size())});
                y = y.cwiseProduct(inv_sqrt);
            },
            1.0};
}

SymmetricOperator shifted_laplacian_operator(const SignedGraph& g, double* shift) {
    double c = 0.0;
    for (double d : g.weighted_degrees()) c = std::max(c, 2.0 * d);
    if (shift) *shift = c;
    return {g.size(),
            [&g, c](const Vector& x, Vector& y) {
                y.resize(x.size());
                g.multiply({x.data(), static_cast<std::size_t>(x.size())},
                           {y.data(), static_cast<std::size_t>(y.size())});
                // c x - (D x - Z x)
                for (Eigen::Index i = 0; i < x.size(); ++i)
                    y[i] += (c - g.weighted_degree(static_cast<std::size_t>(i))) * x[i];
            },
            std::max(c, 1e-300)};
}

Matrix dense_adjacency(const SignedGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Matrix a = Matrix::Zero(n, n);
    for (const auto& e : g.edges()) {
        a(static_cast<Eigen::Index>(e.i), static_cast<Eigen::Index>(e.j)) = e.w;
        a(static_cast<Eigen::Index>(e.j), static_cast<Eigen::Index>(e.i)) = e.w;
    }
    return a;
}

}  // namespace zsync::linalg
