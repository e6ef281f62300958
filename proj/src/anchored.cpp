#include "zsync/anchored.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>

#include <algorithm>
#include <cmath>
#include <limits>

namespace zsync {

using linalg::Matrix;
using linalg::Vector;

AnchoredSystem build_anchored_system(const SignedGraph& g, const AnchorSet& anchors) {
    const std::size_t n = g.size();
    if (anchors.node_count() != n) throw DimensionError("anchor set size does not match graph");
    if (anchors.empty()) throw ParameterError("anchored system needs at least one anchor");
    if (anchors.size() >= n) throw ParameterError("anchored system needs at least one sensor");

    AnchoredSystem sys;
    sys.n = n;
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> sensor_pos(n, kNone), anchor_pos(n, kNone);
    for (std::size_t i = 0; i < n; ++i) {
        if (anchors.contains(i)) {
            anchor_pos[i] = sys.anchors.size();
            sys.anchors.push_back(i);
        } else {
            sensor_pos[i] = sys.sensors.size();
            sys.sensors.push_back(i);
        }
    }
    const auto l = static_cast<Eigen::Index>(sys.sensors.size());
    const auto h = static_cast<Eigen::Index>(sys.anchors.size());
    sys.a.resize(h);
    for (Eigen::Index k = 0; k < h; ++k) sys.a[k] = anchors.value(sys.anchors[static_cast<std::size_t>(k)]);
    sys.d_s.resize(l);
    for (Eigen::Index k = 0; k < l; ++k) sys.d_s[k] = g.weighted_degree(sys.sensors[static_cast<std::size_t>(k)]);

    using Triplet = Eigen::Triplet<double>;
    std::vector<Triplet> s_t, u_t, v_t;
    for (const auto& e : g.edges()) {
        const bool ai = anchor_pos[e.i] != kNone, aj = anchor_pos[e.j] != kNone;
        if (!ai && !aj) {
            auto p = static_cast<Eigen::Index>(sensor_pos[e.i]), q = static_cast<Eigen::Index>(sensor_pos[e.j]);
            s_t.emplace_back(p, q, e.w);
            s_t.emplace_back(q, p, e.w);
        } else if (ai && aj) {
            auto p = static_cast<Eigen::Index>(anchor_pos[e.i]), q = static_cast<Eigen::Index>(anchor_pos[e.j]);
            v_t.emplace_back(p, q, e.w);
            v_t.emplace_back(q, p, e.w);
        } else {
            std::size_t s = ai ? e.j : e.i, a = ai ? e.i : e.j;
            u_t.emplace_back(static_cast<Eigen::Index>(sensor_pos[s]), static_cast<Eigen::Index>(anchor_pos[a]), e.w);
        }
    }
    sys.S.resize(l, l);
    sys.S.setFromTriplets(s_t.begin(), s_t.end());
    sys.U.resize(l, h);
    sys.U.setFromTriplets(u_t.begin(), u_t.end());
    sys.V.resize(h, h);
    sys.V.setFromTriplets(v_t.begin(), v_t.end());
    return sys;
}

namespace {

// psi(lambda) = 1/sqrt(phi) - 1/sqrt(t) is increasing and close to linear in
// lambda, so safeguarded Newton on psi converges quickly; the bracket keeps it
// on the right side of the pole.
template <class Eval>
double find_root(Eval&& eval, double lo, double hi, double target, std::size_t& iterations) {
    double lambda = hi;
    const double inv_sqrt_t = 1.0 / std::sqrt(target);
    for (iterations = 0; iterations < 500; ++iterations) {
        auto [phi, dphi] = eval(lambda);
        if (std::abs(phi - target) <= 1e-15 * target) break;
        (phi > target ? lo : hi) = lambda;
        const double psi = 1.0 / std::sqrt(phi) - inv_sqrt_t;
        const double dpsi = -0.5 * dphi / (phi * std::sqrt(phi));
        double next = lambda - psi / dpsi;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == lambda || hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lambda))) break;
        lambda = next;
    }
    return lambda;
}

SecularSolution solve_dense(const SparseMatrix& m, const Vector& b, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es{Matrix(m)};
    const Vector& mu = es.eigenvalues();
    const Matrix& q = es.eigenvectors();
    const Vector c = q.transpose() * b;
    const Eigen::Index l = mu.size();
    SecularSolution out;
    out.mu_min = mu[0];

    const double scale = std::max(1.0, mu.cwiseAbs().maxCoeff());
    const double bnorm = b.norm();
    Eigen::Index bottom = 0;  // size of the numerically degenerate bottom eigenspace
    while (bottom < l && mu[bottom] - mu[0] <= 1e-10 * scale) ++bottom;
    const double low_mass = c.head(bottom).norm();

    if (low_mass <= 1e-12 * bnorm) {
        double phi_limit = 0.0;
        for (Eigen::Index k = bottom; k < l; ++k) phi_limit += c[k] * c[k] / ((mu[k] - mu[0]) * (mu[k] - mu[0]));
        if (phi_limit <= t) {
            out.hard_case = true;
            out.lambda = -mu[0];
            Vector coeff = Vector::Zero(l);
            for (Eigen::Index k = bottom; k < l; ++k) coeff[k] = c[k] / (mu[k] - mu[0]);
            coeff[0] = std::sqrt(t - phi_limit);
            out.z = q * coeff;
            out.residual = std::abs(out.z.squaredNorm() - t);
            return out;
        }
    }

    auto eval = [&](double lambda) {
        double phi = 0.0, dphi = 0.0;
        for (Eigen::Index k = 0; k < l; ++k) {
            const double d = mu[k] + lambda;
            phi += c[k] * c[k] / (d * d);
            dphi -= 2.0 * c[k] * c[k] / (d * d * d);
        }
        return std::pair{phi, dphi};
    };
    const double lo = -mu[0];
    double hi = lo + std::max(bnorm / std::sqrt(t), 1e-300);
    while (eval(hi).first > t) hi = lo + 2.0 * (hi - lo);
    out.lambda = find_root(eval, lo, hi, t, out.iterations);
    out.z = q * (c.array() / (mu.array() + out.lambda)).matrix();
    out.residual = std::abs(out.z.squaredNorm() - t);
    return out;
}

SecularSolution solve_iterative(const SparseMatrix& m, const Vector& b, double t, const QcqpOptions& opts) {
    const auto l = m.rows();
    double bound = 0.0;
    for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
        double row = 0.0;
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) row += std::abs(it.value());
        bound = std::max(bound, row);
    }
    const double shift = 2.0 * bound + 1.0;
    linalg::SymmetricOperator flipped{static_cast<std::size_t>(l),
                                      [&m, shift](const Vector& x, Vector& y) { y = shift * x - m * x; }, shift};
    linalg::EigenOptions eo;
    eo.seed = opts.seed;
    eo.tol = 1e-10 * shift;
    auto bottom = linalg::top_eigenpairs(flipped, 1, eo);
    const double mu0 = shift - bottom.values[0];
    const Vector& v0 = bottom.vectors[0];

    SecularSolution out;
    out.mu_min = mu0;
    const double bnorm = b.norm();
    SparseMatrix id(l, l);
    id.setIdentity();

    auto solve = [&](double lambda, const Vector& rhs) {
        SparseMatrix shifted = m + lambda * id;
        Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
        cg.setTolerance(opts.cg_tol);
        cg.setMaxIterations(std::max<Eigen::Index>(10 * l, 1000));
        cg.compute(shifted);
        Vector x = cg.solve(rhs);
        return x;
    };

    const double c0 = v0.dot(b);
    if (std::abs(c0) <= 1e-10 * bnorm) {
        const Vector b_perp = b - c0 * v0;
        const double eps = 1e-8 * std::max(1.0, std::abs(mu0));
        Vector zl = solve(-mu0 + eps, b_perp);
        zl -= v0.dot(zl) * v0;
        const double phi_limit = zl.squaredNorm();
        if (phi_limit <= t) {
            out.hard_case = true;
            out.lambda = -mu0;
            out.z = zl + std::sqrt(t - phi_limit) * v0;
            out.residual = std::abs(out.z.squaredNorm() - t);
            return out;
        }
    }

    Vector z;
    auto eval = [&](double lambda) {
        z = solve(lambda, b);
        Vector w = solve(lambda, z);
        return std::pair{z.squaredNorm(), -2.0 * z.dot(w)};
    };
    const double lo = -mu0;
    double hi = lo + std::max(bnorm / std::sqrt(t), 1e-300);
    while (eval(hi).first > t) hi = lo + 2.0 * (hi - lo);
    out.lambda = find_root(eval, lo, hi, t, out.iterations);
    out.z = solve(out.lambda, b);
    out.residual = std::abs(out.z.squaredNorm() - t);
    return out;
}

SparseMatrix laplacian_block(const AnchoredSystem& sys) {
    SparseMatrix d(sys.S.rows(), sys.S.cols());
    d.reserve(Eigen::VectorXi::Constant(d.cols(), 1));
    for (Eigen::Index k = 0; k < sys.d_s.size(); ++k) d.insert(k, k) = sys.d_s[k];
    return SparseMatrix(d - sys.S);
}

Vector anchor_rhs(const AnchoredSystem& sys) {
    Vector b = sys.U * sys.a;
    if (b.squaredNorm() == 0.0) throw DegenerateAnchorError("U a = 0: no sensor is linked to an anchor");
    return b;
}

SyncSolution finish(const AnchoredSystem& sys, const Vector& z, const SecularSolution& sec, double target,
                    double residual, std::string method, bool dense) {
    std::vector<double> scores(sys.n, 0.0);
    for (std::size_t k = 0; k < sys.sensors.size(); ++k) scores[sys.sensors[k]] = z[static_cast<Eigen::Index>(k)];
    for (std::size_t k = 0; k < sys.anchors.size(); ++k) scores[sys.anchors[k]] = sys.a[static_cast<Eigen::Index>(k)];
    SyncSolution sol = solution_from_scores(std::move(scores), std::move(method));
    sol.diagnostics = {{"lambda", sec.lambda},
                       {"mu_min", sec.mu_min},
                       {"constraint_target", target},
                       {"constraint_residual", residual},
                       {"hard_case", sec.hard_case ? 1.0 : 0.0},
                       {"iterations", static_cast<double>(sec.iterations)},
                       {"dense_route", dense ? 1.0 : 0.0},
                       {"anchors", static_cast<double>(sys.anchors.size())}};
    return sol;
}

bool use_dense(std::size_t l, const QcqpOptions& opts) {
    if (opts.route == SecularRoute::dense) return true;
    if (opts.route == SecularRoute::iterative) return false;
    return l <= opts.dense_limit;
}

}  // namespace

SecularSolution solve_secular(const SparseMatrix& m, const Vector& b, double target, const QcqpOptions& opts) {
    if (m.rows() != m.cols() || m.rows() != b.size()) throw DimensionError("secular equation: shape mismatch");
    if (!(target > 0.0)) throw ParameterError("secular equation: target must be positive");
    if (b.squaredNorm() == 0.0) throw DegenerateAnchorError("secular equation: zero right-hand side");
    return use_dense(static_cast<std::size_t>(m.rows()), opts) ? solve_dense(m, b, target)
                                                                : solve_iterative(m, b, target, opts);
}

SyncSolution qcqp_sync_identity(const AnchoredSystem& sys, const QcqpOptions& opts) {
    const Vector b = anchor_rhs(sys);
    const auto l = static_cast<double>(sys.sensor_count());
    SecularSolution sec = solve_secular(laplacian_block(sys), b, l, opts);
    return finish(sys, sec.z, sec, l, sec.residual, "qcqp-i", use_dense(sys.sensor_count(), opts));
}

SyncSolution qcqp_sync_degree(const AnchoredSystem& sys, const QcqpOptions& opts) {
    const Vector b = anchor_rhs(sys);
    Vector inv_sqrt(sys.d_s.size());
    for (Eigen::Index k = 0; k < sys.d_s.size(); ++k) {
        if (sys.d_s[k] <= 0.0) throw DegenerateError("degree-constrained QCQP needs positive sensor degrees", sys.sensors[static_cast<std::size_t>(k)]);
        inv_sqrt[k] = 1.0 / std::sqrt(sys.d_s[k]);
    }
    const SparseMatrix m = inv_sqrt.asDiagonal() * laplacian_block(sys) * inv_sqrt.asDiagonal();
    const double delta = sys.d_s.sum();
    SecularSolution sec = solve_secular(m, inv_sqrt.cwiseProduct(b), delta, opts);
    const Vector z = inv_sqrt.cwiseProduct(sec.z);
    const double residual = std::abs(z.dot(sys.d_s.cwiseProduct(z)) - delta);
    return finish(sys, z, sec, delta, residual, "qcqp-d", use_dense(sys.sensor_count(), opts));
}

}  // namespace zsync
