#include "zsync/sdp.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <deque>

#include "zsync/rng.hpp"

namespace zsync {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using linalg::Vector;

struct Csr {
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> cols;
    std::vector<double> vals;
};

Csr build_csr(const SdpProblem& p) {
    std::vector<std::size_t> count(p.n + 1, 0);
    for (const auto& e : p.entries) {
        if (e.i >= p.n || e.j >= p.n || e.i == e.j) throw DimensionError("SDP cost entry out of range");
        if (!std::isfinite(e.w)) throw ParameterError("SDP cost entry is not finite");
        ++count[e.i + 1];
        ++count[e.j + 1];
    }
    Csr c;
    c.offsets.assign(p.n + 1, 0);
    for (std::size_t i = 0; i < p.n; ++i) c.offsets[i + 1] = c.offsets[i] + count[i + 1];
    c.cols.resize(c.offsets.back());
    c.vals.resize(c.offsets.back());
    std::vector<std::size_t> fill(c.offsets.begin(), c.offsets.end() - 1);
    for (const auto& e : p.entries) {
        c.cols[fill[e.i]] = e.j;
        c.vals[fill[e.i]++] = e.w;
        c.cols[fill[e.j]] = e.i;
        c.vals[fill[e.j]++] = e.w;
    }
    return c;
}

// g = sum_j C_ij v_j
inline void row_gradient(const Csr& c, const RowMatrix& v, std::size_t i, Eigen::RowVectorXd& g) {
    g.setZero();
    for (std::size_t k = c.offsets[i]; k < c.offsets[i + 1]; ++k) g.noalias() += c.vals[k] * v.row(static_cast<Eigen::Index>(c.cols[k]));
}

double objective(const Csr& c, const RowMatrix& v) {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < c.offsets.size(); ++i)
        for (std::size_t k = c.offsets[i]; k < c.offsets[i + 1]; ++k)
            f += c.vals[k] * v.row(static_cast<Eigen::Index>(i)).dot(v.row(static_cast<Eigen::Index>(c.cols[k])));
    return f;
}

struct Run {
    RowMatrix v;
    double f = -std::numeric_limits<double>::infinity();
    std::size_t sweeps = 0;
    bool converged = false;
};

Run mixing_run(const Csr& c, std::size_t n, std::size_t r, const std::map<std::size_t, int>& fixed,
               const std::vector<std::size_t>& free_rows, const SdpOptions& opts, std::uint64_t stream) {
    Rng rng(opts.seed, stream);
    Run run;
    run.v.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(r));
    for (std::size_t i = 0; i < n; ++i) {
        auto row = run.v.row(static_cast<Eigen::Index>(i));
        for (Eigen::Index k = 0; k < row.size(); ++k) row[k] = rng.normal();
        row.normalize();
    }
    for (auto [i, s] : fixed) {
        auto row = run.v.row(static_cast<Eigen::Index>(i));
        row.setZero();
        row[0] = s;
    }
    Eigen::RowVectorXd g(static_cast<Eigen::Index>(r));
    std::deque<double> checkpoints;
    constexpr std::size_t kStride = 10;
    const std::size_t lag = std::max<std::size_t>(1, opts.window / kStride);
    if (free_rows.empty()) {
        run.f = objective(c, run.v);
        run.converged = true;
        return run;
    }
    for (std::size_t sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
        for (std::size_t i : free_rows) {
            row_gradient(c, run.v, i, g);
            const double norm = g.norm();
            if (norm > 1e-300) run.v.row(static_cast<Eigen::Index>(i)) = g / norm;
        }
        run.sweeps = sweep;
        if (sweep % kStride == 0) {
            run.f = objective(c, run.v);
            checkpoints.push_back(run.f);
            if (checkpoints.size() > lag) {
                const double old = checkpoints.front();
                checkpoints.pop_front();
                if (run.f - old <= opts.rel_tol * std::max(std::abs(run.f), 1.0)) {
                    run.converged = true;
                    return run;
                }
            }
        }
    }
    run.f = objective(c, run.v);
    return run;
}

double certify(const Csr& c, const RowMatrix& v, const SdpOptions& opts) {
    const std::size_t n = c.offsets.size() - 1;
    Vector y(static_cast<Eigen::Index>(n));
    Eigen::RowVectorXd g(v.cols());
    double bound = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        row_gradient(c, v, i, g);
        y[static_cast<Eigen::Index>(i)] = v.row(static_cast<Eigen::Index>(i)).dot(g);
        double row_sum = 0.0;
        for (std::size_t k = c.offsets[i]; k < c.offsets[i + 1]; ++k) row_sum += std::abs(c.vals[k]);
        bound = std::max(bound, row_sum + std::abs(y[static_cast<Eigen::Index>(i)]));
    }
    linalg::SymmetricOperator op{n,
                                 [&c, &y](const Vector& x, Vector& out) {
                                     out.resize(x.size());
                                     for (Eigen::Index i = 0; i < x.size(); ++i) {
                                         double s = -y[i] * x[i];
                                         auto ui = static_cast<std::size_t>(i);
                                         for (std::size_t k = c.offsets[ui]; k < c.offsets[ui + 1]; ++k)
                                             s += c.vals[k] * x[static_cast<Eigen::Index>(c.cols[k])];
                                         out[i] = s;
                                     }
                                 },
                                 std::max(bound, 1e-300)};
    linalg::EigenOptions eo;
    eo.seed = opts.seed;
    eo.tol = 1e-9 * std::max(bound, 1.0);
    try {
        double lam = linalg::top_eigenpairs(op, 1, eo).values[0];
        return y.sum() + static_cast<double>(n) * lam;
    } catch (const ConvergenceError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

SdpProblem graph_problem(const SignedGraph& g) {
    return {g.size(), g.edges(), {}};
}

std::map<std::size_t, int> anchor_map(const SignedGraph& g, const AnchorSet& anchors) {
    if (anchors.node_count() != g.size()) throw DimensionError("anchor set size does not match graph");
    if (anchors.empty()) throw ParameterError("anchored SDP needs at least one anchor");
    return anchors.entries();
}

void fill_diagnostics(SdpResult& res) {
    auto& d = res.rounded.diagnostics;
    d["objective"] = res.objective;
    d["dual_bound"] = res.dual_bound;
    d["diag_violation"] = res.diag_violation;
    d["constraint_violation"] = res.constraint_violation;
    d["iterations"] = static_cast<double>(res.iterations);
    d["rank"] = static_cast<double>(res.factor.cols());
    d["converged"] = res.converged ? 1.0 : 0.0;
}

// Finishes an anchored solve: sensors get `sensor_scores`, anchors their value.
void anchored_solution(SdpResult& res, const std::map<std::size_t, int>& fixed,
                       const std::vector<std::size_t>& sensors, const Vector& sensor_scores, std::string method) {
    std::vector<double> scores(static_cast<std::size_t>(res.factor.rows()), 0.0);
    for (std::size_t k = 0; k < sensors.size(); ++k) scores[sensors[k]] = sensor_scores[static_cast<Eigen::Index>(k)];
    for (auto [i, s] : fixed) scores[i] = s;
    res.rounded = solution_from_scores(std::move(scores), std::move(method));
    fill_diagnostics(res);
    res.rounded.diagnostics["anchors"] = static_cast<double>(fixed.size());
}

template <class Finish>
SdpResult solve_or_rethrow(const SdpProblem& p, const SdpOptions& opts, Finish&& finish) {
    SdpOptions o = opts;
    o.throw_on_cap = false;
    SdpResult res = solve_unit_diag_sdp(p, o);
    finish(res);
    if (!res.converged && opts.throw_on_cap)
        throw SdpConvergenceError("SDP solver hit the sweep cap", res.rounded.diagnostics["objective"], res);
    return res;
}

}  // namespace

SdpResult solve_unit_diag_sdp(const SdpProblem& p, const SdpOptions& opts) {
    if (p.n == 0) throw DimensionError("SDP: empty problem");
    if (p.n > opts.size_limit)
        throw SizeError("SDP solver is limited to n <= " + std::to_string(opts.size_limit));
    for (auto [i, s] : p.fixed)
        if (i >= p.n || (s != 1 && s != -1)) throw ParameterError("SDP: invalid fixed row");
    const Csr c = build_csr(p);
    const std::size_t r =
        opts.rank ? opts.rank : static_cast<std::size_t>(std::ceil(std::sqrt(2.0 * static_cast<double>(p.n)))) + 1;
    std::vector<std::size_t> free_rows;
    for (std::size_t i = 0; i < p.n; ++i)
        if (!p.fixed.count(i)) free_rows.push_back(i);

    Run best;
    for (std::size_t restart = 0; restart < std::max<std::size_t>(1, opts.restarts); ++restart) {
        Run run = mixing_run(c, p.n, r, p.fixed, free_rows, opts, 0x100 + restart);
        if (run.f > best.f) best = std::move(run);
    }

    SdpResult res;
    res.objective = best.f;
    res.iterations = best.sweeps;
    res.converged = best.converged;
    for (Eigen::Index i = 0; i < best.v.rows(); ++i)
        res.diag_violation = std::max(res.diag_violation, std::abs(best.v.row(i).squaredNorm() - 1.0));
    for (auto a = p.fixed.begin(); a != p.fixed.end(); ++a)
        for (auto b = std::next(a); b != p.fixed.end(); ++b) {
            double yab = best.v.row(static_cast<Eigen::Index>(a->first)).dot(best.v.row(static_cast<Eigen::Index>(b->first)));
            res.constraint_violation = std::max(res.constraint_violation, std::abs(yab - a->second * b->second));
        }
    Eigen::SelfAdjointEigenSolver<linalg::Matrix> small(best.v.transpose() * best.v, Eigen::EigenvaluesOnly);
    res.min_gram_eigenvalue = best.v.cols() >= best.v.rows() ? small.eigenvalues()[0] : std::min(0.0, small.eigenvalues()[0]);
    if (opts.certify && p.fixed.empty()) res.dual_bound = certify(c, best.v, opts);
    res.factor = std::move(best.v);
    if (!res.converged && opts.throw_on_cap)
        throw SdpConvergenceError("SDP solver hit the sweep cap", res.objective, res);
    return res;
}

Vector gram_top_eigenvector(const SdpResult& res, const std::vector<std::size_t>& rows) {
    linalg::Matrix v;
    if (rows.empty()) {
        v = res.factor;
    } else {
        v.resize(static_cast<Eigen::Index>(rows.size()), res.factor.cols());
        for (std::size_t k = 0; k < rows.size(); ++k) v.row(static_cast<Eigen::Index>(k)) = res.factor.row(static_cast<Eigen::Index>(rows[k]));
    }
    Eigen::SelfAdjointEigenSolver<linalg::Matrix> es(v.transpose() * v);
    Vector s = v * es.eigenvectors().col(es.eigenvectors().cols() - 1);
    if (s.norm() > 0) s.normalize();
    linalg::canonical_sign(s);
    return s;
}

SdpResult sdp_sync(const SignedGraph& g, const SdpOptions& opts) {
    return solve_or_rethrow(graph_problem(g), opts, [](SdpResult& res) {
        Vector s = gram_top_eigenvector(res);
        res.rounded = solution_from_scores(std::vector<double>(s.data(), s.data() + s.size()), "sdp");
        fill_diagnostics(res);
    });
}

SdpResult sdp_sync_anchored_Y(const SignedGraph& g, const AnchorSet& anchors, const SdpOptions& opts) {
    SdpProblem p = graph_problem(g);
    p.fixed = anchor_map(g, anchors);
    std::vector<std::size_t> sensors;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!p.fixed.count(i)) sensors.push_back(i);
    return solve_or_rethrow(p, opts, [&](SdpResult& res) {
        Vector s = sensors.empty() ? Vector() : gram_top_eigenvector(res, sensors);
        // Majority vote over the sensor-anchor block: Y_ij a_j is the sign
        // anchor j implies for sensor i.
        long agree = 0, disagree = 0;
        for (std::size_t k = 0; k < sensors.size(); ++k) {
            const auto row = res.factor.row(static_cast<Eigen::Index>(sensors[k]));
            const int est = sign_of(s[static_cast<Eigen::Index>(k)]);
            for (auto [j, a] : p.fixed) {
                double yij = row.dot(res.factor.row(static_cast<Eigen::Index>(j)));
                if (yij == 0.0) continue;
                (sign_of(yij * a) == est ? agree : disagree) += 1;
            }
        }
        if (disagree > agree) s = -s;
        anchored_solution(res, p.fixed, sensors, s, "sdp-y");
    });
}

SdpResult sdp_sync_anchored_XY(const SignedGraph& g, const AnchorSet& anchors, const SdpOptions& opts) {
    SdpProblem p = graph_problem(g);
    p.fixed = anchor_map(g, anchors);
    std::vector<std::size_t> sensors;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!p.fixed.count(i)) sensors.push_back(i);
    if (sensors.empty()) throw ParameterError("SDP-XY needs at least one sensor");
    double anchor_constant = 0.0;
    for (const auto& e : g.edges())
        if (p.fixed.count(e.i) && p.fixed.count(e.j)) anchor_constant += 2.0 * e.w * p.fixed.at(e.i) * p.fixed.at(e.j);
    return solve_or_rethrow(p, opts, [&](SdpResult& res) {
        // Tr(S Y) + 2 x^T U a drops the anchor-anchor constant.
        res.objective -= anchor_constant;
        Vector x(static_cast<Eigen::Index>(sensors.size()));
        for (std::size_t k = 0; k < sensors.size(); ++k) x[static_cast<Eigen::Index>(k)] = res.factor(static_cast<Eigen::Index>(sensors[k]), 0);
        anchored_solution(res, p.fixed, sensors, x, "sdp-xy");
    });
}

SdpResult sdp_ksync(const SignedGraph& g, const Partition& partition, const SdpOptions& opts) {
    if (partition.size() != g.size()) throw DimensionError("partition size does not match graph");
    const std::size_t k = partition.block_count();
    std::map<std::pair<std::size_t, std::size_t>, double> summed;
    double constant = 0.0;
    for (const auto& e : g.edges()) {
        std::size_t u = partition.block_of(e.i), v = partition.block_of(e.j);
        if (u == v) {
            constant += 2.0 * e.w;
            continue;
        }
        summed[{std::min(u, v), std::max(u, v)}] += e.w;
    }
    SdpProblem p{k, {}, {}};
    for (auto [uv, w] : summed)
        if (w != 0.0) p.entries.push_back({uv.first, uv.second, w});

    SdpOptions o = opts;
    o.throw_on_cap = false;
    SdpResult collapsed = solve_unit_diag_sdp(p, o);
    Vector block_scores = gram_top_eigenvector(collapsed);

    SdpResult res;
    res.factor.resize(static_cast<Eigen::Index>(g.size()), collapsed.factor.cols());
    std::vector<double> scores(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto b = static_cast<Eigen::Index>(partition.block_of(i));
        res.factor.row(static_cast<Eigen::Index>(i)) = collapsed.factor.row(b);
        scores[i] = block_scores[b];
    }
    res.objective = collapsed.objective + constant;
    res.dual_bound = collapsed.dual_bound + constant;
    res.diag_violation = collapsed.diag_violation;
    res.min_gram_eigenvalue = collapsed.min_gram_eigenvalue;
    res.iterations = collapsed.iterations;
    res.converged = collapsed.converged;
    res.rounded = solution_from_scores(std::move(scores), "sdp-k");
    fill_diagnostics(res);
    res.rounded.diagnostics["blocks"] = static_cast<double>(k);
    if (!res.converged && opts.throw_on_cap)
        throw SdpConvergenceError("SDP solver hit the sweep cap", res.objective, res);
    return res;
}

}  // namespace zsync
