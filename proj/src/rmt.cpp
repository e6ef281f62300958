#include "zsync/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "zsync/generators.hpp"
#include "zsync/linalg.hpp"
#include "zsync/parallel.hpp"
#include "zsync/rng.hpp"
#include "zsync/spectral.hpp"

namespace zsync {

using linalg::Vector;

double threshold(std::size_t n, double alpha) {
    if (n == 0) throw ParameterError("threshold needs n >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in (0,1]");
    return 0.5 + 1.0 / (2.0 * std::sqrt(alpha * static_cast<double>(n)));
}

double residual_variance(double alpha, double p) {
    return alpha * (1.0 - alpha + 4.0 * p * alpha - 4.0 * p * p * alpha);
}

NoiseAnalysis analyze_noise(std::size_t n, double alpha, double p) {
    NoiseAnalysis a;
    a.n = n;
    a.alpha = alpha;
    a.p = p;
    a.p_star = threshold(n, alpha);
    a.p_star_attainable = a.p_star <= 1.0;
    a.theta = static_cast<double>(n) * (2.0 * p - 1.0) * alpha;
    a.sigma = std::sqrt(static_cast<double>(n) * residual_variance(alpha, p));
    a.detectable = a.theta > a.sigma;
    return a;
}

ResidualStats rank_one_decomposition_check(const SignedGraph& g, const GroundTruth& truth, double alpha, double p) {
    const std::size_t n = g.size();
    if (truth.size() != n) throw DimensionError("truth length does not match graph");
    const double mean_entry = alpha * (2.0 * p - 1.0);
    std::vector<double> row(n, 0.0);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& nb : g.neighbors(i)) row[nb.node] = nb.w;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r = row[j] - mean_entry * truth[i] * truth[j];
            sum += r;
            sumsq += r * r;
        }
        for (const auto& nb : g.neighbors(i)) row[nb.node] = 0.0;
    }
    ResidualStats s;
    s.pairs = n * (n - 1) / 2;
    const double count = static_cast<double>(std::max<std::size_t>(s.pairs, 1));
    s.mean = sum / count;
    s.variance = std::max(0.0, sumsq / count - s.mean * s.mean);
    s.analytic_variance = residual_variance(alpha, p);
    return s;
}

CorrelationBound correlation_bound(const SignedGraph& g, const GroundTruth& truth, double alpha, double p) {
    const std::size_t n = g.size();
    if (truth.size() != n) throw DimensionError("truth length does not match graph");
    const double diag = (2.0 * p - 1.0) * alpha;
    const double theta = static_cast<double>(n) * diag;
    Vector t(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) t[static_cast<Eigen::Index>(i)] = truth[i] / std::sqrt(static_cast<double>(n));

    double bound = std::abs(diag);
    for (double d : g.weighted_degrees()) bound = std::max(bound, d + std::abs(diag));
    auto zx = [&g](const Vector& x, Vector& y) {
        y.resize(x.size());
        g.multiply({x.data(), static_cast<std::size_t>(x.size())}, {y.data(), static_cast<std::size_t>(y.size())});
    };
    linalg::SymmetricOperator z_op{n, [&](const Vector& x, Vector& y) { zx(x, y); y += diag * x; }, bound};
    linalg::SymmetricOperator r_op{n,
                                   [&](const Vector& x, Vector& y) {
                                       zx(x, y);
                                       y += diag * x - theta * t.dot(x) * t;
                                   },
                                   bound + std::abs(theta)};
    linalg::EigenOptions opts;
    opts.tol = 1e-10 * std::max(1.0, bound);
    auto top_z = linalg::top_eigenpairs(z_op, 1, opts);
    auto top_r = linalg::top_eigenpairs(r_op, 1, opts);

    CorrelationBound cb;
    cb.lambda1_z = top_z.values[0];
    cb.lambda1_r = top_r.values[0];
    const double c = top_z.vectors[0].dot(t);
    cb.measured = c * c;
    cb.two_sigma = 2.0 * std::sqrt(static_cast<double>(n) * residual_variance(alpha, p));
    cb.applicable = p > 0.5;
    if (cb.applicable) {
        cb.lower_bound = (cb.lambda1_z - cb.lambda1_r) / theta;
        cb.holds = cb.measured >= cb.lower_bound - 1e-6;
    }
    return cb;
}

std::vector<double> default_alpha_grid() {
    std::vector<double> a;
    for (int k = 1; k <= 20; ++k) a.push_back(0.05 * k);
    return a;
}

std::vector<double> default_eta_grid() {
    std::vector<double> e;
    for (int k = 0; k < 20; ++k) e.push_back(0.5 * k / 19.0);
    return e;
}

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

std::uint64_t heatmap_trial_seed(std::uint64_t seed, std::size_t alpha_index, std::size_t eta_index,
                                 std::size_t trial) {
    return derive_seed(derive_seed(derive_seed(seed, alpha_index), eta_index), trial);
}

std::vector<HeatmapCell> heatmap_sweep(const HeatmapSpec& spec) {
    const auto alphas = spec.alpha_grid.empty() ? default_alpha_grid() : spec.alpha_grid;
    const auto etas = spec.eta_grid.empty() ? default_eta_grid() : spec.eta_grid;
    if (spec.trials == 0) throw ParameterError("heatmap needs at least one trial");
    const std::size_t cells = alphas.size() * etas.size();
    std::vector<double> tau(cells * spec.trials), gap(cells * spec.trials);
    std::vector<char> failed(cells * spec.trials, 0);

    parallel_for(cells * spec.trials, spec.jobs, [&](std::size_t job) {
        const std::size_t cell = job / spec.trials, trial = job % spec.trials;
        const std::size_t ai = cell / etas.size(), ei = cell % etas.size();
        try {
            NoiseSpec noise{alphas[ai], etas[ei], heatmap_trial_seed(spec.seed, ai, ei, trial)};
            Instance inst = erdos_renyi_instance(spec.n, noise);
            SyncSolution sol = spec.method == HeatmapMethod::eig ? eig_sync(inst.graph, spec.normalized)
                                                                 : laplacian_sync(inst.graph);
            tau[job] = error_rate(sol, inst.truth);
            gap[job] = sol.diagnostics.at("gap");
        } catch (const Error&) {
            failed[job] = 1;
        }
    });

    std::vector<HeatmapCell> out(cells);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        auto& c = out[cell];
        c.alpha = alphas[cell / etas.size()];
        c.eta = etas[cell % etas.size()];
        std::vector<double> ts, gs;
        for (std::size_t t = 0; t < spec.trials; ++t) {
            const std::size_t job = cell * spec.trials + t;
            if (failed[job]) {
                c.failed = true;
                continue;
            }
            ts.push_back(tau[job]);
            gs.push_back(gap[job]);
        }
        c.tau_median = median(ts);
        c.gap_median = median(gs);
        NoiseAnalysis a = analyze_noise(spec.n, c.alpha, 1.0 - c.eta);
        c.p_star = a.p_star;
        c.detectable = a.detectable;
    }
    return out;
}

void write_heatmap_csv(std::ostream& out, const std::vector<HeatmapCell>& cells) {
    out << "alpha,eta,tau_median,gap_median,p_star,detectable\n";
    out.precision(10);
    for (const auto& c : cells)
        out << c.alpha << ',' << c.eta << ',' << c.tau_median << ',' << c.gap_median << ',' << c.p_star << ','
            << (c.detectable ? 1 : 0) << '\n';
}

}  // namespace zsync
