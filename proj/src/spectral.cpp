#include "zsync/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace zsync {

using linalg::Vector;

NormalizedOperator::NormalizedOperator(const SignedGraph& g)
    : g_(&g), inv_sqrt_(static_cast<Eigen::Index>(g.size())), sym_(linalg::normalized_adjacency_operator(g)) {
    for (std::size_t i = 0; i < g.size(); ++i) inv_sqrt_[static_cast<Eigen::Index>(i)] = 1.0 / std::sqrt(g.weighted_degree(i));
}

void NormalizedOperator::apply(const Vector& x, Vector& y) const {
    y.resize(x.size());
    g_->multiply({x.data(), static_cast<std::size_t>(x.size())}, {y.data(), static_cast<std::size_t>(y.size())});
    y = y.cwiseProduct(inv_sqrt_).cwiseProduct(inv_sqrt_);
}

Vector NormalizedOperator::map_back(const Vector& u) const {
    Vector v = u.cwiseProduct(inv_sqrt_);
    v.normalize();
    return v;
}

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ComponentSpectrum {
    Vector scores;
    double lambda1 = kNaN;
    double lambda2 = kNaN;
    std::size_t iterations = 0;
    double residual = 0.0;
};

// Runs `solve` on each connected component with at least two nodes and
// scatters the scores back. Spectral diagnostics come from the largest one.
template <class Solve>
SyncSolution per_component(const SignedGraph& g, const std::string& method, Solve&& solve) {
    const std::size_t n = g.size();
    std::size_t count = 0;
    auto label = connected_components(g, &count);
    std::vector<double> scores(n, 1.0);
    Diagnostics diag;
    std::size_t iterations = 0, isolated = 0, largest = 0;
    double residual = 0.0;
    ComponentSpectrum main;

    auto record = [&](const ComponentSpectrum& cs, std::size_t size) {
        iterations += cs.iterations;
        residual = std::max(residual, cs.residual);
        if (size > largest) {
            largest = size;
            main = cs;
        }
    };

    if (count == 1 && n > 1) {
        ComponentSpectrum cs = solve(g);
        for (std::size_t i = 0; i < n; ++i) scores[i] = cs.scores[static_cast<Eigen::Index>(i)];
        record(cs, n);
    } else {
        std::vector<std::vector<std::size_t>> members(count);
        for (std::size_t i = 0; i < n; ++i) members[label[i]].push_back(i);
        for (const auto& m : members) {
            if (m.size() == 1) {
                ++isolated;
                continue;
            }
            SignedGraph sub = induced_subgraph(g, m);
            ComponentSpectrum cs = solve(sub);
            for (std::size_t k = 0; k < m.size(); ++k) scores[m[k]] = cs.scores[static_cast<Eigen::Index>(k)];
            record(cs, m.size());
        }
    }
    SyncSolution sol = solution_from_scores(std::move(scores), method);
    sol.diagnostics = {{"lambda1", main.lambda1},
                       {"lambda2", main.lambda2},
                       {"gap", main.lambda1 - main.lambda2},
                       {"iterations", static_cast<double>(iterations)},
                       {"residual", residual},
                       {"components", static_cast<double>(count)},
                       {"isolated_nodes", static_cast<double>(isolated)}};
    return sol;
}

linalg::EigenResult solve_top(const linalg::SymmetricOperator& op, std::size_t r, const SpectralOptions& opts) {
    if (opts.route == EigenRoute::power) {
        auto res = linalg::power_iteration(op, opts.eigen);
        if (!res.converged) throw ConvergenceError("power iteration did not converge", res.residual);
        return res;
    }
    return linalg::top_eigenpairs(op, r, opts.eigen);
}

}  // namespace

SyncSolution eig_sync(const SignedGraph& g, bool normalized, const SpectralOptions& opts) {
    auto solve = [&](const SignedGraph& c) {
        ComponentSpectrum cs;
        linalg::EigenResult res;
        if (normalized) {
            NormalizedOperator op(c);
            res = solve_top(op.symmetric(), 2, opts);
            cs.scores = op.map_back(res.vectors[0]);
            linalg::canonical_sign(cs.scores);
        } else {
            res = solve_top(linalg::adjacency_operator(c), 2, opts);
            cs.scores = res.vectors[0];
        }
        cs.lambda1 = res.values[0];
        if (res.values.size() > 1) cs.lambda2 = res.values[1];
        cs.iterations = res.iterations;
        cs.residual = res.residual;
        return cs;
    };
    SyncSolution sol = per_component(g, normalized ? "eig" : "eig-raw", solve);
    sol.diagnostics["eigvec_norm_sq"] = 1.0;
    return sol;
}

SyncSolution laplacian_sync(const SignedGraph& g, const SpectralOptions& opts) {
    auto solve = [&](const SignedGraph& c) {
        ComponentSpectrum cs;
        double shift = 0.0;
        auto op = linalg::shifted_laplacian_operator(c, &shift);
        auto res = solve_top(op, 2, opts);
        cs.scores = res.vectors[0] * std::sqrt(static_cast<double>(c.size()));
        // Report eigenvalues of D - Z (smallest first).
        cs.lambda1 = shift - res.values[0];
        if (res.values.size() > 1) cs.lambda2 = shift - res.values[1];
        cs.iterations = res.iterations;
        cs.residual = res.residual;
        return cs;
    };
    SyncSolution sol = per_component(g, "laplacian", solve);
    sol.diagnostics["laplacian_min"] = sol.diagnostics["lambda1"];
    sol.diagnostics["laplacian_second"] = sol.diagnostics["lambda2"];
    sol.diagnostics["gap"] = sol.diagnostics["lambda2"] - sol.diagnostics["lambda1"];
    sol.diagnostics.erase("lambda1");
    sol.diagnostics.erase("lambda2");
    return sol;
}

std::vector<HistogramBin> histogram(const std::vector<double>& values, std::size_t bins) {
    if (bins == 0) throw ParameterError("histogram needs at least one bin");
    if (values.empty()) return {};
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it, hi = *hi_it;
    if (hi <= lo) hi = lo + 1.0;
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<HistogramBin> out(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out[b].left = lo + width * static_cast<double>(b);
        out[b].right = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
        out[b].count = 0;
    }
    for (double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        ++out[std::min(b, bins - 1)].count;
    }
    return out;
}

SpectrumReport spectrum(const SignedGraph& g, std::size_t r, bool normalized,
                        std::optional<std::size_t> histogram_bins, const linalg::EigenOptions& opts) {
    const std::size_t n = g.size();
    if (r == 0 || r > n) throw ParameterError("spectrum: need 1 <= r <= n");
    SpectrumReport rep;
    if (histogram_bins) {
        if (n > kHistogramSizeLimit)
            throw SizeError("full-spectrum histogram is limited to n <= " + std::to_string(kHistogramSizeLimit));
        linalg::Matrix a = linalg::dense_adjacency(g);
        if (normalized) {
            NormalizedOperator check(g);  // validates degrees
            (void)check;
            Vector s(static_cast<Eigen::Index>(n));
            for (std::size_t i = 0; i < n; ++i) s[static_cast<Eigen::Index>(i)] = 1.0 / std::sqrt(g.weighted_degree(i));
            a = s.asDiagonal() * a * s.asDiagonal();
        }
        auto all = linalg::dense_spectrum(a);
        rep.eigenvalues.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(r));
        rep.histogram = histogram(all, *histogram_bins);
    } else if (normalized) {
        NormalizedOperator op(g);
        rep.eigenvalues = linalg::top_eigenpairs(op.symmetric(), r, opts).values;
    } else {
        rep.eigenvalues = linalg::top_eigenpairs(linalg::adjacency_operator(g), r, opts).values;
    }
    const auto& e = rep.eigenvalues;
    rep.gap_12 = e.size() > 1 ? e[0] - e[1] : kNaN;
    rep.gap_23 = e.size() > 2 ? e[1] - e[2] : kNaN;
    rep.ratio_32 = e.size() > 2 ? e[2] / e[1] : kNaN;
    return rep;
}

void write_spectrum_csv(std::ostream& out, const SpectrumReport& report) {
    out << "index,eigenvalue\n";
    out.precision(17);
    for (std::size_t k = 0; k < report.eigenvalues.size(); ++k) out << k << ',' << report.eigenvalues[k] << '\n';
}

void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins) {
    out << "bin_left,bin_right,count\n";
    out.precision(17);
    for (const auto& b : bins) out << b.left << ',' << b.right << ',' << b.count << '\n';
}

}  // namespace zsync
