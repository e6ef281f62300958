#pragma once

// Independent reference computations for the tests: exhaustive search over
// sign vectors and dense eigensolves built straight from edge lists. Nothing
// here calls into the solver code.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "zsync/core.hpp"

namespace oracle {

using zsync::SignedGraph;

inline Eigen::MatrixXd dense(const SignedGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : g.edges()) {
        z(static_cast<Eigen::Index>(e.i), static_cast<Eigen::Index>(e.j)) = e.w;
        z(static_cast<Eigen::Index>(e.j), static_cast<Eigen::Index>(e.i)) = e.w;
    }
    return z;
}

/// x^T Z x with zero diagonal, by double loop.
inline double quadratic_form(const Eigen::MatrixXd& z, const std::vector<int>& x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < z.rows(); ++i)
        for (Eigen::Index j = 0; j < z.cols(); ++j)
            if (i != j) s += z(i, j) * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
    return s;
}

struct Optimum {
    double value = -std::numeric_limits<double>::infinity();
    std::vector<int> x;
    std::size_t maximizers = 0;  // count of x attaining value (within 1e-9)
};

/// max x^T Z x over x in {-1,1}^n with x_i fixed for pinned nodes and x
/// constant on each block of `block` (if given). Enumerates 2^free.
inline Optimum brute_force(const SignedGraph& g, const std::map<std::size_t, int>& pinned = {},
                           const std::vector<std::size_t>* block = nullptr) {
    const std::size_t n = g.size();
    const Eigen::MatrixXd z = dense(g);
    // Free variables: one per block (or node), excluding pinned ones.
    std::vector<std::size_t> group(n);
    std::size_t groups = 0;
    if (block) {
        for (std::size_t i = 0; i < n; ++i) groups = std::max(groups, (*block)[i] + 1);
        group = *block;
    } else {
        for (std::size_t i = 0; i < n; ++i) group[i] = i;
        groups = n;
    }
    std::vector<int> fixed(groups, 0);
    for (auto [i, v] : pinned) fixed[group[i]] = v;
    std::vector<std::size_t> free;
    for (std::size_t b = 0; b < groups; ++b)
        if (!fixed[b]) free.push_back(b);

    Optimum best;
    std::vector<int> val(groups), x(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free.size()); ++mask) {
        for (std::size_t b = 0; b < groups; ++b) val[b] = fixed[b];
        for (std::size_t k = 0; k < free.size(); ++k) val[free[k]] = (mask >> k) & 1 ? -1 : 1;
        for (std::size_t i = 0; i < n; ++i) x[i] = val[group[i]];
        const double v = quadratic_form(z, x);
        if (v > best.value + 1e-9) {
            best.value = v;
            best.x = x;
            best.maximizers = 1;
        } else if (std::abs(v - best.value) <= 1e-9) {
            ++best.maximizers;
        }
    }
    return best;
}

/// Eigenvalues (descending) and eigenvectors of a dense symmetric matrix.
struct DenseEig {
    std::vector<double> values;
    Eigen::MatrixXd vectors;  // column k pairs with values[k]
};

inline DenseEig eig(const Eigen::MatrixXd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const Eigen::Index n = a.rows();
    DenseEig out;
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values.push_back(es.eigenvalues()[n - 1 - k]);
        out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
    }
    return out;
}

/// D^{-1/2} Z D^{-1/2} with D the absolute row sums.
inline Eigen::MatrixXd sym_normalized(const SignedGraph& g) {
    Eigen::MatrixXd z = dense(g);
    Eigen::VectorXd d = z.cwiseAbs().rowwise().sum();
    Eigen::VectorXd s = d.cwiseSqrt().cwiseInverse();
    return s.asDiagonal() * z * s.asDiagonal();
}

/// Random signed graph for property tests: each pair present with
/// probability `density`, weight +-1 (or uniform in [-1,1] \ {0} if weighted).
inline SignedGraph random_graph(std::mt19937_64& rng, std::size_t n, double density, bool weighted = false) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<zsync::Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (u(rng) >= density) continue;
            double w = u(rng) < 0.5 ? -1.0 : 1.0;
            if (weighted) w *= 0.05 + 0.95 * u(rng);
            edges.push_back({i, j, w});
        }
    return SignedGraph(n, std::move(edges));
}

/// Connected variant: a random spanning path is added first.
inline SignedGraph random_connected_graph(std::mt19937_64& rng, std::size_t n, double density, bool weighted = false) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::map<std::pair<std::size_t, std::size_t>, double> w;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto sample = [&] {
        double v = u(rng) < 0.5 ? -1.0 : 1.0;
        return weighted ? v * (0.05 + 0.95 * u(rng)) : v;
    };
    for (std::size_t k = 0; k + 1 < n; ++k)
        w[{std::min(order[k], order[k + 1]), std::max(order[k], order[k + 1])}] = sample();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!w.count({i, j}) && u(rng) < density) w[{i, j}] = sample();
    std::vector<zsync::Edge> edges;
    for (auto [key, v] : w) edges.push_back({key.first, key.second, v});
    return SignedGraph(n, std::move(edges));
}

/// Noiseless graph: every edge equals z_i z_j (times a positive weight).
inline SignedGraph planted(const SignedGraph& shape, const std::vector<int>& z) {
    std::vector<zsync::Edge> edges;
    for (const auto& e : shape.edges()) edges.push_back({e.i, e.j, std::abs(e.w) * z[e.i] * z[e.j]});
    return SignedGraph(shape.size(), std::move(edges));
}

inline std::vector<int> random_signs(std::mt19937_64& rng, std::size_t n) {
    std::vector<int> z(n);
    for (auto& v : z) v = (rng() & 1) ? 1 : -1;
    return z;
}

/// Hamming-based error up to global sign, by direct count.
inline double tau(const std::vector<int>& est, const std::vector<int>& truth) {
    std::size_t h = 0;
    for (std::size_t i = 0; i < est.size(); ++i) h += est[i] != truth[i];
    return static_cast<double>(std::min(h, est.size() - h)) / static_cast<double>(est.size());
}

}  // namespace oracle
