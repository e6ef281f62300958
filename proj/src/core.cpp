#include "zsync/core.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace zsync {

SignedGraph::SignedGraph(std::size_t n, std::vector<Edge> edges) : n_(n) {
    if (n == 0) throw ParameterError("graph must have at least one node");
    for (auto& e : edges) {
        if (e.i == e.j) throw ParameterError("self-loop at node " + std::to_string(e.i));
        if (e.i >= n || e.j >= n)
            throw ParameterError("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                                 ") out of range for n=" + std::to_string(n));
        if (!std::isfinite(e.w) || e.w == 0.0 || e.w < -1.0 || e.w > 1.0)
            throw ParameterError("edge weight must be finite, nonzero and in [-1,1]");
        if (e.i > e.j) std::swap(e.i, e.j);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    for (std::size_t k = 1; k < edges.size(); ++k) {
        if (edges[k].i == edges[k - 1].i && edges[k].j == edges[k - 1].j)
            throw ParameterError("duplicate edge (" + std::to_string(edges[k].i) + "," +
                                 std::to_string(edges[k].j) + ")");
    }
    edges_ = std::move(edges);

    std::vector<std::size_t> count(n, 0);
    for (const auto& e : edges_) {
        ++count[e.i];
        ++count[e.j];
    }
    offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + count[i];
    adj_.resize(offsets_[n]);
    wdeg_.assign(n, 0.0);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        const auto& e = edges_[k];
        adj_[fill[e.i]++] = {e.j, e.w, k};
        adj_[fill[e.j]++] = {e.i, e.w, k};
        wdeg_[e.i] += std::abs(e.w);
        wdeg_[e.j] += std::abs(e.w);
    }
    // Edges are sorted, so each adjacency row is already ordered by neighbor
    // for the upper half; sort rows to make the lower half ordered too.
    for (std::size_t i = 0; i < n; ++i) {
        std::sort(adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
                  adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]),
                  [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    }
}

double SignedGraph::weight(std::size_t i, std::size_t j) const {
    auto row = neighbors(i);
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const Neighbor& nb, std::size_t v) { return nb.node < v; });
    return (it != row.end() && it->node == j) ? it->w : 0.0;
}

void SignedGraph::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != n_ || y.size() != n_) throw DimensionError("multiply: size mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (const auto& nb : neighbors(i)) acc += nb.w * x[nb.node];
        y[i] = acc;
    }
}

GroundTruth::GroundTruth(std::vector<int> z) : z_(std::move(z)) {
    for (int v : z_)
        if (v != 1 && v != -1) throw ParameterError("ground truth entries must be +1 or -1");
}

GroundTruth GroundTruth::flipped() const {
    std::vector<int> out(z_);
    for (int& v : out) v = -v;
    return GroundTruth(std::move(out));
}

Partition::Partition(std::vector<std::size_t> block_of) : block_of_(std::move(block_of)) {
    std::size_t k = 0;
    for (auto b : block_of_) k = std::max(k, b + 1);
    members_.assign(k, {});
    for (std::size_t i = 0; i < block_of_.size(); ++i) members_[block_of_[i]].push_back(i);
    for (std::size_t b = 0; b < k; ++b)
        if (members_[b].empty()) throw ParameterError("partition block " + std::to_string(b) + " is empty");
}

Partition Partition::singletons(std::size_t n) {
    std::vector<std::size_t> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = i;
    return Partition(std::move(b));
}

AnchorSet::AnchorSet(std::size_t n, std::map<std::size_t, int> anchors)
    : n_(n), anchors_(std::move(anchors)) {
    for (const auto& [i, a] : anchors_) {
        if (i >= n) throw ParameterError("anchor index " + std::to_string(i) + " out of range");
        if (a != 1 && a != -1) throw ParameterError("anchor values must be +1 or -1");
    }
}

SyncSolution solution_from_scores(std::vector<double> scores, std::string method) {
    SyncSolution sol;
    sol.estimates.resize(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) sol.estimates[i] = sign_of(scores[i]);
    sol.scores = std::move(scores);
    sol.method = std::move(method);
    return sol;
}

SyncSolution flip(const SyncSolution& sol) {
    SyncSolution out = sol;
    for (auto& e : out.estimates) e = -e;
    for (auto& s : out.scores) s = -s;
    return out;
}

namespace {

void check_lengths(std::size_t a, std::size_t b) {
    if (a != b)
        throw DimensionError("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace

double error_rate(std::span<const int> estimates, const GroundTruth& truth,
                  const std::vector<bool>& ignore) {
    check_lengths(estimates.size(), truth.size());
    if (!ignore.empty()) check_lengths(ignore.size(), truth.size());
    std::size_t counted = 0, wrong = 0;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        if (!ignore.empty() && ignore[i]) continue;
        ++counted;
        if (estimates[i] != truth[i]) ++wrong;
    }
    if (counted == 0) return 0.0;
    return static_cast<double>(std::min(wrong, counted - wrong)) / static_cast<double>(counted);
}

double error_rate(const SyncSolution& sol, const GroundTruth& truth, const std::vector<bool>& ignore) {
    return error_rate(std::span<const int>(sol.estimates), truth, ignore);
}

SyncSolution align_global_sign(const SyncSolution& sol, const GroundTruth& truth) {
    check_lengths(sol.size(), truth.size());
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < sol.size(); ++i)
        if (sol.estimates[i] != truth[i]) ++wrong;
    if (2 * wrong > sol.size()) return flip(sol);
    return sol;
}

double objective_value(const SignedGraph& g, std::span<const int> x) {
    check_lengths(x.size(), g.size());
    double total = 0.0;
    for (const auto& e : g.edges()) total += 2.0 * e.w * x[e.i] * x[e.j];
    return total;
}

std::vector<std::size_t> connected_components(const SignedGraph& g, std::size_t* count) {
    const std::size_t n = g.size();
    const std::size_t unset = n;
    std::vector<std::size_t> comp(n, unset);
    std::size_t c = 0;
    std::queue<std::size_t> q;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] != unset) continue;
        comp[s] = c;
        q.push(s);
        while (!q.empty()) {
            auto u = q.front();
            q.pop();
            for (const auto& nb : g.neighbors(u)) {
                if (comp[nb.node] == unset) {
                    comp[nb.node] = c;
                    q.push(nb.node);
                }
            }
        }
        ++c;
    }
    if (count) *count = c;
    return comp;
}

bool is_connected(const SignedGraph& g) {
    std::size_t c = 0;
    connected_components(g, &c);
    return c == 1;
}

SignedGraph induced_subgraph(const SignedGraph& g, std::span<const std::size_t> nodes) {
    std::vector<std::size_t> local(g.size(), g.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) local[nodes[k]] = k;
    std::vector<Edge> edges;
    for (const auto& e : g.edges()) {
        if (local[e.i] != g.size() && local[e.j] != g.size())
            edges.push_back({local[e.i], local[e.j], e.w});
    }
    return SignedGraph(nodes.size(), std::move(edges));
}

SignedGraph gauge_transform(const SignedGraph& g, std::span<const int> s) {
    check_lengths(s.size(), g.size());
    std::vector<Edge> edges = g.edges();
    for (auto& e : edges) e.w *= s[e.i] * s[e.j];
    return SignedGraph(g.size(), std::move(edges));
}

}  // namespace zsync
