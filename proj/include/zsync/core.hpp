#pragma once

// Domain types shared by every synchronization solver, plus the error metric
// and global-sign utilities.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace zsync {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

/// A node has zero weighted degree where a solver needs it to be positive.
class DegenerateError : public Error {
public:
    DegenerateError(const std::string& what, std::size_t node)
        : Error(what + " (node " + std::to_string(node) + ")"), node_(node) {}
    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class SizeError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Graph and labels
// ---------------------------------------------------------------------------

struct Edge {
    std::size_t i;
    std::size_t j;
    double w;

    bool operator==(const Edge&) const = default;
};

struct Neighbor {
    std::size_t node;
    double w;
    std::size_t edge;  // index into SignedGraph::edges()
};

/// Sparse symmetric measurement matrix Z stored as its strict upper triangle.
///
/// Construction normalizes every edge to i < j, sorts edges lexicographically
/// and rejects self-loops, duplicates, non-finite weights and weights outside
/// [-1, 1] or equal to zero. The object is immutable afterwards.
class SignedGraph {
public:
    SignedGraph() = default;
    SignedGraph(std::size_t n, std::vector<Edge> edges);

    std::size_t size() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    std::span<const Neighbor> neighbors(std::size_t i) const {
        return {adj_.data() + offsets_[i], adj_.data() + offsets_[i + 1]};
    }
    std::size_t degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
    /// D_ii = sum_j |Z_ij|.
    double weighted_degree(std::size_t i) const { return wdeg_[i]; }
    const std::vector<double>& weighted_degrees() const noexcept { return wdeg_; }

    /// Z_ij, zero when the pair is not an edge.
    double weight(std::size_t i, std::size_t j) const;

    /// y = Z x (diagonal treated as zero).
    void multiply(std::span<const double> x, std::span<double> y) const;

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Neighbor> adj_;
    std::vector<double> wdeg_;
};

/// Hidden +-1 assignment.
class GroundTruth {
public:
    GroundTruth() = default;
    explicit GroundTruth(std::vector<int> z);

    std::size_t size() const noexcept { return z_.size(); }
    int operator[](std::size_t i) const { return z_[i]; }
    const std::vector<int>& values() const noexcept { return z_; }
    GroundTruth flipped() const;

private:
    std::vector<int> z_;
};

/// Disjoint cover of the nodes by k non-empty blocks.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<std::size_t> block_of);

    /// Every node in its own block.
    static Partition singletons(std::size_t n);

    std::size_t size() const noexcept { return block_of_.size(); }
    std::size_t block_count() const noexcept { return members_.size(); }
    std::size_t block_of(std::size_t i) const { return block_of_[i]; }
    const std::vector<std::size_t>& labels() const noexcept { return block_of_; }
    const std::vector<std::size_t>& members(std::size_t block) const { return members_[block]; }

private:
    std::vector<std::size_t> block_of_;
    std::vector<std::vector<std::size_t>> members_;
};

/// Nodes with known sign. Ordered by node index.
class AnchorSet {
public:
    AnchorSet() = default;
    AnchorSet(std::size_t n, std::map<std::size_t, int> anchors);

    bool empty() const noexcept { return anchors_.empty(); }
    std::size_t size() const noexcept { return anchors_.size(); }
    std::size_t node_count() const noexcept { return n_; }
    bool contains(std::size_t i) const { return anchors_.count(i) != 0; }
    int value(std::size_t i) const { return anchors_.at(i); }
    const std::map<std::size_t, int>& entries() const noexcept { return anchors_; }

private:
    std::size_t n_ = 0;
    std::map<std::size_t, int> anchors_;
};

using Diagnostics = std::map<std::string, double>;

struct SyncSolution {
    std::vector<int> estimates;
    std::vector<double> scores;
    std::string method;
    Diagnostics diagnostics;

    std::size_t size() const noexcept { return estimates.size(); }
};

/// +1 for s >= 0, -1 otherwise. Exact zero resolves to +1.
inline int sign_of(double s) noexcept { return s >= 0.0 ? 1 : -1; }

/// Builds a solution whose estimates are the signs of `scores`.
SyncSolution solution_from_scores(std::vector<double> scores, std::string method);

SyncSolution flip(const SyncSolution& sol);

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

/// Fraction of misclassified nodes, minimized over the global sign flip.
/// Nodes with ignore[i] == true are excluded from both the count and n.
double error_rate(const SyncSolution& sol, const GroundTruth& truth,
                  const std::vector<bool>& ignore = {});
double error_rate(std::span<const int> estimates, const GroundTruth& truth,
                  const std::vector<bool>& ignore = {});

/// Returns sol or its global flip, whichever is closer to truth in Hamming
/// distance. Ties keep sol.
SyncSolution align_global_sign(const SyncSolution& sol, const GroundTruth& truth);

/// x^T Z x with the diagonal excluded: sum over edges of 2 w x_i x_j.
double objective_value(const SignedGraph& g, std::span<const int> x);

// ---------------------------------------------------------------------------
// Graph utilities
// ---------------------------------------------------------------------------

/// Connected-component label per node, components numbered by smallest member.
std::vector<std::size_t> connected_components(const SignedGraph& g, std::size_t* count = nullptr);

bool is_connected(const SignedGraph& g);

/// Subgraph induced by `nodes` (new index k corresponds to nodes[k]).
SignedGraph induced_subgraph(const SignedGraph& g, std::span<const std::size_t> nodes);

/// Conjugation by diag(s): every edge weight becomes s_i s_j w_ij.
SignedGraph gauge_transform(const SignedGraph& g, std::span<const int> s);

}  // namespace zsync
