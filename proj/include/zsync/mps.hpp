#pragma once

// Message-passing synchronization. Every round first re-estimates, for each
// edge, the posterior probability that its observed sign is correct (Bayes
// rule with channel correctness p), then recomputes each node's belief of
// being +1 from its neighbours' beliefs weighted by those edge confidences.
// Anchors (or a pinned root when none are given) inject the sign information.

#include <cstdint>
#include <optional>

#include "zsync/core.hpp"

namespace zsync {

struct BeliefTraceRow {
    std::size_t iteration;
    std::size_t node;
    double p_plus;
};

struct MpsOptions {
    double channel_p = 0.8;  // assumed probability that a measurement is correct, in (0.5, 1]
    std::size_t max_iter = 200;
    double tol = 1e-6;  // on max |change of p_plus| per round
    /// p <- (1 - damping) p_new + damping p_old. Zero reproduces the plain rule.
    double damping = 0.0;
    /// Draw the root of anchor-free components uniformly with this seed
    /// instead of taking the highest-degree node.
    std::optional<std::uint64_t> random_root_seed;
    /// k-SYNC variant: intra-block edges are pinned correct and every block
    /// carries the median belief of its members.
    const Partition* partition = nullptr;
    /// When set, receives p_plus of every node after every round.
    std::vector<BeliefTraceRow>* trace = nullptr;
};

struct BeliefState {
    std::vector<double> p_plus;   // per node
    std::vector<double> w;        // per edge: confidence that the observed sign is correct
    std::vector<int> pinned;      // per node: 0 free, +-1 fixed value
    double channel_p = 0.8;
    std::size_t iteration = 0;
};

/// Probability that x_i x_j = +1 under independent node beliefs.
inline double agreement_probability(double pi, double pj) noexcept { return pi * pj + (1.0 - pi) * (1.0 - pj); }

/// Edge confidence for an observed sign (+1 or -1). A zero denominator only
/// arises when p = 1 and the beliefs contradict the observation with
/// certainty; the confidence is then 0.
double mps_edge_update(double p_plus_i, double p_plus_j, int observed_sign, double channel_p);

/// Normalized belief that node i is +1 given neighbour beliefs and the edge
/// confidences in `state`. Contributions are scaled by |Z_ij|. With no
/// information (both sums zero) the belief is 0.5.
double mps_node_update(const SignedGraph& g, const BeliefState& state, std::size_t i);

/// Beliefs of 0.5 everywhere except pinned nodes.
BeliefState mps_initial_state(const SignedGraph& g, const std::vector<int>& pinned, double channel_p);

/// Pinned node per component: anchors where available, otherwise a root.
std::vector<int> mps_pins(const SignedGraph& g, const AnchorSet& anchors, const MpsOptions& opts,
                          std::size_t* roots = nullptr);

/// One synchronous round; returns max |change of p_plus|.
double mps_round(const SignedGraph& g, BeliefState& state, const MpsOptions& opts);

/// Scores are 2 p_plus - 1, estimates sign(p_plus - 0.5).
SyncSolution mps_sync(const SignedGraph& g, const AnchorSet& anchors, const MpsOptions& opts = {});

}  // namespace zsync
