#pragma once

// Seeded random instance generators for the measurement-graph and noise
// models used in the experiments. Every generator is a pure function of its
// parameters and seed.

#include <cstdint>
#include <optional>

#include "zsync/core.hpp"

namespace zsync {

struct NoiseSpec {
    double alpha = 1.0;  // edge probability
    double eta = 0.0;    // flip probability, eta = 1 - p
    std::uint64_t seed = 0;

    void validate() const;
};

struct Instance {
    SignedGraph graph;
    GroundTruth truth;
};

struct PartitionedInstance {
    SignedGraph graph;
    GroundTruth truth;
    Partition partition;
};

/// Uniform +-1 labels.
GroundTruth random_truth(std::size_t n, std::uint64_t seed);

/// G(n, alpha) with every present edge carrying z_i z_j, flipped with
/// probability eta.
Instance erdos_renyi_instance(std::size_t n, const NoiseSpec& spec,
                              const std::optional<GroundTruth>& truth = std::nullopt);

/// Near d-regular simple graph on n nodes (random pairing with per-pair
/// rejection of loops and repeated edges). Returned as upper-triangle pairs.
std::vector<std::pair<std::size_t, std::size_t>> random_regular_pairs(std::size_t n, std::size_t d,
                                                                      std::uint64_t seed);

/// K_n whose flipped edges form a near d-regular subgraph; eta ~ d/(n-1).
Instance complete_with_regular_bad(std::size_t n, std::size_t d, std::uint64_t seed);

/// Barabasi-Albert graph grown from a clique on m_pa + 1 nodes, each new node
/// attaching m_pa edges proportionally to degree. Each edge is flipped with
/// probability d/(n-1).
Instance preferential_attachment_instance(std::size_t n, std::size_t m_pa, double bad_degree,
                                          std::uint64_t seed);

struct CongressModelSpec {
    std::size_t congresses = 10;  // C
    std::size_t senators = 20;    // S per congress
    double gamma = 0.75;          // persistence probability
    double alpha = 0.5;           // within-congress edge probability
    double eta = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Layered congress model: node t*S + s is seat s of congress t. A senator
/// keeps their seat in congress t+1 with probability gamma, otherwise a fresh
/// senator takes it. All occurrences of one senator form a partition block
/// and are pairwise joined by noiseless +1 edges.
PartitionedInstance congress_model_I(const CongressModelSpec& spec);

/// n nodes in k contiguous equal blocks. Intra-block pairs are complete +1
/// edges; inter-block pairs are present with probability alpha and flipped
/// with probability eta.
PartitionedInstance equal_partition_benchmark_II(std::size_t n, std::size_t k, double alpha, double eta,
                                                 std::uint64_t seed);

/// h distinct nodes chosen uniformly, carrying their true values.
AnchorSet random_anchors(const GroundTruth& truth, std::size_t h, std::uint64_t seed);

}  // namespace zsync
