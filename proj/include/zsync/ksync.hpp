#pragma once

// Synchronization with a partition constraint (k-SYNC): every block of the
// partition shares one unknown sign.

#include <functional>
#include <string>

#include "zsync/core.hpp"
#include "zsync/generators.hpp"
#include "zsync/mps.hpp"
#include "zsync/sdp.hpp"
#include "zsync/spectral.hpp"

namespace zsync {

struct PartitionGraphOptions {
    /// Use sign(E+ - E-) instead of the majority fraction.
    bool sign_only = false;
    /// Tally |w| instead of edge counts (weighted inputs).
    bool weight_mass = false;
};

/// Quotient graph on the k blocks. Inter-block edges are tallied by sign;
/// the weight is E+/E when E+ > E-, -E-/E when E- > E+, and absent on ties.
struct PartitionGraph {
    std::size_t k = 0;
    SignedGraph weights;
    /// (E+, E-) per adjacent block pair (u < v).
    std::map<std::pair<std::size_t, std::size_t>, std::pair<double, double>> counts;
};

PartitionGraph build_partition_graph(const SignedGraph& g, const Partition& partition,
                                     const PartitionGraphOptions& opts = {});

/// eig_sync on g; the partition is ignored.
SyncSolution eig_ksync(const SignedGraph& g, const Partition& partition, const SpectralOptions& opts = {});

/// eig_ksync followed by a per-block majority vote (ties go to +1).
/// Scores are the block mean of the eigenvector signs.
SyncSolution mveig_ksync(const SignedGraph& g, const Partition& partition, const SpectralOptions& opts = {});

/// Normalized eigenvector synchronization of the partition graph; each node
/// inherits its block's sign. Blocks without inter-block edges get +1.
SyncSolution part_ksync(const SignedGraph& g, const Partition& partition, const PartitionGraphOptions& pg = {},
                        const SpectralOptions& opts = {});

struct KsyncSuiteOptions {
    SpectralOptions spectral;
    SdpOptions sdp;
    MpsOptions mps;
    PartitionGraphOptions partition_graph;
    /// Wall-clock timings make output non-reproducible, so they are opt-in.
    bool record_timing = false;
    std::size_t jobs = 1;
};

const std::vector<std::string>& ksync_methods();  // eig-k, mveig-k, part-k, sdp-k, mps-k

/// Dispatch by method name. SDP-k returns its best iterate on hitting the
/// sweep cap (diagnostic converged = 0).
SyncSolution solve_ksync(const std::string& method, const SignedGraph& g, const Partition& partition,
                         const KsyncSuiteOptions& opts = {});

struct KsyncRow {
    std::string method;
    double eta = 0.0;
    std::uint64_t seed = 0;
    double tau = 0.0;
    double iterations = 0.0;
    double wall_ms = -1.0;  // negative when timing is not recorded
};

/// Every method on one instance.
std::vector<KsyncRow> run_ksync_suite(const SignedGraph& g, const Partition& partition, const GroundTruth& truth,
                                      const std::vector<std::string>& methods, double eta, std::uint64_t seed,
                                      const KsyncSuiteOptions& opts = {});

/// Every method on make(seed) for each seed, trials in parallel. Row order is
/// seed-major, then method order.
std::vector<KsyncRow> run_ksync_suite(const std::function<PartitionedInstance(std::uint64_t)>& make,
                                      const std::vector<std::string>& methods, double eta,
                                      const std::vector<std::uint64_t>& seeds, const KsyncSuiteOptions& opts = {});

/// Header `method,eta,seed,tau,iterations,wall_ms`; wall_ms is empty when not recorded.
void write_ksync_csv(std::ostream& out, const std::vector<KsyncRow>& rows);

}  // namespace zsync
