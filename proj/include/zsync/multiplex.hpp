#pragma once

// Multiplex voting networks: per-layer similarity matrices (fraction of
// agreeing votes) with an identity map linking occurrences of one entity
// across layers. Layer t occupies the global index range
// [offset(t), offset(t) + size(t)).

#include <array>
#include <string>

#include "zsync/core.hpp"
#include "zsync/linalg.hpp"

namespace zsync {

struct MultiplexVoting {
    std::vector<linalg::Matrix> layers;              // symmetric, entries in [0,1]
    std::vector<std::vector<std::size_t>> entity;    // [layer][local] -> entity id
    std::vector<std::vector<std::string>> labels;    // [layer][local], may be empty
    double epsilon = 1.0;                            // coupling weight

    std::size_t layer_count() const noexcept { return layers.size(); }
    std::size_t node_count() const;
    std::size_t offset(std::size_t layer) const;
    bool has_labels() const noexcept { return !labels.empty(); }
    /// Throws on asymmetric layers, entries outside [0,1], an entity repeated
    /// within a layer, or size mismatches.
    void validate() const;
};

enum class Coupling { categorical, ordinal };
enum class Transform { sign, linear };

/// W = H + epsilon Omega. H holds the layers on its diagonal blocks; Omega
/// links every pair of occurrences of one entity (categorical) or only
/// occurrences in consecutive layers where the entity appears (ordinal).
/// Zero entries are not stored; epsilon = 0 adds no coupling.
SignedGraph assemble_supra(const MultiplexVoting& m, Coupling coupling = Coupling::categorical);

struct SignedMultiplex {
    SignedGraph graph;
    Partition partition;  // one block per entity
    std::size_t dropped = 0;          // intra-layer entries mapped to 0
    std::size_t coupling_pairs = 0;
};

/// Intra-layer entries become sign(2 W - 1) (sign transform) or 2 W - 1
/// (linear); entries equal to 0.5 carry no information and are dropped.
/// Coupling entries carry epsilon.
SignedMultiplex sign_transform(const MultiplexVoting& m, Transform transform = Transform::sign,
                               Coupling coupling = Coupling::categorical);

/// Drops edges with |w| < theta. Edges inside a block of `keep` (coupling
/// edges) are exempt. Sets *disconnected when the result has more
/// components than the input.
SignedGraph threshold_entries(const SignedGraph& g, double theta, const Partition* keep = nullptr,
                              bool* disconnected = nullptr);

struct MisclassificationReport {
    std::array<std::string, 2> parties;  // parties[0] is scored as +1
    std::vector<std::array<std::size_t, 2>> misclassified;  // [layer][party]
    std::vector<std::array<std::size_t, 2>> totals;         // [layer][party]
    std::size_t excluded = 0;  // nodes with neither label
    bool flipped = false;      // estimates were globally flipped to align

    double accuracy(std::size_t party) const;
};

/// Per-layer misclassification counts per party after global-sign alignment.
/// Nodes labelled with neither party are excluded.
MisclassificationReport misclassification_report(const SyncSolution& sol, const MultiplexVoting& m,
                                                 const std::array<std::string, 2>& parties = {"D", "R"});

/// `layer,party,misclassified,total` rows.
void write_misclassification_csv(std::ostream& out, const MisclassificationReport& report);

}  // namespace zsync
