#pragma once

// Name-based dispatch over every solver, shared by the command-line tool and
// the experiment presets.

#include <string>
#include <vector>

#include "zsync/anchored.hpp"
#include "zsync/ksync.hpp"
#include "zsync/mps.hpp"
#include "zsync/sdp.hpp"
#include "zsync/spectral.hpp"

namespace zsync {

struct MethodSettings {
    SpectralOptions spectral;
    SdpOptions sdp;
    QcqpOptions qcqp;
    MpsOptions mps;
    PartitionGraphOptions partition_graph;
};

enum class SideInput { none, anchors, partition };

/// eig, eig-raw, laplacian, sdp, sdp-y, sdp-xy, qcqp-i, qcqp-d, mps, eig-k,
/// mveig-k, part-k, sdp-k, mps-k.
const std::vector<std::string>& method_names();
bool is_method(const std::string& name);
SideInput required_input(const std::string& method);

/// Runs `method`. `anchors` is used by anchored methods and by mps; the
/// others ignore it. SDP methods propagate SdpConvergenceError when the sweep
/// cap is hit and `settings.sdp.throw_on_cap` is set.
SyncSolution solve_method(const std::string& method, const SignedGraph& g, const AnchorSet& anchors,
                          const Partition* partition, const MethodSettings& settings = {});

}  // namespace zsync
