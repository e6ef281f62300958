#include "zsync/solve.hpp"

#include <algorithm>

namespace zsync {

const std::vector<std::string>& method_names() {
    static const std::vector<std::string> names{"eig",    "eig-raw", "laplacian", "sdp",     "sdp-y",
                                                "sdp-xy", "qcqp-i",  "qcqp-d",    "mps",     "eig-k",
                                                "mveig-k", "part-k", "sdp-k",     "mps-k"};
    return names;
}

bool is_method(const std::string& name) {
    const auto& m = method_names();
    return std::find(m.begin(), m.end(), name) != m.end();
}

SideInput required_input(const std::string& method) {
    if (method == "sdp-y" || method == "sdp-xy" || method == "qcqp-i" || method == "qcqp-d")
        return SideInput::anchors;
    if (method.size() > 2 && method.compare(method.size() - 2, 2, "-k") == 0) return SideInput::partition;
    return SideInput::none;
}

SyncSolution solve_method(const std::string& method, const SignedGraph& g, const AnchorSet& anchors,
                          const Partition* partition, const MethodSettings& s) {
    if (!is_method(method)) throw ParameterError("unknown method: " + method);
    const SideInput need = required_input(method);
    if (need == SideInput::anchors && anchors.empty()) throw ParameterError(method + " needs anchors");
    if (need == SideInput::partition && !partition) throw ParameterError(method + " needs a partition");

    if (method == "eig") return eig_sync(g, true, s.spectral);
    if (method == "eig-raw") return eig_sync(g, false, s.spectral);
    if (method == "laplacian") return laplacian_sync(g, s.spectral);
    if (method == "sdp") return sdp_sync(g, s.sdp).rounded;
    if (method == "sdp-y") return sdp_sync_anchored_Y(g, anchors, s.sdp).rounded;
    if (method == "sdp-xy") return sdp_sync_anchored_XY(g, anchors, s.sdp).rounded;
    if (method == "qcqp-i") return qcqp_sync_identity(build_anchored_system(g, anchors), s.qcqp);
    if (method == "qcqp-d") return qcqp_sync_degree(build_anchored_system(g, anchors), s.qcqp);
    if (method == "mps") return mps_sync(g, anchors, s.mps);
    if (method == "sdp-k") return sdp_ksync(g, *partition, s.sdp).rounded;
    KsyncSuiteOptions k;
    k.spectral = s.spectral;
    k.mps = s.mps;
    k.partition_graph = s.partition_graph;
    return solve_ksync(method, g, *partition, k);
}

}  // namespace zsync
