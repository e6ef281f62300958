#include "zsync/multiplex.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>

namespace zsync {

std::size_t MultiplexVoting::node_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += static_cast<std::size_t>(l.rows());
    return n;
}

std::size_t MultiplexVoting::offset(std::size_t layer) const {
    std::size_t n = 0;
    for (std::size_t t = 0; t < layer; ++t) n += static_cast<std::size_t>(layers[t].rows());
    return n;
}

void MultiplexVoting::validate() const {
    if (layers.empty()) throw DimensionError("multiplex has no layers");
    if (entity.size() != layers.size()) throw DimensionError("identity map does not cover every layer");
    if (!labels.empty() && labels.size() != layers.size()) throw DimensionError("labels do not cover every layer");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ParameterError("epsilon must lie in [0,1]");
    for (std::size_t t = 0; t < layers.size(); ++t) {
        const auto& w = layers[t];
        if (w.rows() != w.cols()) throw DimensionError("layer " + std::to_string(t) + " is not square");
        if (entity[t].size() != static_cast<std::size_t>(w.rows()))
            throw DimensionError("identity map size mismatch in layer " + std::to_string(t));
        if (!labels.empty() && labels[t].size() != entity[t].size())
            throw DimensionError("label count mismatch in layer " + std::to_string(t));
        for (Eigen::Index i = 0; i < w.rows(); ++i)
            for (Eigen::Index j = 0; j < w.cols(); ++j) {
                if (!(w(i, j) >= 0.0 && w(i, j) <= 1.0))
                    throw ParameterError("layer " + std::to_string(t) + " has an entry outside [0,1]");
                if (w(i, j) != w(j, i)) throw ParameterError("layer " + std::to_string(t) + " is not symmetric");
            }
        std::vector<std::size_t> ids = entity[t];
        std::sort(ids.begin(), ids.end());
        if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
            throw ParameterError("entity repeated within layer " + std::to_string(t));
    }
}

namespace {

// Global indices of each entity's occurrences, in layer order; entities in
// order of first appearance.
std::vector<std::vector<std::size_t>> occurrences(const MultiplexVoting& m) {
    std::unordered_map<std::size_t, std::size_t> block_of_entity;
    std::vector<std::vector<std::size_t>> out;
    std::size_t base = 0;
    for (std::size_t t = 0; t < m.layer_count(); ++t) {
        for (std::size_t local = 0; local < m.entity[t].size(); ++local) {
            auto [it, fresh] = block_of_entity.try_emplace(m.entity[t][local], out.size());
            if (fresh) out.emplace_back();
            out[it->second].push_back(base + local);
        }
        base += m.entity[t].size();
    }
    return out;
}

std::size_t add_coupling(const MultiplexVoting& m, Coupling coupling, std::vector<Edge>& edges) {
    if (m.epsilon == 0.0) return 0;
    std::size_t pairs = 0;
    for (const auto& occ : occurrences(m)) {
        for (std::size_t a = 0; a < occ.size(); ++a) {
            const std::size_t last = coupling == Coupling::categorical ? occ.size() : std::min(occ.size(), a + 2);
            for (std::size_t b = a + 1; b < last; ++b) {
                edges.push_back({occ[a], occ[b], m.epsilon});
                ++pairs;
            }
        }
    }
    return pairs;
}

template <class Map>
std::size_t add_layers(const MultiplexVoting& m, std::vector<Edge>& edges, Map&& map) {
    std::size_t dropped = 0, base = 0;
    for (const auto& w : m.layers) {
        for (Eigen::Index i = 0; i < w.rows(); ++i)
            for (Eigen::Index j = i + 1; j < w.cols(); ++j) {
                const double v = map(w(i, j));
                if (v == 0.0) {
                    ++dropped;
                    continue;
                }
                edges.push_back({base + static_cast<std::size_t>(i), base + static_cast<std::size_t>(j), v});
            }
        base += static_cast<std::size_t>(w.rows());
    }
    return dropped;
}

}  // namespace

SignedGraph assemble_supra(const MultiplexVoting& m, Coupling coupling) {
    m.validate();
    std::vector<Edge> edges;
    add_layers(m, edges, [](double w) { return w; });
    add_coupling(m, coupling, edges);
    return SignedGraph(m.node_count(), std::move(edges));
}

SignedMultiplex sign_transform(const MultiplexVoting& m, Transform transform, Coupling coupling) {
    m.validate();
    SignedMultiplex out;
    std::vector<Edge> edges;
    if (transform == Transform::sign)
        out.dropped = add_layers(m, edges, [](double w) { return w == 0.5 ? 0.0 : (w > 0.5 ? 1.0 : -1.0); });
    else
        out.dropped = add_layers(m, edges, [](double w) { return 2.0 * w - 1.0; });
    out.coupling_pairs = add_coupling(m, coupling, edges);
    out.graph = SignedGraph(m.node_count(), std::move(edges));

    std::vector<std::size_t> block(m.node_count());
    auto occ = occurrences(m);
    for (std::size_t b = 0; b < occ.size(); ++b)
        for (std::size_t i : occ[b]) block[i] = b;
    out.partition = Partition(std::move(block));
    return out;
}

SignedGraph threshold_entries(const SignedGraph& g, double theta, const Partition* keep, bool* disconnected) {
    if (!(theta >= 0.0 && theta < 1.0)) throw ParameterError("threshold must lie in [0,1)");
    if (keep && keep->size() != g.size()) throw DimensionError("partition size does not match graph");
    std::vector<Edge> edges;
    for (const auto& e : g.edges()) {
        const bool exempt = keep && keep->block_of(e.i) == keep->block_of(e.j);
        if (exempt || std::abs(e.w) >= theta) edges.push_back(e);
    }
    SignedGraph out(g.size(), std::move(edges));
    if (disconnected) {
        std::size_t before = 0, after = 0;
        connected_components(g, &before);
        connected_components(out, &after);
        *disconnected = after > before;
    }
    return out;
}

double MisclassificationReport::accuracy(std::size_t party) const {
    std::size_t wrong = 0, total = 0;
    for (std::size_t t = 0; t < totals.size(); ++t) {
        wrong += misclassified[t][party];
        total += totals[t][party];
    }
    return total ? 1.0 - static_cast<double>(wrong) / static_cast<double>(total) : 1.0;
}

MisclassificationReport misclassification_report(const SyncSolution& sol, const MultiplexVoting& m,
                                                 const std::array<std::string, 2>& parties) {
    if (!m.has_labels()) throw ParameterError("misclassification report needs party labels");
    const std::size_t n = m.node_count();
    if (sol.size() != n) throw DimensionError("solution size does not match multiplex");

    // Party index per node, 2 for neither.
    std::vector<int> party(n, 2);
    std::size_t idx = 0;
    for (const auto& layer : m.labels)
        for (const auto& lab : layer) {
            if (lab == parties[0]) party[idx] = 0;
            else if (lab == parties[1]) party[idx] = 1;
            ++idx;
        }
    std::size_t wrong = 0, scored = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (party[i] == 2) continue;
        ++scored;
        if (sol.estimates[i] != (party[i] == 0 ? 1 : -1)) ++wrong;
    }
    MisclassificationReport rep;
    rep.parties = parties;
    rep.flipped = 2 * wrong > scored;
    rep.misclassified.assign(m.layer_count(), {0, 0});
    rep.totals.assign(m.layer_count(), {0, 0});
    idx = 0;
    for (std::size_t t = 0; t < m.layer_count(); ++t)
        for (std::size_t local = 0; local < m.entity[t].size(); ++local, ++idx) {
            if (party[idx] == 2) {
                ++rep.excluded;
                continue;
            }
            const auto p = static_cast<std::size_t>(party[idx]);
            ++rep.totals[t][p];
            int est = rep.flipped ? -sol.estimates[idx] : sol.estimates[idx];
            if (est != (p == 0 ? 1 : -1)) ++rep.misclassified[t][p];
        }
    return rep;
}

void write_misclassification_csv(std::ostream& out, const MisclassificationReport& report) {
    out << "layer,party,misclassified,total\n";
    for (std::size_t t = 0; t < report.totals.size(); ++t)
        for (std::size_t p = 0; p < 2; ++p)
            out << t << ',' << report.parties[p] << ',' << report.misclassified[t][p] << ',' << report.totals[t][p]
                << '\n';
}

}  // namespace zsync
