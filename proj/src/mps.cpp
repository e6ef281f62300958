#include "zsync/mps.hpp"

#include <algorithm>
#include <cmath>

#include "zsync/rng.hpp"

namespace zsync {

namespace {

void check_channel(double p) {
    if (!(p > 0.5 && p <= 1.0)) throw ParameterError("channel_p must lie in (0.5, 1]");
}

double median(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

}  // namespace

double mps_edge_update(double p_plus_i, double p_plus_j, int observed_sign, double channel_p) {
    const double pi = agreement_probability(p_plus_i, p_plus_j);
    const double p = channel_p;
    double num, den;
    if (observed_sign > 0) {
        num = pi * p;
        den = pi * (2.0 * p - 1.0) + 1.0 - p;
    } else {
        num = (1.0 - pi) * p;
        den = p - pi * (2.0 * p - 1.0);
    }
    if (den <= 0.0) return 0.0;
    return std::clamp(num / den, 0.0, 1.0);
}

double mps_node_update(const SignedGraph& g, const BeliefState& state, std::size_t i) {
    double plus = 0.0, minus = 0.0;
    for (const auto& nb : g.neighbors(i)) {
        const double pj = state.p_plus[nb.node];
        const double c = std::abs(nb.w) * state.w[nb.edge];
        if (nb.w > 0) {
            plus += c * pj;
            minus += c * (1.0 - pj);
        } else {
            plus += c * (1.0 - pj);
            minus += c * pj;
        }
    }
    const double total = plus + minus;
    return total > 0.0 ? plus / total : 0.5;
}

BeliefState mps_initial_state(const SignedGraph& g, const std::vector<int>& pinned, double channel_p) {
    check_channel(channel_p);
    if (pinned.size() != g.size()) throw DimensionError("pin vector size does not match graph");
    BeliefState s;
    s.channel_p = channel_p;
    s.pinned = pinned;
    s.p_plus.assign(g.size(), 0.5);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (pinned[i]) s.p_plus[i] = pinned[i] > 0 ? 1.0 : 0.0;
    s.w.assign(g.edge_count(), channel_p);
    return s;
}

std::vector<int> mps_pins(const SignedGraph& g, const AnchorSet& anchors, const MpsOptions& opts,
                          std::size_t* roots) {
    const std::size_t n = g.size();
    if (!anchors.empty() && anchors.node_count() != n) throw DimensionError("anchor set size does not match graph");
    std::vector<int> pinned(n, 0);
    for (auto [i, a] : anchors.entries()) pinned[i] = a;

    std::size_t count = 0;
    auto label = connected_components(g, &count);
    std::vector<bool> has_anchor(count, false);
    for (std::size_t i = 0; i < n; ++i)
        if (pinned[i]) has_anchor[label[i]] = true;
    std::vector<std::vector<std::size_t>> members(count);
    for (std::size_t i = 0; i < n; ++i) members[label[i]].push_back(i);

    std::optional<Rng> rng;
    if (opts.random_root_seed) rng.emplace(*opts.random_root_seed, 0x2007);
    std::size_t added = 0;
    for (std::size_t c = 0; c < count; ++c) {
        if (has_anchor[c] || members[c].size() < 2) continue;
        std::size_t root = members[c][0];
        if (rng) {
            root = members[c][rng->index(members[c].size())];
        } else {
            for (std::size_t i : members[c])
                if (g.degree(i) > g.degree(root)) root = i;
        }
        pinned[root] = 1;
        ++added;
    }
    if (roots) *roots = added;
    return pinned;
}

double mps_round(const SignedGraph& g, BeliefState& s, const MpsOptions& opts) {
    const auto& edges = g.edges();
    const Partition* part = opts.partition;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& ed = edges[e];
        if (part && part->block_of(ed.i) == part->block_of(ed.j)) {
            s.w[e] = 1.0;
            continue;
        }
        s.w[e] = mps_edge_update(s.p_plus[ed.i], s.p_plus[ed.j], ed.w > 0 ? 1 : -1, s.channel_p);
    }
    std::vector<double> next(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        next[i] = s.pinned[i] ? s.p_plus[i] : mps_node_update(g, s, i);

    if (part) {
        std::vector<double> vals;
        for (std::size_t b = 0; b < part->block_count(); ++b) {
            const auto& m = part->members(b);
            int pin = 0;
            vals.clear();
            for (std::size_t i : m) {
                if (s.pinned[i]) pin = s.pinned[i];
                vals.push_back(next[i]);
            }
            const double v = pin ? (pin > 0 ? 1.0 : 0.0) : median(vals);
            for (std::size_t i : m) next[i] = v;
        }
    }

    double change = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double v = next[i];
        if (!s.pinned[i] && opts.damping > 0.0) v = (1.0 - opts.damping) * v + opts.damping * s.p_plus[i];
        if (!(v >= 0.0 && v <= 1.0)) throw Error("belief left [0,1] at node " + std::to_string(i));
        change = std::max(change, std::abs(v - s.p_plus[i]));
        s.p_plus[i] = v;
    }
    ++s.iteration;
    return change;
}

SyncSolution mps_sync(const SignedGraph& g, const AnchorSet& anchors, const MpsOptions& opts) {
    if (opts.partition && opts.partition->size() != g.size()) throw DimensionError("partition size does not match graph");
    if (!(opts.damping >= 0.0 && opts.damping < 1.0)) throw ParameterError("damping must lie in [0,1)");
    std::size_t roots = 0;
    BeliefState s = mps_initial_state(g, mps_pins(g, anchors, opts, &roots), opts.channel_p);

    bool converged = false;
    double change = 0.0;
    while (s.iteration < opts.max_iter) {
        change = mps_round(g, s, opts);
        if (opts.trace)
            for (std::size_t i = 0; i < g.size(); ++i) opts.trace->push_back({s.iteration, i, s.p_plus[i]});
        if (change < opts.tol) {
            converged = true;
            break;
        }
    }
    std::size_t isolated = 0;
    std::vector<double> scores(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        scores[i] = 2.0 * s.p_plus[i] - 1.0;
        if (g.degree(i) == 0 && !s.pinned[i]) ++isolated;
    }
    SyncSolution sol = solution_from_scores(std::move(scores), opts.partition ? "mps-k" : "mps");
    sol.diagnostics = {{"iterations", static_cast<double>(s.iteration)},
                       {"residual", change},
                       {"converged", converged ? 1.0 : 0.0},
                       {"channel_p", opts.channel_p},
                       {"anchors", static_cast<double>(anchors.size())},
                       {"roots", static_cast<double>(roots)},
                       {"isolated_nodes", static_cast<double>(isolated)}};
    return sol;
}

}  // namespace zsync
