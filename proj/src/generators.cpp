#include "zsync/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "zsync/rng.hpp"

namespace zsync {

namespace {

// Sub-stream identifiers; keep stable, instances depend on them.
enum Stream : std::uint64_t {
    kTruth = 1,
    kPresence = 2,
    kFlips = 3,
    kPairing = 4,
    kAttach = 5,
    kPersist = 6,
    kAnchors = 7,
};

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError(std::string(name) + " must lie in [0,1]");
}

}  // namespace

void NoiseSpec::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in (0,1]");
    check_probability(eta, "eta");
}

void CongressModelSpec::validate() const {
    if (congresses < 1 || senators < 1) throw ParameterError("congress model needs C >= 1 and S >= 1");
    check_probability(gamma, "gamma");
    check_probability(alpha, "alpha");
    check_probability(eta, "eta");
}

GroundTruth random_truth(std::size_t n, std::uint64_t seed) {
    Rng rng(seed, kTruth);
    std::vector<int> z(n);
    for (auto& v : z) v = rng.sign();
    return GroundTruth(std::move(z));
}

Instance erdos_renyi_instance(std::size_t n, const NoiseSpec& spec, const std::optional<GroundTruth>& truth) {
    if (n < 2) throw ParameterError("Erdos-Renyi instance needs n >= 2");
    spec.validate();
    GroundTruth z = truth ? *truth : random_truth(n, spec.seed);
    if (z.size() != n) throw DimensionError("truth length does not match n");
    Rng presence(spec.seed, kPresence), flips(spec.seed, kFlips);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!presence.bernoulli(spec.alpha)) continue;
            double w = z[i] * z[j];
            if (flips.bernoulli(spec.eta)) w = -w;
            edges.push_back({i, j, w});
        }
    }
    return {SignedGraph(n, std::move(edges)), std::move(z)};
}

std::vector<std::pair<std::size_t, std::size_t>> random_regular_pairs(std::size_t n, std::size_t d,
                                                                      std::uint64_t seed) {
    if (d >= n) throw ParameterError("regular degree d must be < n");
    using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;
    Rng rng(seed, kPairing);
    Pairs best;
    std::size_t best_unmatched = n * d + 1;
    const std::size_t parity = (n * d) % 2;

    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<std::size_t> stubs;
        stubs.reserve(n * d);
        for (std::size_t v = 0; v < n; ++v) stubs.insert(stubs.end(), d, v);
        std::vector<char> adj(n * n, 0);
        Pairs pairs;
        while (stubs.size() >= 2) {
            bool found = false;
            for (int tries = 0; tries < 64 && !found; ++tries) {
                std::size_t a = rng.index(stubs.size());
                std::size_t b = rng.index(stubs.size() - 1);
                if (b >= a) ++b;
                std::size_t u = stubs[a], v = stubs[b];
                if (u == v || adj[u * n + v]) continue;
                adj[u * n + v] = adj[v * n + u] = 1;
                pairs.emplace_back(std::min(u, v), std::max(u, v));
                // Remove the larger position first so the smaller stays valid.
                for (std::size_t pos : {std::max(a, b), std::min(a, b)}) {
                    stubs[pos] = stubs.back();
                    stubs.pop_back();
                }
                found = true;
            }
            if (!found) break;
        }
        if (stubs.size() < best_unmatched) {
            best_unmatched = stubs.size();
            best = std::move(pairs);
        }
        if (best_unmatched <= parity) break;
    }
    std::sort(best.begin(), best.end());
    return best;
}

Instance complete_with_regular_bad(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (n < 2) throw ParameterError("complete graph needs n >= 2");
    if (d >= n) throw ParameterError("bad degree d must satisfy d <= n-1");
    GroundTruth z = random_truth(n, seed);
    std::vector<char> bad(n * n, 0);
    if (d > 0)
        for (auto [u, v] : random_regular_pairs(n, d, seed)) bad[u * n + v] = 1;
    std::vector<Edge> edges;
    edges.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double w = z[i] * z[j];
            if (bad[i * n + j]) w = -w;
            edges.push_back({i, j, w});
        }
    return {SignedGraph(n, std::move(edges)), std::move(z)};
}

Instance preferential_attachment_instance(std::size_t n, std::size_t m_pa, double bad_degree,
                                          std::uint64_t seed) {
    if (m_pa < 1 || m_pa >= n) throw ParameterError("preferential attachment needs 1 <= m_pa < n");
    const double flip_prob = bad_degree / static_cast<double>(n - 1);
    if (!(flip_prob >= 0.0 && flip_prob <= 1.0)) throw ParameterError("bad degree must lie in [0, n-1]");
    GroundTruth z = random_truth(n, seed);
    Rng attach(seed, kAttach), flips(seed, kFlips);

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::size_t> endpoints;  // each node repeated once per incident edge
    for (std::size_t i = 0; i <= m_pa; ++i)
        for (std::size_t j = i + 1; j <= m_pa; ++j) {
            pairs.emplace_back(i, j);
            endpoints.push_back(i);
            endpoints.push_back(j);
        }
    std::vector<std::size_t> chosen;
    for (std::size_t v = m_pa + 1; v < n; ++v) {
        chosen.clear();
        while (chosen.size() < m_pa) {
            std::size_t t = endpoints[attach.index(endpoints.size())];
            if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
        }
        for (std::size_t t : chosen) {
            pairs.emplace_back(t, v);
            endpoints.push_back(t);
            endpoints.push_back(v);
        }
    }
    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (auto [i, j] : pairs) {
        double w = z[i] * z[j];
        if (flips.bernoulli(flip_prob)) w = -w;
        edges.push_back({i, j, w});
    }
    return {SignedGraph(n, std::move(edges)), std::move(z)};
}

PartitionedInstance congress_model_I(const CongressModelSpec& spec) {
    spec.validate();
    const std::size_t C = spec.congresses, S = spec.senators, n = C * S;
    Rng persist(spec.seed, kPersist), party(spec.seed, kTruth);
    Rng presence(spec.seed, kPresence), flips(spec.seed, kFlips);

    std::vector<std::size_t> senator_of(n);
    std::vector<int> senator_party;
    auto fresh = [&] {
        senator_party.push_back(party.sign());
        return senator_party.size() - 1;
    };
    for (std::size_t s = 0; s < S; ++s) senator_of[s] = fresh();
    for (std::size_t t = 1; t < C; ++t)
        for (std::size_t s = 0; s < S; ++s)
            senator_of[t * S + s] = persist.bernoulli(spec.gamma) ? senator_of[(t - 1) * S + s] : fresh();

    std::vector<int> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = senator_party[senator_of[i]];

    std::vector<Edge> edges;
    for (std::size_t t = 0; t < C; ++t)
        for (std::size_t a = 0; a < S; ++a)
            for (std::size_t b = a + 1; b < S; ++b) {
                if (!presence.bernoulli(spec.alpha)) continue;
                std::size_t i = t * S + a, j = t * S + b;
                double w = z[i] * z[j];
                if (flips.bernoulli(spec.eta)) w = -w;
                edges.push_back({i, j, w});
            }
    Partition partition(senator_of);
    for (std::size_t b = 0; b < partition.block_count(); ++b) {
        const auto& m = partition.members(b);
        for (std::size_t x = 0; x < m.size(); ++x)
            for (std::size_t y = x + 1; y < m.size(); ++y) edges.push_back({m[x], m[y], 1.0});
    }
    return {SignedGraph(n, std::move(edges)), GroundTruth(std::move(z)), std::move(partition)};
}

PartitionedInstance equal_partition_benchmark_II(std::size_t n, std::size_t k, double alpha, double eta,
                                                 std::uint64_t seed) {
    if (k == 0 || n % k != 0) throw ParameterError("block count k must divide n");
    NoiseSpec{alpha, eta, seed}.validate();
    const std::size_t m = n / k;
    Rng party(seed, kTruth), presence(seed, kPresence), flips(seed, kFlips);
    std::vector<int> block_sign(k);
    for (auto& s : block_sign) s = party.sign();
    std::vector<std::size_t> block_of(n);
    std::vector<int> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        block_of[i] = i / m;
        z[i] = block_sign[block_of[i]];
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (block_of[i] == block_of[j]) {
                edges.push_back({i, j, 1.0});
                continue;
            }
            if (!presence.bernoulli(alpha)) continue;
            double w = z[i] * z[j];
            if (flips.bernoulli(eta)) w = -w;
            edges.push_back({i, j, w});
        }
    return {SignedGraph(n, std::move(edges)), GroundTruth(std::move(z)), Partition(std::move(block_of))};
}

AnchorSet random_anchors(const GroundTruth& truth, std::size_t h, std::uint64_t seed) {
    const std::size_t n = truth.size();
    if (h > n) throw ParameterError("more anchors than nodes");
    Rng rng(seed, kAnchors);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < h; ++i) std::swap(order[i], order[i + rng.index(n - i)]);
    std::map<std::size_t, int> a;
    for (std::size_t i = 0; i < h; ++i) a[order[i]] = truth[order[i]];
    return AnchorSet(n, std::move(a));
}

}  // namespace zsync
