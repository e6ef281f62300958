#include "zsync/ksync.hpp"

#include <chrono>
#include <ostream>

#include "zsync/parallel.hpp"

namespace zsync {

namespace {

void check_partition(const SignedGraph& g, const Partition& p) {
    if (p.size() != g.size()) throw DimensionError("partition size does not match graph");
}

}  // namespace

PartitionGraph build_partition_graph(const SignedGraph& g, const Partition& partition,
                                     const PartitionGraphOptions& opts) {
    check_partition(g, partition);
    PartitionGraph pg;
    pg.k = partition.block_count();
    for (const auto& e : g.edges()) {
        std::size_t u = partition.block_of(e.i), v = partition.block_of(e.j);
        if (u == v) continue;
        auto& c = pg.counts[{std::min(u, v), std::max(u, v)}];
        const double amount = opts.weight_mass ? std::abs(e.w) : 1.0;
        (e.w > 0 ? c.first : c.second) += amount;
    }
    std::vector<Edge> edges;
    for (const auto& [uv, c] : pg.counts) {
        const auto [plus, minus] = c;
        if (plus == minus) continue;
        double w;
        if (opts.sign_only)
            w = plus > minus ? 1.0 : -1.0;
        else
            w = plus > minus ? plus / (plus + minus) : -minus / (plus + minus);
        edges.push_back({uv.first, uv.second, w});
    }
    pg.weights = SignedGraph(pg.k, std::move(edges));
    return pg;
}

SyncSolution eig_ksync(const SignedGraph& g, const Partition& partition, const SpectralOptions& opts) {
    check_partition(g, partition);
    SyncSolution sol = eig_sync(g, true, opts);
    sol.method = "eig-k";
    sol.diagnostics["blocks"] = static_cast<double>(partition.block_count());
    return sol;
}

SyncSolution mveig_ksync(const SignedGraph& g, const Partition& partition, const SpectralOptions& opts) {
    SyncSolution base = eig_ksync(g, partition, opts);
    std::vector<double> scores(g.size());
    for (std::size_t b = 0; b < partition.block_count(); ++b) {
        const auto& m = partition.members(b);
        long balance = 0;
        for (std::size_t i : m) balance += base.estimates[i];
        const double mean = static_cast<double>(balance) / static_cast<double>(m.size());
        for (std::size_t i : m) scores[i] = mean;
    }
    SyncSolution sol = solution_from_scores(std::move(scores), "mveig-k");
    sol.diagnostics = std::move(base.diagnostics);
    return sol;
}

SyncSolution part_ksync(const SignedGraph& g, const Partition& partition, const PartitionGraphOptions& pg_opts,
                        const SpectralOptions& opts) {
    PartitionGraph pg = build_partition_graph(g, partition, pg_opts);
    SyncSolution block = eig_sync(pg.weights, true, opts);
    std::vector<double> scores(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) scores[i] = block.scores[partition.block_of(i)];
    SyncSolution sol = solution_from_scores(std::move(scores), "part-k");
    sol.diagnostics = std::move(block.diagnostics);
    sol.diagnostics["blocks"] = static_cast<double>(pg.k);
    sol.diagnostics["partition_edges"] = static_cast<double>(pg.weights.edge_count());
    return sol;
}

const std::vector<std::string>& ksync_methods() {
    static const std::vector<std::string> names{"eig-k", "mveig-k", "part-k", "sdp-k", "mps-k"};
    return names;
}

SyncSolution solve_ksync(const std::string& method, const SignedGraph& g, const Partition& partition,
                         const KsyncSuiteOptions& opts) {
    if (method == "eig-k") return eig_ksync(g, partition, opts.spectral);
    if (method == "mveig-k") return mveig_ksync(g, partition, opts.spectral);
    if (method == "part-k") return part_ksync(g, partition, opts.partition_graph, opts.spectral);
    if (method == "sdp-k") {
        SdpOptions o = opts.sdp;
        o.throw_on_cap = false;
        return sdp_ksync(g, partition, o).rounded;
    }
    if (method == "mps-k") {
        MpsOptions o = opts.mps;
        o.partition = &partition;
        return mps_sync(g, AnchorSet(), o);
    }
    throw ParameterError("unknown k-SYNC method: " + method);
}

std::vector<KsyncRow> run_ksync_suite(const SignedGraph& g, const Partition& partition, const GroundTruth& truth,
                                      const std::vector<std::string>& methods, double eta, std::uint64_t seed,
                                      const KsyncSuiteOptions& opts) {
    std::vector<KsyncRow> rows;
    for (const auto& m : methods) {
        auto start = std::chrono::steady_clock::now();
        SyncSolution sol = solve_ksync(m, g, partition, opts);
        auto stop = std::chrono::steady_clock::now();
        KsyncRow row{m, eta, seed, error_rate(sol, truth), 0.0, -1.0};
        if (auto it = sol.diagnostics.find("iterations"); it != sol.diagnostics.end()) row.iterations = it->second;
        if (opts.record_timing) row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<KsyncRow> run_ksync_suite(const std::function<PartitionedInstance(std::uint64_t)>& make,
                                      const std::vector<std::string>& methods, double eta,
                                      const std::vector<std::uint64_t>& seeds, const KsyncSuiteOptions& opts) {
    std::vector<std::vector<KsyncRow>> per_seed(seeds.size());
    parallel_for(seeds.size(), opts.jobs, [&](std::size_t t) {
        PartitionedInstance inst = make(seeds[t]);
        per_seed[t] = run_ksync_suite(inst.graph, inst.partition, inst.truth, methods, eta, seeds[t], opts);
    });
    std::vector<KsyncRow> rows;
    for (auto& r : per_seed) rows.insert(rows.end(), r.begin(), r.end());
    return rows;
}

void write_ksync_csv(std::ostream& out, const std::vector<KsyncRow>& rows) {
    out << "method,eta,seed,tau,iterations,wall_ms\n";
    out.precision(10);
    for (const auto& r : rows) {
        out << r.method << ',' << r.eta << ',' << r.seed << ',' << r.tau << ',' << r.iterations << ',';
        if (r.wall_ms >= 0.0) out << r.wall_ms;
        out << '\n';
    }
}

}  // namespace zsync
