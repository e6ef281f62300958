#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "cli.hpp"
#include "zsync/generators.hpp"
#include "zsync/io.hpp"
#include "zsync/parallel.hpp"
#include "zsync/rmt.hpp"
#include "zsync/rng.hpp"
#include "zsync/solve.hpp"

namespace zsync::cli {

namespace {

using io::format_double;

class ParamReader {
public:
    ParamReader(const Json& in, std::string model) : in_(in), model_(std::move(model)) {
        if (!in_.is_null() && !in_.is_object()) throw UsageError("model parameters must be a JSON object");
    }

    double real(const char* key, double def) {
        double v = def;
        if (in_.is_object() && in_.contains(key)) {
            if (!in_[key].is_number()) throw UsageError(std::string("parameter ") + key + " must be a number");
            v = in_[key].get<double>();
        }
        resolved_[key] = v;
        return v;
    }

    std::size_t count(const char* key, std::size_t def) {
        std::size_t v = def;
        if (in_.is_object() && in_.contains(key)) {
            const auto& j = in_[key];
            if (!j.is_number() || j.get<double>() < 0 || std::floor(j.get<double>()) != j.get<double>())
                throw UsageError(std::string("parameter ") + key + " must be a non-negative integer");
            v = static_cast<std::size_t>(j.get<double>());
        }
        resolved_[key] = v;
        return v;
    }

    Json finish() {
        if (in_.is_object())
            for (const auto& [k, v] : in_.items())
                if (!resolved_.contains(k)) throw UsageError("model " + model_ + " has no parameter '" + k + "'");
        return resolved_;
    }

private:
    const Json& in_;
    std::string model_;
    Json resolved_ = Json::object();
};

std::vector<double> eta_grid() {
    std::vector<double> g;
    for (int k = 0; k <= 10; ++k) g.push_back(k / 20.0);
    return g;
}

std::uint64_t job_seed(std::uint64_t seed, std::size_t a, std::size_t b) {
    return derive_seed(derive_seed(seed, a), b);
}

MethodSettings quiet_settings(const ExperimentOptions& o) {
    MethodSettings s;
    s.sdp.throw_on_cap = false;
    if (o.channel_p) s.mps.channel_p = *o.channel_p;
    return s;
}

std::vector<bool> anchor_mask(const AnchorSet& a, std::size_t n) {
    std::vector<bool> m(n, false);
    for (auto [i, v] : a.entries()) m[i] = true;
    return m;
}

Json heatmap_fig(const ExperimentOptions& o, const fs::path& out) {
    HeatmapSpec spec;
    spec.n = o.n.value_or(200);
    spec.trials = o.trials.value_or(20);
    spec.normalized = !o.raw;
    if (o.method == "laplacian") spec.method = HeatmapMethod::laplacian;
    else if (o.method != "eig") throw UsageError("heatmap-fig --method must be eig or laplacian");
    spec.seed = o.seed;
    spec.jobs = o.jobs;
    auto cells = heatmap_sweep(spec);
    io::write_file(out / "heatmap.csv", [&](std::ostream& f) { write_heatmap_csv(f, cells); });
    return {{"n", spec.n},         {"trials", spec.trials}, {"method", o.method},
            {"normalized", !o.raw}, {"cells", cells.size()}, {"outputs", {"heatmap.csv"}}};
}

Json complete_noise(const ExperimentOptions& o, const fs::path& out) {
    const std::size_t n = o.n.value_or(1000), seeds = o.seeds.value_or(10);
    const std::vector<double> ps{0.55, 0.525, 0.514, 0.5};
    std::vector<double> tau(ps.size() * seeds), gap(ps.size() * seeds);
    parallel_for(tau.size(), o.jobs, [&](std::size_t job) {
        const std::size_t pi = job / seeds, s = job % seeds;
        Instance inst = erdos_renyi_instance(n, {1.0, 1.0 - ps[pi], job_seed(o.seed, pi, s)});
        SyncSolution sol = eig_sync(inst.graph, !o.raw);
        tau[job] = error_rate(sol, inst.truth);
        gap[job] = sol.diagnostics.at("gap");
    });
    io::write_file(out / "complete_noise.csv", [&](std::ostream& f) {
        f << "p,seed,tau,gap\n";
        for (std::size_t job = 0; job < tau.size(); ++job)
            f << format_double(ps[job / seeds]) << ',' << job % seeds << ',' << format_double(tau[job]) << ','
              << format_double(gap[job]) << '\n';
    });
    return {{"n", n}, {"alpha", 1.0}, {"seeds", seeds}, {"normalized", !o.raw}, {"outputs", {"complete_noise.csv"}}};
}

Json anchors_fig(const ExperimentOptions& o, const fs::path& out) {
    const std::size_t n = o.n.value_or(75), h = o.h.value_or(15), seeds = o.seeds.value_or(50);
    const double alpha = o.alpha.value_or(0.2);
    const std::vector<std::string> methods{"qcqp-i", "qcqp-d", "sdp-y", "sdp-xy", "mps"};
    const auto etas = eta_grid();
    const MethodSettings settings = quiet_settings(o);
    std::vector<double> tau(etas.size() * seeds * methods.size(), std::nan(""));
    parallel_for(etas.size() * seeds, o.jobs, [&](std::size_t job) {
        const std::size_t ei = job / seeds, s = job % seeds;
        const std::uint64_t seed = job_seed(o.seed, ei, s);
        Instance inst = erdos_renyi_instance(n, {alpha, etas[ei], seed});
        AnchorSet anchors = random_anchors(inst.truth, h, derive_seed(seed, 7));
        const auto mask = anchor_mask(anchors, n);
        for (std::size_t m = 0; m < methods.size(); ++m) {
            try {
                SyncSolution sol = solve_method(methods[m], inst.graph, anchors, nullptr, settings);
                tau[job * methods.size() + m] = error_rate(sol, inst.truth, mask);
            } catch (const DegenerateAnchorError&) {
                // left as NaN: no sensor touches an anchor
            }
        }
    });
    io::write_file(out / "anchors.csv", [&](std::ostream& f) {
        f << "h,eta,seed,method,tau\n";
        for (std::size_t job = 0; job < etas.size() * seeds; ++job)
            for (std::size_t m = 0; m < methods.size(); ++m) {
                const double t = tau[job * methods.size() + m];
                f << h << ',' << format_double(etas[job / seeds]) << ',' << job % seeds << ',' << methods[m] << ','
                  << (std::isnan(t) ? std::string() : format_double(t)) << '\n';
            }
    });
    return {{"n", n}, {"alpha", alpha}, {"h", h}, {"seeds", seeds}, {"channel_p", settings.mps.channel_p},
            {"outputs", {"anchors.csv"}}};
}

Json mps_fig(const ExperimentOptions& o, const fs::path& out) {
    const std::size_t n = o.n.value_or(100), h = o.h.value_or(1), seeds = o.seeds.value_or(100);
    std::vector<std::string> models;
    if (o.bad == "both" || o.bad == "regular") models.push_back("regular");
    if (o.bad == "both" || o.bad == "er") models.push_back("er");
    if (models.empty()) throw UsageError("mps-fig --bad must be regular, er or both");
    std::vector<std::size_t> ds;
    for (std::size_t d = 5; d <= 50; d += 5) ds.push_back(d);
    const MethodSettings settings = quiet_settings(o);
    const std::size_t per_model = ds.size() * seeds;
    std::vector<double> eig_tau(models.size() * per_model), mps_tau(models.size() * per_model);
    parallel_for(eig_tau.size(), o.jobs, [&](std::size_t job) {
        const std::size_t mi = job / per_model, di = (job % per_model) / seeds, s = job % seeds;
        const std::uint64_t seed = job_seed(derive_seed(o.seed, mi), di, s);
        Instance inst = models[mi] == "regular"
                            ? complete_with_regular_bad(n, ds[di], seed)
                            : erdos_renyi_instance(n, {1.0, static_cast<double>(ds[di]) / static_cast<double>(n - 1), seed});
        AnchorSet anchors = random_anchors(inst.truth, h, derive_seed(seed, 7));
        const auto mask = anchor_mask(anchors, n);
        eig_tau[job] = error_rate(eig_sync(inst.graph), inst.truth, mask);
        mps_tau[job] = error_rate(mps_sync(inst.graph, anchors, settings.mps), inst.truth, mask);
    });
    io::write_file(out / "mps.csv", [&](std::ostream& f) {
        f << "bad,d,seed,method,tau\n";
        for (std::size_t job = 0; job < eig_tau.size(); ++job) {
            const std::string prefix = models[job / per_model] + ',' + std::to_string(ds[(job % per_model) / seeds]) +
                                       ',' + std::to_string(job % seeds) + ',';
            f << prefix << "eig," << format_double(eig_tau[job]) << '\n';
            f << prefix << "mps," << format_double(mps_tau[job]) << '\n';
        }
    });
    return {{"n", n}, {"h", h}, {"seeds", seeds}, {"bad", o.bad}, {"channel_p", settings.mps.channel_p},
            {"outputs", {"mps.csv"}}};
}

std::vector<KsyncRow> ksync_sweep(const ExperimentOptions& o, std::size_t seeds,
                                  const std::function<PartitionedInstance(double, std::uint64_t)>& make) {
    KsyncSuiteOptions k;
    k.jobs = o.jobs;
    if (o.channel_p) k.mps.channel_p = *o.channel_p;
    std::vector<std::uint64_t> seed_list(seeds);
    for (std::size_t s = 0; s < seeds; ++s) seed_list[s] = s;
    std::vector<KsyncRow> rows;
    const auto etas = eta_grid();
    for (std::size_t ei = 0; ei < etas.size(); ++ei) {
        auto part = run_ksync_suite(
            [&](std::uint64_t s) { return make(etas[ei], job_seed(o.seed, ei, s)); }, ksync_methods(), etas[ei],
            seed_list, k);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    return rows;
}

Json ksync_fig1(const ExperimentOptions& o, const fs::path& out) {
    CongressModelSpec spec;
    spec.congresses = o.congresses.value_or(spec.congresses);
    spec.gamma = o.gamma.value_or(spec.gamma);
    spec.alpha = o.alpha.value_or(spec.alpha);
    const std::size_t seeds = o.seeds.value_or(25);
    auto rows = ksync_sweep(o, seeds, [&](double eta, std::uint64_t seed) {
        CongressModelSpec s = spec;
        s.eta = eta;
        s.seed = seed;
        return congress_model_I(s);
    });
    io::write_file(out / "ksync.csv", [&](std::ostream& f) { write_ksync_csv(f, rows); });
    return {{"model", "congress-model-1"}, {"C", spec.congresses}, {"S", spec.senators}, {"gamma", spec.gamma},
            {"alpha", spec.alpha},         {"seeds", seeds},       {"outputs", {"ksync.csv"}}};
}

Json ksync_fig2(const ExperimentOptions& o, const fs::path& out) {
    const std::size_t n = o.n.value_or(200), k = o.k.value_or(5), seeds = o.seeds.value_or(25);
    const double alpha = o.alpha.value_or(0.1);
    auto rows = ksync_sweep(o, seeds, [&](double eta, std::uint64_t seed) {
        return equal_partition_benchmark_II(n, k, alpha, eta, seed);
    });
    io::write_file(out / "ksync.csv", [&](std::ostream& f) { write_ksync_csv(f, rows); });
    return {{"model", "benchmark-2"}, {"n", n}, {"k", k}, {"alpha", alpha}, {"seeds", seeds},
            {"outputs", {"ksync.csv"}}};
}

// Restriction of a congress instance to its first `t` congresses, with block
// ids renumbered densely.
PartitionedInstance first_congresses(const PartitionedInstance& full, std::size_t senators, std::size_t t) {
    std::vector<std::size_t> nodes(t * senators);
    for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = i;
    std::map<std::size_t, std::size_t> relabel;
    std::vector<std::size_t> block(nodes.size());
    std::vector<int> z(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        block[i] = relabel.try_emplace(full.partition.block_of(i), relabel.size()).first->second;
        z[i] = full.truth[i];
    }
    return {induced_subgraph(full.graph, nodes), GroundTruth(std::move(z)), Partition(std::move(block))};
}

Json congress_incremental(const ExperimentOptions& o, const fs::path& out) {
    CongressModelSpec spec;
    spec.congresses = o.congresses.value_or(spec.congresses);
    spec.gamma = o.gamma.value_or(spec.gamma);
    spec.alpha = o.alpha.value_or(spec.alpha);
    spec.eta = o.eta.value_or(0.2);
    const std::size_t seeds = o.seeds.value_or(10);
    const auto& methods = ksync_methods();
    const std::size_t C = spec.congresses;
    std::vector<double> tau(seeds * C * methods.size());
    KsyncSuiteOptions k;
    if (o.channel_p) k.mps.channel_p = *o.channel_p;
    parallel_for(seeds * C, o.jobs, [&](std::size_t job) {
        const std::size_t s = job / C, t = job % C + 1;
        CongressModelSpec sp = spec;
        sp.seed = derive_seed(o.seed, s);
        PartitionedInstance inst = first_congresses(congress_model_I(sp), spec.senators, t);
        for (std::size_t m = 0; m < methods.size(); ++m)
            tau[job * methods.size() + m] = error_rate(solve_ksync(methods[m], inst.graph, inst.partition, k), inst.truth);
    });
    io::write_file(out / "congress_incremental.csv", [&](std::ostream& f) {
        f << "congresses,seed,method,tau\n";
        for (std::size_t job = 0; job < seeds * C; ++job)
            for (std::size_t m = 0; m < methods.size(); ++m)
                f << job % C + 1 << ',' << job / C << ',' << methods[m] << ','
                  << format_double(tau[job * methods.size() + m]) << '\n';
    });
    return {{"C", C},       {"S", spec.senators}, {"gamma", spec.gamma},
            {"alpha", spec.alpha}, {"eta", spec.eta}, {"seeds", seeds}, {"outputs", {"congress_incremental.csv"}}};
}

// Custom sweep file:
//   {"model": "erdos-renyi", "params": {...}, "methods": ["eig", "sdp"],
//    "sweep": {"param": "eta", "values": [0, 0.1]}, "seeds": 10,
//    "anchors": 0, "channel_p": 0.8}
Json custom(const ExperimentOptions& o, const fs::path& out) {
    if (o.spec.empty()) throw UsageError("experiment custom needs --spec");
    const Json spec = io::read_json_file(o.spec);
    Json params, sweep;
    std::string model;
    std::vector<std::string> methods;
    std::size_t seeds = 0, h = 0;
    MethodSettings settings = quiet_settings(o);
    try {
        model = spec.at("model").get<std::string>();
        params = spec.value("params", Json::object());
        methods = spec.at("methods").get<std::vector<std::string>>();
        sweep = spec.at("sweep");
        sweep.at("param").get<std::string>();
        sweep.at("values").get<std::vector<double>>();
        seeds = spec.value("seeds", std::size_t{10});
        h = spec.value("anchors", std::size_t{0});
        settings.mps.channel_p = spec.value("channel_p", settings.mps.channel_p);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(o.spec.string() + ": " + e.what());
    }
    for (const auto& m : methods)
        if (!is_method(m)) throw UsageError("unknown method in sweep file: " + m);
    const std::string key = sweep["param"].get<std::string>();
    const auto values = sweep["values"].get<std::vector<double>>();

    // Resolve once up front so bad parameters fail before any work starts.
    for (double v : values) {
        Json p = params;
        p[key] = v;
        generate_model(model, p, 0);
    }
    std::vector<double> tau(values.size() * seeds * methods.size(), std::nan(""));
    parallel_for(values.size() * seeds, o.jobs, [&](std::size_t job) {
        const std::size_t vi = job / seeds, s = job % seeds;
        Json p = params;
        p[key] = values[vi];
        const std::uint64_t seed = job_seed(o.seed, vi, s);
        GeneratedInstance inst = generate_model(model, p, seed);
        const std::size_t n = inst.graph.size();
        AnchorSet anchors = h ? random_anchors(inst.truth, h, derive_seed(seed, 7)) : AnchorSet();
        const auto mask = anchor_mask(anchors, n);
        for (std::size_t m = 0; m < methods.size(); ++m) {
            const SideInput need = required_input(methods[m]);
            if ((need == SideInput::anchors && anchors.empty()) || (need == SideInput::partition && !inst.partition))
                continue;
            try {
                SyncSolution sol = solve_method(methods[m], inst.graph, anchors,
                                                inst.partition ? &*inst.partition : nullptr, settings);
                tau[job * methods.size() + m] = error_rate(sol, inst.truth, mask);
            } catch (const DegenerateAnchorError&) {
            }
        }
    });
    io::write_file(out / "custom.csv", [&](std::ostream& f) {
        f << key << ",seed,method,tau\n";
        for (std::size_t job = 0; job < values.size() * seeds; ++job)
            for (std::size_t m = 0; m < methods.size(); ++m) {
                const double t = tau[job * methods.size() + m];
                f << format_double(values[job / seeds]) << ',' << job % seeds << ',' << methods[m] << ','
                  << (std::isnan(t) ? std::string() : format_double(t)) << '\n';
            }
    });
    return {{"model", model}, {"params", params}, {"methods", methods}, {"sweep", sweep},
            {"seeds", seeds}, {"anchors", h},     {"outputs", {"custom.csv"}}};
}

}  // namespace

GeneratedInstance generate_model(const std::string& model, const Json& params, std::uint64_t seed) {
    ParamReader r(params, model);
    GeneratedInstance g;
    if (model == "erdos-renyi") {
        const std::size_t n = r.count("n", 100);
        const double alpha = r.real("alpha", 1.0), eta = r.real("eta", 0.0);
        g.parameters = r.finish();
        Instance inst = erdos_renyi_instance(n, {alpha, eta, seed});
        g.graph = std::move(inst.graph);
        g.truth = std::move(inst.truth);
    } else if (model == "regular-bad") {
        const std::size_t n = r.count("n", 100), d = r.count("d", 10);
        g.parameters = r.finish();
        Instance inst = complete_with_regular_bad(n, d, seed);
        g.graph = std::move(inst.graph);
        g.truth = std::move(inst.truth);
    } else if (model == "preferential-attachment") {
        const std::size_t n = r.count("n", 500), m = r.count("m", 10);
        const double d = r.real("d", 0.0);
        g.parameters = r.finish();
        Instance inst = preferential_attachment_instance(n, m, d, seed);
        g.graph = std::move(inst.graph);
        g.truth = std::move(inst.truth);
    } else if (model == "congress-model-1") {
        CongressModelSpec spec;
        spec.congresses = r.count("C", spec.congresses);
        spec.senators = r.count("S", spec.senators);
        spec.gamma = r.real("gamma", spec.gamma);
        spec.alpha = r.real("alpha", spec.alpha);
        spec.eta = r.real("eta", spec.eta);
        spec.seed = seed;
        g.parameters = r.finish();
        PartitionedInstance inst = congress_model_I(spec);
        g.graph = std::move(inst.graph);
        g.truth = std::move(inst.truth);
        g.partition = std::move(inst.partition);
    } else if (model == "benchmark-2") {
        const std::size_t n = r.count("n", 200), k = r.count("k", 5);
        const double alpha = r.real("alpha", 0.1), eta = r.real("eta", 0.0);
        g.parameters = r.finish();
        PartitionedInstance inst = equal_partition_benchmark_II(n, k, alpha, eta, seed);
        g.graph = std::move(inst.graph);
        g.truth = std::move(inst.truth);
        g.partition = std::move(inst.partition);
    } else {
        throw UsageError("unknown model: " + model);
    }
    return g;
}

const std::vector<std::string>& experiment_presets() {
    static const std::vector<std::string> names{"heatmap-fig", "complete-noise", "anchors-fig",         "mps-fig",
                                                "ksync-fig1",  "ksync-fig2",     "congress-incremental", "custom"};
    return names;
}

Json run_experiment(const std::string& preset, const ExperimentOptions& o, const fs::path& out) {
    if (preset == "heatmap-fig") return heatmap_fig(o, out);
    if (preset == "complete-noise") return complete_noise(o, out);
    if (preset == "anchors-fig") return anchors_fig(o, out);
    if (preset == "mps-fig") return mps_fig(o, out);
    if (preset == "ksync-fig1") return ksync_fig1(o, out);
    if (preset == "ksync-fig2") return ksync_fig2(o, out);
    if (preset == "congress-incremental") return congress_incremental(o, out);
    if (preset == "custom") return custom(o, out);
    throw UsageError("unknown preset: " + preset);
}

}  // namespace zsync::cli
