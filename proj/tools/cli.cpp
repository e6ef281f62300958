#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <ostream>

#include "zsync/generators.hpp"
#include "zsync/io.hpp"
#include "zsync/multiplex.hpp"
#include "zsync/rmt.hpp"
#include "zsync/rng.hpp"
#include "zsync/solve.hpp"

namespace zsync::cli {

namespace {

// Options whose values are file system paths; stored absolute in manifests.
constexpr std::array<const char*, 7> kPathFlags{"--graph", "--truth",    "--anchors", "--partition",
                                                "--out",   "--manifest", "--spec"};

bool is_path_flag(const std::string& s) {
    return std::find(kPathFlags.begin(), kPathFlags.end(), s) != kPathFlags.end();
}

std::string absolute(const std::string& p) { return fs::absolute(p).lexically_normal().string(); }

std::vector<std::string> canonical_argv(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (auto eq = a.find('='); a.rfind("--", 0) == 0 && eq != std::string::npos && is_path_flag(a.substr(0, eq))) {
            out.push_back(a.substr(0, eq + 1) + absolute(a.substr(eq + 1)));
        } else if (is_path_flag(a) && i + 1 < args.size()) {
            out.push_back(a);
            out.push_back(absolute(args[++i]));
        } else {
            out.push_back(a);
        }
    }
    return out;
}

void prepare_out(const fs::path& out) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) throw IoError("cannot create output directory " + out.string());
}

void write_manifest(const fs::path& out, const std::string& command, const std::vector<std::string>& argv,
                    Json parameters, Json inputs, std::vector<std::string> outputs) {
    outputs.push_back("manifest.json");
    Json m = Json::object();
    m["command"] = command;
    m["argv"] = canonical_argv(argv);
    m["parameters"] = std::move(parameters);
    m["inputs"] = std::move(inputs);
    m["outputs"] = outputs;
    m["version"] = kVersion;
    io::write_json_file(out / "manifest.json", m);
}

template <class T>
void write_csv(const fs::path& p, const T& value, void (*writer)(std::ostream&, const T&)) {
    io::write_file(p, [&](std::ostream& f) { writer(f, value); });
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
    std::string model;
    std::string out;
    std::uint64_t seed = 0;
    std::size_t n = 0, d = 0, m = 0, C = 0, S = 0, k = 0, h = 0;
    double alpha = 0, eta = 0, gamma = 0;
    CLI::Option *n_opt, *d_opt, *m_opt, *C_opt, *S_opt, *k_opt, *alpha_opt, *eta_opt, *gamma_opt;
};

int cmd_generate(const GenerateArgs& a, const std::vector<std::string>& argv) {
    Json params = Json::object();
    auto put = [&](CLI::Option* opt, const char* key, auto value) {
        if (opt->count()) params[key] = value;
    };
    put(a.n_opt, "n", a.n);
    put(a.d_opt, "d", a.d);
    put(a.m_opt, "m", a.m);
    put(a.C_opt, "C", a.C);
    put(a.S_opt, "S", a.S);
    put(a.k_opt, "k", a.k);
    put(a.alpha_opt, "alpha", a.alpha);
    put(a.eta_opt, "eta", a.eta);
    put(a.gamma_opt, "gamma", a.gamma);

    GeneratedInstance inst = generate_model(a.model, params, a.seed);
    const fs::path out(a.out);
    prepare_out(out);
    std::vector<std::string> outputs{"graph.csv", "truth.csv"};
    write_csv(out / "graph.csv", inst.graph, io::write_graph);
    write_csv(out / "truth.csv", inst.truth, io::write_truth);
    if (inst.partition) {
        write_csv(out / "partition.csv", *inst.partition, io::write_partition);
        outputs.push_back("partition.csv");
    }
    if (a.h) {
        AnchorSet anchors = random_anchors(inst.truth, a.h, derive_seed(a.seed, 7));
        write_csv(out / "anchors.csv", anchors, io::write_anchors);
        outputs.push_back("anchors.csv");
    }
    Json p = {{"model", a.model}, {"seed", a.seed}, {"model_parameters", inst.parameters}, {"anchors", a.h}};
    write_manifest(out, "generate", argv, std::move(p), Json::object(), std::move(outputs));
    return kExitOk;
}

// ------------------------------------------------------------------- solve

struct SolveArgs {
    std::string method, graph, out, truth, anchors, partition;
    std::size_t n = 0;
    CLI::Option* n_opt;
    std::uint64_t seed = 0;
    double channel_p = 0.8, tol = 1e-6, damping = 0.0;
    std::size_t max_iter = 200;
    CLI::Option* random_root_opt;
    std::string eig_route = "lanczos", qcqp_route = "auto";
    std::size_t sdp_rank = 0, sdp_restarts = 3, sdp_max_sweeps = 20000;
    bool sign_only = false, weight_mass = false;
};

int cmd_solve(const SolveArgs& a, const std::vector<std::string>& argv, std::ostream& err) {
    const SideInput need = required_input(a.method);
    if (need == SideInput::anchors && a.anchors.empty())
        throw UsageError("method " + a.method + " requires --anchors");
    if (need == SideInput::partition && a.partition.empty())
        throw UsageError("method " + a.method + " requires --partition");

    std::optional<GroundTruth> truth;
    std::optional<Partition> partition;
    if (!a.truth.empty()) truth = io::read_truth_file(a.truth);
    if (!a.partition.empty()) partition = io::read_partition_file(a.partition);
    std::optional<std::size_t> n;
    if (a.n_opt->count()) n = a.n;
    else if (truth) n = truth->size();
    else if (partition) n = partition->size();
    SignedGraph g = io::read_graph_file(a.graph, n);
    if (truth && truth->size() != g.size()) throw DimensionError("truth length does not match the graph");
    if (partition && partition->size() != g.size()) throw DimensionError("partition size does not match the graph");
    AnchorSet anchors;
    if (!a.anchors.empty()) anchors = io::read_anchors_file(a.anchors, g.size());

    MethodSettings s;
    s.spectral.eigen.seed = a.seed;
    s.spectral.route = a.eig_route == "power" ? EigenRoute::power : EigenRoute::lanczos;
    s.sdp.seed = a.seed;
    s.sdp.rank = a.sdp_rank;
    s.sdp.restarts = a.sdp_restarts;
    s.sdp.max_sweeps = a.sdp_max_sweeps;
    s.qcqp.seed = a.seed;
    s.qcqp.route = a.qcqp_route == "dense"       ? SecularRoute::dense
                   : a.qcqp_route == "iterative" ? SecularRoute::iterative
                                                 : SecularRoute::automatic;
    s.mps.channel_p = a.channel_p;
    s.mps.max_iter = a.max_iter;
    s.mps.tol = a.tol;
    s.mps.damping = a.damping;
    if (a.random_root_opt->count()) s.mps.random_root_seed = a.seed;
    s.partition_graph.sign_only = a.sign_only;
    s.partition_graph.weight_mass = a.weight_mass;

    int code = kExitOk;
    SyncSolution sol;
    try {
        sol = solve_method(a.method, g, anchors, partition ? &*partition : nullptr, s);
    } catch (const SdpConvergenceError& e) {
        err << "zsync: " << e.what() << "; writing the best iterate\n";
        sol = e.best().rounded;
        code = kExitConvergence;
    }

    const fs::path out(a.out);
    prepare_out(out);
    write_csv(out / "solution.csv", sol, io::write_solution);
    Json d = Json::object();
    d["method"] = sol.method;
    d["nodes"] = g.size();
    d["edges"] = g.edge_count();
    d["anchors"] = anchors.size();
    if (truth) {
        std::vector<bool> ignore(g.size(), false);
        for (auto [i, v] : anchors.entries()) ignore[i] = true;
        d["tau"] = error_rate(sol, *truth, ignore);
    }
    d["diagnostics"] = io::diagnostics_json(sol.diagnostics);
    io::write_json_file(out / "diagnostics.json", d);

    Json inputs = {{"graph", absolute(a.graph)}};
    if (!a.truth.empty()) inputs["truth"] = absolute(a.truth);
    if (!a.anchors.empty()) inputs["anchors"] = absolute(a.anchors);
    if (!a.partition.empty()) inputs["partition"] = absolute(a.partition);
    Json p = {{"method", a.method},
              {"seed", a.seed},
              {"channel_p", a.channel_p},
              {"max_iter", a.max_iter},
              {"tol", a.tol},
              {"damping", a.damping},
              {"random_root", a.random_root_opt->count() > 0},
              {"eig_route", a.eig_route},
              {"qcqp_route", a.qcqp_route},
              {"sdp_rank", a.sdp_rank},
              {"sdp_restarts", a.sdp_restarts},
              {"sdp_max_sweeps", a.sdp_max_sweeps},
              {"sign_only", a.sign_only},
              {"weight_mass", a.weight_mass}};
    write_manifest(out, "solve", argv, std::move(p), std::move(inputs), {"solution.csv", "diagnostics.json"});
    return code;
}

// -------------------------------------------------------------- experiment

struct ExperimentArgs {
    std::string preset, out, spec;
    ExperimentOptions opts;
    std::size_t n = 0, h = 0, k = 0, trials = 0, seeds = 0, congresses = 0;
    double alpha = 0, eta = 0, gamma = 0, channel_p = 0;
    CLI::Option *n_opt, *h_opt, *k_opt, *trials_opt, *seeds_opt, *congresses_opt, *alpha_opt, *eta_opt, *gamma_opt,
        *channel_opt;
};

int cmd_experiment(ExperimentArgs a, const std::vector<std::string>& argv) {
    auto take = [](CLI::Option* opt, auto value, auto& slot) {
        if (opt->count()) slot = value;
    };
    take(a.n_opt, a.n, a.opts.n);
    take(a.h_opt, a.h, a.opts.h);
    take(a.k_opt, a.k, a.opts.k);
    take(a.trials_opt, a.trials, a.opts.trials);
    take(a.seeds_opt, a.seeds, a.opts.seeds);
    take(a.congresses_opt, a.congresses, a.opts.congresses);
    take(a.alpha_opt, a.alpha, a.opts.alpha);
    take(a.eta_opt, a.eta, a.opts.eta);
    take(a.gamma_opt, a.gamma, a.opts.gamma);
    take(a.channel_opt, a.channel_p, a.opts.channel_p);
    if (!a.spec.empty()) a.opts.spec = a.spec;
    if (a.opts.jobs == 0) a.opts.jobs = 1;

    const fs::path out(a.out);
    prepare_out(out);
    Json p = run_experiment(a.preset, a.opts, out);
    std::vector<std::string> outputs = p["outputs"].get<std::vector<std::string>>();
    p.erase("outputs");
    Json params = {{"preset", a.preset}, {"seed", a.opts.seed}};
    params.update(p);
    Json inputs = Json::object();
    if (!a.spec.empty()) inputs["spec"] = absolute(a.spec);
    write_manifest(out, "experiment", argv, std::move(params), std::move(inputs), std::move(outputs));
    return kExitOk;
}

// ----------------------------------------------------------------- analyze

struct AnalyzeArgs {
    std::string what, graph, truth, out;
    std::size_t n = 0, r = 10, bins = 0;
    double alpha = 1.0, p = 1.0;
    bool raw = false;
    CLI::Option *n_opt, *bins_opt, *alpha_opt, *p_opt;
};

int cmd_analyze(const AnalyzeArgs& a, const std::vector<std::string>& argv) {
    const fs::path out(a.out);
    Json inputs = Json::object();
    Json params = {{"analysis", a.what}};
    std::vector<std::string> outputs;
    if (a.what == "spectrum") {
        if (a.graph.empty()) throw UsageError("analyze spectrum requires --graph");
        std::optional<std::size_t> n;
        if (a.n_opt->count()) n = a.n;
        SignedGraph g = io::read_graph_file(a.graph, n);
        std::optional<std::size_t> bins;
        if (a.bins_opt->count()) bins = a.bins;
        SpectrumReport rep = spectrum(g, a.r, !a.raw, bins);
        prepare_out(out);
        write_csv(out / "spectrum.csv", rep, write_spectrum_csv);
        outputs.push_back("spectrum.csv");
        if (rep.histogram) {
            write_csv(out / "histogram.csv", *rep.histogram, write_histogram_csv);
            outputs.push_back("histogram.csv");
        }
        Json summary = {{"gap_12", rep.gap_12}, {"gap_23", rep.gap_23}, {"ratio_32", rep.ratio_32}};
        io::write_json_file(out / "summary.json", summary);
        outputs.push_back("summary.json");
        inputs["graph"] = absolute(a.graph);
        params.update(Json{{"r", a.r}, {"normalized", !a.raw}});
        if (bins) params["bins"] = *bins;
    } else {
        if (!a.n_opt->count() && a.graph.empty()) throw UsageError("analyze noise requires --n or --graph");
        if (a.graph.empty() != a.truth.empty()) throw UsageError("analyze noise needs --graph and --truth together");
        std::optional<GroundTruth> truth;
        std::optional<SignedGraph> g;
        if (!a.truth.empty()) {
            truth = io::read_truth_file(a.truth);
            g = io::read_graph_file(a.graph, truth->size());
            inputs["graph"] = absolute(a.graph);
            inputs["truth"] = absolute(a.truth);
        }
        const std::size_t n = g ? g->size() : a.n;
        NoiseAnalysis na = analyze_noise(n, a.alpha, a.p);
        Json j = {{"n", na.n},           {"alpha", na.alpha},
                  {"p", na.p},           {"theta", na.theta},
                  {"sigma", na.sigma},   {"p_star", na.p_star},
                  {"detectable", na.detectable}, {"p_star_attainable", na.p_star_attainable},
                  {"residual_variance", residual_variance(a.alpha, a.p)}};
        if (g) {
            ResidualStats rs = rank_one_decomposition_check(*g, *truth, a.alpha, a.p);
            j["empirical"] = {{"mean", rs.mean}, {"variance", rs.variance}, {"pairs", rs.pairs}};
            CorrelationBound cb = correlation_bound(*g, *truth, a.alpha, a.p);
            Json c = {{"applicable", cb.applicable}, {"measured", cb.measured}, {"lambda1_z", cb.lambda1_z},
                      {"lambda1_r", cb.lambda1_r},   {"two_sigma", cb.two_sigma}};
            if (cb.applicable) {
                c["lower_bound"] = cb.lower_bound;
                c["holds"] = cb.holds;
            }
            j["correlation_bound"] = c;
        }
        prepare_out(out);
        io::write_json_file(out / "noise.json", j);
        outputs.push_back("noise.json");
        params.update(Json{{"n", n}, {"alpha", a.alpha}, {"p", a.p}});
    }
    write_manifest(out, "analyze", argv, std::move(params), std::move(inputs), std::move(outputs));
    return kExitOk;
}

// --------------------------------------------------------------- multiplex

struct MultiplexArgs {
    std::string manifest, out, method = "eig";
    double theta = 0;
    CLI::Option* theta_opt;
};

int cmd_multiplex(const MultiplexArgs& a, const std::vector<std::string>& argv) {
    io::MultiplexInput mi = io::read_multiplex(a.manifest);
    if (a.theta_opt->count()) mi.theta = a.theta;
    SignedMultiplex sm = sign_transform(mi.voting, mi.transform, mi.coupling);
    bool disconnected = false;
    SignedGraph g = mi.theta > 0.0 ? threshold_entries(sm.graph, mi.theta, &sm.partition, &disconnected) : sm.graph;
    SyncSolution sol = eig_sync(g, a.method == "eig");

    const fs::path out(a.out);
    prepare_out(out);
    write_csv(out / "graph.csv", g, io::write_graph);
    write_csv(out / "partition.csv", sm.partition, io::write_partition);
    write_csv(out / "solution.csv", sol, io::write_solution);
    MisclassificationReport rep = misclassification_report(sol, mi.voting, mi.parties);
    write_csv(out / "misclassification.csv", rep, write_misclassification_csv);
    Json j = {{"nodes", g.size()},
              {"edges", g.edge_count()},
              {"layers", mi.voting.layer_count()},
              {"entities", sm.partition.block_count()},
              {"coupling_pairs", sm.coupling_pairs},
              {"dropped_entries", sm.dropped},
              {"threshold_disconnected", disconnected},
              {"excluded", rep.excluded},
              {"flipped", rep.flipped},
              {"accuracy", {{mi.parties[0], rep.accuracy(0)}, {mi.parties[1], rep.accuracy(1)}}},
              {"diagnostics", io::diagnostics_json(sol.diagnostics)}};
    io::write_json_file(out / "report.json", j);

    Json params = {{"method", a.method},
                   {"epsilon", mi.voting.epsilon},
                   {"transform", mi.transform == Transform::sign ? "sign" : "linear"},
                   {"coupling", mi.coupling == Coupling::categorical ? "categorical" : "ordinal"},
                   {"theta", mi.theta},
                   {"parties", mi.parties}};
    write_manifest(out, "multiplex", argv, std::move(params), {{"manifest", absolute(a.manifest)}},
                   {"graph.csv", "partition.csv", "solution.csv", "misclassification.csv", "report.json"});
    return kExitOk;
}

// ------------------------------------------------------------------ replay

int cmd_replay(const std::string& manifest, const std::string& out_override, std::ostream& out, std::ostream& err) {
    const Json m = io::read_json_file(manifest);
    std::vector<std::string> argv;
    try {
        argv = m.at("argv").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError(manifest + ": " + e.what());
    }
    if (argv.empty() || argv[0] == "replay") throw UsageError(manifest + ": nothing to replay");
    if (m.value("version", std::string()) != kVersion)
        err << "zsync: manifest written by " << m.value("version", std::string("unknown version")) << '\n';
    if (!out_override.empty()) {
        bool replaced = false;
        for (std::size_t i = 0; i < argv.size(); ++i) {
            if (argv[i] == "--out" && i + 1 < argv.size()) {
                argv[i + 1] = out_override;
                replaced = true;
            } else if (argv[i].rfind("--out=", 0) == 0) {
                argv[i] = "--out=" + out_override;
                replaced = true;
            }
        }
        if (!replaced) throw UsageError(manifest + ": stored command has no --out");
    }
    return run(argv, out, err);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Z2 group synchronization toolkit", "zsync"};
    app.require_subcommand(1);
    // --h is the anchor count, so help is long-form only.
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", kVersion);

    GenerateArgs ga;
    auto* gen = app.add_subcommand("generate", "Generate a seeded random instance");
    gen->add_option("model", ga.model, "erdos-renyi | regular-bad | preferential-attachment | congress-model-1 | benchmark-2")
        ->required();
    gen->add_option("--out", ga.out, "Output directory")->required();
    gen->add_option("--seed", ga.seed, "Random seed");
    ga.n_opt = gen->add_option("--n", ga.n, "Node count");
    ga.alpha_opt = gen->add_option("--alpha", ga.alpha, "Edge probability");
    ga.eta_opt = gen->add_option("--eta", ga.eta, "Flip probability");
    ga.d_opt = gen->add_option("--d", ga.d, "Bad-subgraph degree");
    ga.m_opt = gen->add_option("--m", ga.m, "Edges per new node (preferential attachment)");
    ga.C_opt = gen->add_option("--C", ga.C, "Number of congresses");
    ga.S_opt = gen->add_option("--S", ga.S, "Senators per congress");
    ga.gamma_opt = gen->add_option("--gamma", ga.gamma, "Seat persistence probability");
    ga.k_opt = gen->add_option("--k", ga.k, "Number of blocks (benchmark-2)");
    gen->add_option("--h", ga.h, "Also write h random anchors");

    SolveArgs sa;
    auto* sol = app.add_subcommand("solve", "Run one synchronization method");
    sol->add_option("method", sa.method)->required()->check(CLI::IsMember(method_names()));
    sol->add_option("--graph", sa.graph, "Edge list i,j,w")->required();
    sol->add_option("--out", sa.out, "Output directory")->required();
    sol->add_option("--truth", sa.truth, "Ground truth i,z; adds tau to diagnostics");
    sol->add_option("--anchors", sa.anchors, "Anchors i,a");
    sol->add_option("--partition", sa.partition, "Partition i,block");
    sa.n_opt = sol->add_option("--n", sa.n, "Node count (default: from truth, partition or edges)");
    sol->add_option("--seed", sa.seed, "Seed for start vectors and restarts");
    sol->add_option("--channel-p", sa.channel_p, "MPS channel probability in (0.5, 1]");
    sol->add_option("--max-iter", sa.max_iter, "MPS iteration cap");
    sol->add_option("--tol", sa.tol, "MPS belief change tolerance");
    sol->add_option("--damping", sa.damping, "MPS damping in [0, 1)");
    sa.random_root_opt = sol->add_flag("--random-root", "MPS: pick roots at random from --seed");
    sol->add_option("--eig-route", sa.eig_route, "lanczos | power")->check(CLI::IsMember({"lanczos", "power"}));
    sol->add_option("--qcqp-route", sa.qcqp_route, "auto | dense | iterative")
        ->check(CLI::IsMember({"auto", "dense", "iterative"}));
    sol->add_option("--sdp-rank", sa.sdp_rank, "Factor rank (0: automatic)");
    sol->add_option("--sdp-restarts", sa.sdp_restarts, "Random restarts");
    sol->add_option("--sdp-max-sweeps", sa.sdp_max_sweeps, "Sweep cap");
    sol->add_flag("--sign-only", sa.sign_only, "part-k: count edges instead of summing weights");
    sol->add_flag("--weight-mass", sa.weight_mass, "part-k: scale partition-graph edges by edge mass");

    ExperimentArgs ea;
    auto* exp = app.add_subcommand("experiment", "Run a preset sweep");
    exp->add_option("preset", ea.preset)->required()->check(CLI::IsMember(experiment_presets()));
    exp->add_option("--out", ea.out, "Output directory")->required();
    exp->add_option("--seed", ea.opts.seed, "Base seed");
    exp->add_option("--jobs", ea.opts.jobs, "Worker threads");
    exp->add_option("--spec", ea.spec, "Sweep file for the custom preset");
    ea.n_opt = exp->add_option("--n", ea.n, "Node count");
    ea.h_opt = exp->add_option("--h", ea.h, "Anchor count");
    ea.k_opt = exp->add_option("--k", ea.k, "Block count");
    ea.trials_opt = exp->add_option("--trials", ea.trials, "Trials per heatmap cell");
    ea.seeds_opt = exp->add_option("--seeds", ea.seeds, "Seeds per grid point");
    ea.congresses_opt = exp->add_option("--C", ea.congresses, "Congresses");
    ea.alpha_opt = exp->add_option("--alpha", ea.alpha, "Edge probability");
    ea.eta_opt = exp->add_option("--eta", ea.eta, "Flip probability");
    ea.gamma_opt = exp->add_option("--gamma", ea.gamma, "Seat persistence probability");
    ea.channel_opt = exp->add_option("--channel-p", ea.channel_p, "MPS channel probability");
    exp->add_flag("--raw", ea.opts.raw, "Unnormalized eigenvector method");
    exp->add_option("--method", ea.opts.method, "heatmap-fig: eig | laplacian");
    exp->add_option("--bad", ea.opts.bad, "mps-fig: regular | er | both");

    AnalyzeArgs aa;
    auto* ana = app.add_subcommand("analyze", "Spectrum and noise-threshold analysis");
    ana->add_option("what", aa.what, "spectrum | noise")->required()->check(CLI::IsMember({"spectrum", "noise"}));
    ana->add_option("--out", aa.out, "Output directory")->required();
    ana->add_option("--graph", aa.graph, "Edge list");
    ana->add_option("--truth", aa.truth, "Ground truth (noise analysis)");
    aa.n_opt = ana->add_option("--n", aa.n, "Node count");
    ana->add_option("--r", aa.r, "Leading eigenvalues to report");
    aa.bins_opt = ana->add_option("--bins", aa.bins, "Histogram of the full spectrum");
    ana->add_flag("--raw", aa.raw, "Use Z instead of D^-1 Z");
    aa.alpha_opt = ana->add_option("--alpha", aa.alpha, "Edge probability");
    aa.p_opt = ana->add_option("--p", aa.p, "Probability a measurement is correct");

    MultiplexArgs ma;
    auto* mux = app.add_subcommand("multiplex", "Signed multiplex pipeline");
    mux->add_option("--manifest", ma.manifest, "Multiplex JSON manifest")->required();
    mux->add_option("--out", ma.out, "Output directory")->required();
    mux->add_option("--method", ma.method, "eig | eig-raw")->check(CLI::IsMember({"eig", "eig-raw"}));
    ma.theta_opt = mux->add_option("--theta", ma.theta, "Drop entries with |w| below theta");

    std::string replay_manifest, replay_out;
    auto* rep = app.add_subcommand("replay", "Re-run the command stored in a manifest");
    rep->add_option("--manifest", replay_manifest, "manifest.json")->required();
    rep->add_option("--out", replay_out, "Write outputs here instead");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_generate(ga, args);
        if (sol->parsed()) return cmd_solve(sa, args, err);
        if (exp->parsed()) return cmd_experiment(ea, args);
        if (ana->parsed()) return cmd_analyze(aa, args);
        if (mux->parsed()) return cmd_multiplex(ma, args);
        if (rep->parsed()) return cmd_replay(replay_manifest, replay_out, out, err);
    } catch (const UsageError& e) {
        err << "zsync: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        err << "zsync: " << e.what() << '\n';
        return kExitIo;
    } catch (const ConvergenceError& e) {
        err << "zsync: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const Error& e) {
        err << "zsync: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace zsync::cli
