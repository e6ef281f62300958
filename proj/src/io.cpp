#include "zsync/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace zsync::io {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

class CsvReader {
public:
    CsvReader(std::istream& in, std::vector<std::string> header, std::string what)
        : in_(in), what_(std::move(what)) {
        std::string line;
        if (!next_line(line)) throw IoError(what_ + ": missing header");
        if (split(line) != header) {
            std::string expected;
            for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
            throw IoError(what_ + ": expected header '" + expected + "'");
        }
        width_ = header.size();
    }

    bool next(std::vector<std::string>& fields) {
        std::string line;
        if (!next_line(line)) return false;
        fields = split(line);
        if (fields.size() != width_)
            throw IoError(what_ + ": line " + std::to_string(line_no_) + " has " + std::to_string(fields.size()) +
                          " fields, expected " + std::to_string(width_));
        return true;
    }

    template <class T>
    T number(const std::string& field) const {
        T value{};
        const char* end = field.data() + field.size();
        auto [ptr, ec] = std::from_chars(field.data(), end, value);
        if (ec != std::errc() || ptr != end)
            throw IoError(what_ + ": line " + std::to_string(line_no_) + ": bad number '" + field + "'");
        return value;
    }

private:
    bool next_line(std::string& line) {
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!trim(line).empty()) return true;
        }
        return false;
    }

    std::istream& in_;
    std::string what_;
    std::size_t width_ = 0;
    std::size_t line_no_ = 0;
};

int read_sign(const CsvReader& r, const std::string& field) {
    int v = r.number<int>(field);
    if (v != 1 && v != -1) throw IoError("expected -1 or 1, got '" + field + "'");
    return v;
}

std::ifstream open_in(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open " + p.string());
    return in;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) throw IoError("cannot format number");
    return std::string(buf, ptr);
}

void write_graph(std::ostream& out, const SignedGraph& g) {
    out << "i,j,w\n";
    for (const auto& e : g.edges()) out << e.i << ',' << e.j << ',' << format_double(e.w) << '\n';
}

SignedGraph read_graph(std::istream& in, std::optional<std::size_t> n) {
    CsvReader r(in, {"i", "j", "w"}, "graph");
    std::vector<Edge> edges;
    std::vector<std::string> f;
    std::size_t max_index = 0;
    while (r.next(f)) {
        Edge e{r.number<std::size_t>(f[0]), r.number<std::size_t>(f[1]), r.number<double>(f[2])};
        max_index = std::max({max_index, e.i, e.j});
        edges.push_back(e);
    }
    const std::size_t count = n ? *n : (edges.empty() ? 0 : max_index + 1);
    return SignedGraph(count, std::move(edges));
}

void write_truth(std::ostream& out, const GroundTruth& z) {
    out << "i,z\n";
    for (std::size_t i = 0; i < z.size(); ++i) out << i << ',' << z[i] << '\n';
}

GroundTruth read_truth(std::istream& in) {
    CsvReader r(in, {"i", "z"}, "truth");
    std::vector<int> z;
    std::vector<std::string> f;
    while (r.next(f)) {
        auto i = r.number<std::size_t>(f[0]);
        if (i != z.size()) throw IoError("truth: rows must list nodes 0..n-1 in order");
        z.push_back(read_sign(r, f[1]));
    }
    return GroundTruth(std::move(z));
}

void write_partition(std::ostream& out, const Partition& p) {
    out << "i,block\n";
    for (std::size_t i = 0; i < p.size(); ++i) out << i << ',' << p.block_of(i) << '\n';
}

Partition read_partition(std::istream& in) {
    CsvReader r(in, {"i", "block"}, "partition");
    std::vector<std::size_t> block;
    std::vector<std::string> f;
    while (r.next(f)) {
        auto i = r.number<std::size_t>(f[0]);
        if (i != block.size()) throw IoError("partition: rows must list nodes 0..n-1 in order");
        block.push_back(r.number<std::size_t>(f[1]));
    }
    return Partition(std::move(block));
}

void write_anchors(std::ostream& out, const AnchorSet& a) {
    out << "i,a\n";
    for (auto [i, v] : a.entries()) out << i << ',' << v << '\n';
}

AnchorSet read_anchors(std::istream& in, std::size_t n) {
    CsvReader r(in, {"i", "a"}, "anchors");
    std::map<std::size_t, int> a;
    std::vector<std::string> f;
    while (r.next(f)) {
        auto i = r.number<std::size_t>(f[0]);
        if (!a.emplace(i, read_sign(r, f[1])).second) throw IoError("anchors: node listed twice");
    }
    return AnchorSet(n, std::move(a));
}

void write_solution(std::ostream& out, const SyncSolution& sol) {
    out << "node,estimate,score\n";
    for (std::size_t i = 0; i < sol.size(); ++i)
        out << i << ',' << sol.estimates[i] << ',' << format_double(sol.scores[i]) << '\n';
}

Json diagnostics_json(const Diagnostics& d) {
    Json j = Json::object();
    for (const auto& [k, v] : d) {
        if (std::isfinite(v))
            j[k] = v;
        else
            j[k] = nullptr;
    }
    return j;
}

SignedGraph read_graph_file(const fs::path& p, std::optional<std::size_t> n) {
    auto in = open_in(p);
    return read_graph(in, n);
}

GroundTruth read_truth_file(const fs::path& p) {
    auto in = open_in(p);
    return read_truth(in);
}

Partition read_partition_file(const fs::path& p) {
    auto in = open_in(p);
    return read_partition(in);
}

AnchorSet read_anchors_file(const fs::path& p, std::size_t n) {
    auto in = open_in(p);
    return read_anchors(in, n);
}

Json read_json_file(const fs::path& p) {
    auto in = open_in(p);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(p.string() + ": " + e.what());
    }
}

void write_json_file(const fs::path& p, const Json& j) {
    write_file(p, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

namespace {

linalg::Matrix read_layer(const fs::path& p) {
    auto in = open_in(p);
    std::string line;
    while (std::getline(in, line) && trim(line).empty()) {
    }
    const auto header = split(trim(line));
    const std::size_t m = header.size();
    for (std::size_t k = 0; k < m; ++k)
        if (header[k] != std::to_string(k)) throw IoError(p.string() + ": header must be local ids 0..m-1");
    // Data rows reuse the generic reader with the header already consumed.
    std::vector<std::string> names(header.begin(), header.end());
    std::stringstream rest;
    rest << trim(line) << '\n' << in.rdbuf();
    CsvReader r(rest, names, p.string());
    linalg::Matrix w(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    std::vector<std::string> f;
    std::size_t row = 0;
    while (r.next(f)) {
        if (row >= m) throw IoError(p.string() + ": more than " + std::to_string(m) + " rows");
        for (std::size_t k = 0; k < m; ++k) w(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(k)) = r.number<double>(f[k]);
        ++row;
    }
    if (row != m) throw IoError(p.string() + ": expected " + std::to_string(m) + " rows");
    return w;
}

}  // namespace

MultiplexInput read_multiplex(const fs::path& manifest) {
    const Json j = read_json_file(manifest);
    const fs::path base = manifest.parent_path();
    auto resolve = [&](const std::string& s) { return fs::path(s).is_absolute() ? fs::path(s) : base / s; };
    MultiplexInput mi;
    try {
        mi.voting.epsilon = j.value("epsilon", 1.0);
        mi.theta = j.value("theta", 0.0);
        const std::string transform = j.value("transform", std::string("sign"));
        if (transform == "sign") mi.transform = Transform::sign;
        else if (transform == "linear") mi.transform = Transform::linear;
        else throw IoError("manifest: transform must be 'sign' or 'linear'");
        const std::string coupling = j.value("coupling", std::string("categorical"));
        if (coupling == "categorical") mi.coupling = Coupling::categorical;
        else if (coupling == "ordinal") mi.coupling = Coupling::ordinal;
        else throw IoError("manifest: coupling must be 'categorical' or 'ordinal'");
        if (j.contains("parties")) mi.parties = {j.at("parties").at(0).get<std::string>(), j.at("parties").at(1).get<std::string>()};
        for (const auto& layer : j.at("layers")) mi.voting.layers.push_back(read_layer(resolve(layer.get<std::string>())));
        const fs::path identity = resolve(j.at("identity").get<std::string>());

        const std::size_t C = mi.voting.layers.size();
        mi.voting.entity.resize(C);
        mi.voting.labels.resize(C);
        for (std::size_t t = 0; t < C; ++t) {
            const auto m = static_cast<std::size_t>(mi.voting.layers[t].rows());
            mi.voting.entity[t].assign(m, std::numeric_limits<std::size_t>::max());
            mi.voting.labels[t].assign(m, "");
        }
        auto in = open_in(identity);
        CsvReader r(in, {"layer", "local_id", "entity_id", "label"}, identity.string());
        std::vector<std::string> f;
        while (r.next(f)) {
            auto t = r.number<std::size_t>(f[0]);
            auto local = r.number<std::size_t>(f[1]);
            if (t >= C || local >= mi.voting.entity[t].size()) throw IoError(identity.string() + ": row out of range");
            mi.voting.entity[t][local] = r.number<std::size_t>(f[2]);
            mi.voting.labels[t][local] = f[3];
        }
        for (std::size_t t = 0; t < C; ++t)
            for (auto e : mi.voting.entity[t])
                if (e == std::numeric_limits<std::size_t>::max())
                    throw IoError(identity.string() + ": layer " + std::to_string(t) + " has nodes without identity");
    } catch (const nlohmann::json::exception& e) {
        throw IoError(manifest.string() + ": " + e.what());
    }
    mi.voting.validate();
    return mi;
}

}  // namespace zsync::io
