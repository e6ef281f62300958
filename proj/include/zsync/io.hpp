#pragma once

// File formats. All CSV files carry a header row and 0-based node indices.
//
//   graph.csv      i,j,w        upper triangle only (i < j)
//   truth.csv      i,z          z in {-1, 1}
//   partition.csv  i,block
//   anchors.csv    i,a          a in {-1, 1}
//   solution.csv   node,estimate,score
//
// Multiplex input: a JSON manifest naming one dense CSV per layer (header row
// of local ids 0..m-1, then m rows of m similarities in [0,1]) and an
// identity CSV with header layer,local_id,entity_id,label.

#include <filesystem>
#include <array>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "zsync/core.hpp"
#include "zsync/multiplex.hpp"

namespace zsync::io {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

/// Shortest decimal text that reads back to exactly `x`.
std::string format_double(double x);

void write_graph(std::ostream& out, const SignedGraph& g);
/// Node count is the largest index + 1 unless `n` is given.
SignedGraph read_graph(std::istream& in, std::optional<std::size_t> n = std::nullopt);

void write_truth(std::ostream& out, const GroundTruth& z);
GroundTruth read_truth(std::istream& in);

void write_partition(std::ostream& out, const Partition& p);
Partition read_partition(std::istream& in);

void write_anchors(std::ostream& out, const AnchorSet& a);
AnchorSet read_anchors(std::istream& in, std::size_t n);

void write_solution(std::ostream& out, const SyncSolution& sol);

/// Diagnostics as a JSON object; NaN and infinities become null.
Json diagnostics_json(const Diagnostics& d);

// Path helpers; IoError on open failure.
SignedGraph read_graph_file(const fs::path& p, std::optional<std::size_t> n = std::nullopt);
GroundTruth read_truth_file(const fs::path& p);
Partition read_partition_file(const fs::path& p);
AnchorSet read_anchors_file(const fs::path& p, std::size_t n);
Json read_json_file(const fs::path& p);
void write_json_file(const fs::path& p, const Json& j);

/// Writes via a callback into a file, throwing IoError on failure.
template <class F>
void write_file(const fs::path& p, F&& f);

struct MultiplexInput {
    MultiplexVoting voting;
    Transform transform = Transform::sign;
    Coupling coupling = Coupling::categorical;
    double theta = 0.0;
    std::array<std::string, 2> parties{"D", "R"};
};

/// Manifest keys: epsilon, transform ("sign" | "linear"), theta, coupling
/// ("categorical" | "ordinal"), layers (array of paths), identity (path),
/// parties (optional two labels). Relative paths resolve against the
/// manifest's directory.
MultiplexInput read_multiplex(const fs::path& manifest);

}  // namespace zsync::io

#include <fstream>

namespace zsync::io {

template <class F>
void write_file(const fs::path& p, F&& f) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot open " + p.string() + " for writing");
    f(out);
    out.flush();
    if (!out) throw IoError("write failed: " + p.string());
}

}  // namespace zsync::io
