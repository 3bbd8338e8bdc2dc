#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fdsampler/error.hpp"

namespace fds {

/// Undirected simple-or-multigraph.  Parallel edges are allowed,
/// self-loops are rejected.  Edge ids are dense 0..m-1.
class Graph {
public:
    Graph() = default;
    Graph(int n, std::vector<std::pair<int, int>> edges);

    int num_vertices() const { return n_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }

    std::pair<int, int> edge(int e) const { return edges_[e]; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    /// Edge ids incident to v (the set E_v).
    const std::vector<int>& incident(int v) const { return incident_[v]; }

private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> incident_;
};

/// Subset of edge ids, kept sorted and unique.
struct EdgeConfig {
    std::vector<int> ids;

    EdgeConfig() = default;
    explicit EdgeConfig(std::vector<int> e);
    static EdgeConfig from_mask(std::uint64_t mask, int m);

    bool contains(int e) const;
    std::uint64_t mask() const;  // requires max id < 64
    void validate(const Graph& g) const;
};

/// Subset of vertex ids, kept sorted and unique.
struct VertexConfig {
    std::vector<int> ids;

    VertexConfig() = default;
    explicit VertexConfig(std::vector<int> v);
    static VertexConfig from_mask(std::uint64_t mask, int n);

    bool contains(int v) const;
    std::uint64_t mask() const;
    void validate(const Graph& g) const;
};

/// A parsed instance file: graph, one value per edge (beta or p
/// depending on the model the file describes) and one lambda per vertex.
struct Instance {
    Graph graph;
    std::vector<double> edge_value;
    std::vector<double> lambda;
};

/// Text format: line `n m`, then m lines `u v value`, then n lines
/// `lambda_v`.  `#` starts a comment.  Throws InvalidInput with a line
/// number on malformed input.
Instance parse_instance(std::istream& in);
Instance parse_instance_file(const std::string& path);

}  // namespace fds
