#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <unordered_set>
#include <vector>

#include "fdsampler/graph.hpp"
#include "fdsampler/weight.hpp"

namespace fds {

/// Fully-dynamic connectivity over (V, X) for X a subset of the host
/// graph's edges, with a per-component field-product aggregate.
///
/// Hierarchical-levels design: one Euler-tour forest (treap) per level,
/// non-tree edges bucketed per level, replacement search promotes edges
/// of the smaller side one level up.  All four operations run in
/// amortized polylog time.  Component aggregates (vertex count, count
/// of zero-field vertices, sum of log lambda over the rest) live on the
/// level-0 forest and are recomputed from subtree aggregates on every
/// split, never by running-total subtraction.
///
/// Single-writer; independent chains own independent instances.
class DynConn {
public:
    struct Node;   // Euler-tour treap node (opaque)
    struct Level;  // per-level forest + non-tree buckets (opaque)

    DynConn(const Graph& g, const std::vector<double>& lambda);
    ~DynConn();

    DynConn(const DynConn&) = delete;
    DynConn& operator=(const DynConn&) = delete;

    /// Precondition: e not in X.
    void insert_edge(int e);
    /// Precondition: e in X.
    void delete_edge(int e);

    bool has_edge(int e) const;
    bool connected(int u, int v);
    /// lambda^{C_u(X)} as (zero flag, log value).
    Weight comp_lambda_product(int u);
    int comp_size(int u);

    /// Debug dump for differential testing: a component id per vertex
    /// (ids are arbitrary but equal iff connected).
    std::vector<int> component_ids();

private:
    Node* make_vertex_node(int v);
    Node* make_arc_node(int e);
    void ensure_level(int i);
    void link_at_level(int i, int e);
    void cut_at_level(int i, int e);
    void set_nontree_flag(int level, int v);
    bool replace_edge(int level, int u, int v);

    int n_ = 0;
    const Graph* graph_ = nullptr;
    std::vector<char> lambda_zero_;
    std::vector<double> lambda_log_;  // 0 for zero-field vertices

    struct EdgeState {
        bool present = false;
        bool tree = false;
        int level = 0;
        std::vector<std::array<Node*, 2>> arcs;  // per forest level 0..level when tree
    };
    std::vector<EdgeState> edges_;
    std::vector<std::unique_ptr<Level>> levels_;
    std::uint64_t prio_state_ = 0x9e3779b97f4a7c15ULL;
};

}  // namespace fds
