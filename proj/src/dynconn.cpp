#include "fdsampler/dynconn.hpp"

#include <cassert>
#include <cmath>
#include <unordered_map>

#include "fdsampler/error.hpp"
#include "fdsampler/rng.hpp"

namespace fds {

// Euler-tour treap node.  The tour of a tree holds one loop node per
// vertex and two arc nodes per tree edge; in-order position is tour
// position.  Aggregates combine the node's own contribution (loop nodes
// only) with both children, so every split/merge recomputes them from
// subtrees rather than by running-total subtraction.
struct DynConn::Node {
    Node* left = nullptr;
    Node* right = nullptr;
    Node* parent = nullptr;
    std::uint64_t prio = 0;

    bool is_vertex = false;
    int id = -1;  // vertex id for loops, edge id for arcs

    // node-local flags
    bool has_nontree = false;  // loop node whose non-tree bucket at this level is nonempty
    bool is_level_arc = false;  // first arc of a tree edge whose level equals this forest's

    // subtree aggregates
    int sz_all = 1;
    int sz_vertex = 0;
    int agg_zero = 0;
    double agg_log = 0.0;
    bool sub_has_nontree = false;
    bool sub_has_level_arc = false;

    // own contribution, fixed at creation for loop nodes
    int own_vertex = 0;
    int own_zero = 0;
    double own_log = 0.0;
};

struct DynConn::Level {
    std::vector<Node*> vnode;  // loop node per vertex
    std::vector<std::unordered_set<int>> nontree;
};

using Node = DynConn::Node;

// ---- treap primitives -------------------------------------------------

namespace {

void pull(Node* x) {
    x->sz_all = 1;
    x->sz_vertex = x->own_vertex;
    x->agg_zero = x->own_zero;
    x->agg_log = x->own_log;
    x->sub_has_nontree = x->has_nontree;
    x->sub_has_level_arc = x->is_level_arc;
    for (Node* c : {x->left, x->right}) {
        if (!c) continue;
        x->sz_all += c->sz_all;
        x->sz_vertex += c->sz_vertex;
        x->agg_zero += c->agg_zero;
        x->agg_log += c->agg_log;
        x->sub_has_nontree |= c->sub_has_nontree;
        x->sub_has_level_arc |= c->sub_has_level_arc;
    }
}

void pull_to_root(Node* x) {
    for (; x; x = x->parent) pull(x);
}

Node* find_root(Node* x) {
    while (x->parent) x = x->parent;
    return x;
}

Node* merge(Node* a, Node* b) {
    if (!a) return b;
    if (!b) return a;
    if (a->prio >= b->prio) {
        Node* r = merge(a->right, b);
        a->right = r;
        if (r) r->parent = a;
        pull(a);
        return a;
    }
    Node* l = merge(a, b->left);
    b->left = l;
    if (l) l->parent = b;
    pull(b);
    return b;
}

// Splits the sequence containing x into (everything before x, x and after).
std::pair<Node*, Node*> split_before(Node* x) {
    Node* before = x->left;
    if (before) {
        before->parent = nullptr;
        x->left = nullptr;
    }
    Node* after = x;
    Node* cur = x;
    Node* par = x->parent;
    x->parent = nullptr;
    pull(x);
    while (par) {
        Node* next = par->parent;
        bool was_left = par->left == cur;
        par->parent = nullptr;
        if (was_left) {
            par->left = nullptr;
            pull(par);
            after = merge(after, par);
        } else {
            par->right = nullptr;
            pull(par);
            before = merge(par, before);
        }
        cur = par;
        par = next;
    }
    return {before, after};
}

// Splits into (everything up to and including x, everything after).
std::pair<Node*, Node*> split_after(Node* x) {
    Node* after = x->right;
    if (after) {
        after->parent = nullptr;
        x->right = nullptr;
    }
    Node* before = x;
    Node* cur = x;
    Node* par = x->parent;
    x->parent = nullptr;
    pull(x);
    while (par) {
        Node* next = par->parent;
        bool was_left = par->left == cur;
        par->parent = nullptr;
        if (was_left) {
            par->left = nullptr;
            pull(par);
            after = merge(after, par);
        } else {
            par->right = nullptr;
            pull(par);
            before = merge(par, before);
        }
        cur = par;
        par = next;
    }
    return {before, after};
}

// Tour position of x, for ordering the two arcs of a tree edge.
int index_of(Node* x) {
    int idx = x->left ? x->left->sz_all : 0;
    for (Node* cur = x; cur->parent; cur = cur->parent) {
        if (cur->parent->right == cur)
            idx += cur->parent->sz_all - cur->sz_all;
    }
    return idx;
}

// Rotates the tour so it starts at x; returns the new root.
Node* reroot(Node* x) {
    auto [before, after] = split_before(x);
    return merge(after, before);
}

// First loop node with a nonempty non-tree bucket under root, or null.
Node* find_flagged_vertex(Node* root) {
    if (!root || !root->sub_has_nontree) return nullptr;
    Node* x = root;
    for (;;) {
        if (x->left && x->left->sub_has_nontree) {
            x = x->left;
        } else if (x->has_nontree) {
            return x;
        } else {
            x = x->right;
        }
    }
}

// First arc flagged as a level-arc under root, or null.
Node* find_level_arc(Node* root) {
    if (!root || !root->sub_has_level_arc) return nullptr;
    Node* x = root;
    for (;;) {
        if (x->left && x->left->sub_has_level_arc) {
            x = x->left;
        } else if (x->is_level_arc) {
            return x;
        } else {
            x = x->right;
        }
    }
}

}  // namespace

// ---- DynConn ----------------------------------------------------------

DynConn::DynConn(const Graph& g, const std::vector<double>& lambda)
    : n_(g.num_vertices()), graph_(&g), edges_(g.num_edges()) {
    if (static_cast<int>(lambda.size()) != n_)
        throw InvalidInput("DynConn: lambda size does not match vertex count");
    lambda_zero_.resize(n_);
    lambda_log_.resize(n_);
    for (int v = 0; v < n_; ++v) {
        if (lambda[v] < 0.0) throw InvalidInput("DynConn: lambda_v must be nonnegative");
        lambda_zero_[v] = lambda[v] == 0.0 ? 1 : 0;
        lambda_log_[v] = lambda[v] == 0.0 ? 0.0 : std::log(lambda[v]);
    }
    ensure_level(0);
}

DynConn::~DynConn() {
    for (auto& lvl : levels_) {
        std::unordered_set<Node*> roots;
        for (Node* vn : lvl->vnode) roots.insert(find_root(vn));
        std::vector<Node*> stack(roots.begin(), roots.end());
        while (!stack.empty()) {
            Node* x = stack.back();
            stack.pop_back();
            if (x->left) stack.push_back(x->left);
            if (x->right) stack.push_back(x->right);
            delete x;
        }
    }
}

DynConn::Node* DynConn::make_vertex_node(int v) {
    Node* x = new Node;
    x->prio = prio_state_ = mix64(prio_state_);
    x->is_vertex = true;
    x->id = v;
    x->own_vertex = 1;
    x->own_zero = lambda_zero_[v] ? 1 : 0;
    x->own_log = lambda_zero_[v] ? 0.0 : lambda_log_[v];
    pull(x);
    return x;
}

DynConn::Node* DynConn::make_arc_node(int e) {
    Node* x = new Node;
    x->prio = prio_state_ = mix64(prio_state_);
    x->id = e;
    pull(x);
    return x;
}

void DynConn::ensure_level(int i) {
    while (static_cast<int>(levels_.size()) <= i) {
        auto lvl = std::make_unique<Level>();
        lvl->vnode.resize(n_);
        lvl->nontree.resize(n_);
        for (int v = 0; v < n_; ++v) lvl->vnode[v] = make_vertex_node(v);
        levels_.push_back(std::move(lvl));
    }
}

void DynConn::link_at_level(int i, int e) {
    auto [u, v] = graph_->edge(e);
    EdgeState& es = edges_[e];
    Node* a1 = make_arc_node(e);
    Node* a2 = make_arc_node(e);
    if (static_cast<int>(es.arcs.size()) <= i) es.arcs.resize(i + 1);
    es.arcs[i] = {a1, a2};
    if (i == es.level) a1->is_level_arc = true;
    pull(a1);
    Node* tu = reroot(levels_[i]->vnode[u]);
    Node* tv = reroot(levels_[i]->vnode[v]);
    merge(merge(merge(tu, a1), tv), a2);
}

void DynConn::cut_at_level(int i, int e) {
    EdgeState& es = edges_[e];
    Node* a1 = es.arcs[i][0];
    Node* a2 = es.arcs[i][1];
    es.arcs[i] = {nullptr, nullptr};
    if (index_of(a2) < index_of(a1)) std::swap(a1, a2);
    auto [left, rest] = split_before(a1);
    (void)rest;
    auto sides = split_before(a2);
    (void)sides;
    auto [a1_alone, middle] = split_after(a1);
    (void)middle;  // the detached subtree's tour remains its own treap
    auto [a2_alone, right] = split_after(a2);
    assert(a1_alone->sz_all == 1 && a2_alone->sz_all == 1);
    delete a1_alone;
    delete a2_alone;
    merge(left, right);
}

void DynConn::set_nontree_flag(int i, int v) {
    Node* x = levels_[i]->vnode[v];
    bool want = !levels_[i]->nontree[v].empty();
    if (x->has_nontree != want) {
        x->has_nontree = want;
        pull_to_root(x);
    }
}

bool DynConn::has_edge(int e) const {
    if (e < 0 || e >= static_cast<int>(edges_.size()))
        throw InvalidInput("DynConn: edge id out of range");
    return edges_[e].present;
}

void DynConn::insert_edge(int e) {
    if (e < 0 || e >= static_cast<int>(edges_.size()))
        throw InvalidInput("DynConn: edge id out of range");
    EdgeState& es = edges_[e];
    if (es.present) throw ContractViolation("DynConn::insert_edge: edge already present");
    auto [u, v] = graph_->edge(e);
    es.present = true;
    es.level = 0;
    if (connected(u, v)) {
        es.tree = false;
        levels_[0]->nontree[u].insert(e);
        levels_[0]->nontree[v].insert(e);
        set_nontree_flag(0, u);
        set_nontree_flag(0, v);
    } else {
        es.tree = true;
        link_at_level(0, e);
    }
}

// Replacement search at `level` after a tree-edge cut left u and v in
// separate trees there.  Level-`level` tree edges inside the smaller
// side move one level up first; then the smaller side's non-tree
// buckets are scanned, promoting internal edges and stopping at the
// first edge that crosses back to the other side.  Returns true when a
// replacement was relinked at forests 0..level.
bool DynConn::replace_edge(int level, int u, int v) {
    Level& lvl = *levels_[level];
    Node* ru = find_root(lvl.vnode[u]);
    Node* rv = find_root(lvl.vnode[v]);
    assert(ru != rv);
    Node* small = ru->sz_vertex <= rv->sz_vertex ? ru : rv;

    ensure_level(level + 1);

    while (Node* arc = find_level_arc(small)) {
        int e = arc->id;
        EdgeState& es = edges_[e];
        assert(es.level == level && es.tree);
        arc->is_level_arc = false;
        pull_to_root(arc);
        es.level = level + 1;
        link_at_level(level + 1, e);
    }

    while (Node* vn = find_flagged_vertex(small)) {
        int x = vn->id;
        int e = *lvl.nontree[x].begin();
        auto [a, b] = graph_->edge(e);
        int y = a == x ? b : a;
        lvl.nontree[a].erase(e);
        lvl.nontree[b].erase(e);
        set_nontree_flag(level, a);
        set_nontree_flag(level, b);
        if (find_root(lvl.vnode[y]) == small) {
            // internal to the smaller side: promote
            edges_[e].level = level + 1;
            levels_[level + 1]->nontree[a].insert(e);
            levels_[level + 1]->nontree[b].insert(e);
            set_nontree_flag(level + 1, a);
            set_nontree_flag(level + 1, b);
        } else {
            // crosses the split: becomes the replacement tree edge
            edges_[e].tree = true;
            for (int i = 0; i <= level; ++i) link_at_level(i, e);
            return true;
        }
    }
    return false;
}

void DynConn::delete_edge(int e) {
    if (e < 0 || e >= static_cast<int>(edges_.size()))
        throw InvalidInput("DynConn: edge id out of range");
    EdgeState& es = edges_[e];
    if (!es.present) throw ContractViolation("DynConn::delete_edge: edge not present");
    auto [u, v] = graph_->edge(e);
    es.present = false;
    if (!es.tree) {
        Level& lvl = *levels_[es.level];
        lvl.nontree[u].erase(e);
        lvl.nontree[v].erase(e);
        set_nontree_flag(es.level, u);
        set_nontree_flag(es.level, v);
        es.level = 0;
        return;
    }
    const int top = es.level;
    for (int i = top; i >= 0; --i) cut_at_level(i, e);
    es.tree = false;
    es.level = 0;
    for (int i = top; i >= 0; --i)
        if (replace_edge(i, u, v)) break;
}

bool DynConn::connected(int u, int v) {
    if (u < 0 || u >= n_ || v < 0 || v >= n_)
        throw InvalidInput("DynConn: vertex id out of range");
    if (u == v) return true;
    return find_root(levels_[0]->vnode[u]) == find_root(levels_[0]->vnode[v]);
}

Weight DynConn::comp_lambda_product(int u) {
    if (u < 0 || u >= n_) throw InvalidInput("DynConn: vertex id out of range");
    Node* r = find_root(levels_[0]->vnode[u]);
    if (r->agg_zero > 0) return Weight::zero();
    return Weight::from_log(r->agg_log);
}

int DynConn::comp_size(int u) {
    if (u < 0 || u >= n_) throw InvalidInput("DynConn: vertex id out of range");
    return find_root(levels_[0]->vnode[u])->sz_vertex;
}

std::vector<int> DynConn::component_ids() {
    std::vector<int> out(n_);
    std::unordered_map<Node*, int> seen;
    for (int v = 0; v < n_; ++v) {
        Node* r = find_root(levels_[0]->vnode[v]);
        auto [it, fresh] = seen.emplace(r, static_cast<int>(seen.size()));
        (void)fresh;
        out[v] = it->second;
    }
    return out;
}

}  // namespace fds
