#include "fdsampler/weights.hpp"

#include <cmath>

#include "fdsampler/union_find.hpp"

namespace fds {

Weight ising_weight(const Graph& g, const IsingParams& params, const VertexConfig& s) {
    params.validate(g);
    s.validate(g);
    Weight w = Weight::one();
    for (int e = 0; e < g.num_edges(); ++e) {
        auto [u, v] = g.edge(e);
        if (s.contains(u) == s.contains(v)) w *= Weight::from_value(params.beta[e]);
    }
    for (int v : s.ids) w *= Weight::from_value(params.lambda[v]);
    return w;
}

Weight rc_weight(const Graph& g, const RCParams& params, const EdgeConfig& s) {
    params.validate(g, /*allow_unit_field=*/true);
    s.validate(g);

    Weight w = Weight::one();
    std::vector<char> in(g.num_edges(), 0);
    for (int e : s.ids) in[e] = 1;
    for (int e = 0; e < g.num_edges(); ++e)
        w *= Weight::from_value(in[e] ? params.p[e] : 1.0 - params.p[e]);
    if (w.is_zero) return w;

    DisjointSets uf(g.num_vertices());
    for (int e : s.ids) {
        auto [u, v] = g.edge(e);
        uf.unite(u, v);
    }
    // lambda-product per component, then a (1 + product) factor each
    std::vector<Weight> comp(g.num_vertices(), Weight::one());
    for (int v = 0; v < g.num_vertices(); ++v)
        comp[uf.find(v)] *= Weight::from_value(params.lambda[v]);
    for (int v = 0; v < g.num_vertices(); ++v)
        if (uf.find(v) == v) w *= Weight::from_log(log1p_weight(comp[v]));
    return w;
}

Weight gsw_weight(const Graph& g, const GSWParams& params, const EdgeConfig& s) {
    params.validate(g);
    s.validate(g);

    Weight w = Weight::one();
    std::vector<char> in(g.num_edges(), 0);
    for (int e : s.ids) in[e] = 1;
    for (int e = 0; e < g.num_edges(); ++e)
        w *= Weight::from_value(in[e] ? params.p[e] : 1.0 - params.p[e]);

    std::vector<int> deg(g.num_vertices(), 0);
    for (int e : s.ids) {
        auto [u, v] = g.edge(e);
        ++deg[u];
        ++deg[v];
    }
    for (int v = 0; v < g.num_vertices(); ++v)
        if (deg[v] % 2 == params.sigma[v]) w *= Weight::from_value(params.eta[v]);
    return w;
}

}  // namespace fds
