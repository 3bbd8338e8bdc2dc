#include "fdsampler/coupling.hpp"

#include <algorithm>
#include <cmath>

#include "fdsampler/error.hpp"
#include "fdsampler/exact.hpp"
#include "fdsampler/weight.hpp"

namespace fds {

namespace {

constexpr int kCoupleCap = 20;          // alive-edge enumeration cap
constexpr int kComposeAttempts = 1000000;  // rejection cap for chaining

// Enumeration of the current context: weights indexed by mask over the
// alive edge list.
struct CtxTable {
    std::vector<int> edges;  // alive edge ids, ascending
    std::vector<Weight> w;
    Weight total = Weight::zero();
};

CtxTable enumerate_ctx(const Graph& g, const GSWParams& params,
                       const std::vector<char>& alive) {
    CtxTable t;
    for (int e = 0; e < g.num_edges(); ++e)
        if (alive[e]) t.edges.push_back(e);
    const int k = static_cast<int>(t.edges.size());
    if (k > kCoupleCap) throw CapExceeded("couple_gsw: alive edge set exceeds the cap");
    const std::uint64_t states = std::uint64_t{1} << k;
    t.w.resize(states);
    std::vector<int> deg(g.num_vertices());
    for (std::uint64_t mask = 0; mask < states; ++mask) {
        std::fill(deg.begin(), deg.end(), 0);
        Weight w = Weight::one();
        for (int i = 0; i < k; ++i) {
            int e = t.edges[i];
            if (mask >> i & 1) {
                w *= Weight::from_value(params.p[e]);
                auto [a, b] = g.edge(e);
                ++deg[a];
                ++deg[b];
            } else {
                w *= Weight::from_value(1.0 - params.p[e]);
            }
        }
        for (int v = 0; v < g.num_vertices(); ++v)
            if (deg[v] % 2 == params.sigma[v]) w *= Weight::from_value(params.eta[v]);
        t.w[mask] = w;
        t.total += w;
    }
    return t;
}

// parity of |mask ∩ E_u| for the alive edge list
int parity_at(const Graph& g, const CtxTable& t, std::uint64_t mask, int u) {
    int par = 0;
    for (std::size_t i = 0; i < t.edges.size(); ++i) {
        if (!(mask >> i & 1)) continue;
        auto [a, b] = g.edge(t.edges[i]);
        if (a == u || b == u) par ^= 1;
    }
    return par;
}

double logistic(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

// Pr[edge e present] under the context measure
double edge_marginal(const Graph& g, const GSWParams& params,
                     const std::vector<char>& alive, int e) {
    CtxTable t = enumerate_ctx(g, params, alive);
    if (t.total.is_zero) throw DegenerateSystem("couple_gsw: context has zero mass");
    int idx = static_cast<int>(
        std::lower_bound(t.edges.begin(), t.edges.end(), e) - t.edges.begin());
    Weight with_e = Weight::zero();
    for (std::uint64_t mask = 0; mask < t.w.size(); ++mask)
        if (mask >> idx & 1) with_e += t.w[mask];
    if (with_e.is_zero) return 0.0;
    return std::exp(with_e.log_value - t.total.log_value);
}

EdgeConfig sample_ctx(const Graph& g, const GSWParams& params,
                      const std::vector<char>& alive, Rng& rng) {
    CtxTable t = enumerate_ctx(g, params, alive);
    ExactDistribution d(static_cast<int>(t.edges.size()), t.w);
    std::uint64_t mask = exact_sample(d, rng);
    std::vector<int> ids;
    for (std::size_t i = 0; i < t.edges.size(); ++i)
        if (mask >> i & 1) ids.push_back(t.edges[i]);
    return EdgeConfig{std::move(ids)};
}

// mu(A) for A = even-parity-at-u configurations
double parity_mass(const Graph& g, const GSWParams& params,
                   const std::vector<char>& alive, int u) {
    CtxTable t = enumerate_ctx(g, params, alive);
    if (t.total.is_zero) throw DegenerateSystem("couple_gsw: context has zero mass");
    Weight even = Weight::zero();
    for (std::uint64_t mask = 0; mask < t.w.size(); ++mask)
        if (parity_at(g, t, mask, u) == 0) even += t.w[mask];
    if (even.is_zero) return 0.0;
    return std::exp(even.log_value - t.total.log_value);
}

int symmetric_difference(const EdgeConfig& a, const EdgeConfig& b) {
    std::vector<int> out;
    std::set_symmetric_difference(a.ids.begin(), a.ids.end(), b.ids.begin(), b.ids.end(),
                                  std::back_inserter(out));
    return static_cast<int>(out.size());
}

EdgeConfig config_union(const EdgeConfig& a, const EdgeConfig& b) {
    std::vector<int> out;
    std::set_union(a.ids.begin(), a.ids.end(), b.ids.begin(), b.ids.end(),
                   std::back_inserter(out));
    return EdgeConfig{std::move(out)};
}

}  // namespace

CoupleContext CoupleContext::make(const Graph& g, const GSWParams& params, int u) {
    params.validate(g);
    if (u < 0 || u >= g.num_vertices())
        throw InvalidInput("CoupleContext: vertex id out of range");
    for (double e : params.eta)
        if (e <= 0.0)
            throw InvalidInput("CoupleContext: eta must be positive outside the visited set");
    CoupleContext ctx;
    ctx.g = &g;
    ctx.params = params;
    ctx.alive.assign(g.num_edges(), 1);
    ctx.visited.assign(g.num_vertices(), 0);
    ctx.u = u;
    return ctx;
}

CouplingSample couple_gsw(CoupleContext ctx, Rng& rng) {
    const Graph& g = *ctx.g;
    GSWParams& par = ctx.params;
    std::vector<int> x_ids, y_ids;
    int visited_count = 0;
    for (int v : ctx.visited) visited_count += v;

    for (;;) {
        int u = ctx.u;
        if (!ctx.visited[u]) {
            ctx.visited[u] = 1;
            ++visited_count;

            // R over the eta_u -> 1 measure, split by parity at u
            GSWParams unit = par;
            unit.eta[u] = 1.0;
            CtxTable t = enumerate_ctx(g, unit, ctx.alive);
            if (t.total.is_zero) throw DegenerateSystem("couple_gsw: context has zero mass");
            Weight even = Weight::zero(), odd = Weight::zero();
            for (std::uint64_t mask = 0; mask < t.w.size(); ++mask) {
                if (parity_at(g, t, mask, u) == 0)
                    even += t.w[mask];
                else
                    odd += t.w[mask];
            }
            const double eta_u = par.eta[u];
            double q0, q1;
            if (even.is_zero) {
                q0 = q1 = 0.0;  // R = 0
            } else if (odd.is_zero) {
                q0 = q1 = 1.0;  // R = infinity
            } else {
                double log_r = even.log_value - odd.log_value;
                q0 = logistic(log_r + std::log(eta_u));
                q1 = logistic(log_r - std::log(eta_u));
            }

            double r = uniform01(rng);
            par.eta[u] = 0.0;

            if (ctx.debug) {
                GSWParams d0 = par;  // the identity needs eta_u restored
                d0.eta[u] = eta_u;
                GSWParams d1 = d0;
                d0.sigma[u] = 0;
                d1.sigma[u] = 1;
                if (std::abs(parity_mass(g, d0, ctx.alive, u) - q0) > 1e-9 ||
                    std::abs(parity_mass(g, d1, ctx.alive, u) - q1) > 1e-9)
                    throw ContractViolation("couple_gsw: q0/q1 identity violated");
            }

            if (r >= q1 || r <= q0) {
                par.sigma[u] = r >= q1 ? 0 : 1;
                EdgeConfig c = sample_ctx(g, par, ctx.alive, rng);
                CouplingSample out;
                out.x = config_union(EdgeConfig{x_ids}, c);
                out.y = config_union(EdgeConfig{y_ids}, c);
                out.discrepancy = symmetric_difference(out.x, out.y);
                out.visited = visited_count;
                return out;
            }
        }

        // recurse along the lowest-id alive incident edge
        int e = -1;
        for (int f : g.incident(u))
            if (ctx.alive[f] && (e == -1 || f < e)) e = f;
        if (e == -1)
            throw ContractViolation("couple_gsw: no incident edge left at the discrepancy vertex");
        auto [a, b] = g.edge(e);
        int v = a == u ? b : a;

        // single-edge marginals of the sigma and sigma ⊕ 1_u measures,
        // coupled through a shared uniform (optimal for two-point laws)
        double nu_p = edge_marginal(g, par, ctx.alive, e);
        GSWParams flipped = par;
        flipped.sigma[u] ^= 1;
        double pi_p = edge_marginal(g, flipped, ctx.alive, e);
        double r = uniform01(rng);
        bool x1 = r < nu_p;
        bool y1 = r < pi_p;

        if (x1) {
            par.sigma[u] ^= 1;
            par.sigma[v] ^= 1;
        }
        ctx.alive[e] = 0;
        if (x1) x_ids.push_back(e);
        if (y1) y_ids.push_back(e);
        if (x1 != y1) ctx.u = v;
    }
}

CouplingSample couple_gsw_edge(const Graph& g, const GSWParams& params, int e, Rng& rng) {
    params.validate(g);
    if (e < 0 || e >= g.num_edges()) throw InvalidInput("couple_gsw_edge: edge id out of range");
    std::vector<char> all(g.num_edges(), 1);
    double nu_e = edge_marginal(g, params, all, e);
    if (nu_e <= 0.0 || nu_e >= 1.0)
        throw DegenerateSystem("couple_gsw_edge: conditioning edge has a degenerate marginal");

    auto [u, v] = g.edge(e);

    // C1 couples (nu(.|e absent), nu-tilde), C2 couples (nu-tilde, nu(.|e present))
    CoupleContext c1 = CoupleContext::make(g, params, u);
    c1.alive[e] = 0;
    CoupleContext c2 = c1;
    c2.params.sigma[u] ^= 1;
    c2.u = v;

    CouplingSample s1 = couple_gsw(c1, rng);
    for (int attempt = 0; attempt < kComposeAttempts; ++attempt) {
        CouplingSample s2 = couple_gsw(c2, rng);
        if (s2.x.ids == s1.y.ids) {
            CouplingSample out;
            out.x = s1.x;
            out.y = s2.y;
            out.discrepancy = symmetric_difference(out.x, out.y);
            out.visited = s1.visited + s2.visited;
            return out;
        }
    }
    throw DegenerateSystem("couple_gsw_edge: rejection composition failed to accept");
}

double lift_te(double q_e, double nu_without, double nu_with) {
    double num = q_e * nu_without;
    double den = num + nu_with;
    if (den <= 0.0) throw DegenerateSystem("lift_te: zero denominator");
    return num / den;
}

CouplingSample lift_coupling_rc(const Graph& g, const RCParams& rc, int e, Rng& rng) {
    rc.validate(g);
    if (e < 0 || e >= g.num_edges()) throw InvalidInput("lift_coupling_rc: edge id out of range");
    std::vector<double> half = rc.p;
    for (double& p : half) p *= 0.5;
    GSWParams gsw{half, lambda_to_eta(rc.lambda), std::vector<int>(g.num_vertices(), 1)};
    std::vector<double> q = p_to_q(rc.p);

    std::vector<char> all(g.num_edges(), 1);
    double nu_e = edge_marginal(g, gsw, all, e);
    double te = lift_te(q[e], 1.0 - nu_e, nu_e);

    CouplingSample inner = couple_gsw_edge(g, gsw, e, rng);
    std::vector<int> z;
    for (int f = 0; f < g.num_edges(); ++f)
        if (uniform01(rng) < q[f]) z.push_back(f);
    EdgeConfig zc{std::move(z)};

    EdgeConfig x0z = config_union(inner.x, zc);
    std::vector<int> y0_ids;
    for (int f : x0z.ids)
        if (f != e) y0_ids.push_back(f);

    CouplingSample out;
    out.x = EdgeConfig{std::move(y0_ids)};
    if (uniform01(rng) < te) {
        out.y = config_union(x0z, EdgeConfig{{e}});
    } else {
        out.y = config_union(config_union(inner.y, EdgeConfig{{e}}), zc);
    }
    out.discrepancy = symmetric_difference(out.x, out.y);
    out.visited = inner.visited;
    return out;
}

ConvolutionReport verify_sw_rc_convolution(const Graph& g, const RCParams& rc) {
    rc.validate(g);
    const int m = g.num_edges();
    if (m > 16) throw CapExceeded("verify_sw_rc_convolution: m must be at most 16");
    ExactDistribution mu = enumerate_rc(g, rc);
    std::vector<double> half = rc.p;
    for (double& p : half) p *= 0.5;
    ExactDistribution nu = enumerate_gsw(
        g, GSWParams{half, lambda_to_eta(rc.lambda), std::vector<int>(g.num_vertices(), 1)});
    std::vector<double> q = p_to_q(rc.p);

    ConvolutionReport rep;
    const std::uint64_t states = std::uint64_t{1} << m;
    for (std::uint64_t y = 0; y < states; ++y) {
        double outside = 1.0;
        for (int f = 0; f < m; ++f)
            if (!(y >> f & 1)) outside *= 1.0 - q[f];
        double rhs = 0.0;
        // iterate X over subsets of Y
        std::uint64_t x = y;
        for (;;) {
            double fill = 1.0;
            for (int h = 0; h < m; ++h)
                if ((y >> h & 1) && !(x >> h & 1)) fill *= q[h];
            rhs += nu.prob[x] * fill;
            if (x == 0) break;
            x = (x - 1) & y;
        }
        rhs *= outside;
        rep.max_abs_err = std::max(rep.max_abs_err, std::abs(mu.prob[y] - rhs));
    }
    return rep;
}

CouplingEstimate estimate_coupling_independence(
    const std::function<CouplingSample(Rng&)>& coupler, long long runs, Rng& rng) {
    if (runs < 1) throw InvalidInput("estimate_coupling_independence: runs must be >= 1");
    double sum = 0.0, sum_sq = 0.0;
    for (long long t = 0; t < runs; ++t) {
        double d = static_cast<double>(coupler(rng).discrepancy);
        sum += d;
        sum_sq += d * d;
    }
    CouplingEstimate est;
    est.mean = sum / static_cast<double>(runs);
    if (runs > 1) {
        double var = (sum_sq - sum * sum / static_cast<double>(runs)) /
                     static_cast<double>(runs - 1);
        est.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(runs));
    }
    return est;
}

}  // namespace fds
