#include "fdsampler/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fdsampler/union_find.hpp"
#include "fdsampler/weights.hpp"

namespace fds {

namespace {

void check_cap(int ground, const char* what) {
    if (ground > kEnumerationCap)
        throw CapExceeded(std::string(what) + " ground set of size " + std::to_string(ground) +
                          " exceeds the enumeration cap of " + std::to_string(kEnumerationCap));
}

// log-sum-exp over configuration log-weights; weight magnitudes span
// hundreds of orders, so never sum raw values.
double log_sum(const std::vector<Weight>& ws) {
    double hi = -std::numeric_limits<double>::infinity();
    for (const Weight& w : ws)
        if (!w.is_zero) hi = std::max(hi, w.log_value);
    if (!std::isfinite(hi)) return -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (const Weight& w : ws)
        if (!w.is_zero) acc += std::exp(w.log_value - hi);
    return hi + std::log(acc);
}

}  // namespace

ExactDistribution::ExactDistribution(int ground_size, const std::vector<Weight>& weights)
    : ground_size(ground_size) {
    check_cap(ground_size, "distribution");
    const std::size_t count = std::size_t{1} << ground_size;
    if (weights.size() != count) throw InvalidInput("weight table size mismatch");
    log_z = log_sum(weights);
    if (!std::isfinite(log_z))
        throw DegenerateSystem("partition function is zero; system is invalid");
    prob.resize(count);
    for (std::size_t i = 0; i < count; ++i)
        prob[i] = weights[i].is_zero ? 0.0 : std::exp(weights[i].log_value - log_z);
    // renormalize away the residual rounding of the exp pass
    double total = std::accumulate(prob.begin(), prob.end(), 0.0);
    for (double& x : prob) x /= total;
    cdf_.resize(count);
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        acc += prob[i];
        cdf_[i] = acc;
    }
    cdf_.back() = 1.0;
}

ExactDistribution enumerate_ising(const Graph& g, const IsingParams& params) {
    params.validate(g);
    const int n = g.num_vertices();
    check_cap(n, "Ising");
    const std::uint64_t count = std::uint64_t{1} << n;
    std::vector<Weight> ws(count);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        Weight w = Weight::one();
        for (int e = 0; e < g.num_edges(); ++e) {
            auto [u, v] = g.edge(e);
            if (((mask >> u) & 1) == ((mask >> v) & 1)) w *= Weight::from_value(params.beta[e]);
        }
        for (int v = 0; v < n; ++v)
            if (mask >> v & 1) w *= Weight::from_value(params.lambda[v]);
        ws[mask] = w;
    }
    return ExactDistribution(n, ws);
}

ExactDistribution enumerate_rc(const Graph& g, const RCParams& params) {
    params.validate(g, /*allow_unit_field=*/true);
    const int m = g.num_edges();
    const int n = g.num_vertices();
    check_cap(m, "RC");
    const std::uint64_t count = std::uint64_t{1} << m;
    std::vector<Weight> ws(count);
    std::vector<Weight> comp(n);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        Weight w = Weight::one();
        for (int e = 0; e < m; ++e)
            w *= Weight::from_value(mask >> e & 1 ? params.p[e] : 1.0 - params.p[e]);
        if (!w.is_zero) {
            DisjointSets uf(n);
            for (int e = 0; e < m; ++e)
                if (mask >> e & 1) {
                    auto [u, v] = g.edge(e);
                    uf.unite(u, v);
                }
            std::fill(comp.begin(), comp.end(), Weight::one());
            for (int v = 0; v < n; ++v) comp[uf.find(v)] *= Weight::from_value(params.lambda[v]);
            for (int v = 0; v < n; ++v)
                if (uf.find(v) == v) w *= Weight::from_log(log1p_weight(comp[v]));
        }
        ws[mask] = w;
    }
    return ExactDistribution(m, ws);
}

ExactDistribution enumerate_gsw(const Graph& g, const GSWParams& params) {
    params.validate(g);
    const int m = g.num_edges();
    const int n = g.num_vertices();
    check_cap(m, "GSW");
    const std::uint64_t count = std::uint64_t{1} << m;
    std::vector<Weight> ws(count);
    std::vector<int> deg(n);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        Weight w = Weight::one();
        for (int e = 0; e < m; ++e)
            w *= Weight::from_value(mask >> e & 1 ? params.p[e] : 1.0 - params.p[e]);
        std::fill(deg.begin(), deg.end(), 0);
        for (int e = 0; e < m; ++e)
            if (mask >> e & 1) {
                auto [u, v] = g.edge(e);
                ++deg[u];
                ++deg[v];
            }
        for (int v = 0; v < n; ++v)
            if (deg[v] % 2 == params.sigma[v]) w *= Weight::from_value(params.eta[v]);
        ws[mask] = w;
    }
    return ExactDistribution(m, ws);
}

PartitionIdentityReport verify_partition_identity(const Graph& g, const IsingParams& ising) {
    ising.validate(g);
    RCParams rc{beta_to_p(ising.beta), ising.lambda};
    std::vector<double> half_p = rc.p;
    for (double& x : half_p) x *= 0.5;
    GSWParams sw{half_p, lambda_to_eta(ising.lambda), std::vector<int>(g.num_vertices(), 1)};

    double log_prod_beta = 0.0;
    for (double b : ising.beta) log_prod_beta += std::log(b);
    double log_prod_field = 0.0;
    for (double l : ising.lambda) log_prod_field += std::log1p(l);

    PartitionIdentityReport rep;
    rep.log_z_ising = enumerate_ising(g, ising).log_z;
    rep.log_z_rc_scaled = log_prod_beta + enumerate_rc(g, rc).log_z;
    rep.log_z_sw_scaled = log_prod_beta + log_prod_field + enumerate_gsw(g, sw).log_z;
    rep.rel_err_rc = std::abs(std::expm1(rep.log_z_rc_scaled - rep.log_z_ising));
    rep.rel_err_sw = std::abs(std::expm1(rep.log_z_sw_scaled - rep.log_z_ising));
    return rep;
}

ExactDistribution es_pushforward(const ExactDistribution& rc_dist, const Graph& g,
                                 const std::vector<double>& lambda) {
    const int n = g.num_vertices();
    const int m = g.num_edges();
    check_cap(n, "pushforward");
    if (rc_dist.ground_size != m) throw InvalidInput("rc distribution not enumerated on g");
    if (static_cast<int>(lambda.size()) != n) throw InvalidInput("lambda size mismatch");

    std::vector<double> out(std::size_t{1} << n, 0.0);
    std::vector<int> root_of(n), comp_roots;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
        double px = rc_dist.prob[x];
        if (px == 0.0) continue;
        DisjointSets uf(n);
        for (int e = 0; e < m; ++e)
            if (x >> e & 1) {
                auto [u, v] = g.edge(e);
                uf.unite(u, v);
            }
        comp_roots.clear();
        for (int v = 0; v < n; ++v) {
            root_of[v] = uf.find(v);
            if (root_of[v] == v) comp_roots.push_back(v);
        }
        const int k = static_cast<int>(comp_roots.size());
        // per-component inclusion probability lambda^C / (1 + lambda^C)
        std::vector<double> inc(k);
        std::vector<std::uint64_t> comp_mask(k, 0);
        for (int c = 0; c < k; ++c) {
            Weight prod = Weight::one();
            for (int v = 0; v < n; ++v)
                if (root_of[v] == comp_roots[c]) {
                    prod *= Weight::from_value(lambda[v]);
                    comp_mask[c] |= std::uint64_t{1} << v;
                }
            if (prod.is_zero) {
                inc[c] = 0.0;
            } else {
                double lp = prod.log_value;
                inc[c] = std::exp(lp - log1p_weight(prod));
            }
        }
        for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << k); ++pattern) {
            double pr = px;
            std::uint64_t spins = 0;
            for (int c = 0; c < k; ++c) {
                if (pattern >> c & 1) {
                    pr *= inc[c];
                    spins |= comp_mask[c];
                } else {
                    pr *= 1.0 - inc[c];
                }
            }
            if (pr != 0.0) out[spins] += pr;
        }
    }
    std::vector<Weight> ws(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) ws[i] = Weight::from_value(out[i]);
    ExactDistribution d(n, ws);
    d.log_z = 0.0;  // pushforward of a normalized table; Z is not meaningful here
    return d;
}

double tv_distance(const ExactDistribution& a, const ExactDistribution& b) {
    if (a.ground_size != b.ground_size) throw InvalidInput("TV distance: ground set mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.prob.size(); ++i) acc += std::abs(a.prob[i] - b.prob[i]);
    return 0.5 * acc;
}

double tv_distance_empirical(const std::vector<std::int64_t>& counts,
                             const ExactDistribution& dist) {
    if (counts.size() != dist.prob.size()) throw InvalidInput("empirical TV: size mismatch");
    std::int64_t total = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
    if (total <= 0) throw InvalidInput("empirical TV: no samples");
    double acc = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i)
        acc += std::abs(static_cast<double>(counts[i]) / total - dist.prob[i]);
    return 0.5 * acc;
}

double InfluenceMatrix::inf_norm() const {
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += std::abs(at(i, j));
        best = std::max(best, row);
    }
    return best;
}

InfluenceMatrix influence_matrix(const ExactDistribution& dist) {
    const int n = dist.ground_size;
    InfluenceMatrix out;
    out.n = n;
    out.psi.assign(static_cast<std::size_t>(n) * n, 0.0);
    out.marginal.assign(n, 0.0);

    // joint[i][j] = Pr[i in S and j in S]
    std::vector<double> joint(static_cast<std::size_t>(n) * n, 0.0);
    for (std::uint64_t mask = 0; mask < dist.prob.size(); ++mask) {
        double p = dist.prob[mask];
        if (p == 0.0) continue;
        for (int i = 0; i < n; ++i) {
            if (!(mask >> i & 1)) continue;
            out.marginal[i] += p;
            for (int j = 0; j < n; ++j)
                if (mask >> j & 1) joint[static_cast<std::size_t>(i) * n + j] += p;
        }
    }
    // row i conditions on element i: Psi(i,j) = mu(j|i) - mu(j|i-bar)
    for (int i = 0; i < n; ++i) {
        double mi = out.marginal[i];
        if (mi <= 0.0 || mi >= 1.0) continue;  // degenerate marginal: entries stay 0
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double both = joint[static_cast<std::size_t>(i) * n + j];
            double cond_in = both / mi;
            double cond_out = (out.marginal[j] - both) / (1.0 - mi);
            out.psi[static_cast<std::size_t>(i) * n + j] = cond_in - cond_out;
        }
    }
    return out;
}

RCParams pin(const RCParams& params, const EdgeConfig& tau, const std::vector<int>& pinned) {
    RCParams out = params;
    for (int e : pinned) {
        if (e < 0 || e >= static_cast<int>(params.p.size()))
            throw InvalidInput("pinned edge id out of range");
        out.p[e] = tau.contains(e) ? 1.0 : 0.0;
    }
    return out;
}

std::uint64_t exact_sample(const ExactDistribution& dist, Rng& rng) {
    double r = uniform01(rng);
    const auto& cdf = dist.cdf();
    auto it = std::lower_bound(cdf.begin(), cdf.end(), r);
    if (it == cdf.end()) --it;
    return static_cast<std::uint64_t>(it - cdf.begin());
}

}  // namespace fds
