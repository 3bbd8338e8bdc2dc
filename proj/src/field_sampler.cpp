#include "fdsampler/field_sampler.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "fdsampler/error.hpp"
#include "fdsampler/exact.hpp"
#include "fdsampler/glauber.hpp"
#include "fdsampler/union_find.hpp"
#include "fdsampler/weight.hpp"

namespace fds {

namespace {

constexpr int kPracticalCutoff = 20;  // brute-force branch edge cap

long long saturated_exp_ceil(double log_value) {
    constexpr double kMaxLog = 43.0;  // log(LLONG_MAX) ~ 43.67
    if (log_value >= kMaxLog) return std::numeric_limits<long long>::max();
    return static_cast<long long>(std::ceil(std::exp(log_value)));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Schedule schedule_paper(double eps, double p_min, double lambda_max, int n, int m) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("schedule_paper: eps must be in (0,1)");
    if (!(p_min > 0.0 && p_min <= 1.0))
        throw DomainError("schedule_paper: p_min must be in (0,1]");
    if (!(lambda_max >= 0.0 && lambda_max < 1.0))
        throw DomainError("schedule_paper: lambda_max must be in [0,1)");
    if (n < 2) throw DomainError("schedule_paper: need n >= 2");
    if (m < 1) throw DomainError("schedule_paper: need m >= 1");

    const double gap = 1.0 - lambda_max;
    const double inv_gap2 = 1.0 / (gap * gap);
    const double log_n = std::log(static_cast<double>(n));

    Schedule s;
    s.mode = Schedule::Mode::paper;
    s.log_k = std::log(1e-14) + 2.0 * std::log(eps) - 28.0 * inv_gap2;
    s.log_theta = s.log_k + std::log(p_min) - std::log(log_n);
    s.k = std::exp(s.log_k);
    s.theta = std::exp(s.log_theta);

    const double poly = 2.0 * log_n + std::log(std::log(2.0 / p_min)) + std::log(2.0 / (eps * eps));
    s.log_t_fd = 5.0 * inv_gap2 * (1.0 - s.log_theta) + std::log(poly);
    s.t_fd = saturated_exp_ceil(s.log_t_fd);

    s.t_gd = inner_steps(m, eps, s.log_t_fd);

    s.log_n0 = std::max({12.0 * inv_gap2, std::log(3.0 / p_min),
                         0.5 * std::log(std::log(2.0 / (eps * eps)))});
    s.n0 = std::exp(s.log_n0);
    return s;
}

// T_GD = ceil(2m (log m + log(2 T_FD / eps))), taking log T_FD so that
// astronomically large outer counts still produce a finite inner count
long long inner_steps(int m, double eps, double log_t_fd) {
    if (m <= 0) return 0;
    if (!(eps > 0.0)) throw DomainError("inner_steps: eps must be positive");
    const double md = static_cast<double>(m);
    return static_cast<long long>(
        std::ceil(2.0 * md * (std::log(md) + std::log(2.0 / eps) + log_t_fd)));
}

Schedule schedule_practical(double eps, int m) {
    if (!(eps > 0.0 && eps < 1.0))
        throw DomainError("schedule_practical: eps must be in (0,1)");
    if (m < 0) throw DomainError("schedule_practical: m must be nonnegative");
    Schedule s;
    s.mode = Schedule::Mode::practical;
    s.theta = 0.5;
    double md = std::max(1.0, static_cast<double>(m));
    s.t_fd = std::max<long long>(1, static_cast<long long>(std::ceil(20.0 * std::log(md / eps))));
    s.t_gd = std::max<long long>(
        1, inner_steps(m, eps, std::log(static_cast<double>(s.t_fd))));
    s.log_theta = std::log(s.theta);
    s.log_t_fd = std::log(static_cast<double>(s.t_fd));
    s.log_n0 = 0.0;
    s.log_k = 0.0;
    return s;
}

EdgeConfig field_step(const EdgeConfig& x, const Graph& g, const RCParams& params,
                      const Schedule& sched, Rng& rng) {
    x.validate(g);
    if (!(sched.theta > 0.0 && sched.theta <= 1.0))
        throw DomainError("field_step: theta must be in (0,1]");
    std::vector<int> active;
    for (int e = 0; e < g.num_edges(); ++e) {
        if (uniform01(rng) < sched.theta || x.contains(e)) active.push_back(e);
    }
    std::vector<double> boosted =
        sched.theta < 1.0 ? p_star(params.p, sched.theta) : params.p;
    return resample(g, RCParams{std::move(boosted), params.lambda}, active, sched.t_gd, rng);
}

EdgeConfig sample_rc(const Graph& g, const RCParams& params, double eps,
                     const Schedule& sched, Rng& rng, SamplerReport* report) {
    params.validate(g, /*allow_unit_field=*/true);
    (void)eps;
    const int n = g.num_vertices();
    const int m = g.num_edges();
    const bool brute = sched.mode == Schedule::Mode::paper
                           ? static_cast<double>(n) <= sched.n0
                           : m <= kPracticalCutoff;
    if (!brute && params.lambda_max() >= 1.0)
        throw DomainError("sample_rc: field dynamics requires lambda_max < 1");
    auto t0 = std::chrono::steady_clock::now();
    if (brute) {
        if (m > kEnumerationCap)
            throw CapExceeded(
                "sample_rc: brute-force branch selected but the instance exceeds the "
                "enumeration cap; use practical mode on larger instances");
        ExactDistribution d = enumerate_rc(g, params);
        std::uint64_t mask = exact_sample(d, rng);
        if (report) {
            report->brute_force = true;
            report->wall_enumeration += seconds_since(t0);
            ++report->samples;
        }
        return EdgeConfig::from_mask(mask, m);
    }
    std::vector<int> all(m);
    for (int e = 0; e < m; ++e) all[e] = e;
    EdgeConfig x{all};
    for (long long t = 0; t < sched.t_fd; ++t) x = field_step(x, g, params, sched, rng);
    if (report) {
        report->brute_force = false;
        report->wall_dynamics += seconds_since(t0);
        ++report->samples;
    }
    return x;
}

VertexConfig sample_ising(const Graph& g, const IsingParams& params, double eps,
                          const Schedule& sched, Rng& rng, SamplerReport* report) {
    params.validate(g);
    if (params.lambda_above_one()) {
        IsingParams inverted = params;
        for (double& l : inverted.lambda) l = 1.0 / l;
        VertexConfig inner = sample_ising(g, inverted, eps, sched, rng, report);
        std::vector<int> complement;
        for (int v = 0; v < g.num_vertices(); ++v)
            if (!inner.contains(v)) complement.push_back(v);
        return VertexConfig{std::move(complement)};
    }

    RCParams rc{beta_to_p(params.beta), params.lambda};
    EdgeConfig x = sample_rc(g, rc, eps, sched, rng, report);

    // component rounding: C joins with probability lambda^C / (1 + lambda^C)
    DisjointSets uf(g.num_vertices());
    for (int e : x.ids) {
        auto [u, v] = g.edge(e);
        uf.unite(u, v);
    }
    std::vector<char> root_in(g.num_vertices(), 0);
    for (int r = 0; r < g.num_vertices(); ++r) {
        if (uf.find(r) != r) continue;
        Weight w = Weight::one();
        for (int v = 0; v < g.num_vertices(); ++v)
            if (uf.find(v) == r) w *= Weight::from_value(params.lambda[v]);
        double prob = w.is_zero ? 0.0 : std::exp(w.log_value - log1p_weight(w));
        root_in[r] = uniform01(rng) < prob ? 1 : 0;
    }
    std::vector<int> ids;
    for (int v = 0; v < g.num_vertices(); ++v)
        if (root_in[uf.find(v)]) ids.push_back(v);
    return VertexConfig{std::move(ids)};
}

}  // namespace fds
