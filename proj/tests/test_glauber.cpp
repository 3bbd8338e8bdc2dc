#include <doctest.h>

#include <cmath>
#include <vector>

#include "fdsampler/exact.hpp"
#include "fdsampler/glauber.hpp"
#include "test_util.hpp"

using namespace fds;
using namespace fds::test;

namespace {

std::vector<int> all_edges(const Graph& g) {
    std::vector<int> ids(g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e) ids[e] = e;
    return ids;
}

// q_e(X) for every (X, e), read off a fresh state per configuration
std::vector<std::vector<double>> all_transition_probs(const Graph& g, const RCParams& p) {
    const int m = g.num_edges();
    std::vector<std::vector<double>> q(std::size_t{1} << m, std::vector<double>(m));
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
        GlauberState st(g, p, all_edges(g), EdgeConfig::from_mask(x, m));
        for (int e = 0; e < m; ++e) q[x][e] = st.transition_probability(e);
    }
    return q;
}

}  // namespace

TEST_CASE("transition probability reference values") {
    Graph g = k2();
    RCParams p{{0.8}, {0.5, 0.5}};
    GlauberState st(g, p, all_edges(g), EdgeConfig{});
    CHECK(st.transition_probability(0) == doctest::Approx(0.8 * 1.25 / 1.45).epsilon(1e-12));

    // triangle with the other two edges present: endpoints already connected
    Graph t = triangle();
    RCParams tp{{0.3, 0.6, 0.9}, {0.5, 0.5, 0.5}};
    GlauberState st2(t, tp, all_edges(t), EdgeConfig{{1, 2}});
    CHECK(st2.transition_probability(0) == doctest::Approx(0.3));
    // and the formula is evaluated on X minus e, so e's own presence is irrelevant
    GlauberState st3(t, tp, all_edges(t), EdgeConfig{{0, 1, 2}});
    CHECK(st3.transition_probability(0) == doctest::Approx(0.3));

    // separate components with lambda = 0 on both sides: the cluster
    // factors drop out and the conditional is the bare p_e
    Graph h = k2();
    RCParams zp{{0.4}, {0.0, 0.0}};
    GlauberState st4(h, zp, all_edges(h), EdgeConfig{});
    CHECK(st4.transition_probability(0) == doctest::Approx(0.4));
}

TEST_CASE("transition probability equals the exact conditional, m <= 8") {
    Rng rng = make_stream(41);
    for (int rep = 0; rep < 12; ++rep) {
        int n = 3 + static_cast<int>(rng() % 4);
        int m = 2 + static_cast<int>(rng() % 7);
        Graph g = random_graph(rng, n, m);
        RCParams p = random_rc_params(rng, g);
        ExactDistribution mu = enumerate_rc(g, p);
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
            GlauberState st(g, p, all_edges(g), EdgeConfig::from_mask(x, m));
            for (int e = 0; e < m; ++e) {
                double with_e = mu.prob[x | (std::uint64_t{1} << e)];
                double without_e = mu.prob[x & ~(std::uint64_t{1} << e)];
                double want = with_e / (with_e + without_e);
                CHECK(st.transition_probability(e) == doctest::Approx(want).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("active-subset chain matches pinned conditioning") {
    Rng rng = make_stream(42);
    Graph g = random_graph(rng, 5, 6);
    RCParams p = random_rc_params(rng, g);
    std::vector<int> active = {0, 2, 3, 5};
    std::vector<int> pinned_out = {1, 4};
    ExactDistribution mu = enumerate_rc(g, pin(p, EdgeConfig{}, pinned_out));
    for (std::uint64_t sub = 0; sub < 16; ++sub) {
        std::vector<int> ids;
        for (int i = 0; i < 4; ++i)
            if (sub >> i & 1) ids.push_back(active[i]);
        GlauberState st(g, p, active, EdgeConfig{ids});
        std::uint64_t x = EdgeConfig{ids}.mask();
        for (int e : active) {
            double with_e = mu.prob[x | (std::uint64_t{1} << e)];
            double without_e = mu.prob[x & ~(std::uint64_t{1} << e)];
            CHECK(st.transition_probability(e) ==
                  doctest::Approx(with_e / (with_e + without_e)).epsilon(1e-10));
        }
    }
}

TEST_CASE("detailed balance on m <= 6 graphs") {
    Rng rng = make_stream(43);
    for (int rep = 0; rep < 8; ++rep) {
        int m = 2 + static_cast<int>(rng() % 5);
        Graph g = random_graph(rng, 3 + static_cast<int>(rng() % 3), m);
        RCParams p = random_rc_params(rng, g);
        ExactDistribution mu = enumerate_rc(g, p);
        auto q = all_transition_probs(g, p);
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x)
            for (int e = 0; e < m; ++e) {
                if (x >> e & 1) continue;
                std::uint64_t y = x | (std::uint64_t{1} << e);
                double lhs = mu.prob[x] * q[x][e];
                double rhs = mu.prob[y] * (1.0 - q[y][e]);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
            }
    }
}

TEST_CASE("exact chain matrix fixes the stationary vector") {
    Rng rng = make_stream(44);
    for (int rep = 0; rep < 6; ++rep) {
        int m = 2 + static_cast<int>(rng() % 4);
        Graph g = random_graph(rng, 3 + static_cast<int>(rng() % 3), m);
        RCParams p = random_rc_params(rng, g);
        ExactDistribution mu = enumerate_rc(g, p);
        auto q = all_transition_probs(g, p);
        const std::size_t states = std::size_t{1} << m;
        std::vector<double> out(states, 0.0);
        for (std::uint64_t x = 0; x < states; ++x)
            for (int e = 0; e < m; ++e) {
                std::uint64_t with_e = x | (std::uint64_t{1} << e);
                std::uint64_t without_e = x & ~(std::uint64_t{1} << e);
                out[with_e] += mu.prob[x] * q[x][e] / m;
                out[without_e] += mu.prob[x] * (1.0 - q[x][e]) / m;
            }
        for (std::uint64_t x = 0; x < states; ++x)
            CHECK(out[x] == doctest::Approx(mu.prob[x]).epsilon(1e-12));
    }
}

TEST_CASE("glauber_steps formula") {
    CHECK(glauber_steps(4, 0.5) == 23);
    CHECK(glauber_steps(0, 0.5) == 0);
    CHECK(glauber_steps(1, 2.0) == 0);  // log m + log(2/eps) = 0
    CHECK_THROWS_AS(glauber_steps(4, 0.0), InvalidInput);
}

TEST_CASE("resample with zero steps returns the active set") {
    Graph g = triangle();
    RCParams p{{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}};
    Rng rng = make_stream(45);
    EdgeConfig out = resample(g, p, {0, 2}, 0, rng);
    CHECK(out.ids == std::vector<int>{0, 2});
}

TEST_CASE("long-run empirical distribution on K2 with unit fields") {
    Graph g = k2();
    RCParams p{{0.5}, {1.0, 1.0}};
    Rng rng = make_stream(46);
    const int replicas = 50000;
    long long steps = glauber_steps(1, 0.01);
    int empties = 0;
    for (int r = 0; r < replicas; ++r) {
        EdgeConfig out = resample(g, p, {0}, steps, rng);
        empties += out.ids.empty() ? 1 : 0;
    }
    CHECK(std::abs(empties / static_cast<double>(replicas) - 2.0 / 3.0) < 0.01);
}

TEST_CASE("near-unit edge probabilities keep the inclusion probability high") {
    // with p_e >= 1 - K/log n and K <= 1/27, every state has q >= 1 - 3K
    Rng rng = make_stream(47);
    const double k = 1.0 / 30.0;
    for (int rep = 0; rep < 10; ++rep) {
        int n = 4 + static_cast<int>(rng() % 5);
        int m = 3 + static_cast<int>(rng() % 6);
        Graph g = random_graph(rng, n, m);
        double pe = 1.0 - k / std::log(static_cast<double>(n));
        RCParams p{std::vector<double>(m, pe), random_vector(rng, n, 0.0, 1.0)};
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
            GlauberState st(g, p, all_edges(g), EdgeConfig::from_mask(x, m));
            for (int e = 0; e < m; ++e)
                CHECK(st.transition_probability(e) >= 1.0 - 3.0 * k);
        }
    }
}

TEST_CASE("state validation") {
    Graph g = triangle();
    RCParams p{{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}};
    CHECK_THROWS_AS((GlauberState{g, p, {0, 1}, EdgeConfig{{2}}}), InvalidInput);
    CHECK_THROWS_AS((GlauberState{g, p, {0, 0}, EdgeConfig{}}), InvalidInput);
    CHECK_THROWS_AS((GlauberState{g, p, {0, 7}, EdgeConfig{}}), InvalidInput);
    GlauberState st(g, p, {0, 1}, EdgeConfig{{0}});
    CHECK_THROWS_AS(st.transition_probability(2), ContractViolation);
    CHECK(st.contains(0));
    CHECK_FALSE(st.contains(1));
}
