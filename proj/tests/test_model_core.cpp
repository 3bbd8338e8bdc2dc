#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fdsampler/union_find.hpp"
#include "fdsampler/weights.hpp"
#include "test_util.hpp"

using namespace fds;
using namespace fds::test;

namespace {

// extended-precision direct products, independent of the log-space path
long double naive_ising(const Graph& g, const IsingParams& p, std::uint64_t mask) {
    long double w = 1.0L;
    for (int e = 0; e < g.num_edges(); ++e) {
        auto [u, v] = g.edge(e);
        if (((mask >> u) & 1) == ((mask >> v) & 1)) w *= p.beta[e];
    }
    for (int v = 0; v < g.num_vertices(); ++v)
        if (mask >> v & 1) w *= p.lambda[v];
    return w;
}

long double naive_rc(const Graph& g, const RCParams& p, std::uint64_t mask) {
    long double w = 1.0L;
    for (int e = 0; e < g.num_edges(); ++e) w *= mask >> e & 1 ? p.p[e] : 1.0L - p.p[e];
    DisjointSets uf(g.num_vertices());
    for (int e = 0; e < g.num_edges(); ++e)
        if (mask >> e & 1) {
            auto [u, v] = g.edge(e);
            uf.unite(u, v);
        }
    for (int r = 0; r < g.num_vertices(); ++r) {
        if (uf.find(r) != r) continue;
        long double prod = 1.0L;
        for (int v = 0; v < g.num_vertices(); ++v)
            if (uf.find(v) == r) prod *= p.lambda[v];
        w *= 1.0L + prod;
    }
    return w;
}

long double naive_gsw(const Graph& g, const GSWParams& p, std::uint64_t mask) {
    long double w = 1.0L;
    for (int e = 0; e < g.num_edges(); ++e) w *= mask >> e & 1 ? p.p[e] : 1.0L - p.p[e];
    std::vector<int> deg(g.num_vertices(), 0);
    for (int e = 0; e < g.num_edges(); ++e)
        if (mask >> e & 1) {
            auto [u, v] = g.edge(e);
            ++deg[u];
            ++deg[v];
        }
    for (int v = 0; v < g.num_vertices(); ++v)
        if (deg[v] % 2 == p.sigma[v]) w *= p.eta[v];
    return w;
}

}  // namespace

TEST_CASE("graph construction rejects bad input") {
    CHECK_THROWS_AS(Graph(2, {{0, 0}}), InvalidInput);   // self-loop
    CHECK_THROWS_AS(Graph(2, {{0, 2}}), InvalidInput);   // endpoint out of range
    CHECK_NOTHROW(Graph(2, {{0, 1}, {0, 1}}));           // parallel edges allowed
    Graph g = path3();
    CHECK(g.incident(1).size() == 2);
}

TEST_CASE("ising_weight reference values") {
    Graph g = k2();
    IsingParams p{{2.0}, {1.0, 1.0}};
    CHECK(ising_weight(g, p, VertexConfig{}).value() == doctest::Approx(2.0));
    CHECK(ising_weight(g, p, VertexConfig{{0}}).value() == doctest::Approx(1.0));

    // S = empty: all edges monochromatic, weight = prod beta
    Rng rng = make_stream(11);
    Graph h = random_graph(rng, 5, 7);
    IsingParams q = random_ising_params(rng, h);
    double prod = 1.0;
    for (double b : q.beta) prod *= b;
    CHECK(ising_weight(h, q, VertexConfig{}).value() == doctest::Approx(prod));
}

TEST_CASE("rc_weight reference values") {
    Graph g = path3();
    RCParams p{{0.5, 0.5}, {0.5, 0.5, 0.5}};
    CHECK(rc_weight(g, p, EdgeConfig{{0}}).value() == doctest::Approx(0.46875));

    Graph h = k2();
    RCParams unit{{0.5}, {1.0, 1.0}};
    CHECK(rc_weight(h, unit, EdgeConfig{}).value() == doctest::Approx(2.0));
    CHECK(rc_weight(h, unit, EdgeConfig{{0}}).value() == doctest::Approx(1.0));
}

TEST_CASE("rc_weight with zero fields is the Bernoulli product, exhaustive m<=10") {
    Rng rng = make_stream(12);
    Graph g = random_graph(rng, 6, 10);
    RCParams p{random_vector(rng, 10, 0.05, 0.95), std::vector<double>(6, 0.0)};
    for (std::uint64_t mask = 0; mask < (1u << 10); ++mask) {
        long double bern = 1.0L;
        for (int e = 0; e < 10; ++e) bern *= mask >> e & 1 ? p.p[e] : 1.0L - p.p[e];
        double got = rc_weight(g, p, EdgeConfig::from_mask(mask, 10)).value();
        CHECK(got == doctest::Approx(static_cast<double>(bern)).epsilon(1e-12));
    }
}

TEST_CASE("gsw_weight reference values") {
    Graph g = k2();
    GSWParams p{{0.25}, {0.5, 0.5}, {1, 1}};
    CHECK(gsw_weight(g, p, EdgeConfig{}).value() == doctest::Approx(0.75));
    CHECK(gsw_weight(g, p, EdgeConfig{{0}}).value() == doctest::Approx(0.0625));

    // eta = 1 everywhere: pure Bernoulli regardless of sigma
    Rng rng = make_stream(13);
    Graph h = random_graph(rng, 4, 5);
    GSWParams q{random_vector(rng, 5, 0.0, 0.5), std::vector<double>(4, 1.0), {1, 0, 1, 0}};
    for (std::uint64_t mask = 0; mask < (1u << 5); ++mask) {
        long double bern = 1.0L;
        for (int e = 0; e < 5; ++e) bern *= mask >> e & 1 ? q.p[e] : 1.0L - q.p[e];
        CHECK(gsw_weight(h, q, EdgeConfig::from_mask(mask, 5)).value() ==
              doctest::Approx(static_cast<double>(bern)));
    }
}

TEST_CASE("log-space weights round-trip against extended precision") {
    Rng rng = make_stream(14);
    for (int rep = 0; rep < 20; ++rep) {
        Graph g = random_graph(rng, 7, 12);
        IsingParams ip = random_ising_params(rng, g);
        RCParams rp = random_rc_params(rng, g);
        GSWParams gp{random_vector(rng, 12, 0.0, 0.5), random_vector(rng, 7, 0.0, 1.0),
                     {1, 1, 1, 0, 0, 1, 0}};
        std::uniform_int_distribution<std::uint64_t> mask_dist(0, (1u << 12) - 1);
        for (int t = 0; t < 25; ++t) {
            std::uint64_t em = mask_dist(rng);
            std::uint64_t vm = mask_dist(rng) & 0x7f;
            double w_ising = ising_weight(g, ip, VertexConfig::from_mask(vm, 7)).value();
            double w_rc = rc_weight(g, rp, EdgeConfig::from_mask(em, 12)).value();
            double w_gsw = gsw_weight(g, gp, EdgeConfig::from_mask(em, 12)).value();
            CHECK(w_ising ==
                  doctest::Approx(static_cast<double>(naive_ising(g, ip, vm))).epsilon(1e-12));
            CHECK(w_rc ==
                  doctest::Approx(static_cast<double>(naive_rc(g, rp, em))).epsilon(1e-12));
            CHECK(w_gsw ==
                  doctest::Approx(static_cast<double>(naive_gsw(g, gp, em))).epsilon(1e-12));
        }
    }
}

TEST_CASE("beta_to_p") {
    CHECK(beta_to_p({2.0})[0] == doctest::Approx(0.5));
    CHECK(beta_to_p({1e6})[0] == doctest::Approx(0.999999));
    // near-1 beta computed without cancellation
    double b = 1.0 + 1e-9;
    CHECK(beta_to_p({b})[0] == doctest::Approx(1e-9).epsilon(1e-6));
    CHECK_THROWS_AS(beta_to_p({1.0}), DomainError);
    CHECK_THROWS_AS(beta_to_p({0.5}), DomainError);
}

TEST_CASE("lambda_to_eta") {
    CHECK(lambda_to_eta({0.0})[0] == doctest::Approx(1.0));
    CHECK(lambda_to_eta({1.0 / 3.0})[0] == doctest::Approx(0.5));
    CHECK(lambda_to_eta({1.0})[0] == doctest::Approx(0.0));
    CHECK_THROWS_AS(lambda_to_eta({-0.1}), DomainError);
    CHECK_THROWS_AS(lambda_to_eta({1.1}), DomainError);
}

TEST_CASE("p_star") {
    CHECK(p_star({0.9}, 0.5)[0] == doctest::Approx(0.9 / 0.95));
    CHECK(p_star({0.5}, 0.25)[0] == doctest::Approx(0.8));
    // theta -> 1 approaches identity
    CHECK(p_star({0.3}, 1.0 - 1e-12)[0] == doctest::Approx(0.3));
    CHECK_THROWS_AS(p_star({0.5}, 0.0), DomainError);
    CHECK_THROWS_AS(p_star({0.5}, 1.0), DomainError);
}

TEST_CASE("p_to_q") {
    CHECK(p_to_q({1.0})[0] == doctest::Approx(1.0));
    CHECK(p_to_q({0.5})[0] == doctest::Approx(1.0 / 3.0));
    CHECK(p_to_q({0.0})[0] == doctest::Approx(0.0));
}

TEST_CASE("transform monotonicity sweeps") {
    Rng rng = make_stream(15);
    std::uniform_real_distribution<double> pd(0.01, 0.99), td(0.01, 0.99);
    for (int t = 0; t < 1000; ++t) {
        double p = pd(rng), theta = td(rng);
        CHECK(p_star({p}, theta)[0] >= p);
    }
    double prev = 0.0;
    for (double b = 1.01; b < 50.0; b += 0.37) {
        double p = beta_to_p({b})[0];
        CHECK(p > prev);
        prev = p;
    }
    prev = 2.0;
    for (double l = 0.0; l <= 1.0; l += 0.01) {
        double eta = lambda_to_eta({l})[0];
        CHECK(eta < prev);
        prev = eta;
    }
}

TEST_CASE("param validation") {
    Graph g = k2();
    CHECK_THROWS_AS((IsingParams{{2.0}, {0.5}}.validate(g)), InvalidInput);  // lambda too short
    CHECK_THROWS_AS((IsingParams{{2.0}, {0.5, 2.0}}.validate(g)), InvalidInput);  // mixed regime
    CHECK_NOTHROW((IsingParams{{2.0}, {2.0, 3.0}}.validate(g)));
    CHECK_THROWS_AS((RCParams{{0.5}, {1.0, 0.5}}.validate(g)), InvalidInput);
    CHECK_NOTHROW((RCParams{{0.5}, {1.0, 0.5}}.validate(g, true)));
    CHECK_THROWS_AS((GSWParams{{0.75}, {0.5, 0.5}, {1, 1}}.validate(g)), InvalidInput);
}

TEST_CASE("instance parsing") {
    std::istringstream in(
        "# tiny instance\n"
        "3 2\n"
        "0 1 0.5\n"
        "1 2 0.25  # second edge\n"
        "0.1\n0.2\n0.3\n");
    Instance inst = parse_instance(in);
    CHECK(inst.graph.num_vertices() == 3);
    CHECK(inst.graph.num_edges() == 2);
    CHECK(inst.edge_value[1] == doctest::Approx(0.25));
    CHECK(inst.lambda[2] == doctest::Approx(0.3));

    std::istringstream bad("2 1\n0 1 oops\n0.5\n0.5\n");
    CHECK_THROWS_AS(parse_instance(bad), InvalidInput);
}
