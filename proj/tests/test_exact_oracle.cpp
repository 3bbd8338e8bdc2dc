#include <doctest.h>

#include <cmath>

#include "fdsampler/exact.hpp"
#include "test_util.hpp"

using namespace fds;
using namespace fds::test;

TEST_CASE("enumerate_rc reference values") {
    Graph g = k2();
    ExactDistribution d0 = enumerate_rc(g, RCParams{{0.5}, {0.0, 0.0}});
    CHECK(d0.prob[0] == doctest::Approx(0.5));
    CHECK(d0.prob[1] == doctest::Approx(0.5));

    ExactDistribution d1 = enumerate_rc(g, RCParams{{0.5}, {1.0, 1.0}});
    CHECK(d1.prob[0] == doctest::Approx(2.0 / 3.0));
    CHECK(d1.prob[1] == doctest::Approx(1.0 / 3.0));
    CHECK(std::exp(d1.log_z) == doctest::Approx(3.0));
}

TEST_CASE("enumerate_gsw: p = 0 is a point mass on empty") {
    Graph g = triangle();
    GSWParams p{{0.0, 0.0, 0.0}, {0.5, 0.5, 0.5}, {0, 1, 0}};
    ExactDistribution d = enumerate_gsw(g, p);
    CHECK(d.prob[0] == doctest::Approx(1.0));
}

TEST_CASE("enumeration cap and degenerate system") {
    Graph big(26, [] {
        std::vector<std::pair<int, int>> e;
        for (int i = 0; i < 25; ++i) e.emplace_back(i, i + 1);
        return e;
    }());
    RCParams p{std::vector<double>(25, 0.5), std::vector<double>(26, 0.0)};
    CHECK_THROWS_AS(enumerate_rc(big, p), CapExceeded);

    // isolated vertex with eta=0 and sigma matching its parity: Z = 0
    Graph lone(1, {});
    GSWParams z{{}, {0.0}, {0}};
    CHECK_THROWS_AS(enumerate_gsw(lone, z), DegenerateSystem);
}

TEST_CASE("partition identity reference values") {
    Graph g = k2();
    PartitionIdentityReport rep =
        verify_partition_identity(g, IsingParams{{2.0}, {1.0, 1.0}});
    CHECK(std::exp(rep.log_z_ising) == doctest::Approx(6.0));
    CHECK(std::exp(rep.log_z_rc_scaled) == doctest::Approx(6.0));
    CHECK(rep.pass());

    // edgeless graph: Z^Ising = prod (1 + lambda_v)
    Graph empty(3, {});
    IsingParams ip{{}, {0.2, 0.5, 0.9}};
    PartitionIdentityReport rep2 = verify_partition_identity(empty, ip);
    CHECK(std::exp(rep2.log_z_ising) == doctest::Approx(1.2 * 1.5 * 1.9));
    CHECK(rep2.pass());
}

TEST_CASE("partition identity on random instances") {
    Rng rng = make_stream(21);
    for (int t = 0; t < 50; ++t) {
        Graph g = random_graph(rng, 3 + static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 8));
        IsingParams ip = random_ising_params(rng, g);
        CHECK(verify_partition_identity(g, ip).pass());
    }
}

TEST_CASE("es_pushforward reference values") {
    Graph g = k2();
    // lambda all zero: point mass on empty spin set
    ExactDistribution rc0 = enumerate_rc(g, RCParams{{0.5}, {0.0, 0.0}});
    ExactDistribution push0 = es_pushforward(rc0, g, {0.0, 0.0});
    CHECK(push0.prob[0] == doctest::Approx(1.0));

    // beta=2, lambda=1: Ising distribution (2/6, 1/6, 1/6, 2/6)
    ExactDistribution rc1 = enumerate_rc(g, RCParams{{0.5}, {1.0, 1.0}});
    ExactDistribution push1 = es_pushforward(rc1, g, {1.0, 1.0});
    CHECK(push1.prob[0] == doctest::Approx(2.0 / 6.0));
    CHECK(push1.prob[1] == doctest::Approx(1.0 / 6.0));
    CHECK(push1.prob[2] == doctest::Approx(1.0 / 6.0));
    CHECK(push1.prob[3] == doctest::Approx(2.0 / 6.0));
}

TEST_CASE("es_pushforward equals direct Ising enumeration") {
    Rng rng = make_stream(22);
    for (int t = 0; t < 25; ++t) {
        Graph g = random_graph(rng, 3 + static_cast<int>(rng() % 4), 1 + static_cast<int>(rng() % 7));
        IsingParams ip = random_ising_params(rng, g);
        RCParams rp{beta_to_p(ip.beta), ip.lambda};
        ExactDistribution push = es_pushforward(enumerate_rc(g, rp), g, ip.lambda);
        ExactDistribution direct = enumerate_ising(g, ip);
        CHECK(tv_distance(push, direct) < 1e-10);
    }
}

TEST_CASE("tv_distance") {
    ExactDistribution a(1, {Weight::from_value(0.7), Weight::from_value(0.3)});
    ExactDistribution b(1, {Weight::from_value(0.5), Weight::from_value(0.5)});
    CHECK(tv_distance(a, a) == doctest::Approx(0.0));
    CHECK(tv_distance(a, b) == doctest::Approx(0.2));

    ExactDistribution p0(1, {Weight::one(), Weight::zero()});
    ExactDistribution p1(1, {Weight::zero(), Weight::one()});
    CHECK(tv_distance(p0, p1) == doctest::Approx(1.0));
}

TEST_CASE("influence matrix of product measures vanishes") {
    // RC with all lambda = 0 is a product measure
    Graph g = triangle();
    ExactDistribution d = enumerate_rc(g, RCParams{{0.3, 0.6, 0.8}, {0.0, 0.0, 0.0}});
    InfluenceMatrix psi = influence_matrix(d);
    CHECK(psi.inf_norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("influence inf-norm bound on random RC instances") {
    Rng rng = make_stream(23);
    for (int t = 0; t < 30; ++t) {
        Graph g = random_graph(rng, 3 + static_cast<int>(rng() % 4), 2 + static_cast<int>(rng() % 9));
        RCParams p = random_rc_params(rng, g, 0.8);
        double bound = 2.0 / ((1.0 - p.lambda_max()) * (1.0 - p.lambda_max()));
        InfluenceMatrix psi = influence_matrix(enumerate_rc(g, p));
        CHECK(psi.inf_norm() <= bound + 1e-9);
        for (int i = 0; i < psi.n; ++i) CHECK(psi.at(i, i) == 0.0);
    }
}

TEST_CASE("pin reference values") {
    Graph g = triangle();
    RCParams p{{0.4, 0.5, 0.6}, {0.3, 0.3, 0.3}};

    // empty pinning leaves params unchanged
    RCParams same = pin(p, EdgeConfig{}, {});
    CHECK(same.p == p.p);

    // pin all edges in: point mass on E
    RCParams all_in = pin(p, EdgeConfig{{0, 1, 2}}, {0, 1, 2});
    ExactDistribution d = enumerate_rc(g, all_in);
    CHECK(d.prob[7] == doctest::Approx(1.0));
}

TEST_CASE("pin equals exact conditioning, exhaustive on m = 8") {
    Rng rng = make_stream(24);
    Graph g = random_graph(rng, 5, 8);
    RCParams p = random_rc_params(rng, g);
    ExactDistribution full = enumerate_rc(g, p);
    const int m = 8;
    for (std::uint64_t pinned_mask = 0; pinned_mask < (1u << m); ++pinned_mask) {
        std::vector<int> pinned;
        for (int e = 0; e < m; ++e)
            if (pinned_mask >> e & 1) pinned.push_back(e);
        for (std::uint64_t tau = pinned_mask;; tau = (tau - 1) & pinned_mask) {
            // conditional of the full table on agreement with tau over pinned
            double z = 0.0;
            for (std::uint64_t s = 0; s < (1u << m); ++s)
                if ((s & pinned_mask) == tau) z += full.prob[s];
            if (z > 1e-14) {
                ExactDistribution cond =
                    enumerate_rc(g, pin(p, EdgeConfig::from_mask(tau, m), pinned));
                double max_err = 0.0;
                for (std::uint64_t s = 0; s < (1u << m); ++s) {
                    double want = (s & pinned_mask) == tau ? full.prob[s] / z : 0.0;
                    max_err = std::max(max_err, std::abs(cond.prob[s] - want));
                }
                CHECK(max_err < 1e-10);
            }
            if (tau == 0) break;
        }
    }
}

TEST_CASE("exact_sample") {
    Rng rng = make_stream(25);

    ExactDistribution point(2, {Weight::zero(), Weight::zero(), Weight::one(), Weight::zero()});
    for (int t = 0; t < 100; ++t) CHECK(exact_sample(point, rng) == 2);

    ExactDistribution uniform(1, {Weight::one(), Weight::one()});
    int ones = 0;
    const int n = 100000;
    for (int t = 0; t < n; ++t) ones += static_cast<int>(exact_sample(uniform, rng));
    CHECK(std::abs(ones / static_cast<double>(n) - 0.5) < 0.01);

    Graph g = k2();
    ExactDistribution d = enumerate_rc(g, RCParams{{0.5}, {1.0, 1.0}});
    int empties = 0;
    for (int t = 0; t < n; ++t) empties += exact_sample(d, rng) == 0 ? 1 : 0;
    CHECK(std::abs(empties / static_cast<double>(n) - 2.0 / 3.0) < 0.01);
}
