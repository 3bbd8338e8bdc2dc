#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fdsampler/coupling.hpp"
#include "fdsampler/exact.hpp"
#include "fdsampler/field_sampler.hpp"
#include "fdsampler/glauber.hpp"
#include "fdsampler/graph.hpp"
#include "fdsampler/weights.hpp"

using namespace fds;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

int worker_cap() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FDSAMPLER_WORKERS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return static_cast<int>(hw);
}

std::string config_line(const std::vector<int>& ids) {
    std::ostringstream os;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) os << ' ';
        os << ids[i];
    }
    return os.str();
}

struct SampleOptions {
    std::string instance;
    std::string model = "rc";
    std::string mode = "practical";
    double eps = 0.1;
    std::uint64_t seed = 0;
    int replicas = 1;
    std::string out;
    double theta = -1.0;
    long long tfd = -1, tgd = -1;
};

Schedule build_schedule(const SampleOptions& opt, const Graph& g, const RCParams& rc) {
    if (opt.mode == "paper") {
        if (opt.theta >= 0.0 || opt.tfd >= 0 || opt.tgd >= 0)
            throw InvalidInput("schedule overrides are only available in practical mode");
        return schedule_paper(opt.eps, rc.p_min(), rc.lambda_max(), g.num_vertices(),
                              g.num_edges());
    }
    Schedule s = schedule_practical(opt.eps, g.num_edges());
    if (opt.theta >= 0.0) {
        if (!(opt.theta > 0.0 && opt.theta < 1.0))
            throw InvalidInput("--theta must be in (0,1)");
        s.theta = opt.theta;
        s.log_theta = std::log(opt.theta);
    }
    if (opt.tfd >= 0) {
        if (opt.tfd < 1) throw InvalidInput("--tfd must be >= 1");
        s.t_fd = opt.tfd;
        s.log_t_fd = std::log(static_cast<double>(opt.tfd));
    }
    if (opt.tgd >= 0) {
        if (opt.tgd < 1) throw InvalidInput("--tgd must be >= 1");
        s.t_gd = opt.tgd;
    }
    return s;
}

int cmd_sample(const SampleOptions& opt) {
    Instance inst = parse_instance_file(opt.instance);
    const Graph& g = inst.graph;

    // rc schedule parameters; for Ising derive p from beta and fold
    // above-one fields through the complementation the sampler applies
    RCParams sched_rc;
    IsingParams ising;
    if (opt.model == "ising") {
        ising = IsingParams{inst.edge_value, inst.lambda};
        ising.validate(g);
        std::vector<double> lam = inst.lambda;
        if (ising.lambda_above_one())
            for (double& l : lam) l = 1.0 / l;
        sched_rc = RCParams{beta_to_p(inst.edge_value), lam};
    } else {
        sched_rc = RCParams{inst.edge_value, inst.lambda};
        sched_rc.validate(g, true);
    }
    Schedule sched = build_schedule(opt, g, sched_rc);

    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> lines(opt.replicas);
    std::vector<SamplerReport> reports(opt.replicas);
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mutex;

    auto work = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= opt.replicas || failed.load()) break;
            try {
                Rng rng = make_stream(opt.seed, static_cast<std::uint64_t>(i));
                reports[i].seed = opt.seed;
                if (opt.model == "ising") {
                    VertexConfig c = sample_ising(g, ising, opt.eps, sched, rng, &reports[i]);
                    lines[i] = config_line(c.ids);
                } else {
                    EdgeConfig c = sample_rc(g, sched_rc, opt.eps, sched, rng, &reports[i]);
                    lines[i] = config_line(c.ids);
                }
            } catch (const std::exception& ex) {
                std::lock_guard<std::mutex> lock(error_mutex);
                error_message = ex.what();
                failed.store(true);
                break;
            }
        }
    };
    int workers = std::min(worker_cap(), opt.replicas);
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (failed.load()) throw InvalidInput(error_message);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool brute = false;
    double enum_s = 0.0, dyn_s = 0.0;
    for (const SamplerReport& r : reports) {
        brute = brute || r.brute_force;
        enum_s += r.wall_enumeration;
        dyn_s += r.wall_dynamics;
    }

    std::ostringstream body;
    for (const std::string& line : lines) body << line << '\n';
    body << "# model " << opt.model << '\n';
    body << "# eps " << opt.eps << " seed " << opt.seed << " replicas " << opt.replicas << '\n';
    body << "# mode " << opt.mode << " theta " << sched.theta << " t_fd " << sched.t_fd
         << " t_gd " << sched.t_gd << '\n';
    body << "# brute_force " << (brute ? 1 : 0) << '\n';
    // timings go to stderr so the sample file stays byte-identical
    // across runs with the same build, seed and configuration
    std::cerr << "# wall_enum_s " << enum_s << " wall_dynamics_s " << dyn_s
              << " wall_total_s " << wall << '\n';

    if (opt.out.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream f(opt.out);
        if (!f) throw InvalidInput("cannot open output file: " + opt.out);
        f << body.str();
    }
    return kExitOk;
}

int cmd_exact(const std::string& instance, const std::string& model, bool table) {
    Instance inst = parse_instance_file(instance);
    ExactDistribution d;
    if (model == "ising") {
        d = enumerate_ising(inst.graph, IsingParams{inst.edge_value, inst.lambda});
    } else {
        d = enumerate_rc(inst.graph, RCParams{inst.edge_value, inst.lambda});
    }
    std::cout << "log_Z " << d.log_z << '\n';
    std::cout << "Z " << std::exp(d.log_z) << '\n';
    if (table) {
        for (std::uint64_t mask = 0; mask < d.prob.size(); ++mask) {
            std::vector<int> ids;
            for (int i = 0; i < d.ground_size; ++i)
                if (mask >> i & 1) ids.push_back(i);
            std::cout << d.prob[mask] << " : " << config_line(ids) << '\n';
        }
    }
    return kExitOk;
}

bool suite_partition(Rng& rng) {
    for (int t = 0; t < 20; ++t) {
        int n = 2 + static_cast<int>(rng() % 5);
        int m = 1 + static_cast<int>(rng() % 7);
        Graph g(n, [&] {
            std::vector<std::pair<int, int>> e;
            for (int i = 0; i < m; ++i) {
                int u = static_cast<int>(rng() % n), v = static_cast<int>(rng() % n);
                if (u == v) v = (v + 1) % n;
                e.emplace_back(u, v);
            }
            return e;
        }());
        std::vector<double> beta(m), lam(n);
        for (double& b : beta) b = 1.0001 + 4.0 * uniform01(rng);
        for (double& l : lam) l = uniform01(rng);
        if (!verify_partition_identity(g, IsingParams{beta, lam}).pass()) return false;
    }
    return true;
}

bool suite_es(Rng& rng) {
    for (int t = 0; t < 10; ++t) {
        int n = 2 + static_cast<int>(rng() % 4);
        int m = 1 + static_cast<int>(rng() % 6);
        std::vector<std::pair<int, int>> e;
        for (int i = 0; i < m; ++i) {
            int u = static_cast<int>(rng() % n), v = static_cast<int>(rng() % n);
            if (u == v) v = (v + 1) % n;
            e.emplace_back(u, v);
        }
        Graph g(n, e);
        std::vector<double> beta(m), lam(n);
        for (double& b : beta) b = 1.0001 + 4.0 * uniform01(rng);
        for (double& l : lam) l = uniform01(rng);
        RCParams rc{beta_to_p(beta), lam};
        ExactDistribution push = es_pushforward(enumerate_rc(g, rc), g, lam);
        if (tv_distance(push, enumerate_ising(g, IsingParams{beta, lam})) > 1e-10) return false;
    }
    return true;
}

bool suite_balance(Rng& rng) {
    for (int t = 0; t < 6; ++t) {
        int n = 3 + static_cast<int>(rng() % 3);
        int m = 2 + static_cast<int>(rng() % 4);
        std::vector<std::pair<int, int>> e;
        for (int i = 0; i < m; ++i) {
            int u = static_cast<int>(rng() % n), v = static_cast<int>(rng() % n);
            if (u == v) v = (v + 1) % n;
            e.emplace_back(u, v);
        }
        Graph g(n, e);
        std::vector<double> p(m), lam(n);
        for (double& q : p) q = 0.05 + 0.9 * uniform01(rng);
        for (double& l : lam) l = 0.9 * uniform01(rng);
        RCParams rc{p, lam};
        ExactDistribution mu = enumerate_rc(g, rc);
        std::vector<int> all(m);
        for (int i = 0; i < m; ++i) all[i] = i;
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
            GlauberState st(g, rc, all, EdgeConfig::from_mask(x, m));
            for (int i = 0; i < m; ++i) {
                double q = st.transition_probability(i);
                double with_e = mu.prob[x | (std::uint64_t{1} << i)];
                double without_e = mu.prob[x & ~(std::uint64_t{1} << i)];
                if (std::abs(q - with_e / (with_e + without_e)) > 1e-10) return false;
                if (!(x >> i & 1)) {
                    double lhs = mu.prob[x] * q;
                    double rhs = mu.prob[x | (std::uint64_t{1} << i)] * (1.0 - q);
                    if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, std::abs(rhs))) return false;
                }
            }
        }
    }
    return true;
}

bool suite_influence(Rng& rng) {
    for (int t = 0; t < 10; ++t) {
        int n = 3 + static_cast<int>(rng() % 4);
        int m = 2 + static_cast<int>(rng() % 7);
        std::vector<std::pair<int, int>> e;
        for (int i = 0; i < m; ++i) {
            int u = static_cast<int>(rng() % n), v = static_cast<int>(rng() % n);
            if (u == v) v = (v + 1) % n;
            e.emplace_back(u, v);
        }
        Graph g(n, e);
        std::vector<double> p(m), lam(n);
        for (double& q : p) q = 0.05 + 0.9 * uniform01(rng);
        for (double& l : lam) l = 0.8 * uniform01(rng);
        RCParams rc{p, lam};
        double bound = 2.0 / ((1.0 - rc.lambda_max()) * (1.0 - rc.lambda_max()));
        if (influence_matrix(enumerate_rc(g, rc)).inf_norm() > bound + 1e-9) return false;
    }
    return true;
}

bool suite_convolution(Rng& rng) {
    for (int t = 0; t < 10; ++t) {
        int n = 3 + static_cast<int>(rng() % 4);
        int m = 2 + static_cast<int>(rng() % 7);
        std::vector<std::pair<int, int>> e;
        for (int i = 0; i < m; ++i) {
            int u = static_cast<int>(rng() % n), v = static_cast<int>(rng() % n);
            if (u == v) v = (v + 1) % n;
            e.emplace_back(u, v);
        }
        Graph g(n, e);
        std::vector<double> p(m), lam(n);
        for (double& q : p) q = 0.05 + 0.9 * uniform01(rng);
        for (double& l : lam) l = 0.9 * uniform01(rng);
        if (!verify_sw_rc_convolution(g, RCParams{p, lam}).pass()) return false;
    }
    return true;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
    struct Entry {
        const char* name;
        bool (*fn)(Rng&);
    };
    const Entry entries[] = {
        {"partition", suite_partition}, {"es", suite_es},
        {"balance", suite_balance},     {"influence", suite_influence},
        {"convolution", suite_convolution},
    };
    bool any_fail = false, matched = false;
    for (const Entry& e : entries) {
        if (!suite.empty() && suite != e.name) continue;
        matched = true;
        Rng rng = make_stream(seed, std::hash<std::string>{}(e.name));
        bool ok = e.fn(rng);
        std::cout << (ok ? "PASS " : "FAIL ") << e.name << '\n';
        any_fail = any_fail || !ok;
    }
    if (!matched) throw InvalidInput("unknown suite: " + suite);
    return any_fail ? kExitFail : kExitOk;
}

int cmd_couple(const std::string& instance, int vertex, int edge, long long runs,
               std::uint64_t seed) {
    Instance inst = parse_instance_file(instance);
    const Graph& g = inst.graph;
    RCParams rc{inst.edge_value, inst.lambda};
    rc.validate(g);
    std::vector<double> eta = lambda_to_eta(rc.lambda);
    double eta_min = *std::min_element(eta.begin(), eta.end());
    if (eta_min <= 0.0) throw InvalidInput("couple requires lambda < 1 everywhere");
    Rng rng = make_stream(seed);

    double bound = 0.0;
    CouplingEstimate est;
    if (vertex >= 0) {
        std::vector<double> half = rc.p;
        for (double& p : half) p *= 0.5;
        GSWParams gsw{half, eta, std::vector<int>(g.num_vertices(), 1)};
        est = estimate_coupling_independence(
            [&](Rng& r) { return couple_gsw(CoupleContext::make(g, gsw, vertex), r); }, runs,
            rng);
        bound = 1.0 / (4.0 * eta_min * eta_min);
    } else if (edge >= 0) {
        est = estimate_coupling_independence(
            [&](Rng& r) { return lift_coupling_rc(g, rc, edge, r); }, runs, rng);
        bound = std::max(1.0, 1.0 / (2.0 * eta_min * eta_min));
    } else {
        throw InvalidInput("couple needs --vertex or --edge");
    }
    bool ok = est.mean <= bound + 3.0 * est.std_error;
    std::cout << "mean " << est.mean << '\n'
              << "stderr " << est.std_error << '\n'
              << "bound " << bound << '\n'
              << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? kExitOk : kExitFail;
}

int cmd_bench(const std::vector<int>& sizes, long long ops, std::uint64_t seed) {
    std::cout << "n,m,dynconn_ns_per_op,glauber_ns_per_step\n";
    for (int n : sizes) {
        Rng rng = make_stream(seed, static_cast<std::uint64_t>(n));
        int m = 2 * n;
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < m; ++i) {
            int u = static_cast<int>(rng() % n), v = static_cast<int>(rng() % n);
            if (u == v) v = (v + 1) % n;
            edges.emplace_back(u, v);
        }
        Graph g(n, edges);
        std::vector<double> lam(n, 0.5);

        DynConn dc(g, lam);
        std::vector<char> in(m, 0);
        auto op = [&] {
            int e = static_cast<int>(rng() % m);
            if (in[e]) {
                dc.delete_edge(e);
                in[e] = 0;
            } else {
                dc.insert_edge(e);
                in[e] = 1;
            }
            auto [u, v] = g.edge(e);
            (void)dc.connected(u, v);
            (void)dc.comp_lambda_product(u);
        };
        for (int t = 0; t < 1000; ++t) op();  // warm-up, excluded
        auto t0 = std::chrono::steady_clock::now();
        for (long long t = 0; t < ops; ++t) op();
        double dyn_ns =
            std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - t0)
                .count() /
            static_cast<double>(ops);

        RCParams rc{std::vector<double>(m, 0.9), lam};
        std::vector<int> all(m);
        for (int i = 0; i < m; ++i) all[i] = i;
        GlauberState st(g, rc, all, EdgeConfig{all});
        long long steps = std::min<long long>(ops, 20000);
        for (int t = 0; t < 1000; ++t) st.step(rng);
        auto t1 = std::chrono::steady_clock::now();
        for (long long t = 0; t < steps; ++t) st.step(rng);
        double gl_ns =
            std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - t1)
                .count() /
            static_cast<double>(steps);

        std::cout << n << ',' << m << ',' << dyn_ns << ',' << gl_ns << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"approximate sampler for ferromagnetic Ising and random cluster models"};
    app.require_subcommand(1);

    SampleOptions sopt;
    CLI::App* sample = app.add_subcommand("sample", "draw approximate samples");
    sample->add_option("instance", sopt.instance, "instance file")->required();
    sample->add_option("--model", sopt.model, "ising or rc")
        ->check(CLI::IsMember({"ising", "rc"}));
    sample->add_option("--eps", sopt.eps, "accuracy target")->check(CLI::Range(1e-9, 0.999999));
    sample->add_option("--seed", sopt.seed, "master seed");
    sample->add_option("--mode", sopt.mode, "paper or practical")
        ->check(CLI::IsMember({"paper", "practical"}));
    sample->add_option("--theta", sopt.theta, "practical-mode refresh rate override");
    sample->add_option("--tfd", sopt.tfd, "practical-mode outer iteration override");
    sample->add_option("--tgd", sopt.tgd, "practical-mode inner step override");
    sample->add_option("--replicas", sopt.replicas, "independent samples")
        ->check(CLI::PositiveNumber);
    sample->add_option("--out", sopt.out, "output file (default stdout)");

    std::string exact_instance, exact_model = "rc";
    bool exact_table = false;
    CLI::App* exact = app.add_subcommand("exact", "exact enumeration oracle");
    exact->add_option("instance", exact_instance, "instance file")->required();
    exact->add_option("--model", exact_model, "ising or rc")
        ->check(CLI::IsMember({"ising", "rc"}));
    exact->add_flag("--table", exact_table, "dump the full probability table");

    std::string verify_suite;
    std::uint64_t verify_seed = 0;
    CLI::App* verify = app.add_subcommand("verify", "run the invariant suites");
    verify->add_option("--suite", verify_suite,
                       "partition, es, balance, influence or convolution (default: all)");
    verify->add_option("--seed", verify_seed, "corpus seed");

    std::string couple_instance;
    int couple_vertex = -1, couple_edge = -1;
    long long couple_runs = 10000;
    std::uint64_t couple_seed = 0;
    CLI::App* couple = app.add_subcommand("couple", "coupling discrepancy estimate");
    couple->add_option("instance", couple_instance, "RC instance file")->required();
    couple->add_option("--vertex", couple_vertex, "subgraph-world coupling at a vertex");
    couple->add_option("--edge", couple_edge, "lifted RC coupling at an edge");
    couple->add_option("--runs", couple_runs, "Monte Carlo runs")->check(CLI::PositiveNumber);
    couple->add_option("--seed", couple_seed, "seed");

    std::vector<int> bench_sizes = {1000, 10000, 100000};
    long long bench_ops = 100000;
    std::uint64_t bench_seed = 0;
    CLI::App* bench = app.add_subcommand("bench", "timing table (CSV)");
    bench->add_option("--sizes", bench_sizes, "vertex counts");
    bench->add_option("--ops", bench_ops, "measured operations per size");
    bench->add_option("--seed", bench_seed, "seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sample->parsed()) return cmd_sample(sopt);
        if (exact->parsed()) return cmd_exact(exact_instance, exact_model, exact_table);
        if (verify->parsed()) return cmd_verify(verify_suite, verify_seed);
        if (couple->parsed())
            return cmd_couple(couple_instance, couple_vertex, couple_edge, couple_runs,
                              couple_seed);
        if (bench->parsed()) return cmd_bench(bench_sizes, bench_ops, bench_seed);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
