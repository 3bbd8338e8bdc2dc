#pragma once

#include <cstdint>
#include <vector>

#include "fdsampler/graph.hpp"
#include "fdsampler/params.hpp"
#include "fdsampler/rng.hpp"

namespace fds {

/// Parameter schedule for the field dynamics.
///
/// Paper mode reproduces the analysis table verbatim; its constants
/// overflow/underflow doubles for realistic field strengths, so every
/// quantity is also carried in log-space and the plain fields saturate.
/// Paper mode validates formulas; practical mode powers end-to-end
/// runs with constants that work at desk scale.
struct Schedule {
    enum class Mode { paper, practical };
    Mode mode = Mode::practical;

    double theta = 0.5;   // per-edge refresh rate, in (0,1)
    long long t_fd = 1;   // outer field-dynamics iterations (saturated)
    long long t_gd = 1;   // inner Glauber steps per field step (saturated)
    double n0 = 0.0;      // brute-force vertex cutoff (paper mode)
    double k = 0.0;       // the constant K (paper mode)

    // log-space carriers, authoritative in paper mode
    double log_theta = 0.0;
    double log_t_fd = 0.0;
    double log_n0 = 0.0;
    double log_k = 0.0;
};

/// The analysis schedule:
///   K   = 1e-14 eps^2 exp(-28 (1-lambda_max)^-2)
///   theta = K p_min / log n
///   T_FD  = ceil((e/theta)^{5(1-lambda_max)^-2} (2 log n + log log(2/p_min) + log(2/eps^2)))
///   T_GD  = ceil(2m (log m + log(2 T_FD / eps)))
///   N0    = max{ exp(12 (1-lambda_max)^-2), 3/p_min, sqrt(log(2/eps^2)) }
Schedule schedule_paper(double eps, double p_min, double lambda_max, int n, int m);

/// ceil(2m (log m + log(2/eps) + log T_FD)) — the inner step count for
/// a given outer iteration count, shared by both schedule modes.
long long inner_steps(int m, double eps, double log_t_fd);

/// Desk-scale defaults: theta = 1/2, t_fd = ceil(20 log(m/eps)),
/// t_gd = ceil(2m (log m + log(2 t_fd / eps))).
Schedule schedule_practical(double eps, int m);

/// One field-dynamics step: draw S' ~ Ber(theta) per edge, set
/// S = S' ∪ x, and resample on the active instance (V,S) with the
/// boosted probabilities p*_e = p_e / (theta (1-p_e) + p_e), starting
/// from X = S, for t_gd Glauber steps.
EdgeConfig field_step(const EdgeConfig& x, const Graph& g, const RCParams& params,
                      const Schedule& sched, Rng& rng);

/// Run statistics for one sampling call.
struct SamplerReport {
    long long samples = 0;
    std::uint64_t seed = 0;
    double wall_enumeration = 0.0;  // seconds in the brute-force branch
    double wall_dynamics = 0.0;     // seconds in field dynamics
    bool brute_force = false;
    double total() const { return wall_enumeration + wall_dynamics; }
};

/// Approximate sample from the random-cluster measure.  Small
/// instances (n <= n0 in paper mode, m <= 20 in practical mode) go to
/// the exact oracle; otherwise X = E evolves through t_fd field steps.
/// Requires lambda_max < 1.
EdgeConfig sample_rc(const Graph& g, const RCParams& params, double eps,
                     const Schedule& sched, Rng& rng, SamplerReport* report = nullptr);

/// Approximate Ising sample: p = 1 - 1/beta, X from sample_rc, then
/// each component joins the spin set independently with probability
/// lambda^C / (1 + lambda^C).  Fields above one go through the
/// complementation identity (invert lambda, sample, complement).
VertexConfig sample_ising(const Graph& g, const IsingParams& params, double eps,
                          const Schedule& sched, Rng& rng, SamplerReport* report = nullptr);

}  // namespace fds
