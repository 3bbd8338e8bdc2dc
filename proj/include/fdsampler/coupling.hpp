#pragma once

#include <functional>
#include <vector>

#include "fdsampler/graph.hpp"
#include "fdsampler/params.hpp"
#include "fdsampler/rng.hpp"

namespace fds {

/// Output of a coupling run: a pair of configurations on the same
/// ground set, plus bookkeeping for the tail/discrepancy diagnostics.
struct CouplingSample {
    EdgeConfig x;
    EdgeConfig y;
    int discrepancy = 0;  // |X ⊕ Y|
    int visited = 0;      // |U| upon termination
};

/// State threaded through the Couple recursion.  Edges are consumed
/// from `alive`; eta drops to zero on visited vertices; sigma flips as
/// edge decisions land.
struct CoupleContext {
    const Graph* g = nullptr;
    GSWParams params;         // eta and sigma mutate during the run
    std::vector<char> alive;  // working edge set
    std::vector<char> visited;
    int u = 0;  // discrepancy vertex
    bool debug = false;  // re-derive q0/q1 from enumeration at every level

    /// Fresh context on the full edge set with U = ∅ (requires eta > 0
    /// everywhere).
    static CoupleContext make(const Graph& g, const GSWParams& params, int u);
};

/// One run of the Couple procedure.  The marginals of (X, Y) are the
/// generalized subgraph-world measures with parity vectors sigma and
/// sigma ⊕ 1_u.  All partition sums come from enumeration of the
/// current context, so the alive edge count is capped at 20.
CouplingSample couple_gsw(CoupleContext ctx, Rng& rng);

/// Couples nu(.|e absent) and nu(.|e present) for nu the GSW measure of
/// `params`, by chaining two Couple runs through the intermediate
/// parity vector sigma ⊕ 1_u (composed by rejection on the shared
/// coordinate).  Both returned configurations live on E ∖ {e}.
/// Expected discrepancy is at most 1/(2 eta_min^2).
CouplingSample couple_gsw_edge(const Graph& g, const GSWParams& params, int e, Rng& rng);

/// t_e = q_e nu(e absent) / (q_e nu(e absent) + nu(e present)).
double lift_te(double q_e, double nu_without, double nu_with);

/// Lifts the subgraph-world coupling to the random cluster measure:
/// draws (X0, X1) from couple_gsw_edge on the nu = GSW(p/2, eta(lambda))
/// instance, Z ~ ⊗ Ber(q) with q = p/(2-p), and glues per the t_e rule.
/// Marginals are mu^RC(.|e absent) and mu^RC(.|e present).
CouplingSample lift_coupling_rc(const Graph& g, const RCParams& rc, int e, Rng& rng);

/// Exhaustive check of the convolution identity
///   mu^RC(Y) = sum_{X ⊆ Y} nu(X) prod_{h in Y∖X} q_h prod_{f not in Y} (1-q_f).
struct ConvolutionReport {
    double max_abs_err = 0.0;
    bool pass(double tol = 1e-10) const { return max_abs_err <= tol; }
};
ConvolutionReport verify_sw_rc_convolution(const Graph& g, const RCParams& rc);

/// Monte Carlo estimate of E|X ⊕ Y| for any coupler.
struct CouplingEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};
CouplingEstimate estimate_coupling_independence(
    const std::function<CouplingSample(Rng&)>& coupler, long long runs, Rng& rng);

}  // namespace fds
