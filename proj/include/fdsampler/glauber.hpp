#pragma once

#include <vector>

#include "fdsampler/dynconn.hpp"
#include "fdsampler/graph.hpp"
#include "fdsampler/params.hpp"
#include "fdsampler/rng.hpp"

namespace fds {

/// Single-site heat-bath dynamics for the random-cluster measure
/// restricted to an active edge set S of the host graph.  The chain
/// state X is a subset of S, mirrored in a dynamic-connectivity
/// structure at all times.  Single-threaded; parallel chains own
/// independent instances with RNG streams split from a master seed.
class GlauberState {
public:
    /// `active` lists the edge ids of S (duplicates rejected); `init`
    /// must satisfy init ⊆ S.  lambda may include 1.
    GlauberState(const Graph& g, const RCParams& params, const std::vector<int>& active,
                 const EdgeConfig& init);

    /// The heat-bath inclusion probability p_{X,e}, evaluated on
    /// (V, X∖{e}): p_e when the endpoints are connected there, else
    ///   p_e (1+λ^{Cu∪Cv}) / (1+λ^{Cu∪Cv} + (1−p_e)(λ^{Cu}+λ^{Cv})),
    /// with λ^{Cu∪Cv} = λ^{Cu}·λ^{Cv} since the components are
    /// disjoint.  Restores the state before returning.
    double transition_probability(int e);

    /// One update: e uniform over S, then include e with probability
    /// p_{X,e}, exclude otherwise.
    void step(Rng& rng);

    bool contains(int e) const;
    EdgeConfig config() const;
    int active_size() const { return static_cast<int>(active_.size()); }

private:
    double probability_with_edge_absent(int e) const;

    const Graph* g_;
    std::vector<double> p_;
    std::vector<int> active_;
    std::vector<char> in_x_;
    mutable DynConn dc_;
};

/// Steps sufficient for accuracy eps on m active edges:
/// ceil(2m(log m + log(2/eps))).  Shared by paper-mode scheduling and
/// the tests.
long long glauber_steps(int m, double eps);

/// Runs Glauber from X = S for `steps` steps and returns the final X.
EdgeConfig resample(const Graph& g, const RCParams& params, const std::vector<int>& active,
                    long long steps, Rng& rng);

}  // namespace fds
