#pragma once

#include <vector>

#include "fdsampler/graph.hpp"

namespace fds {

/// Ising parameters: beta_e > 1 per edge, lambda_v per vertex.  The
/// lambda vector must lie entirely in [0,1] or entirely in (1,inf); the
/// latter regime is handled by complementation in the sampler.
struct IsingParams {
    std::vector<double> beta;
    std::vector<double> lambda;

    void validate(const Graph& g) const;
    bool lambda_above_one() const;  // true iff the whole vector is > 1
};

/// Random cluster parameters: p_e in [0,1], lambda_v in [0,1).
/// lambda_v = 1 is accepted only when `allow_unit_field` is set, which
/// oracle-side code uses to test the model identities at lambda = 1;
/// sampler entry points validate with it off.
struct RCParams {
    std::vector<double> p;
    std::vector<double> lambda;

    void validate(const Graph& g, bool allow_unit_field = false) const;
    double p_min() const;
    double lambda_max() const;
};

/// Generalized subgraph-world parameters: p_e in [0,1/2], eta_v in
/// [0,1], parity bit sigma_v.
struct GSWParams {
    std::vector<double> p;
    std::vector<double> eta;
    std::vector<int> sigma;

    void validate(const Graph& g) const;
};

// Closed-form parameter transforms.

/// p_e = 1 - 1/beta_e, computed as (beta-1)/beta to keep precision near 1.
std::vector<double> beta_to_p(const std::vector<double>& beta);

/// eta_v = (1 - lambda_v) / (1 + lambda_v).
std::vector<double> lambda_to_eta(const std::vector<double>& lambda);

/// Tilted edge probability p*_e = p_e / (theta (1-p_e) + p_e).
std::vector<double> p_star(const std::vector<double>& p, double theta);

/// q_e = p_e / (2 - p_e).
std::vector<double> p_to_q(const std::vector<double>& p);

}  // namespace fds
