#pragma once

#include "fdsampler/graph.hpp"
#include "fdsampler/params.hpp"
#include "fdsampler/weight.hpp"

namespace fds {

/// prod_{e in m(S)} beta_e * prod_{v in S} lambda_v, where m(S) is the
/// set of edges with both or neither endpoint in S.
Weight ising_weight(const Graph& g, const IsingParams& params, const VertexConfig& s);

/// prod_{e in S} p_e * prod_{f notin S} (1-p_f) * prod over components
/// C of (V,S) of (1 + prod_{j in C} lambda_j).
Weight rc_weight(const Graph& g, const RCParams& params, const EdgeConfig& s);

/// prod_{e in S} p_e * prod_{f notin S} (1-p_f) * prod of eta_v over
/// vertices whose degree parity in S matches sigma_v.
Weight gsw_weight(const Graph& g, const GSWParams& params, const EdgeConfig& s);

}  // namespace fds
