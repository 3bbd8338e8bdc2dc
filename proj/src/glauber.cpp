#include "fdsampler/glauber.hpp"

#include <algorithm>
#include <cmath>

#include "fdsampler/error.hpp"
#include "fdsampler/weight.hpp"

namespace fds {

GlauberState::GlauberState(const Graph& g, const RCParams& params,
                           const std::vector<int>& active, const EdgeConfig& init)
    : g_(&g), p_(params.p), active_(active), in_x_(g.num_edges(), 0),
      dc_(g, params.lambda) {
    params.validate(g, /*allow_unit_field=*/true);
    std::sort(active_.begin(), active_.end());
    if (std::adjacent_find(active_.begin(), active_.end()) != active_.end())
        throw InvalidInput("GlauberState: duplicate active edge id");
    for (int e : active_)
        if (e < 0 || e >= g.num_edges())
            throw InvalidInput("GlauberState: active edge id out of range");
    for (int e : init.ids) {
        if (!std::binary_search(active_.begin(), active_.end(), e))
            throw InvalidInput("GlauberState: initial config not contained in active set");
        in_x_[e] = 1;
        dc_.insert_edge(e);
    }
}

double GlauberState::probability_with_edge_absent(int e) const {
    auto [u, v] = g_->edge(e);
    if (dc_.connected(u, v)) return p_[e];
    Weight wu = dc_.comp_lambda_product(u);
    Weight wv = dc_.comp_lambda_product(v);
    // heat-bath conditional: p_e (1+λ^{Cu}λ^{Cv}) / ((1+λ^{Cu}λ^{Cv}) + (1-p_e)(λ^{Cu}+λ^{Cv}))
    Weight shared = Weight::one() + wu * wv;
    Weight num = Weight::from_value(p_[e]) * shared;
    Weight den = shared + Weight::from_value(1.0 - p_[e]) * (wu + wv);
    if (num.is_zero) return 0.0;
    return std::exp(num.log_value - den.log_value);
}

double GlauberState::transition_probability(int e) {
    if (!std::binary_search(active_.begin(), active_.end(), e))
        throw ContractViolation("GlauberState::transition_probability: edge not active");
    bool present = in_x_[e] != 0;
    if (present) dc_.delete_edge(e);
    double prob = probability_with_edge_absent(e);
    if (present) dc_.insert_edge(e);
    return prob;
}

void GlauberState::step(Rng& rng) {
    if (active_.empty()) throw ContractViolation("GlauberState::step: empty active set");
    std::uniform_int_distribution<std::size_t> pick(0, active_.size() - 1);
    int e = active_[pick(rng)];
    if (in_x_[e]) {
        dc_.delete_edge(e);
        in_x_[e] = 0;
    }
    if (uniform01(rng) < probability_with_edge_absent(e)) {
        dc_.insert_edge(e);
        in_x_[e] = 1;
    }
}

bool GlauberState::contains(int e) const { return in_x_[e] != 0; }

EdgeConfig GlauberState::config() const {
    std::vector<int> ids;
    for (int e : active_)
        if (in_x_[e]) ids.push_back(e);
    return EdgeConfig{std::move(ids)};
}

long long glauber_steps(int m, double eps) {
    if (m <= 0) return 0;
    if (!(eps > 0.0)) throw InvalidInput("glauber_steps: eps must be positive");
    return static_cast<long long>(
        std::ceil(2.0 * m * (std::log(static_cast<double>(m)) + std::log(2.0 / eps))));
}

EdgeConfig resample(const Graph& g, const RCParams& params, const std::vector<int>& active,
                    long long steps, Rng& rng) {
    if (steps < 0) throw InvalidInput("resample: steps must be nonnegative");
    if (active.empty()) return EdgeConfig{};
    GlauberState state(g, params, active, EdgeConfig{active});
    for (long long t = 0; t < steps; ++t) state.step(rng);
    return state.config();
}

}  // namespace fds
