#include "fdsampler/params.hpp"

#include <algorithm>
#include <string>

namespace fds {

namespace {
void check_size(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        throw InvalidInput(std::string(what) + " has " + std::to_string(got) +
                           " entries, graph requires " + std::to_string(want));
}
}  // namespace

void IsingParams::validate(const Graph& g) const {
    check_size(beta.size(), g.num_edges(), "beta");
    check_size(lambda.size(), g.num_vertices(), "lambda");
    for (double b : beta)
        if (!(b > 1.0)) throw InvalidInput("beta_e must be > 1, got " + std::to_string(b));
    bool any_low = false, any_high = false;
    for (double l : lambda) {
        if (l < 0.0) throw InvalidInput("lambda_v must be nonnegative");
        (l > 1.0 ? any_high : any_low) = true;
    }
    if (any_low && any_high)
        throw InvalidInput("lambda vector mixes values <= 1 and > 1; unsupported regime");
}

bool IsingParams::lambda_above_one() const {
    return !lambda.empty() && lambda.front() > 1.0;
}

void RCParams::validate(const Graph& g, bool allow_unit_field) const {
    check_size(p.size(), g.num_edges(), "p");
    check_size(lambda.size(), g.num_vertices(), "lambda");
    for (double q : p)
        if (q < 0.0 || q > 1.0) throw InvalidInput("p_e must be in [0,1]");
    for (double l : lambda) {
        if (l < 0.0 || l > 1.0) throw InvalidInput("lambda_v must be in [0,1]");
        if (l == 1.0 && !allow_unit_field)
            throw InvalidInput("lambda_v = 1 not accepted by the sampler");
    }
}

double RCParams::p_min() const {
    return p.empty() ? 1.0 : *std::min_element(p.begin(), p.end());
}

double RCParams::lambda_max() const {
    return lambda.empty() ? 0.0 : *std::max_element(lambda.begin(), lambda.end());
}

void GSWParams::validate(const Graph& g) const {
    check_size(p.size(), g.num_edges(), "p");
    check_size(eta.size(), g.num_vertices(), "eta");
    check_size(sigma.size(), g.num_vertices(), "sigma");
    for (double q : p)
        if (q < 0.0 || q > 0.5) throw InvalidInput("GSW p_e must be in [0,1/2]");
    for (double e : eta)
        if (e < 0.0 || e > 1.0) throw InvalidInput("eta_v must be in [0,1]");
    for (int s : sigma)
        if (s != 0 && s != 1) throw InvalidInput("sigma_v must be 0 or 1");
}

std::vector<double> beta_to_p(const std::vector<double>& beta) {
    std::vector<double> p;
    p.reserve(beta.size());
    for (double b : beta) {
        if (!(b > 1.0)) throw DomainError("beta_to_p requires beta_e > 1");
        p.push_back((b - 1.0) / b);
    }
    return p;
}

std::vector<double> lambda_to_eta(const std::vector<double>& lambda) {
    std::vector<double> eta;
    eta.reserve(lambda.size());
    for (double l : lambda) {
        if (l < 0.0 || l > 1.0) throw DomainError("lambda_to_eta requires lambda_v in [0,1]");
        eta.push_back((1.0 - l) / (1.0 + l));
    }
    return eta;
}

std::vector<double> p_star(const std::vector<double>& p, double theta) {
    if (!(theta > 0.0) || !(theta < 1.0)) throw DomainError("p_star requires theta in (0,1)");
    std::vector<double> out;
    out.reserve(p.size());
    for (double q : p) {
        if (!(q >= 0.0) || !(q <= 1.0)) throw DomainError("p_star requires p_e in [0,1]");
        out.push_back(q / (theta * (1.0 - q) + q));
    }
    return out;
}

std::vector<double> p_to_q(const std::vector<double>& p) {
    std::vector<double> out;
    out.reserve(p.size());
    for (double q : p) {
        if (q < 0.0 || q > 1.0) throw DomainError("p_to_q requires p_e in [0,1]");
        out.push_back(q / (2.0 - q));
    }
    return out;
}

}  // namespace fds
