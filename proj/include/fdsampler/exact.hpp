#pragma once

#include <cstdint>
#include <vector>

#include "fdsampler/graph.hpp"
#include "fdsampler/params.hpp"
#include "fdsampler/rng.hpp"
#include "fdsampler/weight.hpp"

namespace fds {

/// Hard cap on the enumeration ground set (dense 2^k table).
inline constexpr int kEnumerationCap = 24;

/// Dense probability table over all subsets of a ground set, indexed by
/// bitmask.  Desk-scale ground truth only.
struct ExactDistribution {
    int ground_size = 0;
    std::vector<double> prob;  // size 2^ground_size, sums to 1
    double log_z = 0.0;

    ExactDistribution() = default;
    /// Normalizes a table of configuration weights; throws
    /// DegenerateSystem when every weight is zero.
    ExactDistribution(int ground_size, const std::vector<Weight>& weights);

    const std::vector<double>& cdf() const { return cdf_; }

private:
    std::vector<double> cdf_;
};

/// Exact distribution over vertex subsets; ground set is V, cap n <= 24.
ExactDistribution enumerate_ising(const Graph& g, const IsingParams& params);

/// Exact distribution over edge subsets; ground set is E, cap m <= 24.
ExactDistribution enumerate_rc(const Graph& g, const RCParams& params);
ExactDistribution enumerate_gsw(const Graph& g, const GSWParams& params);

/// Report of the three-way partition function identity
/// Z^Ising = (prod beta) Z^RC = (prod beta)(prod (1+lambda)) Z^SW.
struct PartitionIdentityReport {
    double log_z_ising = 0.0;
    double log_z_rc_scaled = 0.0;   // log((prod beta) Z^RC)
    double log_z_sw_scaled = 0.0;   // log((prod beta)(prod (1+lambda)) Z^SW)
    double rel_err_rc = 0.0;
    double rel_err_sw = 0.0;
    bool pass(double tol = 1e-10) const { return rel_err_rc <= tol && rel_err_sw <= tol; }
};

PartitionIdentityReport verify_partition_identity(const Graph& g, const IsingParams& ising);

/// Pushes an exact RC distribution through the component-rounding step:
/// each component C of (V,X) joins the spin set independently with
/// probability lambda^C / (1 + lambda^C).  Result is the exact Ising
/// distribution over vertex subsets.
ExactDistribution es_pushforward(const ExactDistribution& rc_dist, const Graph& g,
                                 const std::vector<double>& lambda);

/// Half the l1 distance between two tables on the same ground set.
double tv_distance(const ExactDistribution& a, const ExactDistribution& b);

/// Plug-in TV between empirical counts and an exact table.
double tv_distance_empirical(const std::vector<std::int64_t>& counts,
                             const ExactDistribution& dist);

/// Pairwise influence matrix Psi(i,j) = mu(j|i) - mu(j|i-bar), zero on
/// the diagonal and wherever the conditioning marginal is degenerate.
struct InfluenceMatrix {
    int n = 0;
    std::vector<double> psi;       // row-major n x n
    std::vector<double> marginal;  // mu(j) per element

    double at(int i, int j) const { return psi[static_cast<std::size_t>(i) * n + j]; }
    double inf_norm() const;  // max row absolute sum
};

InfluenceMatrix influence_matrix(const ExactDistribution& dist);

/// Pinned parameters: p~_e = 1 on pinned edges in tau, 0 on pinned
/// edges outside tau, p_e elsewhere.  Enumerating with the result gives
/// the conditional distribution given the pinning.
RCParams pin(const RCParams& params, const EdgeConfig& tau, const std::vector<int>& pinned);

/// Inverse-CDF draw; returns the configuration bitmask.
std::uint64_t exact_sample(const ExactDistribution& dist, Rng& rng);

}  // namespace fds
