#ifndef LDLCERT_CORRELATIONS_HPP
#define LDLCERT_CORRELATIONS_HPP

#include <cstdint>
#include <utility>

#include "ldlcert/behavior.hpp"

namespace ldlc {

struct FromCountsOptions {
    int bootstrap_resamples = 0;  // 0 = multinomial standard errors only
    std::uint64_t seed = 0;
};

/// counts indexed like JointDistribution: [input_idx][outcome_idx].
JointDistribution from_counts(const Scenario& s, const std::vector<std::int64_t>& counts,
                              const FromCountsOptions& opts = {});

struct Conditioned {
    Behavior behavior;
    std::vector<double> input_distribution;  // per input tuple
};

Conditioned condition_on_inputs(const JointDistribution& j);

/// Inverse of condition_on_inputs (round-trip invariant helper).
JointDistribution recombine(const Behavior& b, const std::vector<double>& input_distribution);

struct Postselected {
    Behavior behavior;
    EfficiencyMap efficiencies;
};

Postselected postselect(const LossyBehavior& l);

/// P(a_i | x_i, x_others) for one party, NOT averaged over the other
/// inputs: result[input_tuple * m_i + a_i].
std::vector<double> marginal(const Behavior& b, int party);

/// Max over (party, a_i, x_i) of the spread of marginal(a_i|x_i, x_others)
/// across x_others. A signaling diagnostic, never an error.
double signaling_measure(const Behavior& b);

JointDistribution renormalized(const JointDistribution& j);

}  // namespace ldlc

#endif
