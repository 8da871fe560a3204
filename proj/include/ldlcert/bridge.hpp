#ifndef LDLCERT_BRIDGE_HPP
#define LDLCERT_BRIDGE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ldlcert/mdl_polytope.hpp"

namespace ldlc {

struct BridgeParams {
    MdlBounds mdl;
    DetectionBounds detection;
};

struct TransformResult {
    MdlBounds bounds;
    bool clamped_l = false;
    bool clamped_h = false;
};

/// The LDL-to-MDL reduction: postselected limited-detection measurement-
/// dependent correlations with (eta_min, eta_max) and (l, h) are plain MDL
/// with l' = r l and h' = h / r, where r = eta_min/eta_max under the joint
/// convention and its square under the per-party convention.
TransformResult transform(const BridgeParams& p);

struct BridgeReport {
    int trials = 0;
    int failures = 0;
    double min_slack = 0.0;  // worst margin of P(xy|det,lambda) inside [l',h']
    Convention convention = Convention::PerParty;
    BridgeParams params;
    MdlBounds transformed;
    std::uint64_t seed = 0;
    std::vector<std::string> failure_dumps;  // serialized offending models
};

/// Randomized check of the reduction theorem: sample MDLDL models, compute
/// the postselected joint distribution analytically, and assert MDL
/// membership at the transformed bounds. Any Infeasible trial is a failure.
BridgeReport verify_bridge(int trials, std::uint64_t seed, const Scenario& s,
                           const BridgeParams& params, int lambda_support = 8, int threads = 1);

}  // namespace ldlc

#endif
