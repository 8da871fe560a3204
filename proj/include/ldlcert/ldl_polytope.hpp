#ifndef LDLCERT_LDL_POLYTOPE_HPP
#define LDLCERT_LDL_POLYTOPE_HPP

#include <optional>
#include <string>
#include <vector>

#include "ldlcert/behavior.hpp"
#include "ldlcert/lp.hpp"

namespace ldlc {

/// Per-party bounds constrain each party's detection probability; joint
/// bounds constrain the product over parties directly.
enum class Convention { PerParty, Joint };

inline const char* to_string(Convention c) {
    return c == Convention::PerParty ? "per_party" : "joint";
}

struct DetectionBounds {
    double eta_min = 0.0;
    double eta_max = 1.0;
    Convention convention = Convention::PerParty;

    void validate() const {
        if (!(eta_min >= 0.0 && eta_min <= eta_max && eta_max <= 1.0))
            throw ValidationError("detection bounds: need 0 <= eta_min <= eta_max <= 1");
    }
};

/// One single-party limited-detection vertex: for each input, the chosen
/// outcome and whether the detection level is eta_max.
struct LdVertex {
    std::vector<int> outcome;        // per input
    std::vector<bool> level_is_max;  // per input
};

/// All (2m)^n single-party vertices (m^n when the two levels coincide),
/// in lexicographic (input, outcome, level) order.
std::vector<LdVertex> enumerate_ld_vertices(int n_inputs, int n_outcomes,
                                            double level_min, double level_max);

struct VertexSet {
    Scenario scenario;
    DetectionBounds bounds;
    std::vector<std::vector<double>> tables;  // lossy tables, one per vertex
    std::vector<std::string> labels;
};

/// Products of per-party vertices; cardinality prod_i (2 m_i)^{n_i} before
/// level deduplication.
VertexSet enumerate_ldl_vertices(const Scenario& s, const DetectionBounds& bounds,
                                 std::size_t cap = 1'000'000);

struct MembershipOptions {
    bool exact = false;
    std::size_t vertex_cap = 1'000'000;
    LpOptions<double> lp = default_lp_options();
};

struct MembershipResult {
    LpStatus status = LpStatus::Unsolved;
    Convention convention = Convention::PerParty;
    bool exact = false;
    bool verified = false;         // certificate re-checked independently
    std::vector<double> weights;   // Feasible: convex weights over vertices
    std::optional<double> t;       // Feasible, uniform-unknown: common eta_xy
    std::vector<double> dual;      // Infeasible: one entry per LP row
    double margin = 0.0;           // Infeasible: separation margin
    std::string note;
};

/// Decide whether P_ps lies in the postselected LDL polytope. With an
/// efficiency map the slice is fixed; without one a single scalar t (the
/// common eta_xy) is a free LP variable in the achievable joint range.
MembershipResult membership_ldlps(const Behavior& p_ps, const std::optional<EfficiencyMap>& eff,
                                  const DetectionBounds& bounds,
                                  const MembershipOptions& opts = {});

/// Joint detected-mass range achievable from the bounds.
std::pair<double, double> joint_detection_range(const Scenario& s, const DetectionBounds& bounds);

/// Evaluate an Infeasible dual on one enumerated vertex column (test and
/// report helper; the value must stay <= 0 up to the rescaling slack).
double dual_value_on_vertex(const MembershipResult& r, const Behavior& p_ps,
                            const Scenario& s, const std::vector<double>& vertex_table);

}  // namespace ldlc

#endif
