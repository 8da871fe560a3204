#ifndef LDLCERT_MDL_POLYTOPE_HPP
#define LDLCERT_MDL_POLYTOPE_HPP

#include <vector>

#include "ldlcert/behavior.hpp"
#include "ldlcert/ldl_polytope.hpp"

namespace ldlc {

struct MdlBounds {
    double l = 0.0;  // lower bound on P(xy|lambda)
    double h = 1.0;  // upper bound

    void validate(std::size_t n_input_tuples) const {
        double u = 1.0 / static_cast<double>(n_input_tuples);
        if (!(l >= 0.0 && l <= u + 1e-12 && h >= u - 1e-12 && h <= 1.0))
            throw ValidationError("mdl bounds: need 0 <= l <= 1/N_in <= h <= 1");
        if (l > h) throw ValidationError("mdl bounds: l > h");
    }
};

/// Extreme points of { p in [l,h]^K : sum p = 1 }: every coordinate at a
/// bound except at most one.
std::vector<std::vector<double>> enumerate_input_dist_vertices(std::size_t k, double l, double h);

struct MdlVertexSet {
    Scenario scenario;
    MdlBounds bounds;
    // Unconditional tables over (input_idx * n_out + outcome_idx), matching
    // JointDistribution indexing.
    std::vector<std::vector<double>> tables;
    std::vector<std::string> labels;
};

/// V(a x) = q(x) * prod_i D_i(a_i|x_i) for every input-distribution vertex q
/// and every tuple of deterministic response functions D_i.
MdlVertexSet enumerate_mdl_vertices(const Scenario& s, const MdlBounds& bounds,
                                    std::size_t cap = 1'000'000);

/// LP membership of an unconditional distribution in the MDL polytope.
MembershipResult membership_mdl(const JointDistribution& j, const MdlBounds& bounds,
                                const MembershipOptions& opts = {});

/// l*J(0000) - h*(J(0101) + J(1010) + J(0011)); positive refutes MDL(l,h).
/// Index order in J(abxy): Alice outcome, Bob outcome, Alice input, Bob input.
double mdl_hardy_value(const JointDistribution& j, const MdlBounds& bounds);

/// Evaluate an Infeasible membership_mdl dual on an unconditional vertex
/// table (must stay <= 0 for every enumerated vertex).
double mdl_dual_value_on_vertex(const MembershipResult& r, const Scenario& s,
                                const std::vector<double>& vertex_table);

}  // namespace ldlc

#endif
