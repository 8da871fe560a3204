#ifndef LDLCERT_ANALYSIS_HPP
#define LDLCERT_ANALYSIS_HPP

#include <cstdint>
#include <optional>

#include "ldlcert/behavior.hpp"
#include "ldlcert/ldl_polytope.hpp"

namespace ldlc {

/// The four postselected conditional probabilities entering the LDL-Hardy
/// inequality: P1 = P(00|00), P2 = P(01|01), P3 = P(10|10), P4 = P(00|11).
struct HardyTerms {
    double p1 = 0, p2 = 0, p3 = 0, p4 = 0;
    std::optional<std::array<double, 4>> errors;
};

HardyTerms extract_hardy_terms(const Behavior& b);
HardyTerms extract_hardy_terms(const JointDistribution& j);

/// eta_min^2 P1 - eta_min eta_max (P2 + P3) - eta_max^2 P4 under the
/// equal-eta_xy assumption; positive refutes LDL at these bounds.
double ldl_value(const HardyTerms& t, const DetectionBounds& bounds);

/// Positive root r* of r^2 P1 - r (P2+P3) - P4 = 0; violation iff
/// eta_min/eta_max > r*. Returns +infinity when P1 = 0.
double critical_ratio(const HardyTerms& t);

/// critical_ratio(t) * eta_max.
double required_eta_min(const HardyTerms& t, double eta_max);

/// (J(0101) + J(1010) + J(0011)) / J(0000); nonlocality demonstrated iff
/// (l/h)(eta_min/eta_max)^4 exceeds this. +infinity when J(0000) = 0.
double mdl_ldl_threshold(const JointDistribution& j);

enum class ErrorMethod { Delta, Bootstrap };

struct ErrorOptions {
    ErrorMethod method = ErrorMethod::Delta;
    int resamples = 2000;
    std::uint64_t seed = 0;
};

struct ValueWithError {
    double value = 0;
    double error = 0;
};

/// Standard error on critical_ratio from the term errors (first-order delta
/// method with analytic partials, or seeded parametric bootstrap).
ValueWithError critical_ratio_with_error(const HardyTerms& t, const ErrorOptions& opts = {});
ValueWithError required_eta_min_with_error(const HardyTerms& t, double eta_max,
                                           const ErrorOptions& opts = {});
ValueWithError mdl_ldl_threshold_with_error(const JointDistribution& j,
                                            const ErrorOptions& opts = {});

}  // namespace ldlc

#endif
