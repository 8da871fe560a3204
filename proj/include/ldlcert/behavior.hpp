#ifndef LDLCERT_BEHAVIOR_HPP
#define LDLCERT_BEHAVIOR_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "ldlcert/scenario.hpp"

namespace ldlc {

inline constexpr double kEpsNorm = 1e-6;      // synthetic data
inline constexpr double kEpsIngest = 5e-4;    // measured tables (Table-I-like)

/// Conditional correlations P(a|x) without the no-detection symbol.
/// Storage: p[input_index * outcome_tuples(false) + outcome_index].
struct Behavior {
    Scenario scenario;
    std::vector<double> p;

    double& at(std::size_t in, std::size_t out) {
        return p[in * scenario.outcome_tuples(false) + out];
    }
    double at(std::size_t in, std::size_t out) const {
        return p[in * scenario.outcome_tuples(false) + out];
    }
    void validate(double eps = kEpsNorm) const;
};

/// Conditional correlations including the no-detection symbol (outcome m_i).
struct LossyBehavior {
    Scenario scenario;
    std::vector<double> p;

    double& at(std::size_t in, std::size_t out) {
        return p[in * scenario.outcome_tuples(true) + out];
    }
    double at(std::size_t in, std::size_t out) const {
        return p[in * scenario.outcome_tuples(true) + out];
    }
    void validate(double eps = kEpsNorm) const;
};

/// Unconditional distribution P(a,x), inputs included; optional per-entry
/// standard errors (same indexing).
struct JointDistribution {
    Scenario scenario;
    std::vector<double> p;
    std::optional<std::vector<double>> uncertainty;

    double& at(std::size_t in, std::size_t out) {
        return p[in * scenario.outcome_tuples(false) + out];
    }
    double at(std::size_t in, std::size_t out) const {
        return p[in * scenario.outcome_tuples(false) + out];
    }
    void validate(double eps = kEpsNorm) const;
};

/// Observed joint detection efficiency per input tuple, all > 0.
struct EfficiencyMap {
    Scenario scenario;
    std::vector<double> eta;  // one per input tuple

    void validate() const;
};

}  // namespace ldlc

#endif
