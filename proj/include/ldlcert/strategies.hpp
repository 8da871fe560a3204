#ifndef LDLCERT_STRATEGIES_HPP
#define LDLCERT_STRATEGIES_HPP

#include <optional>
#include <vector>

#include "ldlcert/behavior.hpp"

namespace ldlc {

/// Single-party conditional table: dist[input * m + outcome].
using LocalTable = std::vector<double>;

LocalTable uniform_local_table(int n_inputs, int n_outcomes);

/// The partial-assignment construction: run detectors of efficiency eta and,
/// on non-detection, locally complete to an outcome with probability
/// eta_min_target, drawn from localA/localB (uniform when unset). Returns the
/// postselected behavior
///   (eta^2 P_NL + eta(1-eta) t (P_NL^A P_L^B + P_L^A P_NL^B)
///      + (1-eta)^2 t^2 P_L^A P_L^B) / (eta + (1-eta) t)^2,  t = eta_min_target.
/// P_NL must be non-signaling so its marginals are well defined.
Behavior assignment_mix(const Behavior& p_nl, double eta, double eta_min_target,
                        const std::optional<LocalTable>& local_a = std::nullopt,
                        const std::optional<LocalTable>& local_b = std::nullopt);

}  // namespace ldlc

#endif
