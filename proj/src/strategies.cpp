#include "ldlcert/strategies.hpp"

#include <cmath>

#include "ldlcert/correlations.hpp"

namespace ldlc {

LocalTable uniform_local_table(int n_inputs, int n_outcomes) {
    return LocalTable(static_cast<std::size_t>(n_inputs) * n_outcomes, 1.0 / n_outcomes);
}

Behavior assignment_mix(const Behavior& p_nl, double eta, double eta_min_target,
                        const std::optional<LocalTable>& local_a,
                        const std::optional<LocalTable>& local_b) {
    const Scenario& s = p_nl.scenario;
    if (s.parties != 2) throw ShapeError("assignment_mix: two parties required");
    p_nl.validate();
    if (!(eta > 0.0 && eta <= 1.0))
        throw InvalidEfficiencyError("assignment_mix: eta must be in (0,1]");
    if (eta_min_target < 0.0 || eta_min_target > 1.0)
        throw ValidationError("assignment_mix: eta_min_target must be in [0,1]");

    // Input-independent marginals are a precondition of the construction.
    if (signaling_measure(p_nl) > 1e-9)
        throw SignalingInputError("assignment_mix: P_NL is signaling, marginals ill-defined");

    const int nA = s.inputs[0], nB = s.inputs[1];
    const int mA = s.outcomes[0], mB = s.outcomes[1];
    LocalTable la = local_a ? *local_a : uniform_local_table(nA, mA);
    LocalTable lb = local_b ? *local_b : uniform_local_table(nB, mB);
    if (la.size() != static_cast<std::size_t>(nA) * mA ||
        lb.size() != static_cast<std::size_t>(nB) * mB)
        throw ShapeError("assignment_mix: local table size mismatch");

    // Marginals of P_NL per own input (input-independence just checked).
    auto margA = marginal(p_nl, 0);
    auto margB = marginal(p_nl, 1);
    const std::size_t nout = s.outcome_tuples(false);

    const double t = eta_min_target;
    const double denom = (eta + (1.0 - eta) * t) * (eta + (1.0 - eta) * t);
    const double w_nl = eta * eta;
    const double w_cross = eta * (1.0 - eta) * t;
    const double w_local = (1.0 - eta) * (1.0 - eta) * t * t;

    Behavior out;
    out.scenario = s;
    out.p.resize(s.input_tuples() * nout);
    for (int x = 0; x < nA; ++x)
        for (int y = 0; y < nB; ++y) {
            std::size_t in = s.input_index(std::array{x, y});
            for (int a = 0; a < mA; ++a)
                for (int b = 0; b < mB; ++b) {
                    double pa_nl = margA[in * mA + a];
                    double pb_nl = margB[in * mB + b];
                    double pa_l = la[static_cast<std::size_t>(x) * mA + a];
                    double pb_l = lb[static_cast<std::size_t>(y) * mB + b];
                    std::size_t o = s.outcome_index(std::array{a, b}, false);
                    out.at(in, o) = (w_nl * p_nl.at(in, o) +
                                     w_cross * (pa_nl * pb_l + pa_l * pb_nl) +
                                     w_local * pa_l * pb_l) /
                                    denom;
                }
        }
    out.validate(1e-9);
    return out;
}

}  // namespace ldlc
