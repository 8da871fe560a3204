#ifndef LDLCERT_QUANTUM_HPP
#define LDLCERT_QUANTUM_HPP

#include <array>
#include <complex>
#include <vector>

#include "ldlcert/behavior.hpp"

namespace ldlc {

/// amplitudes indexed by (a-basis, b-basis): amp[2*i + j] = <ij|psi>.
struct PureTwoQubitState {
    std::array<std::complex<double>, 4> amp;

    double norm_sq() const;
    void validate(double eps = 1e-12) const;
};

/// For each party and input, the unit vector whose projector is outcome 0;
/// outcome 1 is the orthogonal complement.
struct MeasurementFamily {
    // vectors[party][input] = {c0, c1} in the computational basis
    std::vector<std::vector<std::array<std::complex<double>, 2>>> vectors;

    void validate(double eps = 1e-12) const;
};

/// The partially entangled state ((sqrt5-1)|00> + (sqrt5+1)|11>) / (2 sqrt3).
PureTwoQubitState hardy_state();

/// Measurement angle satisfying cos^2(theta) = 1/2 + 1/sqrt5.
double hardy_angle();

/// A0 = (cos t, sin t) at t = theta, A1 at t = theta - pi/4; Bob's vectors
/// are the mirror images (t -> -t). Bob's input-1 outcome labels are chosen
/// so the three Hardy probabilities vanish.
MeasurementFamily hardy_measurements();

/// Born rule: P(ab|xy) = |<A_x(a) (x) B_y(b) | psi>|^2.
Behavior born_behavior(const PureTwoQubitState& state, const MeasurementFamily& meas);

/// Per-party, per-input detection efficiencies in (0,1].
struct PartyEfficiencies {
    std::vector<std::vector<double>> eta;  // eta[party][input]

    static PartyEfficiencies uniform(const Scenario& s, double value);
    void validate(const Scenario& s) const;
};

/// Detection channel: each party's outcome survives independently with
/// probability eta[party][input]; non-survival maps it to the no-detection
/// symbol.
LossyBehavior apply_detection(const Behavior& b, const PartyEfficiencies& eff);

}  // namespace ldlc

#endif
