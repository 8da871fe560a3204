#include "ldlcert/quantum.hpp"

#include <cmath>

namespace ldlc {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::array<std::complex<double>, 2> real_vec(double angle) {
    return {std::cos(angle), std::sin(angle)};
}
}  // namespace

double PureTwoQubitState::norm_sq() const {
    double n = 0.0;
    for (const auto& c : amp) n += std::norm(c);
    return n;
}

void PureTwoQubitState::validate(double eps) const {
    if (std::abs(norm_sq() - 1.0) > eps)
        throw ValidationError("state: not normalized");
}

void MeasurementFamily::validate(double eps) const {
    for (const auto& party : vectors)
        for (const auto& v : party) {
            double n = std::norm(v[0]) + std::norm(v[1]);
            if (std::abs(n - 1.0) > eps)
                throw ValidationError("measurement family: vector not unit norm");
        }
}

PureTwoQubitState hardy_state() {
    const double s5 = std::sqrt(5.0);
    const double s3 = std::sqrt(3.0);
    PureTwoQubitState st;
    st.amp = {(s5 - 1.0) / (2.0 * s3), 0.0, 0.0, (s5 + 1.0) / (2.0 * s3)};
    return st;
}

double hardy_angle() {
    return std::acos(std::sqrt(0.5 + 1.0 / std::sqrt(5.0)));
}

MeasurementFamily hardy_measurements() {
    const double theta = hardy_angle();
    MeasurementFamily m;
    m.vectors.resize(2);
    // Alice: A0 at theta, A1 at theta - pi/4.
    m.vectors[0] = {real_vec(theta), real_vec(theta - kPi / 4.0)};
    // Bob: mirror images, B0 at -theta; B1's outcome-0 vector at pi/4 - theta
    // (the label choice that realizes the Hardy zeros).
    m.vectors[1] = {real_vec(-theta), real_vec(kPi / 4.0 - theta)};
    return m;
}

Behavior born_behavior(const PureTwoQubitState& state, const MeasurementFamily& meas) {
    state.validate();
    meas.validate();
    if (meas.vectors.size() != 2 || meas.vectors[0].empty() || meas.vectors[1].empty())
        throw ShapeError("born_behavior: need measurement vectors for both parties");

    Scenario s{2,
               {static_cast<int>(meas.vectors[0].size()), static_cast<int>(meas.vectors[1].size())},
               {2, 2}};
    Behavior b;
    b.scenario = s;
    b.p.resize(s.input_tuples() * 4);

    auto outcome_vec = [](const std::array<std::complex<double>, 2>& v, int a) {
        // outcome 1 projects onto the orthogonal complement (-conj(v1), conj(v0))
        return a == 0 ? v : std::array<std::complex<double>, 2>{-std::conj(v[1]), std::conj(v[0])};
    };

    for (int x = 0; x < s.inputs[0]; ++x)
        for (int y = 0; y < s.inputs[1]; ++y) {
            std::size_t in = s.input_index(std::array{x, y});
            for (int a = 0; a < 2; ++a)
                for (int bb = 0; bb < 2; ++bb) {
                    auto va = outcome_vec(meas.vectors[0][x], a);
                    auto vb = outcome_vec(meas.vectors[1][y], bb);
                    std::complex<double> amp = 0.0;
                    for (int i = 0; i < 2; ++i)
                        for (int j = 0; j < 2; ++j)
                            amp += std::conj(va[i] * vb[j]) * state.amp[2 * i + j];
                    b.at(in, s.outcome_index(std::array{a, bb}, false)) = std::norm(amp);
                }
        }
    b.validate(1e-12);
    return b;
}

PartyEfficiencies PartyEfficiencies::uniform(const Scenario& s, double value) {
    PartyEfficiencies e;
    e.eta.resize(s.parties);
    for (int i = 0; i < s.parties; ++i)
        e.eta[i].assign(s.inputs[i], value);
    return e;
}

void PartyEfficiencies::validate(const Scenario& s) const {
    if (static_cast<int>(eta.size()) != s.parties)
        throw ShapeError("efficiencies: party count mismatch");
    for (int i = 0; i < s.parties; ++i) {
        if (static_cast<int>(eta[i].size()) != s.inputs[i])
            throw ShapeError("efficiencies: input count mismatch");
        for (double e : eta[i])
            if (!(e > 0.0) || e > 1.0)
                throw InvalidEfficiencyError("efficiencies: eta must be in (0,1]");
    }
}

LossyBehavior apply_detection(const Behavior& b, const PartyEfficiencies& eff) {
    const Scenario& s = b.scenario;
    b.validate();
    eff.validate(s);

    const std::size_t nin = s.input_tuples();
    const std::size_t nlossy = s.outcome_tuples(true);
    const std::size_t nout = s.outcome_tuples(false);
    LossyBehavior l;
    l.scenario = s;
    l.p.assign(nin * nlossy, 0.0);

    for (std::size_t i = 0; i < nin; ++i) {
        auto x = s.input_tuple(i);
        for (std::size_t lo = 0; lo < nlossy; ++lo) {
            auto a = s.outcome_tuple(lo, true);
            double weight = 1.0;
            for (int pi = 0; pi < s.parties; ++pi) {
                double e = eff.eta[pi][x[pi]];
                weight *= (a[pi] == s.outcomes[pi]) ? (1.0 - e) : e;
            }
            if (weight == 0.0) continue;
            // Marginal of b over the detected parties at this outcome pattern.
            double marg = 0.0;
            for (std::size_t o = 0; o < nout; ++o) {
                auto full = s.outcome_tuple(o, false);
                bool match = true;
                for (int pi = 0; pi < s.parties; ++pi)
                    if (a[pi] != s.outcomes[pi] && full[pi] != a[pi]) { match = false; break; }
                if (match) marg += b.at(i, o);
            }
            l.at(i, lo) = weight * marg;
        }
    }
    l.validate(1e-12);
    return l;
}

}  // namespace ldlc
