#include <doctest.h>

#include <cmath>
#include <random>

#include "ldlcert/correlations.hpp"
#include "ldlcert/json_io.hpp"
#include "ldlcert/quantum.hpp"

using namespace ldlc;

namespace {

const std::string kDataDir = LDLCERT_DATA_DIR;

Behavior random_behavior(std::mt19937_64& rng) {
    Scenario s = Scenario::chsh();
    Behavior b;
    b.scenario = s;
    b.p.resize(16);
    std::uniform_real_distribution<double> unif(0.01, 1.0);
    for (std::size_t i = 0; i < 4; ++i) {
        double row = 0.0;
        for (std::size_t o = 0; o < 4; ++o) row += (b.at(i, o) = unif(rng));
        for (std::size_t o = 0; o < 4; ++o) b.at(i, o) /= row;
    }
    return b;
}

}  // namespace

TEST_CASE("from_counts normalizes and attaches multinomial errors") {
    Scenario s = Scenario::chsh();
    std::vector<std::int64_t> counts(16, 0);
    counts[0] = 30;
    counts[5] = 70;
    auto j = from_counts(s, counts);
    CHECK(j.p[0] == doctest::Approx(0.3));
    CHECK(j.p[5] == doctest::Approx(0.7));
    REQUIRE(j.uncertainty.has_value());
    CHECK((*j.uncertainty)[0] == doctest::Approx(std::sqrt(0.3 * 0.7 / 100.0)));

    CHECK_THROWS_AS(from_counts(s, std::vector<std::int64_t>(16, 0)), EmptyDataError);
    CHECK_THROWS_AS(from_counts(s, std::vector<std::int64_t>(15, 1)), ShapeError);
    counts[3] = -1;
    CHECK_THROWS_AS(from_counts(s, counts), ValidationError);
}

TEST_CASE("bootstrap errors are seeded and reproducible") {
    Scenario s = Scenario::chsh();
    std::vector<std::int64_t> counts(16, 25);
    FromCountsOptions opts;
    opts.bootstrap_resamples = 200;
    opts.seed = 42;
    auto a = from_counts(s, counts, opts);
    auto b = from_counts(s, counts, opts);
    REQUIRE(a.uncertainty.has_value());
    CHECK(*a.uncertainty == *b.uncertainty);  // bit-for-bit
    // Same order of magnitude as the multinomial formula.
    auto plain = from_counts(s, counts);
    for (std::size_t k = 0; k < 16; ++k)
        CHECK((*a.uncertainty)[k] == doctest::Approx((*plain.uncertainty)[k]).epsilon(0.5));
}

TEST_CASE("condition_on_inputs / recombine round trip is exact") {
    auto data = load_data_file(kDataDir + "/table1.json");
    auto& j = std::get<JointDistribution>(data);
    auto c = condition_on_inputs(j);
    c.behavior.validate();
    auto back = recombine(c.behavior, c.input_distribution);
    REQUIRE(back.p.size() == j.p.size());
    for (std::size_t k = 0; k < j.p.size(); ++k)
        CHECK(back.p[k] == doctest::Approx(j.p[k]).epsilon(1e-12));
}

TEST_CASE("condition_on_inputs rejects empty input blocks") {
    Scenario s = Scenario::chsh();
    JointDistribution j;
    j.scenario = s;
    j.p.assign(16, 0.0);
    for (std::size_t o = 0; o < 4; ++o) j.at(0, o) = 0.25;  // all mass on one input
    CHECK_THROWS_AS(condition_on_inputs(j), ZeroInputMassError);
}

TEST_CASE("postselect divides by the detected mass per input") {
    Behavior hardy = born_behavior(hardy_state(), hardy_measurements());
    auto lossy = apply_detection(hardy, PartyEfficiencies::uniform(hardy.scenario, 0.7));
    auto ps = postselect(lossy);
    for (double e : ps.efficiencies.eta) CHECK(e == doctest::Approx(0.49).epsilon(1e-12));
    for (std::size_t k = 0; k < hardy.p.size(); ++k)
        CHECK(ps.behavior.p[k] == doctest::Approx(hardy.p[k]).epsilon(1e-12));
}

TEST_CASE("postselect rejects inputs without any detections") {
    Scenario s{1, {1}, {2}};
    LossyBehavior l;
    l.scenario = s;
    l.p = {0.0, 0.0, 1.0};  // everything in the no-detection symbol
    CHECK_THROWS_AS(postselect(l), NoDetectionsError);
}

TEST_CASE("marginal keeps the other party's input explicit") {
    Behavior hardy = born_behavior(hardy_state(), hardy_measurements());
    auto ma = marginal(hardy, 0);
    REQUIRE(ma.size() == 8);  // 4 input tuples x 2 outcomes
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(ma[i * 2] + ma[i * 2 + 1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(marginal(hardy, 2), ShapeError);
}

TEST_CASE("signaling_measure vanishes for quantum behaviors") {
    Behavior hardy = born_behavior(hardy_state(), hardy_measurements());
    CHECK(signaling_measure(hardy) < 1e-12);

    // A blatantly signaling table: Alice's marginal depends on Bob's input.
    Behavior sig = hardy;
    sig.p.assign(16, 0.0);
    sig.at(0, 0) = 1.0;  // x=(0,0): a=(0,0)
    sig.at(1, 3) = 1.0;  // x=(0,1): a=(1,1)
    sig.at(2, 0) = 1.0;
    sig.at(3, 0) = 1.0;
    CHECK(signaling_measure(sig) == doctest::Approx(1.0));
}

TEST_CASE("renormalized rescales mass and uncertainties together") {
    auto data = load_data_file(kDataDir + "/table1.json");
    auto& j = std::get<JointDistribution>(data);
    double total = 0.0;
    for (double v : j.p) total += v;
    CHECK(total == doctest::Approx(1.00008).epsilon(1e-9));

    auto r = renormalized(j);
    double rt = 0.0;
    for (double v : r.p) rt += v;
    CHECK(rt == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(r.uncertainty.has_value());
    CHECK((*r.uncertainty)[0] == doctest::Approx((*j.uncertainty)[0] / total).epsilon(1e-12));
}

TEST_CASE("validation tolerances distinguish synthetic from measured data") {
    auto data = load_data_file(kDataDir + "/table1.json");
    auto& j = std::get<JointDistribution>(data);
    CHECK_NOTHROW(j.validate(kEpsIngest));
    CHECK_THROWS_AS(j.validate(kEpsNorm), ValidationError);  // sums to 1.00008
}

TEST_CASE("randomized behaviors survive a condition/recombine sweep") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        Behavior b = random_behavior(rng);
        std::vector<double> q(4);
        double tot = 0.0;
        for (double& v : q) tot += (v = unif(rng));
        for (double& v : q) v /= tot;
        auto back = condition_on_inputs(recombine(b, q));
        for (std::size_t k = 0; k < b.p.size(); ++k)
            CHECK(back.behavior.p[k] == doctest::Approx(b.p[k]).epsilon(1e-12));
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(back.input_distribution[i] == doctest::Approx(q[i]).epsilon(1e-12));
    }
}
