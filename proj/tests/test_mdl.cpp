#include <doctest.h>

#include <random>

#include "ldlcert/correlations.hpp"
#include "ldlcert/json_io.hpp"
#include "ldlcert/lp.hpp"
#include "ldlcert/mdl_polytope.hpp"
#include "ldlcert/quantum.hpp"

using namespace ldlc;

namespace {

const std::string kDataDir = LDLCERT_DATA_DIR;

JointDistribution uniform_inputs(const Behavior& b) {
    std::vector<double> q(b.scenario.input_tuples(), 1.0 / b.scenario.input_tuples());
    return recombine(b, q);
}

Behavior deterministic_behavior(int a0, int a1, int b0, int b1) {
    Behavior b;
    b.scenario = Scenario::chsh();
    b.p.assign(16, 0.0);
    const int as[2] = {a0, a1}, bs[2] = {b0, b1};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            b.at(b.scenario.input_index(std::array{x, y}),
                 b.scenario.outcome_index(std::array{as[x], bs[y]}, false)) = 1.0;
    return b;
}

// Is vertex i expressible as a convex combination of the other vertices?
bool in_hull_of_others(const std::vector<std::vector<double>>& verts, std::size_t i) {
    const std::size_t d = verts[i].size();
    FeasibilityProblem<double> p;
    p.vars = verts.size() - 1;
    p.A.assign((d + 1) * p.vars, 0.0);
    p.b.assign(d + 1, 0.0);
    p.bounds.resize(p.vars);
    std::size_t col = 0;
    for (std::size_t j = 0; j < verts.size(); ++j) {
        if (j == i) continue;
        for (std::size_t r = 0; r < d; ++r) p.A[r * p.vars + col] = verts[j][r];
        p.A[d * p.vars + col] = 1.0;
        p.bounds[col].lo = 0.0;
        ++col;
    }
    for (std::size_t r = 0; r < d; ++r) p.b[r] = verts[i][r];
    p.b[d] = 1.0;
    return solve_feasibility(p).status == LpStatus::Feasible;
}

}  // namespace

TEST_CASE("input-distribution vertex counts") {
    CHECK(enumerate_input_dist_vertices(4, 0.25, 0.25).size() == 1);
    CHECK(enumerate_input_dist_vertices(4, 0.0, 1.0).size() == 4);
    // Generic bounds: every vertex has >= K-1 coordinates at a bound.
    auto vs = enumerate_input_dist_vertices(4, 0.1, 0.4);
    CHECK(vs.size() > 4);
    for (const auto& q : vs) {
        double sum = 0.0;
        int at_bound = 0;
        for (double v : q) {
            sum += v;
            CHECK(v >= 0.1 - 1e-12);
            CHECK(v <= 0.4 + 1e-12);
            if (std::abs(v - 0.1) < 1e-12 || std::abs(v - 0.4) < 1e-12) ++at_bound;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(at_bound >= 3);
    }
}

TEST_CASE("input-distribution vertices are extremal (independent LP check)") {
    auto vs = enumerate_input_dist_vertices(4, 0.1, 0.4);
    for (std::size_t i = 0; i < vs.size(); ++i) CHECK(!in_hull_of_others(vs, i));
}

TEST_CASE("vertex set is complete: random admissible distributions lie inside") {
    auto vs = enumerate_input_dist_vertices(4, 0.1, 0.4);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        // Random point of the slice via rejection-free mixing of vertices.
        std::vector<double> w(vs.size()), point(4, 0.0);
        double tot = 0.0;
        for (double& v : w) tot += (v = unif(rng));
        for (std::size_t j = 0; j < vs.size(); ++j)
            for (int k = 0; k < 4; ++k) point[k] += w[j] / tot * vs[j][k];

        FeasibilityProblem<double> p;
        p.vars = vs.size();
        p.A.assign(5 * p.vars, 0.0);
        p.b.assign(5, 0.0);
        p.bounds.resize(p.vars);
        for (std::size_t j = 0; j < vs.size(); ++j) {
            for (int r = 0; r < 4; ++r) p.A[r * p.vars + j] = vs[j][r];
            p.A[4 * p.vars + j] = 1.0;
            p.bounds[j].lo = 0.0;
        }
        for (int r = 0; r < 4; ++r) p.b[r] = point[r];
        p.b[4] = 1.0;
        CHECK(solve_feasibility(p).status == LpStatus::Feasible);
    }
}

TEST_CASE("mdl bounds validation") {
    MdlBounds big_l{0.3, 0.9}, small_h{0.1, 0.2}, mi{0.25, 0.25};
    CHECK_THROWS_AS(big_l.validate(4), ValidationError);   // l > 1/4
    CHECK_THROWS_AS(small_h.validate(4), ValidationError); // h < 1/4
    CHECK_NOTHROW(mi.validate(4));
}

TEST_CASE("mdl product vertex counts") {
    Scenario s = Scenario::chsh();
    auto vs = enumerate_mdl_vertices(s, {0.1, 0.4});
    CHECK(vs.tables.size() == enumerate_input_dist_vertices(4, 0.1, 0.4).size() * 16);
    // Each table is a normalized unconditional distribution.
    for (const auto& t : vs.tables) {
        double sum = 0.0;
        for (double v : t) sum += v;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("measurement-independent local data is MDL-explainable") {
    auto j = uniform_inputs(deterministic_behavior(0, 1, 1, 0));
    auto r = membership_mdl(j, {0.25, 0.25});
    CHECK(r.status == LpStatus::Feasible);
    CHECK(r.verified);
}

TEST_CASE("hardy with uniform inputs is outside the measurement-independent polytope") {
    Behavior hardy = born_behavior(hardy_state(), hardy_measurements());
    auto j = uniform_inputs(hardy);
    auto r = membership_mdl(j, {0.25, 0.25});
    CHECK(r.status == LpStatus::Infeasible);
    CHECK(r.verified);
    CHECK(r.margin > 1e-9);

    // The dual is a valid inequality over the whole vertex set.
    auto vs = enumerate_mdl_vertices(j.scenario, {0.25, 0.25});
    double scale = 0.0;
    for (double v : r.dual) scale = std::max(scale, std::abs(v));
    for (const auto& t : vs.tables)
        CHECK(mdl_dual_value_on_vertex(r, j.scenario, t) <= 1e-9 * scale);
}

TEST_CASE("enough measurement dependence explains hardy") {
    Behavior hardy = born_behavior(hardy_state(), hardy_measurements());
    auto j = uniform_inputs(hardy);
    auto r = membership_mdl(j, {0.0, 1.0});
    CHECK(r.status == LpStatus::Feasible);
}

TEST_CASE("mdl_hardy_value sign matches membership where it binds") {
    Behavior hardy = born_behavior(hardy_state(), hardy_measurements());
    auto j = uniform_inputs(hardy);
    // Ideal Hardy: the three suppressed terms vanish, so the inequality value
    // is l*J(0000) > 0 for any l > 0, refuting MDL(l, h).
    CHECK(mdl_hardy_value(j, {0.2, 0.3}) > 0.0);
    CHECK(membership_mdl(j, {0.2, 0.3}).status == LpStatus::Infeasible);
}

TEST_CASE("table1 threshold: the inequality flips at l/h = 0.15529") {
    auto data = load_data_file(kDataDir + "/table1.json");
    auto j = renormalized(std::get<JointDistribution>(data));
    double h = 0.3;
    CHECK(mdl_hardy_value(j, {h * 0.16, h}) > 0.0);
    CHECK(mdl_hardy_value(j, {h * 0.15, h}) < 0.0);
}

TEST_CASE("exact mode emits a positive-margin certificate") {
    Behavior hardy = born_behavior(hardy_state(), hardy_measurements());
    auto j = uniform_inputs(hardy);
    MembershipOptions opts;
    opts.exact = true;
    auto r = membership_mdl(j, {0.25, 0.25}, opts);
    CHECK(r.status == LpStatus::Infeasible);
    CHECK(r.exact);
    CHECK(r.verified);
    CHECK(r.margin > 0.0);
}
