#include "ldlcert/ldl_polytope.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace ldlc {

namespace {

// Detection levels actually placed on single-party vertices. Joint-convention
// bounds are split symmetrically across the parties.
std::pair<double, double> party_levels(const DetectionBounds& b, int parties) {
    if (b.convention == Convention::PerParty) return {b.eta_min, b.eta_max};
    double inv = 1.0 / parties;
    return {std::pow(b.eta_min, inv), std::pow(b.eta_max, inv)};
}

template <class T>
std::vector<T> product_vertex_table(const Scenario& s, const std::vector<const LdVertex*>& parts,
                                    const T& lv_min, const T& lv_max) {
    const std::size_t nin = s.input_tuples();
    const std::size_t nlossy = s.outcome_tuples(true);
    std::vector<T> table(nin * nlossy, T(0));
    for (std::size_t i = 0; i < nin; ++i) {
        auto x = s.input_tuple(i);
        for (std::size_t o = 0; o < nlossy; ++o) {
            auto a = s.outcome_tuple(o, true);
            T v(1);
            bool zero = false;
            for (int pi = 0; pi < s.parties && !zero; ++pi) {
                const LdVertex& vx = *parts[pi];
                const T lvl = vx.level_is_max[x[pi]] ? lv_max : lv_min;
                if (a[pi] == s.outcomes[pi])
                    v *= T(1) - lvl;
                else if (a[pi] == vx.outcome[x[pi]])
                    v *= lvl;
                else
                    zero = true;
            }
            table[i * nlossy + o] = zero ? T(0) : v;
        }
    }
    return table;
}

struct VertexBasis {
    std::vector<std::vector<LdVertex>> per_party;
    std::vector<std::vector<const LdVertex*>> products;  // pointers into per_party
    std::vector<std::string> labels;
};

VertexBasis vertex_basis(const Scenario& s, const DetectionBounds& bounds, std::size_t cap) {
    s.validate();
    bounds.validate();
    auto [lv_min, lv_max] = party_levels(bounds, s.parties);

    VertexBasis vb;
    vb.per_party.reserve(s.parties);
    std::size_t count = 1;
    for (int pi = 0; pi < s.parties; ++pi) {
        vb.per_party.push_back(
            enumerate_ld_vertices(s.inputs[pi], s.outcomes[pi], lv_min, lv_max));
        count *= vb.per_party.back().size();
        if (count > cap)
            throw TooLargeError("ldl vertex enumeration exceeds cap of " + std::to_string(cap));
    }

    std::vector<std::size_t> idx(s.parties, 0);
    while (true) {
        std::vector<const LdVertex*> parts(s.parties);
        std::string label;
        for (int pi = 0; pi < s.parties; ++pi) {
            parts[pi] = &vb.per_party[pi][idx[pi]];
            if (pi) label += '|';
            for (std::size_t x = 0; x < parts[pi]->outcome.size(); ++x) {
                if (x) label += ',';
                label += std::to_string(parts[pi]->outcome[x]);
                label += parts[pi]->level_is_max[x] ? '+' : '-';
            }
        }
        vb.products.push_back(std::move(parts));
        vb.labels.push_back(std::move(label));
        int pi = s.parties - 1;
        while (pi >= 0 && ++idx[pi] == vb.per_party[pi].size()) idx[pi--] = 0;
        if (pi < 0) break;
    }
    return vb;
}

struct LpLayout {
    std::size_t n_vertices = 0;
    std::size_t coord_rows = 0;  // nin * nout equality rows, then one normalization row
    bool has_t = false;
};

template <class T>
std::pair<FeasibilityProblem<T>, LpLayout> build_membership_problem(
    const Scenario& s, const VertexBasis& vb, const Behavior& p_ps,
    const std::optional<EfficiencyMap>& eff, const DetectionBounds& bounds,
    const T& lv_min, const T& lv_max) {
    const std::size_t nin = s.input_tuples();
    const std::size_t nout = s.outcome_tuples(false);
    const std::size_t nlossy = s.outcome_tuples(true);
    const std::size_t K = vb.products.size();

    LpLayout lay;
    lay.n_vertices = K;
    lay.coord_rows = nin * nout;
    lay.has_t = !eff.has_value();

    FeasibilityProblem<T> p;
    p.vars = K + (lay.has_t ? 1 : 0);
    const std::size_t rows = lay.coord_rows + 1;
    p.A.assign(rows * p.vars, T(0));
    p.b.assign(rows, T(0));
    p.bounds.resize(p.vars);
    for (std::size_t j = 0; j < K; ++j) p.bounds[j].lo = T(0);

    for (std::size_t j = 0; j < K; ++j) {
        auto table = product_vertex_table<T>(s, vb.products[j], lv_min, lv_max);
        for (std::size_t i = 0; i < nin; ++i)
            for (std::size_t o = 0; o < nout; ++o) {
                auto a = s.outcome_tuple(o, false);
                std::size_t row = i * nout + o;
                p.A[row * p.vars + j] = table[i * nlossy + s.outcome_index(a, true)];
            }
        p.A[lay.coord_rows * p.vars + j] = T(1);  // normalization
    }
    p.b[lay.coord_rows] = T(1);

    if (lay.has_t) {
        // Common unknown eta_xy: sum_j w_j V_j - t P = 0 per coordinate.
        const std::size_t tcol = K;
        for (std::size_t i = 0; i < nin; ++i)
            for (std::size_t o = 0; o < nout; ++o)
                p.A[(i * nout + o) * p.vars + tcol] = -T(p_ps.at(i, o));
        T tmin(1), tmax(1);
        for (int pi = 0; pi < s.parties; ++pi) {
            tmin *= lv_min;
            tmax *= lv_max;
        }
        p.bounds[tcol].lo = tmin;
        p.bounds[tcol].hi = tmax;
    } else {
        for (std::size_t i = 0; i < nin; ++i)
            for (std::size_t o = 0; o < nout; ++o)
                p.b[i * nout + o] = T(eff->eta[i]) * T(p_ps.at(i, o));
    }
    return {std::move(p), lay};
}

template <class T>
T certificate_margin(const FeasibilityProblem<T>& p, const std::vector<T>& dual) {
    T box_max(0);
    for (std::size_t j = 0; j < p.vars; ++j) {
        T cj(0);
        for (std::size_t i = 0; i < p.rows(); ++i) cj += dual[i] * p.A[i * p.vars + j];
        const auto& bd = p.bounds[j];
        if (cj > T(0) && bd.hi)
            box_max += cj * *bd.hi;
        else if (cj < T(0) && bd.lo)
            box_max += cj * *bd.lo;
        // Positive cj on an unbounded direction is caught by verification.
    }
    T ytb(0);
    for (std::size_t i = 0; i < p.rows(); ++i) ytb += dual[i] * p.b[i];
    return ytb - box_max;
}

template <class T>
MembershipResult run_membership(const FeasibilityProblem<T>& p, const LpLayout& lay,
                                const LpOptions<T>& lp_opts) {
    auto cert = solve_feasibility(p, lp_opts);
    MembershipResult r;
    r.status = cert.status;
    if (cert.status == LpStatus::Unsolved) return r;
    std::string why;
    r.verified = verify_certificate(p, cert, lp_opts, &why);
    if (!r.verified) r.note = "certificate verification failed: " + why;
    if (cert.status == LpStatus::Feasible) {
        r.weights.reserve(lay.n_vertices);
        for (std::size_t j = 0; j < lay.n_vertices; ++j)
            r.weights.push_back(static_cast<double>(cert.point[j]));
        if (lay.has_t) r.t = static_cast<double>(cert.point[lay.n_vertices]);
    } else {
        // Normalize for readability; scaling keeps Farkas validity.
        T scale(0);
        for (const auto& v : cert.dual) {
            T a = v < T(0) ? T(-v) : v;
            if (a > scale) scale = a;
        }
        if (scale == T(0)) scale = T(1);
        for (auto& v : cert.dual) v /= scale;

        if constexpr (std::is_same_v<T, double>) {
            // Phase-1 can land on a nearly-degenerate Farkas vector; look
            // for one with a comfortable margin before reporting.
            if (certificate_margin(p, cert.dual) < 1e-6) {
                for (double delta : {1e-7, 1e-8}) {
                    std::vector<double> y = strengthen_farkas(p, delta, lp_opts);
                    if (y.empty()) continue;
                    double ymax = 0.0;
                    for (double v : y) ymax = std::max(ymax, std::abs(v));
                    if (ymax > 0.0)
                        for (double& v : y) v /= ymax;
                    LpCertificate<double> polished{LpStatus::Infeasible, {}, y};
                    std::string pwhy;
                    if (verify_certificate(p, polished, lp_opts, &pwhy) &&
                        certificate_margin(p, y) > certificate_margin(p, cert.dual)) {
                        cert.dual = std::move(y);
                        r.verified = true;
                        r.note.clear();
                    }
                    break;
                }
            }
        }

        // Farkas validity is scale-invariant; keep the reported margin clear
        // of the verification threshold rather than letting unit-norm
        // normalization shrink it on nearly-degenerate instances.
        if constexpr (std::is_same_v<T, double>) {
            double mg = certificate_margin(p, cert.dual);
            if (mg > 0.0 && mg < 1e-8) {
                double f = 1e-8 / mg;
                for (auto& v : cert.dual) v *= f;
            }
        }

        r.dual.reserve(cert.dual.size());
        for (const auto& v : cert.dual) r.dual.push_back(static_cast<double>(v));
        r.margin = static_cast<double>(certificate_margin(p, cert.dual));
    }
    return r;
}

}  // namespace

std::vector<LdVertex> enumerate_ld_vertices(int n_inputs, int n_outcomes,
                                            double level_min, double level_max) {
    if (n_inputs < 1 || n_outcomes < 1)
        throw ValidationError("enumerate_ld_vertices: bad scenario");
    const bool dedup = level_min == level_max;
    const int choices = dedup ? n_outcomes : 2 * n_outcomes;
    std::vector<LdVertex> out;
    std::vector<int> c(n_inputs, 0);
    while (true) {
        LdVertex v;
        v.outcome.resize(n_inputs);
        v.level_is_max.resize(n_inputs);
        for (int x = 0; x < n_inputs; ++x) {
            v.outcome[x] = c[x] / (dedup ? 1 : 2);
            v.level_is_max[x] = dedup ? true : (c[x] % 2 == 1);
        }
        out.push_back(std::move(v));
        int x = n_inputs - 1;
        while (x >= 0 && ++c[x] == choices) c[x--] = 0;
        if (x < 0) break;
    }
    return out;
}

VertexSet enumerate_ldl_vertices(const Scenario& s, const DetectionBounds& bounds,
                                 std::size_t cap) {
    auto vb = vertex_basis(s, bounds, cap);
    auto [lv_min, lv_max] = party_levels(bounds, s.parties);
    VertexSet vs;
    vs.scenario = s;
    vs.bounds = bounds;
    vs.labels = vb.labels;
    vs.tables.reserve(vb.products.size());
    for (const auto& parts : vb.products)
        vs.tables.push_back(product_vertex_table<double>(s, parts, lv_min, lv_max));
    return vs;
}

std::pair<double, double> joint_detection_range(const Scenario& s, const DetectionBounds& b) {
    b.validate();
    if (b.convention == Convention::Joint) return {b.eta_min, b.eta_max};
    return {std::pow(b.eta_min, s.parties), std::pow(b.eta_max, s.parties)};
}

MembershipResult membership_ldlps(const Behavior& p_ps, const std::optional<EfficiencyMap>& eff,
                                  const DetectionBounds& bounds, const MembershipOptions& opts) {
    p_ps.validate(kEpsIngest);
    bounds.validate();
    const Scenario& s = p_ps.scenario;
    if (eff) {
        eff->validate();
        if (!(eff->scenario == s)) throw ShapeError("membership_ldlps: scenario mismatch");
    }

    auto vb = vertex_basis(s, bounds, opts.vertex_cap);
    auto [lv_min_d, lv_max_d] = party_levels(bounds, s.parties);

    std::string range_note;
    if (eff) {
        auto [lo, hi] = joint_detection_range(s, bounds);
        for (double e : eff->eta)
            if (e < lo - 1e-12 || e > hi + 1e-12) {
                range_note = "efficiency map outside the achievable joint detection range [" +
                             std::to_string(lo) + ", " + std::to_string(hi) + "]";
                break;
            }
    }

    MembershipResult r;
    if (opts.exact) {
        auto [p, lay] = build_membership_problem<Rational>(s, vb, p_ps, eff, bounds,
                                                           Rational(lv_min_d), Rational(lv_max_d));
        r = run_membership(p, lay, exact_lp_options());
    } else {
        auto [p, lay] = build_membership_problem<double>(s, vb, p_ps, eff, bounds,
                                                         lv_min_d, lv_max_d);
        r = run_membership(p, lay, opts.lp);
    }
    r.convention = bounds.convention;
    r.exact = opts.exact;
    if (!range_note.empty()) {
        if (!r.note.empty()) r.note += "; ";
        r.note += range_note;
    }
    return r;
}

double dual_value_on_vertex(const MembershipResult& r, const Behavior& p_ps,
                            const Scenario& s, const std::vector<double>& vertex_table) {
    const std::size_t nin = s.input_tuples();
    const std::size_t nout = s.outcome_tuples(false);
    const std::size_t nlossy = s.outcome_tuples(true);
    if (r.dual.size() != nin * nout + 1)
        throw ShapeError("dual_value_on_vertex: dual length mismatch");
    double v = 0.0;
    for (std::size_t i = 0; i < nin; ++i)
        for (std::size_t o = 0; o < nout; ++o) {
            auto a = s.outcome_tuple(o, false);
            v += r.dual[i * nout + o] * vertex_table[i * nlossy + s.outcome_index(a, true)];
        }
    v += r.dual[nin * nout];  // normalization-row coefficient
    (void)p_ps;
    return v;
}

}  // namespace ldlc
