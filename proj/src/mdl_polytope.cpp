#include "ldlcert/mdl_polytope.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ldlc {

namespace {

bool close(double a, double b) { return std::abs(a - b) <= 1e-12; }

}  // namespace

std::vector<std::vector<double>> enumerate_input_dist_vertices(std::size_t k, double l, double h) {
    if (k == 0) throw ValidationError("input dist vertices: empty scenario");
    std::vector<std::vector<double>> out;
    auto push_unique = [&](std::vector<double> v) {
        for (const auto& u : out) {
            bool same = true;
            for (std::size_t i = 0; i < k; ++i)
                if (!close(u[i], v[i])) { same = false; break; }
            if (same) return;
        }
        out.push_back(std::move(v));
    };

    // Pattern: each coordinate at l or h, except at most one free remainder.
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) sum += (mask >> i & 1) ? h : l;
        if (close(sum, 1.0)) {
            std::vector<double> v(k);
            for (std::size_t i = 0; i < k; ++i) v[i] = (mask >> i & 1) ? h : l;
            push_unique(std::move(v));
        }
        for (std::size_t f = 0; f < k; ++f) {
            double rest = sum - ((mask >> f & 1) ? h : l);
            double r = 1.0 - rest;
            if (r < l - 1e-12 || r > h + 1e-12) continue;
            std::vector<double> v(k);
            for (std::size_t i = 0; i < k; ++i) v[i] = (mask >> i & 1) ? h : l;
            v[f] = std::clamp(r, l, h);
            push_unique(std::move(v));
        }
    }
    return out;
}

MdlVertexSet enumerate_mdl_vertices(const Scenario& s, const MdlBounds& bounds, std::size_t cap) {
    s.validate();
    const std::size_t nin = s.input_tuples();
    bounds.validate(nin);
    const std::size_t nout = s.outcome_tuples(false);

    auto qs = enumerate_input_dist_vertices(nin, bounds.l, bounds.h);

    // Deterministic response functions per party, combined across parties.
    std::size_t n_det = 1;
    for (int pi = 0; pi < s.parties; ++pi)
        for (int x = 0; x < s.inputs[pi]; ++x) n_det *= s.outcomes[pi];
    if (qs.size() * n_det > cap)
        throw TooLargeError("mdl vertex enumeration exceeds cap of " + std::to_string(cap));

    // Encode a strategy as, per party, an outcome for each input.
    std::vector<std::vector<std::vector<int>>> party_strats(s.parties);
    for (int pi = 0; pi < s.parties; ++pi) {
        std::vector<int> c(s.inputs[pi], 0);
        while (true) {
            party_strats[pi].push_back(c);
            int x = s.inputs[pi] - 1;
            while (x >= 0 && ++c[x] == s.outcomes[pi]) c[x--] = 0;
            if (x < 0) break;
        }
    }

    MdlVertexSet vs;
    vs.scenario = s;
    vs.bounds = bounds;
    std::vector<std::size_t> si(s.parties, 0);
    while (true) {
        for (std::size_t qi = 0; qi < qs.size(); ++qi) {
            std::vector<double> table(nin * nout, 0.0);
            for (std::size_t i = 0; i < nin; ++i) {
                auto x = s.input_tuple(i);
                std::vector<int> a(s.parties);
                for (int pi = 0; pi < s.parties; ++pi)
                    a[pi] = party_strats[pi][si[pi]][x[pi]];
                table[i * nout + s.outcome_index(a, false)] = qs[qi][i];
            }
            std::string label = "q" + std::to_string(qi);
            for (int pi = 0; pi < s.parties; ++pi) {
                label += pi == 0 ? ":" : "|";
                for (int v : party_strats[pi][si[pi]]) label += std::to_string(v);
            }
            vs.tables.push_back(std::move(table));
            vs.labels.push_back(std::move(label));
        }
        int pi = s.parties - 1;
        while (pi >= 0 && ++si[pi] == party_strats[pi].size()) si[pi--] = 0;
        if (pi < 0) break;
    }
    return vs;
}

namespace {

template <class T>
MembershipResult membership_mdl_impl(const JointDistribution& j, const MdlVertexSet& vs,
                                     const LpOptions<T>& lp_opts) {
    const Scenario& s = j.scenario;
    const std::size_t nin = s.input_tuples();
    const std::size_t nout = s.outcome_tuples(false);
    const std::size_t K = vs.tables.size();
    const std::size_t coord_rows = nin * nout;

    FeasibilityProblem<T> p;
    p.vars = K;
    p.A.assign((coord_rows + 1) * K, T(0));
    p.b.assign(coord_rows + 1, T(0));
    p.bounds.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        p.bounds[k].lo = T(0);
        for (std::size_t r = 0; r < coord_rows; ++r) p.A[r * K + k] = T(vs.tables[k][r]);
        p.A[coord_rows * K + k] = T(1);
    }
    for (std::size_t r = 0; r < coord_rows; ++r) p.b[r] = T(j.p[r]);
    p.b[coord_rows] = T(1);

    auto cert = solve_feasibility(p, lp_opts);
    MembershipResult res;
    res.status = cert.status;
    if (cert.status == LpStatus::Unsolved) return res;
    std::string why;
    res.verified = verify_certificate(p, cert, lp_opts, &why);
    if (!res.verified) res.note = "certificate verification failed: " + why;
    if (cert.status == LpStatus::Feasible) {
        for (const auto& v : cert.point) res.weights.push_back(static_cast<double>(v));
    } else {
        T scale(0);
        for (const auto& v : cert.dual) {
            T a = v < T(0) ? T(-v) : v;
            if (a > scale) scale = a;
        }
        if (scale == T(0)) scale = T(1);
        for (auto& v : cert.dual) v /= scale;
        // All variables sit at lower bound 0, so the Farkas margin is y^T b.
        auto ytb_of = [&](const std::vector<T>& y) {
            T v(0);
            for (std::size_t r = 0; r < coord_rows + 1; ++r) v += y[r] * p.b[r];
            return v;
        };

        if constexpr (std::is_same_v<T, double>) {
            // Phase-1 can land on a nearly-degenerate Farkas vector; look
            // for one with a comfortable margin before reporting.
            if (ytb_of(cert.dual) < 1e-6) {
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
                        ytb_of(y) > ytb_of(cert.dual)) {
                        cert.dual = std::move(y);
                        res.verified = true;
                        res.note.clear();
                    }
                    break;
                }
            }
        }

        // Farkas validity is scale-invariant; keep the reported margin clear
        // of the verification threshold rather than letting unit-norm
        // normalization shrink it on nearly-degenerate instances.
        if constexpr (std::is_same_v<T, double>) {
            double mg = static_cast<double>(ytb_of(cert.dual));
            if (mg > 0.0 && mg < 1e-8) {
                double f = 1e-8 / mg;
                for (auto& v : cert.dual) v *= f;
            }
        }

        res.margin = static_cast<double>(ytb_of(cert.dual));
        for (const auto& v : cert.dual) res.dual.push_back(static_cast<double>(v));
    }
    return res;
}

}  // namespace

MembershipResult membership_mdl(const JointDistribution& j, const MdlBounds& bounds,
                                const MembershipOptions& opts) {
    j.validate();
    auto vs = enumerate_mdl_vertices(j.scenario, bounds, opts.vertex_cap);
    MembershipResult r = opts.exact ? membership_mdl_impl<Rational>(j, vs, exact_lp_options())
                                    : membership_mdl_impl<double>(j, vs, opts.lp);
    r.exact = opts.exact;
    return r;
}

double mdl_hardy_value(const JointDistribution& j, const MdlBounds& bounds) {
    const Scenario& s = j.scenario;
    if (!s.is_binary_two_party())
        throw ShapeError("mdl_hardy_value: needs the binary two-party scenario");
    bounds.validate(s.input_tuples());
    auto at = [&](int a, int b, int x, int y) {
        return j.at(s.input_index(std::array{x, y}), s.outcome_index(std::array{a, b}, false));
    };
    return bounds.l * at(0, 0, 0, 0) -
           bounds.h * (at(0, 1, 0, 1) + at(1, 0, 1, 0) + at(0, 0, 1, 1));
}

double mdl_dual_value_on_vertex(const MembershipResult& r, const Scenario& s,
                                const std::vector<double>& vertex_table) {
    const std::size_t coord_rows = s.input_tuples() * s.outcome_tuples(false);
    if (r.dual.size() != coord_rows + 1)
        throw ShapeError("mdl_dual_value_on_vertex: dual length mismatch");
    double v = r.dual[coord_rows];
    for (std::size_t k = 0; k < coord_rows; ++k) v += r.dual[k] * vertex_table[k];
    return v;
}

}  // namespace ldlc
