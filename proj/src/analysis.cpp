#include "ldlcert/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace ldlc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_binary(const Scenario& s, const char* what) {
    if (!s.is_binary_two_party()) throw ShapeError(std::string(what) + ": needs 2x2x2 scenario");
}

// (input tuple, outcome tuple) index pairs of the four Hardy terms,
// in (a b | x y) notation: (00|00), (01|01), (10|10), (00|11).
struct TermIndex {
    std::size_t in, out;
};

std::array<TermIndex, 4> hardy_indices(const Scenario& s) {
    auto ii = [&](int x, int y) { return s.input_index(std::array{x, y}); };
    auto oi = [&](int a, int b) { return s.outcome_index(std::array{a, b}, false); };
    return {TermIndex{ii(0, 0), oi(0, 0)}, TermIndex{ii(0, 1), oi(0, 1)},
            TermIndex{ii(1, 0), oi(1, 0)}, TermIndex{ii(1, 1), oi(0, 0)}};
}

}  // namespace

HardyTerms extract_hardy_terms(const Behavior& b) {
    require_binary(b.scenario, "extract_hardy_terms");
    auto idx = hardy_indices(b.scenario);
    HardyTerms t;
    t.p1 = b.at(idx[0].in, idx[0].out);
    t.p2 = b.at(idx[1].in, idx[1].out);
    t.p3 = b.at(idx[2].in, idx[2].out);
    t.p4 = b.at(idx[3].in, idx[3].out);
    return t;
}

HardyTerms extract_hardy_terms(const JointDistribution& j) {
    require_binary(j.scenario, "extract_hardy_terms");
    const Scenario& s = j.scenario;
    const std::size_t nout = s.outcome_tuples(false);
    auto idx = hardy_indices(s);

    HardyTerms t;
    double* terms[4] = {&t.p1, &t.p2, &t.p3, &t.p4};
    std::array<double, 4> errs{};
    bool have_errs = j.uncertainty.has_value();
    for (int k = 0; k < 4; ++k) {
        double block = 0.0;
        for (std::size_t o = 0; o < nout; ++o) block += j.at(idx[k].in, o);
        if (!(block > 0.0)) throw ZeroInputMassError("extract_hardy_terms: empty input block");
        double n = j.at(idx[k].in, idx[k].out);
        *terms[k] = n / block;
        if (have_errs) {
            // First-order propagation through n / sum(block), entries independent.
            double var = 0.0;
            for (std::size_t o = 0; o < nout; ++o) {
                double sigma = (*j.uncertainty)[idx[k].in * nout + o];
                double partial = (o == idx[k].out) ? (block - n) / (block * block)
                                                   : -n / (block * block);
                var += partial * partial * sigma * sigma;
            }
            errs[k] = std::sqrt(var);
        }
    }
    if (have_errs) t.errors = errs;
    return t;
}

double ldl_value(const HardyTerms& t, const DetectionBounds& bounds) {
    bounds.validate();
    const double emin = bounds.eta_min, emax = bounds.eta_max;
    return emin * emin * t.p1 - emin * emax * (t.p2 + t.p3) - emax * emax * t.p4;
}

double critical_ratio(const HardyTerms& t) {
    if (!(t.p1 > 0.0)) return kInf;
    const double s = t.p2 + t.p3;
    return (s + std::sqrt(s * s + 4.0 * t.p1 * t.p4)) / (2.0 * t.p1);
}

double required_eta_min(const HardyTerms& t, double eta_max) {
    if (!(eta_max >= 0.0 && eta_max <= 1.0))
        throw ValidationError("required_eta_min: eta_max must be in [0,1]");
    if (eta_max == 0.0) return 0.0;
    return critical_ratio(t) * eta_max;
}

double mdl_ldl_threshold(const JointDistribution& j) {
    require_binary(j.scenario, "mdl_ldl_threshold");
    const Scenario& s = j.scenario;
    auto at = [&](int a, int b, int x, int y) {
        return j.at(s.input_index(std::array{x, y}), s.outcome_index(std::array{a, b}, false));
    };
    double denom = at(0, 0, 0, 0);
    if (!(denom > 0.0)) return kInf;
    return (at(0, 1, 0, 1) + at(1, 0, 1, 0) + at(0, 0, 1, 1)) / denom;
}

namespace {

ValueWithError propagate(const std::array<double, 4>& terms, const std::array<double, 4>& errs,
                         double value, const std::array<double, 4>& partials,
                         const ErrorOptions& opts,
                         double (*recompute)(const std::array<double, 4>&)) {
    bool all_zero = true;
    for (double e : errs)
        if (e != 0.0) all_zero = false;
    if (all_zero) return {value, 0.0};

    if (opts.method == ErrorMethod::Delta) {
        double var = 0.0;
        for (int k = 0; k < 4; ++k)
            if (errs[k] != 0.0) var += partials[k] * partials[k] * errs[k] * errs[k];
        return {value, std::sqrt(var)};
    }

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double mean = 0.0, m2 = 0.0;
    int kept = 0;
    for (int r = 0; r < opts.resamples; ++r) {
        std::array<double, 4> sample;
        for (int k = 0; k < 4; ++k)
            sample[k] = std::clamp(terms[k] + errs[k] * gauss(rng), 0.0, 1.0);
        double v = recompute(sample);
        if (!std::isfinite(v)) continue;
        ++kept;
        double d = v - mean;
        mean += d / kept;
        m2 += d * (v - mean);
    }
    double sd = kept > 1 ? std::sqrt(m2 / (kept - 1)) : 0.0;
    return {value, sd};
}

double recompute_ratio(const std::array<double, 4>& s) {
    return critical_ratio(HardyTerms{s[0], s[1], s[2], s[3], std::nullopt});
}

}  // namespace

ValueWithError critical_ratio_with_error(const HardyTerms& t, const ErrorOptions& opts) {
    double r = critical_ratio(t);
    if (!t.errors || !std::isfinite(r)) return {r, 0.0};

    const double s = t.p2 + t.p3;
    double radicand = std::sqrt(s * s + 4.0 * t.p1 * t.p4);
    std::array<double, 4> partials{};
    if (radicand > 0.0) {
        double ds = (1.0 + s / radicand) / (2.0 * t.p1);
        partials = {t.p4 / (t.p1 * radicand) - r / t.p1, ds, ds, 1.0 / radicand};
    } else {
        partials = {0.0, 1.0 / t.p1, 1.0 / t.p1, 0.0};
    }
    return propagate({t.p1, t.p2, t.p3, t.p4}, *t.errors, r, partials, opts, &recompute_ratio);
}

ValueWithError required_eta_min_with_error(const HardyTerms& t, double eta_max,
                                           const ErrorOptions& opts) {
    auto r = critical_ratio_with_error(t, opts);
    return {r.value * eta_max, r.error * eta_max};
}

ValueWithError mdl_ldl_threshold_with_error(const JointDistribution& j,
                                            const ErrorOptions& opts) {
    double value = mdl_ldl_threshold(j);
    if (!j.uncertainty || !std::isfinite(value)) return {value, 0.0};

    const Scenario& s = j.scenario;
    const std::size_t nout = s.outcome_tuples(false);
    auto cell = [&](int a, int b, int x, int y) {
        return s.input_index(std::array{x, y}) * nout + s.outcome_index(std::array{a, b}, false);
    };
    std::array<std::size_t, 4> cells = {cell(0, 0, 0, 0), cell(0, 1, 0, 1), cell(1, 0, 1, 0),
                                        cell(0, 0, 1, 1)};
    std::array<double, 4> vals, errs;
    for (int k = 0; k < 4; ++k) {
        vals[k] = j.p[cells[k]];
        errs[k] = (*j.uncertainty)[cells[k]];
    }
    double d = vals[0];
    std::array<double, 4> partials = {-value / d, 1.0 / d, 1.0 / d, 1.0 / d};
    auto recompute = [](const std::array<double, 4>& v) {
        return v[0] > 0.0 ? (v[1] + v[2] + v[3]) / v[0] : kInf;
    };
    return propagate(vals, errs, value, partials, opts, recompute);
}

}  // namespace ldlc
