#include "ldlcert/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace ldlc {

namespace {

void check_prob_rows(const Scenario& s, const std::vector<double>& p, std::size_t ncols,
                     double eps, const char* what) {
    s.validate();
    const std::size_t nin = s.input_tuples();
    if (p.size() != nin * ncols)
        throw ValidationError(std::string(what) + ": table size mismatch");
    for (std::size_t i = 0; i < nin; ++i) {
        double row = 0.0;
        for (std::size_t o = 0; o < ncols; ++o) {
            double v = p[i * ncols + o];
            if (v < -eps || v > 1.0 + eps)
                throw ValidationError(std::string(what) + ": entry outside [0,1]");
            row += v;
        }
        if (std::abs(row - 1.0) > eps)
            throw ValidationError(std::string(what) + ": row " + std::to_string(i) +
                                  " sums to " + std::to_string(row));
    }
}

}  // namespace

void Behavior::validate(double eps) const {
    check_prob_rows(scenario, p, scenario.outcome_tuples(false), eps, "behavior");
}

void LossyBehavior::validate(double eps) const {
    check_prob_rows(scenario, p, scenario.outcome_tuples(true), eps, "lossy behavior");
}

void JointDistribution::validate(double eps) const {
    scenario.validate();
    const std::size_t n = scenario.input_tuples() * scenario.outcome_tuples(false);
    if (p.size() != n) throw ValidationError("joint distribution: table size mismatch");
    double total = 0.0;
    for (double v : p) {
        if (v < -eps || v > 1.0 + eps)
            throw ValidationError("joint distribution: entry outside [0,1]");
        total += v;
    }
    if (std::abs(total - 1.0) > eps)
        throw ValidationError("joint distribution: total mass " + std::to_string(total));
    if (uncertainty && uncertainty->size() != n)
        throw ValidationError("joint distribution: uncertainty size mismatch");
}

void EfficiencyMap::validate() const {
    scenario.validate();
    if (eta.size() != scenario.input_tuples())
        throw ValidationError("efficiency map: size mismatch");
    for (double e : eta)
        if (!(e > 0.0) || e > 1.0)
            throw InvalidEfficiencyError("efficiency map: every eta must be in (0,1]");
}

JointDistribution from_counts(const Scenario& s, const std::vector<std::int64_t>& counts,
                              const FromCountsOptions& opts) {
    s.validate();
    const std::size_t n = s.input_tuples() * s.outcome_tuples(false);
    if (counts.size() != n) throw ShapeError("from_counts: counts size mismatch");
    std::int64_t total = 0;
    for (std::int64_t c : counts) {
        if (c < 0) throw ValidationError("from_counts: negative count");
        total += c;
    }
    if (total == 0) throw EmptyDataError("from_counts: all counts are zero");

    JointDistribution j;
    j.scenario = s;
    j.p.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        j.p[k] = static_cast<double>(counts[k]) / static_cast<double>(total);

    std::vector<double> err(n);
    if (opts.bootstrap_resamples > 0) {
        // Multinomial bootstrap over the whole count table.
        std::mt19937_64 rng(opts.seed);
        std::discrete_distribution<std::size_t> cell(j.p.begin(), j.p.end());
        std::vector<double> mean(n, 0.0), m2(n, 0.0), resample(n);
        for (int r = 0; r < opts.bootstrap_resamples; ++r) {
            std::fill(resample.begin(), resample.end(), 0.0);
            for (std::int64_t t = 0; t < total; ++t) resample[cell(rng)] += 1.0;
            for (std::size_t k = 0; k < n; ++k) {
                double v = resample[k] / static_cast<double>(total);
                double d = v - mean[k];
                mean[k] += d / (r + 1);
                m2[k] += d * (v - mean[k]);
            }
        }
        for (std::size_t k = 0; k < n; ++k)
            err[k] = opts.bootstrap_resamples > 1
                         ? std::sqrt(m2[k] / (opts.bootstrap_resamples - 1))
                         : 0.0;
    } else {
        for (std::size_t k = 0; k < n; ++k)
            err[k] = std::sqrt(j.p[k] * (1.0 - j.p[k]) / static_cast<double>(total));
    }
    j.uncertainty = std::move(err);
    return j;
}

Conditioned condition_on_inputs(const JointDistribution& j) {
    const std::size_t nin = j.scenario.input_tuples();
    const std::size_t nout = j.scenario.outcome_tuples(false);
    Conditioned c;
    c.behavior.scenario = j.scenario;
    c.behavior.p.resize(nin * nout);
    c.input_distribution.resize(nin);
    for (std::size_t i = 0; i < nin; ++i) {
        double block = 0.0;
        for (std::size_t o = 0; o < nout; ++o) block += j.at(i, o);
        if (!(block > 0.0)) {
            auto x = j.scenario.input_tuple(i);
            std::string xs;
            for (int v : x) xs += std::to_string(v);
            throw ZeroInputMassError("condition_on_inputs: zero mass for input tuple (" + xs + ")");
        }
        c.input_distribution[i] = block;
        for (std::size_t o = 0; o < nout; ++o) c.behavior.at(i, o) = j.at(i, o) / block;
    }
    return c;
}

JointDistribution recombine(const Behavior& b, const std::vector<double>& input_distribution) {
    const std::size_t nin = b.scenario.input_tuples();
    const std::size_t nout = b.scenario.outcome_tuples(false);
    if (input_distribution.size() != nin)
        throw ShapeError("recombine: input distribution size mismatch");
    JointDistribution j;
    j.scenario = b.scenario;
    j.p.resize(nin * nout);
    for (std::size_t i = 0; i < nin; ++i)
        for (std::size_t o = 0; o < nout; ++o)
            j.at(i, o) = b.at(i, o) * input_distribution[i];
    return j;
}

Postselected postselect(const LossyBehavior& l) {
    const Scenario& s = l.scenario;
    const std::size_t nin = s.input_tuples();
    const std::size_t nout = s.outcome_tuples(false);
    const std::size_t nlossy = s.outcome_tuples(true);
    Postselected r;
    r.behavior.scenario = s;
    r.behavior.p.resize(nin * nout);
    r.efficiencies.scenario = s;
    r.efficiencies.eta.resize(nin);
    for (std::size_t i = 0; i < nin; ++i) {
        double detected = 0.0;
        for (std::size_t lo = 0; lo < nlossy; ++lo) {
            auto a = s.outcome_tuple(lo, true);
            bool all = true;
            for (int pi = 0; pi < s.parties; ++pi)
                if (a[pi] == s.outcomes[pi]) { all = false; break; }
            if (all) detected += l.at(i, lo);
        }
        if (!(detected > 0.0)) {
            auto x = s.input_tuple(i);
            std::string xs;
            for (int v : x) xs += std::to_string(v);
            throw NoDetectionsError("postselect: no detected mass for input tuple (" + xs + ")");
        }
        r.efficiencies.eta[i] = detected;
        for (std::size_t o = 0; o < nout; ++o) {
            auto a = s.outcome_tuple(o, false);
            r.behavior.at(i, o) = l.at(i, s.outcome_index(a, true)) / detected;
        }
    }
    return r;
}

std::vector<double> marginal(const Behavior& b, int party) {
    const Scenario& s = b.scenario;
    if (party < 0 || party >= s.parties) throw ShapeError("marginal: bad party index");
    const std::size_t nin = s.input_tuples();
    const std::size_t nout = s.outcome_tuples(false);
    const int m = s.outcomes[party];
    std::vector<double> r(nin * m, 0.0);
    for (std::size_t i = 0; i < nin; ++i)
        for (std::size_t o = 0; o < nout; ++o) {
            auto a = s.outcome_tuple(o, false);
            r[i * m + a[party]] += b.at(i, o);
        }
    return r;
}

double signaling_measure(const Behavior& b) {
    const Scenario& s = b.scenario;
    const std::size_t nin = s.input_tuples();
    double worst = 0.0;
    for (int party = 0; party < s.parties; ++party) {
        auto marg = marginal(b, party);
        const int m = s.outcomes[party];
        // Group input tuples by this party's own input; compare across the rest.
        for (std::size_t i = 0; i < nin; ++i) {
            auto xi = s.input_tuple(i);
            for (std::size_t k = i + 1; k < nin; ++k) {
                auto xk = s.input_tuple(k);
                if (xi[party] != xk[party]) continue;
                for (int a = 0; a < m; ++a)
                    worst = std::max(worst, std::abs(marg[i * m + a] - marg[k * m + a]));
            }
        }
    }
    return worst;
}

JointDistribution renormalized(const JointDistribution& j) {
    double total = std::accumulate(j.p.begin(), j.p.end(), 0.0);
    if (!(total > 0.0)) throw EmptyDataError("renormalized: zero total mass");
    JointDistribution r = j;
    for (double& v : r.p) v /= total;
    if (r.uncertainty)
        for (double& e : *r.uncertainty) e /= total;
    return r;
}

}  // namespace ldlc
