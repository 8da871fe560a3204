#include "ldlcert/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace ldlc {

TransformResult transform(const BridgeParams& p) {
    p.detection.validate();
    if (!(p.detection.eta_min > 0.0))
        throw DegenerateBoundsError("transform: eta_min must be positive");
    double r = p.detection.eta_min / p.detection.eta_max;
    if (p.detection.convention == Convention::PerParty) r *= r;
    TransformResult out;
    out.bounds.l = r * p.mdl.l;
    out.bounds.h = p.mdl.h / r;
    if (out.bounds.l < 0.0) {
        out.bounds.l = 0.0;
        out.clamped_l = true;
    }
    if (out.bounds.h > 1.0) {
        out.bounds.h = 1.0;
        out.clamped_h = true;
    }
    return out;
}

namespace {

struct MdldlModel {
    // lambda-indexed: weight, input distribution, per-party detection
    // probabilities and outcome distributions per input.
    std::vector<double> rho;
    std::vector<std::vector<double>> q;                     // [lambda][input tuple]
    std::vector<std::array<std::vector<double>, 2>> det;    // [lambda][party][input]
    std::vector<std::array<std::vector<double>, 2>> out;    // [lambda][party][input*m + a]
};

MdldlModel sample_model(const Scenario& s, const BridgeParams& p, int lambda_support,
                        std::mt19937_64& rng) {
    const std::size_t nin = s.input_tuples();
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Per-party detection range realizing the declared convention.
    double d_lo = p.detection.eta_min, d_hi = p.detection.eta_max;
    if (p.detection.convention == Convention::Joint) {
        d_lo = std::sqrt(d_lo);
        d_hi = std::sqrt(d_hi);
    }

    auto q_vertices = enumerate_input_dist_vertices(nin, p.mdl.l, p.mdl.h);
    std::uniform_int_distribution<std::size_t> pick(0, q_vertices.size() - 1);

    MdldlModel m;
    m.rho.resize(lambda_support);
    double rho_sum = 0.0;
    for (double& w : m.rho) rho_sum += (w = unit(rng) + 1e-6);
    for (double& w : m.rho) w /= rho_sum;

    for (int lam = 0; lam < lambda_support; ++lam) {
        // Interior point of the input-distribution polytope: a random mix of
        // two vertices pulled toward the uniform point.
        const auto& v1 = q_vertices[pick(rng)];
        const auto& v2 = q_vertices[pick(rng)];
        double mix = unit(rng), gamma = unit(rng);
        std::vector<double> q(nin);
        for (std::size_t i = 0; i < nin; ++i) {
            double vert = mix * v1[i] + (1.0 - mix) * v2[i];
            q[i] = gamma / nin + (1.0 - gamma) * vert;
        }
        m.q.push_back(std::move(q));

        std::array<std::vector<double>, 2> det, out;
        for (int pi = 0; pi < 2; ++pi) {
            det[pi].resize(s.inputs[pi]);
            out[pi].assign(static_cast<std::size_t>(s.inputs[pi]) * s.outcomes[pi], 0.0);
            for (int x = 0; x < s.inputs[pi]; ++x) {
                det[pi][x] = d_lo + (d_hi - d_lo) * unit(rng);
                double norm = 0.0;
                for (int a = 0; a < s.outcomes[pi]; ++a)
                    norm += (out[pi][x * s.outcomes[pi] + a] = unit(rng) + 1e-9);
                for (int a = 0; a < s.outcomes[pi]; ++a) out[pi][x * s.outcomes[pi] + a] /= norm;
            }
        }
        m.det.push_back(std::move(det));
        m.out.push_back(std::move(out));
    }
    return m;
}

/// Postselected joint distribution P(abxy | both detected).
JointDistribution postselected_joint(const Scenario& s, const MdldlModel& m) {
    const std::size_t nin = s.input_tuples();
    const std::size_t nout = s.outcome_tuples(false);
    JointDistribution j;
    j.scenario = s;
    j.p.assign(nin * nout, 0.0);
    double z = 0.0;
    for (std::size_t lam = 0; lam < m.rho.size(); ++lam)
        for (std::size_t i = 0; i < nin; ++i) {
            auto x = s.input_tuple(i);
            double base = m.rho[lam] * m.q[lam][i] * m.det[lam][0][x[0]] * m.det[lam][1][x[1]];
            z += base;
            for (std::size_t o = 0; o < nout; ++o) {
                auto a = s.outcome_tuple(o, false);
                j.p[i * nout + o] += base * m.out[lam][0][x[0] * s.outcomes[0] + a[0]] *
                                     m.out[lam][1][x[1] * s.outcomes[1] + a[1]];
            }
        }
    for (double& v : j.p) v /= z;
    return j;
}

/// Worst-case margin of P(xy|det,lambda) inside [l', h'], plus the analytic
/// conditioning identity re-checked on concrete numbers.
double model_slack(const Scenario& s, const MdldlModel& m, const MdlBounds& transformed) {
    const std::size_t nin = s.input_tuples();
    double slack = std::numeric_limits<double>::infinity();
    for (std::size_t lam = 0; lam < m.rho.size(); ++lam) {
        double p_det = 0.0;
        for (std::size_t i = 0; i < nin; ++i) {
            auto x = s.input_tuple(i);
            p_det += m.q[lam][i] * m.det[lam][0][x[0]] * m.det[lam][1][x[1]];
        }
        double total = 0.0;
        for (std::size_t i = 0; i < nin; ++i) {
            auto x = s.input_tuple(i);
            double cond = m.det[lam][0][x[0]] * m.det[lam][1][x[1]] * m.q[lam][i] / p_det;
            total += cond;
            slack = std::min(slack, std::min(cond - transformed.l, transformed.h - cond));
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw ValidationError("bridge: conditioning identity violated numerically");
    }
    return slack;
}

std::string dump_model(const MdldlModel& m) {
    std::ostringstream os;
    os.precision(17);
    os << "{\"rho\":[";
    for (std::size_t i = 0; i < m.rho.size(); ++i) os << (i ? "," : "") << m.rho[i];
    os << "],\"q\":[";
    for (std::size_t lam = 0; lam < m.q.size(); ++lam) {
        os << (lam ? ",[" : "[");
        for (std::size_t i = 0; i < m.q[lam].size(); ++i) os << (i ? "," : "") << m.q[lam][i];
        os << "]";
    }
    os << "],\"det\":[";
    for (std::size_t lam = 0; lam < m.det.size(); ++lam) {
        os << (lam ? ",[" : "[");
        for (int pi = 0; pi < 2; ++pi) {
            os << (pi ? ",[" : "[");
            for (std::size_t x = 0; x < m.det[lam][pi].size(); ++x)
                os << (x ? "," : "") << m.det[lam][pi][x];
            os << "]";
        }
        os << "]";
    }
    os << "]}";
    return os.str();
}

}  // namespace

BridgeReport verify_bridge(int trials, std::uint64_t seed, const Scenario& s,
                           const BridgeParams& params, int lambda_support, int threads) {
    s.validate();
    if (s.parties != 2) throw ShapeError("verify_bridge: two parties required");
    params.mdl.validate(s.input_tuples());
    auto transformed = transform(params);

    BridgeReport rep;
    rep.trials = trials;
    rep.convention = params.detection.convention;
    rep.params = params;
    rep.transformed = transformed.bounds;
    rep.seed = seed;
    rep.min_slack = std::numeric_limits<double>::infinity();

    struct TrialOutcome {
        bool failed = false;
        double slack = 0.0;
        std::string dump;
    };
    std::vector<TrialOutcome> outcomes(trials);

    auto run_range = [&](int begin, int end) {
        for (int t = begin; t < end; ++t) {
            std::seed_seq sseq{seed, static_cast<std::uint64_t>(t)};
            std::mt19937_64 rng(sseq);
            auto model = sample_model(s, params, lambda_support, rng);
            auto joint = postselected_joint(s, model);
            outcomes[t].slack = model_slack(s, model, transformed.bounds);
            auto res = membership_mdl(joint, transformed.bounds);
            if (res.status != LpStatus::Feasible || !res.verified) {
                outcomes[t].failed = true;
                outcomes[t].dump = dump_model(model);
            }
        }
    };

    threads = std::max(1, threads);
    if (threads == 1 || trials < 2) {
        run_range(0, trials);
    } else {
        std::vector<std::thread> pool;
        int chunk = (trials + threads - 1) / threads;
        for (int k = 0; k < threads; ++k) {
            int b = k * chunk, e = std::min(trials, (k + 1) * chunk);
            if (b < e) pool.emplace_back(run_range, b, e);
        }
        for (auto& th : pool) th.join();
    }

    for (const auto& o : outcomes) {
        rep.min_slack = std::min(rep.min_slack, o.slack);
        if (o.failed) {
            ++rep.failures;
            rep.failure_dumps.push_back(o.dump);
        }
    }
    return rep;
}

}  // namespace ldlc
