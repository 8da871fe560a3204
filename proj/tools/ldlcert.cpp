// ldlcert: batch certification of Bell-test data against limited-detection
// and measurement-dependent local models.
//
// Exit codes: 0 = success / Feasible, 1 = Infeasible (certificate emitted),
// 2 = parse or argument error, 3 = shape / size / degenerate-parameter error.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ldlcert/analysis.hpp"
#include "ldlcert/bridge.hpp"
#include "ldlcert/correlations.hpp"
#include "ldlcert/errors.hpp"
#include "ldlcert/json_io.hpp"
#include "ldlcert/ldl_polytope.hpp"
#include "ldlcert/mdl_polytope.hpp"
#include "ldlcert/quantum.hpp"
#include "ldlcert/strategies.hpp"
#include "ldlcert/version.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitParse = 2;
constexpr int kExitShape = 3;

double finite_or_string(json& slot, double v) {
    if (std::isfinite(v)) {
        slot = v;
    } else {
        slot = "inf";
    }
    return v;
}

ldlc::Convention parse_convention(const std::string& s) {
    if (s == "per_party" || s == "per-party") return ldlc::Convention::PerParty;
    if (s == "joint") return ldlc::Convention::Joint;
    throw ldlc::ValidationError("unknown convention: " + s);
}

void emit(const json& report, const std::string& out_path) {
    if (!out_path.empty()) ldlc::write_json_file(out_path, report);
}

json flags_json(const std::vector<std::pair<std::string, json>>& kv) {
    json j = json::object();
    for (const auto& [k, v] : kv) j[k] = v;
    return j;
}

int resolve_threads(int threads_flag) {
    if (const char* env = std::getenv("LDLCERT_THREADS")) {
        try {
            int t = std::stoi(env);
            if (t >= 1) return t;
        } catch (const std::exception&) {
        }
    }
    return threads_flag;
}

// ---------------------------------------------------------------- analyze

int cmd_analyze(const std::string& input, std::vector<double> eta_maxes,
                const std::string& convention, bool renormalize, const std::string& errors,
                std::uint64_t seed, int resamples, const std::string& out_path) {
    ldlc::DataFile data = ldlc::load_data_file(input);

    ldlc::JointDistribution joint;
    if (auto* c = std::get_if<ldlc::CountsTable>(&data)) {
        joint = ldlc::from_counts(c->scenario, c->counts);
    } else if (auto* jd = std::get_if<ldlc::JointDistribution>(&data)) {
        joint = *jd;
    } else {
        throw ldlc::ShapeError("analyze: input must be counts or joint_probabilities");
    }
    if (!joint.scenario.is_binary_two_party())
        throw ldlc::ShapeError("analyze: requires the binary two-party scenario");
    if (renormalize) joint = ldlc::renormalized(joint);
    joint.validate(ldlc::kEpsIngest);

    ldlc::ErrorOptions eopts;
    eopts.method = (errors == "bootstrap") ? ldlc::ErrorMethod::Bootstrap : ldlc::ErrorMethod::Delta;
    eopts.seed = seed;
    eopts.resamples = resamples;

    ldlc::HardyTerms terms = ldlc::extract_hardy_terms(joint);
    ldlc::ValueWithError ratio = ldlc::critical_ratio_with_error(terms, eopts);
    ldlc::ValueWithError mdl = ldlc::mdl_ldl_threshold_with_error(joint, eopts);

    json report;
    report["tool"] = "ldlcert";
    report["version"] = ldlc::kVersion;
    report["command"] = "analyze";
    report["flags"] = flags_json({{"input", input},
                                  {"eta_max", eta_maxes},
                                  {"convention", convention},
                                  {"renormalize", renormalize},
                                  {"errors", errors},
                                  {"seed", seed},
                                  {"resamples", resamples}});
    report["assumptions"] = json::array({"equal_eta_xy", convention});
    report["hardy_terms"] = {{"p1", terms.p1}, {"p2", terms.p2}, {"p3", terms.p3}, {"p4", terms.p4}};
    if (terms.errors) {
        report["hardy_terms"]["errors"] = {(*terms.errors)[0], (*terms.errors)[1],
                                           (*terms.errors)[2], (*terms.errors)[3]};
    }
    finite_or_string(report["critical_ratio"], ratio.value);
    finite_or_string(report["mdl_ldl_threshold"], mdl.value);
    report["errors"] = {{"critical_ratio", ratio.error},
                        {"mdl_ldl_threshold", mdl.error}};

    report["required_eta_min"] = json::object();
    std::cout << "critical ratio eta_min/eta_max: " << ratio.value << " +/- " << ratio.error
              << "\n";
    for (double em : eta_maxes) {
        ldlc::ValueWithError req = ldlc::required_eta_min_with_error(terms, em, eopts);
        std::string key = std::to_string(em);
        finite_or_string(report["required_eta_min"][key], req.value);
        report["errors"]["required_eta_min_" + key] = req.error;
        std::cout << "required eta_min at eta_max=" << em << ": " << req.value << " +/- "
                  << req.error << "\n";
    }
    std::cout << "mdl_ldl_threshold: " << mdl.value << " +/- " << mdl.error << "\n";

    emit(report, out_path);
    return kExitOk;
}

// ------------------------------------------------------------- membership

ldlc::EfficiencyMap load_efficiency_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ldlc::ValidationError("cannot open efficiency file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ldlc::ValidationError(std::string("efficiency file: ") + e.what());
    }
    ldlc::EfficiencyMap eff;
    eff.scenario = ldlc::scenario_from_json(j.at("scenario"));
    eff.eta = j.at("eta").get<std::vector<double>>();
    eff.validate();
    return eff;
}

json membership_report(const ldlc::MembershipResult& r) {
    json j;
    j["status"] = (r.status == ldlc::LpStatus::Feasible)
                      ? "feasible"
                      : (r.status == ldlc::LpStatus::Infeasible ? "infeasible" : "unsolved");
    j["convention"] = ldlc::to_string(r.convention);
    j["exact"] = r.exact;
    j["verified"] = r.verified;
    if (!r.weights.empty()) j["weights"] = r.weights;
    if (r.t) j["t"] = *r.t;
    if (!r.dual.empty()) {
        j["dual"] = r.dual;
        j["margin"] = r.margin;
    }
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

int cmd_membership(const std::string& input, double eta_min, double eta_max,
                   const std::string& convention, const std::string& efficiencies,
                   const std::string& mode, std::vector<double> mdl_bounds,
                   const std::string& out_path) {
    ldlc::DataFile data = ldlc::load_data_file(input);
    ldlc::MembershipOptions opts;
    opts.exact = (mode == "exact");

    ldlc::MembershipResult res;
    if (!mdl_bounds.empty()) {
        if (mdl_bounds.size() != 2)
            throw ldlc::ValidationError("--mdl expects two values: l h");
        ldlc::JointDistribution joint;
        if (auto* c = std::get_if<ldlc::CountsTable>(&data)) {
            joint = ldlc::from_counts(c->scenario, c->counts);
        } else if (auto* jd = std::get_if<ldlc::JointDistribution>(&data)) {
            joint = *jd;
        } else {
            throw ldlc::ShapeError("membership --mdl: input must be unconditional");
        }
        res = ldlc::membership_mdl(joint, ldlc::MdlBounds{mdl_bounds[0], mdl_bounds[1]}, opts);
    } else {
        ldlc::Behavior behavior;
        std::optional<ldlc::EfficiencyMap> eff;
        if (auto* b = std::get_if<ldlc::Behavior>(&data)) {
            behavior = *b;
        } else if (auto* lb = std::get_if<ldlc::LossyBehavior>(&data)) {
            ldlc::Postselected ps = ldlc::postselect(*lb);
            behavior = ps.behavior;
            eff = ps.efficiencies;
        } else if (auto* jd = std::get_if<ldlc::JointDistribution>(&data)) {
            behavior = ldlc::condition_on_inputs(*jd).behavior;
        } else {
            ldlc::CountsTable& c = std::get<ldlc::CountsTable>(data);
            behavior = ldlc::condition_on_inputs(ldlc::from_counts(c.scenario, c.counts)).behavior;
        }
        if (efficiencies != "uniform-unknown") eff = load_efficiency_map(efficiencies);
        ldlc::DetectionBounds bounds{eta_min, eta_max, parse_convention(convention)};
        res = ldlc::membership_ldlps(behavior, eff, bounds, opts);
    }

    json report;
    report["tool"] = "ldlcert";
    report["version"] = ldlc::kVersion;
    report["command"] = "membership";
    report["flags"] = flags_json({{"input", input},
                                  {"eta_min", eta_min},
                                  {"eta_max", eta_max},
                                  {"convention", convention},
                                  {"efficiencies", efficiencies},
                                  {"mode", mode},
                                  {"mdl", mdl_bounds}});
    report["result"] = membership_report(res);
    emit(report, out_path);

    if (res.status == ldlc::LpStatus::Feasible) {
        std::cout << "feasible (explainable by the constrained local model)\n";
        return kExitOk;
    }
    std::cout << "infeasible; separation margin " << res.margin
              << (res.verified ? " (certificate verified)" : " (UNVERIFIED certificate)") << "\n";
    return kExitInfeasible;
}

// ---------------------------------------------------------------- quantum

int cmd_quantum(const std::string& emit_kind, std::int64_t shots, std::uint64_t seed,
                std::vector<double> loss, const std::string& out_path) {
    ldlc::Behavior hardy = ldlc::born_behavior(ldlc::hardy_state(), ldlc::hardy_measurements());
    const ldlc::Scenario& s = hardy.scenario;

    double eta_a = 1.0, eta_b = 1.0;
    if (!loss.empty()) {
        if (loss.size() != 2) throw ldlc::ValidationError("--loss expects two values: etaA etaB");
        eta_a = loss[0];
        eta_b = loss[1];
        if (!(eta_a > 0.0 && eta_a <= 1.0 && eta_b > 0.0 && eta_b <= 1.0))
            throw ldlc::ValidationError("--loss efficiencies must lie in (0,1]");
    }

    json payload;
    if (emit_kind == "behavior") {
        payload = ldlc::to_json(hardy);
    } else if (emit_kind == "counts") {
        if (shots <= 0) throw ldlc::ValidationError("--shots must be positive for counts");
        // Detected coincidences only: uniform inputs, joint detection with
        // probability etaA*etaB, outcome distribution unchanged by uniform
        // loss after postselection.
        std::mt19937_64 rng(seed);
        std::binomial_distribution<std::int64_t> det(shots, eta_a * eta_b);
        std::int64_t detected = det(rng);
        std::size_t nin = s.input_tuples(), nout = s.outcome_tuples(false);
        std::vector<double> weights(nin * nout);
        for (std::size_t x = 0; x < nin; ++x)
            for (std::size_t o = 0; o < nout; ++o)
                weights[x * nout + o] = hardy.at(x, o) / static_cast<double>(nin);
        std::discrete_distribution<std::size_t> cell(weights.begin(), weights.end());
        std::vector<std::int64_t> counts(weights.size(), 0);
        for (std::int64_t i = 0; i < detected; ++i) ++counts[cell(rng)];
        payload = ldlc::counts_to_json(s, counts);
    } else {
        throw ldlc::ValidationError("--emit must be behavior or counts");
    }

    payload["generator"] = {{"tool", "ldlcert"},
                            {"version", ldlc::kVersion},
                            {"command", "quantum"},
                            {"emit", emit_kind},
                            {"shots", shots},
                            {"seed", seed},
                            {"loss", json::array({eta_a, eta_b})}};
    if (out_path.empty()) {
        std::cout << payload.dump(2) << "\n";
    } else {
        ldlc::write_json_file(out_path, payload);
        std::cout << "wrote " << emit_kind << " to " << out_path << "\n";
    }
    return kExitOk;
}

// --------------------------------------------------------------- vertices

int cmd_vertices(int parties, std::vector<int> inputs, std::vector<int> outcomes, double eta_min,
                 double eta_max, const std::string& convention, std::vector<double> mdl_bounds,
                 std::size_t cap, const std::string& out_path) {
    ldlc::Scenario s{parties, inputs, outcomes};
    s.validate();

    json payload;
    std::size_t count = 0;
    if (!mdl_bounds.empty()) {
        if (mdl_bounds.size() != 2)
            throw ldlc::ValidationError("--mdl expects two values: l h");
        ldlc::MdlVertexSet vs =
            ldlc::enumerate_mdl_vertices(s, ldlc::MdlBounds{mdl_bounds[0], mdl_bounds[1]}, cap);
        count = vs.tables.size();
        payload = ldlc::vertex_set_to_json(vs);
    } else {
        ldlc::DetectionBounds bounds{eta_min, eta_max, parse_convention(convention)};
        ldlc::VertexSet vs = ldlc::enumerate_ldl_vertices(s, bounds, cap);
        count = vs.tables.size();
        payload = ldlc::vertex_set_to_json(vs);
    }
    payload["tool"] = "ldlcert";
    payload["version"] = ldlc::kVersion;
    std::cout << count << " vertices\n";
    emit(payload, out_path);
    return kExitOk;
}

// ----------------------------------------------------------------- bridge

int cmd_bridge(int trials, std::uint64_t seed, const std::string& convention, double eta_min,
               double eta_max, double l, double h, int lambda_support, int threads,
               const std::string& out_path) {
    ldlc::Scenario s = ldlc::Scenario::chsh();
    ldlc::BridgeParams params;
    params.mdl = ldlc::MdlBounds{l, h};
    params.detection = ldlc::DetectionBounds{eta_min, eta_max, parse_convention(convention)};
    ldlc::BridgeReport rep =
        ldlc::verify_bridge(trials, seed, s, params, lambda_support, resolve_threads(threads));

    json report;
    report["tool"] = "ldlcert";
    report["version"] = ldlc::kVersion;
    report["command"] = "bridge";
    report["flags"] = flags_json({{"trials", trials},
                                  {"seed", seed},
                                  {"convention", convention},
                                  {"eta_min", eta_min},
                                  {"eta_max", eta_max},
                                  {"l", l},
                                  {"h", h},
                                  {"lambda_support", lambda_support},
                                  {"threads", threads}});
    report["trials"] = rep.trials;
    report["failures"] = rep.failures;
    report["min_slack"] = rep.min_slack;
    report["convention"] = ldlc::to_string(rep.convention);
    report["params"] = {{"l", params.mdl.l},
                        {"h", params.mdl.h},
                        {"eta_min", eta_min},
                        {"eta_max", eta_max}};
    report["transformed"] = {{"l", rep.transformed.l}, {"h", rep.transformed.h}};
    report["seed"] = rep.seed;
    if (!rep.failure_dumps.empty()) report["failure_models"] = rep.failure_dumps;
    emit(report, out_path);

    std::cout << rep.trials << " trials, " << rep.failures << " failures, min slack "
              << rep.min_slack << "\n";
    return rep.failures == 0 ? kExitOk : kExitInfeasible;
}

// --------------------------------------------------------------- strategy

int cmd_strategy(const std::string& input, double eta, double eta_min_target,
                 const std::string& out_path) {
    ldlc::DataFile data = ldlc::load_data_file(input);
    auto* b = std::get_if<ldlc::Behavior>(&data);
    if (!b) throw ldlc::ShapeError("strategy: input must be a behavior file");
    ldlc::Behavior mixed = ldlc::assignment_mix(*b, eta, eta_min_target);
    json payload = ldlc::to_json(mixed);
    payload["generator"] = {{"tool", "ldlcert"},
                            {"version", ldlc::kVersion},
                            {"command", "strategy"},
                            {"eta", eta},
                            {"eta_min_target", eta_min_target},
                            {"input", input}};
    if (out_path.empty()) {
        std::cout << payload.dump(2) << "\n";
    } else {
        ldlc::write_json_file(out_path, payload);
        std::cout << "wrote behavior to " << out_path << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bell-test certification against limited-detection and "
                 "measurement-dependent local models"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ldlc::kVersion);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Thresholds from counts or joint probabilities");
    std::string an_input, an_convention = "per_party", an_errors = "delta", an_out;
    std::vector<double> an_eta_maxes{0.5, 0.1};
    bool an_renorm = false;
    std::uint64_t an_seed = 0;
    int an_resamples = 2000;
    analyze->add_option("input", an_input, "data file")->required();
    analyze->add_option("--eta-max", an_eta_maxes, "eta_max values for required_eta_min");
    analyze->add_option("--convention", an_convention, "per_party|joint");
    analyze->add_flag("--renormalize", an_renorm, "rescale total mass to 1 before analysis");
    analyze->add_option("--errors", an_errors, "delta|bootstrap");
    analyze->add_option("--seed", an_seed, "bootstrap seed");
    analyze->add_option("--resamples", an_resamples, "bootstrap resamples");
    analyze->add_option("--out", an_out, "machine report path");

    // membership
    auto* membership = app.add_subcommand("membership", "LP membership with certificates");
    std::string me_input, me_convention = "per_party", me_eff = "uniform-unknown",
                me_mode = "float", me_out;
    double me_eta_min = 0.0, me_eta_max = 1.0;
    std::vector<double> me_mdl;
    membership->add_option("input", me_input, "data file")->required();
    membership->add_option("--eta-min", me_eta_min, "detection lower bound");
    membership->add_option("--eta-max", me_eta_max, "detection upper bound");
    membership->add_option("--convention", me_convention, "per_party|joint");
    membership->add_option("--efficiencies", me_eff, "efficiency-map file or uniform-unknown");
    membership->add_option("--mode", me_mode, "float|exact");
    membership->add_option("--mdl", me_mdl, "test MDL membership at bounds l h")->expected(2);
    membership->add_option("--out", me_out, "certificate report path");

    // quantum
    auto* quantum = app.add_subcommand("quantum", "Emit the ideal Hardy realization");
    std::string qu_emit = "behavior", qu_out;
    std::int64_t qu_shots = 0;
    std::uint64_t qu_seed = 0;
    std::vector<double> qu_loss;
    quantum->add_option("--emit", qu_emit, "behavior|counts");
    quantum->add_option("--shots", qu_shots, "emitted pairs for counts");
    quantum->add_option("--seed", qu_seed, "sampling seed");
    quantum->add_option("--loss", qu_loss, "per-party efficiencies etaA etaB")->expected(2);
    quantum->add_option("--out", qu_out, "output file");

    // vertices
    auto* vertices = app.add_subcommand("vertices", "Enumerate polytope vertices");
    int ve_parties = 2;
    std::vector<int> ve_inputs{2, 2}, ve_outcomes{2, 2};
    double ve_eta_min = 0.0, ve_eta_max = 1.0;
    std::string ve_convention = "per_party", ve_out;
    std::vector<double> ve_mdl;
    std::size_t ve_cap = 1'000'000;
    vertices->add_option("--parties", ve_parties, "party count");
    vertices->add_option("--inputs", ve_inputs, "inputs per party");
    vertices->add_option("--outcomes", ve_outcomes, "outcomes per party");
    vertices->add_option("--eta-min", ve_eta_min, "detection lower bound");
    vertices->add_option("--eta-max", ve_eta_max, "detection upper bound");
    vertices->add_option("--convention", ve_convention, "per_party|joint");
    vertices->add_option("--mdl", ve_mdl, "enumerate MDL vertices at bounds l h")->expected(2);
    vertices->add_option("--cap", ve_cap, "vertex-count cap");
    vertices->add_option("--out", ve_out, "vertex dump path");

    // bridge
    auto* bridge = app.add_subcommand("bridge", "Randomized reduction-theorem check");
    int br_trials = 200, br_lambda = 8, br_threads = 1;
    std::uint64_t br_seed = 0;
    std::string br_convention = "joint", br_out;
    double br_eta_min = 0.5, br_eta_max = 1.0, br_l = 0.25, br_h = 0.25;
    bridge->add_option("--trials", br_trials, "trial count");
    bridge->add_option("--seed", br_seed, "RNG seed");
    bridge->add_option("--convention", br_convention, "per_party|joint");
    bridge->add_option("--eta-min", br_eta_min, "detection lower bound");
    bridge->add_option("--eta-max", br_eta_max, "detection upper bound");
    bridge->add_option("--mdl-l", br_l, "MDL lower bound");
    bridge->add_option("--mdl-h", br_h, "MDL upper bound");
    bridge->add_option("--lambda-support", br_lambda, "hidden-variable support size");
    bridge->add_option("--threads", br_threads, "worker threads (LDLCERT_THREADS overrides)");
    bridge->add_option("--out", br_out, "report path");

    // strategy
    auto* strategy = app.add_subcommand("strategy", "Partial-assignment completion of losses");
    std::string st_input, st_out;
    double st_eta = 1.0, st_target = 0.0;
    strategy->add_option("input", st_input, "behavior file")->required();
    strategy->add_option("--eta", st_eta, "detector efficiency")->required();
    strategy->add_option("--eta-min-target", st_target, "assignment probability")->required();
    strategy->add_option("--out", st_out, "output behavior path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    try {
        if (*analyze)
            return cmd_analyze(an_input, an_eta_maxes, an_convention, an_renorm, an_errors,
                               an_seed, an_resamples, an_out);
        if (*membership)
            return cmd_membership(me_input, me_eta_min, me_eta_max, me_convention, me_eff,
                                  me_mode, me_mdl, me_out);
        if (*quantum) return cmd_quantum(qu_emit, qu_shots, qu_seed, qu_loss, qu_out);
        if (*vertices)
            return cmd_vertices(ve_parties, ve_inputs, ve_outcomes, ve_eta_min, ve_eta_max,
                                ve_convention, ve_mdl, ve_cap, ve_out);
        if (*bridge)
            return cmd_bridge(br_trials, br_seed, br_convention, br_eta_min, br_eta_max, br_l,
                              br_h, br_lambda, br_threads, br_out);
        if (*strategy) return cmd_strategy(st_input, st_eta, st_target, st_out);
    } catch (const ldlc::ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitShape;
    } catch (const ldlc::TooLargeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitShape;
    } catch (const ldlc::DegenerateBoundsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitShape;
    } catch (const ldlc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
    return kExitParse;
}
