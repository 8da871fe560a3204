#include "ldlcert/json_io.hpp"

#include <fstream>

namespace ldlc {

using nlohmann::json;

json to_json(const Scenario& s) {
    return json{{"parties", s.parties}, {"inputs", s.inputs}, {"outcomes", s.outcomes}};
}

Scenario scenario_from_json(const json& j) {
    Scenario s;
    s.parties = j.at("parties").get<int>();
    s.inputs = j.at("inputs").get<std::vector<int>>();
    s.outcomes = j.at("outcomes").get<std::vector<int>>();
    s.validate();
    return s;
}

namespace {

// Outcome tuple from JSON; null entries map to the no-detection value m_i.
std::vector<int> outcome_from_json(const Scenario& s, const json& a, bool allow_empty) {
    if (!a.is_array() || static_cast<int>(a.size()) != s.parties)
        throw ValidationError("entry field 'a' has wrong arity");
    std::vector<int> out(s.parties);
    for (int i = 0; i < s.parties; ++i) {
        if (a[i].is_null()) {
            if (!allow_empty)
                throw ValidationError("no-detection symbol not allowed for this kind");
            out[i] = s.outcomes[i];
        } else {
            int v = a[i].get<int>();
            if (v < 0 || v >= s.outcomes[i])
                throw ValidationError("outcome label out of range");
            out[i] = v;
        }
    }
    return out;
}

std::vector<int> input_from_json(const Scenario& s, const json& x) {
    if (!x.is_array() || static_cast<int>(x.size()) != s.parties)
        throw ValidationError("entry field 'x' has wrong arity");
    std::vector<int> in(s.parties);
    for (int i = 0; i < s.parties; ++i) {
        in[i] = x[i].get<int>();
        if (in[i] < 0 || in[i] >= s.inputs[i])
            throw ValidationError("input label out of range");
    }
    return in;
}

json entries_to_json(const Scenario& s, const std::vector<double>& table, bool with_empty,
                     const std::vector<double>* errors) {
    const std::size_t nin = s.input_tuples();
    const std::size_t nout = s.outcome_tuples(with_empty);
    json entries = json::array();
    for (std::size_t i = 0; i < nin; ++i)
        for (std::size_t o = 0; o < nout; ++o) {
            double v = table[i * nout + o];
            if (v == 0.0 && !errors) continue;
            auto a = s.outcome_tuple(o, with_empty);
            json ja = json::array();
            for (int pi = 0; pi < s.parties; ++pi) {
                if (with_empty && a[pi] == s.outcomes[pi])
                    ja.push_back(nullptr);
                else
                    ja.push_back(a[pi]);
            }
            json e{{"a", ja}, {"x", s.input_tuple(i)}, {"value", v}};
            if (errors) e["error"] = (*errors)[i * nout + o];
            entries.push_back(std::move(e));
        }
    return entries;
}

}  // namespace

namespace {

DataFile parse_data_file_impl(const json& j) {
    Scenario s = scenario_from_json(j.at("scenario"));
    std::string kind = j.at("kind").get<std::string>();
    const auto& entries = j.at("entries");
    if (!entries.is_array()) throw ValidationError("'entries' must be an array");

    const bool lossy = kind == "lossy_behavior";
    const std::size_t nout = s.outcome_tuples(lossy);
    const std::size_t n = s.input_tuples() * nout;

    if (kind == "counts") {
        CountsTable t{s, std::vector<std::int64_t>(n, 0)};
        for (const auto& e : entries) {
            auto a = outcome_from_json(s, e.at("a"), false);
            auto x = input_from_json(s, e.at("x"));
            std::int64_t v = e.at("value").get<std::int64_t>();
            if (v < 0) throw ValidationError("negative count");
            t.counts[s.input_index(x) * nout + s.outcome_index(a, false)] = v;
        }
        return t;
    }

    std::vector<double> table(n, 0.0);
    std::vector<double> errors(n, 0.0);
    bool have_errors = false;
    for (const auto& e : entries) {
        auto a = outcome_from_json(s, e.at("a"), lossy);
        auto x = input_from_json(s, e.at("x"));
        std::size_t idx = s.input_index(x) * nout + s.outcome_index(a, lossy);
        table[idx] = e.at("value").get<double>();
        if (e.contains("error")) {
            errors[idx] = e.at("error").get<double>();
            have_errors = true;
        }
    }

    if (kind == "joint_probabilities") {
        JointDistribution jd{s, std::move(table), std::nullopt};
        if (have_errors) jd.uncertainty = std::move(errors);
        jd.validate(kEpsIngest);
        return jd;
    }
    if (kind == "lossy_behavior") {
        LossyBehavior lb{s, std::move(table)};
        lb.validate(kEpsIngest);
        return lb;
    }
    if (kind == "behavior") {
        Behavior b{s, std::move(table)};
        b.validate(kEpsIngest);
        return b;
    }
    throw ValidationError("unknown kind '" + kind + "'");
}

}  // namespace

DataFile parse_data_file(const json& j) {
    try {
        return parse_data_file_impl(j);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed data file: ") + e.what());
    }
}

DataFile load_data_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError("malformed JSON in '" + path + "': " + e.what());
    }
    return parse_data_file(j);
}

json to_json(const Behavior& b) {
    return json{{"scenario", to_json(b.scenario)},
                {"kind", "behavior"},
                {"entries", entries_to_json(b.scenario, b.p, false, nullptr)}};
}

json to_json(const LossyBehavior& l) {
    return json{{"scenario", to_json(l.scenario)},
                {"kind", "lossy_behavior"},
                {"entries", entries_to_json(l.scenario, l.p, true, nullptr)}};
}

json to_json(const JointDistribution& jd) {
    return json{{"scenario", to_json(jd.scenario)},
                {"kind", "joint_probabilities"},
                {"entries", entries_to_json(jd.scenario, jd.p, false,
                                            jd.uncertainty ? &*jd.uncertainty : nullptr)}};
}

json counts_to_json(const Scenario& s, const std::vector<std::int64_t>& counts) {
    const std::size_t nout = s.outcome_tuples(false);
    json entries = json::array();
    for (std::size_t i = 0; i < s.input_tuples(); ++i)
        for (std::size_t o = 0; o < nout; ++o) {
            if (counts[i * nout + o] == 0) continue;
            entries.push_back(json{{"a", s.outcome_tuple(o, false)},
                                   {"x", s.input_tuple(i)},
                                   {"value", counts[i * nout + o]}});
        }
    return json{{"scenario", to_json(s)}, {"kind", "counts"}, {"entries", entries}};
}

json vertex_set_to_json(const VertexSet& vs) {
    json vertices = json::array();
    for (std::size_t k = 0; k < vs.tables.size(); ++k)
        vertices.push_back(json{{"label", vs.labels[k]},
                                {"entries", entries_to_json(vs.scenario, vs.tables[k], true,
                                                            nullptr)}});
    return json{{"scenario", to_json(vs.scenario)},
                {"kind", "ldl_vertex_set"},
                {"eta_min", vs.bounds.eta_min},
                {"eta_max", vs.bounds.eta_max},
                {"convention", to_string(vs.bounds.convention)},
                {"vertices", vertices}};
}

json vertex_set_to_json(const MdlVertexSet& vs) {
    json vertices = json::array();
    for (std::size_t k = 0; k < vs.tables.size(); ++k)
        vertices.push_back(json{{"label", vs.labels[k]},
                                {"entries", entries_to_json(vs.scenario, vs.tables[k], false,
                                                            nullptr)}});
    return json{{"scenario", to_json(vs.scenario)},
                {"kind", "mdl_vertex_set"},
                {"l", vs.bounds.l},
                {"h", vs.bounds.h},
                {"vertices", vertices}};
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

}  // namespace ldlc
