#ifndef LDLCERT_SCENARIO_HPP
#define LDLCERT_SCENARIO_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "ldlcert/errors.hpp"

namespace ldlc {

/// A Bell scenario: N parties, n_i inputs and m_i outcomes per party.
/// The no-detection symbol is NOT counted in m_i; lossy tables index it
/// internally as outcome value m_i.
struct Scenario {
    int parties = 0;
    std::vector<int> inputs;    // n_i
    std::vector<int> outcomes;  // m_i

    static Scenario chsh() { return Scenario{2, {2, 2}, {2, 2}}; }

    void validate() const {
        if (parties < 1) throw ValidationError("scenario: parties must be >= 1");
        if (static_cast<int>(inputs.size()) != parties ||
            static_cast<int>(outcomes.size()) != parties)
            throw ValidationError("scenario: inputs/outcomes size mismatch");
        for (int n : inputs)
            if (n < 1) throw ValidationError("scenario: every n_i must be >= 1");
        for (int m : outcomes)
            if (m < 1) throw ValidationError("scenario: every m_i must be >= 1");
    }

    bool is_binary_two_party() const {
        return parties == 2 && inputs[0] == 2 && inputs[1] == 2 &&
               outcomes[0] == 2 && outcomes[1] == 2;
    }

    std::size_t input_tuples() const {
        std::size_t n = 1;
        for (int v : inputs) n *= static_cast<std::size_t>(v);
        return n;
    }

    std::size_t outcome_tuples(bool with_empty) const {
        std::size_t n = 1;
        for (int v : outcomes) n *= static_cast<std::size_t>(v) + (with_empty ? 1 : 0);
        return n;
    }

    std::size_t input_index(std::span<const int> x) const {
        std::size_t idx = 0;
        for (int i = 0; i < parties; ++i) idx = idx * inputs[i] + x[i];
        return idx;
    }

    std::vector<int> input_tuple(std::size_t idx) const {
        std::vector<int> x(parties);
        for (int i = parties - 1; i >= 0; --i) {
            x[i] = static_cast<int>(idx % inputs[i]);
            idx /= inputs[i];
        }
        return x;
    }

    // Outcome value m_i denotes the no-detection symbol when with_empty.
    std::size_t outcome_index(std::span<const int> a, bool with_empty) const {
        std::size_t idx = 0;
        for (int i = 0; i < parties; ++i)
            idx = idx * (outcomes[i] + (with_empty ? 1 : 0)) + a[i];
        return idx;
    }

    std::vector<int> outcome_tuple(std::size_t idx, bool with_empty) const {
        std::vector<int> a(parties);
        for (int i = parties - 1; i >= 0; --i) {
            int base = outcomes[i] + (with_empty ? 1 : 0);
            a[i] = static_cast<int>(idx % base);
            idx /= base;
        }
        return a;
    }

    bool operator==(const Scenario&) const = default;
};

}  // namespace ldlc

#endif
