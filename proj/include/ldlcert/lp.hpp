#ifndef LDLCERT_LP_HPP
#define LDLCERT_LP_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "ldlcert/errors.hpp"

namespace ldlc {

using Rational = boost::multiprecision::mpq_rational;

template <class T>
struct VarBounds {
    std::optional<T> lo, hi;  // absent = unbounded
};

/// Equality-constrained feasibility problem: A x = b, lo <= x <= hi.
template <class T>
struct FeasibilityProblem {
    std::size_t vars = 0;
    std::vector<T> A;  // row-major, rows() * vars
    std::vector<T> b;
    std::vector<VarBounds<T>> bounds;

    std::size_t rows() const { return b.size(); }

    void validate() const {
        if (A.size() != rows() * vars)
            throw ShapeError("lp: matrix size mismatch");
        if (bounds.size() != vars)
            throw ShapeError("lp: bounds size mismatch");
        for (const auto& bd : bounds)
            if (bd.lo && bd.hi && *bd.lo > *bd.hi)
                throw ValidationError("lp: lower bound exceeds upper bound");
    }
};

enum class LpStatus { Feasible, Infeasible, Unsolved };

/// Feasible: point satisfies the constraints. Infeasible: dual is a Farkas
/// vector over the rows; for every x in the bound box, dual.b > max of
/// (dual.A) x, so no feasible point exists.
template <class T>
struct LpCertificate {
    LpStatus status = LpStatus::Unsolved;
    std::vector<T> point;
    std::vector<T> dual;
};

template <class T>
struct LpOptions {
    T eps;        // feasibility / pivot tolerance (0 in exact mode)
    T delta_sep;  // required separation margin for Farkas certificates
    std::size_t max_iters = 1'000'000;
};

inline LpOptions<double> default_lp_options() {
    return LpOptions<double>{1e-9, 1e-9, 1'000'000};
}
inline LpOptions<Rational> exact_lp_options() {
    return LpOptions<Rational>{Rational(0), Rational(0), 1'000'000};
}

/// Independent re-check of a certificate; never calls the solver.
template <class T>
bool verify_certificate(const FeasibilityProblem<T>& p, const LpCertificate<T>& cert,
                        const LpOptions<T>& opts, std::string* why = nullptr);

/// Phase-1 simplex with Bland's rule. Every returned Feasible/Infeasible
/// certificate passes verify_certificate.
template <class T>
LpCertificate<T> solve_feasibility(const FeasibilityProblem<T>& p, const LpOptions<T>& opts);

/// Search for a Farkas dual of p whose box-reduction margin is at least
/// delta, with every |y_i| <= 1 (the dual itself is found via an auxiliary
/// feasibility solve). Returns an empty vector when no such dual exists.
/// Strengthens the weak duals phase-1 tends to emit on nearly-degenerate
/// infeasible instances.
template <class T>
std::vector<T> strengthen_farkas(const FeasibilityProblem<T>& p, const T& delta,
                                 const LpOptions<T>& opts);

inline LpCertificate<double> solve_feasibility(const FeasibilityProblem<double>& p) {
    return solve_feasibility(p, default_lp_options());
}
inline LpCertificate<Rational> solve_feasibility(const FeasibilityProblem<Rational>& p) {
    return solve_feasibility(p, exact_lp_options());
}

extern template LpCertificate<double> solve_feasibility(const FeasibilityProblem<double>&,
                                                        const LpOptions<double>&);
extern template LpCertificate<Rational> solve_feasibility(const FeasibilityProblem<Rational>&,
                                                          const LpOptions<Rational>&);
extern template bool verify_certificate(const FeasibilityProblem<double>&,
                                        const LpCertificate<double>&, const LpOptions<double>&,
                                        std::string*);
extern template bool verify_certificate(const FeasibilityProblem<Rational>&,
                                        const LpCertificate<Rational>&, const LpOptions<Rational>&,
                                        std::string*);
extern template std::vector<double> strengthen_farkas(const FeasibilityProblem<double>&,
                                                      const double&, const LpOptions<double>&);
extern template std::vector<Rational> strengthen_farkas(const FeasibilityProblem<Rational>&,
                                                        const Rational&,
                                                        const LpOptions<Rational>&);

}  // namespace ldlc

#endif
