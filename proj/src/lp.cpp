#include "ldlcert/lp.hpp"

#include <algorithm>
#include <cmath>

namespace ldlc {

namespace {

// Standard-form column: x_orig = offset + (negated ? -x' : x'), x' >= 0.
template <class T>
struct Col {
    std::size_t orig;
    T offset;
    bool negated;
};

template <class T>
T abs_val(const T& v) {
    return v < T(0) ? T(-v) : v;
}

}  // namespace

template <class T>
bool verify_certificate(const FeasibilityProblem<T>& p, const LpCertificate<T>& cert,
                        const LpOptions<T>& opts, std::string* why) {
    auto fail = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    const std::size_t m = p.rows(), n = p.vars;

    if (cert.status == LpStatus::Feasible) {
        if (cert.point.size() != n) return fail("feasible point has wrong size");
        for (std::size_t j = 0; j < n; ++j) {
            const auto& bd = p.bounds[j];
            if (bd.lo && cert.point[j] < *bd.lo - opts.eps) return fail("lower bound violated");
            if (bd.hi && cert.point[j] > *bd.hi + opts.eps) return fail("upper bound violated");
        }
        for (std::size_t i = 0; i < m; ++i) {
            T lhs(0);
            for (std::size_t j = 0; j < n; ++j) lhs += p.A[i * n + j] * cert.point[j];
            if (abs_val(T(lhs - p.b[i])) > opts.eps) return fail("equality constraint violated");
        }
        return true;
    }

    if (cert.status == LpStatus::Infeasible) {
        if (cert.dual.size() != m) return fail("dual has wrong size");
        // Farkas: max over the bound box of (y^T A) x must fall short of y^T b.
        T box_max(0);
        for (std::size_t j = 0; j < n; ++j) {
            T cj(0);
            for (std::size_t i = 0; i < m; ++i) cj += cert.dual[i] * p.A[i * n + j];
            const auto& bd = p.bounds[j];
            if (cj > opts.eps) {
                if (!bd.hi) return fail("dual not sign-feasible for unbounded variable");
                box_max += cj * *bd.hi;
            } else if (cj < -opts.eps) {
                if (!bd.lo) return fail("dual not sign-feasible for unbounded variable");
                box_max += cj * *bd.lo;
            } else if (cj > T(0) && bd.hi) {
                box_max += cj * *bd.hi;
            } else if (cj < T(0) && bd.lo) {
                box_max += cj * *bd.lo;
            }
        }
        T ytb(0);
        for (std::size_t i = 0; i < m; ++i) ytb += cert.dual[i] * p.b[i];
        if (!(ytb - box_max > opts.delta_sep)) return fail("separation margin too small");
        return true;
    }
    return fail("unsolved certificate");
}

namespace {

template <class T>
LpCertificate<T> solve_impl(const FeasibilityProblem<T>& p, const LpOptions<T>& opts) {
    p.validate();
    const std::size_t m = p.rows(), n = p.vars;

    // Reformulate to A' x' = b', x' >= 0.
    std::vector<Col<T>> cols;
    std::vector<std::size_t> bound_row_col;  // standard-form col index per extra bound row
    std::vector<T> bound_row_rhs;
    for (std::size_t j = 0; j < n; ++j) {
        const auto& bd = p.bounds[j];
        if (bd.lo && bd.hi) {
            bound_row_col.push_back(cols.size());
            bound_row_rhs.push_back(*bd.hi - *bd.lo);
            cols.push_back({j, *bd.lo, false});
        } else if (bd.lo) {
            cols.push_back({j, *bd.lo, false});
        } else if (bd.hi) {
            cols.push_back({j, *bd.hi, true});
        } else {
            cols.push_back({j, T(0), false});
            cols.push_back({j, T(0), true});
        }
    }
    const std::size_t nb = bound_row_rhs.size();
    const std::size_t mtot = m + nb;
    const std::size_t nstruct = cols.size() + nb;  // structural + slack columns
    const std::size_t ntot = nstruct + mtot;       // + artificials
    const std::size_t width = ntot + 1;            // + rhs

    std::vector<T> tab(mtot * width, T(0));
    std::vector<int> sigma(m, 1);

    for (std::size_t i = 0; i < m; ++i) {
        T rhs = p.b[i];
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const auto& col = cols[c];
            T a = p.A[i * n + col.orig];
            rhs -= a * col.offset;
            tab[i * width + c] = col.negated ? T(-a) : a;
        }
        tab[i * width + ntot] = rhs;
    }
    for (std::size_t k = 0; k < nb; ++k) {
        std::size_t i = m + k;
        tab[i * width + bound_row_col[k]] = T(1);
        tab[i * width + cols.size() + k] = T(1);  // slack
        tab[i * width + ntot] = bound_row_rhs[k];
    }
    for (std::size_t i = 0; i < mtot; ++i) {
        if (tab[i * width + ntot] < T(0)) {
            for (std::size_t c = 0; c <= ntot; ++c) tab[i * width + c] = -tab[i * width + c];
            if (i < m) sigma[i] = -1;
        }
        tab[i * width + nstruct + i] = T(1);  // artificial
    }

    // Phase-1 objective: minimize the sum of artificials. Reduced-cost row.
    std::vector<T> cost(width, T(0));
    for (std::size_t c = 0; c <= ntot; ++c) {
        T s(0);
        for (std::size_t i = 0; i < mtot; ++i) s += tab[i * width + c];
        if (c < nstruct || c == ntot)
            cost[c] = -s;  // 0 - y^T A_c with initial y = 1
        else
            cost[c] = T(1) - s;  // artificial columns carry cost 1
    }

    std::vector<std::size_t> basis(mtot);
    for (std::size_t i = 0; i < mtot; ++i) basis[i] = nstruct + i;

    const T zero(0);
    std::size_t iters = 0;
    while (true) {
        if (++iters > opts.max_iters) return LpCertificate<T>{LpStatus::Unsolved, {}, {}};

        // Bland: smallest-index entering column with negative reduced cost.
        std::size_t enter = ntot;
        for (std::size_t c = 0; c < ntot; ++c)
            if (cost[c] < -opts.eps) { enter = c; break; }
        if (enter == ntot) break;

        // Ratio test; ties broken by smallest basis index (Bland).
        std::size_t leave = mtot;
        T best_ratio(0);
        for (std::size_t i = 0; i < mtot; ++i) {
            const T& a = tab[i * width + enter];
            if (a > opts.eps) {
                T ratio = tab[i * width + ntot] / a;
                if (leave == mtot || ratio < best_ratio ||
                    (ratio == best_ratio && basis[i] < basis[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
        }
        if (leave == mtot) {
            // Unbounded phase-1 column cannot happen with artificials; guard anyway.
            return LpCertificate<T>{LpStatus::Unsolved, {}, {}};
        }

        // Pivot on (leave, enter).
        T piv = tab[leave * width + enter];
        for (std::size_t c = 0; c <= ntot; ++c) tab[leave * width + c] /= piv;
        for (std::size_t i = 0; i < mtot; ++i) {
            if (i == leave) continue;
            T f = tab[i * width + enter];
            if (f == zero) continue;
            for (std::size_t c = 0; c <= ntot; ++c)
                tab[i * width + c] -= f * tab[leave * width + c];
        }
        {
            T f = cost[enter];
            if (f != zero)
                for (std::size_t c = 0; c <= ntot; ++c) cost[c] -= f * tab[leave * width + c];
        }
        basis[leave] = enter;
    }

    // Objective value = sum of basic artificial values.
    T obj(0);
    for (std::size_t i = 0; i < mtot; ++i)
        if (basis[i] >= nstruct) obj += tab[i * width + ntot];

    LpCertificate<T> cert;
    if (obj > opts.eps) {
        cert.status = LpStatus::Infeasible;
        cert.dual.assign(m, T(0));
        // y_i = 1 - reduced cost of artificial i; undo the row sign flips.
        for (std::size_t i = 0; i < m; ++i)
            cert.dual[i] = T(sigma[i]) * (T(1) - cost[nstruct + i]);
    } else {
        cert.status = LpStatus::Feasible;
        std::vector<T> xbar(ntot, T(0));
        for (std::size_t i = 0; i < mtot; ++i) xbar[basis[i]] = tab[i * width + ntot];
        cert.point.assign(n, T(0));
        std::vector<bool> seen(n, false);
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const auto& col = cols[c];
            T contrib = col.negated ? T(-xbar[c]) : xbar[c];
            if (!seen[col.orig]) {
                cert.point[col.orig] = col.offset + contrib;
                seen[col.orig] = true;
            } else {
                cert.point[col.orig] += contrib;  // free-variable split
            }
        }
    }
    return cert;
}

}  // namespace

template <class T>
LpCertificate<T> solve_feasibility(const FeasibilityProblem<T>& p, const LpOptions<T>& opts) {
    LpCertificate<T> cert = solve_impl(p, opts);
    if (cert.status == LpStatus::Unsolved) return cert;

    if constexpr (std::is_same_v<T, double>) {
        std::string why;
        if (!verify_certificate(p, cert, opts, &why)) {
            // Numerical trouble in float mode: redo the solve exactly.
            FeasibilityProblem<Rational> pe;
            pe.vars = p.vars;
            pe.A.reserve(p.A.size());
            for (double v : p.A) pe.A.emplace_back(v);
            for (double v : p.b) pe.b.emplace_back(v);
            pe.bounds.resize(p.bounds.size());
            for (std::size_t j = 0; j < p.bounds.size(); ++j) {
                if (p.bounds[j].lo) pe.bounds[j].lo = Rational(*p.bounds[j].lo);
                if (p.bounds[j].hi) pe.bounds[j].hi = Rational(*p.bounds[j].hi);
            }
            auto ce = solve_impl(pe, exact_lp_options());
            cert.status = ce.status;
            cert.point.clear();
            cert.dual.clear();
            for (const auto& v : ce.point) cert.point.push_back(static_cast<double>(v));
            for (const auto& v : ce.dual) cert.dual.push_back(static_cast<double>(v));
        }
    }
    return cert;
}

template <class T>
std::vector<T> strengthen_farkas(const FeasibilityProblem<T>& p, const T& delta,
                                 const LpOptions<T>& opts) {
    const std::size_t m = p.rows(), n = p.vars;

    // Search space: y in [-1,1]^m plus, per two-sided column j, an upper
    // envelope g_j >= max(c_j lo_j, c_j hi_j) with c_j = (A^T y)_j. One-sided
    // columns instead force the sign of c_j so the box maximum is c_j times
    // the finite bound; free columns force c_j = 0. The margin row then
    // states y^T b - sum of box maxima >= delta.
    enum class Kind { TwoSided, LoOnly, HiOnly, Free };
    std::vector<Kind> kind(n);
    std::size_t n_two = 0, n_one = 0, n_free = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const auto& bd = p.bounds[j];
        if (bd.lo && bd.hi) {
            kind[j] = Kind::TwoSided;
            ++n_two;
        } else if (bd.lo) {
            kind[j] = Kind::LoOnly;
            ++n_one;
        } else if (bd.hi) {
            kind[j] = Kind::HiOnly;
            ++n_one;
        } else {
            kind[j] = Kind::Free;
            ++n_free;
        }
    }

    FeasibilityProblem<T> q;
    const std::size_t rows = 2 * n_two + n_one + n_free + 1;
    const std::size_t slack0 = m + n_two;               // slack block start
    q.vars = m + n_two + (2 * n_two + n_one) + 1;       // y, g, slacks, surplus
    q.A.assign(rows * q.vars, T(0));
    q.b.assign(rows, T(0));
    q.bounds.resize(q.vars);
    for (std::size_t i = 0; i < m; ++i) {
        q.bounds[i].lo = T(-1);
        q.bounds[i].hi = T(1);
    }
    for (std::size_t k = 0; k < 2 * n_two + n_one + 1; ++k) q.bounds[slack0 + k].lo = T(0);
    // g variables stay free.

    std::size_t row = 0, g_idx = 0, s_idx = 0;
    const std::size_t margin_row = rows - 1;
    for (std::size_t j = 0; j < n; ++j) {
        const auto& bd = p.bounds[j];
        switch (kind[j]) {
            case Kind::TwoSided:
                // c_j * bound - g_j + s = 0  (so g_j >= c_j * bound).
                for (int side = 0; side < 2; ++side) {
                    const T bound = side == 0 ? *bd.lo : *bd.hi;
                    for (std::size_t i = 0; i < m; ++i)
                        q.A[row * q.vars + i] = p.A[i * n + j] * bound;
                    q.A[row * q.vars + m + g_idx] = T(-1);
                    q.A[row * q.vars + slack0 + s_idx] = T(1);
                    ++row;
                    ++s_idx;
                }
                // Margin row pays g_j.
                q.A[margin_row * q.vars + m + g_idx] = T(-1);
                ++g_idx;
                break;
            case Kind::LoOnly:
                // c_j <= 0; box maximum is c_j * lo_j.
                for (std::size_t i = 0; i < m; ++i) {
                    q.A[row * q.vars + i] = p.A[i * n + j];
                    q.A[margin_row * q.vars + i] -= p.A[i * n + j] * *bd.lo;
                }
                q.A[row * q.vars + slack0 + s_idx] = T(1);
                ++row;
                ++s_idx;
                break;
            case Kind::HiOnly:
                // c_j >= 0; box maximum is c_j * hi_j.
                for (std::size_t i = 0; i < m; ++i) {
                    q.A[row * q.vars + i] = p.A[i * n + j];
                    q.A[margin_row * q.vars + i] -= p.A[i * n + j] * *bd.hi;
                }
                q.A[row * q.vars + slack0 + s_idx] = T(-1);
                ++row;
                ++s_idx;
                break;
            case Kind::Free:
                for (std::size_t i = 0; i < m; ++i) q.A[row * q.vars + i] = p.A[i * n + j];
                ++row;
                break;
        }
    }
    for (std::size_t i = 0; i < m; ++i) q.A[margin_row * q.vars + i] += p.b[i];
    q.A[margin_row * q.vars + q.vars - 1] = T(-1);  // surplus beyond delta
    q.b[margin_row] = delta;

    // Raw single-precision solve: the caller re-verifies the returned dual
    // against the original problem, so no exact fallback is needed here.
    auto cert = solve_impl(q, opts);
    if (cert.status != LpStatus::Feasible) return {};
    std::vector<T> y(cert.point.begin(), cert.point.begin() + m);
    return y;
}

template LpCertificate<double> solve_feasibility(const FeasibilityProblem<double>&,
                                                 const LpOptions<double>&);
template LpCertificate<Rational> solve_feasibility(const FeasibilityProblem<Rational>&,
                                                   const LpOptions<Rational>&);
template bool verify_certificate(const FeasibilityProblem<double>&, const LpCertificate<double>&,
                                 const LpOptions<double>&, std::string*);
template bool verify_certificate(const FeasibilityProblem<Rational>&,
                                 const LpCertificate<Rational>&, const LpOptions<Rational>&,
                                 std::string*);
template std::vector<double> strengthen_farkas(const FeasibilityProblem<double>&, const double&,
                                               const LpOptions<double>&);
template std::vector<Rational> strengthen_farkas(const FeasibilityProblem<Rational>&,
                                                 const Rational&, const LpOptions<Rational>&);

}  // namespace ldlc
