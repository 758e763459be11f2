#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "liespec/errors.hpp"
#include "liespec/linalg.hpp"
#include "liespec/matrix.hpp"

namespace liespec {

/// Ordered operator basis X_1..X_n acting on E = C^m.
template <ScalarBackend S>
struct OperatorFamily {
    std::size_t dim_E = 0;
    std::vector<Matrix<S>> ops;
    std::vector<std::string> names;

    OperatorFamily() = default;
    OperatorFamily(std::size_t m, std::vector<Matrix<S>> operators,
                   std::vector<std::string> op_names = {})
        : dim_E(m), ops(std::move(operators)), names(std::move(op_names)) {
        for (const auto& x : ops)
            if (x.rows() != dim_E || x.cols() != dim_E)
                throw ShapeMismatch("OperatorFamily: all operators must be " +
                                    std::to_string(dim_E) + "x" + std::to_string(dim_E));
        if (names.empty()) {
            names.reserve(ops.size());
            for (std::size_t i = 0; i < ops.size(); ++i) names.push_back("X" + std::to_string(i + 1));
        }
    }

    std::size_t dim() const { return ops.size(); }
};

/// c[i][j][k] = coefficient of X_k in bracket(X_i, X_j), flattened.
template <ScalarBackend S>
struct StructureConstants {
    std::size_t n = 0;
    std::vector<S> c;

    StructureConstants() = default;
    explicit StructureConstants(std::size_t dim)
        : n(dim), c(dim * dim * dim, scalar_traits<S>::zero()) {}

    S& at(std::size_t i, std::size_t j, std::size_t k) { return c[(i * n + j) * n + k]; }
    const S& at(std::size_t i, std::size_t j, std::size_t k) const {
        return c[(i * n + j) * n + k];
    }

    /// Coordinates of bracket(X_i, X_j) in the X-basis.
    std::vector<S> bracket_coords(std::size_t i, std::size_t j) const {
        return {c.begin() + static_cast<std::ptrdiff_t>((i * n + j) * n),
                c.begin() + static_cast<std::ptrdiff_t>((i * n + j + 1) * n)};
    }

    /// Coordinates of bracket(u, v) for coordinate vectors u, v.
    std::vector<S> bracket_of(const std::vector<S>& u, const std::vector<S>& v) const {
        std::vector<S> out(n, scalar_traits<S>::zero());
        for (std::size_t i = 0; i < n; ++i) {
            if (scalar_traits<S>::is_zero(u[i])) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (scalar_traits<S>::is_zero(v[j])) continue;
                const S f = u[i] * v[j];
                for (std::size_t k = 0; k < n; ++k) out[k] += f * at(i, j, k);
            }
        }
        return out;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : c) m = std::max(m, scalar_traits<S>::abs(v));
        return m;
    }

    StructureConstants negated() const {
        StructureConstants out = *this;
        for (auto& v : out.c) v = -v;
        return out;
    }
};

/// A represented Lie algebra: operator basis, bracket sign convention
/// bracket(x,y) = sigma*(xy - yx), cached structure constants, and the
/// residual of the closure solve.
template <ScalarBackend S>
struct LieAlgebraRep {
    OperatorFamily<S> family;
    int bracket_sign = +1;
    StructureConstants<S> c;
    double closure_residual = 0.0;
    double jacobi_residual = 0.0;

    std::size_t n() const { return family.dim(); }
    std::size_t m() const { return family.dim_E; }
    const Matrix<S>& op(std::size_t i) const { return family.ops[i]; }

    /// bracket(X_i, X_j) as a matrix, from the sign convention directly.
    Matrix<S> bracket_matrix(std::size_t i, std::size_t j) const {
        Matrix<S> k = commutator(family.ops[i], family.ops[j]);
        if (bracket_sign < 0) return -k;
        return k;
    }

    /// Same rep with the opposite sign convention (c flips with it).
    LieAlgebraRep with_flipped_sign() const {
        LieAlgebraRep out = *this;
        out.bracket_sign = -bracket_sign;
        out.c = c.negated();
        return out;
    }
};

/// Element of L* in dual-basis coordinates with a vanishing-on-L2 certificate.
template <ScalarBackend S>
struct Character {
    std::vector<S> coords;
    bool vanishes_on_derived = false;
};

/// Subspace S of L given by coefficient rows in the X-basis.
template <ScalarBackend S>
struct SubalgebraSpec {
    Matrix<S> basis;  // r x n, rows linearly independent
    bool is_ideal = false;

    std::size_t dim() const { return basis.rows(); }
    std::size_t ambient_dim() const { return basis.cols(); }
};

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

namespace detail {

/// m^2 x n matrix whose column k is vec(X_k).
template <ScalarBackend S>
Matrix<S> stacked_vectorization(const OperatorFamily<S>& family) {
    const std::size_t mm = family.dim_E * family.dim_E;
    Matrix<S> v(mm, family.dim());
    for (std::size_t k = 0; k < family.dim(); ++k) {
        const auto& d = family.ops[k].data();
        for (std::size_t r = 0; r < mm; ++r) v(r, k) = d[r];
    }
    return v;
}

}  // namespace detail

/// Maximum Jacobi-identity defect of a structure-constant tensor.
template <ScalarBackend S>
double jacobi_defect(const StructureConstants<S>& c) {
    const std::size_t n = c.n;
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t l = j + 1; l < n; ++l)
                for (std::size_t r = 0; r < n; ++r) {
                    S acc = scalar_traits<S>::zero();
                    for (std::size_t k = 0; k < n; ++k)
                        acc += c.at(j, l, k) * c.at(i, k, r) + c.at(l, i, k) * c.at(j, k, r) +
                               c.at(i, j, k) * c.at(l, k, r);
                    worst = std::max(worst, scalar_traits<S>::abs(acc));
                }
    return worst;
}

/// Solves the structure constants of `family` under bracket(x,y) =
/// sigma*(xy - yx) and verifies the span is bracket-closed.
template <ScalarBackend S>
LieAlgebraRep<S> build_rep(const OperatorFamily<S>& family, int sigma = +1,
                           const RankPolicy& policy = {}) {
    const std::size_t n = family.dim();
    LieAlgebraRep<S> rep;
    rep.family = family;
    rep.bracket_sign = sigma >= 0 ? +1 : -1;
    rep.c = StructureConstants<S>(n);
    if (n == 0) return rep;

    for (const auto& x : family.ops)
        if constexpr (!scalar_traits<S>::is_exact)
            require_finite(x, "build_rep");

    Matrix<S> v = detail::stacked_vectorization(family);
    if (rank(v, policy) != n)
        throw NotIndependent("build_rep: operators are linearly dependent");

    // bracket scale for the relative closure test
    double bracket_scale = 0.0;
    std::vector<Matrix<S>> brackets;
    brackets.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Matrix<S> k = rep.bracket_sign < 0 ? -commutator(family.ops[i], family.ops[j])
                                               : commutator(family.ops[i], family.ops[j]);
            bracket_scale = std::max(bracket_scale, k.max_abs());
            brackets.push_back(std::move(k));
        }

    double worst_residual = 0.0;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j, ++idx) {
            const Matrix<S>& k = brackets[idx];
            std::vector<S> coeff = least_squares(v, k.data());
            double res = 0.0;
            for (std::size_t r = 0; r < k.data().size(); ++r) {
                S acc = k.data()[r];
                for (std::size_t t = 0; t < n; ++t) acc -= v(r, t) * coeff[t];
                res = std::max(res, scalar_traits<S>::abs(acc));
            }
            worst_residual = std::max(worst_residual, res);
            for (std::size_t t = 0; t < n; ++t) {
                rep.c.at(i, j, t) = coeff[t];
                rep.c.at(j, i, t) = -coeff[t];
            }
        }

    rep.closure_residual = worst_residual;
    const double closure_tol =
        scalar_traits<S>::is_exact ? 0.0 : 1e-8 * (1.0 + bracket_scale);
    if (worst_residual > closure_tol)
        throw NotClosed("build_rep: span is not bracket-closed (residual " +
                        std::to_string(worst_residual) + ")");
    rep.jacobi_residual = jacobi_defect(rep.c);
    return rep;
}

// ---------------------------------------------------------------------------
// Subspaces, series, ideals
// ---------------------------------------------------------------------------

/// True when every row of `vectors` lies in the row space of `space`.
template <ScalarBackend S>
bool subspace_contains(const Matrix<S>& space, const Matrix<S>& vectors,
                       const RankPolicy& policy = {}) {
    if (vectors.rows() == 0) return true;
    const std::size_t base = rank(space, policy);
    Matrix<S> stacked(space.rows() + vectors.rows(), space.cols());
    for (std::size_t i = 0; i < space.rows(); ++i)
        for (std::size_t j = 0; j < space.cols(); ++j) stacked(i, j) = space(i, j);
    for (std::size_t i = 0; i < vectors.rows(); ++i)
        for (std::size_t j = 0; j < vectors.cols(); ++j)
            stacked(space.rows() + i, j) = vectors(i, j);
    return rank(stacked, policy) == base;
}

/// Basis of span{ bracket(s, t) : s in A, t in B } for subspaces given by
/// coefficient rows. The reduction threshold is anchored to the structure
/// constants and input scales so cancellation noise never counts as a
/// dimension.
template <ScalarBackend S>
Matrix<S> bracket_span(const LieAlgebraRep<S>& rep, const Matrix<S>& a, const Matrix<S>& b,
                       const RankPolicy& policy = {}) {
    const std::size_t n = rep.n();
    std::vector<std::vector<S>> rows;
    for (std::size_t p = 0; p < a.rows(); ++p)
        for (std::size_t q = 0; q < b.rows(); ++q) {
            std::vector<S> u(n), w(n);
            for (std::size_t k = 0; k < n; ++k) {
                u[k] = a(p, k);
                w[k] = b(q, k);
            }
            rows.push_back(rep.c.bracket_of(u, w));
        }
    Matrix<S> stacked(rows.size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < n; ++k) stacked(i, k) = rows[i][k];
    double floor =
        (1.0 + rep.c.max_abs()) * (1.0 + a.max_abs()) * (1.0 + b.max_abs());
    return row_space_basis(stacked, policy, floor);
}

template <ScalarBackend S>
Matrix<S> full_space_rows(const LieAlgebraRep<S>& rep) {
    return Matrix<S>::identity(rep.n());
}

/// Basis of L^2 = span of all brackets; always an ideal.
template <ScalarBackend S>
SubalgebraSpec<S> derived_subalgebra(const LieAlgebraRep<S>& rep, const RankPolicy& policy = {}) {
    Matrix<S> id = full_space_rows(rep);
    return SubalgebraSpec<S>{bracket_span(rep, id, id, policy), true};
}

/// L >= L^2 >= (L^2)^2 >= ..., listed until it stabilizes or reaches 0.
template <ScalarBackend S>
std::vector<SubalgebraSpec<S>> derived_series(const LieAlgebraRep<S>& rep,
                                              const RankPolicy& policy = {}) {
    std::vector<SubalgebraSpec<S>> series;
    series.push_back(SubalgebraSpec<S>{full_space_rows(rep), true});
    while (true) {
        const Matrix<S>& cur = series.back().basis;
        if (cur.rows() == 0) break;
        Matrix<S> next = bracket_span(rep, cur, cur, policy);
        if (next.rows() >= cur.rows() && series.size() > 1) break;  // stabilized
        bool shrank = next.rows() < cur.rows();
        series.push_back(SubalgebraSpec<S>{std::move(next), true});
        if (!shrank) break;
    }
    return series;
}

template <ScalarBackend S>
bool is_solvable(const LieAlgebraRep<S>& rep, const RankPolicy& policy = {}) {
    auto series = derived_series(rep, policy);
    return series.back().dim() == 0;
}

/// L >= [L,L] >= [L,[L,L]] >= ...
template <ScalarBackend S>
std::vector<SubalgebraSpec<S>> lower_central_series(const LieAlgebraRep<S>& rep,
                                                    const RankPolicy& policy = {}) {
    std::vector<SubalgebraSpec<S>> series;
    series.push_back(SubalgebraSpec<S>{full_space_rows(rep), true});
    Matrix<S> id = full_space_rows(rep);
    while (true) {
        const Matrix<S>& cur = series.back().basis;
        if (cur.rows() == 0) break;
        Matrix<S> next = bracket_span(rep, id, cur, policy);
        if (next.rows() >= cur.rows() && series.size() > 1) break;
        bool shrank = next.rows() < cur.rows();
        series.push_back(SubalgebraSpec<S>{std::move(next), true});
        if (!shrank) break;
    }
    return series;
}

template <ScalarBackend S>
bool is_nilpotent(const LieAlgebraRep<S>& rep, const RankPolicy& policy = {}) {
    auto series = lower_central_series(rep, policy);
    return series.back().dim() == 0;
}

/// True iff bracket(L, S) is contained in S.
template <ScalarBackend S>
bool is_ideal(const SubalgebraSpec<S>& sub, const LieAlgebraRep<S>& rep,
              const RankPolicy& policy = {}) {
    Matrix<S> brackets = bracket_span(rep, full_space_rows(rep), sub.basis, policy);
    return subspace_contains(sub.basis, brackets, policy);
}

/// Matrices of ad X_i = bracket(X_i, .) in the X-basis; entries may be
/// linearly dependent (any center acts as zero).
template <ScalarBackend S>
OperatorFamily<S> adjoint_rep(const LieAlgebraRep<S>& rep) {
    const std::size_t n = rep.n();
    std::vector<Matrix<S>> mats;
    mats.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Matrix<S> ad(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) ad(k, j) = rep.c.at(i, j, k);
        mats.push_back(std::move(ad));
    }
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i) names.push_back("ad " + rep.family.names[i]);
    OperatorFamily<S> out;
    out.dim_E = n;
    out.ops = std::move(mats);
    out.names = std::move(names);
    return out;
}

/// Rank of the skew form B_f[i][j] = f(bracket(X_i, X_j)); equals the
/// coadjoint orbit dimension dim L - dim L^perp.
template <ScalarBackend S>
std::size_t coadjoint_form_rank(const std::vector<S>& f, const LieAlgebraRep<S>& rep,
                                const RankPolicy& policy = {}) {
    const std::size_t n = rep.n();
    if (f.size() != n) throw ShapeMismatch("coadjoint_form_rank: functional has wrong length");
    Matrix<S> b(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            S acc = scalar_traits<S>::zero();
            for (std::size_t k = 0; k < n; ++k) acc += rep.c.at(i, j, k) * f[k];
            b(i, j) = acc;
        }
    return rank(b, policy);
}

// ---------------------------------------------------------------------------
// Characters
// ---------------------------------------------------------------------------

/// max |f(bracket(X_i, X_j))| over basis pairs.
template <ScalarBackend S>
double character_defect(const LieAlgebraRep<S>& rep, const std::vector<S>& coords) {
    const std::size_t n = rep.n();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            S acc = scalar_traits<S>::zero();
            for (std::size_t k = 0; k < n; ++k) acc += rep.c.at(i, j, k) * coords[k];
            worst = std::max(worst, scalar_traits<S>::abs(acc));
        }
    return worst;
}

/// Tolerance for deciding f(L^2) = 0 on the float backend.
template <ScalarBackend S>
double character_tolerance(const LieAlgebraRep<S>& rep, const std::vector<S>& coords) {
    if constexpr (scalar_traits<S>::is_exact) return 0.0;
    double fmax = 0.0;
    for (const auto& v : coords) fmax = std::max(fmax, scalar_traits<S>::abs(v));
    return 1e-7 * (1.0 + fmax) * (1.0 + rep.c.max_abs());
}

template <ScalarBackend S>
Character<S> make_character(const LieAlgebraRep<S>& rep, std::vector<S> coords) {
    if (coords.size() != rep.n())
        throw ShapeMismatch("make_character: coordinate count must equal dim L");
    Character<S> f;
    f.vanishes_on_derived =
        character_defect(rep, coords) <= character_tolerance(rep, coords);
    f.coords = std::move(coords);
    return f;
}

/// Coordinates of f restricted to S, in S's basis.
template <ScalarBackend S>
Character<S> restrict_functional(const Character<S>& f, const SubalgebraSpec<S>& sub) {
    if (f.coords.size() != sub.ambient_dim())
        throw ShapeMismatch("restrict_functional: dimension mismatch");
    Character<S> out;
    out.coords.resize(sub.dim(), scalar_traits<S>::zero());
    for (std::size_t p = 0; p < sub.dim(); ++p) {
        S acc = scalar_traits<S>::zero();
        for (std::size_t k = 0; k < sub.ambient_dim(); ++k) acc += sub.basis(p, k) * f.coords[k];
        out.coords[p] = acc;
    }
    out.vanishes_on_derived = f.vanishes_on_derived;
    return out;
}

/// The representation of a subalgebra: basis matrices are the row-coefficient
/// combinations of the parent's operators.
template <ScalarBackend S>
LieAlgebraRep<S> sub_rep(const LieAlgebraRep<S>& rep, const SubalgebraSpec<S>& sub,
                         const RankPolicy& policy = {}) {
    const std::size_t n = rep.n(), m = rep.m();
    std::vector<Matrix<S>> mats;
    mats.reserve(sub.dim());
    for (std::size_t p = 0; p < sub.dim(); ++p) {
        Matrix<S> y(m, m);
        for (std::size_t k = 0; k < n; ++k) {
            if (scalar_traits<S>::is_zero(sub.basis(p, k))) continue;
            y = y + sub.basis(p, k) * rep.family.ops[k];
        }
        mats.push_back(std::move(y));
    }
    OperatorFamily<S> family(m, std::move(mats));
    return build_rep(family, rep.bracket_sign, policy);
}

}  // namespace liespec
