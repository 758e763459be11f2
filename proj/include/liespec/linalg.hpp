#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "liespec/errors.hpp"
#include "liespec/matrix.hpp"

namespace liespec {

/// Numerical-rank policy. The relative tolerance only matters on the float
/// backend; exact Gaussian elimination ignores it.
struct RankPolicy {
    double rel_tol = 1e-9;
    /// Singular values within this factor of the rank threshold flag the
    /// decision as ill-conditioned.
    double margin_factor = 10.0;
};

struct RankInfo {
    std::size_t rank = 0;
    bool ill_conditioned = false;
    double sigma_max = 0.0;
    double threshold = 0.0;
};

// ---------------------------------------------------------------------------
// Eigen interop (float backend)
// ---------------------------------------------------------------------------

inline Eigen::MatrixXcd to_eigen(const Matrix<Complexd>& m) {
    Eigen::MatrixXcd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

inline Matrix<Complexd> from_eigen(const Eigen::MatrixXcd& m) {
    Matrix<Complexd> out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

inline void require_finite(const Matrix<Complexd>& m, const char* what) {
    if (!m.all_finite()) throw NonFiniteEntry(std::string(what) + ": NaN/Inf entry");
}

namespace detail {

inline std::vector<double> singular_values(const Matrix<Complexd>& m) {
    if (m.rows() == 0 || m.cols() == 0) return {};
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
    const auto& sv = svd.singularValues();
    return {sv.data(), sv.data() + sv.size()};
}

// Exact Gaussian elimination; returns pivot count. When `kernel` is non-null
// it receives a basis of the null space (columns).
inline std::size_t exact_elimination(Matrix<GaussianRational> a,
                                     Matrix<GaussianRational>* kernel) {
    const std::size_t rows = a.rows(), cols = a.cols();
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        // pivot by float magnitude keeps entry growth moderate
        std::size_t best = r;
        double best_abs = scalar_traits<GaussianRational>::abs(a(r, c));
        for (std::size_t i = r + 1; i < rows; ++i) {
            double v = scalar_traits<GaussianRational>::abs(a(i, c));
            if (v > best_abs) {
                best_abs = v;
                best = i;
            }
        }
        if (a(best, c).is_zero()) continue;
        if (best != r)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(r, j), a(best, j));
        const GaussianRational inv = scalar_traits<GaussianRational>::one() / a(r, c);
        for (std::size_t j = c; j < cols; ++j) a(r, j) = inv * a(r, j);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a(i, c).is_zero()) continue;
            const GaussianRational f = a(i, c);
            for (std::size_t j = c; j < cols; ++j) a(i, j) = a(i, j) - f * a(r, j);
        }
        pivot_col.push_back(c);
        ++r;
    }
    if (kernel) {
        std::vector<bool> is_pivot(cols, false);
        for (auto c : pivot_col) is_pivot[c] = true;
        std::size_t nk = cols - pivot_col.size();
        *kernel = Matrix<GaussianRational>(cols, nk);
        std::size_t k = 0;
        for (std::size_t c = 0; c < cols; ++c) {
            if (is_pivot[c]) continue;
            (*kernel)(c, k) = scalar_traits<GaussianRational>::one();
            for (std::size_t p = 0; p < pivot_col.size(); ++p)
                (*kernel)(pivot_col[p], k) = -a(p, c);
            ++k;
        }
    }
    return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Rank / kernel
// ---------------------------------------------------------------------------

template <ScalarBackend S>
RankInfo rank_info(const Matrix<S>& m, const RankPolicy& policy = {}) {
    RankInfo info;
    if (m.rows() == 0 || m.cols() == 0) return info;
    if constexpr (scalar_traits<S>::is_exact) {
        info.rank = detail::exact_elimination(m, nullptr);
    } else {
        require_finite(m, "rank");
        auto sv = detail::singular_values(m);
        info.sigma_max = sv.empty() ? 0.0 : sv.front();
        // sigma_max = 0 means the zero matrix: rank 0, no threshold division
        info.threshold =
            policy.rel_tol * info.sigma_max * static_cast<double>(std::max(m.rows(), m.cols()));
        for (double s : sv) {
            if (s > info.threshold) ++info.rank;
            if (info.threshold > 0.0 && s > info.threshold / policy.margin_factor &&
                s < info.threshold * policy.margin_factor)
                info.ill_conditioned = true;
        }
    }
    return info;
}

template <ScalarBackend S>
std::size_t rank(const Matrix<S>& m, const RankPolicy& policy = {}) {
    return rank_info(m, policy).rank;
}

template <ScalarBackend S>
std::size_t kernel_dim(const Matrix<S>& m, const RankPolicy& policy = {}) {
    return m.cols() - rank(m, policy);
}

/// Columns form a basis of the (numerical) null space.
template <ScalarBackend S>
Matrix<S> null_space(const Matrix<S>& m, const RankPolicy& policy = {}) {
    if constexpr (scalar_traits<S>::is_exact) {
        Matrix<S> kernel;
        detail::exact_elimination(m, &kernel);
        return kernel;
    } else {
        if (m.rows() == 0) return Matrix<S>::identity(m.cols());
        require_finite(m, "null_space");
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m), Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        double smax = sv.size() ? sv(0) : 0.0;
        double thr = policy.rel_tol * smax * static_cast<double>(std::max(m.rows(), m.cols()));
        std::size_t r = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > thr) ++r;
        Eigen::MatrixXcd v = svd.matrixV();
        return from_eigen(v.rightCols(v.cols() - static_cast<Eigen::Index>(r)));
    }
}

// ---------------------------------------------------------------------------
// Eigenvalues / operator norm
// ---------------------------------------------------------------------------

template <ScalarBackend S>
bool is_triangular(const Matrix<S>& m, bool upper) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            bool below = upper ? (i > j) : (i < j);
            if (below && !scalar_traits<S>::is_zero(m(i, j))) return false;
        }
    return true;
}

/// Eigenvalues with algebraic multiplicity. Float backend: full complex
/// eigensolver. Exact backend: triangular matrices only (the diagonal).
template <ScalarBackend S>
std::vector<S> eigenvalues(const Matrix<S>& m) {
    if (!m.is_square()) throw ShapeMismatch("eigenvalues: matrix must be square");
    if constexpr (scalar_traits<S>::is_exact) {
        if (!is_triangular(m, true) && !is_triangular(m, false))
            throw Error("eigenvalues: exact backend supports triangular matrices only");
        std::vector<S> out(m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i) out[i] = m(i, i);
        return out;
    } else {
        require_finite(m, "eigenvalues");
        if (m.rows() == 0) return {};
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(m), false);
        if (es.info() != Eigen::Success)
            throw ConvergenceFailure("eigenvalues: complex eigensolver did not converge");
        const auto& ev = es.eigenvalues();
        return {ev.data(), ev.data() + ev.size()};
    }
}

/// Largest singular value (matrix 2-norm on E = (C^m, ||.||_2)).
template <ScalarBackend S>
double operator_norm(const Matrix<S>& m) {
    if (!m.is_square()) throw ShapeMismatch("operator_norm: matrix must be square");
    if (m.rows() == 0) return 0.0;
    if constexpr (scalar_traits<S>::is_exact) {
        // A^H A diagonal (in particular the golden example) yields the norm
        // exactly; otherwise fall back to the float path.
        Matrix<S> gram = m.adjoint() * m;
        bool diag = true;
        for (std::size_t i = 0; i < gram.rows() && diag; ++i)
            for (std::size_t j = 0; j < gram.cols(); ++j)
                if (i != j && !gram(i, j).is_zero()) {
                    diag = false;
                    break;
                }
        if (diag) {
            Rational best(0);
            for (std::size_t i = 0; i < gram.rows(); ++i)
                if (gram(i, i).re > best) best = gram(i, i).re;
            if (auto root = exact_sqrt(best)) return static_cast<double>(*root);
            return std::sqrt(static_cast<double>(best));
        }
        return operator_norm(to_float_matrix(m));
    } else {
        require_finite(m, "operator_norm");
        auto sv = detail::singular_values(m);
        return sv.empty() ? 0.0 : sv.front();
    }
}

// ---------------------------------------------------------------------------
// Linear solves
// ---------------------------------------------------------------------------

/// Exact linear solve A x = b (single-column rhs). Throws on inconsistent
/// systems; free coordinates are set to zero.
inline std::vector<GaussianRational> exact_solve(const Matrix<GaussianRational>& a,
                                                 const Matrix<GaussianRational>& b) {
    const std::size_t rows = a.rows(), n = a.cols();
    Matrix<GaussianRational> aug(rows, n + 1);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n) = b(i, 0);
    }
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < rows; ++c) {
        std::size_t sel = r;
        while (sel < rows && aug(sel, c).is_zero()) ++sel;
        if (sel == rows) continue;
        if (sel != r)
            for (std::size_t j = 0; j <= n; ++j) std::swap(aug(r, j), aug(sel, j));
        GaussianRational inv = scalar_traits<GaussianRational>::one() / aug(r, c);
        for (std::size_t j = c; j <= n; ++j) aug(r, j) = inv * aug(r, j);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || aug(i, c).is_zero()) continue;
            GaussianRational f = aug(i, c);
            for (std::size_t j = c; j <= n; ++j) aug(i, j) = aug(i, j) - f * aug(r, j);
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (!aug(i, n).is_zero()) throw Error("exact_solve: inconsistent system");
    std::vector<GaussianRational> x(n, scalar_traits<GaussianRational>::zero());
    for (std::size_t p = 0; p < pivot_col.size(); ++p) x[pivot_col[p]] = aug(p, n);
    return x;
}

/// Minimizes ||A x - b||. Float: complete orthogonal decomposition. Exact:
/// normal equations, which stay exact in exact arithmetic.
template <ScalarBackend S>
std::vector<S> least_squares(const Matrix<S>& a, const std::vector<S>& b) {
    if (a.rows() != b.size()) throw ShapeMismatch("least_squares: rhs length mismatch");
    if constexpr (scalar_traits<S>::is_exact) {
        Matrix<S> ah = a.adjoint();
        Matrix<S> gram = ah * a;
        Matrix<S> rhs(a.cols(), 1);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            S acc = scalar_traits<S>::zero();
            for (std::size_t k = 0; k < a.rows(); ++k) acc += ah(i, k) * b[k];
            rhs(i, 0) = acc;
        }
        return exact_solve(gram, rhs);
    } else {
        Eigen::MatrixXcd ea = to_eigen(a);
        Eigen::VectorXcd eb(static_cast<Eigen::Index>(b.size()));
        for (std::size_t i = 0; i < b.size(); ++i) eb(static_cast<Eigen::Index>(i)) = b[i];
        Eigen::VectorXcd x = ea.completeOrthogonalDecomposition().solve(eb);
        return {x.data(), x.data() + x.size()};
    }
}

/// Row-space basis in (tolerance-guarded) reduced row echelon form; the rows
/// of the result span the row space of `m`. `scale_floor` anchors the pivot
/// threshold when the rows themselves may be pure cancellation noise (for
/// example brackets of nearly-commuting operators).
template <ScalarBackend S>
Matrix<S> row_space_basis(const Matrix<S>& m, const RankPolicy& policy = {},
                          double scale_floor = 0.0) {
    const std::size_t rows = m.rows(), cols = m.cols();
    if (rows == 0 || cols == 0) return Matrix<S>(0, cols);
    Matrix<S> a = m;
    double scale = std::max(a.max_abs(), scale_floor);
    double tol = scalar_traits<S>::is_exact
                     ? 0.0
                     : policy.rel_tol * scale * static_cast<double>(std::max(rows, cols));
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t best = r;
        double best_abs = scalar_traits<S>::abs(a(r, c));
        for (std::size_t i = r + 1; i < rows; ++i) {
            double v = scalar_traits<S>::abs(a(i, c));
            if (v > best_abs) {
                best_abs = v;
                best = i;
            }
        }
        if (best_abs <= tol || scalar_traits<S>::is_zero(a(best, c))) continue;
        if (best != r)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(r, j), a(best, j));
        S inv = scalar_traits<S>::one() / a(r, c);
        for (std::size_t j = c; j < cols; ++j) a(r, j) = inv * a(r, j);
        a(r, c) = scalar_traits<S>::one();
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            S f = a(i, c);
            if (scalar_traits<S>::is_zero(f)) continue;
            for (std::size_t j = c; j < cols; ++j) a(i, j) = a(i, j) - f * a(r, j);
            a(i, c) = scalar_traits<S>::zero();
        }
        ++r;
    }
    Matrix<S> out(r, cols);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < cols; ++j) out(i, j) = a(i, j);
    return out;
}

}  // namespace liespec
