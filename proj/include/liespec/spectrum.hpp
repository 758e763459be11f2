#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liespec/errors.hpp"
#include "liespec/homology.hpp"
#include "liespec/lie_structure.hpp"
#include "liespec/linalg.hpp"
#include "liespec/matrix.hpp"

namespace liespec {

struct SpectrumOptions {
    /// Dedup distance for characters (infinity norm on coordinates).
    double dedup_tol = 1e-7;
    /// Relative singular-value threshold for joint-eigenspace detection.
    double eigenspace_tol = 1e-6;
    /// Hard cap on the candidate count.
    std::size_t candidate_cap = 100000;
    /// Exact backend: tolerance and denominator cap when snapping float
    /// candidates to rationals.
    double rationalize_tol = 1e-6;
    std::uint64_t rationalize_max_den = 1000000;
};

/// Weights (with multiplicity) of a simultaneous triangularization, plus the
/// unitary change of basis that achieves triangular form.
struct WeightList {
    std::vector<std::vector<Complexd>> weights;  // one per flag step, n coords each
    Matrix<Complexd> basis;                      // unitary
    double triangular_residual = 0.0;
};

// ---------------------------------------------------------------------------
// Constructive Lie's theorem (float backend)
// ---------------------------------------------------------------------------

namespace detail {

inline bool lex_less(const Complexd& a, const Complexd& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

/// Eigenvalue-cluster means of a small matrix. Raw eigenvalues of defective
/// blocks scatter by O(eps^(1/k)); the mean of each scattered cluster is a
/// trace-type invariant and recovers the true value to working accuracy.
inline std::vector<Complexd> cluster_means(const Eigen::MatrixXcd& m, double radius) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    if (es.info() != Eigen::Success)
        throw ConvergenceFailure("cluster_means: eigensolver failed");
    std::vector<Complexd> vals(es.eigenvalues().data(),
                               es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(vals.begin(), vals.end(), lex_less);
    std::vector<Complexd> means;
    std::vector<std::size_t> counts;
    for (const auto& v : vals) {
        bool placed = false;
        for (std::size_t i = 0; i < means.size(); ++i)
            if (std::abs(v - means[i]) <= radius) {
                means[i] = (means[i] * static_cast<double>(counts[i]) + v) /
                           static_cast<double>(counts[i] + 1);
                ++counts[i];
                placed = true;
                break;
            }
        if (!placed) {
            means.push_back(v);
            counts.push_back(1);
        }
    }
    return means;
}

/// Perturbation scatter radius of eigenvalues of a k x k defective block.
inline double eigen_scatter_radius(std::size_t k, double scale) {
    double root = std::pow(2.3e-16, 1.0 / static_cast<double>(std::max<std::size_t>(k, 1)));
    return (1.0 + scale) * std::max(1e-7, 3.0 * root);
}

/// Joint weight space of a solvable operator family: the FULL subspace
/// { w : T_i w = lambda_i w for all i } for one weight lambda, computed by
/// recursion along a codimension-1 ideal. The recursion hands back the
/// subspace itself, never rebuilding it from weight values, so eigenvalue
/// scatter on defective blocks does not cascade.
inline std::pair<Eigen::MatrixXcd, std::vector<Complexd>> joint_weight_space(
    const StructureConstants<Complexd>& c, const std::vector<Eigen::MatrixXcd>& mats,
    std::size_t space_dim, const SpectrumOptions& opts, const RankPolicy& policy) {
    const std::size_t n = c.n;
    if (space_dim == 0) throw NumericalFailure("joint_weight_space: zero-dimensional space");
    if (n == 0)
        return {Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(space_dim),
                                           static_cast<Eigen::Index>(space_dim)),
                {}};

    // derived subalgebra from the structure constants
    Matrix<Complexd> rows(n * (n - 1) / 2, n);
    std::size_t r = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j, ++r) {
            auto v = c.bracket_coords(i, j);
            for (std::size_t k = 0; k < n; ++k) rows(r, k) = v[k];
        }
    Matrix<Complexd> derived = row_space_basis(rows, policy, 1.0 + c.max_abs());
    const std::size_t d = derived.rows();
    if (d >= n) throw NotSolvable("common_weight_vector: L = [L,L]");

    // pivot columns of the RREF rows
    std::vector<bool> pivot(n, false);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(derived(i, j)) > 0.5) {
                pivot[j] = true;
                break;
            }
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < n; ++j)
        if (!pivot[j]) free_cols.push_back(j);
    const std::size_t z_col = free_cols.back();

    // P: codimension-1 ideal containing the derived subalgebra
    Matrix<Complexd> p(n - 1, n);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < n; ++j) p(i, j) = derived(i, j);
    for (std::size_t t = 0; t + 1 < free_cols.size(); ++t)
        p(d + t, free_cols[t]) = 1.0;

    // sub-structure constants: bracket(P_p, P_q) expressed in the P basis
    StructureConstants<Complexd> sub_c(n - 1);
    if (n > 2) {
        Eigen::MatrixXcd pt(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n - 1));
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                pt(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = p(i, j);
        auto pt_solver = pt.completeOrthogonalDecomposition();
        for (std::size_t a = 0; a + 1 < n; ++a)
            for (std::size_t b = a + 1; b + 1 < n; ++b) {
                std::vector<Complexd> u(n), w(n);
                for (std::size_t k = 0; k < n; ++k) {
                    u[k] = p(a, k);
                    w[k] = p(b, k);
                }
                auto br = c.bracket_of(u, w);
                Eigen::VectorXcd rhs(static_cast<Eigen::Index>(n));
                for (std::size_t k = 0; k < n; ++k) rhs(static_cast<Eigen::Index>(k)) = br[k];
                Eigen::VectorXcd y = pt_solver.solve(rhs);
                for (std::size_t k = 0; k + 1 < n; ++k) {
                    sub_c.at(a, b, k) = y(static_cast<Eigen::Index>(k));
                    sub_c.at(b, a, k) = -y(static_cast<Eigen::Index>(k));
                }
            }
    }

    std::vector<Eigen::MatrixXcd> sub_mats;
    sub_mats.reserve(n - 1);
    for (std::size_t a = 0; a + 1 < n; ++a) {
        Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(space_dim),
                                                    static_cast<Eigen::Index>(space_dim));
        for (std::size_t k = 0; k < n; ++k)
            if (p(a, k) != Complexd{0.0, 0.0}) y += p(a, k) * mats[k];
        sub_mats.push_back(std::move(y));
    }

    auto [q, lambda_sub] = joint_weight_space(sub_c, sub_mats, space_dim, opts, policy);

    // restrict the complementary generator to the ideal's joint eigenspace
    // (Lie's lemma makes that space invariant under all of L)
    Eigen::MatrixXcd zw = q.adjoint() * mats[z_col] * q;
    const std::size_t w_dim = static_cast<std::size_t>(zw.rows());
    double z_scale = zw.rows() ? zw.cwiseAbs().maxCoeff() : 0.0;
    double radius = eigen_scatter_radius(w_dim, z_scale);
    std::vector<Complexd> means = cluster_means(zw, radius);
    Complexd mu = means.front();
    for (const auto& v : means)
        if (lex_less(v, mu)) mu = v;

    // geometric eigenspace of the restriction at the cluster mean
    Eigen::MatrixXcd shifted =
        zw - mu * Eigen::MatrixXcd::Identity(zw.rows(), zw.cols());
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 0.0;
    double thr = std::max(opts.eigenspace_tol * smax, radius);
    Eigen::Index kept = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thr) ++kept;
    Eigen::Index null_dim = zw.cols() - kept;
    if (null_dim <= 0)
        throw NumericalFailure("joint_weight_space: no eigenspace at the chosen eigenvalue");
    Eigen::MatrixXcd w = q * svd.matrixV().rightCols(null_dim);

    // express the weight in the X basis: P*lambda = lambda_sub, lambda_z = mu
    Eigen::MatrixXcd msys(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::VectorXcd rhs(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) msys(static_cast<Eigen::Index>(i),
                                                 static_cast<Eigen::Index>(j)) = p(i, j);
        rhs(static_cast<Eigen::Index>(i)) = lambda_sub[i];
    }
    msys.row(static_cast<Eigen::Index>(n - 1)).setZero();
    msys(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(z_col)) = 1.0;
    rhs(static_cast<Eigen::Index>(n - 1)) = mu;
    Eigen::VectorXcd lam = msys.fullPivLu().solve(rhs);

    std::vector<Complexd> lambda(n);
    for (std::size_t i = 0; i < n; ++i) lambda[i] = lam(static_cast<Eigen::Index>(i));
    return {w, lambda};
}

}  // namespace detail

/// Weights of an arbitrary module action of the algebra: `mats` are the images
/// of the basis on C^k. Returns one weight per flag step (k total).
inline WeightList module_weights(const StructureConstants<Complexd>& c,
                                 const std::vector<Matrix<Complexd>>& mats, std::size_t space_dim,
                                 const SpectrumOptions& opts = {}, const RankPolicy& policy = {}) {
    const std::size_t n = c.n;
    std::vector<Eigen::MatrixXcd> emats;
    emats.reserve(n);
    for (const auto& m : mats) emats.push_back(to_eigen(m));

    WeightList out;
    Eigen::MatrixXcd flag(static_cast<Eigen::Index>(space_dim), 0);
    for (std::size_t t = 0; t < space_dim; ++t) {
        const std::size_t k = space_dim - t;
        Eigen::MatrixXcd full = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(space_dim),
                                                           static_cast<Eigen::Index>(space_dim));
        if (t > 0) {
            Eigen::HouseholderQR<Eigen::MatrixXcd> qr(flag);
            full = qr.householderQ();
        }
        std::vector<Eigen::MatrixXcd> quotient;
        quotient.reserve(n);
        for (const auto& x : emats)
            quotient.push_back((full.adjoint() * x * full)
                                   .bottomRightCorner(static_cast<Eigen::Index>(k),
                                                      static_cast<Eigen::Index>(k)));
        auto [wspace, lambda] = detail::joint_weight_space(c, quotient, k, opts, policy);
        out.weights.push_back(std::move(lambda));

        Eigen::VectorXcd v = wspace.col(0);
        Eigen::VectorXcd lift = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space_dim));
        lift.tail(static_cast<Eigen::Index>(k)) = v;
        Eigen::VectorXcd col = full * lift;
        // re-orthogonalize against the flag built so far
        for (int pass = 0; pass < 2; ++pass)
            if (flag.cols() > 0) col -= flag * (flag.adjoint() * col);
        double nrm = col.norm();
        if (nrm < 1e-12)
            throw NumericalFailure("module_weights: degenerate flag extension");
        col /= nrm;
        flag.conservativeResize(Eigen::NoChange, flag.cols() + 1);
        flag.col(flag.cols() - 1) = col;
    }

    out.basis = from_eigen(flag);
    double residual = 0.0;
    for (const auto& x : emats) {
        Eigen::MatrixXcd tri = flag.adjoint() * x * flag;
        double scale = 1.0 + x.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < tri.rows(); ++i)
            for (Eigen::Index j = 0; j < i; ++j)
                residual = std::max(residual, std::abs(tri(i, j)) / scale);
    }
    out.triangular_residual = residual;
    return out;
}

// float conversions used by the exact pipeline
inline std::vector<Matrix<Complexd>> to_float_ops(const std::vector<Matrix<GaussianRational>>& v) {
    std::vector<Matrix<Complexd>> out;
    out.reserve(v.size());
    for (const auto& m : v) out.push_back(to_float_matrix(m));
    return out;
}

inline LieAlgebraRep<Complexd> to_float_rep(const LieAlgebraRep<GaussianRational>& rep) {
    LieAlgebraRep<Complexd> out;
    out.family.dim_E = rep.family.dim_E;
    out.family.names = rep.family.names;
    out.family.ops = to_float_ops(rep.family.ops);
    out.bracket_sign = rep.bracket_sign;
    out.c = StructureConstants<Complexd>(rep.n());
    for (std::size_t i = 0; i < rep.c.c.size(); ++i) out.c.c[i] = to_complexd(rep.c.c[i]);
    out.closure_residual = rep.closure_residual;
    out.jacobi_residual = rep.jacobi_residual;
    return out;
}

/// Weights of E under a solvable rep, by recursive common-eigenvector
/// extraction along a codimension-1 ideal chain.
template <ScalarBackend S>
WeightList weights(const LieAlgebraRep<S>& rep, const RankPolicy& policy = {},
                   const SpectrumOptions& opts = {}) {
    if (!is_solvable(rep, policy)) throw NotSolvable("weights: rep is not solvable");
    if constexpr (scalar_traits<S>::is_exact) {
        return module_weights(to_float_rep(rep).c, to_float_ops(rep.family.ops), rep.m(), opts,
                              policy);
    } else {
        return module_weights(rep.c, rep.family.ops, rep.m(), opts, policy);
    }
}

/// Weights of the adjoint action; characters of L that vanish on L^2.
template <ScalarBackend S>
std::vector<std::vector<Complexd>> adjoint_weights(const LieAlgebraRep<S>& rep,
                                                   const RankPolicy& policy = {},
                                                   const SpectrumOptions& opts = {}) {
    if (!is_solvable(rep, policy)) throw NotSolvable("adjoint_weights: rep is not solvable");
    if (rep.n() == 0) return {};
    if constexpr (scalar_traits<S>::is_exact) {
        auto frep = to_float_rep(rep);
        auto ad = adjoint_rep(frep);
        return module_weights(frep.c, ad.ops, frep.n(), opts, policy).weights;
    } else {
        auto ad = adjoint_rep(rep);
        return module_weights(rep.c, ad.ops, rep.n(), opts, policy).weights;
    }
}

// ---------------------------------------------------------------------------
// Candidates
// ---------------------------------------------------------------------------

template <ScalarBackend S>
struct Candidate {
    std::vector<S> coords;
    std::string provenance;
};

template <ScalarBackend S>
struct CandidateSet {
    std::vector<Candidate<S>> items;
    std::vector<std::string> warnings;
};

namespace detail {

inline double inf_distance(const std::vector<Complexd>& a, const std::vector<Complexd>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

/// Orthogonal projector columns onto { f : f(L^2) = 0 }. Bracket rows at the
/// cancellation-noise level are dropped rather than treated as constraints.
inline std::optional<Eigen::MatrixXcd> character_space(const StructureConstants<Complexd>& c,
                                                       const RankPolicy& policy) {
    const std::size_t n = c.n;
    if (n == 0) return std::nullopt;
    const double row_floor = policy.rel_tol * (1.0 + c.max_abs());
    std::vector<std::vector<Complexd>> kept;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            auto v = c.bracket_coords(i, j);
            double mag = 0.0;
            for (const auto& z : v) mag = std::max(mag, std::abs(z));
            if (mag > row_floor) kept.push_back(std::move(v));
        }
    if (kept.empty()) return std::nullopt;
    Matrix<Complexd> rows(kept.size(), n);
    for (std::size_t i = 0; i < kept.size(); ++i)
        for (std::size_t k = 0; k < n; ++k) rows(i, k) = kept[i][k];
    Matrix<Complexd> ns = null_space(rows, policy);
    if (ns.cols() == static_cast<std::size_t>(n)) return std::nullopt;  // no constraint
    return to_eigen(ns);
}

/// Float candidate enumeration: weights shifted by signed subsets of the
/// nonzero adjoint weights, projected onto the character space, deduplicated.
inline CandidateSet<Complexd> float_candidates(const LieAlgebraRep<Complexd>& rep,
                                               const RankPolicy& policy,
                                               const SpectrumOptions& opts) {
    const std::size_t n = rep.n();
    CandidateSet<Complexd> out;

    WeightList wl = module_weights(rep.c, rep.family.ops, rep.m(), opts, policy);
    std::vector<std::vector<Complexd>> mus;
    for (const auto& w : wl.weights) {
        bool dup = false;
        for (const auto& seen : mus)
            if (inf_distance(w, seen) <= opts.dedup_tol) {
                dup = true;
                break;
            }
        if (!dup) mus.push_back(w);
    }

    double op_scale = 0.0;
    for (const auto& x : rep.family.ops) op_scale = std::max(op_scale, x.max_abs());
    std::vector<std::vector<Complexd>> shifts;
    if (n > 0) {
        for (const auto& aw : adjoint_weights(rep, policy, opts)) {
            double mag = 0.0;
            for (const auto& v : aw) mag = std::max(mag, std::abs(v));
            if (mag > 1e-8 * (1.0 + op_scale)) shifts.push_back(aw);
        }
    }

    // 3^r sign patterns per weight: each shift is out, plus, or minus
    std::size_t combos = 1;
    for (std::size_t i = 0; i < shifts.size(); ++i) {
        combos *= 3;
        if (combos * mus.size() > opts.candidate_cap)
            throw CombinatorialBlowup("candidate_characters: more than " +
                                      std::to_string(opts.candidate_cap) + " candidates");
    }

    auto projector = character_space(rep.c, policy);

    for (std::size_t mi = 0; mi < mus.size(); ++mi) {
        for (std::size_t pattern = 0; pattern < combos; ++pattern) {
            std::vector<Complexd> f = mus[mi];
            std::string prov = "weight " + std::to_string(mi + 1);
            std::size_t rem = pattern;
            for (std::size_t s = 0; s < shifts.size(); ++s) {
                std::size_t code = rem % 3;
                rem /= 3;
                if (code == 0) continue;
                double sign = (code == 1) ? 1.0 : -1.0;
                for (std::size_t k = 0; k < n; ++k) f[k] += sign * shifts[s][k];
                prov += (code == 1 ? " +adj" : " -adj") + std::to_string(s + 1);
            }
            if (projector) {
                Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
                for (std::size_t k = 0; k < n; ++k) v(static_cast<Eigen::Index>(k)) = f[k];
                Eigen::VectorXcd proj = (*projector) * ((*projector).adjoint() * v);
                for (std::size_t k = 0; k < n; ++k) f[k] = proj(static_cast<Eigen::Index>(k));
            }
            bool dup = false;
            for (const auto& item : out.items)
                if (inf_distance(item.coords, f) <= opts.dedup_tol) {
                    dup = true;
                    break;
                }
            if (!dup) out.items.push_back({std::move(f), std::move(prov)});
        }
    }
    return out;
}

}  // namespace detail

/// Candidate spectrum points: weights of E shifted by signed subsets of the
/// nonzero adjoint weights (both signs hedge the bracket-orientation
/// ambiguity). Exact backend candidates are rationalized float candidates
/// verified to vanish on L^2 exactly.
template <ScalarBackend S>
CandidateSet<S> candidate_characters(const LieAlgebraRep<S>& rep, const RankPolicy& policy = {},
                                     const SpectrumOptions& opts = {}) {
    if (!is_solvable(rep, policy))
        throw NotSolvable("candidate_characters: rep is not solvable");
    if constexpr (scalar_traits<S>::is_exact) {
        auto frep = to_float_rep(rep);
        CandidateSet<Complexd> fc = detail::float_candidates(frep, policy, opts);
        CandidateSet<S> out;
        out.warnings = fc.warnings;
        for (auto& item : fc.items) {
            std::vector<GaussianRational> coords;
            coords.reserve(item.coords.size());
            bool ok = true;
            for (const auto& z : item.coords) {
                auto g = rationalize_complex(z, opts.rationalize_tol, opts.rationalize_max_den);
                if (!g) {
                    ok = false;
                    break;
                }
                coords.push_back(*g);
            }
            if (ok && character_defect(rep, coords) != 0.0) ok = false;
            if (!ok) {
                out.warnings.push_back("candidate dropped (not exactly rationalizable): " +
                                       item.provenance);
                continue;
            }
            bool dup = false;
            for (const auto& seen : out.items)
                if (seen.coords == coords) {
                    dup = true;
                    break;
                }
            if (!dup) out.items.push_back({std::move(coords), std::move(item.provenance)});
        }
        return out;
    } else {
        return detail::float_candidates(rep, policy, opts);
    }
}

// ---------------------------------------------------------------------------
// Membership and the joint spectrum
// ---------------------------------------------------------------------------

struct SpectralVerdict {
    bool in_spectrum = false;
    BettiVector betti;
    bool ill_conditioned = false;
};

/// Definition-2 membership test: f is in Sp(L,E) iff some homology degree of
/// (E (x) Wedge L, d(f)) is nonzero.
template <ScalarBackend S>
SpectralVerdict check_character(const LieAlgebraRep<S>& rep, const std::vector<S>& f,
                                const RankPolicy& policy = {}) {
    double defect = character_defect(rep, f);
    if (defect > character_tolerance(rep, f))
        throw NotACharacter("check_character: f(L^2) != 0 (defect " + std::to_string(defect) +
                            ")");
    ChainComplexInstance<S> inst = build_complex(rep, f, policy);
    SpectralVerdict verdict;
    std::vector<std::string> warnings;
    verdict.betti = betti(inst, policy, &warnings);
    verdict.in_spectrum = verdict.betti.any_nonzero();
    verdict.ill_conditioned = !warnings.empty();
    return verdict;
}

template <ScalarBackend S>
struct SpectrumEntry {
    Character<S> point;
    BettiVector betti;
    std::string provenance;
    bool ill_conditioned = false;
};

template <ScalarBackend S>
struct SpectrumResult {
    std::vector<SpectrumEntry<S>> entries;
    std::string fingerprint;
    RankPolicy policy;
    std::vector<std::string> warnings;

    std::vector<std::vector<S>> points() const {
        std::vector<std::vector<S>> out;
        out.reserve(entries.size());
        for (const auto& e : entries) out.push_back(e.point.coords);
        return out;
    }
};

namespace detail {

template <ScalarBackend S>
bool lex_scalar_less(const S& a, const S& b) {
    if constexpr (scalar_traits<S>::is_exact) {
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    } else {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    }
}

template <ScalarBackend S>
bool lex_coords_less(const std::vector<S>& a, const std::vector<S>& b) {
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (lex_scalar_less(a[i], b[i])) return true;
        if (lex_scalar_less(b[i], a[i])) return false;
    }
    return a.size() < b.size();
}

template <ScalarBackend S>
std::string rep_fingerprint(const LieAlgebraRep<S>& rep) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ull;
        }
    };
    mix(std::to_string(rep.m()) + ":" + std::to_string(rep.n()) + ":" +
        std::to_string(rep.bracket_sign));
    char buf[64];
    for (const auto& x : rep.family.ops)
        for (const auto& v : x.data()) {
            Complexd z = to_complexd(v);
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g;", z.real(), z.imag());
            mix(buf);
        }
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace detail

/// The joint spectrum Sp(L,E): candidate characters filtered by the homology
/// test, each carrying its Betti vector. Empty results raise
/// IncompleteCandidates (Theorem 5 guarantees a nonempty spectrum).
template <ScalarBackend S>
SpectrumResult<S> joint_spectrum(const LieAlgebraRep<S>& rep, const RankPolicy& policy = {},
                                 const SpectrumOptions& opts = {}) {
    if (!is_solvable(rep, policy)) throw NotSolvable("joint_spectrum: rep is not solvable");
    LieAlgebraRep<S> cal = with_calibrated_bracket_sign(rep, policy);

    SpectrumResult<S> out;
    out.policy = policy;
    out.fingerprint = detail::rep_fingerprint(cal);

    if (cal.n() == 0) {
        // 0 -> E -> 0: H_0 = E is nonzero, the empty functional is the spectrum
        SpectrumEntry<S> entry;
        entry.point = Character<S>{{}, true};
        entry.betti.beta = {cal.m()};
        entry.provenance = "trivial algebra";
        out.entries.push_back(std::move(entry));
        return out;
    }

    CandidateSet<S> candidates = candidate_characters(cal, policy, opts);
    out.warnings = candidates.warnings;

    for (auto& cand : candidates.items) {
        SpectralVerdict verdict = check_character(cal, cand.coords, policy);
        if (!verdict.in_spectrum) continue;
        SpectrumEntry<S> entry;
        entry.point = make_character(cal, cand.coords);
        entry.betti = verdict.betti;
        entry.provenance = cand.provenance;
        entry.ill_conditioned = verdict.ill_conditioned;
        if (entry.ill_conditioned)
            out.warnings.push_back("spectrum point near rank threshold: " + cand.provenance);
        out.entries.push_back(std::move(entry));
    }

    if (out.entries.empty())
        throw IncompleteCandidates(
            "joint_spectrum: no candidate survived the homology filter; Theorem 5 requires a "
            "nonempty spectrum, so the candidate enumeration missed a point");

    std::sort(out.entries.begin(), out.entries.end(),
              [](const SpectrumEntry<S>& a, const SpectrumEntry<S>& b) {
                  return detail::lex_coords_less(a.point.coords, b.point.coords);
              });
    return out;
}

/// Taylor joint spectrum of a commuting family: the abelian case of
/// joint_spectrum, cross-checked against the joint-diagonal oracle from the
/// simultaneous triangularization.
template <ScalarBackend S>
SpectrumResult<S> taylor_spectrum(const OperatorFamily<S>& family, const RankPolicy& policy = {},
                                  const SpectrumOptions& opts = {}) {
    require_commuting(family, "taylor_spectrum");
    LieAlgebraRep<S> abelian;
    abelian.family = family;
    abelian.bracket_sign = +1;
    abelian.c = StructureConstants<S>(family.dim());
    SpectrumResult<S> out = joint_spectrum(abelian, policy, opts);

    // oracle: deduplicated joint-diagonal tuples
    WeightList wl;
    if constexpr (scalar_traits<S>::is_exact) {
        auto frep = to_float_rep(abelian);
        wl = module_weights(frep.c, frep.family.ops, frep.m(), opts, policy);
    } else {
        wl = module_weights(abelian.c, abelian.family.ops, abelian.m(), opts, policy);
    }
    std::vector<std::vector<Complexd>> oracle;
    for (const auto& w : wl.weights) {
        bool dup = false;
        for (const auto& seen : oracle)
            if (detail::inf_distance(w, seen) <= opts.dedup_tol) {
                dup = true;
                break;
            }
        if (!dup) oracle.push_back(w);
    }
    bool mismatch = oracle.size() != out.entries.size();
    if (!mismatch) {
        for (const auto& entry : out.entries) {
            std::vector<Complexd> p;
            p.reserve(entry.point.coords.size());
            for (const auto& v : entry.point.coords) p.push_back(to_complexd(v));
            double scale = 1.0;
            for (const auto& v : p) scale = std::max(scale, std::abs(v));
            bool found = false;
            for (const auto& o : oracle)
                if (detail::inf_distance(p, o) <= 1e-6 * scale) {
                    found = true;
                    break;
                }
            if (!found) {
                mismatch = true;
                break;
            }
        }
    }
    if (mismatch)
        out.warnings.push_back(
            "taylor_spectrum: homology filter disagrees with the joint-diagonal oracle");
    return out;
}

/// pi(Sp(L,E)) for an ideal I: restriction of every spectrum point to I.
template <ScalarBackend S>
std::vector<Character<S>> project_spectrum(const SpectrumResult<S>& result,
                                           const SubalgebraSpec<S>& ideal,
                                           const SpectrumOptions& opts = {}) {
    if (!ideal.is_ideal)
        throw NotAnIdeal("project_spectrum: the projection property holds for ideals only");
    std::vector<Character<S>> out;
    for (const auto& entry : result.entries) {
        Character<S> g = restrict_functional(entry.point, ideal);
        bool dup = false;
        for (const auto& seen : out) {
            if constexpr (scalar_traits<S>::is_exact) {
                if (seen.coords == g.coords) dup = true;
            } else {
                if (detail::inf_distance(seen.coords, g.coords) <= opts.dedup_tol) dup = true;
            }
            if (dup) break;
        }
        if (!dup) out.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end(), [](const Character<S>& a, const Character<S>& b) {
        return detail::lex_coords_less(a.coords, b.coords);
    });
    return out;
}

/// Classical spectrum of one operator (finite-dimensional E): the deduplicated
/// eigenvalue set.
template <ScalarBackend S>
std::vector<S> single_operator_spectrum(const Matrix<S>& x, const RankPolicy& policy = {},
                                        const SpectrumOptions& opts = {}) {
    (void)policy;
    std::vector<S> vals = eigenvalues(x);
    std::sort(vals.begin(), vals.end(), detail::lex_scalar_less<S>);
    std::vector<S> out;
    for (const auto& v : vals) {
        bool dup = false;
        for (const auto& seen : out) {
            if constexpr (scalar_traits<S>::is_exact) {
                if (seen == v) dup = true;
            } else {
                if (std::abs(seen - v) <= opts.dedup_tol) dup = true;
            }
            if (dup) break;
        }
        if (!dup) out.push_back(v);
    }
    return out;
}

}  // namespace liespec
