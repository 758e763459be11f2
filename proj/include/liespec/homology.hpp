#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "liespec/errors.hpp"
#include "liespec/lie_structure.hpp"
#include "liespec/linalg.hpp"
#include "liespec/matrix.hpp"
#include "liespec/multi_index.hpp"

namespace liespec {

/// Basis bookkeeping for C_p = E (x) Wedge^p L. The basis element indexed by
/// (e, J) sits at position mi_rank(J)*m + e: the E-index varies fastest, so in
/// degree one the differential is the block row [X_1 - f_1 | ... | X_n - f_n].
struct ChainSpace {
    std::size_t degree = 0;
    std::size_t dim_E = 0;
    std::size_t dim_L = 0;

    std::size_t dimension() const {
        return dim_E * static_cast<std::size_t>(binomial(dim_L, degree));
    }
    std::size_t position(std::size_t e_index, const MultiIndex& mi) const {
        return mi_rank(mi) * dim_E + e_index;
    }
};

/// Homology dimensions beta_0..beta_n.
struct BettiVector {
    std::vector<std::size_t> beta;

    bool any_nonzero() const {
        for (auto b : beta)
            if (b > 0) return true;
        return false;
    }
    /// Alternating sum; identically 0 for n >= 1 by rank telescoping.
    long euler_characteristic() const {
        long acc = 0;
        long sign = 1;
        for (auto b : beta) {
            acc += sign * static_cast<long>(b);
            sign = -sign;
        }
        return acc;
    }
    friend bool operator==(const BettiVector& a, const BettiVector& b) { return a.beta == b.beta; }
};

/// The matrices of d_p(f): C_p -> C_{p-1} for a fixed character f, p = 1..n.
template <ScalarBackend S>
struct ChainComplexInstance {
    std::vector<S> f_coords;
    std::vector<Matrix<S>> differentials;  // differentials[p-1] maps C_p -> C_{p-1}
    std::size_t dim_E = 0;
    std::size_t dim_L = 0;
    int bracket_sign = +1;
    RankPolicy policy;
    double chain_defect = 0.0;  // max entry of d_{p-1} * d_p over all p
    std::vector<std::string> warnings;

    std::size_t chain_dim(std::size_t p) const {
        return dim_E * static_cast<std::size_t>(binomial(dim_L, p));
    }
    const Matrix<S>& d(std::size_t p) const {
        if (p < 1 || p > differentials.size()) throw DegreeOutOfRange("d: degree out of range");
        return differentials[p - 1];
    }
};

// ---------------------------------------------------------------------------
// Differential assembly
// ---------------------------------------------------------------------------

namespace detail {

template <ScalarBackend S>
void require_character(const LieAlgebraRep<S>& rep, const std::vector<S>& f) {
    if (f.size() != rep.n())
        throw ShapeMismatch("differential: character has wrong coordinate count");
    double defect = character_defect(rep, f);
    if (defect > character_tolerance(rep, f))
        throw NotACharacter("f(L^2) != 0 (defect " + std::to_string(defect) + ")");
}

}  // namespace detail

/// Matrix of d_{p-1}(f) on the basis (v (x) x_{i_1}^...^x_{i_p}), mapping
/// degree p to degree p-1:
///   v(x)J  |->  sum_k (-1)^{k+1} (X_{i_k} v - f(x_{i_k}) v) (x) J\{i_k}
///            + sum_{k<l} (-1)^{k+l} v (x) [x_{i_k}, x_{i_l}] ^ J\{i_k,i_l},
/// with the bracket expanded through the structure constants.
template <ScalarBackend S>
Matrix<S> differential_matrix(const LieAlgebraRep<S>& rep, const std::vector<S>& f, std::size_t p,
                              const RankPolicy& policy = {}) {
    (void)policy;
    const std::size_t n = rep.n(), m = rep.m();
    if (p < 1 || p > n) throw DegreeOutOfRange("differential_matrix: need 1 <= p <= dim L");
    detail::require_character(rep, f);

    ChainSpace src{p, m, n}, dst{p - 1, m, n};
    Matrix<S> out(dst.dimension(), src.dimension());
    const auto indices = all_multi_indices(n, p);

    auto add_block = [&](std::size_t row_block, std::size_t col_block, const Matrix<S>& blk,
                         const S& coeff) {
        const std::size_t r0 = row_block * m, c0 = col_block * m;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) out(r0 + i, c0 + j) += coeff * blk(i, j);
    };

    Matrix<S> id = Matrix<S>::identity(m);
    for (const auto& mi : indices) {
        const std::size_t col_block = mi_rank(mi);
        // action terms
        for (std::size_t k = 0; k < p; ++k) {
            const std::size_t gen = mi[k];  // 1-based
            MultiIndex rest = mi_erase(mi, k);
            S sign = (k % 2 == 0) ? scalar_traits<S>::one() : -scalar_traits<S>::one();
            Matrix<S> blk = rep.op(gen - 1) - f[gen - 1] * id;
            add_block(mi_rank(rest), col_block, blk, sign);
        }
        // bracket terms
        for (std::size_t k = 0; k + 1 < p; ++k)
            for (std::size_t l = k + 1; l < p; ++l) {
                // (-1)^{k+l} with 1-based positions equals (-1)^{k+l} 0-based
                S pair_sign = ((k + l) % 2 == 0) ? scalar_traits<S>::one()
                                                 : -scalar_traits<S>::one();
                MultiIndex rest = mi_erase(mi_erase(mi, l), k);
                const std::size_t gi = mi[k] - 1, gj = mi[l] - 1;
                for (std::size_t r = 0; r < n; ++r) {
                    const S& coeff = rep.c.at(gi, gj, r);
                    if (scalar_traits<S>::is_zero(coeff)) continue;
                    WedgeInsert w = wedge_insert(r + 1, rest);
                    if (w.zero) continue;
                    S sgn = (w.sign > 0) ? scalar_traits<S>::one() : -scalar_traits<S>::one();
                    add_block(mi_rank(w.index), col_block, id, pair_sign * sgn * coeff);
                }
            }
    }
    return out;
}

namespace detail {

/// max |entry| of d_{p-1} * d_p over consecutive pairs.
template <ScalarBackend S>
double chain_defect_of(const std::vector<Matrix<S>>& ds) {
    double worst = 0.0;
    for (std::size_t p = 1; p < ds.size(); ++p) {
        Matrix<S> prod = ds[p - 1] * ds[p];
        worst = std::max(worst, prod.max_abs());
    }
    return worst;
}

template <ScalarBackend S>
double chain_scale_of(const std::vector<Matrix<S>>& ds) {
    double scale = 0.0;
    for (const auto& d : ds) scale = std::max(scale, d.max_abs());
    return 1.0 + scale;
}

}  // namespace detail

/// Builds all differentials of (E (x) Wedge L, d(f)) and validates the chain
/// property d_{p-1} d_p = 0.
template <ScalarBackend S>
ChainComplexInstance<S> build_complex(const LieAlgebraRep<S>& rep, const std::vector<S>& f,
                                      const RankPolicy& policy = {}) {
    const std::size_t n = rep.n();
    ChainComplexInstance<S> inst;
    inst.f_coords = f;
    inst.dim_E = rep.m();
    inst.dim_L = n;
    inst.bracket_sign = rep.bracket_sign;
    inst.policy = policy;
    inst.differentials.reserve(n);
    for (std::size_t p = 1; p <= n; ++p)
        inst.differentials.push_back(differential_matrix(rep, f, p, policy));
    inst.chain_defect = detail::chain_defect_of(inst.differentials);
    const double tol = scalar_traits<S>::is_exact
                           ? 0.0
                           : 1e-10 * detail::chain_scale_of(inst.differentials);
    if (inst.chain_defect > tol)
        throw ComplexNotChain("d o d != 0 (defect " + std::to_string(inst.chain_defect) +
                              "); wrong bracket sign or non-character f");
    return inst;
}

/// Fixes the bracket sign by the d^2 = 0 probe at f = 0 (always a character):
/// keeps sigma as built when the probe passes, otherwise flips it. Non-abelian
/// reps with the left action convention always land on sigma = -1.
template <ScalarBackend S>
LieAlgebraRep<S> with_calibrated_bracket_sign(const LieAlgebraRep<S>& rep,
                                              const RankPolicy& policy = {}) {
    if (rep.n() < 2) return rep;
    std::vector<S> zero(rep.n(), scalar_traits<S>::zero());
    std::vector<Matrix<S>> probe;
    probe.reserve(2);
    for (std::size_t p = 1; p <= std::min<std::size_t>(2, rep.n()); ++p)
        probe.push_back(differential_matrix(rep, zero, p, policy));
    const double tol =
        scalar_traits<S>::is_exact ? 0.0 : 1e-10 * detail::chain_scale_of(probe);
    if (detail::chain_defect_of(probe) <= tol) return rep;
    LieAlgebraRep<S> flipped = rep.with_flipped_sign();
    std::vector<Matrix<S>> reprobe;
    for (std::size_t p = 1; p <= std::min<std::size_t>(2, rep.n()); ++p)
        reprobe.push_back(differential_matrix(flipped, zero, p, policy));
    if (detail::chain_defect_of(reprobe) >
        (scalar_traits<S>::is_exact ? 0.0 : 1e-10 * detail::chain_scale_of(reprobe)))
        throw ComplexNotChain("bracket-sign calibration failed for both signs");
    return flipped;
}

/// beta_p = (dim C_p - rank d_p) - rank d_{p+1}, with the maps out of C_0 and
/// into C_n treated as zero. Tiny negative values (float rank noise) clamp to
/// zero with a warning; near-threshold singular values are flagged.
template <ScalarBackend S>
BettiVector betti(const ChainComplexInstance<S>& inst, const RankPolicy& policy,
                  std::vector<std::string>* warnings = nullptr) {
    const std::size_t n = inst.dim_L;
    std::vector<std::size_t> ranks(n + 2, 0);  // ranks[p] = rank d_p, p = 1..n
    bool flagged = false;
    for (std::size_t p = 1; p <= n; ++p) {
        RankInfo info = rank_info(inst.differentials[p - 1], policy);
        ranks[p] = info.rank;
        flagged = flagged || info.ill_conditioned;
    }
    BettiVector out;
    out.beta.resize(n + 1, 0);
    for (std::size_t p = 0; p <= n; ++p) {
        long b = static_cast<long>(inst.chain_dim(p)) - static_cast<long>(ranks[p]) -
                 static_cast<long>(ranks[p + 1]);
        if (b < 0) {
            if (warnings) warnings->push_back("betti: clamped negative value at degree " +
                                              std::to_string(p));
            b = 0;
        }
        out.beta[p] = static_cast<std::size_t>(b);
    }
    if (flagged && warnings)
        warnings->push_back("betti: rank decision within 10x of threshold");
    return out;
}

template <ScalarBackend S>
BettiVector betti(const ChainComplexInstance<S>& inst) {
    return betti(inst, inst.policy, nullptr);
}

/// True iff all homology vanishes.
template <ScalarBackend S>
bool is_exact_complex(const ChainComplexInstance<S>& inst, const RankPolicy& policy) {
    return !betti(inst, policy, nullptr).any_nonzero();
}

template <ScalarBackend S>
bool is_exact_complex(const ChainComplexInstance<S>& inst) {
    return is_exact_complex(inst, inst.policy);
}

/// Relative tolerance for deciding that a family commutes.
template <ScalarBackend S>
double commutation_defect(const OperatorFamily<S>& family) {
    double worst = 0.0;
    for (std::size_t i = 0; i < family.dim(); ++i)
        for (std::size_t j = i + 1; j < family.dim(); ++j)
            worst = std::max(worst, commutator(family.ops[i], family.ops[j]).max_abs());
    return worst;
}

template <ScalarBackend S>
void require_commuting(const OperatorFamily<S>& family, const char* what) {
    double scale = 0.0;
    for (const auto& x : family.ops) scale = std::max(scale, x.max_abs());
    double tol = scalar_traits<S>::is_exact ? 0.0 : 1e-8 * (1.0 + scale * scale);
    double defect = commutation_defect(family);
    if (defect > tol)
        throw NotCommuting(std::string(what) + ": pairwise commutators are not zero (defect " +
                           std::to_string(defect) + ")");
}

/// Koszul complex of a commuting family at lambda: the abelian special case
/// of build_complex with the bracket term dropped (structure constants are
/// identically zero by construction).
template <ScalarBackend S>
ChainComplexInstance<S> koszul_complex(const OperatorFamily<S>& family, const std::vector<S>& lambda,
                                       const RankPolicy& policy = {}) {
    require_commuting(family, "koszul_complex");
    LieAlgebraRep<S> abelian;
    abelian.family = family;
    abelian.bracket_sign = +1;
    abelian.c = StructureConstants<S>(family.dim());
    return build_complex(abelian, lambda, policy);
}

}  // namespace liespec
