#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "liespec/errors.hpp"
#include "liespec/homology.hpp"
#include "liespec/lie_structure.hpp"
#include "liespec/linalg.hpp"
#include "liespec/matrix.hpp"
#include "liespec/spectrum.hpp"

namespace liespec {

/// Parameters of one randomized instance. n_target caps the Lie algebra
/// dimension before bracket closure; closure can only add generators inside
/// the (strictly) upper-triangular algebra.
struct InstanceSpec {
    std::uint64_t seed = 0;
    std::size_t n_target = 2;
    std::size_t m = 3;
    bool nilpotent_only = false;
    double entry_scale = 1.0;
};

struct TheoremReport {
    std::string theorem_id;
    std::string instance;
    bool pass = false;
    bool applicable = true;
    std::vector<std::string> witnesses;
    std::string tolerances;
};

// ---------------------------------------------------------------------------
// Deterministic sampling (raw-bit uniforms; no std distributions, so files and
// reports are byte-stable across standard libraries)
// ---------------------------------------------------------------------------

class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : gen_(seed) {}

    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform on the disc of the given radius.
    Complexd disc(double radius) {
        double r = radius * std::sqrt(unit());
        double th = 2.0 * 3.14159265358979323846 * unit();
        return {r * std::cos(th), r * std::sin(th)};
    }

    std::uint64_t integer(std::uint64_t bound) { return gen_() % bound; }
    std::int64_t signed_integer(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 gen_;
};

namespace detail {

inline std::string format_complex(const Complexd& z) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.9g%+.9gi", z.real(), z.imag());
    return buf;
}

template <ScalarBackend S>
std::string format_point(const std::vector<S>& coords) {
    std::string out = "(";
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) out += ", ";
        if constexpr (scalar_traits<S>::is_exact)
            out += format_scalar(coords[i]);
        else
            out += format_complex(coords[i]);
    }
    return out + ")";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Instance generators
// ---------------------------------------------------------------------------

namespace detail {

/// Closed sets of strictly-upper positions: (i,j),(j,k) in S forces (i,k).
/// Grows a random closed set of exactly `want` positions when possible.
inline std::vector<std::pair<std::size_t, std::size_t>> random_closed_positions(
    DetRng& rng, std::size_t m, std::size_t want) {
    std::vector<std::pair<std::size_t, std::size_t>> all;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) all.push_back({i, j});
    if (want >= all.size()) return all;  // the full strict triangle is closed

    auto close = [](std::vector<std::pair<std::size_t, std::size_t>> s) {
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t a = 0; a < s.size() && !grew; ++a)
                for (std::size_t b = 0; b < s.size() && !grew; ++b) {
                    if (s[a].second != s[b].first) continue;
                    std::pair<std::size_t, std::size_t> need{s[a].first, s[b].second};
                    bool have = false;
                    for (const auto& p : s)
                        if (p == need) {
                            have = true;
                            break;
                        }
                    if (!have) {
                        s.push_back(need);
                        grew = true;
                    }
                }
        }
        return s;
    };

    std::vector<std::pair<std::size_t, std::size_t>> set;
    for (int attempt = 0; attempt < 200 && set.size() < want; ++attempt) {
        auto cand = all[rng.integer(all.size())];
        bool have = false;
        for (const auto& p : set)
            if (p == cand) {
                have = true;
                break;
            }
        if (have) continue;
        auto trial = set;
        trial.push_back(cand);
        trial = close(trial);
        if (trial.size() <= want) set = std::move(trial);
    }
    if (set.empty()) set.push_back(all[rng.integer(all.size())]);
    return set;
}

/// Inverse of a unit upper-triangular matrix by the finite Neumann series
/// (exact on the exact backend).
template <ScalarBackend S>
Matrix<S> unitriangular_inverse(const Matrix<S>& s) {
    const std::size_t m = s.rows();
    Matrix<S> nilpart = s - Matrix<S>::identity(m);
    Matrix<S> term = Matrix<S>::identity(m);
    Matrix<S> inv = Matrix<S>::identity(m);
    for (std::size_t k = 1; k < m; ++k) {
        term = term * nilpart;
        if (k % 2 == 0)
            inv = inv + term;
        else
            inv = inv - term;
    }
    return inv;
}

/// Shared body of the random instance generators. The algebra is built closed
/// by construction: an optional random diagonal element plus root vectors
/// E_ij on a composition-closed position set, then an invertible basis mix
/// and a unit upper-triangular conjugation. Every step preserves exact
/// (strict) upper-triangularity and exact bracket closure.
template <ScalarBackend S>
LieAlgebraRep<S> random_rep_impl(const InstanceSpec& spec, const RankPolicy& policy) {
    const std::size_t m = spec.m;
    if (m < 1) throw Error("random rep: need m >= 1");
    const std::size_t tri_dim = spec.nilpotent_only ? m * (m - 1) / 2 : m * (m + 1) / 2;
    if (spec.n_target < 1 || spec.n_target > tri_dim)
        throw Error("random rep: need 1 <= n_target <= " + std::to_string(tri_dim));

    DetRng rng(spec.seed ^ 0x5cf1a3d2u);
    auto scalar_of = [&](const Complexd& z) -> S {
        if constexpr (scalar_traits<S>::is_exact) {
            // snap the float draw to a small rational so exact instances stay cheap
            Rational re(rng.signed_integer(-40, 40), 16);
            Rational im(rng.signed_integer(-40, 40), 16);
            (void)z;
            return GaussianRational{re, im};
        } else {
            return z;
        }
    };
    auto draw = [&]() { return scalar_of(rng.disc(spec.entry_scale)); };

    const bool with_diagonal = !spec.nilpotent_only;
    const std::size_t n_nil = spec.n_target - (with_diagonal ? 1 : 0);

    std::vector<Matrix<S>> basis;
    if (with_diagonal) {
        Matrix<S> d(m, m);
        for (std::size_t i = 0; i < m; ++i) d(i, i) = draw();
        basis.push_back(std::move(d));
    }
    if (n_nil > 0) {
        auto positions = detail::random_closed_positions(rng, m, n_nil);
        for (const auto& [i, j] : positions) {
            Matrix<S> e(m, m);
            S coeff = draw();
            while (scalar_traits<S>::is_zero(coeff)) coeff = draw();
            e(i, j) = coeff;
            basis.push_back(std::move(e));
        }
    }
    const std::size_t n = basis.size();

    // invertible mix of the basis (unit lower-triangular coefficients)
    std::vector<Matrix<S>> mixed;
    for (std::size_t p = 0; p < n; ++p) {
        Matrix<S> x = basis[p];
        for (std::size_t q = 0; q < p; ++q) x = x + scalar_of(rng.disc(0.6)) * basis[q];
        mixed.push_back(std::move(x));
    }

    // conjugate by a random unit upper-triangular matrix
    Matrix<S> conj_mat = Matrix<S>::identity(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) conj_mat(i, j) = scalar_of(rng.disc(0.4));
    Matrix<S> conj_inv = detail::unitriangular_inverse(conj_mat);
    for (auto& x : mixed) x = conj_mat * x * conj_inv;

    OperatorFamily<S> family(m, std::move(mixed));
    return build_rep(family, +1, policy);
}

}  // namespace detail

/// Random solvable (nilpotent when asked) upper-triangular rep of dimension
/// exactly n_target, bracket-closed by construction and deterministic in the
/// seed. Strictly-upper instances stay exactly strictly upper triangular.
inline LieAlgebraRep<Complexd> random_solvable_rep(const InstanceSpec& spec,
                                                   const RankPolicy& policy = {}) {
    return detail::random_rep_impl<Complexd>(spec, policy);
}

/// Exact-backend variant: Gaussian-rational entries, closed exactly.
inline LieAlgebraRep<GaussianRational> random_exact_solvable_rep(const InstanceSpec& spec,
                                                                 const RankPolicy& policy = {}) {
    return detail::random_rep_impl<GaussianRational>(spec, policy);
}

/// Commuting family built as polynomials in one random upper-triangular
/// matrix, plus the construction-side joint-diagonal oracle.
struct CommutingInstance {
    OperatorFamily<Complexd> family;
    /// Expected Taylor spectrum: deduplicated joint-diagonal tuples.
    std::vector<std::vector<Complexd>> expected_points;
};

inline CommutingInstance random_commuting_family(std::uint64_t seed, std::size_t n, std::size_t m,
                                                 double entry_scale = 1.0,
                                                 double dedup_tol = 1e-7) {
    DetRng rng(seed);
    n = std::min(n, m);  // degree-(m-1) polynomials span an m-dimensional space
    Matrix<Complexd> t(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) t(i, j) = rng.disc(entry_scale);

    // coefficients of p_i, degree < m; redraw until the family is independent
    std::vector<std::vector<Complexd>> coeffs(n);
    std::vector<Matrix<Complexd>> mats;
    for (int attempt = 0; attempt < 50; ++attempt) {
        for (std::size_t i = 0; i < n; ++i) {
            coeffs[i].resize(m);
            for (std::size_t k = 0; k < m; ++k) coeffs[i][k] = rng.disc(entry_scale);
        }
        mats.clear();
        for (std::size_t i = 0; i < n; ++i) {
            // Horner: X = (((c_{m-1} T + c_{m-2}) T + ...) + c_0)
            Matrix<Complexd> x = Matrix<Complexd>::zero(m, m);
            Matrix<Complexd> id = Matrix<Complexd>::identity(m);
            for (std::size_t k = m; k-- > 0;) {
                x = x * t;
                x = x + coeffs[i][k] * id;
            }
            mats.push_back(std::move(x));
        }
        Matrix<Complexd> stack(n, m * m);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < m * m; ++k) stack(i, k) = mats[i].data()[k];
        if (rank(stack) == n) break;
    }

    CommutingInstance out;
    out.family = OperatorFamily<Complexd>(m, std::move(mats));
    for (std::size_t pos = 0; pos < m; ++pos) {
        std::vector<Complexd> point(n);
        for (std::size_t i = 0; i < n; ++i) {
            Complexd acc{0.0, 0.0};
            for (std::size_t k = m; k-- > 0;) acc = acc * t(pos, pos) + coeffs[i][k];
            point[i] = acc;
        }
        bool dup = false;
        for (const auto& seen : out.expected_points)
            if (detail::inf_distance(point, seen) <= dedup_tol) {
                dup = true;
                break;
            }
        if (!dup) out.expected_points.push_back(std::move(point));
    }
    return out;
}

/// The two-dimensional non-abelian pair (b, a) with [b,a] = b: b nilpotent,
/// a symmetric with eigenvalues +-1/2. Basis order (b, a); characters are
/// (f(b), f(a)).
template <ScalarBackend S>
OperatorFamily<S> affine_pair_family() {
    auto one = scalar_traits<S>::one();
    S half, neg;
    if constexpr (scalar_traits<S>::is_exact) {
        half = GaussianRational(1, 2);
    } else {
        half = Complexd{0.5, 0.0};
    }
    neg = -one;
    Matrix<S> b{{one, one}, {neg, neg}};
    Matrix<S> a{{scalar_traits<S>::zero(), half}, {half, scalar_traits<S>::zero()}};
    return OperatorFamily<S>(2, {b, a}, {"b", "a"});
}

// ---------------------------------------------------------------------------
// Set comparison
// ---------------------------------------------------------------------------

namespace detail {

template <ScalarBackend S>
double point_distance(const std::vector<S>& a, const std::vector<S>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, scalar_traits<S>::abs(a[i] - b[i]));
    return d;
}

/// Greedy matching of two point sets within tol; fills witnesses on mismatch.
template <ScalarBackend S>
bool match_point_sets(const std::vector<std::vector<S>>& a, const std::vector<std::vector<S>>& b,
                      double tol, std::vector<std::string>* witnesses) {
    bool ok = a.size() == b.size();
    std::vector<bool> used(b.size(), false);
    for (const auto& pa : a) {
        bool found = false;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j] || pa.size() != b[j].size()) continue;
            if (point_distance(pa, b[j]) <= tol) {
                used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) {
            ok = false;
            if (witnesses) witnesses->push_back("unmatched left point " + format_point(pa));
        }
    }
    for (std::size_t j = 0; j < b.size(); ++j)
        if (!used[j]) {
            ok = false;
            if (witnesses) witnesses->push_back("unmatched right point " + format_point(b[j]));
        }
    return ok;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Verifiers
// ---------------------------------------------------------------------------

/// Theorem 4: Sp(I,E) = pi(Sp(L,E)) for an ideal I. A precomputed full
/// spectrum may be passed to avoid recomputation across many ideals.
template <ScalarBackend S>
TheoremReport verify_projection(const LieAlgebraRep<S>& rep, const SubalgebraSpec<S>& ideal,
                                const RankPolicy& policy = {}, const SpectrumOptions& opts = {},
                                double set_tol = 1e-6,
                                const SpectrumResult<S>* precomputed = nullptr) {
    TheoremReport report;
    report.theorem_id = "theorem4_projection";
    report.tolerances = "set_tol=1e-6";
    if (!is_ideal(ideal, rep, policy))
        throw NotAnIdeal("verify_projection: subspace is not an ideal");
    try {
        SpectrumResult<S> full =
            precomputed ? *precomputed : joint_spectrum(rep, policy, opts);
        std::vector<Character<S>> projected = project_spectrum(full, ideal, opts);
        SpectrumResult<S> direct = joint_spectrum(sub_rep(rep, ideal, policy), policy, opts);
        std::vector<std::vector<S>> lhs = direct.points();
        std::vector<std::vector<S>> rhs;
        rhs.reserve(projected.size());
        for (const auto& g : projected) rhs.push_back(g.coords);
        report.pass = detail::match_point_sets(lhs, rhs, set_tol, &report.witnesses);
        if (!report.pass) {
            report.witnesses.push_back("Sp(I,E) has " + std::to_string(lhs.size()) +
                                       " points, projection has " + std::to_string(rhs.size()));
        }
    } catch (const Error& e) {
        report.pass = false;
        report.witnesses.push_back(std::string("error: ") + e.what());
    }
    return report;
}

/// Theorem 5: Sp(L,E) is not void. IncompleteCandidates counts as a failure.
template <ScalarBackend S>
TheoremReport verify_nonempty(const LieAlgebraRep<S>& rep, const RankPolicy& policy = {},
                              const SpectrumOptions& opts = {}) {
    TheoremReport report;
    report.theorem_id = "theorem5_nonempty";
    report.tolerances = "rank_rel_tol=" + std::to_string(policy.rel_tol);
    try {
        SpectrumResult<S> sp = joint_spectrum(rep, policy, opts);
        report.pass = !sp.entries.empty();
        report.witnesses.push_back(std::to_string(sp.entries.size()) + " spectrum points");
    } catch (const IncompleteCandidates& e) {
        report.pass = false;
        report.witnesses.push_back(std::string("IncompleteCandidates: ") + e.what());
    } catch (const Error& e) {
        report.pass = false;
        report.witnesses.push_back(std::string("error: ") + e.what());
    }
    return report;
}

namespace detail {

/// Proposition 6 bound check body, shared by the verifier and the diagnostic
/// mode for non-nilpotent inputs.
template <ScalarBackend S>
void nilpotent_bound_check(const LieAlgebraRep<S>& rep, const RankPolicy& policy,
                           const SpectrumOptions& opts, double tol, std::uint64_t probe_seed,
                           bool* pass, std::vector<std::string>* witnesses) {
    SpectrumResult<S> sp = joint_spectrum(rep, policy, opts);
    const std::size_t n = rep.n();
    std::vector<std::vector<Complexd>> probes;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Complexd> e(n, Complexd{0.0, 0.0});
        e[i] = Complexd{1.0, 0.0};
        probes.push_back(std::move(e));
    }
    DetRng rng(probe_seed);
    for (int t = 0; t < 100; ++t) {
        std::vector<Complexd> g(n);
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            g[i] = rng.disc(1.0);
            norm2 += std::norm(g[i]);
        }
        if (norm2 < 1e-12) continue;
        double inv = 1.0 / std::sqrt(norm2);
        for (auto& v : g) v *= inv;
        probes.push_back(std::move(g));
    }
    *pass = true;
    for (const auto& gamma : probes) {
        Matrix<S> x(rep.m(), rep.m());
        for (std::size_t i = 0; i < n; ++i) {
            S coeff;
            if constexpr (scalar_traits<S>::is_exact) {
                auto g = rationalize_complex(gamma[i], 1e-12, 1u << 30);
                coeff = g ? *g : GaussianRational{};
            } else {
                coeff = gamma[i];
            }
            x = x + coeff * rep.op(i);
        }
        double xnorm = operator_norm(x);
        for (const auto& entry : sp.entries) {
            Complexd val{0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i)
                val += gamma[i] * to_complexd(entry.point.coords[i]);
            if (std::abs(val) > xnorm + tol) {
                *pass = false;
                witnesses->push_back("violation: |f(x)| = " + std::to_string(std::abs(val)) +
                                     " > ||x|| = " + std::to_string(xnorm) + " at f = " +
                                     format_point(entry.point.coords));
            }
        }
    }
}

}  // namespace detail

/// Proposition 6: for nilpotent L, every spectrum point satisfies
/// |f(x)| <= ||x|| on a unit-sphere probe of L.
template <ScalarBackend S>
TheoremReport verify_nilpotent_bound(const LieAlgebraRep<S>& rep, const RankPolicy& policy = {},
                                     const SpectrumOptions& opts = {}, double tol = 1e-8,
                                     std::uint64_t probe_seed = 0x9e3779b9u) {
    if (!is_nilpotent(rep, policy))
        throw NotNilpotent("verify_nilpotent_bound: rep is not nilpotent");
    TheoremReport report;
    report.theorem_id = "proposition6_nilpotent_bound";
    report.tolerances = "bound_tol=1e-8";
    try {
        detail::nilpotent_bound_check(rep, policy, opts, tol, probe_seed, &report.pass,
                                      &report.witnesses);
    } catch (const Error& e) {
        report.pass = false;
        report.witnesses.push_back(std::string("error: ") + e.what());
    }
    return report;
}

/// Diagnostic companion for non-nilpotent reps: runs the same bound check and
/// reports the violation without the precondition; never counts as a failure.
template <ScalarBackend S>
TheoremReport nilpotent_bound_diagnostic(const LieAlgebraRep<S>& rep,
                                         const RankPolicy& policy = {},
                                         const SpectrumOptions& opts = {}, double tol = 1e-8,
                                         std::uint64_t probe_seed = 0x9e3779b9u) {
    TheoremReport report;
    report.theorem_id = "proposition6_nilpotent_bound";
    report.applicable = false;
    report.pass = true;
    report.tolerances = "bound_tol=1e-8";
    report.witnesses.push_back("precondition rejected: rep is not nilpotent");
    bool bound_holds = true;
    try {
        detail::nilpotent_bound_check(rep, policy, opts, tol, probe_seed, &bound_holds,
                                      &report.witnesses);
        if (bound_holds)
            report.witnesses.push_back("norm bound held anyway on all probes");
    } catch (const Error& e) {
        report.witnesses.push_back(std::string("error: ") + e.what());
    }
    return report;
}

/// Proposition 7: Sp(I,E) = {0} for every ideal I inside L^2 (checked on L^2
/// and on the canonical series ideals inside it).
template <ScalarBackend S>
TheoremReport verify_derived_vanishing(const LieAlgebraRep<S>& rep, const RankPolicy& policy = {},
                                       const SpectrumOptions& opts = {}, double zero_tol = 1e-8) {
    TheoremReport report;
    report.theorem_id = "proposition7_derived_vanishing";
    report.tolerances = "zero_tol=1e-8";
    report.pass = true;
    try {
        std::vector<SubalgebraSpec<S>> ideals;
        SubalgebraSpec<S> derived = derived_subalgebra(rep, policy);
        if (derived.dim() == 0) {
            report.witnesses.push_back("L^2 = 0, vacuously true");
            return report;
        }
        ideals.push_back(derived);
        auto ds = derived_series(rep, policy);
        for (std::size_t i = 2; i < ds.size(); ++i)
            if (ds[i].dim() > 0) ideals.push_back(ds[i]);
        auto lcs = lower_central_series(rep, policy);
        for (std::size_t i = 2; i < lcs.size(); ++i)
            if (lcs[i].dim() > 0 && lcs[i].dim() != derived.dim()) ideals.push_back(lcs[i]);

        for (const auto& ideal : ideals) {
            SpectrumResult<S> sp = joint_spectrum(sub_rep(rep, ideal, policy), policy, opts);
            for (const auto& entry : sp.entries) {
                double mag = 0.0;
                for (const auto& v : entry.point.coords)
                    mag = std::max(mag, scalar_traits<S>::abs(v));
                if (mag > zero_tol) {
                    report.pass = false;
                    report.witnesses.push_back("nonzero point on ideal of dim " +
                                               std::to_string(ideal.dim()) + ": " +
                                               detail::format_point(entry.point.coords));
                }
            }
        }
        if (report.pass)
            report.witnesses.push_back("all ideal spectra equal {0} (" +
                                       std::to_string(ideals.size()) + " ideals)");
    } catch (const Error& e) {
        report.pass = false;
        report.witnesses.push_back(std::string("error: ") + e.what());
    }
    return report;
}

/// Proposition 9: Sp(x) = {0} for x in L^2 (basis elements plus 20 random
/// combinations).
template <ScalarBackend S>
TheoremReport verify_derived_point_spectra(const LieAlgebraRep<S>& rep,
                                           const RankPolicy& policy = {},
                                           const SpectrumOptions& opts = {},
                                           double zero_tol = 1e-8,
                                           std::uint64_t probe_seed = 0x51ed2701u) {
    TheoremReport report;
    report.theorem_id = "proposition9_derived_point_spectra";
    report.tolerances = "eig_tol=1e-8";
    report.pass = true;
    try {
        SubalgebraSpec<S> derived = derived_subalgebra(rep, policy);
        if (derived.dim() == 0) {
            report.witnesses.push_back("L^2 = 0, vacuously true");
            return report;
        }
        std::vector<Matrix<S>> probes;
        auto element_of = [&](const std::vector<S>& coords) {
            Matrix<S> x(rep.m(), rep.m());
            for (std::size_t k = 0; k < rep.n(); ++k)
                if (!scalar_traits<S>::is_zero(coords[k])) x = x + coords[k] * rep.op(k);
            return x;
        };
        for (std::size_t p = 0; p < derived.dim(); ++p) {
            std::vector<S> coords(rep.n());
            for (std::size_t k = 0; k < rep.n(); ++k) coords[k] = derived.basis(p, k);
            probes.push_back(element_of(coords));
        }
        DetRng rng(probe_seed);
        for (int t = 0; t < 20; ++t) {
            std::vector<S> coords(rep.n(), scalar_traits<S>::zero());
            for (std::size_t p = 0; p < derived.dim(); ++p) {
                Complexd g = rng.disc(1.0);
                for (std::size_t k = 0; k < rep.n(); ++k) {
                    if constexpr (scalar_traits<S>::is_exact) {
                        auto gr = rationalize_complex(g, 1e-12, 1u << 30);
                        coords[k] += (gr ? *gr : GaussianRational{}) * derived.basis(p, k);
                    } else {
                        coords[k] += g * derived.basis(p, k);
                    }
                }
            }
            probes.push_back(element_of(coords));
        }
        for (const auto& x : probes) {
            auto sp = single_operator_spectrum(x, policy, opts);
            for (const auto& v : sp)
                if (scalar_traits<S>::abs(v) > zero_tol) {
                    report.pass = false;
                    report.witnesses.push_back("Sp(x) contains nonzero eigenvalue of magnitude " +
                                               std::to_string(scalar_traits<S>::abs(v)));
                }
        }
        if (report.pass)
            report.witnesses.push_back("all " + std::to_string(probes.size()) +
                                       " probe spectra equal {0}");
    } catch (const Error& e) {
        report.pass = false;
        report.witnesses.push_back(std::string("error: ") + e.what());
    }
    return report;
}

/// Proposition 8: nilpotent L with Sp(L,E) = {0} forces Sp(x) = {0} on all of
/// L. Vacuous (not applicable) when the hypothesis fails.
template <ScalarBackend S>
TheoremReport verify_nilpotent_point_spectra(const LieAlgebraRep<S>& rep,
                                             const RankPolicy& policy = {},
                                             const SpectrumOptions& opts = {},
                                             double zero_tol = 1e-8,
                                             std::uint64_t probe_seed = 0x1c3a9f57u) {
    TheoremReport report;
    report.theorem_id = "proposition8_nilpotent_point_spectra";
    report.tolerances = "eig_tol=1e-8";
    report.pass = true;
    try {
        if (!is_nilpotent(rep, policy)) {
            report.applicable = false;
            report.witnesses.push_back("not applicable: rep is not nilpotent");
            return report;
        }
        SpectrumResult<S> sp = joint_spectrum(rep, policy, opts);
        for (const auto& entry : sp.entries)
            for (const auto& v : entry.point.coords)
                if (scalar_traits<S>::abs(v) > zero_tol) {
                    report.applicable = false;
                    report.witnesses.push_back("not applicable: Sp(L,E) != {0}");
                    return report;
                }
        DetRng rng(probe_seed);
        std::vector<Matrix<S>> probes;
        for (std::size_t i = 0; i < rep.n(); ++i) probes.push_back(rep.op(i));
        for (int t = 0; t < 20; ++t) {
            Matrix<S> x(rep.m(), rep.m());
            for (std::size_t k = 0; k < rep.n(); ++k) {
                Complexd g = rng.disc(1.0);
                if constexpr (scalar_traits<S>::is_exact) {
                    auto gr = rationalize_complex(g, 1e-12, 1u << 30);
                    x = x + (gr ? *gr : GaussianRational{}) * rep.op(k);
                } else {
                    x = x + g * rep.op(k);
                }
            }
            probes.push_back(std::move(x));
        }
        for (const auto& x : probes) {
            auto spx = single_operator_spectrum(x, policy, opts);
            for (const auto& v : spx)
                if (scalar_traits<S>::abs(v) > zero_tol) {
                    report.pass = false;
                    report.witnesses.push_back("Sp(x) nonzero: eigenvalue magnitude " +
                                               std::to_string(scalar_traits<S>::abs(v)));
                }
        }
        if (report.pass)
            report.witnesses.push_back("hypothesis held; all point spectra equal {0}");
    } catch (const Error& e) {
        report.pass = false;
        report.witnesses.push_back(std::string("error: ") + e.what());
    }
    return report;
}

/// Closing remark of the paper: the projection property fails for the
/// non-ideal span{a} of the built-in example, while the ideal span{b}
/// projects consistently.
inline TheoremReport verify_counterexample_nonideal(const RankPolicy& policy = {},
                                                    const SpectrumOptions& opts = {}) {
    TheoremReport report;
    report.theorem_id = "remark_nonideal_counterexample";
    report.tolerances = "point_tol=1e-8";
    try {
        auto rep = with_calibrated_bracket_sign(
            build_rep(affine_pair_family<Complexd>(), +1, policy), policy);
        SpectrumResult<Complexd> sp = joint_spectrum(rep, policy, opts);

        SubalgebraSpec<Complexd> span_a{Matrix<Complexd>{{Complexd{0.0, 0.0}, Complexd{1.0, 0.0}}},
                                        false};
        SubalgebraSpec<Complexd> span_b{Matrix<Complexd>{{Complexd{1.0, 0.0}, Complexd{0.0, 0.0}}},
                                        true};
        if (is_ideal(span_a, rep, policy)) {
            report.pass = false;
            report.witnesses.push_back("span{a} unexpectedly an ideal");
            return report;
        }
        if (!is_ideal(span_b, rep, policy)) {
            report.pass = false;
            report.witnesses.push_back("span{b} unexpectedly not an ideal");
            return report;
        }

        // restriction of Sp(L,E) to the non-ideal span{a}
        std::vector<std::vector<Complexd>> restricted;
        for (const auto& entry : sp.entries)
            restricted.push_back(restrict_functional(entry.point, span_a).coords);
        std::vector<std::vector<Complexd>> expected_restricted = {{Complexd{0.5, 0.0}},
                                                                  {Complexd{-1.5, 0.0}}};
        // classical spectrum of a alone
        std::vector<std::vector<Complexd>> point_spec;
        for (const auto& v : single_operator_spectrum(rep.op(1), policy, opts))
            point_spec.push_back({v});
        std::vector<std::vector<Complexd>> expected_point = {{Complexd{0.5, 0.0}},
                                                             {Complexd{-0.5, 0.0}}};

        bool restricted_ok =
            detail::match_point_sets(restricted, expected_restricted, 1e-8, &report.witnesses);
        bool point_ok =
            detail::match_point_sets(point_spec, expected_point, 1e-8, &report.witnesses);
        bool differ = !detail::match_point_sets(restricted, point_spec, 1e-6, nullptr);

        // consistency control: the ideal span{b} projects correctly
        TheoremReport control = verify_projection(rep, span_b, policy, opts);

        report.pass = restricted_ok && point_ok && differ && control.pass;
        report.witnesses.push_back("restriction to span{a}: {1/2, -3/2}; Sp(a): {1/2, -1/2}");
        if (!differ)
            report.witnesses.push_back("restriction and Sp(a) unexpectedly coincide");
        if (!control.pass)
            report.witnesses.push_back("ideal control span{b} failed projection");
    } catch (const Error& e) {
        report.pass = false;
        report.witnesses.push_back(std::string("error: ") + e.what());
    }
    return report;
}

// ---------------------------------------------------------------------------
// Suite driver
// ---------------------------------------------------------------------------

/// Hyperplanes of L containing L^2 (automatically ideals): the coordinate
/// completions of the derived basis, deterministic in the rep.
template <ScalarBackend S>
std::vector<SubalgebraSpec<S>> codim1_ideals(const LieAlgebraRep<S>& rep,
                                             const RankPolicy& policy = {}) {
    const std::size_t n = rep.n();
    std::vector<SubalgebraSpec<S>> out;
    if (n == 0) return out;
    SubalgebraSpec<S> derived = derived_subalgebra(rep, policy);
    const std::size_t d = derived.dim();
    if (d >= n) return out;

    std::vector<bool> pivot(n, false);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (scalar_traits<S>::abs(derived.basis(i, j)) > 0.5) {
                pivot[j] = true;
                break;
            }
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < n; ++j)
        if (!pivot[j]) free_cols.push_back(j);

    for (std::size_t skip : free_cols) {
        Matrix<S> rows(n - 1, n);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < n; ++j) rows(i, j) = derived.basis(i, j);
        std::size_t r = d;
        for (std::size_t h : free_cols) {
            if (h == skip) continue;
            rows(r, h) = scalar_traits<S>::one();
            ++r;
        }
        out.push_back(SubalgebraSpec<S>{std::move(rows), true});
    }
    return out;
}

/// Runs every applicable verifier over a seed batch; reports in seed order,
/// the built-in counterexample check appended once at the end.
inline std::vector<TheoremReport> run_suite(const std::vector<InstanceSpec>& specs,
                                            const RankPolicy& policy = {},
                                            const SpectrumOptions& opts = {}) {
    std::vector<TheoremReport> reports;
    for (const auto& spec : specs) {
        std::string tag = "seed=" + std::to_string(spec.seed) + ",m=" + std::to_string(spec.m) +
                          ",n_target=" + std::to_string(spec.n_target) +
                          (spec.nilpotent_only ? ",nilpotent" : "");
        try {
            LieAlgebraRep<Complexd> rep = random_solvable_rep(spec, policy);
            auto push = [&](TheoremReport r) {
                r.instance = tag;
                reports.push_back(std::move(r));
            };
            push(verify_nonempty(rep, policy, opts));
            SpectrumResult<Complexd> full;
            bool have_full = false;
            try {
                full = joint_spectrum(rep, policy, opts);
                have_full = true;
            } catch (const Error&) {
                // verify_nonempty already reported the failure
            }
            const SpectrumResult<Complexd>* cache = have_full ? &full : nullptr;
            SubalgebraSpec<Complexd> derived = derived_subalgebra(rep, policy);
            push(verify_projection(rep, derived, policy, opts, 1e-6, cache));
            for (const auto& ideal : codim1_ideals(rep, policy))
                push(verify_projection(rep, ideal, policy, opts, 1e-6, cache));
            push(verify_derived_vanishing(rep, policy, opts));
            push(verify_derived_point_spectra(rep, policy, opts));
            if (is_nilpotent(rep, policy)) {
                push(verify_nilpotent_bound(rep, policy, opts));
                push(verify_nilpotent_point_spectra(rep, policy, opts));
            }
        } catch (const Error& e) {
            TheoremReport report;
            report.theorem_id = "instance_generation";
            report.instance = tag;
            report.pass = false;
            report.witnesses.push_back(std::string("error: ") + e.what());
            reports.push_back(std::move(report));
        }
    }
    TheoremReport remark = verify_counterexample_nonideal(policy, opts);
    remark.instance = "built-in example";
    reports.push_back(std::move(remark));
    return reports;
}

}  // namespace liespec
