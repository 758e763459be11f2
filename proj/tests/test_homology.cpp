#include <catch2/catch_amalgamated.hpp>

#include "liespec/homology.hpp"
#include "liespec/theorem_harness.hpp"

using namespace liespec;

namespace {

Complexd cd(double re, double im = 0.0) { return {re, im}; }

LieAlgebraRep<Complexd> calibrated_paper_rep() {
    return with_calibrated_bracket_sign(build_rep(affine_pair_family<Complexd>(), +1));
}

/// Independent expansion of the degree-2 differential of the example: on the
/// basis (v (x) b^a) the formula gives
///   (B - f(b)) v (x) a  -  (A - f(a)) v (x) b  +  sigma v (x) b,
/// assembled here by hand, block by block.
MatrixXcd expected_paper_d2(const LieAlgebraRep<Complexd>& rep, Complexd fb, Complexd fa) {
    const MatrixXcd b = rep.op(0), a = rep.op(1);
    const MatrixXcd id = MatrixXcd::identity(2);
    Complexd sigma = rep.bracket_sign < 0 ? cd(-1.0) : cd(1.0);
    MatrixXcd b_block = -(a - fa * id) + sigma * id;  // coefficient of (x) b
    MatrixXcd a_block = b - fb * id;                  // coefficient of (x) a
    MatrixXcd out(4, 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            out(i, j) = b_block(i, j);
            out(2 + i, j) = a_block(i, j);
        }
    return out;
}

}  // namespace

TEST_CASE("multi-index rank and unrank invert each other up to n = 12") {
    for (std::size_t n = 0; n <= 12; ++n)
        for (std::size_t p = 0; p <= n; ++p) {
            std::size_t count = static_cast<std::size_t>(binomial(n, p));
            for (std::size_t r = 0; r < count; ++r) {
                MultiIndex mi = mi_unrank(r, n, p);
                REQUIRE(mi.size() == p);
                for (std::size_t t = 0; t + 1 < p; ++t) REQUIRE(mi[t] < mi[t + 1]);
                if (p > 0) {
                    REQUIRE(mi.front() >= 1);
                    REQUIRE(mi.back() <= n);
                }
                REQUIRE(mi_rank(mi) == r);
            }
        }
}

TEST_CASE("wedge_insert handles the stated cases") {
    // e2 ^ e1 ^ e3 = -e1 ^ e2 ^ e3
    WedgeInsert w = wedge_insert(2, MultiIndex{1, 3});
    REQUIRE_FALSE(w.zero);
    REQUIRE(w.sign == -1);
    REQUIRE(w.index == MultiIndex{1, 2, 3});

    REQUIRE(wedge_insert(1, MultiIndex{1, 2}).zero);

    WedgeInsert lead = wedge_insert(1, MultiIndex{2, 3});
    REQUIRE_FALSE(lead.zero);
    REQUIRE(lead.sign == +1);
    REQUIRE(lead.index == MultiIndex{1, 2, 3});
}

TEST_CASE("chain space dimensions follow m * C(n,p)") {
    ChainSpace cs{2, 3, 4};
    REQUIRE(cs.dimension() == 3 * 6);
    REQUIRE(ChainSpace{0, 5, 4}.dimension() == 5);
    REQUIRE(ChainSpace{4, 5, 4}.dimension() == 5);
}

TEST_CASE("single-operator differential is X - f(x) I") {
    MatrixXcd x{{cd(1), cd(2)}, {cd(0), cd(3)}};
    OperatorFamily<Complexd> fam(2, {x});
    auto rep = build_rep(fam);
    MatrixXcd d1 = differential_matrix<Complexd>(rep, {cd(0.5)}, 1);
    MatrixXcd expected = x - cd(0.5) * MatrixXcd::identity(2);
    REQUIRE((d1 - expected).max_abs() == 0.0);
}

TEST_CASE("degree-1 differential of the example is the block row [B | A - 1/2]") {
    auto rep = calibrated_paper_rep();
    MatrixXcd d1 = differential_matrix<Complexd>(rep, {cd(0), cd(0.5)}, 1);
    REQUIRE(d1.rows() == 2);
    REQUIRE(d1.cols() == 4);
    MatrixXcd b = rep.op(0), a_half = rep.op(1) - cd(0.5) * MatrixXcd::identity(2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            REQUIRE(std::abs(d1(i, j) - b(i, j)) < 1e-14);
            REQUIRE(std::abs(d1(i, 2 + j) - a_half(i, j)) < 1e-14);
        }
}

TEST_CASE("degree-2 differential of the example matches the hand expansion") {
    auto rep = calibrated_paper_rep();
    MatrixXcd d2 = differential_matrix<Complexd>(rep, {cd(0), cd(0.5)}, 2);
    MatrixXcd expected = expected_paper_d2(rep, cd(0), cd(0.5));
    REQUIRE((d2 - expected).max_abs() < 1e-14);
}

TEST_CASE("differential rejects bad degrees and non-characters") {
    auto rep = calibrated_paper_rep();
    REQUIRE_THROWS_AS(differential_matrix<Complexd>(rep, {cd(0), cd(0.5)}, 0), DegreeOutOfRange);
    REQUIRE_THROWS_AS(differential_matrix<Complexd>(rep, {cd(0), cd(0.5)}, 3), DegreeOutOfRange);
    REQUIRE_THROWS_AS(differential_matrix<Complexd>(rep, {cd(1), cd(0)}, 1), NotACharacter);
}

TEST_CASE("build_complex validates the chain property") {
    auto rep = calibrated_paper_rep();
    auto inst = build_complex<Complexd>(rep, {cd(0), cd(0.5)});
    REQUIRE(inst.chain_defect < 1e-12);
    REQUIRE(inst.differentials.size() == 2);

    // the uncalibrated sign violates d^2 = 0 on a non-abelian rep
    auto wrong = build_rep(affine_pair_family<Complexd>(), +1);
    REQUIRE_THROWS_AS(build_complex<Complexd>(wrong, {cd(0), cd(0.5)}), ComplexNotChain);
    // a non-character is rejected before assembly
    REQUIRE_THROWS_AS(build_complex<Complexd>(rep, {cd(1), cd(0)}), NotACharacter);
}

TEST_CASE("sign calibration flips non-abelian reps and keeps abelian ones") {
    auto plus = build_rep(affine_pair_family<Complexd>(), +1);
    REQUIRE(with_calibrated_bracket_sign(plus).bracket_sign == -1);
    auto minus = build_rep(affine_pair_family<Complexd>(), -1);
    REQUIRE(with_calibrated_bracket_sign(minus).bracket_sign == -1);

    OperatorFamily<Complexd> diag(2, {diagonal_matrix<Complexd>({cd(1), cd(2)}),
                                      diagonal_matrix<Complexd>({cd(3), cd(4)})});
    auto abelian = build_rep(diag, +1);
    REQUIRE(with_calibrated_bracket_sign(abelian).bracket_sign == +1);
}

TEST_CASE("betti vectors of the single-operator complexes") {
    MatrixXcd a{{cd(0), cd(0.5)}, {cd(0.5), cd(0)}};
    OperatorFamily<Complexd> fam(2, {a});
    auto rep = build_rep(fam);

    // f(a) = 1/2 is an eigenvalue: ker(a - 1/2) is one-dimensional
    auto hit = build_complex<Complexd>(rep, {cd(0.5)});
    BettiVector b1 = betti(hit);
    REQUIRE(b1.beta == std::vector<std::size_t>{1, 1});
    REQUIRE_FALSE(is_exact_complex(hit));

    // f(a) = 7 is not an eigenvalue: a - 7 is invertible
    auto miss = build_complex<Complexd>(rep, {cd(7.0)});
    REQUIRE(betti(miss).beta == std::vector<std::size_t>{0, 0});
    REQUIRE(is_exact_complex(miss));

    // zero operator on a one-dimensional space at f = 0
    OperatorFamily<Complexd> zero_fam(1, {MatrixXcd::zero(1, 1)});
    auto zrep = build_rep(zero_fam);
    auto zinst = build_complex<Complexd>(zrep, {cd(0)});
    REQUIRE(betti(zinst).beta == std::vector<std::size_t>{1, 1});
}

TEST_CASE("koszul complex of commuting diagonals detects joint eigenvalues") {
    OperatorFamily<Complexd> fam(2, {diagonal_matrix<Complexd>({cd(1), cd(2)}),
                                     diagonal_matrix<Complexd>({cd(3), cd(4)})});
    // (1,3) is the joint eigenvalue at e1: homology appears
    auto at_joint = koszul_complex<Complexd>(fam, {cd(1), cd(3)});
    REQUIRE_FALSE(is_exact_complex(at_joint));
    // (1,4) mixes two different positions: no common eigenvector, exact
    auto off_joint = koszul_complex<Complexd>(fam, {cd(1), cd(4)});
    REQUIRE(is_exact_complex(off_joint));
}

TEST_CASE("koszul complex of a single operator is 0 -> E -> E -> 0") {
    MatrixXcd a{{cd(2), cd(1)}, {cd(0), cd(5)}};
    OperatorFamily<Complexd> fam(2, {a});
    auto inst = koszul_complex<Complexd>(fam, {cd(2)});
    REQUIRE(inst.differentials.size() == 1);
    MatrixXcd expected = a - cd(2) * MatrixXcd::identity(2);
    REQUIRE((inst.d(1) - expected).max_abs() == 0.0);
}

TEST_CASE("koszul rejects non-commuting families") {
    REQUIRE_THROWS_AS(
        koszul_complex<Complexd>(affine_pair_family<Complexd>(), {cd(0), cd(0)}),
        NotCommuting);
}

TEST_CASE("abelian degeneration: build_complex equals koszul entry for entry") {
    OperatorFamily<Complexd> fam(3, {diagonal_matrix<Complexd>({cd(1), cd(2), cd(7)}),
                                     diagonal_matrix<Complexd>({cd(3), cd(4), cd(-1)})});
    std::vector<Complexd> lambda{cd(1), cd(3)};
    auto viaKoszul = koszul_complex<Complexd>(fam, lambda);
    auto rep = build_rep(fam);  // least-squares structure constants, exactly zero here
    auto viaRep = build_complex<Complexd>(rep, lambda);
    for (std::size_t p = 1; p <= 2; ++p)
        REQUIRE((viaKoszul.d(p) - viaRep.d(p)).max_abs() == 0.0);

    // simultaneously triangularized commuting instances agree to rounding
    auto inst = random_commuting_family(3, 2, 3);
    auto k2 = koszul_complex<Complexd>(inst.family, lambda);
    auto r2 = build_complex<Complexd>(build_rep(inst.family), lambda);
    for (std::size_t p = 1; p <= 2; ++p)
        REQUIRE((k2.d(p) - r2.d(p)).max_abs() < 1e-12);
}

TEST_CASE("translation covariance of the koszul complex") {
    OperatorFamily<Complexd> fam(2, {diagonal_matrix<Complexd>({cd(1), cd(2)}),
                                     diagonal_matrix<Complexd>({cd(3), cd(4)})});
    std::vector<Complexd> lambda{cd(1), cd(3)}, mu{cd(2), cd(-1)};
    OperatorFamily<Complexd> shifted(
        2, {fam.ops[0] - mu[0] * MatrixXcd::identity(2), fam.ops[1] - mu[1] * MatrixXcd::identity(2)});
    std::vector<Complexd> shifted_lambda{lambda[0] - mu[0], lambda[1] - mu[1]};
    auto lhs = koszul_complex<Complexd>(fam, lambda);
    auto rhs = koszul_complex<Complexd>(shifted, shifted_lambda);
    for (std::size_t p = 1; p <= 2; ++p) REQUIRE((lhs.d(p) - rhs.d(p)).max_abs() < 1e-12);
}

TEST_CASE("chain property holds on fuzzed reps and characters") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        InstanceSpec spec;
        spec.seed = seed;
        spec.m = 2 + seed % 4;
        spec.n_target = 1 + seed % 4;
        std::size_t cap = spec.m * (spec.m + 1) / 2;
        if (spec.n_target > cap) spec.n_target = cap;
        auto rep = with_calibrated_bracket_sign(random_solvable_rep(spec));
        auto cands = candidate_characters(rep);
        std::size_t tried = 0;
        for (const auto& cand : cands.items) {
            auto inst = build_complex(rep, cand.coords);
            double scale = 1.0;
            for (const auto& d : inst.differentials) scale = std::max(scale, d.max_abs());
            REQUIRE(inst.chain_defect <= 1e-10 * (1.0 + scale));
            if (++tried == 10) break;
        }
    }
}

TEST_CASE("exact backend chains are identically zero") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        InstanceSpec spec;
        spec.seed = seed;
        spec.m = 2 + seed % 2;
        spec.n_target = 1 + seed % 3;
        std::size_t cap = spec.m * (spec.m + 1) / 2;
        if (spec.n_target > cap) spec.n_target = cap;
        auto rep = with_calibrated_bracket_sign(random_exact_solvable_rep(spec));
        std::vector<GaussianRational> zero(rep.n(), GaussianRational());
        auto inst = build_complex(rep, zero);
        REQUIRE(inst.chain_defect == 0.0);
    }
}

TEST_CASE("euler characteristic of computed betti vectors vanishes") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        InstanceSpec spec;
        spec.seed = seed;
        spec.m = 2 + seed % 3;
        spec.n_target = 1 + seed % 3;
        std::size_t cap = spec.m * (spec.m + 1) / 2;
        if (spec.n_target > cap) spec.n_target = cap;
        auto rep = with_calibrated_bracket_sign(random_solvable_rep(spec));
        auto cands = candidate_characters(rep);
        std::size_t tried = 0;
        for (const auto& cand : cands.items) {
            BettiVector b = betti(build_complex(rep, cand.coords));
            REQUIRE(b.euler_characteristic() == 0);
            if (++tried == 6) break;
        }
    }
}
