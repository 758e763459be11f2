#include <catch2/catch_amalgamated.hpp>

#include "liespec/lie_structure.hpp"
#include "liespec/theorem_harness.hpp"

using namespace liespec;

namespace {

Complexd cd(double re, double im = 0.0) { return {re, im}; }

MatrixXcd unit_matrix(std::size_t m, std::size_t i, std::size_t j) {
    MatrixXcd e(m, m);
    e(i, j) = cd(1.0);
    return e;
}

LieAlgebraRep<Complexd> paper_rep(int sigma = +1) {
    return build_rep(affine_pair_family<Complexd>(), sigma);
}

}  // namespace

TEST_CASE("build_rep on the example pair gives [b,a] = b at sigma = +1") {
    auto rep = paper_rep();
    REQUIRE(rep.n() == 2);
    REQUIRE(rep.closure_residual < 1e-12);
    // c[b][a][b] = 1 in basis order (b, a)
    REQUIRE(std::abs(rep.c.at(0, 1, 0) - cd(1.0)) < 1e-12);
    REQUIRE(std::abs(rep.c.at(0, 1, 1)) < 1e-12);
    REQUIRE(std::abs(rep.c.at(1, 0, 0) + cd(1.0)) < 1e-12);
}

TEST_CASE("build_rep of a single identity generator is abelian") {
    OperatorFamily<Complexd> fam(2, {MatrixXcd::identity(2)});
    auto rep = build_rep(fam);
    REQUIRE(rep.c.max_abs() < 1e-14);
    REQUIRE(is_solvable(rep));
    REQUIRE(is_nilpotent(rep));
}

TEST_CASE("build_rep closes {E11, E12} with [E11, E12] = E12") {
    OperatorFamily<Complexd> fam(2, {unit_matrix(2, 0, 0), unit_matrix(2, 0, 1)});
    auto rep = build_rep(fam);
    REQUIRE(std::abs(rep.c.at(0, 1, 1) - cd(1.0)) < 1e-12);
    REQUIRE(std::abs(rep.c.at(0, 1, 0)) < 1e-12);
}

TEST_CASE("build_rep rejects a span that is not bracket-closed") {
    // [E12, E21] = E11 - E22 lies outside span{E12, E21}
    OperatorFamily<Complexd> fam(3, {unit_matrix(3, 0, 1), unit_matrix(3, 1, 0)});
    REQUIRE_THROWS_AS(build_rep(fam), NotClosed);
}

TEST_CASE("build_rep rejects dependent generators") {
    MatrixXcd a{{cd(0), cd(0.5)}, {cd(0.5), cd(0)}};
    OperatorFamily<Complexd> fam(2, {a, cd(2.0) * a});
    REQUIRE_THROWS_AS(build_rep(fam), NotIndependent);
}

TEST_CASE("derived subalgebra of the example is the b line") {
    auto rep = paper_rep();
    auto derived = derived_subalgebra(rep);
    REQUIRE(derived.dim() == 1);
    REQUIRE(std::abs(derived.basis(0, 0) - cd(1.0)) < 1e-12);
    REQUIRE(std::abs(derived.basis(0, 1)) < 1e-12);
    REQUIRE(derived.is_ideal);
    REQUIRE(is_ideal(derived, rep));
}

TEST_CASE("derived subalgebra of an abelian family is zero") {
    OperatorFamily<Complexd> fam(2, {diagonal_matrix<Complexd>({cd(1), cd(2)}),
                                     diagonal_matrix<Complexd>({cd(3), cd(4)})});
    auto rep = build_rep(fam);
    REQUIRE(derived_subalgebra(rep).dim() == 0);
}

TEST_CASE("derived subalgebra of the full strictly upper triangular 3x3 family") {
    OperatorFamily<Complexd> fam(
        3, {unit_matrix(3, 0, 1), unit_matrix(3, 0, 2), unit_matrix(3, 1, 2)});
    auto rep = build_rep(fam);
    auto derived = derived_subalgebra(rep);
    // [E12, E23] = E13, every other bracket vanishes
    REQUIRE(derived.dim() == 1);
    REQUIRE(std::abs(derived.basis(0, 1) - cd(1.0)) < 1e-12);
}

TEST_CASE("derived series of the example is L > span{b} > 0") {
    auto series = derived_series(paper_rep());
    REQUIRE(series.size() == 3);
    REQUIRE(series[0].dim() == 2);
    REQUIRE(series[1].dim() == 1);
    REQUIRE(series[2].dim() == 0);
    REQUIRE(is_solvable(paper_rep()));
}

TEST_CASE("abelian derived series terminates immediately") {
    OperatorFamily<Complexd> fam(2, {diagonal_matrix<Complexd>({cd(1), cd(2)})});
    auto series = derived_series(build_rep(fam));
    REQUIRE(series.size() == 2);
    REQUIRE(series.back().dim() == 0);
}

TEST_CASE("the trace-zero 2x2 algebra is not solvable") {
    // e = E12, f = E21, h = E11 - E22 regenerate each other under brackets
    MatrixXcd h = diagonal_matrix<Complexd>({cd(1), cd(-1)});
    OperatorFamily<Complexd> fam(2, {unit_matrix(2, 0, 1), unit_matrix(2, 1, 0), h});
    auto rep = build_rep(fam);
    REQUIRE_FALSE(is_solvable(rep));
    auto series = derived_series(rep);
    REQUIRE(series.back().dim() == 3);
}

TEST_CASE("lower central series: the example is solvable but not nilpotent") {
    auto rep = paper_rep();
    REQUIRE(is_solvable(rep));
    REQUIRE_FALSE(is_nilpotent(rep));
    auto series = lower_central_series(rep);
    REQUIRE(series.back().dim() == 1);  // [L, span{b}] = span{b} stabilizes
}

TEST_CASE("strictly upper triangular families are nilpotent") {
    OperatorFamily<Complexd> fam(
        3, {unit_matrix(3, 0, 1), unit_matrix(3, 0, 2), unit_matrix(3, 1, 2)});
    auto rep = build_rep(fam);
    REQUIRE(is_nilpotent(rep));
    auto series = lower_central_series(rep);
    REQUIRE(series.size() == 3);  // dims 3, 1, 0
    REQUIRE(series[1].dim() == 1);
    REQUIRE(series.back().dim() == 0);
}

TEST_CASE("ideal tests on the example") {
    auto rep = paper_rep();
    SubalgebraSpec<Complexd> span_b{MatrixXcd{{cd(1), cd(0)}}, false};
    SubalgebraSpec<Complexd> span_a{MatrixXcd{{cd(0), cd(1)}}, false};
    SubalgebraSpec<Complexd> whole{MatrixXcd::identity(2), false};
    REQUIRE(is_ideal(span_b, rep));
    REQUIRE_FALSE(is_ideal(span_a, rep));
    REQUIRE(is_ideal(whole, rep));
}

TEST_CASE("adjoint representation of the example at sigma = +1") {
    auto rep = paper_rep();
    auto ad = adjoint_rep(rep);
    REQUIRE(ad.dim() == 2);
    REQUIRE(ad.dim_E == 2);
    // ad a on basis order (b, a): bracket(a, b) = -b
    const MatrixXcd& ad_a = ad.ops[1];
    REQUIRE(std::abs(ad_a(0, 0) + cd(1.0)) < 1e-12);
    REQUIRE(std::abs(ad_a(0, 1)) < 1e-12);
    REQUIRE(std::abs(ad_a(1, 0)) < 1e-12);
    REQUIRE(std::abs(ad_a(1, 1)) < 1e-12);
}

TEST_CASE("abelian adjoint representation vanishes") {
    OperatorFamily<Complexd> fam(2, {diagonal_matrix<Complexd>({cd(1), cd(2)}),
                                     diagonal_matrix<Complexd>({cd(3), cd(4)})});
    for (const auto& m : adjoint_rep(build_rep(fam)).ops) REQUIRE(m.max_abs() < 1e-14);
}

TEST_CASE("ad is a Lie homomorphism on fuzzed reps") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        InstanceSpec spec;
        spec.seed = seed;
        spec.m = 3 + seed % 2;
        spec.n_target = 2 + seed % 2;
        auto rep = random_solvable_rep(spec);
        auto ad = adjoint_rep(rep);
        for (std::size_t i = 0; i < rep.n(); ++i)
            for (std::size_t j = 0; j < rep.n(); ++j) {
                MatrixXcd lhs = commutator(ad.ops[i], ad.ops[j]);
                if (rep.bracket_sign < 0) lhs = -lhs;
                MatrixXcd rhs(rep.n(), rep.n());
                for (std::size_t k = 0; k < rep.n(); ++k)
                    rhs = rhs + rep.c.at(i, j, k) * ad.ops[k];
                REQUIRE((lhs - rhs).max_abs() < 1e-8);
            }
    }
}

TEST_CASE("coadjoint form rank") {
    auto rep = paper_rep();
    // a character (vanishes on L^2) gives the zero form
    REQUIRE(coadjoint_form_rank<Complexd>({cd(0), cd(0.5)}, rep) == 0);
    // f(b) = 1, f(a) = 0 gives a nonzero skew 2x2 form of rank 2
    REQUIRE(coadjoint_form_rank<Complexd>({cd(1), cd(0)}, rep) == 2);

    OperatorFamily<Complexd> abelian(2, {diagonal_matrix<Complexd>({cd(1), cd(2)}),
                                         diagonal_matrix<Complexd>({cd(3), cd(4)})});
    auto arep = build_rep(abelian);
    REQUIRE(coadjoint_form_rank<Complexd>({cd(1), cd(1)}, arep) == 0);
}

TEST_CASE("restrict_functional projects coordinates") {
    auto rep = paper_rep();
    Character<Complexd> f = make_character(rep, {cd(0), cd(0.5)});
    SubalgebraSpec<Complexd> span_b{MatrixXcd{{cd(1), cd(0)}}, true};
    SubalgebraSpec<Complexd> span_a{MatrixXcd{{cd(0), cd(1)}}, false};
    SubalgebraSpec<Complexd> whole{MatrixXcd::identity(2), true};
    REQUIRE(std::abs(restrict_functional(f, span_b).coords[0]) < 1e-14);
    REQUIRE(std::abs(restrict_functional(f, span_a).coords[0] - cd(0.5)) < 1e-14);
    auto full = restrict_functional(f, whole);
    REQUIRE(std::abs(full.coords[0] - f.coords[0]) < 1e-14);
    REQUIRE(std::abs(full.coords[1] - f.coords[1]) < 1e-14);
}

TEST_CASE("character certificates follow the derived subalgebra") {
    auto rep = paper_rep();
    REQUIRE(make_character(rep, {cd(0), cd(0.5)}).vanishes_on_derived);
    REQUIRE_FALSE(make_character(rep, {cd(1), cd(0)}).vanishes_on_derived);
}

TEST_CASE("global sign flip leaves structure verdicts unchanged") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        InstanceSpec spec;
        spec.seed = seed;
        spec.m = 3;
        spec.n_target = 2 + seed % 2;
        auto rep = random_solvable_rep(spec);
        auto flipped = rep.with_flipped_sign();
        REQUIRE(is_solvable(rep) == is_solvable(flipped));
        REQUIRE(is_nilpotent(rep) == is_nilpotent(flipped));
        auto ds1 = derived_series(rep), ds2 = derived_series(flipped);
        REQUIRE(ds1.size() == ds2.size());
        for (std::size_t i = 0; i < ds1.size(); ++i) REQUIRE(ds1[i].dim() == ds2[i].dim());
        auto ideal = derived_subalgebra(rep);
        REQUIRE(is_ideal(ideal, flipped));
        for (std::size_t i = 0; i < rep.c.c.size(); ++i)
            REQUIRE(std::abs(rep.c.c[i] + flipped.c.c[i]) < 1e-14);
    }
}

TEST_CASE("structure constants satisfy antisymmetry and Jacobi on fuzzed reps") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        InstanceSpec spec;
        spec.seed = seed;
        spec.m = 2 + seed % 4;
        spec.n_target = 1 + seed % 3;
        std::size_t cap = spec.m * (spec.m + 1) / 2;
        if (spec.n_target > cap) spec.n_target = cap;
        auto rep = random_solvable_rep(spec);
        for (std::size_t i = 0; i < rep.n(); ++i)
            for (std::size_t j = 0; j < rep.n(); ++j)
                for (std::size_t k = 0; k < rep.n(); ++k)
                    REQUIRE(std::abs(rep.c.at(i, j, k) + rep.c.at(j, i, k)) < 1e-12);
        REQUIRE(rep.jacobi_residual < 1e-8);
    }
}

TEST_CASE("nilpotent implies solvable and derived-of-solvable is nilpotent") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        InstanceSpec nil;
        nil.seed = seed;
        nil.m = 3 + seed % 3;
        nil.n_target = 1 + seed % 3;
        nil.nilpotent_only = true;
        std::size_t cap = nil.m * (nil.m - 1) / 2;
        if (nil.n_target > cap) nil.n_target = cap;
        auto nrep = random_solvable_rep(nil);
        REQUIRE(is_nilpotent(nrep));
        REQUIRE(is_solvable(nrep));

        InstanceSpec sol;
        sol.seed = seed;
        sol.m = 3 + seed % 3;
        sol.n_target = 2 + seed % 2;
        auto srep = random_solvable_rep(sol);
        auto derived = derived_subalgebra(srep);
        if (derived.dim() > 0) {
            auto drep = sub_rep(srep, derived);
            REQUIRE(is_nilpotent(drep));
        }
    }
}

TEST_CASE("sub_rep restricts the representation faithfully") {
    auto rep = paper_rep();
    SubalgebraSpec<Complexd> span_b{MatrixXcd{{cd(1), cd(0)}}, true};
    auto sub = sub_rep(rep, span_b);
    REQUIRE(sub.n() == 1);
    REQUIRE((sub.op(0) - rep.op(0)).max_abs() < 1e-14);
}
