#include <catch2/catch_amalgamated.hpp>

#include "liespec/linalg.hpp"
#include "liespec/theorem_harness.hpp"

using namespace liespec;

namespace {

MatrixXcd paper_a() {
    return MatrixXcd{{{0.0, 0.0}, {0.5, 0.0}}, {{0.5, 0.0}, {0.0, 0.0}}};
}
MatrixXcd paper_b() {
    return MatrixXcd{{{1.0, 0.0}, {1.0, 0.0}}, {{-1.0, 0.0}, {-1.0, 0.0}}};
}

MatrixXcd random_matrix(DetRng& rng, std::size_t r, std::size_t c) {
    MatrixXcd m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.disc(1.0);
    return m;
}

MatrixXgq random_rational_matrix(DetRng& rng, std::size_t r, std::size_t c) {
    MatrixXgq m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = GaussianRational{Rational(rng.signed_integer(-6, 6), 3),
                                       Rational(rng.signed_integer(-6, 6), 4)};
    return m;
}

}  // namespace

TEST_CASE("commutator of the example pair reproduces [b,a] = b") {
    MatrixXcd k = commutator(paper_b(), paper_a());
    REQUIRE((k - paper_b()).max_abs() == 0.0);
}

TEST_CASE("commutator is antisymmetric and kills commuting matrices") {
    MatrixXcd a = paper_a();
    REQUIRE(commutator(a, a).max_abs() == 0.0);
    MatrixXcd d1 = diagonal_matrix<Complexd>({{1.0, 0.0}, {2.0, 0.0}});
    MatrixXcd d2 = diagonal_matrix<Complexd>({{3.0, 0.0}, {4.0, 0.0}});
    REQUIRE(commutator(d1, d2).max_abs() == 0.0);
}

TEST_CASE("commutator rejects shape mismatches") {
    MatrixXcd a(2, 2), b(3, 3);
    REQUIRE_THROWS_AS(commutator(a, b), ShapeMismatch);
    MatrixXcd rect(2, 3);
    REQUIRE_THROWS_AS(commutator(rect, rect), ShapeMismatch);
}

TEST_CASE("rank on the canonical examples") {
    REQUIRE(rank(MatrixXcd::zero(3, 3)) == 0);
    REQUIRE(rank(MatrixXcd::identity(3)) == 3);
    // second row of b is -1 times the first, so the row-reduction rank is 1
    REQUIRE(rank(paper_b()) == 1);
    MatrixXgq b_exact{{GaussianRational(1), GaussianRational(1)},
                      {GaussianRational(-1), GaussianRational(-1)}};
    REQUIRE(rank(b_exact) == 1);
}

TEST_CASE("rank plus kernel dimension equals column count") {
    DetRng rng(2024);
    for (int t = 0; t < 40; ++t) {
        std::size_t r = 1 + rng.integer(5), c = 1 + rng.integer(5);
        MatrixXcd m = random_matrix(rng, r, c);
        REQUIRE(rank(m) + kernel_dim(m) == c);
    }
    DetRng rng2(55);
    for (int t = 0; t < 15; ++t) {
        std::size_t r = 1 + rng2.integer(4), c = 1 + rng2.integer(4);
        MatrixXgq m = random_rational_matrix(rng2, r, c);
        REQUIRE(rank(m) + kernel_dim(m) == c);
    }
}

TEST_CASE("rank of a product never exceeds the factor ranks") {
    DetRng rng(77);
    for (int t = 0; t < 25; ++t) {
        std::size_t k = 2 + rng.integer(4);
        MatrixXcd a = random_matrix(rng, k, k), b = random_matrix(rng, k, k);
        std::size_t ra = rank(a), rb = rank(b);
        REQUIRE(rank(a * b) <= std::min(ra, rb));
    }
}

TEST_CASE("kernel dimension on the stated examples") {
    REQUIRE(kernel_dim(MatrixXcd::identity(2)) == 0);
    REQUIRE(kernel_dim(MatrixXcd::zero(2, 3)) == 3);
    REQUIRE(kernel_dim(paper_b()) == 1);
}

TEST_CASE("eigenvalues of the example operators") {
    auto diag = eigenvalues(diagonal_matrix<Complexd>({{1.0, 0.0}, {2.0, 0.0}}));
    std::sort(diag.begin(), diag.end(),
              [](const Complexd& x, const Complexd& y) { return x.real() < y.real(); });
    REQUIRE(std::abs(diag[0] - Complexd{1.0, 0.0}) < 1e-12);
    REQUIRE(std::abs(diag[1] - Complexd{2.0, 0.0}) < 1e-12);

    // characteristic polynomial of a is t^2 - 1/4
    auto ea = eigenvalues(paper_a());
    std::sort(ea.begin(), ea.end(),
              [](const Complexd& x, const Complexd& y) { return x.real() < y.real(); });
    REQUIRE(std::abs(ea[0] - Complexd{-0.5, 0.0}) < 1e-12);
    REQUIRE(std::abs(ea[1] - Complexd{0.5, 0.0}) < 1e-12);

    // characteristic polynomial of b is t^2
    for (const auto& v : eigenvalues(paper_b())) REQUIRE(std::abs(v) < 1e-12);
}

TEST_CASE("exact eigenvalues read triangular diagonals and reject the rest") {
    MatrixXgq tri(2, 2);
    tri(0, 0) = GaussianRational(1, 2);
    tri(0, 1) = GaussianRational(7);
    tri(1, 1) = GaussianRational(-3, 2);
    auto ev = eigenvalues(tri);
    REQUIRE(ev[0] == GaussianRational(1, 2));
    REQUIRE(ev[1] == GaussianRational(-3, 2));

    MatrixXgq full(2, 2);
    full(0, 1) = GaussianRational(1);
    full(1, 0) = GaussianRational(1);
    REQUIRE_THROWS_AS(eigenvalues(full), Error);
}

TEST_CASE("eigenvalues of triangular float matrices are the diagonal exactly") {
    DetRng rng(31);
    for (int t = 0; t < 10; ++t) {
        std::size_t k = 2 + rng.integer(4);
        MatrixXcd m(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i; j < k; ++j) m(i, j) = rng.disc(1.0);
        auto ev = eigenvalues(m);
        // already-triangular input converges immediately, so the values are the
        // diagonal entries with no rounding at all
        std::vector<Complexd> diag;
        for (std::size_t i = 0; i < k; ++i) diag.push_back(m(i, i));
        auto lex = [](const Complexd& x, const Complexd& y) {
            return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
        };
        std::sort(ev.begin(), ev.end(), lex);
        std::sort(diag.begin(), diag.end(), lex);
        for (std::size_t i = 0; i < k; ++i) REQUIRE(std::abs(ev[i] - diag[i]) < 1e-14);
    }
}

TEST_CASE("operator norm of the example operators") {
    REQUIRE(operator_norm(paper_a()) == Catch::Approx(0.5).margin(1e-14));
    REQUIRE(operator_norm(MatrixXcd::identity(4)) == Catch::Approx(1.0).margin(1e-14));
    // b b^H = [[2,-2],[-2,2]] has eigenvalues {4, 0}, so sigma_max = 2
    REQUIRE(operator_norm(paper_b()) == Catch::Approx(2.0).margin(1e-12));

    MatrixXgq a_exact{{GaussianRational(0), GaussianRational(1, 2)},
                      {GaussianRational(1, 2), GaussianRational(0)}};
    REQUIRE(operator_norm(a_exact) == 0.5);  // exact rational square root
}

TEST_CASE("operator norm is submultiplicative and dominates eigenvalues") {
    DetRng rng(404);
    for (int t = 0; t < 20; ++t) {
        std::size_t k = 2 + rng.integer(3);
        MatrixXcd a = random_matrix(rng, k, k), b = random_matrix(rng, k, k);
        REQUIRE(operator_norm(a * b) <= operator_norm(a) * operator_norm(b) + 1e-10);
        double rho = 0.0;
        for (const auto& v : eigenvalues(a)) rho = std::max(rho, std::abs(v));
        REQUIRE(operator_norm(a) + 1e-10 >= rho);
    }
}

TEST_CASE("float and exact rank agree on rational matrices with honest gaps") {
    DetRng rng(9001);
    for (int t = 0; t < 20; ++t) {
        std::size_t k = 2 + rng.integer(3);
        std::size_t target = 1 + rng.integer(k);
        // product of a kxr and an rxk rational matrix has rank r generically
        MatrixXgq left = random_rational_matrix(rng, k, target);
        MatrixXgq right = random_rational_matrix(rng, target, k);
        MatrixXgq prod = left * right;
        std::size_t exact_rank = rank(prod);
        REQUIRE(rank(to_float_matrix(prod)) == exact_rank);
    }
}

TEST_CASE("non-finite entries are rejected, never silently ranked") {
    MatrixXcd m(2, 2);
    m(0, 0) = Complexd{std::numeric_limits<double>::quiet_NaN(), 0.0};
    REQUIRE_THROWS_AS(rank(m), NonFiniteEntry);
    REQUIRE_THROWS_AS(operator_norm(m), NonFiniteEntry);
    m(0, 0) = Complexd{std::numeric_limits<double>::infinity(), 0.0};
    REQUIRE_THROWS_AS(eigenvalues(m), NonFiniteEntry);
}

TEST_CASE("zero matrix ranks zero without threshold division") {
    RankInfo info = rank_info(MatrixXcd::zero(4, 4));
    REQUIRE(info.rank == 0);
    REQUIRE(info.sigma_max == 0.0);
    REQUIRE_FALSE(info.ill_conditioned);
}

TEST_CASE("null space columns really annihilate") {
    DetRng rng(5150);
    for (int t = 0; t < 10; ++t) {
        std::size_t k = 3 + rng.integer(2);
        MatrixXcd left = random_matrix(rng, k, 2);
        MatrixXcd right = random_matrix(rng, 2, k);
        MatrixXcd m = left * right;  // rank 2
        MatrixXcd ns = null_space(m);
        REQUIRE(ns.cols() == k - 2);
        REQUIRE((m * ns).max_abs() < 1e-9);
    }
    MatrixXgq b_exact{{GaussianRational(1), GaussianRational(1)},
                      {GaussianRational(-1), GaussianRational(-1)}};
    MatrixXgq ns = null_space(b_exact);
    REQUIRE(ns.cols() == 1);
    REQUIRE((b_exact * ns).max_abs() == 0.0);
}

TEST_CASE("exact gaussian rational arithmetic stays reduced and exact") {
    GaussianRational x{Rational(1, 2), Rational(1, 3)};
    GaussianRational y{Rational(2, 5), Rational(-1, 7)};
    GaussianRational z = (x * y) / y;
    REQUIRE(z == x);
    REQUIRE((x - x).is_zero());
    GaussianRational q = scalar_traits<GaussianRational>::one() / x;
    REQUIRE((q * x) == scalar_traits<GaussianRational>::one());
}

TEST_CASE("scalar parsing and formatting round-trip") {
    REQUIRE(parse_gaussian_rational("1/2") == GaussianRational(1, 2));
    REQUIRE(parse_gaussian_rational("-3/2") == GaussianRational(-3, 2));
    REQUIRE(parse_gaussian_rational("0") == GaussianRational());
    REQUIRE(parse_gaussian_rational("1/2+1/3 i") ==
            GaussianRational{Rational(1, 2), Rational(1, 3)});
    REQUIRE(parse_gaussian_rational("1/2-1/3 i") ==
            GaussianRational{Rational(1, 2), Rational(-1, 3)});
    REQUIRE(parse_gaussian_rational("2i") == GaussianRational{Rational(0), Rational(2)});
    REQUIRE_THROWS_AS(parse_gaussian_rational("1/0"), ParseError);
    REQUIRE_THROWS_AS(parse_gaussian_rational("x"), ParseError);
    REQUIRE_THROWS_AS(parse_gaussian_rational("1/2+"), ParseError);

    DetRng rng(808);
    for (int t = 0; t < 30; ++t) {
        GaussianRational v{Rational(rng.signed_integer(-99, 99), 1 + rng.integer(40)),
                           Rational(rng.signed_integer(-99, 99), 1 + rng.integer(40))};
        REQUIRE(parse_gaussian_rational(format_scalar(v)) == v);
    }
}

TEST_CASE("rationalize recovers small fractions and rejects junk") {
    REQUIRE(*rationalize(0.5) == Rational(1, 2));
    REQUIRE(*rationalize(-1.5) == Rational(-3, 2));
    REQUIRE(*rationalize(1.0 / 3.0) == Rational(1, 3));
    REQUIRE(*rationalize(2.3e-13) == Rational(0));
    REQUIRE_FALSE(rationalize(0.6180339887498949, 1e-12, 100).has_value());
    auto g = rationalize_complex(Complexd{0.25, -0.75});
    REQUIRE(g.has_value());
    REQUIRE(*g == GaussianRational{Rational(1, 4), Rational(-3, 4)});
}

TEST_CASE("exact sqrt recognizes perfect rational squares") {
    REQUIRE(*exact_sqrt(Rational(1, 4)) == Rational(1, 2));
    REQUIRE(*exact_sqrt(Rational(9, 16)) == Rational(3, 4));
    REQUIRE(*exact_sqrt(Rational(0)) == Rational(0));
    REQUIRE_FALSE(exact_sqrt(Rational(1, 2)).has_value());
    REQUIRE_FALSE(exact_sqrt(Rational(-1)).has_value());
}
