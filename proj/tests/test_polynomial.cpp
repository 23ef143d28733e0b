#include "sosb/polynomial.hpp"

#include <cmath>

#include "doctest.h"

using namespace sosb;

namespace {

Polynomial var(int n, int i) { return Polynomial::variable(n, i); }

// Independent evaluation: plain loop over terms with std::pow, no shared
// code with Polynomial::eval's accumulation.
Cplx eval_oracle(const Polynomial& p, const Point& x) {
    Cplx total = 0.0;
    for (const Term& t : p.terms()) {
        Cplx m = t.coeff;
        for (int i = 0; i < p.nvars(); ++i)
            m *= std::pow(x[i], Cplx(static_cast<double>(t.mono.exp[i]), 0.0));
        total += m;
    }
    return total;
}

}  // namespace

TEST_CASE("term order is graded lex ascending") {
    auto cubics = monomials_of_degree(3, 3);
    REQUIRE(cubics.size() == 10);
    CHECK(cubics.front().exp == std::vector<int>{0, 0, 3});
    CHECK(cubics[1].exp == std::vector<int>{0, 1, 2});
    CHECK(cubics.back().exp == std::vector<int>{3, 0, 0});

    auto quads4 = monomials_of_degree(4, 2);
    REQUIRE(quads4.size() == 10);
    CHECK(quads4.front().exp == std::vector<int>{0, 0, 0, 2});
    CHECK(quads4.back().exp == std::vector<int>{2, 0, 0, 0});

    CHECK(Monomial({0, 2}) < Monomial({3, 0}));  // degree first
    CHECK(Monomial({0, 3}) < Monomial({1, 2}));  // then lex ascending
}

TEST_CASE("eval basics") {
    const int n = 2;
    Polynomial p = var(n, 0) * var(n, 0) + var(n, 1);  // x0^2 + x1
    CHECK(std::abs(p.eval({0.0, 0.0})) == 0.0);

    Polynomial q = var(n, 0) * var(n, 1) - Polynomial::constant(n, 1.0);
    CHECK(std::abs(q.eval({1.0, 1.0})) == 0.0);

    CHECK_THROWS_AS(p.eval({1.0}), std::invalid_argument);
}

TEST_CASE("eval matches independent term-by-term summation") {
    Rng rng(Seed{77});
    for (int trial = 0; trial < 5; ++trial) {
        Polynomial p = random_poly(4, 4, false, rng);
        Point x;
        for (int i = 0; i < 4; ++i) x.push_back(Cplx(rng.uniform(-1, 1), 0.0));
        const Cplx a = p.eval(x);
        const Cplx b = eval_oracle(p, x);
        CHECK(std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(b)));
    }
}

TEST_CASE("product evaluation is multiplicative") {
    Rng rng(Seed{5150});
    for (int trial = 0; trial < 20; ++trial) {
        Polynomial p = random_poly(3, 1 + static_cast<int>(rng.below(4)), true, rng);
        Polynomial q = random_poly(3, 1 + static_cast<int>(rng.below(4)), true, rng);
        Point x = {rng.disk_complex(), rng.disk_complex(), rng.disk_complex()};
        const Cplx lhs = (p * q).eval(x);
        const Cplx rhs = p.eval(x) * q.eval(x);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("jacobian on closed forms") {
    {
        PolySystem sys(1, {var(1, 0) * var(1, 0)});
        auto jac = jacobian(sys);
        CHECK(jac[0][0] == var(1, 0) * Cplx(2.0));
    }
    {
        PolySystem sys(2, {var(2, 0) * var(2, 1), var(2, 1) * var(2, 1) * var(2, 1)});
        auto jac = jacobian(sys);
        CHECK(jac[0][0] == var(2, 1));
        CHECK(jac[0][1] == var(2, 0));
        CHECK(jac[1][0].is_zero());
        CHECK(jac[1][1] == var(2, 1) * var(2, 1) * Cplx(3.0));
    }
}

TEST_CASE("jacobian agrees with central finite differences") {
    Rng rng(Seed{4242});
    Polynomial p = random_poly(3, 3, true, rng);
    PolySystem sys(3, {p});
    auto jac = jacobian(sys);
    const double h = 1e-6;
    for (int trial = 0; trial < 4; ++trial) {
        Point x = {rng.disk_complex(), rng.disk_complex(), rng.disk_complex()};
        for (int j = 0; j < 3; ++j) {
            Point xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            const Cplx fd = (p.eval(xp) - p.eval(xm)) / (2.0 * h);
            const Cplx ex = jac[0][j].eval(x);
            CHECK(std::abs(fd - ex) <= 1e-6 * std::max(1.0, std::abs(ex)));
        }
    }
}

TEST_CASE("homogenize and dehomogenize") {
    const int n = 1;
    Polynomial p = var(n, 0) + Polynomial::constant(n, 1.0);  // x1 + 1
    Polynomial ph = p.homogenize(0);
    CHECK(ph.nvars() == 2);
    CHECK(ph.is_homogeneous());
    CHECK(ph == var(2, 0) + var(2, 1));  // x0 + x1

    SUBCASE("round trip on the standard chart") {
        Rng rng(Seed{99});
        Polynomial q = random_poly(3, 3, true, rng);
        Polynomial qh = q.homogenize(0);
        Point patch(4, 0.0);
        patch[0] = 1.0;
        Polynomial back = qh.dehomogenize(patch);
        Point x = {rng.disk_complex(), rng.disk_complex(), rng.disk_complex()};
        CHECK(std::abs(back.eval(x) - q.eval(x)) <= 1e-12);
    }

    SUBCASE("homogenize then evaluate at (1, x) equals original") {
        Rng rng(Seed{100});
        Polynomial q = random_poly(2, 4, true, rng);
        Polynomial qh = q.homogenize(0);
        for (int trial = 0; trial < 5; ++trial) {
            Point x = {rng.disk_complex(), rng.disk_complex()};
            Point x1 = {Cplx(1.0), x[0], x[1]};
            // per-term products are identical; only the accumulation order
            // differs, so agreement is at the reassociation level
            const Cplx ref = q.eval(x);
            CHECK(std::abs(qh.eval(x1) - ref) <= 1e-14 * std::max(1.0, std::abs(ref)));
        }
    }

    SUBCASE("random quartic restricted to a random patch matches projective eval") {
        Rng rng(Seed{321});
        Polynomial p4 = random_poly(3, 4, false, rng);
        Point patch = {rng.unit_complex(), rng.unit_complex(), rng.unit_complex()};
        Polynomial chartp = p4.dehomogenize(patch);
        int pivot = 0;
        for (int i = 1; i < 3; ++i)
            if (std::abs(patch[i]) > std::abs(patch[pivot])) pivot = i;
        for (int trial = 0; trial < 10; ++trial) {
            Point z = {rng.disk_complex(), rng.disk_complex(), rng.disk_complex()};
            Cplx dot = 0.0;
            for (int i = 0; i < 3; ++i) dot += patch[i] * z[i];
            Point scaled(3);
            for (int i = 0; i < 3; ++i) scaled[i] = z[i] / dot;
            Point y;
            for (int i = 0; i < 3; ++i)
                if (i != pivot) y.push_back(scaled[i]);
            const Cplx lhs = chartp.eval(y);
            const Cplx rhs = p4.eval(z) / std::pow(dot, Cplx(4.0, 0.0));
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
        }
    }

    CHECK_THROWS_AS(p.homogenize(0).dehomogenize(Point{0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("random_poly determinism and coefficient law") {
    Polynomial c = random_poly(2, 0, false, Seed{9});
    REQUIRE(c.terms().size() == 1);
    CHECK(std::abs(c.terms()[0].coeff) == doctest::Approx(1.0));

    CHECK(random_poly(4, 3, true, Seed{1234}) == random_poly(4, 3, true, Seed{1234}));
    CHECK_FALSE(random_poly(4, 3, true, Seed{1234}) == random_poly(4, 3, true, Seed{1235}));

    // 10^4 coefficients drawn on the unit circle: mean modulus is exactly 1
    Rng rng(Seed{777});
    double acc = 0.0;
    int count = 0;
    while (count < 10000) {
        Polynomial p = random_poly(3, 3, true, rng);
        for (const Term& t : p.terms()) {
            acc += std::abs(t.coeff);
            ++count;
        }
    }
    CHECK(std::abs(acc / count - 1.0) <= 1e-12);
}

TEST_CASE("no stored zeros, no duplicate monomials") {
    const int n = 2;
    Polynomial p = var(n, 0) - var(n, 0);
    CHECK(p.is_zero());
    Polynomial q = var(n, 0) + var(n, 0);
    REQUIRE(q.terms().size() == 1);
    CHECK(q.terms()[0].coeff == Cplx(2.0));
    CHECK_THROWS_AS(Polynomial(2, {Term{Monomial({-1, 0}), 1.0}}), std::invalid_argument);
}

TEST_CASE("substitute and embed") {
    const int n = 3;
    Rng rng(Seed{31337});
    Polynomial p = random_poly(n, 3, true, rng);
    const Cplx v = rng.disk_complex();
    Polynomial sub = p.substitute(1, v);
    Point x = {rng.disk_complex(), 0.0, rng.disk_complex()};
    Point xv = {x[0], v, x[2]};
    CHECK(std::abs(sub.eval(x) - p.eval(xv)) <= 1e-13);

    Polynomial dropped = p.substitute_and_drop(1, v);
    CHECK(dropped.nvars() == 2);
    CHECK(std::abs(dropped.eval({x[0], x[2]}) - p.eval(xv)) <= 1e-13);

    Polynomial emb = p.embed(5, {4, 2, 0});
    Point big = {x[2], 0.0, v, 0.0, x[0]};
    CHECK(std::abs(emb.eval(big) - p.eval(xv)) <= 1e-13);
}
