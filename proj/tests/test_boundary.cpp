#include "sosb/boundary.hpp"

#include <cmath>

#include "doctest.h"

using namespace sosb;

namespace {

// binary form of degree d from integer coefficients c[j] on x^j y^(d-j)
Polynomial binary_form(int d, const std::vector<int>& c) {
    Polynomial out = Polynomial::zero(2);
    for (int j = 0; j <= d; ++j) {
        if (c[j] == 0) continue;
        out = out + Polynomial::monomial(Monomial({j, d - j}), static_cast<double>(c[j]));
    }
    return out;
}

Polynomial random_int_form(int nvars, int degree, Rng& rng) {
    Polynomial out = Polynomial::zero(nvars);
    for (const Monomial& m : monomials_of_degree(nvars, degree)) {
        const int c = static_cast<int>(rng.below(19)) - 9;
        if (c != 0) out = out + Polynomial::monomial(m, static_cast<double>(c));
    }
    if (out.is_zero()) out = Polynomial::monomial(monomials_of_degree(nvars, degree)[0], 1.0);
    return out;
}

}  // namespace

TEST_CASE("intpoly: resultants and squarefree parts") {
    // f = x^2 - 1, g = x - 2 in variables (x, s): Res_x = 3
    ZPoly x = ZPoly::variable(2, 0), s = ZPoly::variable(2, 1);
    ZPoly f = x * x - ZPoly::constant(2, 1);
    ZPoly g = x - ZPoly::constant(2, 2);
    ZPoly r = resultant(f, g, 0, 100000);
    CHECK(r == ZPoly::constant(2, 3));

    // Res_x(x^2 - s, x - 1) = 1 - s
    ZPoly r2 = resultant(x * x - s, x - ZPoly::constant(2, 1), 0, 100000);
    CHECK(r2.degree_in(1) == 1);
    CHECK(r2.coefficient(Monomial({0, 0})) == 1);
    CHECK(r2.coefficient(Monomial({0, 1})) == -1);

    // squarefree part of (s-1)^2 (s+2) is +-(s-1)(s+2)
    ZPoly u = (s - ZPoly::constant(2, 1)) * (s - ZPoly::constant(2, 1)) *
              (s + ZPoly::constant(2, 2));
    ZPoly sf = squarefree_part_univariate(u, 1);
    CHECK(sf.degree_in(1) == 2);

    // exact division round trip
    ZPoly prod = f * g;
    CHECK(exact_divide(prod, g) == f);
    CHECK_THROWS_AS(exact_divide(f + ZPoly::constant(2, 1), g), std::logic_error);
}

TEST_CASE("binary analogue k=1 solves exhaustively") {
    // p = x^2 + y^2, q = x y + y^2
    Polynomial p = binary_form(2, {1, 0, 1});
    Polynomial q = binary_form(2, {1, 1, 0});
    BoundarySystem sys = binary_analogue_system(1, p, q);
    CHECK(sys.system.nvars == 3);  // c0, h1, s
    CHECK(sys.system.size() == 3);

    SolverConfig cfg;
    BoundarySolveReport rep = solve_boundary(sys, cfg);
    CHECK(rep.distinct_s.size() == 1);
    // closed form: E_1 has no g^2 contribution, so p1 + s q1 = 0
    CHECK(std::abs(rep.distinct_s[0] - Cplx(0.0)) <= 1e-8);

    OracleResult oracle = brute_force_degree(sys);
    CHECK_FALSE(oracle.degenerate);
    CHECK(oracle.degree == 1);
}

TEST_CASE("binary analogue k=2 against the closed form eliminant") {
    // p = x^4 + y^4, q = x^3 y + x^2 y^2 + x y^3: eliminant 4 s - s^2
    Polynomial p = binary_form(4, {1, 0, 0, 0, 1});
    Polynomial q = binary_form(4, {0, 1, 1, 1, 0});
    BoundarySystem sys = binary_analogue_system(2, p, q);
    CHECK(sys.census_quadratic == 3);
    CHECK(sys.census_linear == 2);

    OracleResult oracle = brute_force_degree(sys);
    REQUIRE_FALSE(oracle.degenerate);
    CHECK(oracle.degree == 2);

    SolverConfig cfg;
    BoundarySolveReport rep = solve_boundary(sys, cfg);
    REQUIRE(rep.distinct_s.size() == 2);
    std::vector<double> roots = {rep.distinct_s[0].real(), rep.distinct_s[1].real()};
    std::sort(roots.begin(), roots.end());
    CHECK(std::abs(roots[0] - 0.0) <= 1e-7);
    CHECK(std::abs(roots[1] - 4.0) <= 1e-7);
    for (const Point& sol : rep.solutions.points) {
        Rng rng(Seed{5});
        CHECK(identity_residual(sys, sol, rng) <= 1e-8);
    }
}

TEST_CASE("binary analogue homotopy count equals the oracle") {
    Rng rng(Seed{2718});
    for (int k : {2, 3}) {
        for (int trial = 0; trial < 2; ++trial) {
            Polynomial p = random_int_form(2, 2 * k, rng);
            Polynomial q = random_int_form(2, 2 * k, rng);
            BoundarySystem sys = binary_analogue_system(k, p, q);
            OracleResult oracle = brute_force_degree(sys);
            if (oracle.degenerate) continue;
            SolverConfig cfg;
            cfg.seed = Seed{900 + static_cast<std::uint64_t>(10 * k + trial)};
            BoundarySolveReport rep = solve_boundary(sys, cfg);
            CHECK(rep.distinct_s.size() == static_cast<std::size_t>(oracle.degree));
        }
    }
}

TEST_CASE("oracle flags a degenerate pencil and survives rescaling") {
    Polynomial p = binary_form(4, {1, 2, 0, 1, 3});
    BoundarySystem same = binary_analogue_system(2, p, p);
    OracleResult deg = brute_force_degree(same);
    CHECK(deg.degenerate);
    CHECK(deg.degree == 0);

    Polynomial q = binary_form(4, {2, 0, 1, 1, 0});
    BoundarySystem a = binary_analogue_system(2, p, q);
    BoundarySystem b = binary_analogue_system(2, p * 0.5, q * 0.25);
    OracleResult ra = brute_force_degree(a);
    OracleResult rb = brute_force_degree(b);
    CHECK(ra.degree == rb.degree);
}

TEST_CASE("sextic boundary system census and anchor solution") {
    Rng rng(Seed{31415});
    Polynomial q = random_int_form(3, 6, rng);
    Polynomial p = Polynomial::monomial(Monomial({6, 0, 0}), 1.0);  // (x0^3)^2
    BoundarySystem sys = sextic_system(p, q, Seed{1});

    CHECK(sys.system.nvars == 28);
    CHECK(sys.system.size() == 28);
    CHECK(sys.census_quadratic == 26);
    CHECK(sys.census_linear == 2);
    CHECK(sys.unknowns.size() == 28);

    // anchor: f = x0^3, g = 0, h = x0^3, s = 0
    Point sol(28, Cplx(0.0));
    for (std::size_t i = 0; i < sys.unknowns.size(); ++i)
        if (sys.unknowns[i].block == "h" && sys.unknowns[i].mono.exp == std::vector<int>{3, 0, 0})
            sol[i] = 1.0;
    CHECK(sys.system.residual_inf(sol) == 0.0);

    // the system is invariant under negating g
    REQUIRE(sys.symmetry.generators.size() == 1);
    for (int trial = 0; trial < 5; ++trial) {
        Point x(28);
        for (auto& xi : x) xi = rng.disk_complex();
        const Point sx = sys.symmetry.generators[0].apply_point(x);
        for (const Polynomial& e : sys.system.equations)
            CHECK(std::abs(e.eval(x) - e.eval(sx)) <=
                  1e-10 * std::max(1.0, std::abs(e.eval(x))));
    }
}

TEST_CASE("sextic linear-product start has 2^26 roots in 2^25 orbits") {
    Rng rng(Seed{99});
    Polynomial p = random_int_form(3, 6, rng);
    Polynomial q = random_int_form(3, 6, rng);
    BoundarySystem sys = sextic_system(p, q, Seed{2});
    StartSystem start = linear_product_start(sys.system, sys.grouping, &sys.symmetry,
                                             Seed{3}, /*max_roots=*/32);
    CHECK(start.total_roots == (1ull << 26));
    CHECK(start.orbit_count == (1ull << 25));
    CHECK(start.roots_are_orbit_reps);
    CHECK(start.sampled);
    for (const Point& r : start.roots) CHECK(start.system.residual_inf(r) <= 1e-8);
}

TEST_CASE("sextic sampling run stays clean and symmetric") {
    Rng rng(Seed{7100});
    Polynomial p = random_int_form(3, 6, rng);
    Polynomial q = random_int_form(3, 6, rng);
    BoundarySystem sys = sextic_system(p, q, Seed{4});

    SolverConfig cfg;
    cfg.paths_limit = 400;
    BoundarySolveReport rep = solve_boundary(sys, cfg);
    CHECK(rep.sampled);
    CHECK(rep.orbits_tracked == 400);
    // divergence dominates; what matters is that nothing step-fails
    CHECK(rep.solutions.counts.failed == 0);

    for (const Point& sol : rep.solutions.points) {
        Rng vr(Seed{8});
        CHECK(identity_residual(sys, sol, vr) <= 1e-8);
        const Point img = sys.symmetry.generators[0].apply_point(sol);
        CHECK(sys.system.residual_inf(img) <= 1e-6);
    }
}

TEST_CASE("quartic boundary system census and plug-in consistency") {
    Rng rng(Seed{2020});
    Polynomial q = random_int_form(4, 4, rng);

    // construct f, g, h, k obeying the normalizations, then p := f g - h k
    auto quadric = [&](bool unit_x0sq, bool zero_cross) {
        Polynomial w = random_int_form(4, 2, rng);
        const Monomial x0sq({2, 0, 0, 0}), cross({1, 1, 0, 0});
        w = w - Polynomial::monomial(x0sq, w.coefficient(x0sq)) +
            Polynomial::monomial(x0sq, unit_x0sq ? 1.0 : w.coefficient(x0sq).real());
        if (zero_cross) w = w - Polynomial::monomial(cross, w.coefficient(cross));
        return w;
    };
    Polynomial f = quadric(true, false), g = quadric(false, true);
    Polynomial h = quadric(true, false), k = quadric(false, true);
    Polynomial p = f * g - h * k;

    BoundarySystem sys = quartic_system(p, q, Seed{5});
    CHECK(sys.system.size() == 35);
    CHECK(sys.system.nvars == 37);
    CHECK(sys.residual_symmetry.size() == 2);

    Point sol(37, Cplx(0.0));
    for (std::size_t i = 0; i < sys.unknowns.size(); ++i) {
        const UnknownDesc& u = sys.unknowns[i];
        if (u.block == "f") sol[i] = f.coefficient(u.mono);
        if (u.block == "g") sol[i] = g.coefficient(u.mono);
        if (u.block == "h") sol[i] = h.coefficient(u.mono);
        if (u.block == "k") sol[i] = k.coefficient(u.mono);
        if (u.block == "s") sol[i] = 0.0;
    }
    CHECK(sys.system.residual_inf(sol) <= 1e-12);

    // solving demands a square system; the quartic case refuses
    SolverConfig cfg;
    CHECK_THROWS_AS(solve_boundary(sys, cfg), std::invalid_argument);
}

TEST_CASE("boundary systems reject malformed pencils") {
    Polynomial nothom = Polynomial::monomial(Monomial({1, 0, 0}), 1.0) +
                        Polynomial::monomial(Monomial({0, 0, 6}), 1.0);
    Polynomial sextic = Polynomial::monomial(Monomial({6, 0, 0}), 1.0);
    CHECK_THROWS_AS(sextic_system(nothom, sextic, Seed{1}), std::invalid_argument);
    Polynomial quartic2 = Polynomial::monomial(Monomial({2, 2}), 1.0);
    CHECK_THROWS_AS(binary_analogue_system(3, quartic2, quartic2), std::invalid_argument);
}
