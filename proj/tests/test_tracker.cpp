#include "sosb/tracker.hpp"

#include <cmath>

#include "doctest.h"

using namespace sosb;

namespace {

Polynomial var(int n, int i) { return Polynomial::variable(n, i); }
Polynomial cst(int n, Cplx c) { return Polynomial::constant(n, c); }

PolySystem univ(const Polynomial& p) { return PolySystem(1, {p}); }

}  // namespace

TEST_CASE("newton corrector closed forms") {
    SUBCASE("linear reaches the root immediately") {
        NewtonResult r = newton_correct(univ(var(1, 0) - cst(1, 5.0)), {Cplx(4.9)}, 1e-12, 10);
        CHECK(r.converged);
        CHECK(std::abs(r.point[0] - Cplx(5.0)) <= 1e-12);
    }
    SUBCASE("sqrt2") {
        NewtonResult r =
            newton_correct(univ(var(1, 0) * var(1, 0) - cst(1, 2.0)), {Cplx(1.4)}, 1e-13, 20);
        CHECK(r.converged);
        CHECK(std::abs(r.point[0] - Cplx(std::sqrt(2.0))) <= 1e-12);
    }
    SUBCASE("double root converges too slowly for a tight tolerance") {
        NewtonResult r =
            newton_correct(univ(var(1, 0) * var(1, 0)), {Cplx(1e-3)}, 1e-14, 8);
        CHECK_FALSE(r.converged);
    }
    SUBCASE("singular solve is non-convergence, not a crash") {
        // constant equation: zero Jacobian
        NewtonResult r = newton_correct(univ(cst(1, 1.0)), {Cplx(0.5)}, 1e-10, 5);
        CHECK_FALSE(r.converged);
    }
}

TEST_CASE("identity homotopy is a constant path") {
    PolySystem f = univ(var(1, 0) * var(1, 0) - cst(1, 4.0));
    Homotopy h(f, f, 1.0);
    TrackerConfig cfg;
    PathResult r = track_path(h, {Cplx(2.0)}, cfg);
    CHECK(r.status == PathStatus::Success);
    CHECK(std::abs(r.endpoint[0] - Cplx(2.0)) <= 1e-12);
}

TEST_CASE("linear root interpolation") {
    Homotopy h(univ(var(1, 0) - cst(1, 2.0)), univ(var(1, 0) - cst(1, 1.0)),
               Cplx(0.8, 0.6));
    TrackerConfig cfg;
    PathResult r = track_path(h, {Cplx(1.0)}, cfg);
    CHECK(r.status == PathStatus::Success);
    CHECK(std::abs(r.endpoint[0] - Cplx(2.0)) <= 1e-10);
}

TEST_CASE("quadratic roots track to the matching sign") {
    Homotopy h(univ(var(1, 0) * var(1, 0) - cst(1, 4.0)),
               univ(var(1, 0) * var(1, 0) - cst(1, 1.0)), Cplx(0.96, 0.28));
    TrackerConfig cfg;
    PathResult rp = track_path(h, {Cplx(1.0)}, cfg);
    PathResult rm = track_path(h, {Cplx(-1.0)}, cfg);
    REQUIRE(rp.status == PathStatus::Success);
    REQUIRE(rm.status == PathStatus::Success);
    CHECK(std::abs(rp.endpoint[0] - Cplx(2.0)) <= 1e-9);
    CHECK(std::abs(rm.endpoint[0] + Cplx(2.0)) <= 1e-9);
}

TEST_CASE("deterministic results for identical inputs") {
    Homotopy h(univ(var(1, 0) * var(1, 0) - cst(1, 4.0)),
               univ(var(1, 0) * var(1, 0) - cst(1, 1.0)), Cplx(0.6, 0.8));
    TrackerConfig cfg;
    PathResult a = track_path(h, {Cplx(1.0)}, cfg);
    PathResult b = track_path(h, {Cplx(1.0)}, cfg);
    CHECK(a.endpoint[0].real() == b.endpoint[0].real());
    CHECK(a.endpoint[0].imag() == b.endpoint[0].imag());
    CHECK(a.steps_taken == b.steps_taken);
    CHECK(a.residual == b.residual);
}

TEST_CASE("cauchy endgame on a regular endpoint agrees with direct tracking") {
    PolySystem f = univ(var(1, 0) * var(1, 0) - cst(1, 4.0));
    PolySystem g = univ(var(1, 0) * var(1, 0) - cst(1, 1.0));
    Homotopy h(f, g, 1.0);
    TrackerConfig cfg;
    PathResult direct = track_path(h, {Cplx(1.0)}, cfg);
    REQUIRE(direct.status == PathStatus::Success);

    // root of H(x, 0.1) = x^2 - (0.1 + 0.9*4) on the positive branch
    const double x_at_r = std::sqrt(0.1 + 0.9 * 4.0);
    EndgameResult eg = cauchy_endgame(h, {Cplx(x_at_r)}, cfg);
    CHECK(eg.converged);
    CHECK(eg.winding_estimate == 1);
    CHECK(std::abs(eg.endpoint[0] - direct.endpoint[0]) <= 1e-10);
}

TEST_CASE("double root endpoint has winding 2") {
    Homotopy h(univ(var(1, 0) * var(1, 0)), univ(var(1, 0) * var(1, 0) - cst(1, 1.0)),
               1.0);
    TrackerConfig cfg;
    for (Cplx s : {Cplx(1.0), Cplx(-1.0)}) {
        PathResult r = track_path(h, {s}, cfg);
        CHECK(r.status == PathStatus::Success);
        CHECK(std::abs(r.endpoint[0]) <= 1e-8);
        CHECK(r.winding_estimate == 2);
    }
}

TEST_CASE("cube-root branch reports winding 3") {
    // H(x,t) = t(x^3 - c) + (1-t) x^3 = x^3 - t c
    const Cplx c(1.3, 0.4);
    Homotopy h(univ(var(1, 0) * var(1, 0) * var(1, 0)),
               univ(var(1, 0) * var(1, 0) * var(1, 0) - cst(1, c)), 1.0);
    TrackerConfig cfg;
    const Cplx root = std::pow(c, Cplx(1.0 / 3.0, 0.0));
    PathResult r = track_path(h, {root}, cfg);
    CHECK(r.status == PathStatus::Success);
    CHECK(std::abs(r.endpoint[0]) <= 1e-8);
    CHECK(r.winding_estimate == 3);
}

TEST_CASE("gamma genericity on a random quadric square system") {
    Rng rng(Seed{2024});
    PolySystem f(2, {random_poly(2, 2, true, rng), random_poly(2, 2, true, rng)});
    // start x^2 = c, y^2 = d with all four explicit roots
    const Cplx c = rng.unit_complex(), d = rng.unit_complex();
    PolySystem g(2, {var(2, 0) * var(2, 0) - cst(2, c), var(2, 1) * var(2, 1) - cst(2, d)});
    const Cplx rc = std::sqrt(c), rd = std::sqrt(d);
    const std::vector<Point> starts = {{rc, rd}, {rc, -rd}, {-rc, rd}, {-rc, -rd}};

    TrackerConfig cfg;
    int good_gammas = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Cplx gamma = rng.unit_complex();
        Homotopy h(f, g, gamma);
        bool all_ok = true;
        for (const Point& s : starts) {
            PathResult r = track_path(h, s, cfg);
            if (r.status != PathStatus::Success) {
                all_ok = false;
            } else {
                CHECK(r.residual <= 10.0 * cfg.newton_tol);
            }
        }
        if (all_ok) ++good_gammas;
    }
    CHECK(good_gammas >= 99);
}

TEST_CASE("homotopy construction guards") {
    PolySystem f = univ(var(1, 0));
    CHECK_THROWS_AS(Homotopy(f, PolySystem(2, {var(2, 0), var(2, 1)}), 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(Homotopy(f, f, 0.0), std::invalid_argument);
}
