#include "sosb/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sosb {

namespace {

struct BlockSpec {
    std::string name;
    std::vector<Monomial> monos;                 // base-space monomials of the form
    std::map<std::vector<int>, Cplx> fixed;      // normalized coefficients
};

// Assign unknown indices to all non-fixed block coefficients, then s last.
struct UnknownLayout {
    std::vector<UnknownDesc> unknowns;
    std::vector<FixedCoeff> fixed;
    std::map<std::pair<std::string, std::vector<int>>, int> index;
    int s_index = -1;
    int count = 0;

    void add_block(const BlockSpec& b) {
        for (const Monomial& m : b.monos) {
            const auto f = b.fixed.find(m.exp);
            if (f != b.fixed.end()) {
                fixed.push_back(FixedCoeff{b.name, m, f->second});
            } else {
                index[{b.name, m.exp}] = count++;
                unknowns.push_back(UnknownDesc{b.name, m});
            }
        }
    }
    void add_s() {
        s_index = count++;
        unknowns.push_back(UnknownDesc{"s", Monomial{}});
    }

    // coefficient of the block at monomial m, as a polynomial over unknowns
    Polynomial coeff(const BlockSpec& b, const Monomial& m) const {
        const auto f = b.fixed.find(m.exp);
        if (f != b.fixed.end()) return Polynomial::constant(count, f->second);
        return Polynomial::variable(count, index.at({b.name, m.exp}));
    }
};

void require_homogeneous(const Polynomial& p, int nvars, int degree, const char* what) {
    if (p.nvars() != nvars)
        throw std::invalid_argument(std::string(what) + ": wrong variable count");
    if (p.is_zero() || !p.is_homogeneous() || p.degree() != degree)
        throw std::invalid_argument(std::string(what) + ": expected a nonzero homogeneous form of degree " +
                                    std::to_string(degree));
}

std::vector<int> all_vars(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

// product-structure factors per equation: degree-2 equations get the given
// split (or a symmetric full pair), degree-1 equations a single factor on
// their own variable support
ProductGrouping grouping_from_degrees(const PolySystem& sys,
                                      const std::vector<std::vector<int>>& quad_factors) {
    ProductGrouping g;
    for (const Polynomial& eq : sys.equations) {
        if (eq.degree() >= 2) {
            g.factors.push_back(quad_factors);
        } else {
            std::vector<int> support;
            for (const Term& t : eq.terms())
                for (int v = 0; v < eq.nvars(); ++v)
                    if (t.mono.exp[v] > 0 &&
                        std::find(support.begin(), support.end(), v) == support.end())
                        support.push_back(v);
            std::sort(support.begin(), support.end());
            g.factors.push_back({support});
        }
    }
    return g;
}

}  // namespace

std::string to_string(BoundaryCase c) {
    switch (c) {
        case BoundaryCase::Sextic3Squares: return "sextic";
        case BoundaryCase::Quartic4Squares: return "quartic";
        case BoundaryCase::BinaryAnalogue: return "binary";
    }
    return "?";
}

BoundarySystem sextic_system(const Polynomial& p, const Polynomial& q, Seed seed) {
    require_homogeneous(p, 3, 6, "sextic_system p");
    require_homogeneous(q, 3, 6, "sextic_system q");

    const auto cubics = monomials_of_degree(3, 3);
    BlockSpec f{"f", cubics, {}};
    BlockSpec g{"g", cubics, {}};
    BlockSpec h{"h", cubics, {}};
    f.fixed[{3, 0, 0}] = 1.0;  // dehomogenization
    f.fixed[{2, 1, 0}] = 0.0;
    g.fixed[{3, 0, 0}] = 0.0;

    UnknownLayout lay;
    lay.add_block(f);
    lay.add_block(g);
    lay.add_block(h);
    lay.add_s();

    const auto sextics = monomials_of_degree(3, 6);
    std::map<std::vector<int>, Polynomial> eq;
    for (const Monomial& m : sextics) eq[m.exp] = Polynomial::zero(lay.count);

    for (const Monomial& a : cubics) {
        for (const Monomial& b : cubics) {
            std::vector<int> m(3);
            for (int i = 0; i < 3; ++i) m[i] = a.exp[i] + b.exp[i];
            eq[m] = eq[m] + lay.coeff(f, a) * lay.coeff(h, b) - lay.coeff(g, a) * lay.coeff(g, b);
        }
    }
    const Polynomial s_var = Polynomial::variable(lay.count, lay.s_index);
    for (const Monomial& m : sextics)
        eq[m.exp] = eq[m.exp] - Polynomial::constant(lay.count, p.coefficient(m)) -
                    s_var * q.coefficient(m);

    BoundarySystem out;
    out.kind = BoundaryCase::Sextic3Squares;
    out.base_nvars = 3;
    out.p = p;
    out.q = q;
    out.build_seed = seed;
    out.unknowns = lay.unknowns;
    out.fixed = lay.fixed;
    out.s_index = lay.s_index;
    std::vector<Polynomial> eqs;
    for (const Monomial& m : sextics) eqs.push_back(eq[m.exp]);
    out.system = PolySystem(lay.count, std::move(eqs));

    for (const Polynomial& e : out.system.equations)
        (e.degree() >= 2 ? out.census_quadratic : out.census_linear)++;

    SignedPermutation neg;
    neg.perm = all_vars(lay.count);
    neg.sign.assign(lay.count, 1);
    for (int i = 0; i < lay.count; ++i)
        if (lay.unknowns[i].block == "g") neg.sign[i] = -1;
    out.symmetry.generators.push_back(std::move(neg));

    out.grouping = grouping_from_degrees(out.system,
                                         {all_vars(lay.count), all_vars(lay.count)});
    out.normalizations = {"coefficient of x0^3 in f set to 1",
                          "coefficient of x0^2 x1 in f set to 0",
                          "coefficient of x0^3 in g set to 0"};
    return out;
}

BoundarySystem quartic_system(const Polynomial& p, const Polynomial& q, Seed seed) {
    require_homogeneous(p, 4, 4, "quartic_system p");
    require_homogeneous(q, 4, 4, "quartic_system q");

    const auto quadrics = monomials_of_degree(4, 2);
    BlockSpec f{"f", quadrics, {}};
    BlockSpec g{"g", quadrics, {}};
    BlockSpec h{"h", quadrics, {}};
    BlockSpec k{"k", quadrics, {}};
    f.fixed[{2, 0, 0, 0}] = 1.0;
    h.fixed[{2, 0, 0, 0}] = 1.0;
    g.fixed[{1, 1, 0, 0}] = 0.0;
    k.fixed[{1, 1, 0, 0}] = 0.0;

    UnknownLayout lay;
    lay.add_block(f);
    lay.add_block(g);
    lay.add_block(h);
    lay.add_block(k);
    lay.add_s();

    const auto quartics = monomials_of_degree(4, 4);
    std::map<std::vector<int>, Polynomial> eq;
    for (const Monomial& m : quartics) eq[m.exp] = Polynomial::zero(lay.count);

    for (const Monomial& a : quadrics) {
        for (const Monomial& b : quadrics) {
            std::vector<int> m(4);
            for (int i = 0; i < 4; ++i) m[i] = a.exp[i] + b.exp[i];
            eq[m] = eq[m] + lay.coeff(f, a) * lay.coeff(g, b) - lay.coeff(h, a) * lay.coeff(k, b);
        }
    }
    const Polynomial s_var = Polynomial::variable(lay.count, lay.s_index);
    for (const Monomial& m : quartics)
        eq[m.exp] = eq[m.exp] - Polynomial::constant(lay.count, p.coefficient(m)) -
                    s_var * q.coefficient(m);

    BoundarySystem out;
    out.kind = BoundaryCase::Quartic4Squares;
    out.base_nvars = 4;
    out.p = p;
    out.q = q;
    out.build_seed = seed;
    out.unknowns = lay.unknowns;
    out.fixed = lay.fixed;
    out.s_index = lay.s_index;
    std::vector<Polynomial> eqs;
    for (const Monomial& m : quartics) eqs.push_back(eq[m.exp]);
    out.system = PolySystem(lay.count, std::move(eqs));

    for (const Polynomial& e : out.system.equations)
        (e.degree() >= 2 ? out.census_quadratic : out.census_linear)++;

    // bi-homogeneous split: (f, h) coefficients against (g, k, s)
    std::vector<int> group1, group2;
    for (int i = 0; i < lay.count; ++i) {
        const std::string& b = lay.unknowns[i].block;
        if (b == "f" || b == "h") group1.push_back(i);
        else group2.push_back(i);
    }
    out.grouping = grouping_from_degrees(out.system, {group1, group2});
    out.normalizations = {"coefficient of x0^2 in f set to 1",
                          "coefficient of x0^2 in h set to 1",
                          "coefficient of x0 x1 in g set to 0",
                          "coefficient of x0 x1 in k set to 0"};
    out.residual_symmetry = {
        "row/column operations on [[f,h],[k,g]] preserving the four fixed coefficients "
        "leave a 2-parameter continuous family",
        "the discrete swaps (f,g)<->(g,f), (h,k)<->(k,h) act on solutions"};
    return out;
}

BoundarySystem binary_analogue_system(int k, const Polynomial& p, const Polynomial& q) {
    if (k < 1) throw std::invalid_argument("binary_analogue_system: k must be >= 1");
    require_homogeneous(p, 2, 2 * k, "binary_analogue_system p");
    require_homogeneous(q, 2, 2 * k, "binary_analogue_system q");

    const auto degk = monomials_of_degree(2, k);
    BlockSpec f{"f", degk, {}};
    BlockSpec g{"g", degk, {}};
    BlockSpec h{"h", degk, {}};
    for (const Monomial& m : degk) f.fixed[m.exp] = (m.exp[0] == k) ? 1.0 : 0.0;  // f = x^k
    g.fixed[{k, 0}] = 0.0;
    h.fixed[{0, k}] = 0.0;

    UnknownLayout lay;
    lay.add_block(g);
    lay.add_block(h);
    lay.add_block(f);  // fully fixed, adds no unknowns
    lay.add_s();

    const auto deg2k = monomials_of_degree(2, 2 * k);
    std::map<std::vector<int>, Polynomial> eq;
    for (const Monomial& m : deg2k) eq[m.exp] = Polynomial::zero(lay.count);
    for (const Monomial& a : degk) {
        for (const Monomial& b : degk) {
            std::vector<int> m(2);
            for (int i = 0; i < 2; ++i) m[i] = a.exp[i] + b.exp[i];
            eq[m] = eq[m] + lay.coeff(f, a) * lay.coeff(h, b) - lay.coeff(g, a) * lay.coeff(g, b);
        }
    }
    const Polynomial s_var = Polynomial::variable(lay.count, lay.s_index);
    for (const Monomial& m : deg2k)
        eq[m.exp] = eq[m.exp] - Polynomial::constant(lay.count, p.coefficient(m)) -
                    s_var * q.coefficient(m);

    BoundarySystem out;
    out.kind = BoundaryCase::BinaryAnalogue;
    out.analogue_k = k;
    out.base_nvars = 2;
    out.p = p;
    out.q = q;
    out.unknowns = lay.unknowns;
    out.fixed = lay.fixed;
    out.s_index = lay.s_index;
    std::vector<Polynomial> eqs;
    for (const Monomial& m : deg2k) eqs.push_back(eq[m.exp]);
    out.system = PolySystem(lay.count, std::move(eqs));

    for (const Polynomial& e : out.system.equations)
        (e.degree() >= 2 ? out.census_quadratic : out.census_linear)++;

    SignedPermutation neg;
    neg.perm = all_vars(lay.count);
    neg.sign.assign(lay.count, 1);
    for (int i = 0; i < lay.count; ++i)
        if (lay.unknowns[i].block == "g") neg.sign[i] = -1;
    out.symmetry.generators.push_back(std::move(neg));

    out.grouping = grouping_from_degrees(out.system,
                                         {all_vars(lay.count), all_vars(lay.count)});
    out.normalizations = {"f fixed to x^k", "coefficient of x^k in g set to 0",
                          "coefficient of y^k in h set to 0"};
    return out;
}

BoundaryCertificate assemble(const BoundarySystem& sys, const Point& solution) {
    if (static_cast<int>(solution.size()) != sys.system.nvars)
        throw std::invalid_argument("assemble: solution dimension mismatch");
    BoundaryCertificate cert;
    auto add = [&](const std::string& block, const Monomial& m, Cplx value) {
        auto [it, inserted] = cert.blocks.try_emplace(block, Polynomial::zero(sys.base_nvars));
        it->second = it->second + Polynomial::monomial(m, value);
    };
    for (std::size_t i = 0; i < sys.unknowns.size(); ++i) {
        if (sys.unknowns[i].block == "s") continue;
        add(sys.unknowns[i].block, sys.unknowns[i].mono, solution[i]);
    }
    for (const FixedCoeff& f : sys.fixed)
        if (f.value != Cplx(0.0)) add(f.block, f.mono, f.value);
    cert.s = solution[sys.s_index];
    return cert;
}

double identity_residual(const BoundarySystem& sys, const Point& solution, Rng& rng,
                         int sample_points) {
    const BoundaryCertificate c = assemble(sys, solution);
    Polynomial lhs = Polynomial::zero(sys.base_nvars);
    if (sys.kind == BoundaryCase::Quartic4Squares)
        lhs = c.blocks.at("f") * c.blocks.at("g") - c.blocks.at("h") * c.blocks.at("k");
    else
        lhs = c.blocks.at("f") * c.blocks.at("h") - c.blocks.at("g") * c.blocks.at("g");
    const Polynomial rhs = sys.p + sys.q * c.s;
    double worst = 0.0;
    for (int t = 0; t < sample_points; ++t) {
        Point x(sys.base_nvars);
        for (auto& xi : x) xi = rng.disk_complex();
        const Cplx a = lhs.eval(x), b = rhs.eval(x);
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
    }
    return worst;
}

BoundarySolveReport solve_boundary(const BoundarySystem& sys, const SolverConfig& cfg) {
    if (sys.system.size() != sys.system.nvars)
        throw std::invalid_argument(
            "solve_boundary: system is not square (the quartic case has a residual "
            "symmetry and supports census/consistency checks only)");
    Rng rng(cfg.seed);
    const Seed start_seed{rng.fork(11).raw()};
    const std::uint64_t max_roots =
        cfg.paths_limit > 0 ? cfg.paths_limit : (std::uint64_t{1} << 20);
    StartSystem start =
        linear_product_start(sys.system, sys.grouping, &sys.symmetry, start_seed, max_roots);

    BoundarySolveReport rep;
    rep.orbits_total = start.orbit_count;
    rep.sampled = start.sampled;

    SolutionSet sol = solve_system(sys.system, start, &sys.symmetry, cfg);
    rep.orbits_tracked = sol.counts.success + sol.counts.divergent + sol.counts.failed;

    std::vector<Point> s_values;
    for (const Point& pt : sol.points) s_values.push_back({pt[sys.s_index]});
    const SolutionSet s_clusters = dedupe_solutions(s_values, cfg.cluster_tol);
    for (const Point& sv : s_clusters.points) rep.distinct_s.push_back(sv[0]);
    rep.solutions = std::move(sol);
    return rep;
}

namespace {

// continued-fraction rationalization
std::pair<long long, long long> to_rational(double x, long long maxden, double tol) {
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double v = x;
    for (int it = 0; it < 64; ++it) {
        const double fl = std::floor(v);
        const long long a = static_cast<long long>(fl);
        const long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > maxden) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        if (std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) < tol) break;
        const double frac = v - fl;
        if (frac < 1e-15) break;
        v = 1.0 / frac;
    }
    if (q1 == 0 || std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) > tol)
        throw std::invalid_argument("brute_force_degree: pencil coefficient is not rational");
    return {p1, q1};
}

std::vector<ZPoly> eliminate_var(std::vector<ZPoly> polys, int var, std::size_t budget) {
    std::vector<ZPoly> involve, rest;
    for (ZPoly& p : polys) {
        if (p.is_zero()) continue;
        (p.degree_in(var) > 0 ? involve : rest).push_back(std::move(p));
    }
    if (involve.size() <= 1) return rest;  // the variable is generically solvable
    std::sort(involve.begin(), involve.end(), [&](const ZPoly& a, const ZPoly& b) {
        if (a.degree_in(var) != b.degree_in(var)) return a.degree_in(var) < b.degree_in(var);
        return a.term_count() < b.term_count();
    });
    for (std::size_t i = 1; i < involve.size(); ++i) {
        ZPoly r = resultant(involve[0], involve[i], var, budget).primitive_int();
        if (!r.is_zero()) rest.push_back(std::move(r));
    }
    return rest;
}

ZPoly chain_eliminant(std::vector<ZPoly> polys, int nc, int s_var, std::size_t budget) {
    for (int v = 0; v < nc; ++v) polys = eliminate_var(std::move(polys), v, budget);
    ZPoly acc(s_var + 1);
    bool have = false;
    for (const ZPoly& p : polys) {
        if (p.is_zero()) continue;
        if (!have) {
            acc = p.primitive_int();
            have = true;
        } else {
            acc = gcd_univariate(acc, p, s_var);
        }
    }
    if (!have) return ZPoly(s_var + 1);  // unconstrained in s
    return squarefree_part_univariate(acc, s_var);
}

}  // namespace

OracleResult brute_force_degree(const BoundarySystem& sys, std::size_t term_budget) {
    if (sys.kind != BoundaryCase::BinaryAnalogue)
        throw std::invalid_argument("brute_force_degree: binary-analogue systems only");
    const int k = sys.analogue_k;
    const int nv = k + 1;  // c_0..c_{k-1}, then s
    const int s_var = k;

    // rationalize the pencil; exact integers from here on
    const auto deg2k = monomials_of_degree(2, 2 * k);
    std::vector<std::pair<long long, long long>> pr, qr;
    for (const Monomial& m : deg2k) {
        const Cplx pc = sys.p.coefficient(m), qc = sys.q.coefficient(m);
        if (std::abs(pc.imag()) > 1e-12 || std::abs(qc.imag()) > 1e-12)
            throw std::invalid_argument("brute_force_degree: pencil must be real rational");
        pr.push_back(to_rational(pc.real(), 1000000, 1e-9));
        qr.push_back(to_rational(qc.real(), 1000000, 1e-9));
    }

    OracleResult out;

    // degenerate pencil: p and q linearly dependent (exact cross products)
    bool dependent = true;
    for (std::size_t i = 0; i < pr.size() && dependent; ++i)
        for (std::size_t j = i + 1; j < pr.size() && dependent; ++j) {
            const BigInt cross = BigInt(pr[i].first) * qr[i].second * qr[j].first * pr[j].second -
                                 BigInt(pr[j].first) * qr[j].second * qr[i].first * pr[i].second;
            if (cross != 0) dependent = false;
        }
    if (dependent) {
        out.degenerate = true;
        return out;
    }

    // reduced system: E_j = L*( [g^2]_j + p_j + s q_j ), j = 0..k, where
    // [g^2]_j = sum_{a+b=j} c_a c_b over 0 <= a,b <= k-1
    std::vector<ZPoly> reduced;
    for (int j = 0; j <= k; ++j) {
        BigInt L = BigInt(pr[j].second) * qr[j].second /
                   boost::multiprecision::gcd(BigInt(pr[j].second), BigInt(qr[j].second));
        ZPoly e(nv);
        for (int a = 0; a < k; ++a) {
            for (int b = 0; b < k; ++b) {
                if (a + b != j) continue;
                std::vector<int> ex(nv, 0);
                ex[a] += 1;
                ex[b] += 1;
                e = e + ZPoly(nv, {ZTerm{Monomial(std::move(ex)), L}});
            }
        }
        e = e + ZPoly::constant(nv, L / pr[j].second * pr[j].first);
        std::vector<int> es(nv, 0);
        es[s_var] = 1;
        e = e + ZPoly(nv, {ZTerm{Monomial(std::move(es)), L / qr[j].second * qr[j].first}});
        reduced.push_back(std::move(e));
    }

    // primary chain in the structured coordinates
    ZPoly eliminant = chain_eliminant(reduced, k, s_var, term_budget);

    // validate against chains in randomly changed coordinates; extraneous
    // factors are not stable under a unimodular change of the c variables
    Rng rng(Seed{0xb0a7eull});
    int stable = k < 2 ? 1 : 0;  // one variable: nothing to re-coordinate
    for (int attempt = 0; attempt < 4 && stable < 1; ++attempt) {
        std::vector<std::vector<BigInt>> U(nv, std::vector<BigInt>(nv, 0));
        for (int i = 0; i < nv; ++i) U[i][i] = 1;
        for (int step = 0; step < 2 * k; ++step) {
            const int i = static_cast<int>(rng.below(k));
            int j = static_cast<int>(rng.below(k));
            if (i == j) j = (j + 1) % k;
            const BigInt c = rng.below(2) == 0 ? 1 : -1;
            for (int col = 0; col < nv; ++col) U[i][col] += c * U[j][col];
        }
        std::vector<ZPoly> changed;
        for (const ZPoly& e : reduced) changed.push_back(e.compose_linear_int(U));
        const ZPoly alt = chain_eliminant(changed, k, s_var, term_budget);
        if (eliminant.is_zero()) {
            eliminant = alt;
            continue;
        }
        if (alt.is_zero()) continue;
        const ZPoly g = gcd_univariate(eliminant, alt, s_var);
        if (g.degree_in(s_var) == eliminant.degree_in(s_var)) ++stable;
        eliminant = squarefree_part_univariate(g, s_var);
    }

    if (eliminant.is_zero()) {
        out.degenerate = true;
        return out;
    }
    out.eliminant = eliminant;
    out.degree = eliminant.degree_in(s_var);
    return out;
}

}  // namespace sosb
