#include "sosb/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <thread>

namespace sosb {

namespace {

double dist_inf(const Point& a, const Point& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

Point SignedPermutation::apply_point(const Point& p) const {
    Point out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        out[i] = static_cast<double>(sign[i]) * p[static_cast<std::size_t>(perm[i])];
    return out;
}

Polynomial SignedPermutation::apply_poly(const Polynomial& f) const {
    const int n = f.nvars();
    std::vector<Polynomial> images;
    images.reserve(n);
    for (int i = 0; i < n; ++i)
        images.push_back(Polynomial::variable(n, perm[i], static_cast<double>(sign[i])));
    return f.compose(images);
}

bool SymmetryAction::preserves(const PolySystem& sys, const std::vector<Point>& samples,
                               double tol) const {
    for (const SignedPermutation& g : generators)
        for (const Point& p : samples)
            if (sys.residual_inf(p) <= tol && sys.residual_inf(g.apply_point(p)) > tol)
                return false;
    return true;
}

bool canonical_less(const Point& a, const Point& b) {
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
        if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
    }
    return a.size() < b.size();
}

std::uint64_t bezout_number(const PolySystem& sys) {
    std::uint64_t total = 1;
    for (const Polynomial& p : sys.equations) {
        const std::uint64_t d = static_cast<std::uint64_t>(std::max(1, p.degree()));
        if (total > UINT64_MAX / d) return UINT64_MAX;
        total *= d;
    }
    return total;
}

StartSystem total_degree_start(const PolySystem& target, Seed seed, std::uint64_t max_roots) {
    if (target.size() != target.nvars)
        throw std::invalid_argument("total_degree_start: target must be square");
    const int n = target.nvars;
    Rng rng(seed);

    std::vector<int> degs(n);
    std::vector<Cplx> cs(n);
    std::vector<Polynomial> eqs;
    for (int i = 0; i < n; ++i) {
        degs[i] = std::max(1, target.equations[i].degree());
        cs[i] = rng.unit_complex();
        std::vector<int> e(n, 0);
        e[i] = degs[i];
        eqs.push_back(Polynomial(n, {Term{Monomial(std::move(e)), 1.0},
                                     Term{Monomial(std::vector<int>(n, 0)), -cs[i]}}));
    }

    StartSystem out;
    out.kind = StartKind::TotalDegree;
    out.system = PolySystem(n, std::move(eqs));
    out.total_roots = 1;
    for (int i = 0; i < n; ++i) {
        if (out.total_roots > UINT64_MAX / static_cast<std::uint64_t>(degs[i])) {
            out.total_roots = UINT64_MAX;
            break;
        }
        out.total_roots *= static_cast<std::uint64_t>(degs[i]);
    }
    out.orbit_count = out.total_roots;

    // d_i-th roots of c_i
    std::vector<std::vector<Cplx>> radicals(n);
    for (int i = 0; i < n; ++i) {
        const double r = std::pow(std::abs(cs[i]), 1.0 / degs[i]);
        const double phi = std::arg(cs[i]) / degs[i];
        for (int k = 0; k < degs[i]; ++k) {
            const double a = phi + 2.0 * 3.14159265358979323846 * k / degs[i];
            radicals[i].push_back(r * Cplx(std::cos(a), std::sin(a)));
        }
    }

    auto decode = [&](std::uint64_t idx) {
        Point p(n);
        for (int i = 0; i < n; ++i) {
            p[i] = radicals[i][idx % degs[i]];
            idx /= degs[i];
        }
        return p;
    };

    if (out.total_roots <= max_roots) {
        out.roots.reserve(out.total_roots);
        for (std::uint64_t idx = 0; idx < out.total_roots; ++idx)
            out.roots.push_back(decode(idx));
    } else {
        out.sampled = true;
        std::set<std::uint64_t> seen;
        while (seen.size() < max_roots) seen.insert(rng.below(out.total_roots));
        for (std::uint64_t idx : seen) out.roots.push_back(decode(idx));
    }
    return out;
}

namespace {

struct FactorSlot {
    Polynomial form;     // degree-1 polynomial
    int pair_buddy = -1; // index of the sigma-image factor within the same equation
};

bool is_sign_flip_only(const SignedPermutation& g) {
    for (std::size_t i = 0; i < g.perm.size(); ++i)
        if (g.perm[i] != static_cast<int>(i)) return false;
    return true;
}

}  // namespace

StartSystem linear_product_start(const PolySystem& target, const ProductGrouping& grouping,
                                 const SymmetryAction* sym, Seed seed,
                                 std::uint64_t max_roots) {
    if (target.size() != target.nvars)
        throw std::invalid_argument("linear_product_start: target must be square");
    const int n = target.nvars;
    if (static_cast<int>(grouping.factors.size()) != target.size())
        throw std::invalid_argument("linear_product_start: grouping size mismatch");

    const SignedPermutation* flip = nullptr;
    if (sym && !sym->empty()) {
        if (sym->generators.size() != 1 || !is_sign_flip_only(sym->generators[0]))
            throw std::invalid_argument(
                "linear_product_start: only a single sign-flip generator is supported");
        flip = &sym->generators[0];
    }
    auto touches_flip = [&](const std::vector<int>& support) {
        if (!flip) return false;
        for (int v : support)
            if (flip->sign[v] < 0) return true;
        return false;
    };

    Rng rng(seed);
    std::vector<std::vector<FactorSlot>> slots(target.size());
    std::vector<Polynomial> eqs;
    for (int i = 0; i < target.size(); ++i) {
        const auto& fl = grouping.factors[i];
        const int deg = target.equations[i].degree();
        if (static_cast<int>(fl.size()) != deg)
            throw std::invalid_argument("linear_product_start: factor count of equation " +
                                        std::to_string(i) + " does not match its degree");
        for (std::size_t j = 0; j < fl.size(); ++j) {
            if (touches_flip(fl[j])) {
                if (j + 1 >= fl.size() || fl[j + 1] != fl[j])
                    throw std::invalid_argument(
                        "linear_product_start: factors on flipped variables must come in "
                        "consecutive equal-support pairs");
                Polynomial ell = random_linear(n, rng, fl[j]);
                FactorSlot a{ell, static_cast<int>(j + 1)};
                FactorSlot b{flip->apply_poly(ell), static_cast<int>(j)};
                slots[i].push_back(std::move(a));
                slots[i].push_back(std::move(b));
                ++j;
            } else {
                slots[i].push_back(FactorSlot{random_linear(n, rng, fl[j]), -1});
            }
        }
        Polynomial prod = Polynomial::constant(n, 1.0);
        for (const FactorSlot& s : slots[i]) prod = prod * s.form;
        eqs.push_back(prod);
    }

    StartSystem out;
    out.kind = StartKind::LinearProduct;
    out.system = PolySystem(n, std::move(eqs));

    std::uint64_t total = 1;
    bool overflow = false;
    for (const auto& s : slots) {
        const std::uint64_t k = s.size();
        if (total > UINT64_MAX / k) { overflow = true; break; }
        total *= k;
    }
    out.total_roots = overflow ? UINT64_MAX : total;

    const bool symmetric = flip != nullptr;
    out.roots_are_orbit_reps = symmetric;
    out.orbit_count = symmetric && !overflow ? (total + 1) / 2 : out.total_roots;

    // choice -> sigma(choice): swap within each factor pair
    auto flip_choice = [&](std::vector<int> c) {
        for (int i = 0; i < target.size(); ++i) {
            const int b = slots[i][c[i]].pair_buddy;
            if (b >= 0) c[i] = b;
        }
        return c;
    };
    auto canonical = [&](const std::vector<int>& c) {
        if (!symmetric) return true;
        return !(flip_choice(c) < c);
    };

    // solve the linear system picked by one choice vector
    auto solve_choice = [&](const std::vector<int>& c) -> std::optional<Point> {
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
        Eigen::VectorXcd rhs(n);
        const Monomial one(std::vector<int>(n, 0));
        for (int i = 0; i < n; ++i) {
            const Polynomial& f = slots[i][c[i]].form;
            for (const Term& t : f.terms()) {
                const int d = t.mono.degree();
                if (d == 0) continue;
                for (int v = 0; v < n; ++v)
                    if (t.mono.exp[v] == 1) A(i, v) = t.coeff;
            }
            rhs[i] = -f.coefficient(one);
        }
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
        lu.setThreshold(1e-12);
        if (!lu.isInvertible()) return std::nullopt;
        return from_eigen(lu.solve(rhs));
    };

    auto decode = [&](std::uint64_t idx) {
        std::vector<int> c(target.size());
        for (int i = 0; i < target.size(); ++i) {
            c[i] = static_cast<int>(idx % slots[i].size());
            idx /= slots[i].size();
        }
        return c;
    };

    if (!overflow && total <= max_roots) {
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            const std::vector<int> c = decode(idx);
            if (!canonical(c)) continue;
            if (auto p = solve_choice(c)) out.roots.push_back(std::move(*p));
            else ++out.skipped_singular;
        }
    } else {
        out.sampled = true;
        std::set<std::vector<int>> seen;
        const std::uint64_t want = max_roots;
        std::uint64_t attempts = 0;
        while (seen.size() < want && attempts < 20 * want) {
            ++attempts;
            std::vector<int> c(target.size());
            for (int i = 0; i < target.size(); ++i)
                c[i] = static_cast<int>(rng.below(slots[i].size()));
            std::vector<int> f = symmetric ? flip_choice(c) : c;
            if (symmetric && f < c) c = std::move(f);
            if (!seen.insert(c).second) continue;
            if (auto p = solve_choice(c)) out.roots.push_back(std::move(*p));
            else ++out.skipped_singular;
        }
    }
    return out;
}

std::vector<PathResult> run_paths(const Homotopy& h, const std::vector<Point>& starts,
                                  const TrackerConfig& cfg, int threads) {
    std::vector<PathResult> results(starts.size());
    const TrackSession session(h);
    threads = std::max(1, threads);
    if (threads == 1 || starts.size() < 2) {
        for (std::size_t i = 0; i < starts.size(); ++i)
            results[i] = session.track(starts[i], cfg);
        return results;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= starts.size()) return;
            results[i] = session.track(starts[i], cfg);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    return results;
}

SolutionSet dedupe_solutions(const std::vector<Point>& points, double cluster_tol) {
    SolutionSet out;
    if (points.empty()) return out;
    const int n = static_cast<int>(points.front().size());
    const int m = static_cast<int>(points.size());

    // random-but-fixed projection key; window width covers the inf-norm ball
    Rng rng(0x5eedcafe1234ULL);
    std::vector<Cplx> w(n);
    for (int i = 0; i < n; ++i) w[i] = rng.unit_complex();
    std::vector<double> key(m);
    for (int i = 0; i < m; ++i) {
        Cplx acc = 0.0;
        for (int j = 0; j < n; ++j) acc += w[j] * points[i][j];
        key[i] = acc.real();
    }
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return key[a] < key[b]; });

    const double window = cluster_tol * (n + 1.0) + 1e-300;
    UnionFind uf(m);
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            if (key[order[b]] - key[order[a]] > window) break;
            if (dist_inf(points[order[a]], points[order[b]]) <= cluster_tol)
                uf.unite(order[a], order[b]);
        }
    }

    std::map<int, std::vector<int>> clusters;
    for (int i = 0; i < m; ++i) clusters[uf.find(i)].push_back(i);

    std::vector<std::pair<Point, int>> reps;
    for (auto& [root, members] : clusters) {
        int best = members.front();
        for (int i : members)
            if (canonical_less(points[i], points[best])) best = i;
        reps.emplace_back(points[best], static_cast<int>(members.size()));
    }
    std::sort(reps.begin(), reps.end(),
              [](const auto& a, const auto& b) { return canonical_less(a.first, b.first); });

    for (auto& [p, flag] : reps) {
        out.points.push_back(std::move(p));
        out.multiplicity_flags.push_back(flag);
        out.residuals.push_back(0.0);
    }
    return out;
}

PolySystem randomize_to_square(const PolySystem& sys, int n_target, Seed seed) {
    if (n_target > sys.size())
        throw std::invalid_argument("randomize_to_square: cannot grow the system");
    if (n_target == sys.size()) return sys;
    Rng rng(seed);
    std::vector<Polynomial> eqs;
    eqs.reserve(n_target);
    for (int i = 0; i < n_target; ++i) {
        Polynomial acc = Polynomial::zero(sys.nvars);
        for (int j = 0; j < sys.size(); ++j) acc = acc + sys.equations[j] * rng.unit_complex();
        eqs.push_back(std::move(acc));
    }
    return PolySystem(sys.nvars, std::move(eqs));
}

PolySystem with_affine_chart(const PolySystem& sys, const Point& patch) {
    if (static_cast<int>(patch.size()) != sys.nvars)
        throw std::invalid_argument("with_affine_chart: patch dimension mismatch");
    std::vector<Polynomial> eqs = sys.equations;
    std::vector<Term> terms;
    terms.push_back(Term{Monomial(std::vector<int>(sys.nvars, 0)), -1.0});
    for (int i = 0; i < sys.nvars; ++i) {
        std::vector<int> e(sys.nvars, 0);
        e[i] = 1;
        terms.push_back(Term{Monomial(std::move(e)), patch[i]});
    }
    eqs.push_back(Polynomial(sys.nvars, std::move(terms)));
    return PolySystem(sys.nvars, std::move(eqs));
}

Point random_patch(int nvars, Rng& rng) {
    Point p(nvars);
    for (int i = 0; i < nvars; ++i) p[i] = rng.unit_complex();
    return p;
}

SolutionSet solve_system(const PolySystem& target, const StartSystem& start,
                         const SymmetryAction* sym, const SolverConfig& cfg,
                         const PolySystem* filter) {
    if (target.size() != target.nvars)
        throw std::invalid_argument("solve_system: target must be square (randomize first)");
    if (start.system.nvars != target.nvars)
        throw std::invalid_argument("solve_system: start/target arity mismatch");

    Rng rng(cfg.seed);
    const Cplx gamma = rng.unit_complex();

    // one representative per orbit
    std::vector<Point> reps;
    if (!sym || sym->empty() || start.roots_are_orbit_reps) {
        reps = start.roots;
    } else {
        const auto& roots = start.roots;
        UnionFind uf(static_cast<int>(roots.size()));
        for (std::size_t i = 0; i < roots.size(); ++i) {
            for (const SignedPermutation& g : sym->generators) {
                const Point img = g.apply_point(roots[i]);
                for (std::size_t j = 0; j < roots.size(); ++j) {
                    if (dist_inf(img, roots[j]) <= cfg.cluster_tol) {
                        uf.unite(static_cast<int>(i), static_cast<int>(j));
                        break;
                    }
                }
            }
        }
        std::set<int> taken;
        for (std::size_t i = 0; i < roots.size(); ++i)
            if (taken.insert(uf.find(static_cast<int>(i))).second) reps.push_back(roots[i]);
    }

    if (cfg.paths_limit > 0 && reps.size() > cfg.paths_limit) reps.resize(cfg.paths_limit);

    const Homotopy h(target, start.system, gamma);
    const std::vector<PathResult> results = run_paths(h, reps, cfg.tracker, cfg.threads);

    const PolySystem& filt = filter ? *filter : target;
    SolutionSet out;
    std::vector<Point> accepted;
    for (const PathResult& r : results) {
        switch (r.status) {
            case PathStatus::Success: out.counts.success++; break;
            case PathStatus::Divergent: out.counts.divergent++; break;
            default: out.counts.failed++; break;
        }
        if (r.status != PathStatus::Success) continue;
        if (filt.residual_inf(r.endpoint) > cfg.residual_filter) continue;
        accepted.push_back(r.endpoint);
    }

    // reconstitute full orbits
    if (sym && !sym->empty()) {
        std::vector<Point> closure = accepted;
        for (std::size_t i = 0; i < closure.size() && closure.size() < 64 * accepted.size() + 64;
             ++i) {
            for (const SignedPermutation& g : sym->generators) {
                Point img = g.apply_point(closure[i]);
                bool fresh = true;
                for (const Point& p : closure)
                    if (dist_inf(img, p) <= cfg.cluster_tol) { fresh = false; break; }
                if (fresh) closure.push_back(std::move(img));
            }
        }
        accepted = std::move(closure);
    }

    SolutionSet clustered = dedupe_solutions(accepted, cfg.cluster_tol);
    out.points = std::move(clustered.points);
    out.multiplicity_flags = std::move(clustered.multiplicity_flags);
    out.residuals.clear();
    for (const Point& p : out.points) out.residuals.push_back(filt.residual_inf(p));
    return out;
}

}  // namespace sosb
