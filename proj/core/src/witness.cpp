#include "sosb/witness.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <functional>
#include <numeric>
#include <set>

namespace sosb {

namespace {

double dist_inf(const Point& a, const Point& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::vector<int> full_support(int nvars) {
    std::vector<int> s(nvars);
    std::iota(s.begin(), s.end(), 0);
    return s;
}

// Sliced tracking context: the system part is squared once (seeded) so that
// [squared_part; slice] is square, and every leg reuses the same squaring.
struct SlicedContext {
    const WitnessProblem& problem;
    const WitnessConfig& cfg;
    int k;
    PolySystem squared_part;

    SlicedContext(const WitnessProblem& p, int k_, const WitnessConfig& c)
        : problem(p), cfg(c), k(k_) {
        const int n = p.system.nvars;
        if (k > n) throw std::invalid_argument("witness: slice codim exceeds ambient dim");
        const int rows = n - k;
        if (p.system.size() < rows)
            throw std::invalid_argument("witness: system has too few equations for this dim");
        Rng seq(cfg.solver.seed);
        const Seed sq{seq.fork(1000 + static_cast<std::uint64_t>(k)).raw()};
        squared_part = randomize_to_square(p.system, rows, sq);
    }

    PolySystem with_slice(const Slice& s) const {
        std::vector<Polynomial> eqs = squared_part.equations;
        for (const Polynomial& f : s.linear_forms) eqs.push_back(f);
        return PolySystem(problem.system.nvars, std::move(eqs));
    }

    PolySystem original_with_slice(const Slice& s) const {
        std::vector<Polynomial> eqs = problem.system.equations;
        for (const Polynomial& f : s.linear_forms) eqs.push_back(f);
        return PolySystem(problem.system.nvars, std::move(eqs));
    }

    // track the given points from slice `from` to slice `to`; nullopt entry
    // when a path is lost
    std::vector<std::optional<Point>> track_leg(const std::vector<Point>& pts,
                                                const Slice& from, const Slice& to,
                                                Cplx gamma) const {
        return track_leg(pts, from, to, gamma, cfg.solver.tracker);
    }

    std::vector<std::optional<Point>> track_leg(const std::vector<Point>& pts,
                                                const Slice& from, const Slice& to,
                                                Cplx gamma, const TrackerConfig& tcfg) const {
        if (gamma.real() < 0.1) gamma = -gamma;  // keep gamma*t + (1-t) away from 0
        const Homotopy h(with_slice(to), with_slice(from), gamma);
        const std::vector<PathResult> rs = run_paths(h, pts, tcfg, cfg.solver.threads);
        const PolySystem check = original_with_slice(to);
        std::vector<std::optional<Point>> out(pts.size());
        for (std::size_t i = 0; i < rs.size(); ++i) {
            if (rs[i].status == PathStatus::Success &&
                check.residual_inf(rs[i].endpoint) <= cfg.solver.residual_filter * 10)
                out[i] = rs[i].endpoint;
        }
        return out;
    }
};

}  // namespace

std::string to_string(TriState t) {
    switch (t) {
        case TriState::True: return "true";
        case TriState::False: return "false";
        case TriState::Inconclusive: return "inconclusive";
    }
    return "?";
}

Slice make_slice(int nvars, int k, Seed seed, const std::vector<int>& support) {
    Slice s;
    s.seed = seed;
    s.support = support.empty() ? full_support(nvars) : support;
    Rng rng(seed);
    for (int i = 0; i < k; ++i) s.linear_forms.push_back(random_linear(nvars, rng, s.support));
    return s;
}

Slice translate_slice(const Slice& s, Cplx tau, const std::vector<Cplx>& direction) {
    if (direction.size() != s.linear_forms.size())
        throw std::invalid_argument("translate_slice: direction size mismatch");
    Slice out = s;
    const int n = out.linear_forms.empty() ? 0 : out.linear_forms.front().nvars();
    for (std::size_t i = 0; i < out.linear_forms.size(); ++i)
        out.linear_forms[i] =
            out.linear_forms[i] + Polynomial::constant(n, tau * direction[i]);
    return out;
}

Slice slice_through_point(const Slice& s, const Point& pt) {
    Slice out = s;
    for (Polynomial& f : out.linear_forms) f = f - Polynomial::constant(f.nvars(), f.eval(pt));
    return out;
}

namespace {

ProductGrouping bilinear_grouping(const PolySystem& sys, const std::vector<int>& groupA,
                                  const std::vector<int>& groupB) {
    ProductGrouping g;
    for (const Polynomial& eq : sys.equations) {
        const int d = eq.degree();
        if (d == 2) {
            g.factors.push_back({groupA, groupB});
        } else {
            std::vector<std::vector<int>> fs;
            for (int i = 0; i < std::max(1, d); ++i) fs.push_back(groupA);
            g.factors.push_back(std::move(fs));
        }
    }
    return g;
}

}  // namespace

SupersetResult witness_superset(const WitnessProblem& problem, int k,
                                const WitnessConfig& cfg) {
    SlicedContext ctx(problem, k, cfg);
    Rng seq(cfg.solver.seed);
    const Seed slice_seed{seq.fork(1).raw()};
    const Seed start_seed{seq.fork(2).raw()};

    SupersetResult out;
    out.slice = make_slice(problem.system.nvars, k, slice_seed, problem.slice_support);

    const PolySystem square = ctx.with_slice(out.slice);
    const PolySystem original = ctx.original_with_slice(out.slice);

    StartSystem start;
    if (problem.bilinear_split) {
        const auto& [ga, gb] = *problem.bilinear_split;
        start = linear_product_start(square, bilinear_grouping(square, ga, gb), nullptr,
                                     start_seed);
    } else {
        start = total_degree_start(square, start_seed);
    }

    SolverConfig scfg = cfg.solver;
    SolutionSet sol = solve_system(square, start, nullptr, scfg, &original);
    out.points = std::move(sol.points);
    out.counts = sol.counts;
    return out;
}

std::vector<std::vector<int>> monodromy_partition(const std::vector<Point>& points,
                                                  const WitnessProblem& problem,
                                                  const Slice& slice,
                                                  const WitnessConfig& cfg) {
    const int m = static_cast<int>(points.size());
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    auto group_count = [&]() {
        std::set<int> roots;
        for (int i = 0; i < m; ++i) roots.insert(find(i));
        return roots.size();
    };
    if (m <= 1) return m == 1 ? std::vector<std::vector<int>>{{0}} : std::vector<std::vector<int>>{};

    SlicedContext ctx(problem, slice.size(), cfg);
    Rng rng(cfg.solver.seed);
    Rng loops = rng.fork(3);

    // a jumped path shows up as a non-bijective match; reject such loops,
    // and confirm every proposed merge by re-running the same loop with a
    // tighter step cap before trusting it
    TrackerConfig leg_cfg = cfg.solver.tracker;
    leg_cfg.step_max = std::min(leg_cfg.step_max, 0.05);
    TrackerConfig confirm_cfg = leg_cfg;
    confirm_cfg.step_max = leg_cfg.step_max / 5.0;
    confirm_cfg.newton_tol = leg_cfg.newton_tol / 10.0;

    // returns the permutation of `points` induced by the loop, empty on
    // any lost path or non-bijective matching
    auto run_loop = [&](const Slice& l1, const Slice& l2, const std::array<Cplx, 3>& gammas,
                        const TrackerConfig& tcfg) -> std::vector<int> {
        std::vector<Point> cur = points;
        int leg_index = 0;
        for (const auto& [from, to] :
             std::vector<std::pair<const Slice*, const Slice*>>{{&slice, &l1}, {&l1, &l2},
                                                                {&l2, &slice}}) {
            auto next = ctx.track_leg(cur, *from, *to, gammas[leg_index++], tcfg);
            for (std::size_t i = 0; i < next.size(); ++i) {
                if (!next[i]) return {};
                cur[i] = *next[i];
            }
        }
        std::vector<int> match(m, -1);
        std::vector<char> used(m, 0);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                if (dist_inf(cur[i], points[j]) <= cfg.solver.cluster_tol) {
                    match[i] = j;
                    break;
                }
            }
            if (match[i] < 0 || used[match[i]]) return {};
            used[match[i]] = 1;
        }
        return match;
    };

    int quiet = 0;
    int retries_left = cfg.loop_retries * cfg.max_loops;
    while (quiet < cfg.max_loops && group_count() > 1) {
        const Slice l1 =
            make_slice(problem.system.nvars, slice.size(), Seed{loops.raw()}, slice.support);
        const Slice l2 =
            make_slice(problem.system.nvars, slice.size(), Seed{loops.raw()}, slice.support);
        const std::array<Cplx, 3> gammas = {loops.unit_complex(), loops.unit_complex(),
                                            loops.unit_complex()};

        const std::vector<int> match = run_loop(l1, l2, gammas, leg_cfg);
        if (match.empty()) {
            if (--retries_left < 0) break;
            continue;
        }

        bool proposes_merge = false;
        for (int i = 0; i < m; ++i)
            if (find(i) != find(match[i])) proposes_merge = true;

        bool merged = false;
        if (proposes_merge) {
            const std::vector<int> again = run_loop(l1, l2, gammas, confirm_cfg);
            if (again.empty()) {
                if (--retries_left < 0) break;
                continue;
            }
            for (int i = 0; i < m; ++i) {
                if (match[i] != again[i]) continue;  // unconfirmed edge
                const int a = find(i), b = find(match[i]);
                if (a != b) {
                    parent[a] = b;
                    merged = true;
                }
            }
        }
        quiet = merged ? 0 : quiet + 1;
    }

    std::vector<std::vector<int>> groups;
    std::vector<int> root_of(m);
    std::vector<int> seen;
    for (int i = 0; i < m; ++i) {
        const int r = find(i);
        auto it = std::find(seen.begin(), seen.end(), r);
        if (it == seen.end()) {
            seen.push_back(r);
            groups.push_back({i});
        } else {
            groups[static_cast<std::size_t>(it - seen.begin())].push_back(i);
        }
    }
    return groups;
}

TriState trace_test(const std::vector<Point>& group, const WitnessProblem& problem,
                    const Slice& slice, const WitnessConfig& cfg) {
    if (group.empty()) return TriState::Inconclusive;
    SlicedContext ctx(problem, slice.size(), cfg);
    Rng rng(cfg.solver.seed);
    Rng tr = rng.fork(4);

    // translate only the first slice form
    std::vector<Cplx> dir(slice.linear_forms.size(), Cplx(0.0));
    dir[0] = tr.unit_complex();
    const Cplx h(cfg.trace_step, 0.0);

    const Slice s1 = translate_slice(slice, h, dir);
    const Slice s2 = translate_slice(slice, 2.0 * h, dir);

    auto leg1 = ctx.track_leg(group, slice, s1, tr.unit_complex());
    auto sum_of = [&](const std::vector<std::optional<Point>>& pts,
                      const std::vector<int>& coords) -> std::optional<Point> {
        Point s(coords.size(), Cplx(0.0));
        for (const auto& p : pts) {
            if (!p) return std::nullopt;
            for (std::size_t c = 0; c < coords.size(); ++c) s[c] += (*p)[coords[c]];
        }
        return s;
    };
    const std::vector<int>& coords =
        slice.support.empty() ? full_support(problem.system.nvars) : slice.support;

    std::vector<std::optional<Point>> g0(group.size());
    for (std::size_t i = 0; i < group.size(); ++i) g0[i] = group[i];
    auto s0 = sum_of(g0, coords);
    auto sA = sum_of(leg1, coords);
    if (!sA) return TriState::Inconclusive;

    std::vector<Point> at1;
    for (const auto& p : leg1) at1.push_back(*p);
    auto leg2 = ctx.track_leg(at1, s1, s2, tr.unit_complex());
    auto sB = sum_of(leg2, coords);
    if (!sB) return TriState::Inconclusive;

    double second_diff = 0.0, scale = 1.0;
    for (std::size_t c = 0; c < coords.size(); ++c) {
        second_diff = std::max(second_diff, std::abs((*s0)[c] - 2.0 * (*sA)[c] + (*sB)[c]));
        scale = std::max({scale, std::abs((*s0)[c]), std::abs((*sB)[c])});
    }
    return second_diff <= cfg.trace_tol * scale ? TriState::True : TriState::False;
}

TriState membership(const Point& query, const WitnessSet& ws,
                    const WitnessProblem& problem, const WitnessConfig& cfg) {
    SlicedContext ctx(problem, ws.slice.size(), cfg);
    Rng rng(cfg.solver.seed);
    Rng mem = rng.fork(5);
    const Slice target = slice_through_point(ws.slice, query);
    auto ends = ctx.track_leg(ws.points, ws.slice, target, mem.unit_complex());
    bool any_lost = false;
    for (const auto& p : ends) {
        if (!p) { any_lost = true; continue; }
        if (dist_inf(*p, query) <= cfg.solver.cluster_tol) return TriState::True;
    }
    return any_lost ? TriState::Inconclusive : TriState::False;
}

Decomposition numerical_decomposition(const WitnessProblem& problem,
                                      const std::vector<int>& dims,
                                      const WitnessConfig& cfg) {
    Decomposition out;
    std::vector<int> order = dims;
    std::sort(order.rbegin(), order.rend());

    for (int k : order) {
        SupersetResult sup = witness_superset(problem, k, cfg);
        out.counts.success += sup.counts.success;
        out.counts.divergent += sup.counts.divergent;
        out.counts.failed += sup.counts.failed;

        // drop points absorbed by higher-dimensional components
        std::vector<Point> pts;
        for (const Point& p : sup.points) {
            bool absorbed = false;
            for (const WitnessSet& higher : out.components) {
                if (higher.dim <= k) continue;
                if (membership(p, higher, problem, cfg) == TriState::True) {
                    absorbed = true;
                    break;
                }
            }
            if (!absorbed) pts.push_back(p);
        }
        if (pts.empty()) continue;

        const auto groups = monodromy_partition(pts, problem, sup.slice, cfg);
        for (const auto& g : groups) {
            std::vector<Point> gp;
            for (int i : g) gp.push_back(pts[i]);
            const TriState t = trace_test(gp, problem, sup.slice, cfg);
            if (t == TriState::True) {
                WitnessSet ws;
                ws.system = problem.system;
                ws.slice = sup.slice;
                ws.points = gp;
                ws.dim = k;
                ws.degree = gp.size();
                out.components.push_back(std::move(ws));
            } else {
                out.issues.push_back(DecompositionIssue{
                    k, gp,
                    t == TriState::False ? "trace test failed: group incomplete"
                                         : "trace test inconclusive after retries"});
            }
        }
    }
    return out;
}

}  // namespace sosb
