#pragma once

#include <cstdint>
#include <optional>

#include "sosb/tracker.hpp"

namespace sosb {

enum class StartKind { TotalDegree, LinearProduct };

// Signed coordinate permutation x_i -> sign[i] * x_{perm[i]}.
struct SignedPermutation {
    std::vector<int> perm;
    std::vector<int> sign;  // entries +1 or -1

    Point apply_point(const Point& p) const;
    Polynomial apply_poly(const Polynomial& f) const;
};

struct SymmetryAction {
    std::vector<SignedPermutation> generators;

    bool empty() const { return generators.empty(); }
    // Numerical spot check that each generator maps the solution set of
    // `sys` into itself (evaluated on the given sample points).
    bool preserves(const PolySystem& sys, const std::vector<Point>& samples,
                   double tol = 1e-8) const;
};

// Product structure for a linear-product start: one support list per factor
// per equation. Factor count must equal the equation degree.
struct ProductGrouping {
    std::vector<std::vector<std::vector<int>>> factors;
};

struct StartSystem {
    PolySystem system;
    std::vector<Point> roots;  // materialized roots (orbit reps when symmetric)
    StartKind kind = StartKind::TotalDegree;

    std::uint64_t total_roots = 0;      // full combinatorial root count
    std::uint64_t orbit_count = 0;      // = total_roots unless built with a symmetry
    std::uint64_t skipped_singular = 0; // degenerate factor combinations
    bool roots_are_orbit_reps = false;
    bool sampled = false;               // roots are a sample, not the full set
};

struct PathCounts {
    std::uint64_t success = 0;
    std::uint64_t divergent = 0;
    std::uint64_t failed = 0;  // StepFailure + MaxSteps
};

struct SolutionSet {
    std::vector<Point> points;
    std::vector<double> residuals;
    std::vector<int> multiplicity_flags;
    PathCounts counts;
};

struct SolverConfig {
    TrackerConfig tracker;
    double cluster_tol = 1e-6;
    double residual_filter = 1e-8;
    int threads = 1;
    std::uint64_t paths_limit = 0;  // 0 = track everything
    Seed seed{20120521};
};

// Start equation i is x_i^{d_i} - c_i with random unit-modulus c_i. Roots
// above max_roots are sampled rather than enumerated.
StartSystem total_degree_start(const PolySystem& target, Seed seed,
                               std::uint64_t max_roots = 1u << 20);

// Start equations are products of random degree-1 forms per the grouping.
// With a symmetry (sign flips only), factors touching flipped variables are
// generated in consecutive invariant pairs and roots come out one per orbit.
StartSystem linear_product_start(const PolySystem& target, const ProductGrouping& grouping,
                                 const SymmetryAction* sym, Seed seed,
                                 std::uint64_t max_roots = 1u << 20);

// Track every start root (or one per orbit), reconstitute orbits from the
// generators, filter against `filter` (defaults to target) at
// cfg.residual_filter, then cluster at cfg.cluster_tol.
SolutionSet solve_system(const PolySystem& target, const StartSystem& start,
                         const SymmetryAction* sym, const SolverConfig& cfg,
                         const PolySystem* filter = nullptr);

// Single-linkage clustering at cluster_tol (inf-norm); the representative of
// each cluster is its canonically least point, the flag is the cluster size.
SolutionSet dedupe_solutions(const std::vector<Point>& points, double cluster_tol);

// Lexicographic on interleaved (re, im) coordinates.
bool canonical_less(const Point& a, const Point& b);

// Random complex full-rank recombination down to n_target equations.
PolySystem randomize_to_square(const PolySystem& sys, int n_target, Seed seed);

// Append the affine chart equation <patch, x> = 1.
PolySystem with_affine_chart(const PolySystem& sys, const Point& patch);

Point random_patch(int nvars, Rng& rng);

// Product of equation degrees, saturating at UINT64_MAX.
std::uint64_t bezout_number(const PolySystem& sys);

// Track a batch of paths of one homotopy, optionally in parallel; results
// are indexed like the inputs regardless of scheduling.
std::vector<PathResult> run_paths(const Homotopy& h, const std::vector<Point>& starts,
                                  const TrackerConfig& cfg, int threads);

}  // namespace sosb
