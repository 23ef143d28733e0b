#pragma once

#include <optional>

#include "sosb/solver.hpp"

namespace sosb {

// Generic linear slice: k degree-1 polynomials with random complex
// coefficients supported on `support` (empty = all variables).
struct Slice {
    std::vector<Polynomial> linear_forms;
    Seed seed{0};
    std::vector<int> support;

    int size() const { return static_cast<int>(linear_forms.size()); }
};

Slice make_slice(int nvars, int k, Seed seed, const std::vector<int>& support = {});

// Same linear parts, constants shifted by tau * direction (parallel pencil).
Slice translate_slice(const Slice& s, Cplx tau, const std::vector<Cplx>& direction);

// Parallel translate of `s` so every form vanishes at `pt`.
Slice slice_through_point(const Slice& s, const Point& pt);

struct WitnessSet {
    PolySystem system;
    Slice slice;
    std::vector<Point> points;
    int dim = 0;
    std::uint64_t degree = 0;
};

// What gets sliced: the affine system (chart equation already included for
// projective inputs), which variables slices may touch, and an optional
// bilinear variable split that turns on linear-product starts.
struct WitnessProblem {
    PolySystem system;
    std::vector<int> slice_support;
    std::optional<std::pair<std::vector<int>, std::vector<int>>> bilinear_split;
};

struct WitnessConfig {
    SolverConfig solver;
    int max_loops = 10;       // consecutive no-merge loops before stopping
    int loop_retries = 3;     // fresh loops after a lost path
    double trace_tol = 1e-6;
    double trace_step = 0.5;  // pencil translation step
};

enum class TriState { True, False, Inconclusive };

std::string to_string(TriState t);

struct SupersetResult {
    std::vector<Point> points;
    Slice slice;
    PathCounts counts;
};

// Isolated solutions of system + k random slice forms, residual-filtered
// against the unsquared input.
SupersetResult witness_superset(const WitnessProblem& problem, int k,
                                const WitnessConfig& cfg);

// Union points connected by tracking around random slice loops. Returns
// groups as index sets into `points`.
std::vector<std::vector<int>> monodromy_partition(const std::vector<Point>& points,
                                                  const WitnessProblem& problem,
                                                  const Slice& slice,
                                                  const WitnessConfig& cfg);

// Moves the slice in a parallel pencil and checks that the group sum moves
// affine-linearly; True certifies the group as a complete component.
TriState trace_test(const std::vector<Point>& group, const WitnessProblem& problem,
                    const Slice& slice, const WitnessConfig& cfg);

// Tracks ws.points along a slice pencil through the query point.
TriState membership(const Point& query, const WitnessSet& ws,
                    const WitnessProblem& problem, const WitnessConfig& cfg);

struct DecompositionIssue {
    int dim = 0;
    std::vector<Point> group;
    std::string what;
};

struct Decomposition {
    std::vector<WitnessSet> components;
    std::vector<DecompositionIssue> issues;
    PathCounts counts;
};

// Per-dimension sweep: superset, filter against higher-dimensional
// components, monodromy partition, trace test.
Decomposition numerical_decomposition(const WitnessProblem& problem,
                                      const std::vector<int>& dims,
                                      const WitnessConfig& cfg);

}  // namespace sosb
