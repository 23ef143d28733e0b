#pragma once

#include <map>

#include "sosb/intpoly.hpp"
#include "sosb/solver.hpp"

namespace sosb {

enum class BoundaryCase { Sextic3Squares, Quartic4Squares, BinaryAnalogue };

std::string to_string(BoundaryCase c);

// One unknown of the coefficient-matching system: which form block it
// belongs to ("f", "g", "h", "k" or "s") and which monomial of that form.
struct UnknownDesc {
    std::string block;
    Monomial mono;  // empty for the pencil parameter s
};

struct FixedCoeff {
    std::string block;
    Monomial mono;
    Cplx value;
};

// Coefficient-matching system for a rank-deficient-quadric pencil member:
// fh - g^2 = p + s q (sextic / binary analogue) or fg - hk = p + s q
// (quartic case), after the documented normalizations.
struct BoundarySystem {
    BoundaryCase kind = BoundaryCase::Sextic3Squares;
    int analogue_k = 0;

    PolySystem system;  // equations over the unknowns listed below
    std::vector<UnknownDesc> unknowns;
    std::vector<FixedCoeff> fixed;
    int s_index = -1;

    Polynomial p, q;  // the pencil, in the base variables
    int base_nvars = 0;

    SymmetryAction symmetry;   // negating g (empty for the quartic case)
    ProductGrouping grouping;  // linear-product structure for start systems

    std::vector<std::string> normalizations;
    std::vector<std::string> residual_symmetry;  // quartic case only
    int census_linear = 0;
    int census_quadratic = 0;

    Seed build_seed{0};
};

// p, q homogeneous ternary sextics. 26 quadratic + 2 linear equations in 28
// unknowns; solution set invariant under negating g.
BoundarySystem sextic_system(const Polynomial& p, const Polynomial& q, Seed seed);

// p, q homogeneous quaternary quartics. 35 matching equations in 37
// unknowns; a two-parameter residual symmetry survives the normalizations,
// so this case is for census/consistency work and sampling only.
BoundarySystem quartic_system(const Polynomial& p, const Polynomial& q, Seed seed);

// Desk-scale analogue in two base variables: f = x^k, fh - g^2 = p + s q
// with binary forms of degree 2k; square with finitely many solutions.
BoundarySystem binary_analogue_system(int k, const Polynomial& p, const Polynomial& q);

// Reassemble the form blocks from a solution vector.
struct BoundaryCertificate {
    std::map<std::string, Polynomial> blocks;
    Cplx s;
};
BoundaryCertificate assemble(const BoundarySystem& sys, const Point& solution);

// Residual of the defining identity at a random base point.
double identity_residual(const BoundarySystem& sys, const Point& solution, Rng& rng,
                         int sample_points = 20);

struct BoundarySolveReport {
    SolutionSet solutions;
    std::vector<Cplx> distinct_s;
    std::uint64_t orbits_total = 0;
    std::uint64_t orbits_tracked = 0;
    bool sampled = false;
};

// Linear-product start respecting the symmetry, one path per orbit;
// cfg.paths_limit turns on sampling mode.
BoundarySolveReport solve_boundary(const BoundarySystem& sys, const SolverConfig& cfg);

struct OracleResult {
    int degree = 0;
    bool degenerate = false;   // pencil linearly dependent
    ZPoly eliminant;           // squarefree, univariate in s
};

// Independent exact count of the distinct pencil parameters admitting a
// solution: iterated resultant elimination over the integers, validated by
// a second elimination after a random unimodular change of coordinates.
// Binary-analogue systems only; requires a rational pencil.
OracleResult brute_force_degree(const BoundarySystem& sys,
                                std::size_t term_budget = 2000000);

}  // namespace sosb
