#pragma once

#include <functional>

#include "sosb/bigint.hpp"
#include "sosb/witness.hpp"

namespace sosb {

// Row/column indexing of the moment matrix of a linear functional on forms
// of degree 2d in n variables: rows are the degree-d monomials in the
// global (graded lex ascending) order, entry (r,c) is the coefficient
// a_{row[r] + row[c]}.
struct HankelSpec {
    int n = 0;
    int d = 0;
    std::vector<Monomial> row_index;    // degree-d exponent tuples, ascending
    std::vector<Monomial> coeff_index;  // degree-2d exponent tuples, ascending

    int size() const { return static_cast<int>(row_index.size()); }
    int num_coeffs() const { return static_cast<int>(coeff_index.size()); }
    int coeff_position(const Monomial& m) const;  // throws when missing
};

HankelSpec make_hankel_spec(int n, int d);

Monomial hankel_entry_exponent(const HankelSpec& spec, int r, int c);
std::string hankel_entry_label(const HankelSpec& spec, int r, int c);  // e.g. "a006"

// Symbolic matrix over the coefficient variables a_m (one variable per
// degree-2d monomial, ordered like coeff_index).
std::vector<std::vector<Polynomial>> build_hankel(const HankelSpec& spec);

// Entry map applied to an explicit coefficient lookup.
Eigen::MatrixXcd evaluate_hankel(const HankelSpec& spec,
                                 const std::function<Cplx(const Monomial&)>& a);

struct HarrisTu {
    BigInt degree;
    int codim = 0;
};

// Degree and codimension of the rank <= r locus of symmetric n x n
// matrices, in exact integer arithmetic (divisibility asserted).
HarrisTu harris_tu_degree(int n, int r);

// F_r = A(x) * B * [I_{N-r}; Xi] with random unit-modulus B (condition
// rejected above 1e6); bilinear in (x, Xi).
struct RankSystem {
    PolySystem system;  // variables: x_0..x_{nx-1}, then Xi row-major
    int nx = 0;
    int nrows = 0;
    int ncols = 0;
    int rank = 0;
    Eigen::MatrixXcd B;
    std::vector<int> x_vars;
    std::vector<int> xi_vars;

    Point project(const Point& p) const;  // (x, Xi) -> x
};

RankSystem rank_deficiency_system(const std::vector<std::vector<Polynomial>>& A, int r,
                                  Seed seed);

// Generic symmetric n x n matrix: one variable per entry of the upper
// triangle, nvars = n(n+1)/2.
std::vector<std::vector<Polynomial>> generic_symmetric_matrix(int n);

// Witness-set computation of the projective rank locus {rank A(x) <= r}:
// rank system + random affine chart on x + slices supported on x.
struct RankLocusWitness {
    Decomposition decomposition;
    WitnessProblem problem;   // rank system + chart, as sliced
    int expected_dim = 0;     // projective dimension = chart-affine dimension
    BigInt expected_degree;   // generalized Harris-Tu
    int expected_codim = 0;
    std::uint64_t observed_degree = 0;  // total certified witness points
    bool section_proper = true;         // expected codim confirmed numerically
};

RankLocusWitness rank_locus_witness(const std::vector<std::vector<Polynomial>>& A,
                                    int ambient_proj_dim, int r, const WitnessConfig& cfg);

enum class RankLocusMode { Formula, Witness };

struct RankLocusReport {
    std::string case_name;
    std::string mode;
    int dim = 0;
    int codim = 0;
    BigInt degree;
    std::vector<std::string> assumptions;
    PathCounts path_counts;
    bool complete = true;  // false when a path budget truncated the run
    std::uint64_t paths_total = 0;
    std::uint64_t paths_tracked = 0;
};

// The two printed 10x10 cases are (n,d,rank) = (3,3,7) and (4,2,6); smaller
// specs run the same machinery at desk scale. Witness mode honors
// cfg.solver.paths_limit as a sampling budget.
RankLocusReport hankel_rank_locus(const HankelSpec& spec, int rank, RankLocusMode mode,
                                  const WitnessConfig& cfg);

}  // namespace sosb
