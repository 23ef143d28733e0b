#pragma once

#include <array>

#include "sosb/solver.hpp"

namespace sosb {

// Homogeneous quartic in four variables (real coefficients expected).
struct QuarticSurface {
    Polynomial F;
};

// sum_{i<j} xi^2 xj^2 + b * sum xi^2 xj xk + (4b^2 - 4b - 2) x1 x2 x3 x4,
// the second sum over the twelve terms with {j<k} not containing i.
QuarticSurface clr_quartic(double b);

struct SymmetroidError : std::runtime_error {
    std::string tag;
    SymmetroidError(std::string tag_, const std::string& what)
        : std::runtime_error(tag_ + ": " + what), tag(std::move(tag_)) {}
};

struct Node {
    Point location;                         // projective representative, unit norm
    bool real = false;
    std::array<int, 3> hessian_signature{}; // (pos, neg, zero) of the transverse quadric
};

enum class NodeStatus { Ok, NotTenNodal, SingularLocusPositiveDim };

struct NodeSet {
    NodeStatus status = NodeStatus::Ok;
    std::vector<Node> nodes;
    PathCounts counts;
};

struct SymmetroidConfig {
    SolverConfig solver;
    double svd_rel_tol = 1e-8;
    int curve_points = 100;
    int scan_points = 400;  // residual scan resolution on circles in the t-plane
};

// Solve the projective gradient system on a random chart; points with a
// rank-3 Hessian are nodes. Rank <= 2 residual-passing points flag a
// non-isolated singular locus.
NodeSet find_nodes(const QuarticSurface& S, const SymmetroidConfig& cfg);

// Change of coordinates sending the node to (0:0:0:1) and the x4-expansion
// F = f x4^2 + 2 g x4 + h in the new coordinates. Real nodes get a real
// orthogonal rotation (preserving the conjugate-cubic structure); complex
// nodes a unitary one.
struct NodeChart {
    Eigen::Matrix4cd rotation;  // columns orthonormal, last column = node
    Polynomial F_chart;         // 4 variables
    Polynomial f, g, h;         // ternary of degrees 2, 3, 4
};

NodeChart project_from_node(const QuarticSurface& S, const Node& node,
                            const SymmetroidConfig& cfg);

enum class SplitStatus { Ok, RealSplit, NotSplitting };

struct CubicSplit {
    SplitStatus status = SplitStatus::NotSplitting;
    Polynomial K1, K2;  // ternary cubics, K2 = conjugate of K1
    double sign = 1.0;  // f h - g^2 ~ sign * K1 * K2
    Cplx pencil_root;
    double residual = 1.0;               // relative factorization residual
    std::vector<Point> sextic_nodes;     // the nine nodes of f h - g^2
};

// Factor the ramification sextic f h - g^2 into conjugate cubics: find its
// nine nodes, fit the pencil of cubics through them, and locate the pencil
// parameter where the cubic divides the sextic. Real sextics produce a
// conjugate pair; complex ones a plain factor pair.
CubicSplit split_conjugate_cubics(const Polynomial& f, const Polynomial& g,
                                  const Polynomial& h, const SymmetroidConfig& cfg);
CubicSplit split_ramification_sextic(const Polynomial& G, const SymmetroidConfig& cfg);

// Residual-verified points on {F = K1 = 0} from random plane slices.
std::vector<Point> sample_curve_points(const Polynomial& F_chart, const Polynomial& K1_lifted,
                                       int count, const SymmetroidConfig& cfg);

struct CubicBasis {
    std::vector<Polynomial> g;  // four cubics in the chart variables
    double sv_gap = 0.0;        // sigma_16 / sigma_17 of the evaluation matrix
};

// Numerical nullspace of the cubic evaluation matrix at the curve points;
// throws SymmetroidError("DegenerateCurve") unless the nullity is exactly 4.
CubicBasis cubic_ideal_basis(const std::vector<Point>& points, double svd_rel_tol);

struct SyzygyMatrix {
    std::vector<std::vector<Polynomial>> rows;  // 3 x 4 linear forms
    double minor_subspace_angle = 0.0;          // against the input cubics
};

// Linear syzygies of the four cubics; throws SymmetroidError("SyzygyDefect")
// unless the syzygy space is exactly 3-dimensional.
SyzygyMatrix linear_syzygies(const std::vector<Polynomial>& cubics, double svd_rel_tol);

// Solve F = l1 g1 + ... + l4 g4 for linear forms and stack the signed row
// over the syzygy matrix; throws SymmetroidError("NotInIdeal") when F is not
// in the ideal. det(L) is proportional to F.
std::vector<std::vector<Polynomial>> complete_to_L(const Polynomial& F_chart,
                                                   const std::vector<Polynomial>& cubics,
                                                   const SyzygyMatrix& hb,
                                                   double svd_rel_tol);

struct DetRep {
    std::vector<std::vector<Polynomial>> M;  // 4x4 symmetric, degree-1 entries
    Cplx scale;                              // det(M) = scale * F
    double residual = 1.0;                   // max-coefficient relative residual
};

// Solve P L = (P L)^T and take M = P L for a nonsingular nullspace element;
// throws SymmetroidError("SymmetrizationFailed") when none exists.
DetRep symmetrize(const std::vector<std::vector<Polynomial>>& L, const Polynomial& F,
                  double svd_rel_tol, Seed seed);

// Numerical rank of the 35x40 Jacobian of (A1..A4) -> coefficients of
// det(sum xi Ai) at a random symmetric 4-tuple.
int qs_jacobian_rank(Seed seed);
int qs_jacobian_rank_at(const std::array<Eigen::Matrix4cd, 4>& A);

struct PipelineResult {
    bool ok = false;
    std::string failure;  // error tag when not ok
    NodeSet nodes;
    int node_index = 0;
    CubicSplit split;
    DetRep detrep;        // in the original coordinates
    double sv_gap = 0.0;
};

// Full algorithm: nodes, projection, conjugate-cubic split, curve sampling,
// cubic ideal, syzygies, completion, symmetrization.
PipelineResult symmetric_determinantal_representation(const QuarticSurface& S,
                                                      const SymmetroidConfig& cfg,
                                                      int node_index = 0);

// The printed reference representation for the b = 3/2 extremal quartic:
// entries over omega = (2/7) sqrt(-10), and its determinant scale.
std::vector<std::vector<Polynomial>> reference_detrep_matrix();
Cplx reference_detrep_scale();

// max-coefficient relative residual of det(M) - scale * F
double detrep_residual(const std::vector<std::vector<Polynomial>>& M, Cplx scale,
                       const Polynomial& F);

}  // namespace sosb
