#include "sosb/rankloci.hpp"

#include <algorithm>
#include <cmath>

namespace sosb {

int HankelSpec::coeff_position(const Monomial& m) const {
    const auto it = std::lower_bound(coeff_index.begin(), coeff_index.end(), m);
    if (it == coeff_index.end() || !(*it == m))
        throw std::out_of_range("HankelSpec: missing coefficient " + Polynomial::monomial(m, 1.0).to_string());
    return static_cast<int>(it - coeff_index.begin());
}

HankelSpec make_hankel_spec(int n, int d) {
    if (n < 1 || d < 1) throw std::invalid_argument("make_hankel_spec: n, d must be >= 1");
    HankelSpec spec;
    spec.n = n;
    spec.d = d;
    spec.row_index = monomials_of_degree(n, d);
    spec.coeff_index = monomials_of_degree(n, 2 * d);
    return spec;
}

Monomial hankel_entry_exponent(const HankelSpec& spec, int r, int c) {
    const Monomial& a = spec.row_index.at(r);
    const Monomial& b = spec.row_index.at(c);
    std::vector<int> e(spec.n);
    for (int i = 0; i < spec.n; ++i) e[i] = a.exp[i] + b.exp[i];
    return Monomial(std::move(e));
}

std::string hankel_entry_label(const HankelSpec& spec, int r, int c) {
    const Monomial m = hankel_entry_exponent(spec, r, c);
    std::string s = "a";
    for (int e : m.exp) s += std::to_string(e);
    return s;
}

std::vector<std::vector<Polynomial>> build_hankel(const HankelSpec& spec) {
    const int N = spec.size();
    const int nv = spec.num_coeffs();
    std::vector<std::vector<Polynomial>> H(N);
    for (int r = 0; r < N; ++r) {
        H[r].reserve(N);
        for (int c = 0; c < N; ++c) {
            const int pos = spec.coeff_position(hankel_entry_exponent(spec, r, c));
            H[r].push_back(Polynomial::variable(nv, pos));
        }
    }
    return H;
}

Eigen::MatrixXcd evaluate_hankel(const HankelSpec& spec,
                                 const std::function<Cplx(const Monomial&)>& a) {
    const int N = spec.size();
    Eigen::MatrixXcd H(N, N);
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) H(r, c) = a(hankel_entry_exponent(spec, r, c));
    return H;
}

HarrisTu harris_tu_degree(int n, int r) {
    if (r < 1 || r >= n) throw std::invalid_argument("harris_tu_degree: need 1 <= r < n");
    BigRat acc = 1;
    for (int j = 0; j <= n - 1 - r; ++j) {
        acc *= BigRat(binomial(n + j, n - r - j), binomial(2 * j + 1, j));
    }
    if (boost::multiprecision::denominator(acc) != 1)
        throw std::logic_error("harris_tu_degree: product is not an integer");
    HarrisTu out;
    out.degree = boost::multiprecision::numerator(acc);
    out.codim = static_cast<int>(binomial(n - r + 1, 2));
    return out;
}

Point RankSystem::project(const Point& p) const {
    return Point(p.begin(), p.begin() + nx);
}

RankSystem rank_deficiency_system(const std::vector<std::vector<Polynomial>>& A, int r,
                                  Seed seed) {
    if (A.empty() || A.front().empty())
        throw std::invalid_argument("rank_deficiency_system: empty matrix");
    const int nrows = static_cast<int>(A.size());
    const int N = static_cast<int>(A.front().size());
    if (r < 0 || r >= N) throw std::invalid_argument("rank_deficiency_system: need 0 <= r < ncols");
    const int nx = A.front().front().nvars();
    for (const auto& row : A)
        for (const Polynomial& e : row)
            if (e.nvars() != nx) throw std::invalid_argument("rank_deficiency_system: entry arity mismatch");

    RankSystem out;
    out.nx = nx;
    out.nrows = nrows;
    out.ncols = N;
    out.rank = r;

    Rng rng(seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        Eigen::MatrixXcd B(N, N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) B(i, j) = rng.unit_complex();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B);
        const double cond =
            svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
        if (cond <= 1e6) {
            out.B = std::move(B);
            break;
        }
        if (attempt == 63) throw std::runtime_error("rank_deficiency_system: no well-conditioned B");
    }

    const int nxi = r * (N - r);
    const int nv = nx + nxi;
    out.x_vars.resize(nx);
    for (int i = 0; i < nx; ++i) out.x_vars[i] = i;
    out.xi_vars.resize(nxi);
    for (int i = 0; i < nxi; ++i) out.xi_vars[i] = nx + i;

    std::vector<int> embed_map(nx);
    for (int i = 0; i < nx; ++i) embed_map[i] = i;

    // AB[i][c] = sum_k A[i][k] * B(k, c), lifted to the (x, Xi) variable set
    std::vector<std::vector<Polynomial>> AB(nrows);
    for (int i = 0; i < nrows; ++i) {
        AB[i].reserve(N);
        for (int c = 0; c < N; ++c) {
            Polynomial acc = Polynomial::zero(nx);
            for (int k = 0; k < N; ++k) acc = acc + A[i][k] * out.B(k, c);
            AB[i].push_back(acc.embed(nv, embed_map));
        }
    }

    std::vector<Polynomial> eqs;
    eqs.reserve(static_cast<std::size_t>(nrows) * (N - r));
    for (int j = 0; j < N - r; ++j) {
        for (int i = 0; i < nrows; ++i) {
            Polynomial acc = AB[i][j];
            for (int k = 0; k < r; ++k) {
                const int xi_index = nx + k * (N - r) + j;
                acc = acc + AB[i][N - r + k] * Polynomial::variable(nv, xi_index);
            }
            eqs.push_back(std::move(acc));
        }
    }
    out.system = PolySystem(nv, std::move(eqs));
    return out;
}

std::vector<std::vector<Polynomial>> generic_symmetric_matrix(int n) {
    const int nv = n * (n + 1) / 2;
    std::vector<std::vector<int>> pos(n, std::vector<int>(n));
    int next = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            pos[i][j] = pos[j][i] = next;
            ++next;
        }
    std::vector<std::vector<Polynomial>> A(n);
    for (int i = 0; i < n; ++i) {
        A[i].reserve(n);
        for (int j = 0; j < n; ++j) A[i].push_back(Polynomial::variable(nv, pos[i][j]));
    }
    return A;
}

RankLocusWitness rank_locus_witness(const std::vector<std::vector<Polynomial>>& A,
                                    int ambient_proj_dim, int r, const WitnessConfig& cfg) {
    RankLocusWitness out;
    const int N = static_cast<int>(A.front().size());
    const HarrisTu ht = harris_tu_degree(N, r);
    out.expected_codim = ht.codim;
    out.expected_degree = ht.degree;
    out.expected_dim = ambient_proj_dim - ht.codim;
    if (out.expected_dim < 0)
        throw std::invalid_argument("rank_locus_witness: expected dimension is negative");

    Rng rng(cfg.solver.seed);
    Rng local = rng.fork(7);
    const RankSystem rs = rank_deficiency_system(A, r, Seed{local.raw()});
    const int nx = rs.nx;

    // random affine chart on the x variables only
    std::vector<Term> chart_terms;
    chart_terms.push_back(
        Term{Monomial(std::vector<int>(rs.system.nvars, 0)), Cplx(-1.0, 0.0)});
    for (int i = 0; i < nx; ++i) {
        std::vector<int> e(rs.system.nvars, 0);
        e[i] = 1;
        chart_terms.push_back(Term{Monomial(std::move(e)), local.unit_complex()});
    }
    std::vector<Polynomial> eqs = rs.system.equations;
    eqs.push_back(Polynomial(rs.system.nvars, std::move(chart_terms)));

    WitnessProblem& problem = out.problem;
    problem.system = PolySystem(rs.system.nvars, std::move(eqs));
    problem.slice_support = rs.x_vars;
    problem.bilinear_split = std::make_pair(rs.x_vars, rs.xi_vars);

    out.decomposition = numerical_decomposition(problem, {out.expected_dim}, cfg);
    for (const WitnessSet& ws : out.decomposition.components) out.observed_degree += ws.degree;

    // properness check: corank of the sliced-problem Jacobian at a witness
    // point equals the expected local dimension
    out.section_proper = false;
    if (!out.decomposition.components.empty() &&
        !out.decomposition.components.front().points.empty()) {
        const Point& w = out.decomposition.components.front().points.front();
        const auto jac = jacobian(problem.system);
        Eigen::MatrixXcd J(problem.system.size(), problem.system.nvars);
        for (int i = 0; i < problem.system.size(); ++i)
            for (int j = 0; j < problem.system.nvars; ++j) J(i, j) = jac[i][j].eval(w);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
        const auto& sv = svd.singularValues();
        int rank_j = 0;
        for (long i = 0; i < sv.size(); ++i)
            if (sv(i) > 1e-8 * sv(0)) ++rank_j;
        out.section_proper = (problem.system.nvars - rank_j) == out.expected_dim;
    }
    return out;
}

RankLocusReport hankel_rank_locus(const HankelSpec& spec, int rank, RankLocusMode mode,
                                  const WitnessConfig& cfg) {
    RankLocusReport rep;
    rep.case_name = "hankel-n" + std::to_string(spec.n) + "d" + std::to_string(spec.d) +
                    "-rank" + std::to_string(rank);
    const HarrisTu ht = harris_tu_degree(spec.size(), rank);
    rep.codim = ht.codim;
    rep.dim = (spec.num_coeffs() - 1) - ht.codim;

    if (mode == RankLocusMode::Formula) {
        rep.mode = "formula";
        rep.degree = ht.degree;
        rep.assumptions = {
            "degree taken from the rank locus of generic symmetric matrices of this size",
            "the Hankel linear section is proper (meets the locus in the expected codimension)"};
        return rep;
    }

    rep.mode = "witness";
    const auto A = build_hankel(spec);
    RankLocusWitness w = rank_locus_witness(A, spec.num_coeffs() - 1, rank, cfg);
    rep.degree = BigInt(w.observed_degree);
    rep.path_counts = w.decomposition.counts;
    rep.paths_tracked =
        rep.path_counts.success + rep.path_counts.divergent + rep.path_counts.failed;
    // linear-product path total: squared rows choose the Xi-linear factor
    const int nxi = rank * (spec.size() - rank);
    const int nvars = spec.num_coeffs() + nxi;
    const int squared_rows = nvars - w.expected_dim;
    rep.paths_total = 0;
    const BigInt total = binomial(squared_rows, nxi);
    if (total <= BigInt(UINT64_MAX)) rep.paths_total = total.convert_to<std::uint64_t>();
    rep.complete = cfg.solver.paths_limit == 0 || rep.paths_tracked >= rep.paths_total;
    if (!rep.complete) rep.assumptions.push_back("sampling mode: path budget truncated the run");
    if (!w.section_proper)
        rep.assumptions.push_back("warning: section codimension check failed or was skipped");
    return rep;
}

}  // namespace sosb
