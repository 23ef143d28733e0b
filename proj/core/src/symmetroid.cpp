#include "sosb/symmetroid.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace sosb {

namespace {

Polynomial poly_det(const std::vector<std::vector<Polynomial>>& m) {
    const int n = static_cast<int>(m.size());
    if (n == 1) return m[0][0];
    Polynomial acc = Polynomial::zero(m[0][0].nvars());
    for (int j = 0; j < n; ++j) {
        std::vector<std::vector<Polynomial>> minor;
        for (int r = 1; r < n; ++r) {
            std::vector<Polynomial> row;
            for (int c = 0; c < n; ++c)
                if (c != j) row.push_back(m[r][c]);
            minor.push_back(std::move(row));
        }
        const Polynomial contrib = m[0][j] * poly_det(minor);
        acc = (j % 2 == 0) ? acc + contrib : acc - contrib;
    }
    return acc;
}

// coefficient vector on the ascending monomial basis of the given degree
Eigen::VectorXcd coeff_vector(const Polynomial& p, const std::vector<Monomial>& basis) {
    Eigen::VectorXcd v(static_cast<long>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) v[static_cast<long>(i)] = p.coefficient(basis[i]);
    return v;
}

// terms of p with exponent `e` on variable `var`, with that variable dropped
Polynomial slice_by_var(const Polynomial& p, int var, int e) {
    std::vector<Term> out;
    for (const Term& t : p.terms()) {
        if (t.mono.exp[var] != e) continue;
        std::vector<int> ex = t.mono.exp;
        ex.erase(ex.begin() + var);
        out.push_back(Term{Monomial(std::move(ex)), t.coeff});
    }
    return Polynomial(p.nvars() - 1, std::move(out));
}

// canonical projective representative: unit 2-norm, largest coordinate
// rotated to the positive real axis
Point projective_normalize(const Point& p) {
    double norm = 0.0;
    std::size_t imax = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        norm += std::norm(p[i]);
        if (std::abs(p[i]) > best) {
            best = std::abs(p[i]);
            imax = i;
        }
    }
    norm = std::sqrt(norm);
    Point out(p.size());
    const Cplx phase = std::abs(p[imax]) > 0 ? std::conj(p[imax]) / std::abs(p[imax]) : Cplx(1.0);
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] * phase / norm;
    return out;
}

double proj_dist(const Point& a, const Point& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// Gauss-Newton polish of a projective gradient zero on its own local chart
Point polish_singular_point(const PolySystem& grads, const Point& p, int iters) {
    const int n = grads.nvars;
    Eigen::VectorXcd x = to_eigen(p);
    const auto jac = jacobian(grads);
    Eigen::VectorXcd chart = x.conjugate() / x.squaredNorm();
    for (int it = 0; it < iters; ++it) {
        Eigen::VectorXcd r(grads.size() + 1);
        Eigen::MatrixXcd J(grads.size() + 1, n);
        const Point xp = from_eigen(x);
        for (int i = 0; i < grads.size(); ++i) {
            r[i] = grads.equations[i].eval(xp);
            for (int j = 0; j < n; ++j) J(i, j) = jac[i][j].eval(xp);
        }
        Cplx dot = 0.0;  // plain bilinear chart <c, x> = 1
        for (int j = 0; j < n; ++j) dot += chart[j] * x[j];
        r[grads.size()] = dot - 1.0;
        for (int j = 0; j < n; ++j) J(grads.size(), j) = chart[j];
        const Eigen::VectorXcd delta = J.colPivHouseholderQr().solve(-r);
        x += delta;
        if (delta.norm() < 1e-14 * std::max(1.0, x.norm())) break;
    }
    return from_eigen(x);
}

std::array<int, 3> transverse_signature(const Eigen::Matrix4d& hess_real,
                                        const Eigen::Vector4d& node) {
    // restrict to the orthogonal complement of the node direction
    Eigen::Matrix4d basis = Eigen::Matrix4d::Identity() - node * node.transpose();
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(basis, Eigen::ComputeFullU);
    Eigen::Matrix<double, 4, 3> W = svd.matrixU().leftCols(3);
    Eigen::Matrix3d T = W.transpose() * hess_real * W;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(T);
    std::array<int, 3> sig{0, 0, 0};
    const double scale = std::max(1e-12, es.eigenvalues().cwiseAbs().maxCoeff());
    for (int i = 0; i < 3; ++i) {
        const double ev = es.eigenvalues()[i];
        if (ev > 1e-8 * scale) sig[0]++;
        else if (ev < -1e-8 * scale) sig[1]++;
        else sig[2]++;
    }
    return sig;
}

}  // namespace

QuarticSurface clr_quartic(double b) {
    const int n = 4;
    Polynomial F = Polynomial::zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            std::vector<int> e(n, 0);
            e[i] = 2;
            e[j] = 2;
            F = F + Polynomial::monomial(Monomial(std::move(e)), 1.0);
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                if (j == i || k == i) continue;
                std::vector<int> e(n, 0);
                e[i] = 2;
                e[j] += 1;
                e[k] += 1;
                F = F + Polynomial::monomial(Monomial(std::move(e)), b);
            }
    F = F + Polynomial::monomial(Monomial({1, 1, 1, 1}), 4.0 * b * b - 4.0 * b - 2.0);
    return QuarticSurface{F};
}

NodeSet find_nodes(const QuarticSurface& S, const SymmetroidConfig& cfg) {
    const Polynomial& F = S.F;
    if (F.nvars() != 4 || !F.is_homogeneous() || F.degree() != 4)
        throw std::invalid_argument("find_nodes: expected a homogeneous quartic in 4 variables");

    Rng rng(cfg.solver.seed);
    Rng local = rng.fork(21);

    PolySystem grads(4, {F.derivative(0), F.derivative(1), F.derivative(2), F.derivative(3)});
    const Point patch = random_patch(4, local);
    const PolySystem charted = with_affine_chart(grads, patch);
    const PolySystem squared = randomize_to_square(charted, 4, Seed{local.raw()});
    const StartSystem start = total_degree_start(squared, Seed{local.raw()});

    SolverConfig scfg = cfg.solver;
    const SolutionSet sol = solve_system(squared, start, nullptr, scfg, &charted);

    NodeSet out;
    out.counts = sol.counts;

    const auto hess_polys = jacobian(grads);  // second partials
    std::vector<Point> reps;
    for (const Point& p : sol.points) {
        Point pol = polish_singular_point(grads, p, 6);
        Point rep = projective_normalize(pol);
        // realify when the representative is essentially real
        double imax = 0.0;
        for (const Cplx& c : rep) imax = std::max(imax, std::abs(c.imag()));
        bool real = imax < 1e-6;
        if (real) {
            double norm = 0.0;
            for (Cplx& c : rep) {
                c = Cplx(c.real(), 0.0);
                norm += c.real() * c.real();
            }
            norm = std::sqrt(norm);
            for (Cplx& c : rep) c /= norm;
        }
        bool dup = false;
        for (const Point& q : reps) {
            Point neg(q.size());
            for (std::size_t i = 0; i < q.size(); ++i) neg[i] = -q[i];
            if (proj_dist(rep, q) <= 1e-6 || proj_dist(rep, neg) <= 1e-6) dup = true;
        }
        if (dup) continue;
        reps.push_back(rep);

        Eigen::Matrix4cd H;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) H(i, j) = hess_polys[i][j].eval(rep);
        Eigen::JacobiSVD<Eigen::Matrix4cd> svd(H);
        int rank = 0;
        const double smax = svd.singularValues()(0);
        for (int i = 0; i < 4; ++i)
            if (svd.singularValues()(i) > cfg.svd_rel_tol * smax) ++rank;
        if (rank <= 2) {
            out.status = NodeStatus::SingularLocusPositiveDim;
            continue;
        }

        Node node;
        node.location = rep;
        node.real = real;
        if (real) {
            Eigen::Matrix4d Hr;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) Hr(i, j) = H(i, j).real();
            Eigen::Vector4d nv;
            for (int i = 0; i < 4; ++i) nv[i] = rep[i].real();
            node.hessian_signature = transverse_signature(Hr, nv);
        }
        out.nodes.push_back(std::move(node));
    }

    std::sort(out.nodes.begin(), out.nodes.end(),
              [](const Node& a, const Node& b) { return canonical_less(a.location, b.location); });
    if (out.status != NodeStatus::SingularLocusPositiveDim &&
        out.nodes.size() != 10)
        out.status = NodeStatus::NotTenNodal;
    return out;
}

NodeChart project_from_node(const QuarticSurface& S, const Node& node,
                            const SymmetroidConfig& cfg) {
    Point loc = node.location;
    for (int attempt = 0;; ++attempt) {
        Eigen::Vector4cd n;
        for (int i = 0; i < 4; ++i) n[i] = node.real ? Cplx(loc[i].real(), 0.0) : loc[i];
        n.normalize();

        // orthonormal completion with n as the last column; real orthogonal
        // when the node is real, unitary otherwise
        int kmax = 0;
        for (int i = 1; i < 4; ++i)
            if (std::abs(n[i]) > std::abs(n[kmax])) kmax = i;
        std::vector<Eigen::Vector4cd> cols;
        for (int i = 0; i < 4; ++i) {
            if (i == kmax) continue;
            Eigen::Vector4cd v = Eigen::Vector4cd::Unit(i);
            v -= n.dot(v) * n;  // n^H v
            for (const auto& c : cols) v -= c.dot(v) * c;
            v.normalize();
            cols.push_back(v);
        }
        Eigen::Matrix4cd Q;
        for (int i = 0; i < 3; ++i) Q.col(i) = cols[i];
        Q.col(3) = n;

        std::vector<Polynomial> images;
        for (int i = 0; i < 4; ++i) {
            Polynomial row = Polynomial::zero(4);
            for (int j = 0; j < 4; ++j)
                row = row + Polynomial::variable(4, j, Q(i, j));
            images.push_back(std::move(row));
        }
        NodeChart chart;
        chart.rotation = Q;
        chart.F_chart = S.F.compose(images);

        const double scale = std::max(1.0, chart.F_chart.max_abs_coeff());
        const double c4 = slice_by_var(chart.F_chart, 3, 4).max_abs_coeff();
        const double c3 = slice_by_var(chart.F_chart, 3, 3).max_abs_coeff();
        if (c4 <= 1e-10 * scale && c3 <= 1e-10 * scale) {
            chart.f = slice_by_var(chart.F_chart, 3, 2);
            chart.g = slice_by_var(chart.F_chart, 3, 1) * Cplx(0.5);
            chart.h = slice_by_var(chart.F_chart, 3, 0);
            return chart;
        }
        if (attempt >= 1)
            throw SymmetroidError("NodeChartResidual",
                                  "x4^3 coefficient stays above tolerance after refinement");
        // refine the node once and retry
        PolySystem grads(4, {S.F.derivative(0), S.F.derivative(1), S.F.derivative(2),
                             S.F.derivative(3)});
        loc = projective_normalize(polish_singular_point(grads, loc, 10));
        double im = 0.0;
        for (const Cplx& c : loc) im = std::max(im, std::abs(c.imag()));
        if (im < 1e-6)
            for (Cplx& c : loc) c = Cplx(c.real(), 0.0);
    }
    (void)cfg;
}

namespace {

// 28 x 10 matrix of multiplication by a ternary cubic
Eigen::MatrixXcd cubic_mult_matrix(const Polynomial& k) {
    const auto cubics = monomials_of_degree(3, 3);
    const auto sextics = monomials_of_degree(3, 6);
    Eigen::MatrixXcd M(sextics.size(), cubics.size());
    for (std::size_t j = 0; j < cubics.size(); ++j) {
        const Polynomial prod = k * Polynomial::monomial(cubics[j], 1.0);
        M.col(static_cast<long>(j)) = coeff_vector(prod, sextics);
    }
    return M;
}

}  // namespace

CubicSplit split_conjugate_cubics(const Polynomial& f, const Polynomial& g,
                                  const Polynomial& h, const SymmetroidConfig& cfg) {
    if (f.nvars() != 3 || g.nvars() != 3 || h.nvars() != 3)
        throw std::invalid_argument("split_conjugate_cubics: expected ternary forms");
    return split_ramification_sextic(f * h - g * g, cfg);
}

CubicSplit split_ramification_sextic(const Polynomial& G, const SymmetroidConfig& cfg) {
    if (G.nvars() != 3 || !G.is_homogeneous() || G.degree() != 6)
        throw std::invalid_argument("split_ramification_sextic: expected a ternary sextic");
    double imag_scale = 0.0;
    for (const Term& t : G.terms()) imag_scale = std::max(imag_scale, std::abs(t.coeff.imag()));
    const bool real_input = imag_scale <= 1e-10 * std::max(1.0, G.max_abs_coeff());

    CubicSplit out;

    // nine nodes of the ramification sextic
    Rng rng(cfg.solver.seed);
    Rng local = rng.fork(22);
    PolySystem grads(3, {G.derivative(0), G.derivative(1), G.derivative(2)});
    const PolySystem charted = with_affine_chart(grads, random_patch(3, local));
    const PolySystem squared = randomize_to_square(charted, 3, Seed{local.raw()});
    const StartSystem start = total_degree_start(squared, Seed{local.raw()});
    const SolutionSet sol = solve_system(squared, start, nullptr, cfg.solver, &charted);

    std::vector<Point> nodes;
    for (const Point& p : sol.points) {
        const Point rep = projective_normalize(polish_singular_point(grads, p, 6));
        bool dup = false;
        for (const Point& q : nodes)
            if (proj_dist(rep, q) <= 1e-6) dup = true;
        if (!dup) nodes.push_back(rep);
    }
    std::sort(nodes.begin(), nodes.end(), canonical_less);
    out.sextic_nodes = nodes;
    if (nodes.size() != 9) {
        out.status = SplitStatus::NotSplitting;
        return out;
    }

    // pencil of cubics through the nine nodes; a real basis when the sextic
    // is real (conjugation-stable node set), a complex one otherwise
    const auto cubics = monomials_of_degree(3, 3);
    Polynomial k1(3), k2(3);
    if (real_input) {
        Eigen::MatrixXd E(2 * nodes.size(), cubics.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            for (std::size_t j = 0; j < cubics.size(); ++j) {
                const Cplx v = Polynomial::monomial(cubics[j], 1.0).eval(nodes[i]);
                E(2 * i, static_cast<long>(j)) = v.real();
                E(2 * i + 1, static_cast<long>(j)) = v.imag();
            }
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(E, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        int nullity = 0;
        for (long i = 0; i < sv.size(); ++i)
            if (sv(i) <= cfg.svd_rel_tol * sv(0)) ++nullity;
        if (nullity != 2) {
            out.status = SplitStatus::NotSplitting;
            return out;
        }
        std::vector<Term> t1, t2;
        for (std::size_t j = 0; j < cubics.size(); ++j) {
            t1.push_back(Term{cubics[j], svd.matrixV()(static_cast<long>(j), 8)});
            t2.push_back(Term{cubics[j], svd.matrixV()(static_cast<long>(j), 9)});
        }
        k1 = Polynomial(3, std::move(t1));
        k2 = Polynomial(3, std::move(t2));
    } else {
        Eigen::MatrixXcd E(nodes.size(), cubics.size());
        for (std::size_t i = 0; i < nodes.size(); ++i)
            for (std::size_t j = 0; j < cubics.size(); ++j)
                E(static_cast<long>(i), static_cast<long>(j)) =
                    Polynomial::monomial(cubics[j], 1.0).eval(nodes[i]);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(E, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        int nullity = static_cast<int>(cubics.size()) - static_cast<int>(sv.size());
        for (long i = 0; i < sv.size(); ++i)
            if (sv(i) <= cfg.svd_rel_tol * sv(0)) ++nullity;
        if (nullity != 2) {
            out.status = SplitStatus::NotSplitting;
            return out;
        }
        std::vector<Term> t1, t2;
        for (std::size_t j = 0; j < cubics.size(); ++j) {
            t1.push_back(Term{cubics[j], svd.matrixV()(static_cast<long>(j), 8)});
            t2.push_back(Term{cubics[j], svd.matrixV()(static_cast<long>(j), 9)});
        }
        k1 = Polynomial(3, std::move(t1));
        k2 = Polynomial(3, std::move(t2));
    }

    // divisibility condition in the pencil parameter: least-squares cofactor
    const auto sextics = monomials_of_degree(3, 6);
    const Eigen::VectorXcd vg = coeff_vector(G, sextics);
    const Eigen::MatrixXcd M1 = cubic_mult_matrix(k1);
    const Eigen::MatrixXcd M2 = cubic_mult_matrix(k2);
    const double gnorm = vg.norm();

    auto residual_at = [&](Cplx t, Eigen::VectorXcd* cof = nullptr) {
        Eigen::MatrixXcd A = M1 + t * M2;
        Eigen::VectorXcd c = A.colPivHouseholderQr().solve(vg);
        if (cof) *cof = c;
        return (A * c - vg).norm() / gnorm;
    };

    // scan circles in the t-plane, then alternate least squares
    std::vector<Cplx> seeds;
    for (double radius : {1.0, 0.25, 4.0}) {
        Cplx best_t;
        double best_r = 1e300;
        for (int i = 0; i < cfg.scan_points; ++i) {
            const double th = 2.0 * 3.14159265358979323846 * i / cfg.scan_points;
            const Cplx t = radius * Cplx(std::cos(th), std::sin(th));
            const double r = residual_at(t);
            if (r < best_r) {
                best_r = r;
                best_t = t;
            }
        }
        seeds.push_back(best_t);
    }

    // joint Gauss-Newton in (cofactor, t) from each scan seed
    Cplx best_t;
    double best_res = 1e300;
    for (Cplx t : seeds) {
        Eigen::VectorXcd c;
        residual_at(t, &c);
        for (int it = 0; it < 40; ++it) {
            Eigen::MatrixXcd J(M1.rows(), 11);
            J.leftCols(10) = M1 + t * M2;
            J.col(10) = M2 * c;
            const Eigen::VectorXcd r = (M1 + t * M2) * c - vg;
            const Eigen::VectorXcd delta = J.colPivHouseholderQr().solve(-r);
            c += delta.head(10);
            t += delta[10];
            if (delta.norm() <= 1e-15 * (1.0 + c.norm() + std::abs(t))) break;
        }
        const double r = residual_at(t);
        if (r < best_res) {
            best_res = r;
            best_t = t;
        }
    }

    out.pencil_root = best_t;
    out.residual = best_res;
    if (best_res > 1e-8) {
        out.status = SplitStatus::NotSplitting;
        return out;
    }

    Polynomial K1 = k1 + k2 * best_t;
    if (real_input) {
        // conjugate pair normalized so that G ~ sign * K1 * conj(K1)
        Polynomial K2 = K1.conjugate_coeffs();
        const Eigen::VectorXcd vk = coeff_vector(K1 * K2, sextics);
        const Cplx lambda = vk.dot(vg) / vk.squaredNorm();
        const double mag = std::sqrt(std::abs(lambda));
        K1 = K1 * mag;
        out.K1 = K1;
        out.K2 = K1.conjugate_coeffs();
        out.sign = lambda.real() >= 0.0 ? 1.0 : -1.0;
        out.status = std::abs(best_t.imag()) > 1e-6 * (1.0 + std::abs(best_t))
                         ? SplitStatus::Ok
                         : SplitStatus::RealSplit;
    } else {
        // complex sextic: the cofactor at the root is the second factor
        Eigen::VectorXcd cof;
        residual_at(best_t, &cof);
        std::vector<Term> terms;
        const auto cubmon = monomials_of_degree(3, 3);
        for (std::size_t j = 0; j < cubmon.size(); ++j)
            terms.push_back(Term{cubmon[j], cof[static_cast<long>(j)]});
        out.K1 = K1;
        out.K2 = Polynomial(3, std::move(terms));
        out.sign = 1.0;
        out.status = SplitStatus::Ok;
    }
    return out;
}

namespace {

// The two surfaces are tangent along the curve, so plain residuals only pin
// points down to sqrt(eps) transversally. Deflate with the gradient
// parallelism conditions and Gauss-Newton to full accuracy.
Point polish_curve_point(const Polynomial& F, const Polynomial& K,
                         const Polynomial& plane, const Point& p) {
    std::vector<Polynomial> eqs = {F, K, plane};
    const auto gf = std::vector<Polynomial>{F.derivative(0), F.derivative(1), F.derivative(2),
                                            F.derivative(3)};
    const auto gk = std::vector<Polynomial>{K.derivative(0), K.derivative(1), K.derivative(2),
                                            K.derivative(3)};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) eqs.push_back(gf[i] * gk[j] - gf[j] * gk[i]);
    PolySystem sys(4, eqs);
    const auto jac = jacobian(sys);

    Eigen::VectorXcd x = to_eigen(p);
    // local affine chart through the point itself
    Eigen::VectorXcd chart = x.conjugate() / x.squaredNorm();
    for (int it = 0; it < 10; ++it) {
        const Point xp = from_eigen(x);
        Eigen::VectorXcd r(sys.size() + 1);
        Eigen::MatrixXcd J(sys.size() + 1, 4);
        for (int i = 0; i < sys.size(); ++i) {
            r[i] = sys.equations[i].eval(xp);
            for (int j = 0; j < 4; ++j) J(i, j) = jac[i][j].eval(xp);
        }
        Cplx dot = 0.0;
        for (int j = 0; j < 4; ++j) dot += chart[j] * x[j];
        r[sys.size()] = dot - 1.0;
        for (int j = 0; j < 4; ++j) J(sys.size(), j) = chart[j];
        const Eigen::VectorXcd delta = J.colPivHouseholderQr().solve(-r);
        x += delta;
        if (delta.norm() <= 1e-15 * std::max(1.0, x.norm())) break;
    }
    return from_eigen(x);
}

}  // namespace

std::vector<Point> sample_curve_points(const Polynomial& F_chart, const Polynomial& K1_lifted,
                                       int count, const SymmetroidConfig& cfg) {
    if (F_chart.nvars() != 4 || K1_lifted.nvars() != 4)
        throw std::invalid_argument("sample_curve_points: expected 4-variable forms");
    Rng rng(cfg.solver.seed);
    Rng local = rng.fork(23);

    SolverConfig scfg = cfg.solver;
    scfg.residual_filter = 1e-7;  // tangential double roots land at sqrt(eps)

    const double fscale = std::max(1.0, F_chart.max_abs_coeff());
    const double kscale = std::max(1.0, K1_lifted.max_abs_coeff());

    std::vector<Point> points;
    const int max_slices = std::max(4, count);
    for (int s = 0; s < max_slices && static_cast<int>(points.size()) < count; ++s) {
        const Polynomial plane = random_linear(4, local, {}, /*with_constant=*/false);
        const Point patch = random_patch(4, local);
        PolySystem sys(4, {F_chart, K1_lifted, plane});
        const PolySystem charted = with_affine_chart(sys, patch);
        const StartSystem start = total_degree_start(charted, Seed{local.raw()});
        const SolutionSet sol = solve_system(charted, start, nullptr, scfg);
        for (const Point& p : sol.points) {
            // the deflated polish helps only on tangential instances; keep
            // whichever point satisfies the pair better
            auto quality = [&](const Point& q) {
                return std::max(std::abs(F_chart.eval(q)) / fscale,
                                std::abs(K1_lifted.eval(q)) / kscale);
            };
            Point cand = polish_curve_point(F_chart, K1_lifted, plane, p);
            const Point rep =
                projective_normalize(quality(cand) <= quality(p) ? cand : p);
            if (std::abs(F_chart.eval(rep)) > 1e-10 * fscale ||
                std::abs(K1_lifted.eval(rep)) > 1e-10 * kscale)
                continue;
            bool dup = false;
            for (const Point& q : points)
                if (proj_dist(rep, q) <= 1e-6) dup = true;
            if (!dup) points.push_back(rep);
        }
    }
    if (static_cast<int>(points.size()) < count)
        throw SymmetroidError("CurveSamplingFailed",
                              "collected " + std::to_string(points.size()) + " of " +
                                  std::to_string(count) + " points");
    points.resize(count);
    return points;
}

CubicBasis cubic_ideal_basis(const std::vector<Point>& points, double svd_rel_tol) {
    if (points.size() < 40)
        throw std::invalid_argument("cubic_ideal_basis: need at least 40 curve points");
    const auto cubics = monomials_of_degree(4, 3);
    Eigen::MatrixXcd A(points.size(), cubics.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < cubics.size(); ++j)
            A(static_cast<long>(i), static_cast<long>(j)) =
                Polynomial::monomial(cubics[j], 1.0).eval(points[i]);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int nullity = 0;
    for (long i = 0; i < sv.size(); ++i)
        if (sv(i) <= svd_rel_tol * sv(0)) ++nullity;
    if (nullity != 4)
        throw SymmetroidError("DegenerateCurve", "cubic nullity is " + std::to_string(nullity) +
                                                     ", expected 4");
    CubicBasis out;
    out.sv_gap = sv(15) / sv(16);
    for (int k = 0; k < 4; ++k) {
        std::vector<Term> terms;
        for (std::size_t j = 0; j < cubics.size(); ++j)
            terms.push_back(Term{cubics[j], svd.matrixV()(static_cast<long>(j), 16 + k)});
        out.g.push_back(Polynomial(4, std::move(terms)));
    }
    return out;
}

namespace {

// orthonormal basis of the column span
Eigen::MatrixXcd orthonormal_span(const Eigen::MatrixXcd& A) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
    return Eigen::MatrixXcd(qr.householderQ()) .leftCols(A.cols());
}

}  // namespace

SyzygyMatrix linear_syzygies(const std::vector<Polynomial>& cubics, double svd_rel_tol) {
    if (cubics.size() != 4)
        throw std::invalid_argument("linear_syzygies: expected four cubics");
    const auto quartics = monomials_of_degree(4, 4);
    Eigen::MatrixXcd A(quartics.size(), 16);
    for (int j = 0; j < 4; ++j)
        for (int v = 0; v < 4; ++v)
            A.col(4 * j + v) = coeff_vector(cubics[j] * Polynomial::variable(4, v), quartics);

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int nullity = 0;
    for (long i = 0; i < sv.size(); ++i)
        if (sv(i) <= svd_rel_tol * sv(0)) ++nullity;
    if (nullity != 3)
        throw SymmetroidError("SyzygyDefect", "syzygy nullity is " + std::to_string(nullity) +
                                                  ", expected 3");
    SyzygyMatrix out;
    for (int r = 0; r < 3; ++r) {
        std::vector<Polynomial> row;
        for (int j = 0; j < 4; ++j) {
            Polynomial form = Polynomial::zero(4);
            for (int v = 0; v < 4; ++v)
                form = form + Polynomial::variable(4, v, svd.matrixV()(4 * j + v, 13 + r));
            row.push_back(std::move(form));
        }
        out.rows.push_back(std::move(row));
    }

    // certificate: the 3x3 minors span the same cubic space
    const auto cubmon = monomials_of_degree(4, 3);
    Eigen::MatrixXcd minors(cubmon.size(), 4), gs(cubmon.size(), 4);
    for (int j = 0; j < 4; ++j) {
        std::vector<std::vector<Polynomial>> sub;
        for (int r = 0; r < 3; ++r) {
            std::vector<Polynomial> row;
            for (int c = 0; c < 4; ++c)
                if (c != j) row.push_back(out.rows[r][c]);
            sub.push_back(std::move(row));
        }
        minors.col(j) = coeff_vector(poly_det(sub), cubmon);
        gs.col(j) = coeff_vector(cubics[j], cubmon);
    }
    const Eigen::MatrixXcd Q1 = orthonormal_span(minors);
    const Eigen::MatrixXcd Q2 = orthonormal_span(gs);
    Eigen::JacobiSVD<Eigen::MatrixXcd> ang(Q1.adjoint() * Q2);
    const double cosmin = std::min(1.0, ang.singularValues().minCoeff());
    out.minor_subspace_angle = std::acos(cosmin);
    return out;
}

std::vector<std::vector<Polynomial>> complete_to_L(const Polynomial& F_chart,
                                                   const std::vector<Polynomial>& cubics,
                                                   const SyzygyMatrix& hb,
                                                   double svd_rel_tol) {
    const auto quartics = monomials_of_degree(4, 4);
    Eigen::MatrixXcd A(quartics.size(), 16);
    for (int j = 0; j < 4; ++j)
        for (int v = 0; v < 4; ++v)
            A.col(4 * j + v) = coeff_vector(cubics[j] * Polynomial::variable(4, v), quartics);
    const Eigen::VectorXcd vf = coeff_vector(F_chart, quartics);
    // the syzygies span the kernel of A; take the minimum-norm solution so
    // no (mathematically invisible) syzygy component pollutes the row scale
    Eigen::JacobiSVD<Eigen::MatrixXcd> lsq(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    lsq.setThreshold(svd_rel_tol);
    const Eigen::VectorXcd c = lsq.solve(vf);
    const double rel = (A * c - vf).norm() / vf.norm();
    if (rel > 1e-8)
        throw SymmetroidError("NotInIdeal",
                              "linear completion residual " + std::to_string(rel));

    std::vector<std::vector<Polynomial>> L;
    std::vector<Polynomial> first;
    for (int j = 0; j < 4; ++j) {
        Polynomial form = Polynomial::zero(4);
        for (int v = 0; v < 4; ++v) form = form + Polynomial::variable(4, v, c[4 * j + v]);
        first.push_back(std::move(form));
    }
    L.push_back(std::move(first));
    for (const auto& row : hb.rows) L.push_back(row);
    return L;
}

double detrep_residual(const std::vector<std::vector<Polynomial>>& M, Cplx scale,
                       const Polynomial& F) {
    const auto quartics = monomials_of_degree(4, 4);
    const Polynomial diff = poly_det(M) - F * scale;
    double num = 0.0;
    for (const Monomial& m : quartics) num = std::max(num, std::abs(diff.coefficient(m)));
    const double den = std::max(1e-300, (F * scale).max_abs_coeff());
    return num / den;
}

DetRep symmetrize(const std::vector<std::vector<Polynomial>>& L, const Polynomial& F,
                  double svd_rel_tol, Seed seed) {
    // coefficient extraction of L entries: L[k][j] = sum_v Lc[k][j][v] y_v
    std::array<std::array<std::array<Cplx, 4>, 4>, 4> Lc{};
    for (int k = 0; k < 4; ++k)
        for (int j = 0; j < 4; ++j)
            for (int v = 0; v < 4; ++v) {
                std::vector<int> e(4, 0);
                e[v] = 1;
                Lc[k][j][v] = L[k][j].coefficient(Monomial(std::move(e)));
            }

    // P L = (P L)^T: for i < j and each variable v,
    // sum_k P(i,k) L(k,j,v) - P(j,k) L(k,i,v) = 0
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(24, 16);
    int row = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            for (int v = 0; v < 4; ++v) {
                for (int k = 0; k < 4; ++k) {
                    A(row, 4 * i + k) += Lc[k][j][v];
                    A(row, 4 * j + k) -= Lc[k][i][v];
                }
                ++row;
            }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int nullity = 0;
    for (long i = 0; i < sv.size(); ++i)
        if (sv(i) <= svd_rel_tol * sv(0)) ++nullity;
    if (nullity < 1) throw SymmetroidError("SymmetrizationFailed", "empty nullspace");

    std::vector<Eigen::Matrix4cd> basis;
    for (int b = 0; b < nullity; ++b) {
        Eigen::Matrix4cd P;
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) P(i, k) = svd.matrixV()(4 * i + k, 16 - nullity + b);
        basis.push_back(P);
    }

    Rng rng(seed);
    Eigen::Matrix4cd bestP = basis[0];
    double best_det = std::abs(basis[0].determinant());
    for (const auto& P : basis) {
        if (std::abs(P.determinant()) > best_det) {
            best_det = std::abs(P.determinant());
            bestP = P;
        }
    }
    if (basis.size() > 1) {
        for (int trial = 0; trial < 50; ++trial) {
            Eigen::Matrix4cd P = Eigen::Matrix4cd::Zero();
            for (const auto& B : basis) P += rng.unit_complex() * B;
            P /= P.norm();
            if (std::abs(P.determinant()) > best_det) {
                best_det = std::abs(P.determinant());
                bestP = P;
            }
        }
    }
    if (best_det <= 1e-8)
        throw SymmetroidError("SymmetrizationFailed",
                              "no nonsingular symmetrizer in the nullspace");

    // M = P L, symmetrized exactly
    std::vector<std::vector<Polynomial>> M(4, std::vector<Polynomial>(4, Polynomial::zero(4)));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Polynomial acc = Polynomial::zero(4);
            for (int k = 0; k < 4; ++k) acc = acc + L[k][j] * bestP(i, k);
            M[i][j] = std::move(acc);
        }
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            const Polynomial avg = (M[i][j] + M[j][i]) * Cplx(0.5);
            M[i][j] = avg;
            M[j][i] = avg;
        }

    DetRep rep;
    const auto quartics = monomials_of_degree(4, 4);
    const Eigen::VectorXcd vf = coeff_vector(F, quartics);
    const Eigen::VectorXcd vd = coeff_vector(poly_det(M), quartics);
    rep.scale = vf.dot(vd) / vf.squaredNorm();
    rep.M = std::move(M);
    rep.residual = detrep_residual(rep.M, rep.scale, F);
    return rep;
}

int qs_jacobian_rank_at(const std::array<Eigen::Matrix4cd, 4>& A) {
    // symbolic pencil M(x) = sum x_i A_i and its cofactors
    std::vector<std::vector<Polynomial>> M(4, std::vector<Polynomial>(4, Polynomial::zero(4)));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Polynomial e = Polynomial::zero(4);
            for (int v = 0; v < 4; ++v)
                if (A[v](i, j) != Cplx(0.0)) e = e + Polynomial::variable(4, v, A[v](i, j));
            M[i][j] = std::move(e);
        }

    const auto quartics = monomials_of_degree(4, 4);
    Eigen::MatrixXcd J(quartics.size(), 40);
    int col = 0;
    for (int v = 0; v < 4; ++v) {
        for (int a = 0; a < 4; ++a) {
            for (int b = a; b < 4; ++b) {
                // cofactor of entry (a, b)
                std::vector<std::vector<Polynomial>> sub;
                for (int r = 0; r < 4; ++r) {
                    if (r == a) continue;
                    std::vector<Polynomial> rw;
                    for (int c = 0; c < 4; ++c)
                        if (c != b) rw.push_back(M[r][c]);
                    sub.push_back(std::move(rw));
                }
                Polynomial cof = poly_det(sub);
                if ((a + b) % 2 == 1) cof = -cof;
                const double mult = a == b ? 1.0 : 2.0;
                J.col(col++) = coeff_vector(
                    cof * Polynomial::variable(4, v, mult), quartics);
            }
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    int rank = 0;
    for (long i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-8 * sv(0)) ++rank;
    return rank;
}

int qs_jacobian_rank(Seed seed) {
    Rng rng(seed);
    std::array<Eigen::Matrix4cd, 4> A;
    for (auto& m : A) {
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) {
                m(i, j) = rng.unit_complex();
                m(j, i) = m(i, j);
            }
    }
    return qs_jacobian_rank_at(A);
}

PipelineResult symmetric_determinantal_representation(const QuarticSurface& S,
                                                      const SymmetroidConfig& cfg,
                                                      int node_index) {
    PipelineResult out;
    out.nodes = find_nodes(S, cfg);
    out.node_index = node_index;
    if (out.nodes.status == NodeStatus::SingularLocusPositiveDim) {
        out.failure = "SingularLocusPositiveDim";
        return out;
    }
    if (out.nodes.status == NodeStatus::NotTenNodal) {
        out.failure = "NotTenNodal";
        return out;
    }
    if (node_index < 0 || node_index >= static_cast<int>(out.nodes.nodes.size())) {
        out.failure = "NodeIndexOutOfRange";
        return out;
    }

    try {
        const NodeChart chart = project_from_node(S, out.nodes.nodes[node_index], cfg);
        out.split = split_conjugate_cubics(chart.f, chart.g, chart.h, cfg);
        if (out.split.status == SplitStatus::NotSplitting) {
            out.failure = "NotSplitting";
            return out;
        }
        const Polynomial K1_lift = out.split.K1.embed(4, {0, 1, 2});
        const std::vector<Point> pts =
            sample_curve_points(chart.F_chart, K1_lift, cfg.curve_points, cfg);
        const CubicBasis cb = cubic_ideal_basis(pts, cfg.svd_rel_tol);
        out.sv_gap = cb.sv_gap;
        const SyzygyMatrix hb = linear_syzygies(cb.g, cfg.svd_rel_tol);
        const auto L = complete_to_L(chart.F_chart, cb.g, hb, cfg.svd_rel_tol);
        Rng rng(cfg.solver.seed);
        DetRep chart_rep = symmetrize(L, chart.F_chart, cfg.svd_rel_tol, Seed{rng.fork(24).raw()});

        // rotate back: y = Q^H x (Q unitary; plain transpose in the real case)
        std::vector<Polynomial> images;
        for (int i = 0; i < 4; ++i) {
            Polynomial row = Polynomial::zero(4);
            for (int j = 0; j < 4; ++j)
                row = row + Polynomial::variable(4, j, std::conj(chart.rotation(j, i)));
            images.push_back(std::move(row));
        }
        DetRep rep;
        rep.M.assign(4, std::vector<Polynomial>(4, Polynomial::zero(4)));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) rep.M[i][j] = chart_rep.M[i][j].compose(images);
        const auto quartics = monomials_of_degree(4, 4);
        const Eigen::VectorXcd vf = coeff_vector(S.F, quartics);
        const Eigen::VectorXcd vd = coeff_vector(poly_det(rep.M), quartics);
        rep.scale = vf.dot(vd) / vf.squaredNorm();
        rep.residual = detrep_residual(rep.M, rep.scale, S.F);
        out.detrep = std::move(rep);
        out.ok = out.detrep.residual < 1e-8;
        if (!out.ok) out.failure = "CertificateResidual";
    } catch (const SymmetroidError& e) {
        out.failure = e.tag;
        return out;
    }
    return out;
}

std::vector<std::vector<Polynomial>> reference_detrep_matrix() {
    const Cplx w(0.0, 2.0 * std::sqrt(10.0) / 7.0);
    auto lin = [&](std::initializer_list<std::pair<int, Cplx>> entries) {
        Polynomial p = Polynomial::zero(4);
        for (const auto& [var, c] : entries) p = p + Polynomial::variable(4, var, c);
        return p;
    };
    auto c = [&](double a, double b) { return a * w + b; };

    std::vector<std::vector<Polynomial>> M(4, std::vector<Polynomial>(4));
    M[0][0] = lin({{0, c(-11844, 8100)}, {2, c(3024, 13140)}});
    M[0][1] = lin({{2, c(7980, 14820)}});
    M[0][2] = lin({{0, c(19971, -17460)}, {2, c(4494, 9600)}});
    M[0][3] = lin({{2, c(-1596, -26790)}, {3, c(15561, -6840)}});
    M[1][1] = lin({{1, c(30324, -7220)}, {2, c(20216, 21660)}});
    M[1][2] = lin({{1, c(20216, 21660)}, {2, c(6384, 27740)}});
    M[1][3] = lin({{1, c(-20216, -21660)}, {2, c(0, -39710)}, {3, c(7581, -21660)}});
    M[2][2] = lin({{0, c(-13230, 31860)}, {1, c(0, 39710)}, {2, c(-28910, 29910)}});
    M[2][3] = lin({{1, c(0, -39710)}, {2, c(25004, -17100)}, {3, c(5187.0 / 2.0, -1140)}});
    M[3][3] = lin({{1, c(0, 39710)}, {2, c(-20216, 37905)}, {3, c(-30324, 27075)}});
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < i; ++j) M[i][j] = M[j][i];
    return M;
}

Cplx reference_detrep_scale() {
    const Cplx w(0.0, 2.0 * std::sqrt(10.0) / 7.0);
    return -54874315598400.0 * (735.0 * w + 2201.0);
}

}  // namespace sosb
