#include "sosb/intpoly.hpp"

#include <algorithm>
#include <numeric>

namespace sosb {

namespace {

void check_budget(std::size_t have, std::size_t budget, const char* where) {
    if (budget > 0 && have > budget)
        throw BlowUpError(std::string("exact elimination exceeded its term budget in ") +
                          where);
}

}  // namespace

ZPoly::ZPoly(int nvars, std::vector<ZTerm> terms) : nvars_(nvars), terms_(std::move(terms)) {
    for (const ZTerm& t : terms_) {
        if (t.mono.nvars() != nvars_) throw std::invalid_argument("ZPoly: arity mismatch");
        for (int e : t.mono.exp)
            if (e < 0) throw std::invalid_argument("ZPoly: negative exponent");
    }
    normalize();
}

void ZPoly::normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const ZTerm& a, const ZTerm& b) { return a.mono < b.mono; });
    std::vector<ZTerm> out;
    out.reserve(terms_.size());
    for (ZTerm& t : terms_) {
        if (!out.empty() && out.back().mono == t.mono)
            out.back().coeff += t.coeff;
        else
            out.push_back(std::move(t));
    }
    std::erase_if(out, [](const ZTerm& t) { return t.coeff == 0; });
    terms_ = std::move(out);
}

ZPoly ZPoly::constant(int nvars, BigInt c) {
    return ZPoly(nvars, {ZTerm{Monomial(std::vector<int>(nvars, 0)), std::move(c)}});
}

ZPoly ZPoly::variable(int nvars, int index) {
    std::vector<int> e(nvars, 0);
    e.at(index) = 1;
    return ZPoly(nvars, {ZTerm{Monomial(std::move(e)), 1}});
}

int ZPoly::degree_in(int var) const {
    int d = 0;
    for (const ZTerm& t : terms_) d = std::max(d, t.mono.exp[var]);
    return d;
}

int ZPoly::total_degree() const {
    int d = -1;
    for (const ZTerm& t : terms_) d = std::max(d, t.mono.degree());
    return d;
}

BigInt ZPoly::coefficient(const Monomial& m) const {
    for (const ZTerm& t : terms_)
        if (t.mono == m) return t.coeff;
    return 0;
}

ZPoly ZPoly::coeff_of(int var, int k) const {
    std::vector<ZTerm> out;
    for (const ZTerm& t : terms_) {
        if (t.mono.exp[var] != k) continue;
        ZTerm s = t;
        s.mono.exp[var] = 0;
        out.push_back(std::move(s));
    }
    return ZPoly(nvars_, std::move(out));
}

ZPoly ZPoly::substitute_int(int var, const BigInt& value) const {
    std::vector<ZTerm> out;
    for (const ZTerm& t : terms_) {
        ZTerm s = t;
        for (int e = t.mono.exp[var]; e > 0; --e) s.coeff *= value;
        s.mono.exp[var] = 0;
        out.push_back(std::move(s));
    }
    return ZPoly(nvars_, std::move(out));
}

ZPoly ZPoly::compose_linear_int(const std::vector<std::vector<BigInt>>& images) const {
    if (static_cast<int>(images.size()) != nvars_)
        throw std::invalid_argument("ZPoly::compose_linear_int: image count mismatch");
    std::vector<ZPoly> lins;
    lins.reserve(nvars_);
    for (const auto& row : images) {
        if (static_cast<int>(row.size()) != nvars_)
            throw std::invalid_argument("ZPoly::compose_linear_int: row size mismatch");
        std::vector<ZTerm> ts;
        for (int j = 0; j < nvars_; ++j) {
            if (row[j] == 0) continue;
            std::vector<int> e(nvars_, 0);
            e[j] = 1;
            ts.push_back(ZTerm{Monomial(std::move(e)), row[j]});
        }
        lins.emplace_back(nvars_, std::move(ts));
    }
    ZPoly acc(nvars_);
    for (const ZTerm& t : terms_) {
        ZPoly prod = ZPoly::constant(nvars_, t.coeff);
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < t.mono.exp[i]; ++k) prod = prod * lins[i];
        acc = acc + prod;
    }
    return acc;
}

BigInt ZPoly::int_content() const {
    BigInt g = 0;
    for (const ZTerm& t : terms_) {
        g = boost::multiprecision::gcd(g, t.coeff);
        if (g == 1) break;
    }
    return g;
}

ZPoly ZPoly::divide_by_int(const BigInt& c) const {
    if (c == 0) throw std::invalid_argument("ZPoly::divide_by_int: zero divisor");
    std::vector<ZTerm> out = terms_;
    for (ZTerm& t : out) {
        if (t.coeff % c != 0) throw std::logic_error("ZPoly::divide_by_int: not exact");
        t.coeff /= c;
    }
    return ZPoly(nvars_, std::move(out));
}

ZPoly ZPoly::primitive_int() const {
    const BigInt c = int_content();
    if (c == 0 || c == 1) return *this;
    return divide_by_int(c);
}

ZPoly ZPoly::operator-() const {
    std::vector<ZTerm> out = terms_;
    for (ZTerm& t : out) t.coeff = -t.coeff;
    return ZPoly(nvars_, std::move(out));
}

ZPoly ZPoly::operator+(const ZPoly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("ZPoly+: arity mismatch");
    std::vector<ZTerm> out = terms_;
    out.insert(out.end(), o.terms_.begin(), o.terms_.end());
    return ZPoly(nvars_, std::move(out));
}

ZPoly ZPoly::operator-(const ZPoly& o) const { return *this + (-o); }

ZPoly ZPoly::operator*(const ZPoly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("ZPoly*: arity mismatch");
    std::vector<ZTerm> out;
    out.reserve(terms_.size() * o.terms_.size());
    for (const ZTerm& a : terms_) {
        for (const ZTerm& b : o.terms_) {
            std::vector<int> e(nvars_);
            for (int i = 0; i < nvars_; ++i) e[i] = a.mono.exp[i] + b.mono.exp[i];
            out.push_back(ZTerm{Monomial(std::move(e)), a.coeff * b.coeff});
        }
    }
    return ZPoly(nvars_, std::move(out));
}

ZPoly ZPoly::operator*(const BigInt& c) const {
    if (c == 0) return ZPoly(nvars_);
    std::vector<ZTerm> out = terms_;
    for (ZTerm& t : out) t.coeff *= c;
    return ZPoly(nvars_, std::move(out));
}

ZPoly exact_divide(const ZPoly& num, const ZPoly& den) {
    if (den.is_zero()) throw std::invalid_argument("exact_divide: zero divisor");
    if (num.is_zero()) return ZPoly(num.nvars());
    const int nv = num.nvars();
    ZPoly rem = num;
    std::vector<ZTerm> quot;
    const ZTerm& dlead = den.terms().back();  // largest in the global order
    while (!rem.is_zero()) {
        const ZTerm& rlead = rem.terms().back();
        std::vector<int> e(nv);
        for (int i = 0; i < nv; ++i) {
            e[i] = rlead.mono.exp[i] - dlead.mono.exp[i];
            if (e[i] < 0) throw std::logic_error("exact_divide: division is not exact");
        }
        if (rlead.coeff % dlead.coeff != 0)
            throw std::logic_error("exact_divide: division is not exact");
        ZTerm t{Monomial(std::move(e)), rlead.coeff / dlead.coeff};
        rem = rem - den * ZPoly(nv, {t});
        quot.push_back(std::move(t));
    }
    return ZPoly(nv, std::move(quot));
}

namespace {

// fraction-free determinant with row pivoting
ZPoly bareiss_det(std::vector<std::vector<ZPoly>> m, std::size_t budget) {
    const int n = static_cast<int>(m.size());
    if (n == 0) return ZPoly(0);
    const int nv = m[0][0].nvars();
    int sign = 1;
    ZPoly prev = ZPoly::constant(nv, 1);
    for (int k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            int swap = -1;
            for (int i = k + 1; i < n; ++i)
                if (!m[i][k].is_zero()) { swap = i; break; }
            if (swap < 0) return ZPoly(nv);
            std::swap(m[k], m[swap]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                ZPoly num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                check_budget(num.term_count(), budget, "bareiss");
                m[i][j] = exact_divide(num, prev);
            }
            m[i][k] = ZPoly(nv);
        }
        prev = m[k][k];
    }
    ZPoly det = m[n - 1][n - 1];
    return sign < 0 ? -det : det;
}

BigInt bareiss_det_int(std::vector<std::vector<BigInt>> m) {
    const int n = static_cast<int>(m.size());
    if (n == 0) return 1;
    int sign = 1;
    BigInt prev = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            int swap = -1;
            for (int i = k + 1; i < n; ++i)
                if (m[i][k] != 0) { swap = i; break; }
            if (swap < 0) return 0;
            std::swap(m[k], m[swap]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                const BigInt num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                m[i][j] = num / prev;  // exact by the Bareiss identity
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign < 0 ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

std::vector<std::vector<ZPoly>> sylvester_matrix(const ZPoly& f, const ZPoly& g, int var) {
    const int df = f.degree_in(var);
    const int dg = g.degree_in(var);
    const int n = df + dg;
    const int nv = f.nvars();
    std::vector<ZPoly> fc(df + 1), gc(dg + 1);
    for (int i = 0; i <= df; ++i) fc[i] = f.coeff_of(var, i);
    for (int i = 0; i <= dg; ++i) gc[i] = g.coeff_of(var, i);
    std::vector<std::vector<ZPoly>> m(n, std::vector<ZPoly>(n, ZPoly(nv)));
    for (int r = 0; r < dg; ++r)
        for (int i = 0; i <= df; ++i) m[r][r + df - i] = fc[i];
    for (int r = 0; r < df; ++r)
        for (int i = 0; i <= dg; ++i) m[dg + r][r + dg - i] = gc[i];
    return m;
}

// variables with positive degree in f or g, excluding `var`
std::vector<int> other_vars(const ZPoly& f, const ZPoly& g, int var) {
    std::vector<int> out;
    for (int v = 0; v < f.nvars(); ++v) {
        if (v == var) continue;
        if (f.degree_in(v) > 0 || g.degree_in(v) > 0) out.push_back(v);
    }
    return out;
}

BigInt int_pow_big(BigInt b, int e) {
    BigInt r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// resultant by evaluation at integers of the single remaining variable and
// exact Lagrange interpolation
ZPoly resultant_interpolate(const ZPoly& f, const ZPoly& g, int var, int v,
                            std::size_t budget) {
    const int df = f.degree_in(var), dg = g.degree_in(var);
    const int bound = df * g.degree_in(v) + dg * f.degree_in(v);
    const int npts = bound + 1;
    check_budget(static_cast<std::size_t>(npts), budget, "interpolation");

    std::vector<ZPoly> fc(df + 1), gc(dg + 1);
    for (int i = 0; i <= df; ++i) fc[i] = f.coeff_of(var, i);
    for (int i = 0; i <= dg; ++i) gc[i] = g.coeff_of(var, i);

    std::vector<BigInt> xs(npts), ys(npts);
    for (int p = 0; p < npts; ++p) {
        const BigInt t = (p % 2 == 0) ? BigInt(p / 2) : BigInt(-(p / 2 + 1));
        xs[p] = t;
        const int n = df + dg;
        std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n, 0));
        auto at = [&](const ZPoly& c) {
            BigInt acc = 0;
            for (const ZTerm& term : c.terms()) acc += term.coeff * int_pow_big(t, term.mono.exp[v]);
            return acc;
        };
        std::vector<BigInt> fv(df + 1), gv(dg + 1);
        for (int i = 0; i <= df; ++i) fv[i] = at(fc[i]);
        for (int i = 0; i <= dg; ++i) gv[i] = at(gc[i]);
        for (int r = 0; r < dg; ++r)
            for (int i = 0; i <= df; ++i) m[r][r + df - i] = fv[i];
        for (int r = 0; r < df; ++r)
            for (int i = 0; i <= dg; ++i) m[dg + r][r + dg - i] = gv[i];
        ys[p] = bareiss_det_int(std::move(m));
    }

    // Lagrange interpolation with exact rationals
    std::vector<BigRat> acc(npts, BigRat(0));
    for (int i = 0; i < npts; ++i) {
        if (ys[i] == 0) continue;
        std::vector<BigRat> basis = {BigRat(1)};
        BigRat denom(1);
        for (int j = 0; j < npts; ++j) {
            if (j == i) continue;
            basis.push_back(BigRat(0));
            for (int d = static_cast<int>(basis.size()) - 1; d > 0; --d)
                basis[d] = basis[d - 1] - BigRat(xs[j]) * basis[d];
            basis[0] = -BigRat(xs[j]) * basis[0];
            denom *= BigRat(xs[i] - xs[j]);
        }
        const BigRat scale = BigRat(ys[i]) / denom;
        for (std::size_t d = 0; d < basis.size(); ++d) acc[d] += basis[d] * scale;
    }
    std::vector<ZTerm> out;
    const int nv = f.nvars();
    for (int d = 0; d < npts; ++d) {
        if (acc[d] == 0) continue;
        if (boost::multiprecision::denominator(acc[d]) != 1)
            throw std::logic_error("resultant_interpolate: non-integer coefficient");
        std::vector<int> e(nv, 0);
        e[v] = d;
        out.push_back(ZTerm{Monomial(std::move(e)), boost::multiprecision::numerator(acc[d])});
    }
    return ZPoly(nv, std::move(out));
}

}  // namespace

ZPoly resultant(const ZPoly& f, const ZPoly& g, int var, std::size_t term_budget) {
    const int df = f.degree_in(var), dg = g.degree_in(var);
    const int nv = f.nvars();
    if (f.is_zero() || g.is_zero()) return ZPoly(nv);
    if (df == 0 && dg == 0)
        throw std::invalid_argument("resultant: neither input involves the variable");
    if (df == 0) {
        ZPoly r = ZPoly::constant(nv, 1);
        for (int i = 0; i < dg; ++i) {
            r = r * f;
            check_budget(r.term_count(), term_budget, "resultant power");
        }
        return r;
    }
    if (dg == 0) {
        ZPoly r = ZPoly::constant(nv, 1);
        for (int i = 0; i < df; ++i) {
            r = r * g;
            check_budget(r.term_count(), term_budget, "resultant power");
        }
        return r;
    }
    const std::vector<int> rest = other_vars(f, g, var);
    if (rest.size() == 1) return resultant_interpolate(f, g, var, rest[0], term_budget);
    return bareiss_det(sylvester_matrix(f, g, var), term_budget);
}

namespace {

ZPoly derivative_int(const ZPoly& f, int var) {
    std::vector<ZTerm> out;
    for (const ZTerm& t : f.terms()) {
        const int e = t.mono.exp[var];
        if (e == 0) continue;
        ZTerm d = t;
        d.coeff *= e;
        d.mono.exp[var] = e - 1;
        out.push_back(std::move(d));
    }
    return ZPoly(f.nvars(), std::move(out));
}

// pseudo-remainder of a by b in `var`
ZPoly prem(ZPoly a, const ZPoly& b, int var) {
    const int db = b.degree_in(var);
    const ZPoly lcb = b.coeff_of(var, db);
    int e = a.degree_in(var) - db + 1;
    while (!a.is_zero() && a.degree_in(var) >= db) {
        const int da = a.degree_in(var);
        const ZPoly lca = a.coeff_of(var, da);
        ZPoly shift = ZPoly::constant(a.nvars(), 1);
        for (int i = 0; i < da - db; ++i) shift = shift * ZPoly::variable(a.nvars(), var);
        a = a * lcb - b * (lca * shift);
        --e;
    }
    while (e-- > 0) a = a * lcb;
    return a;
}

}  // namespace

ZPoly gcd_univariate(const ZPoly& a, const ZPoly& b, int var) {
    ZPoly x = a.primitive_int(), y = b.primitive_int();
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    if (x.degree_in(var) < y.degree_in(var)) std::swap(x, y);
    while (!y.is_zero()) {
        ZPoly r = prem(x, y, var).primitive_int();
        x = std::move(y);
        y = std::move(r);
        if (y.degree_in(var) == 0 && !y.is_zero()) return ZPoly::constant(a.nvars(), 1);
    }
    return x;
}

ZPoly squarefree_part_univariate(const ZPoly& f, int var) {
    const ZPoly pp = f.primitive_int();
    if (pp.is_zero() || pp.degree_in(var) == 0) return pp;
    const ZPoly g = gcd_univariate(pp, derivative_int(pp, var), var);
    if (g.degree_in(var) == 0) return pp;
    // both primitive, so the quotient stays integral
    return exact_divide(pp, g).primitive_int();
}

}  // namespace sosb
