#include "sosb/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sosb {

int Monomial::degree() const {
    return std::accumulate(exp.begin(), exp.end(), 0);
}

bool Monomial::operator<(const Monomial& o) const {
    const int da = degree(), db = o.degree();
    if (da != db) return da < db;
    return std::lexicographical_compare(exp.begin(), exp.end(), o.exp.begin(), o.exp.end());
}

Polynomial::Polynomial(int nvars, std::vector<Term> terms)
    : nvars_(nvars), terms_(std::move(terms)) {
    for (const Term& t : terms_) {
        if (t.mono.nvars() != nvars_)
            throw std::invalid_argument("Polynomial: monomial arity mismatch");
        for (int e : t.mono.exp)
            if (e < 0) throw std::invalid_argument("Polynomial: negative exponent");
    }
    normalize();
}

void Polynomial::normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.mono < b.mono; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const Term& t : terms_) {
        if (!out.empty() && out.back().mono == t.mono)
            out.back().coeff += t.coeff;
        else
            out.push_back(t);
    }
    std::erase_if(out, [](const Term& t) { return t.coeff == Cplx(0.0, 0.0); });
    terms_ = std::move(out);
}

Polynomial Polynomial::constant(int nvars, Cplx c) {
    return Polynomial(nvars, {Term{Monomial(std::vector<int>(nvars, 0)), c}});
}

Polynomial Polynomial::variable(int nvars, int index, Cplx scale) {
    std::vector<int> e(nvars, 0);
    e.at(index) = 1;
    return Polynomial(nvars, {Term{Monomial(std::move(e)), scale}});
}

Polynomial Polynomial::monomial(Monomial m, Cplx c) {
    const int n = m.nvars();
    return Polynomial(n, {Term{std::move(m), c}});
}

int Polynomial::degree() const {
    int d = -1;
    for (const Term& t : terms_) d = std::max(d, t.mono.degree());
    return d;
}

bool Polynomial::is_homogeneous() const {
    if (terms_.empty()) return true;
    const int d = terms_.front().mono.degree();
    for (const Term& t : terms_)
        if (t.mono.degree() != d) return false;
    return true;
}

Cplx Polynomial::coefficient(const Monomial& m) const {
    for (const Term& t : terms_)
        if (t.mono == m) return t.coeff;
    return {0.0, 0.0};
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (const Term& t : terms_) m = std::max(m, std::abs(t.coeff));
    return m;
}

namespace {
Cplx int_pow(Cplx b, int e) {
    Cplx r(1.0, 0.0);
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}
}  // namespace

Cplx Polynomial::eval_ptr(const Cplx* x) const {
    Cplx acc(0.0, 0.0);
    for (const Term& t : terms_) {
        Cplx m = t.coeff;
        for (int i = 0; i < nvars_; ++i)
            if (t.mono.exp[i] != 0) m *= int_pow(x[i], t.mono.exp[i]);
        acc += m;
    }
    return acc;
}

Cplx Polynomial::eval(const Point& point) const {
    if (static_cast<int>(point.size()) != nvars_)
        throw std::invalid_argument("Polynomial::eval: point dimension mismatch");
    return eval_ptr(point.data());
}

Polynomial Polynomial::derivative(int var) const {
    if (var < 0 || var >= nvars_)
        throw std::invalid_argument("Polynomial::derivative: bad variable index");
    std::vector<Term> out;
    for (const Term& t : terms_) {
        const int e = t.mono.exp[var];
        if (e == 0) continue;
        Term d = t;
        d.coeff *= static_cast<double>(e);
        d.mono.exp[var] = e - 1;
        out.push_back(std::move(d));
    }
    return Polynomial(nvars_, std::move(out));
}

Polynomial Polynomial::conjugate_coeffs() const {
    std::vector<Term> out = terms_;
    for (Term& t : out) t.coeff = std::conj(t.coeff);
    return Polynomial(nvars_, std::move(out));
}

Polynomial Polynomial::homogenize(int new_var_index) const {
    if (new_var_index < 0 || new_var_index > nvars_)
        throw std::invalid_argument("homogenize: bad insertion index");
    const int d = degree();
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const Term& t : terms_) {
        std::vector<int> e;
        e.reserve(nvars_ + 1);
        e.insert(e.end(), t.mono.exp.begin(), t.mono.exp.begin() + new_var_index);
        e.push_back(d - t.mono.degree());
        e.insert(e.end(), t.mono.exp.begin() + new_var_index, t.mono.exp.end());
        out.push_back(Term{Monomial(std::move(e)), t.coeff});
    }
    return Polynomial(nvars_ + 1, std::move(out));
}

Polynomial Polynomial::dehomogenize(const Point& patch) const {
    if (static_cast<int>(patch.size()) != nvars_)
        throw std::invalid_argument("dehomogenize: patch dimension mismatch");
    int pivot = -1;
    double best = 0.0;
    for (int i = 0; i < nvars_; ++i) {
        if (std::abs(patch[i]) > best) {
            best = std::abs(patch[i]);
            pivot = i;
        }
    }
    if (pivot < 0) throw std::invalid_argument("dehomogenize: zero patch vector");

    // x_pivot = (1 - sum_{i != pivot} patch_i x_i) / patch_pivot
    const int m = nvars_ - 1;
    std::vector<Term> lin;
    lin.push_back(Term{Monomial(std::vector<int>(m, 0)), Cplx(1.0, 0.0) / patch[pivot]});
    int j = 0;
    for (int i = 0; i < nvars_; ++i) {
        if (i == pivot) continue;
        std::vector<int> e(m, 0);
        e[j] = 1;
        lin.push_back(Term{Monomial(std::move(e)), -patch[i] / patch[pivot]});
        ++j;
    }
    const Polynomial pivot_image(m, std::move(lin));

    std::vector<Polynomial> images;
    images.reserve(nvars_);
    j = 0;
    for (int i = 0; i < nvars_; ++i) {
        if (i == pivot)
            images.push_back(pivot_image);
        else
            images.push_back(Polynomial::variable(m, j++));
    }
    return compose(images);
}

Polynomial Polynomial::substitute(int var, Cplx value) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const Term& t : terms_) {
        Term s = t;
        const int e = s.mono.exp[var];
        if (e != 0) {
            s.coeff *= int_pow(value, e);
            s.mono.exp[var] = 0;
        }
        out.push_back(std::move(s));
    }
    return Polynomial(nvars_, std::move(out));
}

Polynomial Polynomial::substitute_and_drop(int var, Cplx value) const {
    const Polynomial sub = substitute(var, value);
    std::vector<Term> out;
    out.reserve(sub.terms_.size());
    for (const Term& t : sub.terms_) {
        std::vector<int> e = t.mono.exp;
        e.erase(e.begin() + var);
        out.push_back(Term{Monomial(std::move(e)), t.coeff});
    }
    return Polynomial(nvars_ - 1, std::move(out));
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& images) const {
    if (static_cast<int>(images.size()) != nvars_)
        throw std::invalid_argument("compose: wrong number of images");
    const int m = images.empty() ? 0 : images.front().nvars();
    for (const Polynomial& p : images)
        if (p.nvars() != m) throw std::invalid_argument("compose: image arity mismatch");
    Polynomial acc = Polynomial::zero(m);
    for (const Term& t : terms_) {
        Polynomial prod = Polynomial::constant(m, t.coeff);
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < t.mono.exp[i]; ++k) prod = prod * images[i];
        acc = acc + prod;
    }
    return acc;
}

Polynomial Polynomial::embed(int new_nvars, const std::vector<int>& map) const {
    if (static_cast<int>(map.size()) != nvars_)
        throw std::invalid_argument("embed: map size mismatch");
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const Term& t : terms_) {
        std::vector<int> e(new_nvars, 0);
        for (int i = 0; i < nvars_; ++i) e.at(map[i]) += t.mono.exp[i];
        out.push_back(Term{Monomial(std::move(e)), t.coeff});
    }
    return Polynomial(new_nvars, std::move(out));
}

Polynomial Polynomial::operator-() const {
    std::vector<Term> out = terms_;
    for (Term& t : out) t.coeff = -t.coeff;
    return Polynomial(nvars_, std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("Polynomial+: arity mismatch");
    std::vector<Term> out = terms_;
    out.insert(out.end(), o.terms_.begin(), o.terms_.end());
    return Polynomial(nvars_, std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("Polynomial*: arity mismatch");
    std::vector<Term> out;
    out.reserve(terms_.size() * o.terms_.size());
    for (const Term& a : terms_) {
        for (const Term& b : o.terms_) {
            std::vector<int> e(nvars_);
            for (int i = 0; i < nvars_; ++i) e[i] = a.mono.exp[i] + b.mono.exp[i];
            out.push_back(Term{Monomial(std::move(e)), a.coeff * b.coeff});
        }
    }
    return Polynomial(nvars_, std::move(out));
}

Polynomial Polynomial::operator*(Cplx c) const {
    std::vector<Term> out = terms_;
    for (Term& t : out) t.coeff *= c;
    return Polynomial(nvars_, std::move(out));
}

std::string Polynomial::to_string(const std::string& var_prefix) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const Term& t : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << t.coeff.real();
        if (t.coeff.imag() != 0.0) os << (t.coeff.imag() < 0 ? "" : "+") << t.coeff.imag() << "i";
        os << ")";
        for (int i = 0; i < nvars_; ++i) {
            if (t.mono.exp[i] == 0) continue;
            os << "*" << var_prefix << i;
            if (t.mono.exp[i] > 1) os << "^" << t.mono.exp[i];
        }
    }
    return os.str();
}

PolySystem::PolySystem(int n, std::vector<Polynomial> eqs)
    : nvars(n), equations(std::move(eqs)) {
    for (const Polynomial& p : equations)
        if (p.nvars() != nvars)
            throw std::invalid_argument("PolySystem: equation arity mismatch");
}

Point PolySystem::eval(const Point& point) const {
    Point out;
    out.reserve(equations.size());
    for (const Polynomial& p : equations) out.push_back(p.eval(point));
    return out;
}

double PolySystem::residual_inf(const Point& point) const {
    double r = 0.0;
    for (const Polynomial& p : equations) r = std::max(r, std::abs(p.eval(point)));
    return r;
}

std::vector<std::vector<Polynomial>> jacobian(const PolySystem& sys) {
    std::vector<std::vector<Polynomial>> jac(sys.equations.size());
    for (std::size_t i = 0; i < sys.equations.size(); ++i) {
        jac[i].reserve(sys.nvars);
        for (int j = 0; j < sys.nvars; ++j) jac[i].push_back(sys.equations[i].derivative(j));
    }
    return jac;
}

namespace {
void enumerate_rec(int nvars, int pos, int remaining, std::vector<int>& cur,
                   std::vector<Monomial>& out) {
    if (pos == nvars - 1) {
        cur[pos] = remaining;
        out.emplace_back(cur);
        return;
    }
    for (int e = 0; e <= remaining; ++e) {
        cur[pos] = e;
        enumerate_rec(nvars, pos + 1, remaining - e, cur, out);
    }
}
}  // namespace

std::vector<Monomial> monomials_of_degree(int nvars, int degree) {
    if (nvars <= 0) throw std::invalid_argument("monomials_of_degree: nvars must be positive");
    std::vector<Monomial> out;
    std::vector<int> cur(nvars, 0);
    enumerate_rec(nvars, 0, degree, cur, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Monomial> monomials_up_to_degree(int nvars, int degree) {
    std::vector<Monomial> out;
    for (int d = 0; d <= degree; ++d) {
        auto layer = monomials_of_degree(nvars, d);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

Polynomial random_poly(int nvars, int degree, bool dense, Rng& rng) {
    if (degree < 0) throw std::invalid_argument("random_poly: negative degree");
    const std::vector<Monomial> monos =
        dense ? monomials_up_to_degree(nvars, degree) : monomials_of_degree(nvars, degree);
    std::vector<Term> terms;
    terms.reserve(monos.size());
    for (const Monomial& m : monos) terms.push_back(Term{m, rng.unit_complex()});
    return Polynomial(nvars, std::move(terms));
}

Polynomial random_poly(int nvars, int degree, bool dense, Seed seed) {
    Rng rng(seed);
    return random_poly(nvars, degree, dense, rng);
}

Polynomial random_int_poly(int nvars, int degree, int lo, int hi, Rng& rng) {
    if (hi < lo) throw std::invalid_argument("random_int_poly: empty range");
    const auto monos = monomials_of_degree(nvars, degree);
    std::vector<Term> terms;
    for (const Monomial& m : monos) {
        const int c = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
        if (c != 0) terms.push_back(Term{m, static_cast<double>(c)});
    }
    if (terms.empty()) terms.push_back(Term{monos.front(), 1.0});
    return Polynomial(nvars, std::move(terms));
}

Polynomial random_linear(int nvars, Rng& rng, const std::vector<int>& support,
                         bool with_constant) {
    std::vector<Term> terms;
    if (with_constant)
        terms.push_back(Term{Monomial(std::vector<int>(nvars, 0)), rng.unit_complex()});
    std::vector<int> vars = support;
    if (vars.empty()) {
        vars.resize(nvars);
        std::iota(vars.begin(), vars.end(), 0);
    }
    for (int v : vars) {
        std::vector<int> e(nvars, 0);
        e.at(v) = 1;
        terms.push_back(Term{Monomial(std::move(e)), rng.unit_complex()});
    }
    return Polynomial(nvars, std::move(terms));
}

}  // namespace sosb
