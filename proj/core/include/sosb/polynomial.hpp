#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sosb/common.hpp"

namespace sosb {

// Exponent tuple, one entry per variable. The global term order used
// everywhere (storage, serialization, Hankel row indexing) is graded
// lexicographic ascending: lower total degree first, ties broken by
// ascending lexicographic comparison of the tuples.
struct Monomial {
    std::vector<int> exp;

    Monomial() = default;
    explicit Monomial(std::vector<int> e) : exp(std::move(e)) {}

    int nvars() const { return static_cast<int>(exp.size()); }
    int degree() const;

    bool operator==(const Monomial& o) const { return exp == o.exp; }
    bool operator<(const Monomial& o) const;  // graded lex ascending
};

struct Term {
    Monomial mono;
    Cplx coeff;
};

// Sparse multivariate polynomial with complex double coefficients.
// Terms are kept sorted in the global term order with no duplicates and
// no stored zeros; all mutation goes through construction of new values.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(int nvars) : nvars_(nvars) {}
    Polynomial(int nvars, std::vector<Term> terms);

    static Polynomial zero(int nvars) { return Polynomial(nvars); }
    static Polynomial constant(int nvars, Cplx c);
    static Polynomial variable(int nvars, int index, Cplx scale = 1.0);
    static Polynomial monomial(Monomial m, Cplx c);

    int nvars() const { return nvars_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;  // -1 for the zero polynomial
    bool is_homogeneous() const;

    Cplx coefficient(const Monomial& m) const;
    double max_abs_coeff() const;

    Cplx eval(const Point& point) const;
    // unchecked fast path; x must hold nvars entries
    Cplx eval_ptr(const Cplx* x) const;

    Polynomial derivative(int var) const;
    Polynomial conjugate_coeffs() const;

    // Insert a homogenizing variable at position new_var_index; every term
    // is padded up to the maximum total degree.
    Polynomial homogenize(int new_var_index = 0) const;

    // Restrict to the affine chart <patch, x> = 1 by eliminating the
    // variable with the largest |patch| entry. Result has nvars-1 variables.
    Polynomial dehomogenize(const Point& patch) const;

    // Substitute variable `var` by a constant; result keeps nvars variables.
    Polynomial substitute(int var, Cplx value) const;

    // Substitute variable `var` by a constant and drop it from the tuple.
    Polynomial substitute_and_drop(int var, Cplx value) const;

    // Evaluate at a tuple of polynomials (shared nvars among the images).
    Polynomial compose(const std::vector<Polynomial>& images) const;

    // Reinterpret over a larger variable set; old variable i becomes map[i].
    Polynomial embed(int new_nvars, const std::vector<int>& map) const;

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(Cplx c) const;
    friend Polynomial operator*(Cplx c, const Polynomial& p) { return p * c; }

    bool operator==(const Polynomial& o) const {
        return nvars_ == o.nvars_ && terms_ == o.terms_;
    }

    std::string to_string(const std::string& var_prefix = "x") const;

private:
    void normalize();

    int nvars_ = 0;
    std::vector<Term> terms_;
};

inline bool operator==(const Term& a, const Term& b) {
    return a.mono == b.mono && a.coeff == b.coeff;
}

// System of polynomials sharing one variable set.
struct PolySystem {
    int nvars = 0;
    std::vector<Polynomial> equations;

    PolySystem() = default;
    PolySystem(int n, std::vector<Polynomial> eqs);

    int size() const { return static_cast<int>(equations.size()); }
    Point eval(const Point& point) const;
    double residual_inf(const Point& point) const;
};

// Entry (i,j) holds d(equations[i])/d(x_j); differentiation is exact.
std::vector<std::vector<Polynomial>> jacobian(const PolySystem& sys);

// All monomials in `nvars` variables of total degree exactly `degree`,
// listed ascending in the global term order.
std::vector<Monomial> monomials_of_degree(int nvars, int degree);

// All monomials of total degree <= degree, ascending.
std::vector<Monomial> monomials_up_to_degree(int nvars, int degree);

// Random polynomial with unit-modulus coefficients, deterministic in seed.
// dense=true spans all monomials of degree <= degree; dense=false is
// homogeneous of exactly that degree.
Polynomial random_poly(int nvars, int degree, bool dense, Seed seed);
Polynomial random_poly(int nvars, int degree, bool dense, Rng& rng);

// Random degree-1 polynomial c0 + sum c_i x_i over the given support
// (empty support means all variables).
Polynomial random_linear(int nvars, Rng& rng, const std::vector<int>& support = {},
                         bool with_constant = true);

// Homogeneous form with integer coefficients drawn from [lo, hi]; never zero.
Polynomial random_int_poly(int nvars, int degree, int lo, int hi, Rng& rng);

}  // namespace sosb
