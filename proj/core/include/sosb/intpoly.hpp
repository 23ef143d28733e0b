#pragma once

#include <stdexcept>

#include "sosb/bigint.hpp"
#include "sosb/polynomial.hpp"

namespace sosb {

// Raised when an exact elimination exceeds its term budget.
struct BlowUpError : std::runtime_error {
    explicit BlowUpError(const std::string& what) : std::runtime_error(what) {}
};

struct ZTerm {
    Monomial mono;
    BigInt coeff;

    bool operator==(const ZTerm& o) const { return mono == o.mono && coeff == o.coeff; }
};

// Sparse multivariate polynomial over the integers; same term order and
// normalization rules as Polynomial.
class ZPoly {
public:
    ZPoly() = default;
    explicit ZPoly(int nvars) : nvars_(nvars) {}
    ZPoly(int nvars, std::vector<ZTerm> terms);

    static ZPoly constant(int nvars, BigInt c);
    static ZPoly variable(int nvars, int index);

    int nvars() const { return nvars_; }
    const std::vector<ZTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    int degree_in(int var) const;
    int total_degree() const;

    BigInt coefficient(const Monomial& m) const;
    // coefficient of var^k as a polynomial with that variable's exponent zeroed
    ZPoly coeff_of(int var, int k) const;
    ZPoly substitute_int(int var, const BigInt& value) const;
    ZPoly compose_linear_int(const std::vector<std::vector<BigInt>>& images) const;

    BigInt int_content() const;
    ZPoly divide_by_int(const BigInt& c) const;  // exact, throws otherwise
    ZPoly primitive_int() const;                 // integer content stripped

    ZPoly operator-() const;
    ZPoly operator+(const ZPoly& o) const;
    ZPoly operator-(const ZPoly& o) const;
    ZPoly operator*(const ZPoly& o) const;
    ZPoly operator*(const BigInt& c) const;

    bool operator==(const ZPoly& o) const {
        return nvars_ == o.nvars_ && terms_ == o.terms_;
    }

private:
    void normalize();

    int nvars_ = 0;
    std::vector<ZTerm> terms_;
};

// Exact division; throws std::logic_error when the division is not exact.
ZPoly exact_divide(const ZPoly& num, const ZPoly& den);

// Resultant of f and g with respect to `var`: Sylvester determinant by
// fraction-free (Bareiss) elimination; when only one other variable remains
// it switches to exact evaluation/interpolation. Throws BlowUpError past
// the term budget.
ZPoly resultant(const ZPoly& f, const ZPoly& g, int var, std::size_t term_budget);

// Univariate helpers (polys must involve at most the given variable).
ZPoly gcd_univariate(const ZPoly& a, const ZPoly& b, int var);
ZPoly squarefree_part_univariate(const ZPoly& f, int var);

}  // namespace sosb
