#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sosb/bigint.hpp"

namespace sosb {

// Number N_d of rational plane curves of degree d through 3d-1 general
// points, via the Kontsevich-Manin recursion. Exact integers throughout.
BigInt kontsevich_manin(int d);

// Exact rational, normalized (denominator > 0, reduced).
struct Rational {
    long long num = 0;
    long long den = 1;

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    std::string str() const;
};

// delta = (dot^2 - l*(2*genus - 2)) / (2*l), the modular-form exponent that
// selects the relevant Noether-Lefschetz coefficient.
Rational delta_exponent(int l, int genus, int dot);

enum class NlCase { Sextic, Quartic };

// Printed q-expansion coefficients of Theta_l, stored as exact data.
struct NLData {
    int l = 0;                                          // polarization degree
    std::vector<std::pair<Rational, long long>> coefficients;  // (exponent, value)
    long long divisor = 1;                              // 4 sextic, 2 quartic

    long long coefficient_at(const Rational& delta) const;  // throws if absent
};

NLData nl_data(NlCase c);

// Degree of the non-discriminant boundary hypersurface: the Theta_l
// coefficient at delta, divided exactly by the curve-class/conic factor.
// Throws on non-exact division or on a missing coefficient.
long long boundary_degree_from_nl(NlCase c);
long long boundary_degree_from_nl(const NLData& data, const Rational& delta);

// Discriminant degree n*(2d-1)^(n-1) for forms of degree 2d in n variables.
BigInt discriminant_degree(int n, int d);

}  // namespace sosb
