#include "sosb/enumerative.hpp"

#include <mutex>
#include <numeric>
#include <stdexcept>

namespace sosb {

BigInt binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (long i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

namespace {
std::vector<BigInt> g_km_table = {0, 1};  // N_0 unused, N_1 = 1
std::mutex g_km_mutex;
}  // namespace

BigInt kontsevich_manin(int d) {
    if (d < 1) throw std::invalid_argument("kontsevich_manin: d must be >= 1");
    std::scoped_lock lock(g_km_mutex);
    while (static_cast<int>(g_km_table.size()) <= d) {
        const int m = static_cast<int>(g_km_table.size());
        BigInt acc = 0;
        for (int d1 = 1; d1 < m; ++d1) {
            const int d2 = m - d1;
            const BigInt a = BigInt(d1) * d1 * d2 * d2 * binomial(3 * m - 4, 3 * d1 - 2);
            const BigInt b = BigInt(d1) * d1 * d1 * d2 * binomial(3 * m - 4, 3 * d1 - 1);
            acc += g_km_table[d1] * g_km_table[d2] * (a - b);
        }
        g_km_table.push_back(acc);
    }
    return g_km_table[d];
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

namespace {
Rational make_rational(long long num, long long den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return Rational{num, den};
}
}  // namespace

Rational delta_exponent(int l, int genus, int dot) {
    const long long disc = static_cast<long long>(dot) * dot -
                           static_cast<long long>(l) * (2LL * genus - 2LL);
    return make_rational(disc, 2LL * l);
}

long long NLData::coefficient_at(const Rational& delta) const {
    for (const auto& [expo, value] : coefficients)
        if (expo == delta) return value;
    throw std::domain_error("NLData: no coefficient at exponent " + delta.str());
}

NLData nl_data(NlCase c) {
    NLData d;
    if (c == NlCase::Sextic) {
        d.l = 2;
        d.divisor = 4;
        d.coefficients = {
            {make_rational(0, 1), -1},     {make_rational(1, 1), 150},
            {make_rational(5, 4), 1248},   {make_rational(2, 1), 108600},
            {make_rational(9, 4), 332800}, {make_rational(3, 1), 5113200},
        };
    } else {
        d.l = 4;
        d.divisor = 2;
        d.coefficients = {
            {make_rational(0, 1), -1},    {make_rational(1, 1), 108},
            {make_rational(9, 8), 320},   {make_rational(3, 2), 5016},
            {make_rational(2, 1), 76950}, {make_rational(17, 8), 136512},
        };
    }
    return d;
}

long long boundary_degree_from_nl(const NLData& data, const Rational& delta) {
    const long long nl = data.coefficient_at(delta);
    if (data.divisor <= 0 || nl % data.divisor != 0)
        throw std::domain_error("boundary_degree_from_nl: division by " +
                                std::to_string(data.divisor) + " is not exact");
    return nl / data.divisor;
}

long long boundary_degree_from_nl(NlCase c) {
    const NLData data = nl_data(c);
    const Rational delta =
        c == NlCase::Sextic ? delta_exponent(2, 1, 3) : delta_exponent(4, 1, 4);
    return boundary_degree_from_nl(data, delta);
}

BigInt discriminant_degree(int n, int d) {
    if (n < 1 || d < 1) throw std::invalid_argument("discriminant_degree: n, d must be >= 1");
    BigInt r = n;
    for (int i = 0; i < n - 1; ++i) r *= (2 * d - 1);
    return r;
}

}  // namespace sosb
