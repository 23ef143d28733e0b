#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace sosb {

using Cplx = std::complex<double>;
using Point = std::vector<Cplx>;

// Deterministic random stream. Identical seed gives an identical stream on
// every platform (mt19937_64 output mapped to doubles without going through
// std::uniform_real_distribution, whose rounding is implementation-defined).
struct Seed {
    std::uint64_t value = 0;
};

class Rng {
public:
    explicit Rng(Seed seed) : gen_(seed.value) {}
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform on the unit circle.
    Cplx unit_complex() {
        const double theta = 2.0 * 3.14159265358979323846 * uniform();
        return {std::cos(theta), std::sin(theta)};
    }

    // Uniform on the unit disk.
    Cplx disk_complex() {
        const double r = std::sqrt(uniform());
        return r * unit_complex();
    }

    std::uint64_t below(std::uint64_t n) { return gen_() % n; }

    // Derive an independent stream; distinct tags give distinct streams.
    Rng fork(std::uint64_t tag) {
        return Rng(gen_() ^ (0x9e3779b97f4a7c15ULL * (tag + 1)));
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace sosb
