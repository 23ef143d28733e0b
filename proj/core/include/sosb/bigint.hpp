#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace sosb {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

BigInt binomial(long n, long k);

}  // namespace sosb
