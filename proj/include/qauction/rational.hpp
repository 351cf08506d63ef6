#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

#include "qauction/rng.hpp"

namespace qa {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

double to_double(const Rat& r);

// exact value of the double (every finite double is dyadic)
Rat rat_from_double(double x);

// "a/b", "a", or a plain decimal like "0.25"
Rat parse_rational(const std::string& s);
std::string rational_string(const Rat& r);

// r-th fractional binary digit (r >= 1) of p in [0, 1].  Terminating
// expansions are used for dyadic p, except p == 1 which is taken as
// 0.111... so that probability-1 outcomes stream correctly.
int dyadic_digit(const Rat& p, int r);

// first `depth` binary digits of p, as a rational (multiple of 2^-depth)
Rat dyadic_prefix(const Rat& p, int depth);

// exactly uniform over [0, n), n >= 1
BigInt uniform_below(RngStream& rng, const BigInt& n);

// exact Bernoulli(p), p in [0, 1]
bool bernoulli_exact(RngStream& rng, const Rat& p);

// exact categorical draw proportional to non-negative weights (not all zero)
int categorical_exact(RngStream& rng, const std::vector<Rat>& weights);

}  // namespace qa
