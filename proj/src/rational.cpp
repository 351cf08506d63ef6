#include "qauction/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace qa {

double to_double(const Rat& r) { return r.convert_to<double>(); }

Rat rat_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite double");
    if (x == 0.0) return Rat(0);
    int exp = 0;
    double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
    // 53 doublings make the mantissa integral
    BigInt num = static_cast<long long>(std::ldexp(m, 53));
    exp -= 53;
    if (exp >= 0) return Rat(num << exp);
    return Rat(num, BigInt(1) << (-exp));
}

Rat parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt a(s.substr(0, slash));
        BigInt b(s.substr(slash + 1));
        if (b == 0) throw std::invalid_argument("zero denominator: " + s);
        return Rat(a, b);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rat(BigInt(s));
    std::string head = s.substr(0, dot);
    std::string tail = s.substr(dot + 1);
    if (tail.empty()) return Rat(BigInt(head));
    bool neg = !head.empty() && head[0] == '-';
    if (!head.empty() && (head[0] == '+' || head[0] == '-')) head = head.substr(1);
    BigInt scale = 1;
    for (size_t i = 0; i < tail.size(); ++i) scale *= 10;
    BigInt whole = head.empty() ? BigInt(0) : BigInt(head);
    BigInt frac(tail);
    Rat v = Rat(whole) + Rat(frac, scale);
    return neg ? -v : v;
}

std::string rational_string(const Rat& r) {
    if (rat_den(r) == 1) return rat_num(r).str();
    return rat_num(r).str() + "/" + rat_den(r).str();
}

int dyadic_digit(const Rat& p, int r) {
    if (r < 1) throw std::invalid_argument("digit index starts at 1");
    if (p < 0 || p > 1) throw std::invalid_argument("digit oracle expects p in [0,1]");
    if (p == 1) return 1;  // 0.111... convention
    // digit r = floor(p * 2^r) mod 2
    BigInt shifted = (rat_num(p) << r) / rat_den(p);
    return static_cast<int>(shifted & 1);
}

Rat dyadic_prefix(const Rat& p, int depth) {
    if (depth < 0) throw std::invalid_argument("negative depth");
    if (p < 0 || p > 1) throw std::invalid_argument("prefix oracle expects p in [0,1]");
    BigInt pow2 = BigInt(1) << depth;
    if (p == 1) return Rat(pow2 - 1, pow2);
    BigInt shifted = (rat_num(p) << depth) / rat_den(p);
    return Rat(shifted, pow2);
}

BigInt uniform_below(RngStream& rng, const BigInt& n) {
    if (n <= 0) throw std::invalid_argument("uniform_below needs n >= 1");
    if (n == 1) return 0;
    unsigned bits = boost::multiprecision::msb(n - 1) + 1;
    unsigned words = (bits + 63) / 64;
    while (true) {
        BigInt v = 0;
        for (unsigned w = 0; w < words; ++w) {
            v <<= 64;
            v |= BigInt(rng.next_u64());
        }
        // keep only `bits` low bits, reject out-of-range
        v &= (BigInt(1) << bits) - 1;
        if (v < n) return v;
    }
}

bool bernoulli_exact(RngStream& rng, const Rat& p) {
    if (p < 0 || p > 1) throw std::invalid_argument("Bernoulli p outside [0,1]");
    if (p == 0) return false;
    if (p == 1) return true;
    return uniform_below(rng, rat_den(p)) < rat_num(p);
}

int categorical_exact(RngStream& rng, const std::vector<Rat>& weights) {
    BigInt common = 1;
    for (const Rat& w : weights) {
        if (w < 0) throw std::invalid_argument("negative categorical weight");
        common = boost::multiprecision::lcm(common, rat_den(w));
    }
    std::vector<BigInt> scaled(weights.size());
    BigInt total = 0;
    for (size_t i = 0; i < weights.size(); ++i) {
        scaled[i] = rat_num(weights[i]) * (common / rat_den(weights[i]));
        total += scaled[i];
    }
    if (total == 0) throw std::invalid_argument("all categorical weights zero");
    BigInt u = uniform_below(rng, total);
    for (size_t i = 0; i < scaled.size(); ++i) {
        if (u < scaled[i]) return static_cast<int>(i);
        u -= scaled[i];
    }
    return static_cast<int>(scaled.size()) - 1;  // unreachable
}

}  // namespace qa
