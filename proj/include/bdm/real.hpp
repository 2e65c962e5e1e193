#ifndef BDM_REAL_HPP
#define BDM_REAL_HPP

// Scalar types for the whole engine.
//
// All identity checks and fits run at 50 decimal digits (mpfr backend,
// correctly rounded, hence bit-reproducible across runs).  Complex values
// are a plain re/im pair over the mpfr real; boost's complex adaptors are
// not used because the mpc backend is not available everywhere and we only
// need a dozen operations.

#include <boost/multiprecision/mpfr.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <cstdint>
#include <iosfwd>
#include <sstream>
#include <string>
#include <utility>

namespace bdm {

using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<50>,
    boost::multiprecision::et_off>;

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<BigInt>;

inline Real to_real(const Rational &q) {
    return Real(q.numerator()) / Real(q.denominator());
}

inline Real real_pi() {
    return boost::multiprecision::default_ops::get_constant_pi<Real::backend_type>();
}

// Complex scalar over Real.
struct Cx {
    Real re{}, im{};

    Cx() = default;
    Cx(Real r) : re(std::move(r)) {}
    Cx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    Cx(int n) : re(n) {}
    Cx(double d) : re(d) {}

    Cx operator-() const { return {-re, -im}; }
    Cx &operator+=(const Cx &o) { re += o.re; im += o.im; return *this; }
    Cx &operator-=(const Cx &o) { re -= o.re; im -= o.im; return *this; }
    Cx &operator*=(const Cx &o) {
        Real r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    friend Cx operator+(Cx a, const Cx &b) { a += b; return a; }
    friend Cx operator-(Cx a, const Cx &b) { a -= b; return a; }
    friend Cx operator*(Cx a, const Cx &b) { a *= b; return a; }
    friend Cx operator/(const Cx &a, const Cx &b) {
        Real d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    Cx &operator/=(const Cx &o) { *this = *this / o; return *this; }
    friend bool operator==(const Cx &a, const Cx &b) { return a.re == b.re && a.im == b.im; }
};

inline Cx conj(const Cx &z) { return {z.re, -z.im}; }
inline Real norm2(const Cx &z) { return z.re * z.re + z.im * z.im; }
inline Real abs(const Cx &z) { return sqrt(norm2(z)); }
inline Cx cx_i() { return {Real(0), Real(1)}; }

inline Cx sqrt(const Cx &z) {
    // principal branch, Re >= 0
    Real r = abs(z);
    if (r == 0) return {};
    Real w = sqrt((r + z.re) / 2);
    if (w == 0) return {Real(0), sqrt(r)};
    return {w, z.im / (2 * w)};
}

inline Cx exp(const Cx &z) {
    Real m = exp(z.re);
    return {m * cos(z.im), m * sin(z.im)};
}

inline Cx log(const Cx &z) {
    return {log(abs(z)), atan2(z.im, z.re)};
}

inline Cx pow_int(Cx base, long long e) {
    if (e < 0) return Cx(1) / pow_int(base, -e);
    Cx out(1);
    while (e > 0) {
        if (e & 1) out *= base;
        base *= base;
        e >>= 1;
    }
    return out;
}

inline Real pow_int(Real base, long long e) {
    if (e < 0) return Real(1) / pow_int(std::move(base), -e);
    Real out(1);
    while (e > 0) {
        if (e & 1) out *= base;
        base *= base;
        e >>= 1;
    }
    return out;
}

// Deterministic decimal formatting used by every report writer: fixed
// significant-digit scientific form, no locale dependence.
inline std::string fmt_real(const Real &x, int digits = 17) {
    std::ostringstream os;
    os.setf(std::ios::scientific);
    os.precision(digits);
    os << x;
    return os.str();
}

inline std::ostream &operator<<(std::ostream &os, const Cx &z);

// xoshiro256** — a small deterministic RNG so random test points do not
// depend on libstdc++ internals.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed + 0x9E3779B97F4A7C15ull;
        for (auto &w : s_) {
            x ^= x >> 30; x *= 0xBF58476D1CE4E5B9ull;
            x ^= x >> 27; x *= 0x94D049BB133111EBull;
            x ^= x >> 31;
            w = x;
            x += 0x9E3779B97F4A7C15ull;
        }
    }
    std::uint64_t next_u64() {
        auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
        std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0]; s_[3] ^= s_[1]; s_[1] ^= s_[2]; s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }
    // uniform in [0,1) with 53 random bits
    double uniform() { return double(next_u64() >> 11) * (1.0 / 9007199254740992.0); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int lo, int hi) { // inclusive
        return lo + int(next_u64() % std::uint64_t(hi - lo + 1));
    }

  private:
    std::uint64_t s_[4];
};

} // namespace bdm

#include <ostream>
namespace bdm {
inline std::ostream &operator<<(std::ostream &os, const Cx &z) {
    return os << "(" << z.re << (z.im < 0 ? "" : "+") << z.im << "i)";
}
} // namespace bdm

#endif
