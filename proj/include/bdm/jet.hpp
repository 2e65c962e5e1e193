#ifndef BDM_JET_HPP
#define BDM_JET_HPP

// Truncated Taylor expansion in the spectral parameter lambda.  Resolvent
// powers are lambda-derivatives of the first power, so evaluating a closed
// form in Jet arithmetic yields all powers N <= order()+1 in one pass.

#include "bdm/real.hpp"
#include <cassert>
#include <vector>

namespace bdm {

template <class T> struct Jet {
    // c[k] = k-th Taylor coefficient around the expansion point.
    std::vector<T> c;

    Jet() = default;
    explicit Jet(int order) : c(order + 1, T(0)) {}
    static Jet constant(int order, T v) {
        Jet j(order);
        j.c[0] = std::move(v);
        return j;
    }
    static Jet variable(int order, T v) { // the jet of lambda itself
        Jet j(order);
        j.c[0] = std::move(v);
        if (order >= 1) j.c[1] = T(1);
        return j;
    }
    int order() const { return int(c.size()) - 1; }
    const T &value() const { return c[0]; }
    // N-th lambda-derivative divided by N!  (exactly the resolvent-power map)
    const T &dN_over_factN(int n) const { return c[n]; }

    Jet &operator+=(const Jet &o) {
        for (size_t k = 0; k < c.size(); ++k) c[k] += o.c[k];
        return *this;
    }
    Jet &operator-=(const Jet &o) {
        for (size_t k = 0; k < c.size(); ++k) c[k] -= o.c[k];
        return *this;
    }
    friend Jet operator+(Jet a, const Jet &b) { a += b; return a; }
    friend Jet operator-(Jet a, const Jet &b) { a -= b; return a; }
    friend Jet operator-(Jet a) {
        for (auto &x : a.c) x = -x;
        return a;
    }
    friend Jet operator*(const Jet &a, const Jet &b) {
        assert(a.order() == b.order());
        Jet out(a.order());
        for (int i = 0; i <= a.order(); ++i)
            for (int j = 0; i + j <= a.order(); ++j)
                out.c[i + j] += a.c[i] * b.c[j];
        return out;
    }
    Jet &operator*=(const Jet &o) { *this = *this * o; return *this; }
    friend Jet operator*(Jet a, const T &s) {
        for (auto &x : a.c) x *= s;
        return a;
    }
};

// 1/a by series division; a.value() must be nonzero.
template <class T> Jet<T> recip(const Jet<T> &a) {
    Jet<T> out(a.order());
    T inv0 = T(1) / a.c[0];
    out.c[0] = inv0;
    for (int k = 1; k <= a.order(); ++k) {
        T acc(0);
        for (int j = 1; j <= k; ++j) acc += a.c[j] * out.c[k - j];
        out.c[k] = -acc * inv0;
    }
    return out;
}

template <class T> Jet<T> operator/(const Jet<T> &a, const Jet<T> &b) {
    return a * recip(b);
}

template <class T> Jet<T> pow_int(const Jet<T> &a, long long e) {
    if (e < 0) return recip(pow_int(a, -e));
    Jet<T> out = Jet<T>::constant(a.order(), T(1));
    Jet<T> base = a;
    while (e > 0) {
        if (e & 1) out *= base;
        base *= base;
        e >>= 1;
    }
    return out;
}

// sqrt with given value branch: out.c[0] = sqrt(a.c[0]) using the scalar
// sqrt of T (principal branch).
template <class T> Jet<T> sqrt(const Jet<T> &a) {
    using std::sqrt;
    using bdm::sqrt;
    Jet<T> out(a.order());
    out.c[0] = sqrt(a.c[0]);
    T twos0 = out.c[0] + out.c[0];
    for (int k = 1; k <= a.order(); ++k) {
        // a = out*out  =>  a_k = 2 s0 s_k + sum_{j=1}^{k-1} s_j s_{k-j}
        T acc = a.c[k];
        for (int j = 1; j < k; ++j) acc -= out.c[j] * out.c[k - j];
        out.c[k] = acc / twos0;
    }
    return out;
}

// exp(a) = exp(a0) * exp(nilpotent part), the latter by its Taylor series
template <class T> Jet<T> exp(const Jet<T> &a) {
    using std::exp;
    using bdm::exp;
    Jet<T> nil = a;
    nil.c[0] = T(0);
    Jet<T> out = Jet<T>::constant(a.order(), T(1));
    Jet<T> pow_acc = Jet<T>::constant(a.order(), T(1));
    T fact(1);
    for (int k = 1; k <= a.order(); ++k) {
        pow_acc *= nil;
        fact *= T(k);
        Jet<T> term = pow_acc;
        for (auto &x : term.c) x = x / fact;
        out += term;
    }
    T e0 = exp(a.c[0]);
    for (auto &x : out.c) x *= e0;
    return out;
}

using RJet = Jet<Real>;
using CJet = Jet<Cx>;

} // namespace bdm

#endif
