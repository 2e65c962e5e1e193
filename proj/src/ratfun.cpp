#include "bdm/ratfun.hpp"
#include "bdm/quadrature.hpp"
#include <stdexcept>

namespace bdm {

CoefExpr atom_base(PoleKind k) {
    switch (k) {
    case PoleKind::SigmaPlus:
    case PoleKind::SigmaMinus: return CoefExpr::atom(Atom::Sigma);
    case PoleKind::KappaPlus: return CoefExpr::atom(Atom::KappaPlus);
    default: return CoefExpr::atom(Atom::KappaMinus);
    }
}

CoefExpr pole_location(PoleKind k) {
    CoefExpr i = CoefExpr::imaginary_unit();
    CoefExpr loc = i * atom_base(k);
    return pole_sign(k) > 0 ? loc : -loc;
}

Rational binom_rational(long long n, long long k) {
    if (k < 0) return Rational(0);
    Rational r(1);
    for (long long t = 0; t < k; ++t) r *= Rational(BigInt(n - t), BigInt(t + 1));
    return r;
}

Poly poly_mul(const Poly &a, const Poly &b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
    poly_trim(out);
    return out;
}

Poly poly_add(const Poly &a, const Poly &b) {
    Poly out(std::max(a.size(), b.size()));
    for (size_t i = 0; i < out.size(); ++i) {
        if (i < a.size()) out[i] = out[i] + a[i];
        if (i < b.size()) out[i] = out[i] + b[i];
    }
    poly_trim(out);
    return out;
}

Poly poly_pow(const Poly &a, int e) {
    Poly out{CoefExpr::integer(1)};
    for (int t = 0; t < e; ++t) out = poly_mul(out, a);
    return out;
}

void poly_trim(Poly &p) {
    while (!p.empty() && p.back().is_zero_const()) p.pop_back();
}

RatFun RatFun::polynomial(Poly p) {
    RatFun f;
    poly_trim(p);
    f.poly_ = std::move(p);
    return f;
}

RatFun RatFun::fraction(PoleKind kind, int order, CoefExpr coef) {
    RatFun f;
    f.add_fraction(kind, order, coef);
    return f;
}

RatFun RatFun::constant(CoefExpr c) { return polynomial(Poly{std::move(c)}); }

void RatFun::add_poly_coef(int power, const CoefExpr &c) {
    if (c.is_zero_const()) return;
    if (int(poly_.size()) <= power) poly_.resize(power + 1);
    poly_[power] = poly_[power] + c;
    poly_trim(poly_);
}

void RatFun::add_fraction(PoleKind kind, int order, const CoefExpr &c) {
    if (c.is_zero_const()) return;
    PoleKey key{kind, order};
    auto it = frac_.find(key);
    if (it == frac_.end())
        frac_.emplace(key, c);
    else {
        CoefExpr s = it->second + c;
        if (s.is_zero_const())
            frac_.erase(it);
        else
            it->second = s;
    }
}

RatFun RatFun::operator-() const {
    RatFun f;
    f.poly_.reserve(poly_.size());
    for (const auto &c : poly_) f.poly_.push_back(-c);
    for (const auto &[k, c] : frac_) f.frac_.emplace(k, -c);
    return f;
}

RatFun operator+(const RatFun &a, const RatFun &b) {
    RatFun f;
    f.poly_ = poly_add(a.poly_, b.poly_);
    f.frac_ = a.frac_;
    for (const auto &[k, c] : b.frac_) f.add_fraction(k.first, k.second, c);
    return f;
}

RatFun operator-(const RatFun &a, const RatFun &b) { return a + (-b); }

RatFun RatFun::scaled(const CoefExpr &c) const {
    RatFun f;
    if (c.is_zero_const()) return f;
    f.poly_.reserve(poly_.size());
    for (const auto &p : poly_) f.poly_.push_back(p * c);
    poly_trim(f.poly_);
    for (const auto &[k, v] : frac_) f.frac_.emplace(k, v * c);
    return f;
}

Cx RatFun::eval(const Cx &xi, const Binding &b) const {
    Cx acc(0);
    Cx xp(1);
    for (const auto &c : poly_) {
        acc += c.eval(b) * xp;
        xp *= xi;
    }
    Cx i = cx_i();
    for (const auto &[k, c] : frac_) {
        Cx base = atom_base(k.first).eval(b);
        Cx fac = base + Cx(Real(pole_sign(k.first))) * i * xi;
        acc += c.eval(b) * pow_int(fac, -(long long)k.second);
    }
    return acc;
}

namespace {

// i^e as an exact Gaussian-rational constant
CoefExpr ipow(long long e) {
    long long m = ((e % 4) + 4) % 4;
    switch (m) {
    case 0: return CoefExpr::integer(1);
    case 1: return CoefExpr::imaginary_unit();
    case 2: return CoefExpr::integer(-1);
    default: return -CoefExpr::imaginary_unit();
    }
}

// (i*s)^e
CoefExpr is_pow(int s, long long e) {
    CoefExpr v = ipow(e);
    if (s < 0 && (e % 2 != 0)) v = -v;
    return v;
}

// F_other(p_t): value of the linear factor of `other` at the pole of `t`.
// s_t == s_o  : base_o - base_t   (same half-plane difference)
// s_t != s_o  : base_o + base_t   (cross half-plane sum)
CoefExpr factor_at_pole(PoleKind other, PoleKind t) {
    CoefExpr bo = atom_base(other), bt = atom_base(t);
    return pole_sign(other) == pole_sign(t) ? bo - bt : bo + bt;
}

// Taylor coefficients (orders 0..L) of F_other(xi)^{-m} around p_t:
//   coeff_r = binom(-m, r) (i s_o)^r F_other(p_t)^{-m-r}
std::vector<CoefExpr> factor_power_series(PoleKind other, int m, PoleKind t, int L) {
    std::vector<CoefExpr> out(L + 1);
    CoefExpr val = factor_at_pole(other, t);
    for (int r = 0; r <= L; ++r) {
        CoefExpr c = CoefExpr::constant(binom_rational(-m, r)) * is_pow(pole_sign(other), r) *
                     val.pow(-(long long)m - r);
        out[r] = c;
    }
    return out;
}

std::vector<CoefExpr> series_mul(const std::vector<CoefExpr> &a, const std::vector<CoefExpr> &b,
                                 int L) {
    std::vector<CoefExpr> out(L + 1);
    for (int i = 0; i <= L && i < int(a.size()); ++i)
        for (int j = 0; i + j <= L && j < int(b.size()); ++j)
            out[i + j] = out[i + j] + a[i] * b[j];
    return out;
}

// Taylor coefficients of the polynomial at xi = p + delta, orders 0..L
std::vector<CoefExpr> poly_shift_series(const Poly &p, const CoefExpr &pole, int L) {
    std::vector<CoefExpr> out(L + 1);
    for (int q = 0; q <= L; ++q) {
        CoefExpr acc;
        for (int k = q; k < int(p.size()); ++k)
            acc = acc + CoefExpr::constant(binom_rational(k, q)) * pole.pow(k - q) * p[k];
        out[q] = acc;
    }
    return out;
}

// xi-polynomial form of c * F_kind(xi)^e for e >= 0
Poly expand_factor_power(PoleKind kind, int e, const CoefExpr &c) {
    Poly lin{atom_base(kind), is_pow(pole_sign(kind), 1)};
    Poly out = poly_pow(lin, e);
    for (auto &q : out) q = q * c;
    return out;
}

} // namespace

RatFun partial_fractions(const Poly &num_in, const std::vector<std::pair<PoleKind, int>> &den_in) {
    // merge repeated kinds
    std::map<PoleKind, int> den;
    for (const auto &[k, m] : den_in) {
        if (m < 0) throw std::invalid_argument("partial_fractions: negative multiplicity");
        if (m > 0) den[k] += m;
    }
    Poly num = num_in;
    poly_trim(num);
    if (den.empty()) return RatFun::polynomial(num);
    if (num.empty()) return {};

    int D = 0;
    for (const auto &[k, m] : den) D += m;

    RatFun out;

    // polynomial part by long division (denominator leading coefficient is the
    // exact constant prod (i s)^m, so each division step is a constant scale)
    if (int(num.size()) - 1 >= D) {
        Poly dpoly{CoefExpr::integer(1)};
        for (const auto &[k, m] : den)
            dpoly = poly_mul(dpoly, expand_factor_power(k, m, CoefExpr::integer(1)));
        CoefExpr lead_inv = dpoly.back().recip(); // constant
        Poly rem = num;
        while (int(rem.size()) - 1 >= D) {
            int shift = int(rem.size()) - 1 - D;
            CoefExpr q = rem.back() * lead_inv;
            out.add_poly_coef(shift, q);
            for (int t = 0; t < int(dpoly.size()); ++t)
                rem[shift + t] = rem[shift + t] - q * dpoly[t];
            rem.pop_back();
            poly_trim(rem);
            if (int(rem.size()) - 1 >= D + shift) // no cancellation progress
                throw std::runtime_error("partial_fractions: division failed");
        }
        num = std::move(rem);
        if (num.empty()) return out;
    }

    // Heaviside coefficients via local Taylor series around each pole
    for (const auto &[t, mt] : den) {
        int L = mt - 1;
        std::vector<CoefExpr> H = poly_shift_series(num, pole_location(t), L);
        for (const auto &[s, ms] : den) {
            if (s == t) continue;
            H = series_mul(H, factor_power_series(s, ms, t, L), L);
        }
        for (int r = 0; r <= L; ++r) {
            // coefficient of F_t^{-(mt-r)}
            CoefExpr c = is_pow(pole_sign(t), -(long long)r) * H[r];
            out.add_fraction(t, mt - r, c);
        }
    }
    return out;
}

RatFun operator*(const RatFun &a, const RatFun &b) {
    RatFun out;
    // poly x poly
    if (!a.poly().empty() && !b.poly().empty())
        out = out + RatFun::polynomial(poly_mul(a.poly(), b.poly()));
    // poly x fraction (both orders)
    auto poly_times_frac = [&out](const Poly &p, PoleKind kind, int order, const CoefExpr &c) {
        // write p(xi) = sum_k p_k (-s i)^k (F - base)^k, multiply by c F^{-order}
        CoefExpr base = atom_base(kind);
        int s = pole_sign(kind);
        for (int k = 0; k < int(p.size()); ++k) {
            if (p[k].is_zero_const()) continue;
            CoefExpr pk = p[k] * is_pow(-s, k); // (1/(i s))^k = (-i s)^k = (i*(-s))^k
            for (int t = 0; t <= k; ++t) {
                CoefExpr term =
                    pk * CoefExpr::constant(binom_rational(k, t)) * (-base).pow(k - t) * c;
                int e = t - order;
                if (e < 0)
                    out.add_fraction(kind, -e, term);
                else {
                    Poly pp = expand_factor_power(kind, e, term);
                    for (int q = 0; q < int(pp.size()); ++q) out.add_poly_coef(q, pp[q]);
                }
            }
        }
    };
    for (const auto &[k, c] : b.fractions()) poly_times_frac(a.poly(), k.first, k.second, c);
    for (const auto &[k, c] : a.fractions()) poly_times_frac(b.poly(), k.first, k.second, c);
    // fraction x fraction
    for (const auto &[ka, ca] : a.fractions()) {
        for (const auto &[kb, cb] : b.fractions()) {
            CoefExpr c = ca * cb;
            if (ka.first == kb.first) {
                out.add_fraction(ka.first, ka.second + kb.second, c);
                continue;
            }
            int j = ka.second, m = kb.second;
            // 1/(F_a^j F_b^m): series coefficients around each pole, closed form
            for (int r = 0; r < j; ++r) {
                CoefExpr coef = is_pow(pole_sign(ka.first), -(long long)r) *
                                CoefExpr::constant(binom_rational(-m, r)) *
                                is_pow(pole_sign(kb.first), r) *
                                factor_at_pole(kb.first, ka.first).pow(-(long long)m - r);
                out.add_fraction(ka.first, j - r, coef * c);
            }
            for (int r = 0; r < m; ++r) {
                CoefExpr coef = is_pow(pole_sign(kb.first), -(long long)r) *
                                CoefExpr::constant(binom_rational(-j, r)) *
                                is_pow(pole_sign(ka.first), r) *
                                factor_at_pole(ka.first, kb.first).pow(-(long long)j - r);
                out.add_fraction(kb.first, m - r, coef * c);
            }
        }
    }
    return out;
}

std::pair<RatFun, RatFun> h_split(const RatFun &f) {
    if (!f.proper()) throw std::invalid_argument("h_split: input has a polynomial part");
    RatFun up, lo;
    for (const auto &[k, c] : f.fractions())
        (is_upper(k.first) ? up : lo).add_fraction(k.first, k.second, c);
    return {up, lo};
}

CoefExpr cross_pair_integral(PoleKind upper_kind, int j, PoleKind lower_kind, int k) {
    if (!is_upper(upper_kind) || is_upper(lower_kind))
        throw std::invalid_argument("cross_pair_integral: wrong half-planes");
    CoefExpr s = atom_base(upper_kind) + atom_base(lower_kind);
    return CoefExpr::constant(binom_rational(j + k - 2, j - 1)) * s.pow(1 - j - k);
}

namespace {
CoefExpr residue_sum(const RatFun &f, bool upper) {
    CoefExpr acc;
    for (const auto &[k, c] : f.fractions())
        if (k.second == 1 && is_upper(k.first) == upper) acc = acc + c;
    return acc;
}
} // namespace

CoefExpr integrate_line(const RatFun &f, Rng &rng) {
    if (!f.proper()) throw std::invalid_argument("integrate_line: polynomial part present");
    CoefExpr up = residue_sum(f, true);
    CoefExpr lo = residue_sum(f, false);
    if (!approx_equal(up, lo, Real("1e-30"), rng))
        throw std::invalid_argument("integrate_line: integrand decays slower than xi^-2");
    return up;
}

CoefExpr integrate_product(const RatFun &a, const RatFun &b) {
    if (!a.proper() || !b.proper())
        throw std::invalid_argument("integrate_product: polynomial part present");
    CoefExpr acc;
    for (const auto &[ka, ca] : a.fractions())
        for (const auto &[kb, cb] : b.fractions()) {
            if (ka.first == kb.first) continue; // pure power, order >= 2: zero
            if (is_upper(ka.first) == is_upper(kb.first)) continue; // close other side
            const auto &up = is_upper(ka.first) ? ka : kb;
            const auto &lo = is_upper(ka.first) ? kb : ka;
            acc = acc + ca * cb * cross_pair_integral(up.first, up.second, lo.first, lo.second);
        }
    return acc;
}

RatFun lambda_derivative(const RatFun &f, const RatLambdaRules &rules) {
    auto dbase = [&rules](PoleKind k) {
        switch (k) {
        case PoleKind::SigmaPlus:
        case PoleKind::SigmaMinus: return rules.dbase_sigma;
        case PoleKind::KappaPlus: return rules.dbase_kappa_plus;
        default: return rules.dbase_kappa_minus;
        }
    };
    RatFun out;
    Poly dp;
    dp.reserve(f.poly().size());
    for (const auto &c : f.poly()) dp.push_back(c.lambda_derivative(rules.coef));
    out = RatFun::polynomial(std::move(dp));
    for (const auto &[k, c] : f.fractions()) {
        out.add_fraction(k.first, k.second, c.lambda_derivative(rules.coef));
        CoefExpr db = dbase(k.first);
        if (!db.is_zero_const())
            out.add_fraction(k.first, k.second + 1, CoefExpr::integer(-k.second) * c * db);
    }
    return out;
}

RatFun conjugate_formal(const RatFun &f) {
    auto flip = [](PoleKind k) {
        switch (k) {
        case PoleKind::SigmaPlus: return PoleKind::SigmaMinus;
        case PoleKind::SigmaMinus: return PoleKind::SigmaPlus;
        case PoleKind::KappaPlus: return PoleKind::KappaMinus;
        default: return PoleKind::KappaPlus;
        }
    };
    RatFun out;
    Poly cp;
    for (int k = 0; k < int(f.poly().size()); ++k) {
        // conj(xi^k) = xi^k on the real line
        cp.push_back(f.poly()[k].conj_consts());
    }
    out = RatFun::polynomial(std::move(cp));
    for (const auto &[k, c] : f.fractions())
        out.add_fraction(flip(k.first), k.second, c.conj_consts());
    return out;
}

int decay_order(const RatFun &f, const Binding &b, int max_check) {
    if (!f.poly().empty()) return -(int(f.poly().size()) - 1);
    Real scale(0);
    for (const auto &[k, c] : f.fractions()) scale = std::max(scale, abs(c.eval(b)));
    if (scale == 0) return max_check + 1;
    Real tol = scale * Real("1e-34");
    for (int r = 1; r <= max_check; ++r) {
        Cx cr(0);
        for (const auto &[k, c] : f.fractions()) {
            int j = k.second;
            if (r < j) continue;
            Cx base = atom_base(k.first).eval(b);
            Cx isv = Cx(Real(0), Real(pole_sign(k.first)));
            cr += c.eval(b) * Cx(to_real(binom_rational(-j, r - j))) * pow_int(base, r - j) *
                  pow_int(isv, -(long long)r);
        }
        if (abs(cr) > tol) return r;
    }
    return max_check + 1;
}

Cx integrate_line_quadrature(const RatFun &f, const Binding &b, const Real &tol, const Real &cut) {
    auto fn = [&f, &b](const Real &x) { return f.eval(Cx(x), b); };
    // adaptive panels, geometric toward the cut
    Cx acc = integrate_adaptive_cx(fn, Real(-1), Real(1), tol / 8);
    Real lo(1);
    while (lo < cut) {
        Real hi = std::min(lo * 4, cut);
        acc += integrate_adaptive_cx(fn, lo, hi, tol / 16);
        acc += integrate_adaptive_cx(fn, -hi, -lo, tol / 16);
        lo = hi;
    }
    // tail estimate from the asymptotic series: for decay >= 2,
    // integral_{|x|>cut} sum_r c_r x^{-r} dx = sum_r c_r ((-1)^r+1) cut^{1-r}/(r-1)
    Cx tail(0);
    for (int r = 2; r <= 8; ++r) {
        Cx cr(0);
        for (const auto &[k, c] : f.fractions()) {
            int j = k.second;
            if (r < j) continue;
            Cx base = atom_base(k.first).eval(b);
            Cx isv = Cx(Real(0), Real(pole_sign(k.first)));
            cr += c.eval(b) * Cx(to_real(binom_rational(-j, r - j))) * pow_int(base, r - j) *
                  pow_int(isv, -(long long)r);
        }
        if (r % 2 == 0) tail += cr * Cx(2 * pow_int(cut, 1 - r) / Real(r - 1));
    }
    Real twopi = 2 * real_pi();
    return (acc + tail) / Cx(twopi);
}

} // namespace bdm
