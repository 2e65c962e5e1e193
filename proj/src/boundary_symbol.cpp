#include "bdm/boundary_symbol.hpp"
#include "bdm/quadrature.hpp"
#include <cmath>
#include <stdexcept>

namespace bdm {

namespace {

Real round_to_int(const Real &x) { return floor(x + Real(0.5)); }

bool near_integer(const Real &x, const Real &tol = Real("1e-9")) {
    return abs(x - round_to_int(x)) < tol;
}

} // namespace

Real ClassicalSymbol::term_value(size_t j, const UnitVec &w, const Real &r) const {
    const Term &t = terms[j];
    Real s = t.sphere(w);
    if (r >= 1) return s * pow(r, t.degree);
    Real e = smoothing_eta(r);
    return s * (e + (1 - e) * pow(r, t.degree));
}

Real ClassicalSymbol::value(const UnitVec &w, const Real &r) const {
    if (!finite_sum) return full(w, r);
    Real acc(0);
    for (size_t j = 0; j < terms.size(); ++j) acc += term_value(j, w, r);
    return acc;
}

Real ClassicalSymbol::remainder_value(int jcut, const UnitVec &w, const Real &r) const {
    if (finite_sum) {
        Real acc(0);
        for (size_t j = 0; j < terms.size(); ++j)
            if (int(j) > jcut) acc += term_value(j, w, r);
        return acc;
    }
    if (r >= tail_r0 && tail) return tail(jcut, w, r);
    Real acc = full(w, r);
    for (size_t j = 0; j < terms.size() && int(j) <= jcut; ++j) acc -= term_value(j, w, r);
    return acc;
}

int ClassicalSymbol::borderline_index() const {
    for (size_t j = 0; j < terms.size(); ++j)
        if (near_integer(terms[j].degree + dim) && abs(terms[j].degree + Real(dim)) < Real("1e-9"))
            return int(j);
    return -1;
}

Real sphere_integral(int dim, const std::function<Real(const UnitVec &)> &f) {
    if (dim == 1) {
        Real sum = f(UnitVec{Real(1), Real(0)}) + f(UnitVec{Real(-1), Real(0)});
        return sum / (2 * real_pi());
    }
    if (dim != 2) throw std::invalid_argument("sphere_integral: dim must be 1 or 2");
    // composite Gauss on [0, 2pi), 8 panels x 16 nodes = 128 >= 64 nodes
    Real twopi = 2 * real_pi();
    Real acc(0);
    int panels = 8;
    for (int p = 0; p < panels; ++p) {
        Real a = twopi * p / panels, b = twopi * (p + 1) / panels;
        acc += gauss_panel(
            [&f](const Real &th) {
                return f(UnitVec{cos(th), sin(th)});
            },
            a, b, 16);
    }
    return acc / (twopi * twopi);
}

namespace {

// radial integral of r^{dim-1} g(r) over [lo, hi] by Gauss panels
Real radial_panel(const std::function<Real(const Real &)> &g, int dim, const Real &lo,
                  const Real &hi, int npts = 40) {
    return gauss_panel([&g, dim](const Real &r) { return g(r) * pow_int(r, dim - 1); }, lo, hi,
                       npts);
}

// angular average against dbar-S at fixed radius
Real sphere_avg(const ClassicalSymbol &f, const std::function<Real(const UnitVec &, const Real &)> &v,
                const Real &r) {
    return sphere_integral(f.dim, [&v, &r](const UnitVec &w) { return v(w, r); });
}

} // namespace

Real ball_integral(const ClassicalSymbol &f, size_t term_index) {
    // integral over |xi| <= 1 of the glued term, against dbar-xi
    auto g = [&f, term_index](const Real &r) {
        return sphere_avg(f,
                          [&f, term_index](const UnitVec &w, const Real &rr) {
                              return f.term_value(term_index, w, rr);
                          },
                          r);
    };
    // the glue is constant below 1/2; refine the bump region
    return radial_panel(g, f.dim, Real(0), Real(0.5)) +
           radial_panel(g, f.dim, Real(0.5), Real(0.75)) +
           radial_panel(g, f.dim, Real(0.75), Real(1));
}

FinitePartResult finite_part(const ClassicalSymbol &f, const Real &tol) {
    FinitePartResult out{Real(0), Real(0)};
    Real s = f.nu + Real(f.dim);
    // include homogeneous corrections for j <= nu + n'
    int jmax = -1;
    if (s >= -Real("1e-9")) {
        jmax = int(floor(s + Real("1e-9")).convert_to<long long>());
        if (int(f.terms.size()) <= jmax)
            throw std::invalid_argument("finite_part: stored terms do not cover nu + n'");
    }
    for (int j = 0; j <= jmax; ++j) {
        out.value += ball_integral(f, j);
        Real denom = s - j;
        Real sph = sphere_integral(f.dim, [&f, j](const UnitVec &w) { return f.terms[j].sphere(w); });
        if (abs(denom) < Real("1e-9")) {
            out.log_coef += sph; // borderline term: log coefficient, no 1/0 correction
        } else {
            out.value -= sph / denom;
        }
    }
    // remainder integral over all of R^{n'}
    auto rem_avg = [&f, jmax](const Real &r) {
        return sphere_avg(f,
                          [&f, jmax](const UnitVec &w, const Real &rr) {
                              return f.remainder_value(jmax, w, rr);
                          },
                          r);
    };
    out.value += radial_panel(rem_avg, f.dim, Real(0), Real(0.5));
    out.value += radial_panel(rem_avg, f.dim, Real(0.5), Real(0.75));
    out.value += radial_panel(rem_avg, f.dim, Real(0.75), Real(1));
    if (f.finite_sum) {
        // homogeneous tail integrates in closed form on [1, infinity)
        for (size_t j = 0; j < f.terms.size(); ++j) {
            if (int(j) <= jmax) continue;
            Real d = f.terms[j].degree + Real(f.dim);
            if (d >= 0) throw std::invalid_argument("finite_part: non-integrable stored tail term");
            Real sph =
                sphere_integral(f.dim, [&f, j](const UnitVec &w) { return f.terms[j].sphere(w); });
            out.value += -sph / d; // integral_1^inf r^{deg+dim-1} dr = -1/d
        }
        return out;
    }
    // general symbol: geometric panels with the cancellation-free tail
    Real lo(1);
    for (int p = 0; p < 400; ++p) {
        Real hi = lo * 2;
        Real piece = radial_panel(rem_avg, f.dim, lo, hi);
        out.value += piece;
        if (abs(piece) < tol / 4 && lo > f.tail_r0) break;
        lo = hi;
    }
    return out;
}

Real cutoff_integral(const ClassicalSymbol &f, const Real &mu, const Real &tol) {
    if (mu < 1) throw std::invalid_argument("cutoff_integral: mu >= 1 required");
    auto favg = [&f](const Real &r) {
        return sphere_avg(f, [&f](const UnitVec &w, const Real &rr) { return f.value(w, rr); }, r);
    };
    Real acc = radial_panel(favg, f.dim, Real(0), Real(0.5)) +
               radial_panel(favg, f.dim, Real(0.5), Real(0.75)) +
               radial_panel(favg, f.dim, Real(0.75), Real(1));
    if (f.finite_sum) {
        // exact radial integrals of the homogeneous terms on [1, mu]
        for (size_t j = 0; j < f.terms.size(); ++j) {
            Real d = f.terms[j].degree + Real(f.dim);
            Real sph =
                sphere_integral(f.dim, [&f, j](const UnitVec &w) { return f.terms[j].sphere(w); });
            if (abs(d) < Real("1e-9"))
                acc += sph * log(mu);
            else
                acc += sph * (pow(mu, d) - 1) / d;
        }
        return acc;
    }
    Real lo(1);
    while (lo < mu) {
        Real hi = std::min(lo * 2, mu);
        acc += radial_panel(favg, f.dim, lo, hi);
        lo = hi;
    }
    (void)tol;
    return acc;
}

Real residue_density(const ClassicalSymbol &f) {
    for (const auto &t : f.terms)
        if (abs(t.degree + Real(f.dim)) < Real("1e-9"))
            return sphere_integral(f.dim, t.sphere);
    return Real(0);
}

ParityReport parity_classify(const ClassicalSymbol &f, int samples) {
    ParityReport rep;
    if (!near_integer(f.nu)) {
        rep.integer_order = false;
        rep.cls = ParityClass::None;
        return rep;
    }
    bool all_ee = true, all_eo = true;
    for (size_t j = 0; j < f.terms.size(); ++j) {
        long long deg = llround(f.terms[j].degree.convert_to<double>());
        Real sign = (deg % 2 == 0) ? Real(1) : Real(-1);
        auto check = [&](const UnitVec &w, const UnitVec &wn) {
            Real v = f.terms[j].sphere(w), vn = f.terms[j].sphere(wn);
            Real scale = abs(v) + abs(vn) + Real("1e-30");
            if (abs(vn - sign * v) > scale * Real("1e-12")) all_ee = false;
            if (abs(vn + sign * v) > scale * Real("1e-12")) all_eo = false;
        };
        if (f.dim == 1) {
            check(UnitVec{Real(1), Real(0)}, UnitVec{Real(-1), Real(0)});
        } else {
            for (int t = 0; t < samples; ++t) {
                Real th = 2 * real_pi() * t / samples + Real("0.0937");
                check(UnitVec{cos(th), sin(th)}, UnitVec{-cos(th), -sin(th)});
            }
        }
    }
    if (all_ee)
        rep.cls = ParityClass::EvenEven;
    else if (all_eo)
        rep.cls = ParityClass::EvenOdd;
    else
        rep.cls = ParityClass::None;
    return rep;
}

ClassicalSymbol make_homogeneous(int dim, Real degree, std::function<Real(const UnitVec &)> ang) {
    ClassicalSymbol f;
    f.dim = dim;
    f.nu = degree;
    f.terms.push_back({degree, std::move(ang)});
    return f;
}

ClassicalSymbol make_finite_sum(int dim, Real nu,
                                std::vector<std::function<Real(const UnitVec &)>> angs) {
    ClassicalSymbol f;
    f.dim = dim;
    f.nu = nu;
    for (size_t j = 0; j < angs.size(); ++j) f.terms.push_back({nu - Real(int(j)), std::move(angs[j])});
    return f;
}

ClassicalSymbol make_bessel_power(int dim, Real nu, Real c2, int stored_terms) {
    ClassicalSymbol f;
    f.dim = dim;
    f.nu = nu;
    // (c2 + r^2)^{nu/2} = r^nu sum_t binom(nu/2, t) (c2/r^2)^t for r^2 > c2
    for (int j = 0; j < stored_terms; ++j) {
        if (j % 2 != 0) {
            f.terms.push_back({nu - j, [](const UnitVec &) { return Real(0); }});
            continue;
        }
        int t = j / 2;
        Real coef(1);
        for (int q = 0; q < t; ++q) coef *= (nu / 2 - q) / (q + 1);
        coef *= pow_int(c2, t);
        f.terms.push_back({nu - j, [coef](const UnitVec &) { return coef; }});
    }
    f.finite_sum = false;
    f.full = [nu, c2](const UnitVec &, const Real &r) { return pow(c2 + r * r, nu / 2); };
    Real r0 = 8 * sqrt(c2 + 1);
    f.tail_r0 = r0;
    f.tail = [nu, c2](int jcut, const UnitVec &, const Real &r) {
        // sum over 2t > jcut of binom(nu/2, t) c2^t r^{nu-2t}; the ratio
        // c2/r^2 is < 1/64 for r >= r0, so the series converges geometrically
        int t0 = jcut >= 0 ? jcut / 2 + 1 : 0;
        Real x = c2 / (r * r);
        Real coef(1), xt(1);
        for (int t = 0; t < t0; ++t) {
            coef *= (nu / 2 - t) / (t + 1);
            xt *= x;
        }
        Real acc(0);
        for (int t = t0; t <= t0 + 500; ++t) {
            Real piece = coef * xt;
            acc += piece;
            if (abs(piece) <= (abs(acc) + Real("1e-60")) * Real("1e-46")) break;
            coef *= (nu / 2 - t) / (t + 1);
            xt *= x;
        }
        return acc * pow(r, nu);
    };
    return f;
}

} // namespace bdm
