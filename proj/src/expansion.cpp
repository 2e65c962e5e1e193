#include "bdm/expansion.hpp"
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bdm {

namespace {
bool is_int(const Real &x) { return abs(x - floor(x + Real(0.5))) < Real("1e-9"); }
} // namespace

ExpansionModel ExpansionModel::resolvent_lattice(Real nu, int n, int N, int J_cut, int K_cut,
                                                 bool force_logs) {
    ExpansionModel m;
    m.nu = nu;
    m.n = n;
    m.N = N;
    m.J_cut = J_cut;
    m.K_cut = K_cut;
    bool integer_order = is_int(nu);
    std::vector<ExpTerm> raw;
    for (int j = 0; j <= J_cut; ++j)
        raw.push_back({nu + n - j - 2 * N, false, 0, j, false});
    for (int k = 0; k <= K_cut; ++k)
        raw.push_back({Real(-k - 2 * N), integer_order || force_logs, 1, k, false});
    // merge collisions (tolerance 1e-9); a family-0/1 collision keeps the
    // family-1 bookkeeping and acquires the log partner
    std::sort(raw.begin(), raw.end(),
              [](const ExpTerm &a, const ExpTerm &b) { return a.exponent > b.exponent; });
    for (const auto &t : raw) {
        bool merged = false;
        for (auto &u : m.terms) {
            if (abs(u.exponent - t.exponent) < Real("1e-9")) {
                u.with_log = u.with_log || t.with_log;
                u.merged = true;
                if (t.family == 1) { u.family = 1; u.index = t.index; }
                merged = true;
                break;
            }
        }
        if (!merged) m.terms.push_back(t);
    }
    return m;
}

ExpansionModel ExpansionModel::power_lattice(std::vector<Real> exponents, bool log_at_zero) {
    ExpansionModel m;
    m.nu = Real(0);
    std::sort(exponents.begin(), exponents.end(), std::greater<Real>());
    int idx = 0;
    for (const auto &e : exponents) {
        bool lg = log_at_zero && abs(e) < Real("1e-9");
        m.terms.push_back({e, lg, 0, idx++, false});
    }
    return m;
}

int ExpansionModel::find(const Real &exponent, const Real &tol) const {
    for (size_t t = 0; t < terms.size(); ++t)
        if (abs(terms[t].exponent - exponent) < tol) return int(t);
    return -1;
}

std::vector<Real> geometric_grid(const Real &lo, const Real &hi, int count) {
    std::vector<Real> g(count);
    for (int i = 0; i < count; ++i)
        g[i] = lo * pow(hi / lo, Real(i) / Real(count - 1));
    return g;
}

namespace {

struct Column {
    Real exponent;
    bool is_log;
    int term; // index into model.terms
};

FitReport run_fit(const std::vector<Real> &mu, const std::vector<Cx> &val,
                  const std::vector<Real> &err, const ExpansionModel &model) {
    std::vector<Column> cols;
    for (size_t t = 0; t < model.terms.size(); ++t) {
        cols.push_back({model.terms[t].exponent, false, int(t)});
        if (model.terms[t].with_log) cols.push_back({model.terms[t].exponent, true, int(t)});
    }
    int rows = int(mu.size()), nc = int(cols.size());
    if (rows < nc) throw std::invalid_argument("fit_expansion: fewer samples than unknowns");
    // scale mu by its geometric midpoint to tame the Vandermonde growth
    Real log_mid(0);
    for (const auto &m : mu) log_mid += log(m);
    log_mid /= rows;
    Real mu0 = exp(log_mid);
    CMatrix A(rows, nc);
    CVector b(rows);
    for (int i = 0; i < rows; ++i) {
        Real w = err.empty() || err[i] <= 0 ? Real(1) : 1 / err[i];
        Real x = mu[i] / mu0;
        Real lx = log(x);
        for (int c = 0; c < nc; ++c) {
            Real base = pow(x, cols[c].exponent);
            A(i, c) = Cx(w * (cols[c].is_log ? base * lx : base));
        }
        b[i] = val[i] * Cx(w);
    }
    LsqResult ls = lsq_solve_full(A, b);
    // unscale: with y = mu/mu0,
    //   sum_c [a_c y^p + b_c y^p log y]  ->  coefficients in mu:
    //   B_p = b_c mu0^{-p};  A_p = (a_c - B_p mu0^p log mu0) mu0^{-p}
    FitReport rep;
    rep.condition = ls.condition;
    rep.residual_norm = ls.residual_norm;
    Real lmu0 = log(mu0);
    for (int c = 0; c < nc; ++c) {
        FitCoef fc;
        fc.exponent = cols[c].exponent;
        fc.is_log = cols[c].is_log;
        Real unscale = pow(mu0, -cols[c].exponent);
        if (cols[c].is_log) {
            fc.estimate = ls.x[c] * Cx(unscale);
        } else {
            Cx logpart(0);
            for (int c2 = 0; c2 < nc; ++c2)
                if (cols[c2].is_log && abs(cols[c2].exponent - cols[c].exponent) < Real("1e-12"))
                    logpart = ls.x[c2];
            fc.estimate = (ls.x[c] - logpart * Cx(lmu0)) * Cx(unscale);
        }
        fc.stderr_scale = ls.residual_norm * ls.column_sens[c] * unscale;
        fc.stability = Real(0);
        fc.resolved = true;
        rep.coef.push_back(fc);
    }
    return rep;
}

} // namespace

FitReport fit_expansion(const TraceSamples &s, const ExpansionModel &model, const FitOptions &opt) {
    FitReport full = run_fit(s.mu, s.value, s.error_bound, model);
    if (opt.half_grid_check) {
        std::vector<Real> mu2;
        std::vector<Cx> val2;
        std::vector<Real> err2;
        for (size_t i = 0; i < s.mu.size(); i += 2) {
            mu2.push_back(s.mu[i]);
            val2.push_back(s.value[i]);
            if (!s.error_bound.empty()) err2.push_back(s.error_bound[i]);
        }
        if (mu2.size() >= full.coef.size()) {
            FitReport half = run_fit(mu2, val2, err2, model);
            for (size_t c = 0; c < full.coef.size(); ++c)
                full.coef[c].stability = abs(full.coef[c].estimate - half.coef[c].estimate);
        } else {
            for (auto &c : full.coef) c.stability = abs(c.estimate); // cannot check: unresolved
        }
    }
    Real sc = full.scale();
    if (sc <= 0) sc = Real(1);
    full.all_resolved = true;
    for (auto &c : full.coef) {
        c.resolved = c.stability <= opt.resolve_tol * sc;
        full.all_resolved = full.all_resolved && c.resolved;
    }
    return full;
}

const FitCoef *FitReport::find(const Real &exponent, bool is_log) const {
    for (const auto &c : coef)
        if (c.is_log == is_log && abs(c.exponent - exponent) < Real("1e-9")) return &c;
    return nullptr;
}

Real FitReport::scale() const {
    Real s(0);
    for (const auto &c : coef)
        if (!c.is_log) s = std::max(s, abs(c.estimate));
    return s;
}

Cx FitReport::c_tilde(const ExpansionModel &, const Real &mu_exponent) const {
    const FitCoef *c = find(mu_exponent, false);
    return c ? c->estimate : Cx(0);
}

Cx FitReport::c_tilde_log(const ExpansionModel &, const Real &mu_exponent) const {
    // log(-lambda) = 2 log mu
    const FitCoef *c = find(mu_exponent, true);
    return c ? c->estimate * Cx(Real(0.5)) : Cx(0);
}

ZetaData zeta_from_resolvent(const FitReport &fit, const ExpansionModel &model) {
    ZetaData z;
    Real p0 = Real(-2 * model.N);
    z.C_minus1 = fit.c_tilde_log(model, p0);
    z.C_0 = fit.c_tilde(model, p0);
    int t = model.find(p0);
    bool merged = t >= 0 && model.terms[t].merged;
    z.provenance = merged ? "merged family-0 and family-1 coefficient at the constant position"
                          : "family-1 constant coefficient (no collision)";
    return z;
}

ParityPrediction parity_predict(ParityClass cls, const Real &nu, int n, int J_cut, int K_cut) {
    ParityPrediction p;
    if (!is_int(nu)) return p;
    bool fits = (cls == ParityClass::EvenEven && n % 2 == 0) ||
                (cls == ParityClass::EvenOdd && n % 2 == 1);
    if (!fits) return p;
    p.applies = true;
    p.c0_equals_boundary_trace = true;
    long long nu_i = llround(nu.convert_to<double>());
    for (int j = 0; j <= J_cut; ++j)
        if ((nu_i + n - 1 - j) % 2 == 0) p.vanishing_family0_j.push_back(j);
    for (int k = 0; k <= K_cut; k += 2) p.vanishing_log_k.push_back(k);
    return p;
}

C0Prediction predict_c0_sgo(const ClassicalSymbol &trn_symbol, const Real &x_volume) {
    Real vol = x_volume > 0 ? x_volume : 2 * real_pi();
    FinitePartResult fp = finite_part(trn_symbol);
    C0Prediction out;
    out.value = vol * fp.value;
    out.log_coef_prediction = vol * fp.log_coef;
    Real s = trn_symbol.nu + Real(trn_symbol.dim);
    out.modulo_local_terms = is_int(trn_symbol.nu) && s >= -Real("1e-9");
    return out;
}

C0Prediction predict_c0_psdo(const ClassicalSymbol &interior_symbol, const Real &x_volume) {
    FinitePartResult fp = finite_part(interior_symbol);
    C0Prediction out;
    out.value = x_volume * fp.value;
    out.log_coef_prediction = x_volume * fp.log_coef;
    Real s = interior_symbol.nu + Real(interior_symbol.dim);
    out.modulo_local_terms = is_int(interior_symbol.nu) && s >= -Real("1e-9");
    return out;
}

ResidueRelationReport residue_relation_check(const FitReport &fit, const ExpansionModel &model,
                                             const ClassicalSymbol &trn_symbol,
                                             const Real &x_volume) {
    ResidueRelationReport rep;
    rep.fitted_log_coef = fit.c_tilde_log(model, Real(-2 * model.N));
    Real vol = x_volume > 0 ? x_volume : 2 * real_pi();
    rep.residue_half = vol * residue_density(trn_symbol) / 2;
    rep.abs_error = abs(rep.fitted_log_coef - Cx(rep.residue_half));
    return rep;
}

} // namespace bdm
