#include "bdm/linalg.hpp"
#include <stdexcept>

namespace bdm {

namespace {

// modified Gram-Schmidt QR: A = Q R with Q (rows x cols) orthonormal columns
void mgs_qr(const CMatrix &A, CMatrix &Q, CMatrix &R) {
    int m = A.rows(), n = A.cols();
    Q = A;
    R = CMatrix(n, n);
    for (int k = 0; k < n; ++k) {
        Real nrm(0);
        for (int i = 0; i < m; ++i) nrm += norm2(Q(i, k));
        nrm = sqrt(nrm);
        if (nrm == 0) throw std::runtime_error("lsq: rank-deficient column");
        R(k, k) = Cx(nrm);
        Real inv = 1 / nrm;
        for (int i = 0; i < m; ++i) Q(i, k) *= Cx(inv);
        for (int j = k + 1; j < n; ++j) {
            Cx dot(0);
            for (int i = 0; i < m; ++i) dot += conj(Q(i, k)) * Q(i, j);
            R(k, j) = dot;
            for (int i = 0; i < m; ++i) Q(i, j) -= dot * Q(i, k);
        }
    }
}

CVector back_substitute(const CMatrix &R, const CVector &y) {
    int n = R.cols();
    CVector x(n);
    for (int k = n - 1; k >= 0; --k) {
        Cx acc = y[k];
        for (int j = k + 1; j < n; ++j) acc -= R(k, j) * x[j];
        x[k] = acc / R(k, k);
    }
    return x;
}

} // namespace

CVector lsq_solve(const CMatrix &A, const CVector &b) {
    CMatrix Q, R;
    mgs_qr(A, Q, R);
    int m = A.rows(), n = A.cols();
    CVector y(n);
    for (int k = 0; k < n; ++k) {
        Cx acc(0);
        for (int i = 0; i < m; ++i) acc += conj(Q(i, k)) * b[i];
        y[k] = acc;
    }
    return back_substitute(R, y);
}

std::vector<Real> singular_values(const CMatrix &A) {
    // one-sided Jacobi on the columns
    CMatrix U = A;
    int m = U.rows(), n = U.cols();
    for (int sweep = 0; sweep < 60; ++sweep) {
        Real off(0);
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                Real app(0), aqq(0);
                Cx apq(0);
                for (int i = 0; i < m; ++i) {
                    app += norm2(U(i, p));
                    aqq += norm2(U(i, q));
                    apq += conj(U(i, p)) * U(i, q);
                }
                Real a = abs(apq);
                if (a <= (sqrt(app * aqq) + Real("1e-80")) * Real("1e-46")) continue;
                off += a;
                // complex Jacobi rotation zeroing the (p,q) inner product
                Cx phase = apq * Cx(1 / a);
                Real tau = (aqq - app) / (2 * a);
                Real t = (tau >= 0 ? Real(1) : Real(-1)) / (abs(tau) + sqrt(1 + tau * tau));
                Real c = 1 / sqrt(1 + t * t);
                Real s = c * t;
                for (int i = 0; i < m; ++i) {
                    Cx up = U(i, p), uq = U(i, q);
                    U(i, p) = Cx(c) * up - Cx(s) * conj(phase) * uq;
                    U(i, q) = Cx(s) * phase * up + Cx(c) * uq;
                }
            }
        if (off == 0) break;
    }
    std::vector<Real> sv(n);
    for (int j = 0; j < n; ++j) {
        Real nrm(0);
        for (int i = 0; i < m; ++i) nrm += norm2(U(i, j));
        sv[j] = sqrt(nrm);
    }
    std::sort(sv.begin(), sv.end(), std::greater<Real>());
    return sv;
}

LsqResult lsq_solve_full(const CMatrix &A, const CVector &b) {
    CMatrix Q, R;
    mgs_qr(A, Q, R);
    int m = A.rows(), n = A.cols();
    CVector y(n);
    for (int k = 0; k < n; ++k) {
        Cx acc(0);
        for (int i = 0; i < m; ++i) acc += conj(Q(i, k)) * b[i];
        y[k] = acc;
    }
    LsqResult out;
    out.x = back_substitute(R, y);
    Real rn(0);
    for (int i = 0; i < m; ++i) {
        Cx acc = b[i];
        for (int j = 0; j < n; ++j) acc -= A(i, j) * out.x[j];
        rn += norm2(acc);
    }
    out.residual_norm = sqrt(rn);
    auto sv = singular_values(A);
    out.condition = sv.empty() || sv.back() == 0 ? Real(0) : sv.front() / sv.back();
    // row norms of R^{-1}: diagonal of (A^* A)^{-1} is the squared row norm
    std::vector<CVector> rinv_cols(n);
    for (int c = 0; c < n; ++c) {
        CVector e(n, Cx(0));
        e[c] = Cx(1);
        rinv_cols[c] = back_substitute(R, e);
    }
    out.column_sens.resize(n);
    for (int r = 0; r < n; ++r) {
        Real nrm(0);
        for (int c = 0; c < n; ++c) nrm += norm2(rinv_cols[c][r]);
        out.column_sens[r] = sqrt(nrm);
    }
    return out;
}

} // namespace bdm
