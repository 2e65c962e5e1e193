#ifndef BDM_LINALG_HPP
#define BDM_LINALG_HPP

// Dense complex matrices at working precision, sized for fitting problems
// (tens of rows/columns).  QR by modified Gram-Schmidt; singular values by
// one-sided Jacobi.

#include "bdm/real.hpp"
#include <vector>

namespace bdm {

class CMatrix {
  public:
    CMatrix() = default;
    CMatrix(int rows, int cols) : r_(rows), c_(cols), a_(size_t(rows) * cols) {}
    int rows() const { return r_; }
    int cols() const { return c_; }
    Cx &operator()(int i, int j) { return a_[size_t(i) * c_ + j]; }
    const Cx &operator()(int i, int j) const { return a_[size_t(i) * c_ + j]; }

  private:
    int r_ = 0, c_ = 0;
    std::vector<Cx> a_;
};

using CVector = std::vector<Cx>;

// minimum-norm least squares solution of A x = b (rows >= cols, full rank)
CVector lsq_solve(const CMatrix &A, const CVector &b);

// least squares with diagnostics
struct LsqResult {
    CVector x;
    Real residual_norm;            // ||Ax-b||_2
    Real condition;                // sigma_max/sigma_min of A
    std::vector<Real> column_sens; // ||R^{-1} e_c||: stderr scale per column
};
LsqResult lsq_solve_full(const CMatrix &A, const CVector &b);

std::vector<Real> singular_values(const CMatrix &A);

} // namespace bdm

#endif
