#include "igabem/linear_solve.hpp"

#include <algorithm>
#include <cmath>

#include "igabem/errors.hpp"

namespace igabem {

DenseMatrix DenseMatrix::identity(int m) {
  DenseMatrix a(m);
  for (int i = 0; i < m; ++i) a(i, i) = 1.0;
  return a;
}

double DenseMatrix::max_abs() const {
  double v = 0.0;
  for (double x : a_) v = std::max(v, std::abs(x));
  return v;
}

double DenseMatrix::norm_1() const {
  double best = 0.0;
  for (int j = 0; j < m_; ++j) {
    double col = 0.0;
    for (int i = 0; i < m_; ++i) col += std::abs((*this)(i, j));
    best = std::max(best, col);
  }
  return best;
}

LuFactorization lu_factor(const DenseMatrix& a) {
  const int m = a.size();
  LuFactorization f;
  f.lu = a;
  f.pivot.resize(m);
  f.source_norm = a.max_abs();
  f.min_pivot = std::numeric_limits<double>::infinity();

  DenseMatrix& lu = f.lu;
  double max_u = 0.0;
  for (int k = 0; k < m; ++k) {
    int p = k;
    for (int i = k + 1; i < m; ++i) {
      if (std::abs(lu(i, k)) > std::abs(lu(p, k))) p = i;
    }
    f.pivot[k] = p;
    if (lu(p, k) == 0.0) throw solver_error("lu_factor: singular matrix (zero pivot column)");
    if (p != k) {
      for (int j = 0; j < m; ++j) std::swap(lu(k, j), lu(p, j));
    }
    const double piv = lu(k, k);
    f.min_pivot = std::min(f.min_pivot, std::abs(piv));
    for (int i = k + 1; i < m; ++i) {
      const double mult = lu(i, k) / piv;
      lu(i, k) = mult;
      for (int j = k + 1; j < m; ++j) lu(i, j) -= mult * lu(k, j);
    }
    for (int j = k; j < m; ++j) max_u = std::max(max_u, std::abs(lu(k, j)));
  }
  f.growth = (f.source_norm > 0.0) ? max_u / f.source_norm : 0.0;
  return f;
}

std::vector<double> lu_solve(const LuFactorization& f, std::vector<double> b) {
  const int m = f.lu.size();
  if (static_cast<int>(b.size()) != m) throw solver_error("lu_solve: dimension mismatch");
  for (int k = 0; k < m; ++k) std::swap(b[k], b[f.pivot[k]]);
  for (int i = 1; i < m; ++i) {
    double s = b[i];
    for (int j = 0; j < i; ++j) s -= f.lu(i, j) * b[j];
    b[i] = s;
  }
  for (int i = m - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < m; ++j) s -= f.lu(i, j) * b[j];
    b[i] = s / f.lu(i, i);
  }
  return b;
}

std::vector<double> lu_solve_transposed(const LuFactorization& f, std::vector<double> b) {
  const int m = f.lu.size();
  if (static_cast<int>(b.size()) != m) throw solver_error("lu_solve_transposed: dimension mismatch");
  // A^T = U^T L^T P, so solve U^T w = b, L^T v = w, then undo the row swaps.
  for (int i = 0; i < m; ++i) {
    double s = b[i];
    for (int j = 0; j < i; ++j) s -= f.lu(j, i) * b[j];
    b[i] = s / f.lu(i, i);
  }
  for (int i = m - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < m; ++j) s -= f.lu(j, i) * b[j];
    b[i] = s;
  }
  for (int k = m - 1; k >= 0; --k) std::swap(b[k], b[f.pivot[k]]);
  return b;
}

double condition_estimate(const DenseMatrix& a, const LuFactorization& f) {
  const int m = a.size();
  std::vector<double> x(m, 1.0 / m);
  double est = 0.0;
  for (int iter = 0; iter < 5; ++iter) {
    const std::vector<double> y = lu_solve(f, x);
    est = 0.0;
    for (double v : y) est += std::abs(v);
    std::vector<double> xi(m);
    for (int i = 0; i < m; ++i) xi[i] = (y[i] >= 0.0) ? 1.0 : -1.0;
    const std::vector<double> z = lu_solve_transposed(f, std::move(xi));
    int jmax = 0;
    double zmax = 0.0, zx = 0.0;
    for (int i = 0; i < m; ++i) {
      zx += z[i] * x[i];
      if (std::abs(z[i]) > zmax) {
        zmax = std::abs(z[i]);
        jmax = i;
      }
    }
    if (zmax <= zx) break;
    std::fill(x.begin(), x.end(), 0.0);
    x[jmax] = 1.0;
  }
  return a.norm_1() * est;
}

double residual_norm(const DenseMatrix& a, const std::vector<double>& x,
                     const std::vector<double>& b) {
  const int m = a.size();
  double norm = 0.0;
  for (int i = 0; i < m; ++i) {
    double r = -b[i];
    for (int j = 0; j < m; ++j) r += a(i, j) * x[j];
    norm += r * r;
  }
  return std::sqrt(norm);
}

}  // namespace igabem
