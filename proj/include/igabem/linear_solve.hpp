#ifndef IGABEM_LINEAR_SOLVE_HPP
#define IGABEM_LINEAR_SOLVE_HPP

#include <vector>

namespace igabem {

class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(int m) : m_(m), a_(static_cast<std::size_t>(m) * m, 0.0) {}

  int size() const { return m_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * m_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * m_ + j]; }
  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

  static DenseMatrix identity(int m);
  double max_abs() const;
  double norm_1() const;  // max column sum

 private:
  int m_ = 0;
  std::vector<double> a_;
};

// P A = L U with unit-lower L, stored LAPACK-style (in place, row swap list).
struct LuFactorization {
  DenseMatrix lu;
  std::vector<int> pivot;    // row swapped with k at step k
  double min_pivot = 0.0;
  double growth = 0.0;       // max |U| / max |A|
  double source_norm = 0.0;  // max |A| of the factored matrix
};

// Throws solver_error when a whole pivot column is exactly zero.
LuFactorization lu_factor(const DenseMatrix& a);

std::vector<double> lu_solve(const LuFactorization& f, std::vector<double> b);
// Solve A^T x = b with the same factorization.
std::vector<double> lu_solve_transposed(const LuFactorization& f, std::vector<double> b);

// 1-norm condition estimate (Hager-style, a handful of solves).
double condition_estimate(const DenseMatrix& a, const LuFactorization& f);

double residual_norm(const DenseMatrix& a, const std::vector<double>& x,
                     const std::vector<double>& b);

}  // namespace igabem

#endif
