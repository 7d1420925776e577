#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "igabem/errors.hpp"
#include "igabem/linear_solve.hpp"

using namespace igabem;

namespace {

DenseMatrix random_diag_dominant(int m, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix a(m);
  for (int i = 0; i < m; ++i) {
    double off = 0.0;
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      a(i, j) = u(rng);
      off += std::abs(a(i, j));
    }
    a(i, i) = off + 1.0 + std::abs(u(rng));
  }
  return a;
}

}  // namespace

TEST_CASE("identity factorization is trivial") {
  const DenseMatrix a = DenseMatrix::identity(4);
  const LuFactorization f = lu_factor(a);
  for (int i = 0; i < 4; ++i) {
    CHECK(f.pivot[i] == i);
    for (int j = 0; j < 4; ++j) CHECK(f.lu(i, j) == (i == j ? 1.0 : 0.0));
  }
  const auto x = lu_solve(f, {1.0, 2.0, 3.0, 4.0});
  CHECK(x[2] == doctest::Approx(3.0));
}

TEST_CASE("antidiagonal 2x2 needs the row swap") {
  DenseMatrix a(2);
  a(0, 1) = 1.0;
  a(1, 0) = 1.0;
  const LuFactorization f = lu_factor(a);
  const auto x = lu_solve(f, {1.0, 2.0});
  CHECK(x[0] == doctest::Approx(2.0));
  CHECK(x[1] == doctest::Approx(1.0));
}

TEST_CASE("PA = LU reconstruction on random matrices") {
  std::mt19937 rng(9);
  const int m = 50;
  const DenseMatrix a = random_diag_dominant(m, rng);
  const LuFactorization f = lu_factor(a);

  // Rebuild P*A by replaying the row swaps, then compare with L*U.
  DenseMatrix pa = a;
  for (int k = 0; k < m; ++k) {
    if (f.pivot[k] != k) {
      for (int j = 0; j < m; ++j) std::swap(pa(k, j), pa(f.pivot[k], j));
    }
  }
  double err = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      double lu = 0.0;
      for (int k = 0; k <= std::min(i, j); ++k) {
        const double lik = (k == i) ? 1.0 : f.lu(i, k);
        lu += lik * ((k <= j) ? f.lu(k, j) : 0.0);
      }
      err = std::max(err, std::abs(lu - pa(i, j)));
    }
  }
  CHECK(err / a.max_abs() < 1e-13);
}

TEST_CASE("scaled identity and zero right-hand sides") {
  DenseMatrix a(5);
  for (int i = 0; i < 5; ++i) a(i, i) = 3.0;
  const LuFactorization f = lu_factor(a);
  const auto x = lu_solve(f, std::vector<double>(5, 3.0));
  for (double v : x) CHECK(v == doctest::Approx(1.0));
  const auto zero = lu_solve(f, std::vector<double>(5, 0.0));
  for (double v : zero) CHECK(v == 0.0);
}

TEST_CASE("hilbert system with a constructed solution") {
  const int m = 6;
  DenseMatrix a(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) a(i, j) = 1.0 / (i + j + 1);
  }
  std::vector<double> b(m, 0.0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) b[i] += a(i, j);
  }
  const LuFactorization f = lu_factor(a);
  const auto x = lu_solve(f, b);
  const double cond = condition_estimate(a, f);
  CHECK(cond > 1e6);  // notoriously ill-conditioned
  for (double v : x) CHECK(std::abs(v - 1.0) < cond * 1e-14);
}

TEST_CASE("singularity and dimension errors") {
  DenseMatrix a(3);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;  // third column identically zero
  CHECK_THROWS_AS(lu_factor(a), solver_error);
  const LuFactorization f = lu_factor(DenseMatrix::identity(3));
  CHECK_THROWS_AS(lu_solve(f, {1.0, 2.0}), solver_error);
}

TEST_CASE("backward stability proxy on random systems") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const int m = 40;
    DenseMatrix a(m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) a(i, j) = u(rng);
    }
    std::vector<double> b(m);
    for (double& v : b) v = u(rng);
    const LuFactorization f = lu_factor(a);
    const auto x = lu_solve(f, b);
    double xnorm = 0.0;
    for (double v : x) xnorm = std::max(xnorm, std::abs(v));
    const double resid = residual_norm(a, x, b);
    const double eps = std::numeric_limits<double>::epsilon();
    CHECK(resid <= 100.0 * m * eps * a.max_abs() * xnorm);
  }
}

TEST_CASE("transpose solve is consistent") {
  std::mt19937 rng(13);
  const DenseMatrix a = random_diag_dominant(12, rng);
  const LuFactorization f = lu_factor(a);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> b(12);
  for (double& v : b) v = u(rng);
  const auto x = lu_solve_transposed(f, b);
  // check A^T x = b directly
  for (int i = 0; i < 12; ++i) {
    double s = 0.0;
    for (int j = 0; j < 12; ++j) s += a(j, i) * x[j];
    CHECK(s == doctest::Approx(b[i]).epsilon(1e-11));
  }
}

TEST_CASE("factorization is deterministic") {
  std::mt19937 rng(55);
  const DenseMatrix a = random_diag_dominant(30, rng);
  const LuFactorization f1 = lu_factor(a);
  const LuFactorization f2 = lu_factor(a);
  CHECK(std::memcmp(f1.lu.data().data(), f2.lu.data().data(),
                    f1.lu.data().size() * sizeof(double)) == 0);
  CHECK(f1.pivot == f2.pivot);
}

TEST_CASE("condition estimate tracks the truth on a scaled diagonal") {
  DenseMatrix a(4);
  a(0, 0) = 1e4;
  a(1, 1) = 1.0;
  a(2, 2) = 1.0;
  a(3, 3) = 1e-4;
  const LuFactorization f = lu_factor(a);
  const double cond = condition_estimate(a, f);
  CHECK(cond == doctest::Approx(1e8).epsilon(0.01));
}
