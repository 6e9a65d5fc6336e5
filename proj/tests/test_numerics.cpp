#include "evodyn/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

using namespace evodyn;

namespace {

// Characteristic polynomial coefficients by the Faddeev-LeVerrier recurrence,
// then roots by Durand-Kerner. Slow and simple on purpose: this is the
// independent check for the production eigensolver.
std::vector<double> char_poly(const DenseMatrix& a) {
  int n = a.rows;
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[0] = 1.0;
  DenseMatrix m(n, n);  // M_0 = 0
  for (int k = 1; k <= n; ++k) {
    // M_k = A * M_{k-1} + c_{k-1} * I
    DenseMatrix am(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = (i == j) ? c[static_cast<std::size_t>(k) - 1] : 0.0;
        for (int l = 0; l < n; ++l) s += a(i, l) * m(l, j);
        am(i, j) = s;
      }
    m = am;
    double trace = 0.0;
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int l = 0; l < n; ++l) s += a(i, l) * m(l, i);
      trace += s;
    }
    c[static_cast<std::size_t>(k)] = -trace / k;
  }
  return c;  // lambda^n + c1 lambda^{n-1} + ... + cn
}

std::vector<std::complex<double>> durand_kerner(const std::vector<double>& c) {
  int n = static_cast<int>(c.size()) - 1;
  std::vector<std::complex<double>> r(static_cast<std::size_t>(n));
  std::complex<double> seed(0.4, 0.9);
  std::complex<double> p(1.0, 0.0);
  for (auto& root : r) {
    root = p;
    p *= seed;
  }
  auto eval = [&](std::complex<double> z) {
    std::complex<double> v(0.0, 0.0);
    for (double coeff : c) v = v * z + coeff;
    return v;
  };
  for (int iter = 0; iter < 2000; ++iter) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      std::complex<double> denom(1.0, 0.0);
      for (int j = 0; j < n; ++j)
        if (j != i) denom *= r[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(j)];
      std::complex<double> delta = eval(r[static_cast<std::size_t>(i)]) / denom;
      r[static_cast<std::size_t>(i)] -= delta;
      worst = std::max(worst, std::abs(delta));
    }
    if (worst < 1e-13) break;
  }
  return r;
}

double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  // greedy nearest-neighbour matching; adequate for well-separated tolerances
  for (const auto& va : a) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      double d = std::abs(va - b[i]);
      if (d < best) {
        best = d;
        arg = i;
      }
    }
    worst = std::max(worst, best);
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(arg));
  }
  return worst;
}

DenseMatrix random_matrix(int n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  DenseMatrix a(n, n);
  for (double& v : a.data) v = dist(rng);
  return a;
}

}  // namespace

TEST_CASE("sparse bilinear form") {
  SparseBilinear u(3, 2);
  u.add(0, 0, 2.0);
  u.add(1, 1, -1.5);
  u.add(2, 0, 4.0);
  std::vector<double> l{1.0, 0.5, 0.25};
  std::vector<double> r{2.0, 3.0};
  CHECK(bilinear(u, l, r) == doctest::Approx(2.0 * 2.0 - 1.5 * 0.5 * 3.0 + 4.0 * 0.25 * 2.0));
  CHECK_THROWS(u.add(0, 0, 1.0));
  std::vector<double> bad{1.0};
  CHECK_THROWS_AS(bilinear(u, bad, r), DimensionMismatch);
}

TEST_CASE("eigenvalues of small frozen matrices") {
  SUBCASE("symmetric 2x2") {
    DenseMatrix a(2, 2);
    a(0, 0) = 2;
    a(0, 1) = 1;
    a(1, 0) = 1;
    a(1, 1) = 2;
    auto ev = eigenvalues(a);
    CHECK(multiset_distance(ev, {{1.0, 0.0}, {3.0, 0.0}}) < 1e-12);
  }
  SUBCASE("rotation gives a conjugate imaginary pair") {
    DenseMatrix a(2, 2);
    a(0, 1) = -1;
    a(1, 0) = 1;
    auto ev = eigenvalues(a);
    CHECK(multiset_distance(ev, {{0.0, 1.0}, {0.0, -1.0}}) < 1e-12);
  }
  SUBCASE("defective Jordan block keeps multiplicity") {
    DenseMatrix a(2, 2);
    a(0, 0) = 1;
    a(0, 1) = 1;
    a(1, 1) = 1;
    auto ev = eigenvalues(a);
    CHECK(multiset_distance(ev, {{1.0, 0.0}, {1.0, 0.0}}) < 1e-7);
  }
  SUBCASE("companion matrix of (x-1)(x-2)(x-3)") {
    // x^3 - 6x^2 + 11x - 6
    DenseMatrix a(3, 3);
    a(0, 2) = 6;
    a(1, 0) = 1;
    a(1, 2) = -11;
    a(2, 1) = 1;
    a(2, 2) = 6;
    auto ev = eigenvalues(a);
    CHECK(multiset_distance(ev, {{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}}) < 1e-10);
  }
  SUBCASE("non-finite input is rejected") {
    DenseMatrix a(2, 2);
    a(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(eigenvalues(a), EigenSolverError);
  }
}

TEST_CASE("eigensolver agrees with the characteristic-polynomial oracle") {
  for (int n : {4, 8, 20}) {
    DenseMatrix a = random_matrix(n, 42 + static_cast<std::uint64_t>(n));
    auto ev = eigenvalues(a);
    auto oracle = durand_kerner(char_poly(a));
    CHECK(multiset_distance(ev, oracle) < 1e-6);
  }
}

TEST_CASE("spectrum is invariant under permutation similarity") {
  std::mt19937_64 rng(7);
  DenseMatrix a = random_matrix(12, 99);
  std::vector<int> perm(12);
  for (int i = 0; i < 12; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  DenseMatrix b(12, 12);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j)
      b(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) = a(i, j);
  CHECK(multiset_distance(eigenvalues(a), eigenvalues(b)) < 1e-8);
}

TEST_CASE("finite difference jacobian matches an analytic derivative") {
  VectorField f = [](std::span<const double> z) {
    return std::vector<double>{z[0] * z[0] * z[1], std::sin(z[0]) + z[1]};
  };
  std::vector<double> x0{1.2, -0.7};
  DenseMatrix j = finite_difference_jacobian(f, x0, 1e-6);
  CHECK(j(0, 0) == doctest::Approx(2 * 1.2 * -0.7).epsilon(1e-8));
  CHECK(j(0, 1) == doctest::Approx(1.2 * 1.2).epsilon(1e-8));
  CHECK(j(1, 0) == doctest::Approx(std::cos(1.2)).epsilon(1e-8));
  CHECK(j(1, 1) == doctest::Approx(1.0).epsilon(1e-8));
}
