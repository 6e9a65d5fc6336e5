#include "evodyn/numerics.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

namespace evodyn {

void SparseBilinear::add(int r, int c, double v) {
  if (r < 0 || r >= rows || c < 0 || c >= cols)
    throw DimensionMismatch("SparseBilinear::add: index out of range");
  std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(r)) << 32) |
                      static_cast<std::uint32_t>(c);
  if (!keys_.insert(key).second)
    throw std::invalid_argument("SparseBilinear::add: duplicate entry at (" + std::to_string(r) +
                                ", " + std::to_string(c) + ")");
  entries.push_back({r, c, v});
}

double bilinear(const SparseBilinear& u, std::span<const double> left,
                std::span<const double> right) {
  if (static_cast<int>(left.size()) != u.rows || static_cast<int>(right.size()) != u.cols)
    throw DimensionMismatch("bilinear: operand dimensions do not match the form");
  double acc = 0.0;
  for (const auto& e : u.entries)
    acc += left[static_cast<std::size_t>(e.row)] * e.value * right[static_cast<std::size_t>(e.col)];
  return acc;
}

std::vector<std::complex<double>> eigenvalues(const DenseMatrix& a) {
  if (a.rows != a.cols) throw DimensionMismatch("eigenvalues: matrix is not square");
  if (a.rows == 0) return {};
  for (double v : a.data)
    if (!std::isfinite(v)) throw EigenSolverError("eigenvalues: non-finite entry");
  Eigen::MatrixXd m(a.rows, a.cols);
  for (int r = 0; r < a.rows; ++r)
    for (int c = 0; c < a.cols; ++c) m(r, c) = a(r, c);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw EigenSolverError("eigenvalues: QR iteration did not converge for a " +
                           std::to_string(a.rows) + "x" + std::to_string(a.cols) + " matrix");
  std::vector<std::complex<double>> out(static_cast<std::size_t>(a.rows));
  for (int i = 0; i < a.rows; ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  return out;
}

DenseMatrix finite_difference_jacobian(const VectorField& f, std::span<const double> x0, double h) {
  const int n = static_cast<int>(x0.size());
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> fx = f(x);
  const int m = static_cast<int>(fx.size());
  DenseMatrix jac(m, n);
  for (int j = 0; j < n; ++j) {
    const double orig = x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(j)] = orig + h;
    std::vector<double> fp = f(x);
    x[static_cast<std::size_t>(j)] = orig - h;
    std::vector<double> fm = f(x);
    x[static_cast<std::size_t>(j)] = orig;
    for (int i = 0; i < m; ++i) {
      double d = (fp[static_cast<std::size_t>(i)] - fm[static_cast<std::size_t>(i)]) / (2.0 * h);
      if (!std::isfinite(d))
        throw std::runtime_error("finite_difference_jacobian: non-finite sample at coordinate " +
                                 std::to_string(j));
      jac(i, j) = d;
    }
  }
  return jac;
}

}  // namespace evodyn
