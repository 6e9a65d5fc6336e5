#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace evodyn {

struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // row-major

  DenseMatrix() = default;
  DenseMatrix(int r, int c)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0.0) {}

  double& operator()(int r, int c) {
    return data[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
                static_cast<std::size_t>(c)];
  }
  double operator()(int r, int c) const {
    return data[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
                static_cast<std::size_t>(c)];
  }
};

// Sparse bilinear form; holds the sequence-form payoff arrays. Entries keep
// insertion order and the summation order is fixed by it.
struct SparseBilinear {
  struct Entry {
    int row;
    int col;
    double value;
  };

  int rows = 0;
  int cols = 0;
  std::vector<Entry> entries;

  SparseBilinear() = default;
  SparseBilinear(int r, int c) : rows(r), cols(c) {}

  void add(int r, int c, double v);  // throws on duplicate (row, col)

 private:
  std::unordered_set<std::uint64_t> keys_;
};

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EigenSolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double bilinear(const SparseBilinear& u, std::span<const double> left,
                std::span<const double> right);

// Full spectrum with algebraic multiplicity of a square real matrix.
std::vector<std::complex<double>> eigenvalues(const DenseMatrix& a);

using VectorField = std::function<std::vector<double>(std::span<const double>)>;

// Central differences, one column per coordinate.
DenseMatrix finite_difference_jacobian(const VectorField& f, std::span<const double> x0, double h);

}  // namespace evodyn
