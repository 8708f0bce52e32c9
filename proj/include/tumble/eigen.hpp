#pragma once

#include <cstddef>
#include <vector>

namespace tumble {

/// Dense symmetric matrix, row-major.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
  /// Takes a square row-major matrix and stores (A + A^T)/2.
  static SymmetricMatrix symmetrized(std::size_t n, std::vector<double> rows);
  static SymmetricMatrix identity(std::size_t n);
  static SymmetricMatrix diagonal(const std::vector<double>& d);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * n_ + j]; }
  /// Sets both (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, double v) noexcept {
    a_[i * n_ + j] = v;
    a_[j * n_ + i] = v;
  }
  void add(std::size_t i, std::size_t j, double v) noexcept {
    a_[i * n_ + j] += v;
    if (i != j) a_[j * n_ + i] += v;
  }
  const std::vector<double>& data() const noexcept { return a_; }

  double max_abs() const noexcept;
  double frobenius() const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

struct EigenResult {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // column k (row-major n x n) belongs to values[k]
  std::size_t sweeps = 0;

  double vector(std::size_t i, std::size_t k) const noexcept {
    return vectors[i * values.size() + k];
  }
  double min() const { return values.front(); }
  double max() const { return values.back(); }
};

/// Cyclic Jacobi; stops when the off-diagonal Frobenius mass is <= 1e-12 ||A||_F.
EigenResult eigen_sym(const SymmetricMatrix& a, std::size_t max_sweeps = 100);

/// Number of eigenvalues above rel_tol * lambda_max.
std::size_t numerical_rank(const EigenResult& eig, double rel_tol = 1e-8);

}  // namespace tumble
