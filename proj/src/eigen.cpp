#include "tumble/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tumble/error.hpp"

namespace tumble {

SymmetricMatrix SymmetricMatrix::symmetrized(std::size_t n, std::vector<double> rows) {
  if (rows.size() != n * n) throw InvalidArgument("SymmetricMatrix: size mismatch");
  SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) m.set(i, j, 0.5 * (rows[i * n + j] + rows[j * n + i]));
  }
  return m;
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
  SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

SymmetricMatrix SymmetricMatrix::diagonal(const std::vector<double>& d) {
  SymmetricMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
  return m;
}

double SymmetricMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

double SymmetricMatrix::frobenius() const noexcept {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

EigenResult eigen_sym(const SymmetricMatrix& input, std::size_t max_sweeps) {
  const std::size_t n = input.size();
  std::vector<double> a = input.data();
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  const double norm = input.frobenius();
  auto off_mass = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += at(i, j) * at(i, j);
    return std::sqrt(s);
  };

  EigenResult out;
  std::size_t sweep = 0;
  while (off_mass() > 1e-12 * norm) {
    if (sweep == max_sweeps) {
      throw NumericalError("eigen_sym: no convergence after " + std::to_string(max_sweeps) +
                           " sweeps");
    }
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        // rotation angle zeroing a_pq (Golub & Van Loan, sym.schur2)
        const double tau = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return at(i, i) < at(j, j); });
  out.values.resize(n);
  out.vectors.assign(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = at(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors[i * n + k] = v[i * n + order[k]];
  }
  out.sweeps = sweep;
  return out;
}

std::size_t numerical_rank(const EigenResult& eig, double rel_tol) {
  if (eig.values.empty()) return 0;
  const double scale = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
  return static_cast<std::size_t>(std::count_if(eig.values.begin(), eig.values.end(),
                                                [&](double l) { return l > rel_tol * scale; }));
}

}  // namespace tumble
