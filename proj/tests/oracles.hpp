#pragma once

// Reference values computed independently of the library code paths.

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

/// f_+(t) for the 2x2 system f_+' = k(f_- - f_+), f_-' = k(f_+ - f_-), f(0) = (a, b).
inline double plateau_plus(double a, double b, double k, double t) {
  return 0.5 * (a + b) + 0.5 * (a - b) * std::exp(-2.0 * k * t);
}
inline double plateau_minus(double a, double b, double k, double t) {
  return 0.5 * (a + b) - 0.5 * (a - b) * std::exp(-2.0 * k * t);
}

/// int exp(-(x - m)^2 / (2 s^2)) * A * 1{|x - c| <= h} dx
inline double gaussian_box_overlap(double m, double s, double c, double h, double A) {
  const double r = s * std::sqrt(2.0);
  return A * s * std::sqrt(kPi / 2.0) * (std::erf((c + h - m) / r) - std::erf((c - h - m) / r));
}

/// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
  if (n % 2) ++n;
  const double h = (b - a) / static_cast<double>(n);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
  return s * h / 3.0;
}

/// int_{-1}^{1} exp(1 - 1/(1 - s^2)) ds
inline double bump_mass() {
  auto xi = [](double s) { return std::abs(s) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0; };
  return simpson(xi, -1.0, 1.0, 200000);
}

/// Eigenvalues of [[a, b], [b, c]], ascending.
inline std::pair<double, double> eig2(double a, double b, double c) {
  const double m = 0.5 * (a + c);
  const double r = std::hypot(0.5 * (a - c), b);
  return {m - r, m + r};
}

/// Central differences of a scalar function of a vector, h_j = rule * (1 + |x_j|).
inline std::vector<double> central_gradient(const std::function<double(const std::vector<double>&)>& f,
                                            std::vector<double> x, double rule) {
  std::vector<double> g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double h = rule * (1.0 + std::abs(x[j]));
    const double x0 = x[j];
    x[j] = x0 + h;
    const double fp = f(x);
    x[j] = x0 - h;
    const double fm = f(x);
    x[j] = x0;
    g[j] = (fp - fm) / (2.0 * h);
  }
  return g;
}

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return norm2(d) / norm2(b);
}

}  // namespace oracle
