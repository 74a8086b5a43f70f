#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rsdeig {

using Vec = std::vector<double>;

// A linear map given only through its action on vectors.
using Operator = std::function<Vec(std::span<const double>)>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// y += alpha * x
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(double alpha, std::span<double> x) {
  for (auto& v : x) v *= alpha;
}

inline Vec scaled(double alpha, std::span<const double> x) {
  Vec y(x.begin(), x.end());
  scale(alpha, y);
  return y;
}

inline Vec sub(std::span<const double> a, std::span<const double> b) {
  Vec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

inline Vec add(std::span<const double> a, std::span<const double> b) {
  Vec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

inline Vec unit_vector(std::size_t n, std::size_t k) {
  Vec e(n, 0.0);
  e[k] = 1.0;
  return e;
}

inline Operator identity_operator() {
  return [](std::span<const double> v) { return Vec(v.begin(), v.end()); };
}

}  // namespace rsdeig
