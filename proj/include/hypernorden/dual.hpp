#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "hypernorden/errors.hpp"
#include "hypernorden/matrix.hpp"

namespace hypernorden {

namespace detail {

// Gradients use the convention "empty vector == structural zero" so that
// constants never need to know the active dimension.
inline void grad_axpy(std::vector<double>& out, double c, const std::vector<double>& g) {
  if (c == 0.0 || g.empty()) return;
  if (out.empty()) out.assign(g.size(), 0.0);
  assert(out.size() == g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] += c * g[i];
}

inline std::vector<double> grad_combine(double ca, const std::vector<double>& ga, double cb,
                                        const std::vector<double>& gb) {
  std::vector<double> out;
  grad_axpy(out, ca, ga);
  grad_axpy(out, cb, gb);
  return out;
}

}  // namespace detail

/// First-order dual number: value plus gradient with respect to the active
/// coordinates. Arithmetic propagates exact derivatives (product/chain rule).
struct Dual1 {
  double value = 0.0;
  std::vector<double> grad;  // empty means identically zero

  Dual1() = default;
  Dual1(double v) : value(v) {}  // NOLINT: implicit lift of constants
  Dual1(double v, std::vector<double> g) : value(v), grad(std::move(g)) {}

  /// Seed for the independent variable with the given index.
  static Dual1 seed(double v, int dim, int index) {
    Dual1 d(v);
    d.grad.assign(static_cast<std::size_t>(dim), 0.0);
    d.grad[static_cast<std::size_t>(index)] = 1.0;
    return d;
  }
};

inline double value_of(double x) { return x; }
inline double value_of(const Dual1& d) { return d.value; }

inline Dual1 operator-(const Dual1& a) { return {-a.value, detail::grad_combine(-1.0, a.grad, 0.0, {})}; }

inline Dual1 operator+(const Dual1& a, const Dual1& b) {
  return {a.value + b.value, detail::grad_combine(1.0, a.grad, 1.0, b.grad)};
}
inline Dual1 operator-(const Dual1& a, const Dual1& b) {
  return {a.value - b.value, detail::grad_combine(1.0, a.grad, -1.0, b.grad)};
}
inline Dual1 operator*(const Dual1& a, const Dual1& b) {
  return {a.value * b.value, detail::grad_combine(b.value, a.grad, a.value, b.grad)};
}
inline Dual1 operator/(const Dual1& a, const Dual1& b) {
  const double inv = 1.0 / b.value;
  return {a.value * inv, detail::grad_combine(inv, a.grad, -a.value * inv * inv, b.grad)};
}

inline Dual1 compose(const Dual1& u, double f0, double f1) {
  return {f0, detail::grad_combine(f1, u.grad, 0.0, {})};
}

inline Dual1 exp(const Dual1& u) {
  const double e = std::exp(u.value);
  return compose(u, e, e);
}
inline Dual1 log(const Dual1& u) { return compose(u, std::log(u.value), 1.0 / u.value); }
inline Dual1 sin(const Dual1& u) { return compose(u, std::sin(u.value), std::cos(u.value)); }
inline Dual1 cos(const Dual1& u) { return compose(u, std::cos(u.value), -std::sin(u.value)); }
inline Dual1 sinh(const Dual1& u) { return compose(u, std::sinh(u.value), std::cosh(u.value)); }
inline Dual1 cosh(const Dual1& u) { return compose(u, std::cosh(u.value), std::sinh(u.value)); }
inline Dual1 sqrt(const Dual1& u) {
  const double s = std::sqrt(u.value);
  return compose(u, s, 0.5 / s);
}

/// Second-order dual number. The Hessian is stored as a packed lower triangle,
/// so symmetry is structural rather than numeric. There is deliberately no
/// conversion between Dual1 and Dual2.
struct Dual2 {
  double value = 0.0;
  std::vector<double> grad;  // empty means zero
  std::vector<double> hess;  // packed lower triangle, empty means zero

  Dual2() = default;
  Dual2(double v) : value(v) {}  // NOLINT: implicit lift of constants

  static Dual2 seed(double v, int dim, int index) {
    Dual2 d(v);
    d.grad.assign(static_cast<std::size_t>(dim), 0.0);
    d.grad[static_cast<std::size_t>(index)] = 1.0;
    return d;
  }

  static std::size_t packed_size(std::size_t dim) { return dim * (dim + 1) / 2; }
  static std::size_t packed_index(std::size_t i, std::size_t j) {
    if (i < j) std::swap(i, j);
    return i * (i + 1) / 2 + j;
  }
};

inline double value_of(const Dual2& d) { return d.value; }

namespace detail {

inline void hess_axpy(std::vector<double>& out, double c, const std::vector<double>& h) {
  if (c == 0.0 || h.empty()) return;
  if (out.empty()) out.assign(h.size(), 0.0);
  assert(out.size() == h.size());
  for (std::size_t i = 0; i < h.size(); ++i) out[i] += c * h[i];
}

// out += c * (x y^T + y x^T), packed lower triangle.
inline void hess_outer_sym(std::vector<double>& out, double c, const std::vector<double>& x,
                           const std::vector<double>& y) {
  if (c == 0.0 || x.empty() || y.empty()) return;
  assert(x.size() == y.size());
  const std::size_t d = x.size();
  if (out.empty()) out.assign(Dual2::packed_size(d), 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      out[Dual2::packed_index(i, j)] += c * (x[i] * y[j] + y[i] * x[j]);
}

// out += c * x x^T, packed lower triangle.
inline void hess_outer(std::vector<double>& out, double c, const std::vector<double>& x) {
  if (c == 0.0 || x.empty()) return;
  const std::size_t d = x.size();
  if (out.empty()) out.assign(Dual2::packed_size(d), 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j <= i; ++j) out[Dual2::packed_index(i, j)] += c * x[i] * x[j];
}

}  // namespace detail

inline Dual2 operator-(const Dual2& a) {
  Dual2 r(-a.value);
  detail::grad_axpy(r.grad, -1.0, a.grad);
  detail::hess_axpy(r.hess, -1.0, a.hess);
  return r;
}

inline Dual2 operator+(const Dual2& a, const Dual2& b) {
  Dual2 r(a.value + b.value);
  r.grad = detail::grad_combine(1.0, a.grad, 1.0, b.grad);
  detail::hess_axpy(r.hess, 1.0, a.hess);
  detail::hess_axpy(r.hess, 1.0, b.hess);
  return r;
}

inline Dual2 operator-(const Dual2& a, const Dual2& b) {
  Dual2 r(a.value - b.value);
  r.grad = detail::grad_combine(1.0, a.grad, -1.0, b.grad);
  detail::hess_axpy(r.hess, 1.0, a.hess);
  detail::hess_axpy(r.hess, -1.0, b.hess);
  return r;
}

inline Dual2 operator*(const Dual2& a, const Dual2& b) {
  Dual2 r(a.value * b.value);
  r.grad = detail::grad_combine(b.value, a.grad, a.value, b.grad);
  detail::hess_axpy(r.hess, b.value, a.hess);
  detail::hess_axpy(r.hess, a.value, b.hess);
  detail::hess_outer_sym(r.hess, 1.0, a.grad, b.grad);
  return r;
}

/// f(u) with f(u0) = f0, f'(u0) = f1, f''(u0) = f2.
inline Dual2 compose(const Dual2& u, double f0, double f1, double f2) {
  Dual2 r(f0);
  detail::grad_axpy(r.grad, f1, u.grad);
  detail::hess_axpy(r.hess, f1, u.hess);
  detail::hess_outer(r.hess, f2, u.grad);
  return r;
}

inline Dual2 operator/(const Dual2& a, const Dual2& b) {
  const double v = b.value;
  const Dual2 recip = compose(b, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
  return a * recip;
}

inline Dual2 exp(const Dual2& u) {
  const double e = std::exp(u.value);
  return compose(u, e, e, e);
}
inline Dual2 log(const Dual2& u) {
  const double v = u.value;
  return compose(u, std::log(v), 1.0 / v, -1.0 / (v * v));
}
inline Dual2 sin(const Dual2& u) {
  const double s = std::sin(u.value), c = std::cos(u.value);
  return compose(u, s, c, -s);
}
inline Dual2 cos(const Dual2& u) {
  const double s = std::sin(u.value), c = std::cos(u.value);
  return compose(u, c, -s, -c);
}
inline Dual2 sinh(const Dual2& u) {
  const double s = std::sinh(u.value), c = std::cosh(u.value);
  return compose(u, s, c, s);
}
inline Dual2 cosh(const Dual2& u) {
  const double s = std::sinh(u.value), c = std::cosh(u.value);
  return compose(u, c, s, c);
}
inline Dual2 sqrt(const Dual2& u) {
  const double s = std::sqrt(u.value);
  return compose(u, s, 0.5 / s, -0.25 / (s * u.value));
}

/// Integer power by repeated multiplication; works for any scalar with
/// arithmetic operators (double, Dual1, Dual2). Negative exponents divide.
template <class S>
S pow_int(const S& base, int e) {
  if (e < 0) return S(1.0) / pow_int(base, -e);
  S result(1.0);
  S acc = base;
  for (int k = e; k > 0; k >>= 1) {
    if (k & 1) result = result * acc;
    if (k > 1) acc = acc * acc;
  }
  return result;
}

inline bool is_finite(const Dual1& d) {
  if (!std::isfinite(d.value)) return false;
  for (double g : d.grad)
    if (!std::isfinite(g)) return false;
  return true;
}

inline bool is_finite(const Dual2& d) {
  if (!std::isfinite(d.value)) return false;
  for (double g : d.grad)
    if (!std::isfinite(g)) return false;
  for (double h : d.hess)
    if (!std::isfinite(h)) return false;
  return true;
}

/// Value and exact forward-mode Jacobian of a vector map at x.
/// F must accept std::span<const Dual1> and return std::vector<Dual1>.
template <class F>
std::pair<Vector, Matrix> jacobian(F&& f, const Vector& x) {
  const int d = static_cast<int>(x.size());
  std::vector<Dual1> seeds;
  seeds.reserve(x.size());
  for (int j = 0; j < d; ++j) seeds.push_back(Dual1::seed(x[j], d, j));
  const std::vector<Dual1> out = f(std::span<const Dual1>(seeds));
  Vector value(out.size(), 0.0);
  Matrix jac(static_cast<int>(out.size()), d);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!is_finite(out[i]))
      throw EvaluationDomainError("non-finite value in forward-mode evaluation");
    value[i] = out[i].value;
    if (!out[i].grad.empty())
      for (int j = 0; j < d; ++j) jac(static_cast<int>(i), j) = out[i].grad[j];
  }
  return {std::move(value), std::move(jac)};
}

struct HessianResult {
  double value = 0.0;
  Vector grad;
  Matrix hess;
};

/// Value, gradient and exact symmetric Hessian of a scalar map at x.
/// F must accept std::span<const Dual2> and return Dual2.
template <class F>
HessianResult hessian(F&& f, const Vector& x) {
  const int d = static_cast<int>(x.size());
  std::vector<Dual2> seeds;
  seeds.reserve(x.size());
  for (int j = 0; j < d; ++j) seeds.push_back(Dual2::seed(x[j], d, j));
  const Dual2 out = f(std::span<const Dual2>(seeds));
  if (!is_finite(out)) throw EvaluationDomainError("non-finite value in forward-mode evaluation");
  HessianResult r;
  r.value = out.value;
  r.grad.assign(static_cast<std::size_t>(d), 0.0);
  if (!out.grad.empty())
    for (int j = 0; j < d; ++j) r.grad[j] = out.grad[j];
  r.hess = Matrix(d, d);
  if (!out.hess.empty())
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        r.hess(i, j) = out.hess[Dual2::packed_index(static_cast<std::size_t>(i),
                                                    static_cast<std::size_t>(j))];
  return r;
}

}  // namespace hypernorden
