#include "hypernorden/linalg.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "hypernorden/errors.hpp"

namespace hypernorden {

LuFactors lu_factor(Matrix a) {
  const int n = a.rows();
  if (n != a.cols()) throw DomainError("lu_factor: matrix must be square");
  const double scale = max_abs(a);
  const double tol = kSolvePivotTol * (scale > 0.0 ? scale : 1.0);

  LuFactors f;
  f.perm.resize(static_cast<std::size_t>(n));
  std::iota(f.perm.begin(), f.perm.end(), 0);

  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best < tol)
      throw SingularMatrixError("lu_factor: pivot below threshold at column " + std::to_string(k));
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(f.perm[static_cast<std::size_t>(k)], f.perm[static_cast<std::size_t>(piv)]);
    }
    const double inv = 1.0 / a(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double l = a(i, k) * inv;
      a(i, k) = l;
      if (l == 0.0) continue;
      for (int j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
    }
  }
  f.lu = std::move(a);
  return f;
}

Vector lu_solve(const LuFactors& f, Vector b) {
  const int n = f.lu.rows();
  Vector x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[i] = b[f.perm[static_cast<std::size_t>(i)]];
  for (int i = 1; i < n; ++i) {
    double s = x[i];
    for (int j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s / f.lu(i, i);
  }
  return x;
}

Vector solve(const Matrix& a, const Vector& b) { return lu_solve(lu_factor(a), b); }

Matrix invert(const Matrix& a) {
  const int n = a.rows();
  const LuFactors f = lu_factor(a);
  Matrix inv(n, n);
  Vector e(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Vector col = lu_solve(f, e);
    e[j] = 0.0;
    for (int i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

Vector jacobi_eigenvalues(Matrix a) {
  const int n = a.rows();
  const double scale = max_abs(a);
  if (scale == 0.0) return Vector(static_cast<std::size_t>(n), 0.0);
  const double stop = 1e-14 * scale;

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= stop) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= stop) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vector eig(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eig[i] = a(i, i);
  return eig;
}

Inertia inertia(const Matrix& a) {
  if (a.rows() != a.cols()) throw DomainError("inertia: matrix must be square");
  const double scale = max_abs(a);
  const double sym_tol = 1e-10 * std::max(1.0, scale);
  if (max_asymmetry(a) > sym_tol) throw DomainError("inertia: matrix not symmetric");

  const Vector eig = jacobi_eigenvalues(a);
  const double zero_tol = kInertiaZeroTol * scale;
  Inertia sig;
  for (double lambda : eig) {
    if (std::abs(lambda) <= zero_tol)
      ++sig.zero;
    else if (lambda > 0.0)
      ++sig.positive;
    else
      ++sig.negative;
  }
  return sig;
}

}  // namespace hypernorden
