#include "hypernorden/chart.hpp"

#include <cmath>
#include <sstream>

#include "hypernorden/errors.hpp"

namespace hypernorden {

namespace {

std::string point_to_string(const Vector& x) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ")";
  return os.str();
}

}  // namespace

ChartManifold::ChartManifold(int dim, std::string label) : dim_(dim), label_(std::move(label)) {
  if (dim <= 0 || dim % 4 != 0) throw DomainError("ChartManifold: dimension must be 4n, n >= 1");
}

ConstantChart::ConstantChart(Matrix g, std::array<Matrix, 3> J, std::string label)
    : ChartManifold(g.rows(), std::move(label)), g_(std::move(g)), J_(std::move(J)) {
  for (const Matrix& j : J_)
    if (j.rows() != dim() || j.cols() != dim())
      throw DomainError("ConstantChart: structure dimensions inconsistent");
}

ChartFields ConstantChart::fields(const Vector&) const {
  ChartFields f;
  f.g = g_;
  f.dg = Tensor3(dim(), dim(), dim());
  f.J = J_;
  for (int a = 0; a < 3; ++a) f.dJ[a] = Tensor3(dim(), dim(), dim());
  return f;
}

ExprChart::ExprChart(int dim, std::vector<Expr> g_entries,
                     std::array<std::vector<Expr>, 3> j_entries, std::string label)
    : ChartManifold(dim, std::move(label)), g_(std::move(g_entries)), J_(std::move(j_entries)) {
  const std::size_t want = static_cast<std::size_t>(dim) * dim;
  if (g_.size() != want) throw DomainError("ExprChart: metric table size mismatch");
  for (const auto& tab : J_)
    if (tab.size() != want) throw DomainError("ExprChart: structure table size mismatch");
}

ChartFields ExprChart::fields(const Vector& x) const {
  const int d = dim();
  std::vector<Dual1> seeds;
  seeds.reserve(x.size());
  for (int j = 0; j < d; ++j) seeds.push_back(Dual1::seed(x[j], d, j));
  const std::span<const Dual1> b(seeds);

  ChartFields f;
  f.g = Matrix(d, d);
  f.dg = Tensor3(d, d, d);
  auto fill = [&](const std::vector<Expr>& table, Matrix& out, Tensor3& dout) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const Expr& e = table[static_cast<std::size_t>(i) * d + j];
        if (!e) continue;
        const Dual1 v = evaluate(e, b);
        if (!is_finite(v))
          throw EvaluationDomainError("non-finite chart component at " + point_to_string(x));
        out(i, j) = v.value;
        if (!v.grad.empty())
          for (int k = 0; k < d; ++k) dout(k, i, j) = v.grad[k];
      }
  };
  fill(g_, f.g, f.dg);
  for (int a = 0; a < 3; ++a) {
    f.J[a] = Matrix(d, d);
    f.dJ[a] = Tensor3(d, d, d);
    fill(J_[a], f.J[a], f.dJ[a]);
  }
  return f;
}

ConformalChart::ConformalChart(ManifoldPtr base, Expr u)
    : ChartManifold(base->dim(), base->label() + " conformal[" + to_string(u) + "]"),
      base_(std::move(base)),
      u_(std::move(u)) {}

ChartFields ConformalChart::fields(const Vector& x) const {
  ChartFields f = base_->fields(x);
  const int d = dim();
  std::vector<Dual1> seeds;
  seeds.reserve(x.size());
  for (int j = 0; j < d; ++j) seeds.push_back(Dual1::seed(x[j], d, j));
  const Dual1 u = evaluate(u_, std::span<const Dual1>(seeds));
  if (!is_finite(u))
    throw EvaluationDomainError("non-finite conformal factor at " + point_to_string(x));
  const double s = std::exp(2.0 * u.value);
  Vector du(static_cast<std::size_t>(d), 0.0);
  if (!u.grad.empty())
    for (int k = 0; k < d; ++k) du[k] = u.grad[k];

  Tensor3 dg(d, d, d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        dg(k, i, j) = s * (2.0 * du[k] * f.g(i, j) + f.dg(k, i, j));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) f.g(i, j) *= s;
  f.dg = std::move(dg);
  return f;
}

ProductChart::ProductChart(ManifoldPtr first, ManifoldPtr second)
    : ChartManifold(first->dim() + second->dim(),
                    "product(" + first->label() + ", " + second->label() + ")"),
      first_(std::move(first)),
      second_(std::move(second)) {}

ChartFields ProductChart::fields(const Vector& x) const {
  const int d1 = first_->dim();
  const int d2 = second_->dim();
  const int d = d1 + d2;
  const Vector x1(x.begin(), x.begin() + d1);
  const Vector x2(x.begin() + d1, x.end());
  const ChartFields f1 = first_->fields(x1);
  const ChartFields f2 = second_->fields(x2);

  ChartFields f;
  f.g = Matrix(d, d);
  f.dg = Tensor3(d, d, d);
  auto place = [&](const Matrix& m, const Tensor3& dm, Matrix& out, Tensor3& dout, int off) {
    const int n = m.rows();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        out(off + i, off + j) = m(i, j);
        for (int k = 0; k < n; ++k) dout(off + k, off + i, off + j) = dm(k, i, j);
      }
  };
  place(f1.g, f1.dg, f.g, f.dg, 0);
  place(f2.g, f2.dg, f.g, f.dg, d1);
  for (int a = 0; a < 3; ++a) {
    f.J[a] = Matrix(d, d);
    f.dJ[a] = Tensor3(d, d, d);
    place(f1.J[a], f1.dJ[a], f.J[a], f.dJ[a], 0);
    place(f2.J[a], f2.dJ[a], f.J[a], f.dJ[a], d1);
  }
  return f;
}

PointGeometry point_geometry(const ChartManifold& m, const Vector& x) {
  if (static_cast<int>(x.size()) != m.dim())
    throw DomainError("point_geometry: point dimension mismatch");
  ChartFields f = m.fields(x);
  const int d = m.dim();

  const double sym_tol = 1e-12 * (1.0 + max_abs(f.g));
  if (max_asymmetry(f.g) > sym_tol)
    throw DomainError("point_geometry: metric not symmetric at " + point_to_string(x));

  const Inertia sig = inertia(f.g);
  if (sig.zero > 0)
    throw SingularMetricError("metric degenerate at " + point_to_string(x));
  if (sig.positive != d / 2 || sig.negative != d / 2)
    throw SignatureViolationError("metric signature (" + std::to_string(sig.positive) + "," +
                                  std::to_string(sig.negative) + ") is not neutral at " +
                                  point_to_string(x));

  PointGeometry pg;
  pg.x = x;
  pg.dim = d;
  pg.g_inv = invert(f.g);
  pg.g = std::move(f.g);
  pg.dg = std::move(f.dg);
  pg.J = std::move(f.J);
  pg.dJ = std::move(f.dJ);

  // Koszul formula; computed once per unordered pair so the symmetry
  // Gamma^k_ij = Gamma^k_ji is exact.
  pg.Gamma = Tensor3(d, d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (int l = 0; l < d; ++l)
          s += pg.g_inv(k, l) * (pg.dg(i, j, l) + pg.dg(j, i, l) - pg.dg(l, i, j));
        s *= 0.5;
        pg.Gamma(k, i, j) = s;
        pg.Gamma(k, j, i) = s;
      }
  return pg;
}

Tensor3 nabla_J(const PointGeometry& pg, int alpha) {
  if (alpha < 1 || alpha > 3) throw DomainError("nabla_J: alpha must be 1, 2 or 3");
  const int d = pg.dim;
  const Matrix& J = pg.J[alpha - 1];
  const Tensor3& dJ = pg.dJ[alpha - 1];
  Tensor3 out(d, d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) {
        double s = dJ(i, k, j);
        for (int l = 0; l < d; ++l)
          s += pg.Gamma(k, i, l) * J(l, j) - pg.Gamma(l, i, j) * J(k, l);
        out(i, k, j) = s;
      }
  return out;
}

Tensor3 fundamental_tensor(const PointGeometry& pg, const Tensor3& nabla_j) {
  const int d = pg.dim;
  Tensor3 F(d, d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) s += pg.g(l, k) * nabla_j(i, l, j);
        F(i, j, k) = s;
      }
  return F;
}

double fundamental_F(const PointGeometry& pg, int alpha, const Vector& X, const Vector& Y,
                     const Vector& Z) {
  const Tensor3 nj = nabla_J(pg, alpha);
  const int d = pg.dim;
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    if (X[i] == 0.0) continue;
    for (int l = 0; l < d; ++l) {
      double w = 0.0;
      for (int j = 0; j < d; ++j) w += nj(i, l, j) * Y[j];
      if (w == 0.0) continue;
      double gz = 0.0;
      for (int k = 0; k < d; ++k) gz += pg.g(l, k) * Z[k];
      s += X[i] * w * gz;
    }
  }
  return s;
}

LeeData lee_forms(const PointGeometry& pg) {
  const int d = pg.dim;
  LeeData lee;
  for (int a = 1; a <= 3; ++a) {
    const Tensor3 nj = nabla_J(pg, a);
    Vector theta(static_cast<std::size_t>(d), 0.0);
    for (int mth = 0; mth < d; ++mth) {
      double s = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          if (pg.g_inv(i, j) == 0.0) continue;
          double f = 0.0;
          for (int l = 0; l < d; ++l) f += pg.g(l, mth) * nj(i, l, j);
          s += pg.g_inv(i, j) * f;
        }
      theta[mth] = s;
    }
    lee.p[a - 1] = mat_vec(pg.g_inv, theta);
    lee.theta[a - 1] = std::move(theta);
  }
  return lee;
}

Vector nijenhuis(const ChartFields& f, int alpha, const Vector& X, const Vector& Y) {
  if (alpha < 1 || alpha > 3) throw DomainError("nijenhuis: alpha must be 1, 2 or 3");
  const int d = f.g.rows();
  const Matrix& J = f.J[alpha - 1];
  const Tensor3& dJ = f.dJ[alpha - 1];

  const Vector JX = mat_vec(J, X);
  const Vector JY = mat_vec(J, Y);

  // Directional derivative of the field q -> J(q) V along W, for constant V.
  auto dJ_along = [&](const Vector& W, const Vector& V) {
    Vector out(static_cast<std::size_t>(d), 0.0);
    for (int k = 0; k < d; ++k) {
      double s = 0.0;
      for (int l = 0; l < d; ++l) {
        if (W[l] == 0.0) continue;
        double row = 0.0;
        for (int j = 0; j < d; ++j) row += dJ(l, k, j) * V[j];
        s += W[l] * row;
      }
      out[k] = s;
    }
    return out;
  };

  // [JX, JY] with X, Y constant: (JX)^l d_l (JY)^k - (JY)^l d_l (JX)^k.
  const Vector bracket_JX_JY = vec_sub(dJ_along(JX, Y), dJ_along(JY, X));
  // [JX, Y] = -(Y^l d_l (JX)^k), [X, JY] = X^l d_l (JY)^k.
  const Vector bracket_JX_Y = vec_scaled(-1.0, dJ_along(Y, X));
  const Vector bracket_X_JY = dJ_along(X, Y);

  Vector n = bracket_JX_JY;  // [X,Y] = 0 for constant fields
  n = vec_sub(n, mat_vec(J, bracket_JX_Y));
  n = vec_sub(n, mat_vec(J, bracket_X_JY));
  return n;
}

Vector nijenhuis(const ChartManifold& m, const Vector& x, int alpha, const Vector& X,
                 const Vector& Y) {
  return nijenhuis(m.fields(x), alpha, X, Y);
}

}  // namespace hypernorden
