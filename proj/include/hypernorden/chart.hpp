#pragma once

#include <array>
#include <memory>
#include <string>

#include "hypernorden/expr.hpp"
#include "hypernorden/linalg.hpp"
#include "hypernorden/matrix.hpp"

namespace hypernorden {

/// Metric and structure data of a chart manifold at one point, with exact
/// first derivatives. dg(k,i,j) = d_k g_ij, dJ[a](k,i,j) = d_k (J_a)^i_j.
struct ChartFields {
  Matrix g;
  Tensor3 dg;
  std::array<Matrix, 3> J;
  std::array<Tensor3, 3> dJ;
};

/// A 4n-dimensional manifold described on a single coordinate chart by a
/// pseudo-Riemannian metric of signature (2n,2n) and a triple of almost
/// complex structures. Implementations supply field values together with
/// exact first derivatives, which is all the downstream geometry needs.
class ChartManifold {
 public:
  ChartManifold(int dim, std::string label);
  virtual ~ChartManifold() = default;

  int dim() const { return dim_; }
  /// n with dim = 4n.
  int quarter() const { return dim_ / 4; }
  const std::string& label() const { return label_; }

  virtual ChartFields fields(const Vector& x) const = 0;

 private:
  int dim_;
  std::string label_;
};

using ManifoldPtr = std::shared_ptr<const ChartManifold>;

/// Constant metric and structure matrices (the flat models).
class ConstantChart final : public ChartManifold {
 public:
  ConstantChart(Matrix g, std::array<Matrix, 3> J, std::string label);
  ChartFields fields(const Vector& x) const override;

 private:
  Matrix g_;
  std::array<Matrix, 3> J_;
};

/// Metric and structure components given as expressions in the chart
/// coordinates. Null entries are identically zero.
class ExprChart final : public ChartManifold {
 public:
  ExprChart(int dim, std::vector<Expr> g_entries, std::array<std::vector<Expr>, 3> j_entries,
            std::string label);
  ChartFields fields(const Vector& x) const override;

 private:
  std::vector<Expr> g_;                  // row-major dim x dim
  std::array<std::vector<Expr>, 3> J_;   // row-major dim x dim
};

/// Conformal change g -> exp(2 u(x)) g with the structures left untouched.
class ConformalChart final : public ChartManifold {
 public:
  ConformalChart(ManifoldPtr base, Expr u);
  ChartFields fields(const Vector& x) const override;

  const ManifoldPtr& base() const { return base_; }
  const Expr& factor() const { return u_; }

 private:
  ManifoldPtr base_;
  Expr u_;
};

/// Product manifold with block-diagonal metric and structures.
class ProductChart final : public ChartManifold {
 public:
  ProductChart(ManifoldPtr first, ManifoldPtr second);
  ChartFields fields(const Vector& x) const override;

  const ManifoldPtr& first() const { return first_; }
  const ManifoldPtr& second() const { return second_; }

 private:
  ManifoldPtr first_;
  ManifoldPtr second_;
};

/// Pointwise geometry bundle: metric, inverse, Christoffel symbols and the
/// structure tensors with their derivatives. Gamma(k,i,j) = Gamma^k_ij.
struct PointGeometry {
  Vector x;
  Matrix g;
  Matrix g_inv;
  Tensor3 dg;
  Tensor3 Gamma;
  std::array<Matrix, 3> J;
  std::array<Tensor3, 3> dJ;
  int dim = 0;
};

/// Assembles the geometry bundle at x. Throws SingularMetricError when the
/// metric is degenerate and SignatureViolationError when the signature is not
/// (2n,2n,0). Derivatives come from the chart's exact field derivatives; the
/// connection is the Koszul formula
///   Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij).
PointGeometry point_geometry(const ChartManifold& m, const Vector& x);

/// Covariant derivative of a structure: out(i,k,j) = (nabla_i J_alpha)^k_j
///   = d_i J^k_j + Gamma^k_il J^l_j - Gamma^l_ij J^k_l.      alpha in {1,2,3}
Tensor3 nabla_J(const PointGeometry& pg, int alpha);

/// Full fundamental tensor F_alpha(i,j,k) = g((nabla_i J_alpha) e_j, e_k).
Tensor3 fundamental_tensor(const PointGeometry& pg, const Tensor3& nabla_j);

/// F_alpha(X,Y,Z) contracted from nabla_J.
double fundamental_F(const PointGeometry& pg, int alpha, const Vector& X, const Vector& Y,
                     const Vector& Z);

/// Lee forms theta_alpha(Z) = g^{ij} F_alpha(e_i,e_j,Z) in the coordinate
/// frame, and their metric-dual vectors p_alpha = g^{-1} theta_alpha.
struct LeeData {
  std::array<Vector, 3> theta;  // lower index
  std::array<Vector, 3> p;      // upper index
};

LeeData lee_forms(const PointGeometry& pg);

/// Nijenhuis tensor of J_alpha on constant coordinate fields X, Y:
///   N(X,Y) = [JX,JY] - [X,Y] - J[JX,Y] - J[X,JY].
Vector nijenhuis(const ChartManifold& m, const Vector& x, int alpha, const Vector& X,
                 const Vector& Y);

/// Same, reusing already evaluated chart fields.
Vector nijenhuis(const ChartFields& f, int alpha, const Vector& X, const Vector& Y);

}  // namespace hypernorden
