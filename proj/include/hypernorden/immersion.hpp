#pragma once

#include <functional>
#include <memory>

#include "hypernorden/chart.hpp"
#include "hypernorden/classify.hpp"

namespace hypernorden {

/// A 4m-dimensional immersion into a 4n-dimensional chart manifold (m < n),
/// with components given as expressions in the source coordinates x1..x{4m}.
struct Immersion {
  ManifoldPtr ambient;
  int m = 0;                     // quarter-dimension of the source
  std::vector<Expr> components;  // size ambient->dim()
  std::string label;

  int source_dim() const { return 4 * m; }

  Vector map_point(const Vector& p) const;

  /// Value and exact Jacobian (first-order dual sweep).
  void jet1(const Vector& p, Vector& phi, Matrix& T) const;

  /// Value, Jacobian and exact component Hessians H(k,a,b) = d_a d_b phi^k
  /// (second-order dual sweep).
  void jet2(const Vector& p, Vector& phi, Matrix& T, Tensor3& H) const;
};

using ImmersionPtr = std::shared_ptr<const Immersion>;

Immersion make_immersion(ManifoldPtr ambient, int m, std::vector<Expr> components,
                         std::string label);

/// Pointwise frame of a submanifold: the tangent basis (Jacobian columns),
/// a basis of the g-orthogonal normal complement, and the Gram data of both
/// bundles. No orthonormalization is attempted; index raising always goes
/// through the Gram inverses, which stays stable near null directions.
struct Frame {
  Vector p;
  Vector phi;
  Matrix T;                 // dim x 4m
  Matrix N;                 // dim x (dim - 4m)
  Matrix g_amb;             // ambient metric at phi
  Matrix g_ind;             // T^t g T
  Matrix g_ind_inv;
  Matrix gram_normal;       // N^t g N
  Matrix gram_normal_inv;

  /// Coordinates of the tangential part of V in the tangent basis.
  Vector tangent_coords(const Vector& v) const;
  /// Coordinates of the normal part of V in the normal basis.
  Vector normal_coords(const Vector& v) const;
  Vector project_tangent(const Vector& v) const;
  Vector project_normal(const Vector& v) const;
  /// Ambient representative of a tangent vector given in source coordinates.
  Vector push(const Vector& x_sub) const;
};

/// Builds the frame at p. Throws RankDeficientImmersionError when dphi drops
/// rank and DegenerateInducedMetricError when the induced metric is not of
/// signature (2m,2m,0).
Frame frame_at(const Immersion& imm, const Vector& p);

/// Worst normalized size of the normal part of J_alpha T_i over alpha and the
/// tangent basis; zero for holomorphic submanifolds.
double holomorphy_residual(const Immersion& imm, const Vector& p);

/// Everything the submanifold operations need at one point: the frame, the
/// ambient geometry bundle at phi(p), the immersion Hessians, the ambient Lee
/// data and the tangential/normal split of the Lee covectors.
struct SubPointData {
  Frame frame;
  PointGeometry ambient;
  Tensor3 phi_hess;                // (k,a,b)
  Tensor3 h;                       // second fundamental form, (k,a,b) ambient components
  LeeData lee;
  std::array<Vector, 3> p_top;     // tangential parts of the Lee vectors
  std::array<Vector, 3> p_bot;     // normal parts
};

SubPointData sub_point_data(const Immersion& imm, const Vector& p);

/// Second fundamental form h(X,Y) in ambient components; X, Y are tangent
/// vectors in source coordinates, extended with constant coefficients in the
/// coordinate tangent frame.
Vector second_fundamental(const Immersion& imm, const Vector& p, const Vector& X,
                          const Vector& Y);
Vector second_fundamental(const SubPointData& spd, const Vector& X, const Vector& Y);

/// Shape operator A_N X in source coordinates, solved from the tangential
/// Gram system g(A_N X, T_b) = g(h(X, T_b), N).
Vector shape_operator(const Immersion& imm, const Vector& p, const Vector& n_ambient,
                      const Vector& X);
Vector shape_operator(const SubPointData& spd, const Vector& n_ambient, const Vector& X);

/// Normal vector field along the submanifold, given by its value and its
/// Jacobian with respect to the source coordinates.
struct NormalField {
  std::function<Vector(const Vector&)> value;  // ambient components
  std::function<Matrix(const Vector&)> jac;    // dim x 4m
};

/// Constant ambient coefficients (a normal field only where the normal
/// bundle happens to be constant, e.g. coordinate immersions).
NormalField constant_normal_field(const Immersion& imm, Vector n0);

/// Smooth normal field q -> P_normal(q) n0 obtained by projecting constant
/// coefficients onto the normal bundle; equals n0 wherever n0 is normal.
NormalField projected_normal_field(const Immersion& imm, Vector n0);

/// q -> J_alpha(phi(q)) inner(q).
NormalField structure_image_field(const Immersion& imm, int alpha, NormalField inner);

struct WeingartenSplit {
  Vector shape;         // A_N X in source coordinates
  Vector normal_deriv;  // D_X N in ambient components
};

/// Weingarten split of nabla_X N for a normal field. Throws DomainError when
/// field(p) is not normal within 1e-8.
WeingartenSplit normal_derivative(const Immersion& imm, const Vector& p, const NormalField& field,
                                  const Vector& X);

/// Mean curvature vector C = (1/4m) g_ind^{ab} h(T_a, T_b), ambient components.
Vector mean_curvature(const Immersion& imm, const Vector& p);
Vector mean_curvature(const SubPointData& spd);

/// The submanifold as a first-class chart manifold of dimension 4m: pullback
/// metric dphi^t g dphi and the structures restricted to the tangent frame,
/// with exact first derivatives assembled from the immersion jets.
ManifoldPtr induced_manifold(ImmersionPtr imm);

}  // namespace hypernorden
