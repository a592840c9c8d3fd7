#pragma once

#include "hypernorden/immersion.hpp"

namespace hypernorden {

/// Built-in constructions. Chart coordinates are grouped globally as
/// x^i -> x_i, y^i -> x_{n+i}, u^i -> x_{2n+i}, v^i -> x_{3n+i}.

/// The flat hyper-Kaehler model on R^{4n}: constant structure matrices
///   J1: dx_i -> dy_i, dy_i -> -dx_i, du_i -> -dv_i, dv_i -> du_i
///   J2: dx_i -> du_i, dy_i -> dv_i, du_i -> -dx_i, dv_i -> -dy_i
///   J3: dx_i -> -dv_i, dy_i -> du_i, du_i -> -dy_i, dv_i -> dx_i
/// and the constant neutral metric diag(-I_2n, +I_2n).
ManifoldPtr flat_k(int n);

/// The three structure matrices of flat_k, generated from the block pattern.
std::array<Matrix, 3> flat_structures(int n);

/// Conformal family exp(2u) * flat_k(n); a W-manifold for nonconstant u.
ManifoldPtr conformal_w(int n, Expr u);

/// Coordinate submanifold of a 4n-dimensional ambient built on the flat
/// chart layout: the 4m source coordinates land in the first m slots of each
/// of the four coordinate groups, the remaining slots sit at the constant
/// section. Requires 1 <= m < n.
Immersion coordinate_immersion(ManifoldPtr ambient, int m, const Vector& section);
Immersion coordinate_immersion(ManifoldPtr ambient, int m, double section = 0.0);

/// Product manifold with block-diagonal structures and metric, plus the two
/// natural factor embeddings (the complementary factor provides the normal
/// bundle).
struct ProductBundle {
  ManifoldPtr manifold;
  ManifoldPtr first;
  ManifoldPtr second;
};

ProductBundle product(ManifoldPtr first, ManifoldPtr second);

/// Natural embedding of one factor at a fixed section of the other factor.
/// which = 1 embeds the first factor, which = 2 the second.
Immersion factor_immersion(const ProductBundle& prod, int which, const Vector& section);
Immersion factor_immersion(const ProductBundle& prod, int which, double section = 0.0);

/// Residuals of the product interrelations: additivity of the fundamental
/// tensors over frame triples and additivity of the Lee forms.
struct ProductRelationResiduals {
  ResidualStat fundamental;  // F_bar = F + F'
  ResidualStat lee;          // theta_bar = theta + theta'
  /// Worst |F_bar| over triples with at least one argument from each factor;
  /// zero when one factor is hyper-Kaehler (the support specialization).
  ResidualStat mixed_support;
};

ProductRelationResiduals verify_product_relations(const ProductBundle& prod,
                                                  std::span<const Vector> points);

}  // namespace hypernorden
