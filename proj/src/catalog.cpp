#include "hypernorden/catalog.hpp"

#include <cmath>

#include "hypernorden/errors.hpp"

namespace hypernorden {

std::array<Matrix, 3> flat_structures(int n) {
  const int d = 4 * n;
  Matrix j1(d, d), j2(d, d), j3(d, d);
  for (int i = 0; i < n; ++i) {
    const int x = i, y = n + i, u = 2 * n + i, v = 3 * n + i;
    j1(y, x) = 1.0;   // dx -> dy
    j1(x, y) = -1.0;  // dy -> -dx
    j1(v, u) = -1.0;  // du -> -dv
    j1(u, v) = 1.0;   // dv -> du

    j2(u, x) = 1.0;   // dx -> du
    j2(v, y) = 1.0;   // dy -> dv
    j2(x, u) = -1.0;  // du -> -dx
    j2(y, v) = -1.0;  // dv -> -dy

    j3(v, x) = -1.0;  // dx -> -dv
    j3(u, y) = 1.0;   // dy -> du
    j3(y, u) = -1.0;  // du -> -dy
    j3(x, v) = 1.0;   // dv -> dx
  }
  return {std::move(j1), std::move(j2), std::move(j3)};
}

ManifoldPtr flat_k(int n) {
  if (n < 1) throw DomainError("flat_k: n must be at least 1");
  const int d = 4 * n;
  Matrix g(d, d);
  for (int i = 0; i < d; ++i) g(i, i) = (i < 2 * n) ? -1.0 : 1.0;
  return std::make_shared<ConstantChart>(std::move(g), flat_structures(n),
                                         "flat_k(" + std::to_string(n) + ")");
}

ManifoldPtr conformal_w(int n, Expr u) { return conformal_transform(flat_k(n), std::move(u)); }

Immersion coordinate_immersion(ManifoldPtr ambient, int m, const Vector& section) {
  const int n = ambient->quarter();
  if (m < 1 || m >= n) throw DomainError("coordinate_immersion: need 1 <= m < n");
  if (static_cast<int>(section.size()) != 4 * (n - m))
    throw DomainError("coordinate_immersion: section needs 4(n-m) entries");

  std::vector<Expr> comps(static_cast<std::size_t>(4 * n));
  int fixed = 0;
  for (int group = 0; group < 4; ++group)
    for (int i = 0; i < n; ++i) {
      const int ambient_slot = group * n + i;
      if (i < m)
        comps[static_cast<std::size_t>(ambient_slot)] = expr_variable(group * m + i + 1);
      else
        comps[static_cast<std::size_t>(ambient_slot)] = expr_literal(section[fixed++]);
    }
  return make_immersion(std::move(ambient), m, std::move(comps),
                        "coordinate_immersion(m=" + std::to_string(m) + ")");
}

Immersion coordinate_immersion(ManifoldPtr ambient, int m, double section) {
  const int n = ambient->quarter();
  if (m < 1 || m >= n) throw DomainError("coordinate_immersion: need 1 <= m < n");
  return coordinate_immersion(std::move(ambient), m,
                              Vector(static_cast<std::size_t>(4 * (n - m)), section));
}

ProductBundle product(ManifoldPtr first, ManifoldPtr second) {
  ProductBundle b;
  b.manifold = std::make_shared<ProductChart>(first, second);
  b.first = std::move(first);
  b.second = std::move(second);
  return b;
}

Immersion factor_immersion(const ProductBundle& prod, int which, const Vector& section) {
  const int d1 = prod.first->dim();
  const int d2 = prod.second->dim();
  if (which != 1 && which != 2) throw DomainError("factor_immersion: which must be 1 or 2");
  const int own = (which == 1) ? d1 : d2;
  const int other = (which == 1) ? d2 : d1;
  if (static_cast<int>(section.size()) != other)
    throw DomainError("factor_immersion: section needs the complementary dimension");

  std::vector<Expr> comps(static_cast<std::size_t>(d1 + d2));
  for (int k = 0; k < d1 + d2; ++k) {
    const bool in_first = k < d1;
    if ((which == 1) == in_first)
      comps[static_cast<std::size_t>(k)] = expr_variable(in_first ? k + 1 : k - d1 + 1);
    else
      comps[static_cast<std::size_t>(k)] = expr_literal(section[in_first ? k : k - d1]);
  }
  return make_immersion(prod.manifold, own / 4, std::move(comps),
                        "factor" + std::to_string(which) + " of " + prod.manifold->label());
}

Immersion factor_immersion(const ProductBundle& prod, int which, double section) {
  const int other = (which == 1) ? prod.second->dim() : prod.first->dim();
  return factor_immersion(prod, which, Vector(static_cast<std::size_t>(other), section));
}

ProductRelationResiduals verify_product_relations(const ProductBundle& prod,
                                                  std::span<const Vector> points) {
  ProductRelationResiduals out;
  const int d1 = prod.first->dim();
  const int d2 = prod.second->dim();
  const int d = d1 + d2;

  for (const Vector& x : points) {
    const Vector x1(x.begin(), x.begin() + d1);
    const Vector x2(x.begin() + d1, x.end());

    const PointGeometry pg = point_geometry(*prod.manifold, x);
    const PointGeometry pg1 = point_geometry(*prod.first, x1);
    const PointGeometry pg2 = point_geometry(*prod.second, x2);

    std::array<Tensor3, 3> F, F1, F2;
    for (int a = 0; a < 3; ++a) {
      F[a] = fundamental_tensor(pg, nabla_J(pg, a + 1));
      F1[a] = fundamental_tensor(pg1, nabla_J(pg1, a + 1));
      F2[a] = fundamental_tensor(pg2, nabla_J(pg2, a + 1));
    }
    const LeeData lee = lee_forms(pg);
    const LeeData lee1 = lee_forms(pg1);
    const LeeData lee2 = lee_forms(pg2);

    IdentityResidual rf, rmix;
    for (int a = 0; a < 3; ++a)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k) {
            const bool f1 = i < d1 && j < d1 && k < d1;
            const bool f2 = i >= d1 && j >= d1 && k >= d1;
            double rhs = 0.0;
            if (f1)
              rhs = F1[a](i, j, k);
            else if (f2)
              rhs = F2[a](i - d1, j - d1, k - d1);
            rf.add(F[a](i, j, k), rhs);
            if (!f1 && !f2) rmix.add(F[a](i, j, k), 0.0);
          }
    out.fundamental.add(rf.normalized());
    out.mixed_support.add(rmix.normalized());

    IdentityResidual rl;
    for (int a = 0; a < 3; ++a)
      for (int k = 0; k < d; ++k) {
        const double rhs = (k < d1) ? lee1.theta[a][k] : lee2.theta[a][k - d1];
        rl.add(lee.theta[a][k], rhs);
      }
    out.lee.add(rl.normalized());
  }
  return out;
}

}  // namespace hypernorden
