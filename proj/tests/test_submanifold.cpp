#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hypernorden/catalog.hpp"
#include "hypernorden/halton.hpp"
#include "hypernorden/theorems.hpp"
#include "oracles.hpp"

using namespace hypernorden;

namespace {

ManifoldPtr conformal_flat(int n, const std::string& u) {
  return conformal_transform(flat_k(n), parse_expr(u, 4 * n));
}

// For coordinate_immersion(m=1, n=2) the tangent chart slots are x1,x3,x5,x7
// and the normal slots are x2,x4,x6,x8.
Immersion scenario_immersion(const std::string& u, double section = 0.0) {
  return coordinate_immersion(conformal_flat(2, u), 1, section);
}

Immersion custom_plane(ManifoldPtr ambient, const std::array<int, 4>& slots) {
  std::vector<Expr> comps(static_cast<std::size_t>(ambient->dim()), expr_literal(0.0));
  for (int v = 0; v < 4; ++v) comps[static_cast<std::size_t>(slots[v])] = expr_variable(v + 1);
  return make_immersion(std::move(ambient), 1, std::move(comps), "plane");
}

Vector basis_vec(int dim, int i) {
  Vector e(static_cast<std::size_t>(dim), 0.0);
  e[static_cast<std::size_t>(i)] = 1.0;
  return e;
}

}  // namespace

TEST_CASE("coordinate immersion frame spans the expected coordinate directions") {
  const Immersion imm = coordinate_immersion(flat_k(2), 1);
  const Frame fr = frame_at(imm, Vector{0.2, -0.4, 0.6, 0.1});
  REQUIRE(fr.T.cols() == 4);
  REQUIRE(fr.N.cols() == 4);
  // Tangent columns are the ambient directions x1, x3, x5, x7.
  const int tangent_slots[4] = {0, 2, 4, 6};
  for (int a = 0; a < 4; ++a)
    for (int k = 0; k < 8; ++k)
      CHECK(fr.T(k, a) == ((k == tangent_slots[a]) ? 1.0 : 0.0));
  // Normal columns live entirely in the complementary slots.
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 8; ++k)
      if (k % 2 == 0) CHECK(fr.N(k, j) == 0.0);
  // g-orthogonality of the two bundles.
  const Matrix cross = transpose(fr.T) * fr.g_amb * fr.N;
  CHECK(max_abs(cross) < 1e-10);
  CHECK(inertia(fr.g_ind) == Inertia{2, 2, 0});
}

TEST_CASE("rank-deficient immersions are rejected") {
  std::vector<Expr> comps(8, expr_literal(0.0));
  comps[0] = expr_variable(1);
  comps[1] = expr_variable(2);
  comps[2] = expr_variable(3);
  comps[3] = expr_variable(1);  // repeated component, x4 unused: rank 3
  const Immersion imm = make_immersion(flat_k(2), 1, std::move(comps), "rank-drop");
  CHECK_THROWS_AS(frame_at(imm, Vector(4, 0.1)), RankDeficientImmersionError);
}

TEST_CASE("null-plane immersions are rejected as degenerate") {
  // Columns dx_i + du_i, dy_i + dv_i: a totally lightlike 4-plane.
  std::vector<Expr> comps(8);
  for (int v = 0; v < 4; ++v) {
    comps[static_cast<std::size_t>(v)] = expr_variable(v + 1);
    comps[static_cast<std::size_t>(v + 4)] = expr_variable(v + 1);
  }
  const Immersion imm = make_immersion(flat_k(2), 1, std::move(comps), "null-plane");
  CHECK_THROWS_AS(frame_at(imm, Vector(4, 0.0)), DegenerateInducedMetricError);
}

TEST_CASE("holomorphy residual vanishes for coordinate immersions") {
  const Immersion imm = coordinate_immersion(flat_k(2), 1);
  for (const Vector& p : halton_points(4, 4, 1.0)) CHECK(holomorphy_residual(imm, p) < 1e-12);
}

TEST_CASE("holomorphy residual of index-subset planes vanishes") {
  // Second-index slots x2,x4,x6,x8 form the complementary holomorphic plane.
  const Immersion imm = custom_plane(flat_k(2), {1, 3, 5, 7});
  CHECK(holomorphy_residual(imm, Vector(4, 0.25)) < 1e-12);
}

TEST_CASE("planes mixing index groups non-quaternionically fail holomorphy") {
  // span{dx1, dy1, du1, du2}: J1 sends du1 to -dv1, outside the span.
  const Immersion a = custom_plane(flat_k(2), {0, 2, 4, 5});
  CHECK(holomorphy_residual(a, Vector(4, 0.1)) > 0.1);
  // span{dx1, dy1, du2, dv2} is J1-invariant but J2 sends dx1 to du1,
  // outside the span, so the full structure does not preserve it.
  const Immersion b = custom_plane(flat_k(2), {0, 2, 5, 7});
  CHECK(holomorphy_residual(b, Vector(4, 0.1)) > 0.1);
}

TEST_CASE("second fundamental form vanishes exactly in the flat model") {
  const Immersion imm = coordinate_immersion(flat_k(2), 1);
  const Vector p{0.3, -0.2, 0.5, 0.7};
  const SubPointData spd = sub_point_data(imm, p);
  CHECK(max_abs(spd.h) == 0.0);
  const Vector h = second_fundamental(imm, p, Vector{1, 2, 3, 4}, Vector{0, 1, -1, 2});
  CHECK(max_abs(h) < 1e-12);
}

TEST_CASE("second fundamental form is symmetric") {
  const Immersion imm = scenario_immersion("x2 + 0.5*x4");
  std::mt19937 rng(4711);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (const Vector& p : halton_points(8, 4, 1.0)) {
    const SubPointData spd = sub_point_data(imm, p);
    for (int pair = 0; pair < 10; ++pair) {
      Vector X(4), Y(4);
      for (int i = 0; i < 4; ++i) {
        X[i] = dist(rng);
        Y[i] = dist(rng);
      }
      const Vector hxy = second_fundamental(spd, X, Y);
      const Vector hyx = second_fundamental(spd, Y, X);
      for (int k = 0; k < 8; ++k)
        CHECK(std::abs(hxy[k] - hyx[k]) < 1e-10 * (1.0 + std::abs(hxy[k])));
    }
  }
}

TEST_CASE("normal-coordinate conformal factors make the immersion umbilical") {
  const Immersion imm = scenario_immersion("x2");
  for (const Vector& p : halton_points(6, 4, 1.0)) {
    const SubPointData spd = sub_point_data(imm, p);
    const Vector C = mean_curvature(spd);
    CHECK(max_abs(C) > 1e-3);
    IdentityResidual r;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int k = 0; k < 8; ++k)
          r.add(spd.h(k, a, b), spd.frame.g_ind(a, b) * C[k]);
    CHECK(r.normalized() < 1e-8);
  }
}

TEST_CASE("second fundamental form agrees with the finite-difference oracle") {
  const Immersion imm = scenario_immersion("x2");
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (const Vector& p : halton_points(3, 4, 0.8)) {
    const SubPointData spd = sub_point_data(imm, p);
    Vector X(4), Y(4);
    for (int i = 0; i < 4; ++i) {
      X[i] = dist(rng);
      Y[i] = dist(rng);
    }
    const Vector engine = second_fundamental(spd, X, Y);
    const Vector fd = oracles::fd_second_fundamental(imm, p, X, Y);
    for (int k = 0; k < 8; ++k)
      CHECK(std::abs(engine[k] - fd[k]) <= 1e-5 * (1.0 + std::abs(fd[k])));
  }
}

TEST_CASE("shape operator vanishes in the flat model") {
  const Immersion imm = coordinate_immersion(flat_k(2), 1);
  const SubPointData spd = sub_point_data(imm, Vector{0.1, 0.2, 0.3, 0.4});
  const Vector N = basis_vec(8, 1);  // dx2 is normal
  const Vector A = shape_operator(spd, N, Vector{1.0, -1.0, 0.5, 2.0});
  CHECK(max_abs(A) < 1e-12);
}

TEST_CASE("shape operator duality identity") {
  const Immersion imm = scenario_immersion("x2 + sin(x4)");
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (const Vector& p : halton_points(4, 4, 1.0)) {
    const SubPointData spd = sub_point_data(imm, p);
    for (int bn = 0; bn < 4; ++bn) {
      Vector N(8, 0.0);
      for (int k = 0; k < 8; ++k) N[k] = spd.frame.N(k, bn);
      Vector X(4), Y(4);
      for (int i = 0; i < 4; ++i) {
        X[i] = dist(rng);
        Y[i] = dist(rng);
      }
      // g(A_N X, Y) computed through the induced metric against g(h(X,Y), N).
      const Vector A = shape_operator(spd, N, X);
      const double lhs = bilinear(spd.frame.g_ind, A, Y);
      const Vector h = second_fundamental(spd, X, Y);
      const double rhs = bilinear(spd.frame.g_amb, h, N);
      CHECK(std::abs(lhs - rhs) < 1e-9 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST_CASE("Hermitian shape-operator identity on a W ambient") {
  const Immersion imm = scenario_immersion("x2");
  const int n = 2;
  const double c1 = 1.0 / (2.0 * (2.0 * n - 1.0));
  for (const Vector& p : halton_points(4, 4, 1.0)) {
    const SubPointData spd = sub_point_data(imm, p);
    IdentityResidual r;
    for (int bn = 0; bn < 4; ++bn) {
      Vector N(8, 0.0);
      for (int k = 0; k < 8; ++k) N[k] = spd.frame.N(k, bn);
      const Vector JN = mat_vec(spd.ambient.J[0], N);
      for (int a = 0; a < 4; ++a) {
        const Vector ea = basis_vec(4, a);
        const Vector lhs = spd.frame.push(shape_operator(spd, JN, ea));
        const Vector jax = mat_vec(spd.ambient.J[0], spd.frame.push(shape_operator(spd, N, ea)));
        const double thN = vec_dot(spd.lee.theta[0], N);
        const double thJN = vec_dot(spd.lee.theta[0], JN);
        Vector Ta(8, 0.0);
        for (int k = 0; k < 8; ++k) Ta[k] = spd.frame.T(k, a);
        const Vector JTa = mat_vec(spd.ambient.J[0], Ta);
        for (int k = 0; k < 8; ++k)
          r.add(lhs[k], jax[k] + c1 * (thN * Ta[k] + thJN * JTa[k]));
      }
    }
    CHECK(r.normalized() < 1e-7);
  }
}

TEST_CASE("normal derivative of a constant field vanishes in the flat model") {
  const Immersion imm = coordinate_immersion(flat_k(2), 1);
  const NormalField f = constant_normal_field(imm, basis_vec(8, 3));
  const WeingartenSplit split = normal_derivative(imm, Vector{0.1, 0.2, 0.3, 0.4}, f,
                                                  Vector{1.0, 0.5, -0.25, 2.0});
  CHECK(max_abs(split.shape) == 0.0);
  CHECK(max_abs(split.normal_deriv) == 0.0);
}

TEST_CASE("normal_derivative rejects fields that are not normal at the point") {
  const Immersion imm = coordinate_immersion(flat_k(2), 1);
  const NormalField f = constant_normal_field(imm, basis_vec(8, 0));  // tangent direction
  CHECK_THROWS_AS(normal_derivative(imm, Vector(4, 0.1), f, basis_vec(4, 0)), DomainError);
}

TEST_CASE("normal connection commutes with the structures on a W ambient") {
  const Immersion imm = scenario_immersion("x2 + 0.3*x6");
  for (const Vector& p : halton_points(3, 4, 0.9)) {
    const SubPointData spd = sub_point_data(imm, p);
    IdentityResidual r;
    for (int bn = 0; bn < 4; ++bn) {
      Vector N(8, 0.0);
      for (int k = 0; k < 8; ++k) N[k] = spd.frame.N(k, bn);
      const NormalField base = projected_normal_field(imm, N);
      for (int a = 0; a < 4; ++a) {
        const Vector ea = basis_vec(4, a);
        const WeingartenSplit dn = normal_derivative(imm, p, base, ea);
        for (int alpha = 1; alpha <= 3; ++alpha) {
          const NormalField jf = structure_image_field(imm, alpha, base);
          const WeingartenSplit djn = normal_derivative(imm, p, jf, ea);
          const Vector rhs = mat_vec(spd.ambient.J[alpha - 1], dn.normal_deriv);
          for (int k = 0; k < 8; ++k) r.add(djn.normal_deriv[k], rhs[k]);
        }
      }
    }
    CHECK(r.normalized() < 1e-7);
  }
}

TEST_CASE("Weingarten tangential part agrees with the shape operator") {
  const Immersion imm = scenario_immersion("x2 + sin(x4)");
  for (const Vector& p : halton_points(3, 4, 0.9)) {
    const SubPointData spd = sub_point_data(imm, p);
    for (int bn = 0; bn < 4; ++bn) {
      Vector N(8, 0.0);
      for (int k = 0; k < 8; ++k) N[k] = spd.frame.N(k, bn);
      const NormalField base = projected_normal_field(imm, N);
      for (int a = 0; a < 4; ++a) {
        const WeingartenSplit split = normal_derivative(imm, p, base, basis_vec(4, a));
        const Vector direct = shape_operator(spd, N, basis_vec(4, a));
        for (int c = 0; c < 4; ++c)
          CHECK(std::abs(split.shape[c] - direct[c]) < 1e-9 * (1.0 + std::abs(direct[c])));
      }
    }
  }
}

TEST_CASE("mean curvature vanishes in the flat model") {
  const Immersion imm = coordinate_immersion(flat_k(2), 1);
  CHECK(max_abs(mean_curvature(imm, Vector{0.4, -0.1, 0.2, 0.9})) == 0.0);
}

TEST_CASE("mean curvature satisfies both Lee-vector expressions on a W ambient") {
  const Immersion imm = scenario_immersion("x2");
  const double c1 = 1.0 / 6.0;   // 1/(2(2n-1)), n = 2
  const double c2 = 1.0 / 8.0;   // 1/(4n)
  for (const Vector& p : halton_points(5, 4, 1.0)) {
    const SubPointData spd = sub_point_data(imm, p);
    const Vector C = mean_curvature(spd);
    IdentityResidual r;
    for (int s = 0; s < 3; ++s) {
      const Vector Jp = mat_vec(spd.ambient.J[s], spd.p_bot[s]);
      const double c = (s == 0) ? c1 : c2;
      for (int k = 0; k < 8; ++k) r.add(C[k], c * Jp[k]);
    }
    CHECK(r.normalized() < 1e-7);
    CHECK(max_abs(C) > 1e-4);
  }
}

TEST_CASE("metric trace of h is frame independent") {
  const Immersion imm = scenario_immersion("x2");
  const Vector p{0.3, 0.1, -0.4, 0.6};
  const SubPointData spd = sub_point_data(imm, p);
  const Vector C = mean_curvature(spd);

  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> entry(-1, 1);
  Matrix s = Matrix::identity(4);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) s(i, j) = entry(rng);
  const Matrix gs = transpose(s) * spd.frame.g_ind * s;
  const Matrix gs_inv = invert(gs);
  Vector C2(8, 0.0);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (gs_inv(a, b) == 0.0) continue;
      Vector fa(4, 0.0), fb(4, 0.0);
      for (int i = 0; i < 4; ++i) {
        fa[i] = s(i, a);
        fb[i] = s(i, b);
      }
      const Vector hab = second_fundamental(spd, fa, fb);
      for (int k = 0; k < 8; ++k) C2[k] += gs_inv(a, b) * hab[k];
    }
  for (int k = 0; k < 8; ++k) {
    C2[k] /= 4.0;
    CHECK(std::abs(C2[k] - C[k]) < 1e-9 * (1.0 + std::abs(C[k])));
  }
}

TEST_CASE("Lee vector split is exact and orthogonal") {
  const Immersion imm = scenario_immersion("x1 + x2");
  for (const Vector& p : halton_points(4, 4, 1.0)) {
    const SubPointData spd = sub_point_data(imm, p);
    for (int s = 0; s < 3; ++s) {
      for (int k = 0; k < 8; ++k)
        CHECK(spd.p_top[s][k] + spd.p_bot[s][k] == spd.lee.p[s][k]);  // exact by construction
      for (int j = 0; j < 4; ++j) {
        Vector Nj(8, 0.0), Tj(8, 0.0);
        for (int k = 0; k < 8; ++k) {
          Nj[k] = spd.frame.N(k, j);
          Tj[k] = spd.frame.T(k, j);
        }
        CHECK(std::abs(bilinear(spd.frame.g_amb, spd.p_top[s], Nj)) < 1e-10);
        CHECK(std::abs(bilinear(spd.frame.g_amb, spd.p_bot[s], Tj)) < 1e-10);
      }
    }
  }
}

TEST_CASE("Gauss split matches the induced Levi-Civita connection") {
  const Immersion imm = scenario_immersion("x1 + 0.5*x2");
  const ManifoldPtr induced = induced_manifold(std::make_shared<Immersion>(imm));
  for (const Vector& p : halton_points(3, 4, 0.9)) {
    const SubPointData spd = sub_point_data(imm, p);
    const PointGeometry pgi = point_geometry(*induced, p);
    IdentityResidual r;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        // Full ambient derivative of the coordinate-frame extension.
        Vector w(8, 0.0);
        for (int k = 0; k < 8; ++k) {
          double sum = spd.phi_hess(k, a, b);
          for (int i = 0; i < 8; ++i)
            for (int l = 0; l < 8; ++l)
              sum += spd.ambient.Gamma(k, i, l) * spd.frame.T(i, a) * spd.frame.T(l, b);
          w[k] = sum;
        }
        const Vector tangential = spd.frame.project_tangent(w);
        // Induced covariant derivative of the same constant-coefficient field.
        Vector nab(8, 0.0);
        for (int c = 0; c < 4; ++c)
          for (int k = 0; k < 8; ++k) nab[k] += spd.frame.T(k, c) * pgi.Gamma(c, a, b);
        for (int k = 0; k < 8; ++k) r.add(tangential[k], nab[k]);
      }
    CHECK(r.normalized() < 1e-8);
  }
}

TEST_CASE("induced manifold of a coordinate immersion equals the restricted conformal chart") {
  // Pulling exp(2u) flat_k(2) back along the m=1 coordinate immersion at
  // section c must give exp(2 u-restricted) flat_k(1).
  const double c = 0.35;
  const Immersion imm = coordinate_immersion(conformal_flat(2, "x1 + sin(x2) + x4"), 1, c);
  const ManifoldPtr induced = induced_manifold(std::make_shared<Immersion>(imm));
  // Restricted factor: ambient x1 -> sub x1, x2 -> c, x4 -> c.
  const std::string restricted =
      "x1 + sin(" + std::to_string(c) + ") + " + std::to_string(c);
  const ManifoldPtr direct = conformal_transform(flat_k(1), parse_expr(restricted, 4));
  for (const Vector& q : halton_points(4, 4, 1.0)) {
    const ChartFields fi = induced->fields(q);
    const ChartFields fd = direct->fields(q);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        CHECK(std::abs(fi.g(i, j) - fd.g(i, j)) < 1e-12 * (1.0 + std::abs(fd.g(i, j))));
        for (int a = 0; a < 3; ++a)
          CHECK(std::abs(fi.J[a](i, j) - fd.J[a](i, j)) < 1e-12);
        for (int k = 0; k < 4; ++k)
          CHECK(std::abs(fi.dg(k, i, j) - fd.dg(k, i, j)) < 1e-12 * (1.0 + std::abs(fd.dg(k, i, j))));
      }
  }
}

TEST_CASE("theorem 3.1 identities hold on a W ambient") {
  const Immersion imm = scenario_immersion("x2");
  const auto pts = halton_points(8, 4, 1.0);
  const Theorem31Record rec = theorem31_residuals(imm, pts);
  CHECK(rec.ambient_verdict == ClassVerdict::W);
  CHECK(rec.ambient_w_ok);
  CHECK(rec.holomorphy < 1e-10);
  for (int i = 0; i < 6; ++i) {
    CAPTURE(i);
    CHECK(rec.residual[i].max < 1e-7);
  }
}

TEST_CASE("theorem 3.1 identities degenerate to zero on a K ambient") {
  const Immersion imm = coordinate_immersion(flat_k(2), 1);
  const auto pts = halton_points(6, 4, 1.0);
  const Theorem31Record rec = theorem31_residuals(imm, pts);
  CHECK(rec.ambient_verdict == ClassVerdict::K);
  for (int i = 0; i < 6; ++i) CHECK(rec.residual[i].max < 1e-10);
}

TEST_CASE("induced nabla_J agrees with the tangential ambient derivative") {
  const Immersion imm = scenario_immersion("x2 + 0.25*x1");
  const ManifoldPtr induced = induced_manifold(std::make_shared<Immersion>(imm));
  for (const Vector& p : halton_points(3, 4, 0.9)) {
    const SubPointData spd = sub_point_data(imm, p);
    const PointGeometry pgi = point_geometry(*induced, p);
    const Tensor3 nj_amb = nabla_J(spd.ambient, 1);
    const Tensor3 nj_ind = nabla_J(pgi, 1);
    IdentityResidual r;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        // Ambient (nabla_{T_a} J_1)(T_b), projected to the tangent bundle.
        Vector amb(8, 0.0);
        for (int k = 0; k < 8; ++k) {
          double sum = 0.0;
          for (int i = 0; i < 8; ++i) {
            if (spd.frame.T(i, a) == 0.0) continue;
            for (int j = 0; j < 8; ++j)
              sum += spd.frame.T(i, a) * nj_amb(i, k, j) * spd.frame.T(j, b);
          }
          amb[k] = sum;
        }
        const Vector tang = spd.frame.project_tangent(amb);
        Vector ind(8, 0.0);
        for (int csub = 0; csub < 4; ++csub)
          for (int k = 0; k < 8; ++k) ind[k] += spd.frame.T(k, csub) * nj_ind(a, csub, b);
        for (int k = 0; k < 8; ++k) r.add(tang[k], ind[k]);
      }
    CHECK(r.normalized() < 1e-7);
  }
}

TEST_CASE("Lee restriction factors on the scenario matrix") {
  const auto pts = halton_points(8, 4, 1.0);

  SUBCASE("K ambient: both sides vanish") {
    const LeeRestrictionRecord rec =
        lee_restriction_check(coordinate_immersion(flat_k(2), 1), pts);
    CHECK(rec.r_theta1.max < 1e-10);
    CHECK(rec.r_theta_alpha.max < 1e-10);
    CHECK(rec.max_induced_theta < 1e-10);
    CHECK(rec.max_ambient_theta < 1e-10);
  }
  SUBCASE("tangent-only factor: both sides nonzero, factors hold") {
    const LeeRestrictionRecord rec = lee_restriction_check(scenario_immersion("x1 + sin(x3)"), pts);
    CHECK(rec.r_theta1.max < 1e-7);
    CHECK(rec.r_theta_alpha.max < 1e-7);
    CHECK(rec.max_induced_theta > 1e-3);
    CHECK(rec.max_ambient_theta > 1e-3);
  }
  SUBCASE("normal-only factor: induced manifold is hyper-Kaehler") {
    const LeeRestrictionRecord rec = lee_restriction_check(scenario_immersion("x2"), pts);
    CHECK(rec.r_theta1.max < 1e-8);
    CHECK(rec.max_induced_theta < 1e-8);
    CHECK(rec.max_ambient_theta < 1e-8);
  }
}

TEST_CASE("umbilicity classification across the scenario matrix") {
  const auto pts = halton_points(8, 4, 1.0);

  SUBCASE("flat ambient: totally geodesic") {
    const UmbilicityRecord rec = umbilicity_classify(coordinate_immersion(flat_k(2), 1), pts);
    CHECK(rec.verdict == UmbilicityVerdict::TotallyGeodesic);
    CHECK(rec.consistent);
    CHECK(rec.geodesic.max == 0.0);
  }
  SUBCASE("tangent-only factor: totally geodesic, induced W") {
    const Immersion imm = scenario_immersion("x1 + sin(x3)");
    const UmbilicityRecord rec = umbilicity_classify(imm, pts);
    CHECK(rec.verdict == UmbilicityVerdict::TotallyGeodesic);
    CHECK(rec.consistent);
    const ManifoldPtr induced = induced_manifold(std::make_shared<Immersion>(imm));
    CHECK(class_residuals(*induced, pts).verdict == ClassVerdict::W);
  }
  SUBCASE("normal-only factor: totally umbilical with nonzero mean curvature, induced K") {
    const Immersion imm = scenario_immersion("x2");
    const UmbilicityRecord rec = umbilicity_classify(imm, pts);
    CHECK(rec.verdict == UmbilicityVerdict::TotallyUmbilical);
    CHECK(rec.consistent);
    CHECK(rec.mean_curvature_max > 1e-4);
    CHECK(rec.mean_curv_identity.max < 1e-7);
    const ManifoldPtr induced = induced_manifold(std::make_shared<Immersion>(imm));
    CHECK(class_residuals(*induced, pts).verdict == ClassVerdict::K);
  }
  SUBCASE("mixed factor: totally umbilical, induced W") {
    const Immersion imm = scenario_immersion("x1 + x2");
    const UmbilicityRecord rec = umbilicity_classify(imm, pts);
    CHECK(rec.verdict == UmbilicityVerdict::TotallyUmbilical);
    CHECK(rec.consistent);
    const ManifoldPtr induced = induced_manifold(std::make_shared<Immersion>(imm));
    CHECK(class_residuals(*induced, pts).verdict == ClassVerdict::W);
  }
}

TEST_CASE("umbilic-form residual below hold implies a decided verdict") {
  const auto pts = halton_points(6, 4, 1.0);
  for (const char* u : {"x1", "x2", "x1 + x2", "x2 + sin(x4)"}) {
    const Immersion imm = scenario_immersion(u);
    const Theorem31Record t = theorem31_residuals(imm, pts);
    const UmbilicityRecord rec = umbilicity_classify(imm, pts);
    if (t.residual[0].max < 1e-7) {
      CHECK(rec.verdict != UmbilicityVerdict::Neither);
      CHECK(rec.verdict != UmbilicityVerdict::Indeterminate);
    }
  }
}

TEST_CASE("Lee forms restricted to TM vanish or persist simultaneously") {
  const auto pts = halton_points(6, 4, 1.0);
  for (const char* u : {"x1", "x2", "x1 + x2", "x1 + sin(x3)"}) {
    CAPTURE(u);
    const UmbilicityRecord rec = umbilicity_classify(scenario_immersion(u), pts);
    const double lo = std::min({rec.theta_tan_max[0], rec.theta_tan_max[1], rec.theta_tan_max[2]});
    const double hi = std::max({rec.theta_tan_max[0], rec.theta_tan_max[1], rec.theta_tan_max[2]});
    const bool all_zero = hi < 1e-7;
    const bool all_nonzero = lo > 1e-4;
    CHECK((all_zero || all_nonzero));
  }
}

TEST_CASE("exchange property: Lee forms vanishing on TM migrate to the normal bundle") {
  const auto pts = halton_points(6, 4, 1.0);
  const Immersion imm = scenario_immersion("x2");  // W ambient, theta zero on TM
  const UmbilicityRecord rec = umbilicity_classify(imm, pts);
  const ClassResiduals ambient = class_residuals(*imm.ambient, halton_points(6, 8, 1.0));
  REQUIRE(ambient.verdict == ClassVerdict::W);
  for (int s = 0; s < 3; ++s) {
    CHECK(rec.theta_tan_max[s] < 1e-7);
    CHECK(rec.theta_perp_max[s] > 1e-4);
  }
}
