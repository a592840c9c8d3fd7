#include "hypernorden/classify.hpp"

#include <cmath>

#include "hypernorden/errors.hpp"

namespace hypernorden {

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

}  // namespace

std::string to_string(ClassVerdict v) {
  switch (v) {
    case ClassVerdict::K: return "K";
    case ClassVerdict::W: return "W";
    case ClassVerdict::Outside: return "Outside";
    case ClassVerdict::Indeterminate: return "Indeterminate";
  }
  return "?";
}

StructureResiduals structure_residuals(const ChartManifold& m, std::span<const Vector> points) {
  StructureResiduals out;
  const int d = m.dim();
  const Matrix id = Matrix::identity(d);
  const int n2 = d / 2;

  for (const Vector& x : points) {
    const ChartFields f = m.fields(x);
    const Matrix& J1 = f.J[0];
    const Matrix& J2 = f.J[1];
    const Matrix& J3 = f.J[2];

    double quat = 0.0;
    for (const Matrix& J : f.J) quat = std::max(quat, max_abs(J * J + id));
    quat = std::max(quat, max_abs_diff(J1, J2 * J3));
    quat = std::max(quat, max_abs_diff(J2, J3 * J1));
    quat = std::max(quat, max_abs_diff(J3, J1 * J2));
    quat = std::max(quat, max_abs(J1 + J3 * J2));
    quat = std::max(quat, max_abs(J2 + J1 * J3));
    quat = std::max(quat, max_abs(J3 + J2 * J1));
    out.quaternionic.add(quat);

    // g(J1 X, J1 Y) = g(X,Y), g(J2 X, J2 Y) = g(J3 X, J3 Y) = -g(X,Y).
    double compat = max_abs(transpose(J1) * f.g * J1 - f.g);
    compat = std::max(compat, max_abs(transpose(J2) * f.g * J2 + f.g));
    compat = std::max(compat, max_abs(transpose(J3) * f.g * J3 + f.g));
    out.compat.add(compat);

    // Associated forms g_alpha(X,Y) = g(J_alpha X, Y): a 2-form for alpha=1,
    // neutral pseudo-metrics for alpha=2,3.
    const Matrix g1 = transpose(J1) * f.g;
    const Matrix g2 = transpose(J2) * f.g;
    const Matrix g3 = transpose(J3) * f.g;
    double assoc = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) assoc = std::max(assoc, std::abs(g1(i, j) + g1(j, i)));
    assoc = std::max(assoc, max_asymmetry(g2));
    assoc = std::max(assoc, max_asymmetry(g3));
    out.assoc.add(assoc);
    if (assoc > 1e-8) {
      out.assoc_forms_ok = false;
    } else {
      for (const Matrix* ga : {&g2, &g3}) {
        Matrix sym = *ga;
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) sym(i, j) = 0.5 * ((*ga)(i, j) + (*ga)(j, i));
        const Inertia sig = inertia(sym);
        if (sig.positive != n2 || sig.negative != n2) out.assoc_forms_ok = false;
      }
    }
  }
  return out;
}

ClassResiduals class_residuals(const ChartManifold& m, std::span<const Vector> points,
                               const Thresholds& thr) {
  ClassResiduals out;
  const int d = m.dim();
  const int n = m.quarter();
  const double c1 = 1.0 / (2.0 * (2.0 * n - 1.0));
  const double c2 = 1.0 / (4.0 * n);
  const double lee_factor = 2.0 * n / (2.0 * n - 1.0);

  for (const Vector& x : points) {
    const PointGeometry pg = point_geometry(m, x);
    const std::array<Tensor3, 3> F = {fundamental_tensor(pg, nabla_J(pg, 1)),
                                      fundamental_tensor(pg, nabla_J(pg, 2)),
                                      fundamental_tensor(pg, nabla_J(pg, 3))};
    const LeeData lee = lee_forms(pg);

    IdentityResidual rk;
    for (const Tensor3& Fa : F)
      for (double v : Fa.data()) rk.add(v, 0.0);
    out.r_K.add(rk.normalized());

    // Cache g J_alpha and theta_alpha o J_alpha.
    std::array<Matrix, 3> gJ;
    std::array<Vector, 3> thetaJ;
    for (int a = 0; a < 3; ++a) {
      gJ[a] = pg.g * pg.J[a];
      thetaJ[a] = Vector(static_cast<std::size_t>(d), 0.0);
      for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) s += lee.theta[a][l] * pg.J[a](l, k);
        thetaJ[a][k] = s;
      }
    }

    IdentityResidual rw1;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          const double rhs = c1 * (pg.g(i, j) * lee.theta[0][k] - pg.g(i, k) * lee.theta[0][j] -
                                   gJ[0](i, j) * thetaJ[0][k] + gJ[0](i, k) * thetaJ[0][j]);
          rw1.add(F[0](i, j, k), rhs);
        }
    out.r_W1.add(rw1.normalized());

    IdentityResidual rwa;
    for (int a = 1; a < 3; ++a)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k) {
            const double rhs = c2 * (pg.g(i, j) * lee.theta[a][k] + pg.g(i, k) * lee.theta[a][j] +
                                     gJ[a](i, j) * thetaJ[a][k] + gJ[a](i, k) * thetaJ[a][j]);
            rwa.add(F[a](i, j, k), rhs);
          }
    out.r_Walpha.add(rwa.normalized());

    IdentityResidual rlee;
    IdentityResidual rcov;
    for (int a = 1; a < 3; ++a) {
      for (int k = 0; k < d; ++k) rlee.add(thetaJ[a][k], -lee_factor * thetaJ[0][k]);
      const Vector lhs = mat_vec(pg.J[a], lee.p[a]);
      const Vector rhs = vec_scaled(lee_factor, mat_vec(pg.J[0], lee.p[0]));
      for (int k = 0; k < d; ++k) rcov.add(lhs[k], rhs[k]);
    }
    out.r_lee.add(rlee.normalized());
    out.r_covector.add(rcov.normalized());
  }

  const bool w_holds =
      out.r_W1.max < thr.hold && out.r_Walpha.max < thr.hold && out.r_lee.max < thr.hold;
  if (out.r_K.max < thr.hold)
    out.verdict = ClassVerdict::K;
  else if (w_holds && out.r_K.max > thr.fail)
    out.verdict = ClassVerdict::W;
  else if (out.r_K.max > thr.fail &&
           (out.r_W1.max > thr.fail || out.r_Walpha.max > thr.fail || out.r_lee.max > thr.fail))
    out.verdict = ClassVerdict::Outside;
  else
    out.verdict = ClassVerdict::Indeterminate;
  return out;
}

LeeRelations lee_relations(const ChartManifold& m, std::span<const Vector> points) {
  LeeRelations out;
  const int d = m.dim();
  const int n = m.quarter();
  const double lee_factor = 2.0 * n / (2.0 * n - 1.0);

  for (const Vector& x : points) {
    const PointGeometry pg = point_geometry(m, x);
    const LeeData lee = lee_forms(pg);
    for (int a = 0; a < 3; ++a) out.max_theta = std::max(out.max_theta, max_abs(lee.theta[a]));

    IdentityResidual rlee;
    IdentityResidual rcov;
    for (int a = 1; a < 3; ++a) {
      for (int k = 0; k < d; ++k) {
        double lhs = 0.0, rhs = 0.0;
        for (int l = 0; l < d; ++l) {
          lhs += lee.theta[a][l] * pg.J[a](l, k);
          rhs += lee.theta[0][l] * pg.J[0](l, k);
        }
        rlee.add(lhs, -lee_factor * rhs);
      }
      const Vector lhs = mat_vec(pg.J[a], lee.p[a]);
      const Vector rhs = vec_scaled(lee_factor, mat_vec(pg.J[0], lee.p[0]));
      for (int k = 0; k < d; ++k) rcov.add(lhs[k], rhs[k]);
    }
    out.r_lee.add(rlee.normalized());
    out.r_covector.add(rcov.normalized());
  }
  return out;
}

IntegrabilityResiduals integrability_residuals(const ChartManifold& m,
                                               std::span<const Vector> points) {
  IntegrabilityResiduals out;
  const int d = m.dim();
  for (const Vector& x : points) {
    const ChartFields f = m.fields(x);
    for (int a = 1; a <= 3; ++a) {
      IdentityResidual r;
      Vector ei(static_cast<std::size_t>(d), 0.0);
      Vector ej(static_cast<std::size_t>(d), 0.0);
      for (int i = 0; i < d; ++i) {
        ei[i] = 1.0;
        for (int j = i + 1; j < d; ++j) {
          ej[j] = 1.0;
          const Vector nij = nijenhuis(f, a, ei, ej);
          for (double v : nij) r.add(v, 0.0);
          ej[j] = 0.0;
        }
        ei[i] = 0.0;
      }
      r.note_input(max_abs(f.J[a - 1]));
      out.per_structure[a - 1].add(r.normalized());
    }
  }
  return out;
}

ManifoldPtr conformal_transform(ManifoldPtr m, Expr u) {
  const std::set<int> vars = free_vars(u);
  if (!vars.empty() && *vars.rbegin() > m->dim())
    throw UnknownIdentifierError("conformal factor uses x" + std::to_string(*vars.rbegin()) +
                                     " beyond chart dimension " + std::to_string(m->dim()),
                                 0);
  return std::make_shared<ConformalChart>(std::move(m), std::move(u));
}

}  // namespace hypernorden
