#include "hypernorden/theorems.hpp"

#include <cmath>

#include "hypernorden/errors.hpp"

namespace hypernorden {

namespace {

Vector column(const Matrix& m, int j) {
  Vector v(static_cast<std::size_t>(m.rows()));
  for (int i = 0; i < m.rows(); ++i) v[i] = m(i, j);
  return v;
}

double covector_apply(const Vector& theta, const Vector& v) { return vec_dot(theta, v); }

}  // namespace

std::string to_string(UmbilicityVerdict v) {
  switch (v) {
    case UmbilicityVerdict::TotallyGeodesic: return "TotallyGeodesic";
    case UmbilicityVerdict::TotallyUmbilical: return "TotallyUmbilical";
    case UmbilicityVerdict::Neither: return "Neither";
    case UmbilicityVerdict::Indeterminate: return "Indeterminate";
  }
  return "?";
}

Theorem31Record theorem31_residuals(const Immersion& imm, std::span<const Vector> points,
                                    const Thresholds& thr) {
  Theorem31Record rec;
  const int n = imm.ambient->quarter();
  const double c1 = 1.0 / (2.0 * (2.0 * n - 1.0));
  const double c2 = 1.0 / (4.0 * n);

  // Ambient class verdict at the image points.
  std::vector<Vector> image;
  image.reserve(points.size());
  for (const Vector& p : points) image.push_back(imm.map_point(p));
  rec.ambient_verdict = class_residuals(*imm.ambient, image, thr).verdict;
  rec.ambient_w_ok =
      rec.ambient_verdict == ClassVerdict::W || rec.ambient_verdict == ClassVerdict::K;

  const ManifoldPtr induced = induced_manifold(std::make_shared<Immersion>(imm));

  for (const Vector& p : points) {
    rec.holomorphy = std::max(rec.holomorphy, holomorphy_residual(imm, p));

    const SubPointData spd = sub_point_data(imm, p);
    const int sdim = imm.source_dim();
    const int ndim = spd.frame.N.cols();
    const std::array<Matrix, 3>& J = spd.ambient.J;

    std::array<Vector, 3> Jp_bot;
    std::array<Vector, 3> Jp_top;
    for (int a = 0; a < 3; ++a) {
      Jp_bot[a] = mat_vec(J[a], spd.p_bot[a]);
      Jp_top[a] = mat_vec(J[a], spd.p_top[a]);
    }

    // h(X,Y) = c1 g(X,Y) J_1 p1_bot = c2 g(X,Y) J_alpha palpha_bot.
    IdentityResidual r38;
    for (int a = 0; a < sdim; ++a)
      for (int b = 0; b < sdim; ++b) {
        const double gab = spd.frame.g_ind(a, b);
        for (int k = 0; k < spd.ambient.dim; ++k) {
          r38.add(spd.h(k, a, b), c1 * gab * Jp_bot[0][k]);
          r38.add(spd.h(k, a, b), c2 * gab * Jp_bot[1][k]);
          r38.add(spd.h(k, a, b), c2 * gab * Jp_bot[2][k]);
        }
      }
    rec.residual[0].add(r38.normalized());

    // Induced covariant derivatives of the structures against the ambient
    // Lee data.
    const PointGeometry pg_ind = point_geometry(*induced, p);
    for (int s = 0; s < 3; ++s) {
      const Tensor3 nj = nabla_J(pg_ind, s + 1);
      IdentityResidual r;
      for (int a = 0; a < sdim; ++a) {
        const Vector Ta = column(spd.frame.T, a);
        const Vector JTa = mat_vec(J[s], Ta);
        for (int b = 0; b < sdim; ++b) {
          const Vector Tb = column(spd.frame.T, b);
          const Vector JTb = mat_vec(J[s], Tb);
          // Ambient representative of (nabla_a J)^c_b.
          Vector lhs(static_cast<std::size_t>(spd.ambient.dim), 0.0);
          for (int c = 0; c < sdim; ++c) {
            const double w = nj(a, c, b);
            if (w == 0.0) continue;
            for (int k = 0; k < spd.ambient.dim; ++k) lhs[k] += spd.frame.T(k, c) * w;
          }
          const double gab = spd.frame.g_ind(a, b);
          const double gaJb = bilinear(spd.ambient.g, Ta, JTb);
          const double th_b = covector_apply(spd.lee.theta[s], Tb);
          const double th_Jb = covector_apply(spd.lee.theta[s], JTb);
          for (int k = 0; k < spd.ambient.dim; ++k) {
            double rhs;
            if (s == 0)
              rhs = c1 * (gab * spd.p_top[0][k] - th_b * Ta[k] + gaJb * Jp_top[0][k] -
                          th_Jb * JTa[k]);
            else
              rhs = c2 * (gab * spd.p_top[s][k] + th_b * Ta[k] + gaJb * Jp_top[s][k] +
                          th_Jb * JTa[k]);
            r.add(lhs[k], rhs);
          }
        }
      }
      if (s == 0)
        rec.residual[1].add(r.normalized());
      else
        rec.residual[2].add(r.normalized());
    }

    // Shape operator identities and the normal connection identity.
    IdentityResidual r311, r312, r313;
    for (int bn = 0; bn < ndim; ++bn) {
      const Vector Nb = column(spd.frame.N, bn);
      const NormalField base_field = projected_normal_field(imm, Nb);
      for (int a = 0; a < sdim; ++a) {
        Vector ea(static_cast<std::size_t>(sdim), 0.0);
        ea[a] = 1.0;
        const Vector Ta = column(spd.frame.T, a);

        for (int s = 0; s < 3; ++s) {
          const Vector JN = mat_vec(J[s], Nb);
          const Vector A_N = shape_operator(spd, Nb, ea);
          const Vector A_JN = shape_operator(spd, JN, ea);
          const Vector lhs = spd.frame.push(A_JN);
          const Vector JAN = mat_vec(J[s], spd.frame.push(A_N));
          const double th_N = covector_apply(spd.lee.theta[s], Nb);
          const double th_JN = covector_apply(spd.lee.theta[s], JN);
          const Vector JTa = mat_vec(J[s], Ta);
          for (int k = 0; k < spd.ambient.dim; ++k) {
            if (s == 0) {
              r311.add(lhs[k], JAN[k] + c1 * (th_N * Ta[k] + th_JN * JTa[k]));
            } else {
              r312.add(lhs[k], JAN[k] - c2 * (th_N * Ta[k] + th_JN * JTa[k]));
            }
          }
        }

        const WeingartenSplit dn = normal_derivative(imm, p, base_field, ea);
        for (int s = 0; s < 3; ++s) {
          const NormalField jfield = structure_image_field(imm, s + 1, base_field);
          const WeingartenSplit djn = normal_derivative(imm, p, jfield, ea);
          const Vector rhs = mat_vec(J[s], dn.normal_deriv);
          for (int k = 0; k < spd.ambient.dim; ++k) r313.add(djn.normal_deriv[k], rhs[k]);
        }
      }
    }
    rec.residual[3].add(r311.normalized());
    rec.residual[4].add(r312.normalized());
    rec.residual[5].add(r313.normalized());
  }
  rec.holomorphy_ok = rec.holomorphy < thr.hold;
  return rec;
}

LeeRestrictionRecord lee_restriction_check(const Immersion& imm, std::span<const Vector> points,
                                           const Thresholds&) {
  LeeRestrictionRecord rec;
  const int n = imm.ambient->quarter();
  const int m = imm.m;
  const double f1 = (2.0 * m - 1.0) / (2.0 * n - 1.0);
  const double fa = static_cast<double>(m) / n;

  const ManifoldPtr induced = induced_manifold(std::make_shared<Immersion>(imm));

  for (const Vector& p : points) {
    const PointGeometry pg_ind = point_geometry(*induced, p);
    const LeeData lee_ind = lee_forms(pg_ind);
    const SubPointData spd = sub_point_data(imm, p);
    const int sdim = imm.source_dim();

    IdentityResidual r1, ra;
    for (int a = 0; a < sdim; ++a) {
      const Vector Ta = column(spd.frame.T, a);
      for (int s = 0; s < 3; ++s) {
        const double ambient_side = covector_apply(spd.lee.theta[s], Ta);
        const double induced_side = lee_ind.theta[s][a];
        rec.max_induced_theta = std::max(rec.max_induced_theta, std::abs(induced_side));
        rec.max_ambient_theta = std::max(rec.max_ambient_theta, std::abs(ambient_side));
        if (s == 0)
          r1.add(induced_side, f1 * ambient_side);
        else
          ra.add(induced_side, fa * ambient_side);
      }
    }
    rec.r_theta1.add(r1.normalized());
    rec.r_theta_alpha.add(ra.normalized());
  }
  return rec;
}

UmbilicityRecord umbilicity_classify(const Immersion& imm, std::span<const Vector> points,
                                     const Thresholds& thr) {
  UmbilicityRecord rec;
  const int n = imm.ambient->quarter();
  const double c1 = 1.0 / (2.0 * (2.0 * n - 1.0));
  const double c2 = 1.0 / (4.0 * n);

  for (const Vector& p : points) {
    const SubPointData spd = sub_point_data(imm, p);
    const int sdim = imm.source_dim();
    const int ndim = spd.frame.N.cols();
    const Vector C = mean_curvature(spd);
    rec.mean_curvature_max = std::max(rec.mean_curvature_max, max_abs(C));

    IdentityResidual geo, umb;
    for (int a = 0; a < sdim; ++a)
      for (int b = 0; b < sdim; ++b) {
        const double gab = spd.frame.g_ind(a, b);
        for (int k = 0; k < spd.ambient.dim; ++k) {
          geo.add(spd.h(k, a, b), 0.0);
          umb.add(spd.h(k, a, b), gab * C[k]);
        }
      }
    rec.geodesic.add(geo.normalized());
    rec.umbilical.add(umb.normalized());

    IdentityResidual c_identity;
    for (int s = 0; s < 3; ++s) {
      const Vector Jp = mat_vec(spd.ambient.J[s], spd.p_bot[s]);
      const double c = (s == 0) ? c1 : c2;
      for (int k = 0; k < spd.ambient.dim; ++k) c_identity.add(C[k], c * Jp[k]);
    }
    rec.mean_curv_identity.add(c_identity.normalized());

    for (int s = 0; s < 3; ++s) {
      for (int bn = 0; bn < ndim; ++bn) {
        const Vector Nb = column(spd.frame.N, bn);
        rec.theta_perp_max[s] = std::max(rec.theta_perp_max[s],
                                         std::abs(covector_apply(spd.lee.theta[s], Nb)));
      }
      for (int a = 0; a < sdim; ++a) {
        const Vector Ta = column(spd.frame.T, a);
        rec.theta_tan_max[s] =
            std::max(rec.theta_tan_max[s], std::abs(covector_apply(spd.lee.theta[s], Ta)));
      }
    }
  }

  if (rec.geodesic.max < thr.hold)
    rec.verdict = UmbilicityVerdict::TotallyGeodesic;
  else if (rec.umbilical.max < thr.hold && rec.mean_curvature_max > thr.fail)
    rec.verdict = UmbilicityVerdict::TotallyUmbilical;
  else if (rec.umbilical.max > thr.fail)
    rec.verdict = UmbilicityVerdict::Neither;
  else
    rec.verdict = UmbilicityVerdict::Indeterminate;

  const double perp_min = std::min({rec.theta_perp_max[0], rec.theta_perp_max[1],
                                    rec.theta_perp_max[2]});
  const double perp_max = std::max({rec.theta_perp_max[0], rec.theta_perp_max[1],
                                    rec.theta_perp_max[2]});
  if (perp_min > thr.fail)
    rec.theta_verdict = UmbilicityVerdict::TotallyUmbilical;
  else if (perp_max < thr.hold)
    rec.theta_verdict = UmbilicityVerdict::TotallyGeodesic;
  else
    rec.theta_verdict = UmbilicityVerdict::Indeterminate;

  rec.consistent = !(rec.theta_verdict != UmbilicityVerdict::Indeterminate &&
                     rec.verdict != UmbilicityVerdict::Indeterminate &&
                     rec.verdict != rec.theta_verdict);
  return rec;
}

}  // namespace hypernorden
