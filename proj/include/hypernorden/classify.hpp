#pragma once

#include <span>
#include <string>

#include "hypernorden/chart.hpp"

namespace hypernorden {

/// One residual-threshold policy is used everywhere: an identity holds below
/// `hold`, fails above `fail`, and is indeterminate in between. Normalized
/// residuals divide the worst absolute deviation by (1 + worst input
/// magnitude entering the identity).
struct Thresholds {
  double hold = 1e-7;
  double fail = 1e-4;
};

struct ResidualStat {
  double max = 0.0;
  double sum = 0.0;
  long count = 0;

  void add(double r) {
    if (r > max) max = r;
    sum += r;
    ++count;
  }
  void merge(const ResidualStat& o) {
    if (o.max > max) max = o.max;
    sum += o.sum;
    count += o.count;
  }
  double mean() const { return count > 0 ? sum / static_cast<double>(count) : 0.0; }
};

/// Accumulates max |lhs - rhs| together with the largest input magnitude, so
/// the normalized residual can be formed at the end.
struct IdentityResidual {
  double raw = 0.0;
  double input = 0.0;

  void add(double lhs, double rhs) {
    const double d = std::abs(lhs - rhs);
    if (d > raw) raw = d;
    const double m = std::max(std::abs(lhs), std::abs(rhs));
    if (m > input) input = m;
  }
  void note_input(double v) {
    const double m = std::abs(v);
    if (m > input) input = m;
  }
  double normalized() const { return raw / (1.0 + input); }
};

/// Raw (unnormalized) residuals of the structure axioms: the quaternionic
/// relations, the metric compatibility (2-line identity linking the Hermitian
/// and the two Norden conditions), and the shape of the associated bilinear
/// forms (skew 2-form for alpha = 1, neutral Norden metrics for alpha = 2,3).
struct StructureResiduals {
  ResidualStat quaternionic;
  ResidualStat compat;
  ResidualStat assoc;
  bool assoc_forms_ok = true;

  bool passes(const Thresholds& thr) const {
    return quaternionic.max <= thr.hold && compat.max <= thr.hold && assoc_forms_ok;
  }
};

StructureResiduals structure_residuals(const ChartManifold& m, std::span<const Vector> points);

enum class ClassVerdict { K, W, Outside, Indeterminate };

std::string to_string(ClassVerdict v);

/// Normalized residuals of the class identities evaluated over the full
/// coordinate-frame triple range at every sample point, plus the resulting
/// verdict. r_W1 tests the Hermitian-side identity with coefficient
/// 1/(2(2n-1)), r_Walpha the Norden-side identity with coefficient 1/(4n),
/// r_lee the Lee-form relation between them, and r_covector its metric-dual
/// vector form.
struct ClassResiduals {
  ResidualStat r_K;
  ResidualStat r_W1;
  ResidualStat r_Walpha;
  ResidualStat r_lee;
  ResidualStat r_covector;
  ClassVerdict verdict = ClassVerdict::Indeterminate;
};

ClassResiduals class_residuals(const ChartManifold& m, std::span<const Vector> points,
                               const Thresholds& thr = {});

/// Lee forms over sample points together with their relation residuals;
/// backs the `lee` check of the CLI.
struct LeeRelations {
  ResidualStat r_lee;       // theta_alpha o J_alpha vs theta_1 o J_1
  ResidualStat r_covector;  // J_alpha p_alpha vs J_1 p_1
  double max_theta = 0.0;   // largest |theta| component seen
};

LeeRelations lee_relations(const ChartManifold& m, std::span<const Vector> points);

/// Integrability: worst normalized Nijenhuis residual over all three
/// structures, coordinate-frame pairs and sample points.
struct IntegrabilityResiduals {
  std::array<ResidualStat, 3> per_structure;
  double max() const {
    return std::max({per_structure[0].max, per_structure[1].max, per_structure[2].max});
  }
};

IntegrabilityResiduals integrability_residuals(const ChartManifold& m,
                                               std::span<const Vector> points);

/// Conformal metric change exp(2u) g with the structures fixed; the engine's
/// generator of W-manifolds from K-manifolds. Validates that u only uses
/// coordinates of M's chart.
ManifoldPtr conformal_transform(ManifoldPtr m, Expr u);

}  // namespace hypernorden
