#pragma once

#include <span>

#include "hypernorden/immersion.hpp"

namespace hypernorden {

/// Normalized residuals of the six submanifold identities relating the second
/// fundamental form, the induced covariant derivatives of the structures, the
/// shape operators and the normal connection to the ambient Lee data. Indices
/// follow the displayed order: [0] h vs the umbilic form, [1]/[2] induced
/// nabla J for the Hermitian and Norden structures, [3]/[4] the shape-operator
/// identities, [5] the normal-connection identity.
struct Theorem31Record {
  std::array<ResidualStat, 6> residual;
  ClassVerdict ambient_verdict = ClassVerdict::Indeterminate;
  bool ambient_w_ok = true;       // verdict is W or K
  double holomorphy = 0.0;        // worst holomorphy residual over the points
  bool holomorphy_ok = true;

  double max_residual() const {
    double m = 0.0;
    for (const ResidualStat& r : residual) m = std::max(m, r.max);
    return m;
  }
};

Theorem31Record theorem31_residuals(const Immersion& imm, std::span<const Vector> points,
                                    const Thresholds& thr = {});

/// Residuals of the restriction law relating the induced Lee forms to the
/// ambient ones on the tangent bundle: factor (2m-1)/(2n-1) for the Hermitian
/// structure and m/n for the Norden ones.
struct LeeRestrictionRecord {
  ResidualStat r_theta1;
  ResidualStat r_theta_alpha;
  double max_induced_theta = 0.0;   // largest induced |theta| component
  double max_ambient_theta = 0.0;   // largest ambient |theta(T_a)| on TM
};

LeeRestrictionRecord lee_restriction_check(const Immersion& imm, std::span<const Vector> points,
                                           const Thresholds& thr = {});

enum class UmbilicityVerdict { TotallyGeodesic, TotallyUmbilical, Neither, Indeterminate };

std::string to_string(UmbilicityVerdict v);

/// Umbilicity classification from the residuals of h and of h - g (x) C, with
/// the independent cross-check against the Lee forms on the normal bundle
/// (all nonzero there <=> umbilical, all vanish <=> geodesic). A verdict that
/// contradicts the cross-check is reported with consistent = false.
struct UmbilicityRecord {
  UmbilicityVerdict verdict = UmbilicityVerdict::Indeterminate;
  ResidualStat geodesic;            // ‖h‖, normalized
  ResidualStat umbilical;           // ‖h - g (x) C‖, normalized
  ResidualStat mean_curv_identity;  // C against both Lee-vector expressions
  double mean_curvature_max = 0.0;  // max over points of ‖C‖_inf
  std::array<double, 3> theta_perp_max = {0.0, 0.0, 0.0};
  std::array<double, 3> theta_tan_max = {0.0, 0.0, 0.0};
  UmbilicityVerdict theta_verdict = UmbilicityVerdict::Indeterminate;
  bool consistent = true;
};

UmbilicityRecord umbilicity_classify(const Immersion& imm, std::span<const Vector> points,
                                     const Thresholds& thr = {});

}  // namespace hypernorden
