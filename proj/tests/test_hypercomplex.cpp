#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "hypernorden/catalog.hpp"
#include "hypernorden/classify.hpp"
#include "hypernorden/halton.hpp"

using namespace hypernorden;

namespace {

const std::vector<std::string>& w_corpus() {
  static const std::vector<std::string> corpus = {
      "x1", "x1 + sin(x2)", "exp(x1/2)", "x1*x2 + x3", "sin(x1) + cos(x2)", "0.5*x1^2 + x2",
  };
  return corpus;
}

ManifoldPtr conformal_flat(int n, const std::string& u) {
  return conformal_transform(flat_k(n), parse_expr(u, 4 * n));
}

}  // namespace

TEST_CASE("flat model: structure residuals are exactly zero") {
  const auto pts = halton_points(8, 8, 1.0);
  const StructureResiduals r = structure_residuals(*flat_k(2), pts);
  CHECK(r.quaternionic.max == 0.0);
  CHECK(r.compat.max == 0.0);
  CHECK(r.assoc.max == 0.0);
  CHECK(r.assoc_forms_ok);
}

TEST_CASE("flipping J3 breaks the cyclic quaternionic relation") {
  auto J = flat_structures(2);
  J[2] = -1.0 * J[2];
  Matrix g(8, 8);
  for (int i = 0; i < 8; ++i) g(i, i) = (i < 4) ? -1.0 : 1.0;
  const auto broken = std::make_shared<ConstantChart>(g, J, "broken");
  const auto pts = halton_points(4, 8, 1.0);
  const StructureResiduals r = structure_residuals(*broken, pts);
  CHECK(r.quaternionic.max >= 2.0);
}

TEST_CASE("conformal scaling preserves the compatibility identities") {
  const ManifoldPtr m = conformal_flat(2, "x1 + sin(x2)");
  const auto pts = halton_points(8, 8, 1.0);
  const StructureResiduals r = structure_residuals(*m, pts);
  CHECK(r.compat.max < 1e-12);
  CHECK(r.quaternionic.max == 0.0);
  CHECK(r.assoc_forms_ok);
}

TEST_CASE("flat model classifies as K with tiny residual") {
  const auto pts = halton_points(32, 8, 1.0);
  const ClassResiduals r = class_residuals(*flat_k(2), pts);
  CHECK(r.verdict == ClassVerdict::K);
  CHECK(r.r_K.max < 1e-12);
}

TEST_CASE("nonconstant conformal factors classify as W with small identity residuals") {
  const auto pts = halton_points(16, 8, 1.0);
  for (const std::string& u : w_corpus()) {
    CAPTURE(u);
    const ClassResiduals r = class_residuals(*conformal_flat(2, u), pts);
    CHECK(r.verdict == ClassVerdict::W);
    CHECK(r.r_W1.max < 1e-7);
    CHECK(r.r_Walpha.max < 1e-7);
    CHECK(r.r_lee.max < 1e-7);
    CHECK(r.r_covector.max < 1e-7);
    CHECK(r.r_K.max > 1e-4);
  }
}

TEST_CASE("constant conformal factor stays in K") {
  const auto pts = halton_points(16, 8, 1.0);
  const ClassResiduals r = class_residuals(*conformal_flat(2, "0.3"), pts);
  CHECK(r.verdict == ClassVerdict::K);
}

TEST_CASE("conformal transforms of the flat model never classify Outside") {
  const auto pts = halton_points(8, 8, 1.0);
  for (const std::string& u : w_corpus()) {
    const ClassResiduals r = class_residuals(*conformal_flat(2, u), pts);
    const bool in_family = r.verdict == ClassVerdict::K || r.verdict == ClassVerdict::W;
    CHECK(in_family);
  }
  const ClassResiduals rc = class_residuals(*conformal_flat(2, "2.0"), pts);
  CHECK(rc.verdict == ClassVerdict::K);
}

TEST_CASE("verdict K coincides with vanishing Lee forms") {
  const auto pts = halton_points(8, 8, 1.0);
  for (const std::string& u : {std::string("0.25"), std::string("x1")}) {
    const ManifoldPtr m = conformal_flat(2, u);
    const ClassResiduals r = class_residuals(*m, pts);
    double worst_theta = 0.0;
    for (const Vector& x : pts) {
      const LeeData lee = lee_forms(point_geometry(*m, x));
      for (int a = 0; a < 3; ++a) worst_theta = std::max(worst_theta, max_abs(lee.theta[a]));
    }
    if (r.verdict == ClassVerdict::K)
      CHECK(worst_theta < 1e-7);
    else
      CHECK(worst_theta > 1e-4);
  }
}

TEST_CASE("covector relation holds whenever the verdict is W") {
  const auto pts = halton_points(8, 8, 1.0);
  for (const std::string& u : w_corpus()) {
    const ManifoldPtr m = conformal_flat(2, u);
    if (class_residuals(*m, pts).verdict != ClassVerdict::W) continue;
    const LeeRelations rel = lee_relations(*m, pts);
    CHECK(rel.r_covector.max < 1e-7);
  }
}

TEST_CASE("classification is invariant under permutation of the sample points") {
  auto pts = halton_points(16, 8, 1.0);
  const ManifoldPtr m = conformal_flat(2, "x1 + sin(x2)");
  const ClassResiduals before = class_residuals(*m, pts);
  std::reverse(pts.begin(), pts.end());
  std::swap(pts[3], pts[11]);
  const ClassResiduals after = class_residuals(*m, pts);
  CHECK(before.verdict == after.verdict);
  CHECK(before.r_K.max == after.r_K.max);
  CHECK(before.r_W1.max == after.r_W1.max);
}

TEST_CASE("conformal_transform with u = 0 leaves the metric untouched") {
  const ManifoldPtr base = flat_k(2);
  const ManifoldPtr same = conformal_transform(base, expr_literal(0.0));
  const Vector x = halton_points(1, 8, 1.0)[0];
  const ChartFields fb = base->fields(x);
  const ChartFields fs = same->fields(x);
  CHECK(fb.g == fs.g);
  for (int a = 0; a < 3; ++a) CHECK(fb.J[a] == fs.J[a]);
}

TEST_CASE("conformal_transform rejects factors over the wrong chart") {
  CHECK_THROWS_AS(conformal_transform(flat_k(1), parse_expr("x7", 8)), UnknownIdentifierError);
}

TEST_CASE("structure gate catches the sign flip before classification") {
  // class_residuals is specified only after structure_residuals pass; the
  // scenario runner gates on that.
  auto J = flat_structures(2);
  J[2] = -1.0 * J[2];
  Matrix g(8, 8);
  for (int i = 0; i < 8; ++i) g(i, i) = (i < 4) ? -1.0 : 1.0;
  const auto broken = std::make_shared<ConstantChart>(g, J, "broken");
  const auto pts = halton_points(4, 8, 1.0);
  CHECK_FALSE(structure_residuals(*broken, pts).passes(Thresholds{}));
}
