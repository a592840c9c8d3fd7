#include "hypernorden/immersion.hpp"

#include <cmath>
#include <sstream>

#include "hypernorden/errors.hpp"

namespace hypernorden {

namespace {

std::string point_to_string(const Vector& x) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ")";
  return os.str();
}

int matrix_rank(Matrix a, double tol) {
  const int rows = a.rows(), cols = a.cols();
  int rank = 0;
  std::vector<bool> used_col(static_cast<std::size_t>(cols), false);
  for (int step = 0; step < std::min(rows, cols); ++step) {
    int pi = -1, pj = -1;
    double best = tol;
    for (int i = rank; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        if (used_col[static_cast<std::size_t>(j)]) continue;
        if (std::abs(a(i, j)) > best) {
          best = std::abs(a(i, j));
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;
    if (pi != rank)
      for (int j = 0; j < cols; ++j) std::swap(a(rank, j), a(pi, j));
    used_col[static_cast<std::size_t>(pj)] = true;
    const double inv = 1.0 / a(rank, pj);
    for (int i = rank + 1; i < rows; ++i) {
      const double f = a(i, pj) * inv;
      if (f == 0.0) continue;
      for (int j = 0; j < cols; ++j) a(i, j) -= f * a(rank, j);
    }
    ++rank;
  }
  return rank;
}

// Basis of the kernel of a (rows x cols), as columns. Gauss-Jordan with
// column pivoting by magnitude.
Matrix kernel_basis(Matrix a, double tol) {
  const int rows = a.rows(), cols = a.cols();
  std::vector<int> pivot_col;
  std::vector<bool> used_col(static_cast<std::size_t>(cols), false);
  int r = 0;
  for (; r < rows; ++r) {
    int pi = -1, pj = -1;
    double best = tol;
    for (int i = r; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        if (used_col[static_cast<std::size_t>(j)]) continue;
        if (std::abs(a(i, j)) > best) {
          best = std::abs(a(i, j));
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;
    if (pi != r)
      for (int j = 0; j < cols; ++j) std::swap(a(r, j), a(pi, j));
    const double inv = 1.0 / a(r, pj);
    for (int j = 0; j < cols; ++j) a(r, j) *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      const double f = a(i, pj);
      if (f == 0.0) continue;
      for (int j = 0; j < cols; ++j) a(i, j) -= f * a(r, j);
    }
    pivot_col.push_back(pj);
    used_col[static_cast<std::size_t>(pj)] = true;
  }
  const int rank = static_cast<int>(pivot_col.size());
  Matrix kernel(cols, cols - rank);
  int out = 0;
  for (int f = 0; f < cols; ++f) {
    if (used_col[static_cast<std::size_t>(f)]) continue;
    kernel(f, out) = 1.0;
    for (int k = 0; k < rank; ++k) kernel(pivot_col[static_cast<std::size_t>(k)], out) = -a(k, f);
    ++out;
  }
  return kernel;
}

Matrix symmetrized_gram(const Matrix& basis, const Matrix& g) {
  const Matrix full = transpose(basis) * g * basis;
  Matrix sym(full.rows(), full.cols());
  for (int i = 0; i < full.rows(); ++i)
    for (int j = i; j < full.cols(); ++j) {
      const double v = 0.5 * (full(i, j) + full(j, i));
      sym(i, j) = v;
      sym(j, i) = v;
    }
  return sym;
}

Frame build_frame(const Immersion& imm, const Vector& p, Vector phi, Matrix T) {
  const int dim = imm.ambient->dim();
  const int sdim = imm.source_dim();
  const int m2 = 2 * imm.m;

  if (matrix_rank(T, 1e-10 * std::max(1.0, max_abs(T))) < sdim)
    throw RankDeficientImmersionError("immersion Jacobian rank-deficient at " +
                                      point_to_string(p));

  Frame fr;
  fr.g_amb = imm.ambient->fields(phi).g;
  fr.p = p;
  fr.phi = std::move(phi);

  const Matrix a = transpose(T) * fr.g_amb;
  fr.N = kernel_basis(a, 1e-12 * std::max(1.0, max_abs(a)));
  if (fr.N.cols() != dim - sdim)
    throw DegenerateInducedMetricError("normal complement has wrong dimension at " +
                                       point_to_string(p));

  fr.g_ind = symmetrized_gram(T, fr.g_amb);
  const Inertia sig = inertia(fr.g_ind);
  if (sig.zero > 0 || sig.positive != m2 || sig.negative != m2)
    throw DegenerateInducedMetricError(
        "induced metric signature (" + std::to_string(sig.positive) + "," +
        std::to_string(sig.negative) + "," + std::to_string(sig.zero) + ") at " +
        point_to_string(p));
  fr.g_ind_inv = invert(fr.g_ind);

  fr.gram_normal = symmetrized_gram(fr.N, fr.g_amb);
  try {
    fr.gram_normal_inv = invert(fr.gram_normal);
  } catch (const SingularMatrixError&) {
    throw DegenerateInducedMetricError("normal bundle Gram matrix singular at " +
                                       point_to_string(p));
  }
  fr.T = std::move(T);
  return fr;
}

}  // namespace

Vector Immersion::map_point(const Vector& p) const {
  if (static_cast<int>(p.size()) != source_dim())
    throw DomainError("Immersion: point dimension mismatch");
  Vector out(components.size());
  for (std::size_t k = 0; k < components.size(); ++k)
    out[k] = evaluate(components[k], std::span<const double>(p));
  return out;
}

void Immersion::jet1(const Vector& p, Vector& phi, Matrix& T) const {
  const int sdim = source_dim();
  const int dim = ambient->dim();
  std::vector<Dual1> seeds;
  seeds.reserve(p.size());
  for (int a = 0; a < sdim; ++a) seeds.push_back(Dual1::seed(p[a], sdim, a));
  phi.assign(static_cast<std::size_t>(dim), 0.0);
  T = Matrix(dim, sdim);
  for (int k = 0; k < dim; ++k) {
    const Dual1 v = evaluate(components[static_cast<std::size_t>(k)], std::span<const Dual1>(seeds));
    if (!is_finite(v))
      throw EvaluationDomainError("non-finite immersion component at " + point_to_string(p));
    phi[k] = v.value;
    if (!v.grad.empty())
      for (int a = 0; a < sdim; ++a) T(k, a) = v.grad[a];
  }
}

void Immersion::jet2(const Vector& p, Vector& phi, Matrix& T, Tensor3& H) const {
  const int sdim = source_dim();
  const int dim = ambient->dim();
  std::vector<Dual2> seeds;
  seeds.reserve(p.size());
  for (int a = 0; a < sdim; ++a) seeds.push_back(Dual2::seed(p[a], sdim, a));
  phi.assign(static_cast<std::size_t>(dim), 0.0);
  T = Matrix(dim, sdim);
  H = Tensor3(dim, sdim, sdim);
  for (int k = 0; k < dim; ++k) {
    const Dual2 v = evaluate(components[static_cast<std::size_t>(k)], std::span<const Dual2>(seeds));
    if (!is_finite(v))
      throw EvaluationDomainError("non-finite immersion component at " + point_to_string(p));
    phi[k] = v.value;
    if (!v.grad.empty())
      for (int a = 0; a < sdim; ++a) T(k, a) = v.grad[a];
    if (!v.hess.empty())
      for (int a = 0; a < sdim; ++a)
        for (int b = 0; b < sdim; ++b)
          H(k, a, b) = v.hess[Dual2::packed_index(static_cast<std::size_t>(a),
                                                  static_cast<std::size_t>(b))];
  }
}

Immersion make_immersion(ManifoldPtr ambient, int m, std::vector<Expr> components,
                         std::string label) {
  Immersion imm;
  if (m < 1 || 4 * m >= ambient->dim())
    throw DomainError("make_immersion: need 1 <= m and 4m < ambient dimension");
  if (static_cast<int>(components.size()) != ambient->dim())
    throw DomainError("make_immersion: component count must equal ambient dimension");
  for (const Expr& e : components) {
    const std::set<int> vars = free_vars(e);
    if (!vars.empty() && *vars.rbegin() > 4 * m)
      throw UnknownIdentifierError("immersion component uses variable beyond source dimension", 0);
  }
  imm.ambient = std::move(ambient);
  imm.m = m;
  imm.components = std::move(components);
  imm.label = std::move(label);
  return imm;
}

Vector Frame::tangent_coords(const Vector& v) const {
  return mat_vec(g_ind_inv, mat_vec(transpose(T), mat_vec(g_amb, v)));
}

Vector Frame::normal_coords(const Vector& v) const {
  return mat_vec(gram_normal_inv, mat_vec(transpose(N), mat_vec(g_amb, v)));
}

Vector Frame::project_tangent(const Vector& v) const { return mat_vec(T, tangent_coords(v)); }

Vector Frame::project_normal(const Vector& v) const {
  return vec_sub(v, project_tangent(v));
}

Vector Frame::push(const Vector& x_sub) const { return mat_vec(T, x_sub); }

Frame frame_at(const Immersion& imm, const Vector& p) {
  Vector phi;
  Matrix T;
  imm.jet1(p, phi, T);
  return build_frame(imm, p, std::move(phi), std::move(T));
}

double holomorphy_residual(const Immersion& imm, const Vector& p) {
  const Frame fr = frame_at(imm, p);
  const ChartFields af = imm.ambient->fields(fr.phi);
  IdentityResidual r;
  const int sdim = imm.source_dim();
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < sdim; ++i) {
      Vector ti(static_cast<std::size_t>(fr.T.rows()));
      for (int k = 0; k < fr.T.rows(); ++k) ti[k] = fr.T(k, i);
      const Vector jv = mat_vec(af.J[a], ti);
      r.note_input(max_abs(jv));
      const Vector np = fr.project_normal(jv);
      for (double v : np) r.add(v, 0.0);
    }
  return r.normalized();
}

SubPointData sub_point_data(const Immersion& imm, const Vector& p) {
  SubPointData spd;
  Vector phi;
  Matrix T;
  imm.jet2(p, phi, T, spd.phi_hess);
  spd.frame = build_frame(imm, p, phi, T);
  spd.ambient = point_geometry(*imm.ambient, spd.frame.phi);

  const int dim = imm.ambient->dim();
  const int sdim = imm.source_dim();
  spd.h = Tensor3(dim, sdim, sdim);
  Vector w(static_cast<std::size_t>(dim));
  for (int a = 0; a < sdim; ++a)
    for (int b = 0; b < sdim; ++b) {
      for (int k = 0; k < dim; ++k) {
        double s = spd.phi_hess(k, a, b);
        for (int i = 0; i < dim; ++i) {
          const double tia = spd.frame.T(i, a);
          if (tia == 0.0) continue;
          for (int l = 0; l < dim; ++l) s += spd.ambient.Gamma(k, i, l) * tia * spd.frame.T(l, b);
        }
        w[k] = s;
      }
      const Vector hn = spd.frame.project_normal(w);
      for (int k = 0; k < dim; ++k) spd.h(k, a, b) = hn[k];
    }

  spd.lee = lee_forms(spd.ambient);
  for (int a = 0; a < 3; ++a) {
    spd.p_top[a] = spd.frame.project_tangent(spd.lee.p[a]);
    spd.p_bot[a] = vec_sub(spd.lee.p[a], spd.p_top[a]);
  }
  return spd;
}

Vector second_fundamental(const SubPointData& spd, const Vector& X, const Vector& Y) {
  const int dim = spd.ambient.dim;
  const int sdim = spd.frame.T.cols();
  const Vector tx = spd.frame.push(X);
  const Vector ty = spd.frame.push(Y);
  Vector w(static_cast<std::size_t>(dim), 0.0);
  for (int k = 0; k < dim; ++k) {
    double s = 0.0;
    for (int a = 0; a < sdim; ++a) {
      if (X[a] == 0.0) continue;
      for (int b = 0; b < sdim; ++b) s += X[a] * Y[b] * spd.phi_hess(k, a, b);
    }
    for (int i = 0; i < dim; ++i) {
      if (tx[i] == 0.0) continue;
      for (int l = 0; l < dim; ++l) s += spd.ambient.Gamma(k, i, l) * tx[i] * ty[l];
    }
    w[k] = s;
  }
  return spd.frame.project_normal(w);
}

Vector second_fundamental(const Immersion& imm, const Vector& p, const Vector& X,
                          const Vector& Y) {
  return second_fundamental(sub_point_data(imm, p), X, Y);
}

Vector shape_operator(const SubPointData& spd, const Vector& n_ambient, const Vector& X) {
  const int sdim = spd.frame.T.cols();
  const Vector gn = mat_vec(spd.frame.g_amb, n_ambient);
  Vector rhs(static_cast<std::size_t>(sdim), 0.0);
  Vector eb(static_cast<std::size_t>(sdim), 0.0);
  for (int b = 0; b < sdim; ++b) {
    eb[b] = 1.0;
    const Vector hxb = second_fundamental(spd, X, eb);
    rhs[b] = vec_dot(hxb, gn);
    eb[b] = 0.0;
  }
  return mat_vec(spd.frame.g_ind_inv, rhs);
}

Vector shape_operator(const Immersion& imm, const Vector& p, const Vector& n_ambient,
                      const Vector& X) {
  return shape_operator(sub_point_data(imm, p), n_ambient, X);
}

namespace {

// Tangential projector P(q) = T Ginv T^t g at phi(q) together with its
// derivative dP(a,k,l) = d_a P(k,l) along the source coordinates.
void projector_jet(const Immersion& imm, const Vector& q, Matrix& P, Tensor3& dP) {
  const int dim = imm.ambient->dim();
  const int sdim = imm.source_dim();
  Vector phi;
  Matrix T;
  Tensor3 H;
  imm.jet2(q, phi, T, H);
  const ChartFields af = imm.ambient->fields(phi);

  const Matrix G = symmetrized_gram(T, af.g);
  const Matrix Ginv = invert(G);
  const Matrix Tt = transpose(T);
  P = T * Ginv * Tt * af.g;

  dP = Tensor3(sdim, dim, dim);
  for (int a = 0; a < sdim; ++a) {
    Matrix Ha(dim, sdim);
    for (int k = 0; k < dim; ++k)
      for (int b = 0; b < sdim; ++b) Ha(k, b) = H(k, a, b);

    Matrix dg_a(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double s = 0.0;
        for (int k = 0; k < dim; ++k) s += af.dg(k, i, j) * T(k, a);
        dg_a(i, j) = s;
      }

    const Matrix Hat = transpose(Ha);
    const Matrix dG = Hat * af.g * T + Tt * dg_a * T + Tt * af.g * Ha;
    const Matrix dGinv = -1.0 * (Ginv * dG * Ginv);
    const Matrix dPa = Ha * Ginv * Tt * af.g + T * dGinv * Tt * af.g + T * Ginv * Hat * af.g +
                       T * Ginv * Tt * dg_a;
    for (int k = 0; k < dim; ++k)
      for (int l = 0; l < dim; ++l) dP(a, k, l) = dPa(k, l);
  }
}

}  // namespace

NormalField constant_normal_field(const Immersion& imm, Vector n0) {
  const int dim = imm.ambient->dim();
  const int sdim = imm.source_dim();
  NormalField f;
  f.value = [n0](const Vector&) { return n0; };
  f.jac = [dim, sdim](const Vector&) { return Matrix(dim, sdim); };
  return f;
}

NormalField projected_normal_field(const Immersion& imm, Vector n0) {
  const Immersion* ptr = &imm;
  NormalField f;
  f.value = [ptr, n0](const Vector& q) { return frame_at(*ptr, q).project_normal(n0); };
  f.jac = [ptr, n0](const Vector& q) {
    Matrix P;
    Tensor3 dP;
    projector_jet(*ptr, q, P, dP);
    const int dim = P.rows();
    const int sdim = dP.dim0();
    Matrix jac(dim, sdim);
    for (int a = 0; a < sdim; ++a)
      for (int k = 0; k < dim; ++k) {
        double s = 0.0;
        for (int l = 0; l < dim; ++l) s += dP(a, k, l) * n0[l];
        jac(k, a) = -s;
      }
    return jac;
  };
  return f;
}

NormalField structure_image_field(const Immersion& imm, int alpha, NormalField inner) {
  if (alpha < 1 || alpha > 3) throw DomainError("structure_image_field: alpha must be 1..3");
  const Immersion* ptr = &imm;
  NormalField f;
  f.value = [ptr, alpha, inner](const Vector& q) {
    Vector phi;
    Matrix T;
    ptr->jet1(q, phi, T);
    return mat_vec(ptr->ambient->fields(phi).J[alpha - 1], inner.value(q));
  };
  f.jac = [ptr, alpha, inner](const Vector& q) {
    Vector phi;
    Matrix T;
    ptr->jet1(q, phi, T);
    const ChartFields af = ptr->ambient->fields(phi);
    const Vector v = inner.value(q);
    const Matrix dv = inner.jac(q);
    const int dim = ptr->ambient->dim();
    const int sdim = ptr->source_dim();
    Matrix jac(dim, sdim);
    for (int a = 0; a < sdim; ++a)
      for (int k = 0; k < dim; ++k) {
        double s = 0.0;
        for (int j = 0; j < dim; ++j) {
          double dJ_kj = 0.0;
          for (int l = 0; l < dim; ++l) dJ_kj += af.dJ[alpha - 1](l, k, j) * T(l, a);
          s += dJ_kj * v[j] + af.J[alpha - 1](k, j) * dv(j, a);
        }
        jac(k, a) = s;
      }
    return jac;
  };
  return f;
}

WeingartenSplit normal_derivative(const Immersion& imm, const Vector& p, const NormalField& field,
                                  const Vector& X) {
  const SubPointData spd = sub_point_data(imm, p);
  const Vector n = field.value(p);
  const Vector tangential = spd.frame.project_tangent(n);
  if (max_abs(tangential) > 1e-8 * (1.0 + max_abs(n)))
    throw DomainError("normal_derivative: field is not normal at the base point");

  const Matrix dn = field.jac(p);
  const int dim = spd.ambient.dim;
  const Vector tx = spd.frame.push(X);
  Vector w(static_cast<std::size_t>(dim), 0.0);
  for (int k = 0; k < dim; ++k) {
    double s = 0.0;
    for (int a = 0; a < spd.frame.T.cols(); ++a) s += dn(k, a) * X[a];
    for (int i = 0; i < dim; ++i) {
      if (tx[i] == 0.0) continue;
      for (int l = 0; l < dim; ++l) s += spd.ambient.Gamma(k, i, l) * tx[i] * n[l];
    }
    w[k] = s;
  }
  WeingartenSplit split;
  split.shape = vec_scaled(-1.0, spd.frame.tangent_coords(w));
  split.normal_deriv = spd.frame.project_normal(w);
  return split;
}

Vector mean_curvature(const SubPointData& spd) {
  const int dim = spd.ambient.dim;
  const int sdim = spd.frame.T.cols();
  Vector c(static_cast<std::size_t>(dim), 0.0);
  for (int a = 0; a < sdim; ++a)
    for (int b = 0; b < sdim; ++b) {
      const double w = spd.frame.g_ind_inv(a, b);
      if (w == 0.0) continue;
      for (int k = 0; k < dim; ++k) c[k] += w * spd.h(k, a, b);
    }
  return vec_scaled(1.0 / sdim, c);
}

Vector mean_curvature(const Immersion& imm, const Vector& p) {
  return mean_curvature(sub_point_data(imm, p));
}

namespace {

/// The pullback geometry of an immersion as a chart manifold of dimension 4m.
class InducedChart final : public ChartManifold {
 public:
  explicit InducedChart(ImmersionPtr imm)
      : ChartManifold(imm->source_dim(), imm->label + " induced"), imm_(std::move(imm)) {}

  ChartFields fields(const Vector& q) const override {
    const int dim = imm_->ambient->dim();
    const int sdim = imm_->source_dim();
    Vector phi;
    Matrix T;
    Tensor3 H;
    imm_->jet2(q, phi, T, H);
    const ChartFields af = imm_->ambient->fields(phi);
    const Matrix Tt = transpose(T);

    ChartFields out;
    out.g = symmetrized_gram(T, af.g);
    Matrix g_inv;
    try {
      g_inv = invert(out.g);
    } catch (const SingularMatrixError&) {
      throw DegenerateInducedMetricError("pullback metric singular at " + point_to_string(q));
    }

    // Per-direction derivatives of T, of g o phi and of J o phi.
    std::vector<Matrix> Ha(static_cast<std::size_t>(sdim), Matrix(dim, sdim));
    std::vector<Matrix> dg_a(static_cast<std::size_t>(sdim), Matrix(dim, dim));
    for (int a = 0; a < sdim; ++a) {
      for (int k = 0; k < dim; ++k)
        for (int b = 0; b < sdim; ++b) Ha[a](k, b) = H(k, a, b);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          double s = 0.0;
          for (int k = 0; k < dim; ++k) s += af.dg(k, i, j) * T(k, a);
          dg_a[a](i, j) = s;
        }
    }

    out.dg = Tensor3(sdim, sdim, sdim);
    std::vector<Matrix> dG(static_cast<std::size_t>(sdim));
    for (int c = 0; c < sdim; ++c) {
      dG[c] = transpose(Ha[c]) * af.g * T + Tt * dg_a[c] * T + Tt * af.g * Ha[c];
      for (int a = 0; a < sdim; ++a)
        for (int b = 0; b < sdim; ++b) out.dg(c, a, b) = 0.5 * (dG[c](a, b) + dG[c](b, a));
    }

    for (int s = 0; s < 3; ++s) {
      const Matrix& J = af.J[s];
      const Matrix B = Tt * af.g * J * T;
      const Matrix Jhat = g_inv * B;
      out.J[s] = Jhat;
      out.dJ[s] = Tensor3(sdim, sdim, sdim);
      for (int c = 0; c < sdim; ++c) {
        Matrix dJ_c(dim, dim);
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) {
            double v = 0.0;
            for (int k = 0; k < dim; ++k) v += af.dJ[s](k, i, j) * T(k, c);
            dJ_c(i, j) = v;
          }
        const Matrix dB = transpose(Ha[c]) * af.g * J * T + Tt * dg_a[c] * J * T +
                          Tt * af.g * dJ_c * T + Tt * af.g * J * Ha[c];
        Matrix dGsym(sdim, sdim);
        for (int a = 0; a < sdim; ++a)
          for (int b = 0; b < sdim; ++b) dGsym(a, b) = out.dg(c, a, b);
        const Matrix dJhat = g_inv * (dB - dGsym * Jhat);
        for (int a = 0; a < sdim; ++a)
          for (int b = 0; b < sdim; ++b) out.dJ[s](c, a, b) = dJhat(a, b);
      }
    }
    return out;
  }

 private:
  ImmersionPtr imm_;
};

}  // namespace

ManifoldPtr induced_manifold(ImmersionPtr imm) {
  return std::make_shared<InducedChart>(std::move(imm));
}

}  // namespace hypernorden
