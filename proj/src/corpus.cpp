#include "steklov/corpus.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace steklov {

namespace {

constexpr double kBoxHalfWidth = 10.0;

PiecewiseQuadratic abs_profile() { return {{0.0}, {{{0.0, -1.0, 0.0}}, {{0.0, 1.0, 0.0}}}}; }

PiecewiseQuadratic huber_profile(double delta) {
  return {{-delta, delta}, {{{-0.5 * delta, -1.0, 0.0}}, {{0.0, 0.0, 0.5 / delta}}, {{-0.5 * delta, 1.0, 0.0}}}};
}

ObjectiveSpec base_spec(std::string name, int dim, double lipschitz) {
  ObjectiveSpec spec;
  spec.name = std::move(name);
  spec.dim = dim;
  spec.lipschitz_const = lipschitz;
  spec.minimizer = Vector::Zero(dim);
  spec.min_value = 0.0;
  spec.is_convex = true;
  return spec;
}

ObjectiveSpec separable_abs(std::string name, int dim) {
  ObjectiveSpec spec = base_spec(std::move(name), dim, std::sqrt(static_cast<double>(dim)));
  spec.value_batch = [](const Eigen::Ref<const PointBatch>& p, Eigen::Ref<Vector> out) {
    out = p.cwiseAbs().colwise().sum().transpose();
  };
  spec.subgradient_batch = [](const Eigen::Ref<const PointBatch>& p, Eigen::Ref<Matrix> out) {
    out = p.array().sign().matrix();
  };
  spec.separable_profile = abs_profile();
  return spec;
}

// max_i <a_i, x> with rows a_i = e_i and a_{n+1} = -2 * (1,...,1).
Matrix maxlin_pieces(int dim) {
  Matrix a(dim + 1, dim);
  a.topRows(dim).setIdentity();
  a.row(dim).setConstant(-2.0);
  return a;
}

}  // namespace

double evaluate(const ObjectiveSpec& spec, const Eigen::Ref<const Vector>& x) {
  require_dim(x.size(), spec.dim, "evaluate");
  Vector out(1);
  spec.value_batch(x, out);
  return out[0];
}

Vector subgradient(const ObjectiveSpec& spec, const Eigen::Ref<const Vector>& x) {
  require_dim(x.size(), spec.dim, "subgradient");
  Matrix out(spec.dim, 1);
  spec.subgradient_batch(x, out);
  return out.col(0);
}

ObjectiveSpec make_abs1d() { return separable_abs("abs1d", 1); }

ObjectiveSpec make_l1(int dim) { return separable_abs("l1", dim); }

ObjectiveSpec make_maxlin(int dim) {
  const Matrix pieces = maxlin_pieces(dim);
  ObjectiveSpec spec = base_spec("maxlin", dim, pieces.rowwise().norm().maxCoeff());
  spec.value_batch = [pieces](const Eigen::Ref<const PointBatch>& p, Eigen::Ref<Vector> out) {
    out = (pieces * p).colwise().maxCoeff().transpose();
  };
  spec.subgradient_batch = [pieces](const Eigen::Ref<const PointBatch>& p, Eigen::Ref<Matrix> out) {
    const Matrix affine = pieces * p;
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      Eigen::Index best = 0;
      affine.col(j).maxCoeff(&best);  // first maximal index
      out.col(j) = pieces.row(best).transpose();
    }
  };
  if (dim == 1) spec.separable_profile = PiecewiseQuadratic{{0.0}, {{{0.0, -2.0, 0.0}}, {{0.0, 1.0, 0.0}}}};
  return spec;
}

ObjectiveSpec make_linf(int dim) {
  ObjectiveSpec spec = base_spec("linf", dim, 1.0);
  spec.value_batch = [](const Eigen::Ref<const PointBatch>& p, Eigen::Ref<Vector> out) {
    out = p.cwiseAbs().colwise().maxCoeff().transpose();
  };
  spec.subgradient_batch = [](const Eigen::Ref<const PointBatch>& p, Eigen::Ref<Matrix> out) {
    out.setZero();
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      Eigen::Index best = 0;
      p.col(j).cwiseAbs().maxCoeff(&best);
      const double v = p(best, j);
      out(best, j) = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    }
  };
  if (dim == 1) spec.separable_profile = abs_profile();
  return spec;
}

ObjectiveSpec make_quad(int dim) {
  Vector diag = Vector::LinSpaced(dim, 1.0, static_cast<double>(dim));
  ObjectiveSpec spec = make_quadratic("quad", diag.asDiagonal().toDenseMatrix(), Vector::Zero(dim));
  return spec;
}

ObjectiveSpec make_huberized_l1(int dim, double delta) {
  if (!(delta > 0.0)) throw InvalidInput("huber threshold must be positive");
  ObjectiveSpec spec = base_spec("huberized-l1", dim, std::sqrt(static_cast<double>(dim)));
  spec.value_batch = [delta](const Eigen::Ref<const PointBatch>& p, Eigen::Ref<Vector> out) {
    const auto a = p.array().abs();
    out = (a <= delta).select(a.square() / (2.0 * delta), a - 0.5 * delta).colwise().sum().transpose();
  };
  spec.subgradient_batch = [delta](const Eigen::Ref<const PointBatch>& p, Eigen::Ref<Matrix> out) {
    out = (p.array() / delta).min(1.0).max(-1.0).matrix();
  };
  spec.separable_profile = huber_profile(delta);
  return spec;
}

ObjectiveSpec make_quadratic(std::string name, const Matrix& A, const Vector& b, double c) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || b.size() != n || n == 0) throw InvalidInput("quadratic: inconsistent shapes");
  const Matrix sym = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().cwiseAbs().maxCoeff();

  ObjectiveSpec spec;
  spec.name = std::move(name);
  spec.dim = n;
  spec.is_convex = lo >= 0.0;
  if (lo > 0.0) {
    spec.minimizer = sym.llt().solve(-b);
    spec.min_value = c + 0.5 * b.dot(*spec.minimizer);
  }
  // Gradient norm bound over the sampling box of half-width 10 around the minimizer.
  spec.lipschitz_const = hi > 0.0 ? hi * kBoxHalfWidth * std::sqrt(static_cast<double>(n)) : 1.0;
  spec.value_batch = [sym, b, c](const Eigen::Ref<const PointBatch>& p, Eigen::Ref<Vector> out) {
    out = (0.5 * (p.array() * (sym * p).array()).colwise().sum().matrix() + b.transpose() * p).transpose();
    out.array() += c;
  };
  spec.subgradient_batch = [sym, b](const Eigen::Ref<const PointBatch>& p, Eigen::Ref<Matrix> out) {
    out = (sym * p).colwise() + b;
  };
  spec.quadratic = QuadraticForm{sym, b, c};
  return spec;
}

ObjectiveSpec make_constant(int dim, double value) {
  ObjectiveSpec spec = make_quadratic("constant", Matrix::Zero(dim, dim), Vector::Zero(dim), value);
  spec.minimizer = Vector::Zero(dim);
  spec.min_value = value;
  return spec;
}

ObjectiveSpec make_affine(const Vector& slope, double offset) {
  const int n = static_cast<int>(slope.size());
  ObjectiveSpec spec = make_quadratic("affine", Matrix::Zero(n, n), slope, offset);
  spec.lipschitz_const = slope.norm() > 0.0 ? slope.norm() : 1.0;
  if (slope.norm() == 0.0) spec.minimizer = Vector::Zero(n);
  return spec;
}

const std::vector<CorpusEntry>& corpus_entries() {
  static const std::vector<CorpusEntry> entries{
      {"abs1d", 1, 1, 1, "|x|"},
      {"l1", 1, 10, 2, "sum_i |x_i|"},
      {"maxlin", 1, 10, 1, "max(x_1, ..., x_n, -2 sum_i x_i); max(x, -2x) in 1D"},
      {"linf", 1, 10, 2, "max_i |x_i|"},
      {"quad", 1, 10, 2, "1/2 x' diag(1..n) x (smooth control case)"},
      {"huberized-l1", 1, 10, 2, "sum_i huber_1(x_i)"},
  };
  return entries;
}

ObjectiveSpec make_objective(std::string_view name, int dim) {
  for (const auto& entry : corpus_entries()) {
    if (entry.name != name) continue;
    if (dim < entry.min_dim || dim > entry.max_dim) {
      throw InvalidInput("problem '" + entry.name + "' supports dimensions " + std::to_string(entry.min_dim) + ".." +
                         std::to_string(entry.max_dim));
    }
    if (name == "abs1d") return make_abs1d();
    if (name == "l1") return make_l1(dim);
    if (name == "maxlin") return make_maxlin(dim);
    if (name == "linf") return make_linf(dim);
    if (name == "quad") return make_quad(dim);
    return make_huberized_l1(dim);
  }
  throw ConfigError("unknown problem '" + std::string(name) + "'");
}

std::vector<ObjectiveSpec> list_corpus() {
  std::vector<ObjectiveSpec> specs;
  for (const auto& entry : corpus_entries()) specs.push_back(make_objective(entry.name, entry.default_dim));
  return specs;
}

bool supports_closed_form(const ObjectiveSpec& spec, const AveragingDomain& domain) {
  if (domain.dim != spec.dim) return false;
  if (spec.quadratic) return true;
  if (spec.separable_profile) return domain.shape == DomainShape::cube || domain.dim == 1;
  return false;
}

namespace {

void require_closed_form(const ObjectiveSpec& spec, const AveragingDomain& domain, const Eigen::Ref<const Vector>& x) {
  require_dim(x.size(), spec.dim, "reference_smoothed");
  require_dim(domain.dim, spec.dim, "reference_smoothed domain");
  if (!supports_closed_form(spec, domain)) {
    throw CapabilityError("no closed-form smoothing for '" + spec.name + "' on a " + to_string(domain.shape) +
                          " domain in dimension " + std::to_string(domain.dim));
  }
}

double passes(Depth depth) { return depth == Depth::single ? 1.0 : 2.0; }

}  // namespace

double reference_value(const ObjectiveSpec& spec, const AveragingDomain& domain, const Eigen::Ref<const Vector>& x,
                       Depth depth) {
  require_closed_form(spec, domain, x);
  if (spec.quadratic) {
    const auto& q = *spec.quadratic;
    return 0.5 * x.dot(q.A * x) + q.b.dot(x) + q.c + 0.5 * passes(depth) * q.A.trace() * second_moment(domain);
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) sum += averaged_value(*spec.separable_profile, x[i], domain.radius, depth);
  return sum;
}

Vector reference_gradient(const ObjectiveSpec& spec, const AveragingDomain& domain, const Eigen::Ref<const Vector>& x,
                          Depth depth) {
  require_closed_form(spec, domain, x);
  if (spec.quadratic) return spec.quadratic->A * x + spec.quadratic->b;
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = averaged_slope(*spec.separable_profile, x[i], domain.radius, depth);
  return g;
}

Matrix reference_hessian(const ObjectiveSpec& spec, const AveragingDomain& domain, const Eigen::Ref<const Vector>& x,
                         Depth depth) {
  require_closed_form(spec, domain, x);
  if (depth == Depth::single) {
    throw CapabilityError("the singly averaged function is only once continuously differentiable");
  }
  if (spec.quadratic) return spec.quadratic->A;
  Matrix h = Matrix::Zero(x.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) h(i, i) = twice_averaged_curvature(*spec.separable_profile, x[i], domain.radius);
  return h;
}

SmoothedQuantity reference_smoothed(const ObjectiveSpec& spec, const AveragingDomain& domain,
                                    const Eigen::Ref<const Vector>& x, Order order, Depth depth) {
  switch (order) {
    case Order::value:
      return reference_value(spec, domain, x, depth);
    case Order::gradient:
      return reference_gradient(spec, domain, x, depth);
    case Order::hessian:
      break;
  }
  return reference_hessian(spec, domain, x, depth);
}

}  // namespace steklov
