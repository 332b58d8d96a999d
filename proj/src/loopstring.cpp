#include "gerbekit/loopstring.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "gerbekit/errors.hpp"

namespace gerbekit {

namespace {

constexpr double kChartRadius = 2.0;

Eigen::Quaterniond quat(const Eigen::VectorXd& x) { return {x(0), x(1), x(2), x(3)}; }

Eigen::VectorXd coords(const Eigen::Quaterniond& q) {
  Eigen::VectorXd v(4);
  v << q.w(), q.x(), q.y(), q.z();
  return v;
}

Eigen::VectorXd inversion(const Eigen::VectorXd& x) { return coords(quat(x).conjugate()) / x.squaredNorm(); }

// A point with radius in [lo, hi], uniform in volume, random direction.
Eigen::VectorXd sample_shell(SampleRng& rng, int dim, double lo, double hi) {
  Eigen::VectorXd dir = rng.vector(dim, 1.0);
  while (dir.norm() < 1e-8) dir = rng.vector(dim, 1.0);
  const double lo_n = std::pow(lo, dim);
  const double hi_n = std::pow(hi, dim);
  const double r = std::pow(lo_n + rng.uniform() * (hi_n - lo_n), 1.0 / dim);
  return r * dir.normalized();
}

// Two charts with clearance R − |x| and transition x ↦ inverted(x), sampled away from the chart edges.
void two_ball_cover(BundleData& b, int dim) {
  b.base.dimension = dim;
  const auto clearance = [](const Eigen::VectorXd& x) { return kChartRadius - x.norm(); };
  b.base.charts = {{"south", clearance}, {"north", clearance}};
  b.nerve.chart_count = 2;
  b.nerve.simplices = {{0}, {1}, {0, 1}};
  const double margin = b.margin + 0.05;
  b.nerve.sample = [dim, margin](SampleRng& rng, const std::vector<int>& s) {
    const double hi = kChartRadius - margin;
    const double lo = s.size() > 1 ? 1.0 / hi : 0.0;
    return sample_shell(rng, dim, lo, hi);
  };
}

AlgebraElement total_curvature(const BundleData& bundle, const BundlePoint& b, const BundleTangent& v,
                               const BundleTangent& w) {
  return adjoint(b.g.inverse(), chart_curvature(bundle, b.chart, b.x, v.base, w.base, 1e-3));
}

template <class T, class F>
auto pointwise(const Loop<T>& p, F&& f) {
  using R = decltype(f(0));
  Loop<R> out;
  out.samples.reserve(p.samples.size());
  for (int j = 0; j < p.size(); ++j) out.samples.push_back(f(j));
  return out;
}

Eigen::VectorXd central4(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& u, double h) {
  return (8.0 * (f(x + h * u) - f(x - h * u)) - (f(x + 2.0 * h * u) - f(x - 2.0 * h * u))) / (12.0 * h);
}

}  // namespace

std::shared_ptr<const BundleData> instanton_bundle() {
  auto b = std::make_shared<BundleData>();
  b->name = "instanton";
  b->group = GroupKind::SU2;
  b->base.name = "S4";
  two_ball_cover(*b, 4);
  b->base.transition = [](int from, int to, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return from == to ? x : inversion(x);
  };
  b->base.differential = [](int from, int to, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& u) -> Eigen::VectorXd {
    if (from == to) return u;
    const double n2 = x.squaredNorm();
    return coords(quat(u).conjugate()) / n2 - (2.0 * x.dot(u) / (n2 * n2)) * coords(quat(x).conjugate());
  };
  b->transition = [](int a, int c, const Eigen::VectorXd& x) {
    if (a == c) return GroupElement::identity(GroupKind::SU2);
    return GroupElement::su2(quat(x).conjugate().normalized());
  };
  b->connection = [](int, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    return AlgebraElement::su2((quat(x).conjugate() * quat(u)).vec() / (1.0 + x.squaredNorm()));
  };
  b->curvature = [](int, const Eigen::VectorXd& x, const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
    const double s = 1.0 + x.squaredNorm();
    return AlgebraElement::su2(2.0 * (quat(u).conjugate() * quat(w)).vec() / (s * s));
  };
  return b;
}

double char_form(const BundleData& bundle, int chart, const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& u) {
  if (u.size() != 4) throw DegreeError("char_form needs four tangents");
  const auto f = [&](int i, int j) { return chart_curvature(bundle, chart, x, u[i], u[j], 1e-3); };
  const double tr = trace_product(f(0, 1), f(2, 3)) - trace_product(f(0, 2), f(1, 3)) + trace_product(f(0, 3), f(1, 2));
  return 2.0 * tr / (8.0 * M_PI * M_PI);
}

DifferentialForm<TotalSpace, double> char_form_on_total(std::shared_ptr<const BundleData> bundle) {
  return {4, [bundle](const BundlePoint& b, const std::vector<BundleTangent>& v) {
            return char_form(*bundle, b.chart, b.x, {v[0].base, v[1].base, v[2].base, v[3].base});
          }};
}

double chern_simons(const BundleData& bundle, const BundlePoint& b, const std::vector<BundleTangent>& v, int level) {
  if (v.size() != 3) throw DegreeError("chern_simons needs three tangents");
  std::array<AlgebraElement, 3> a;
  for (int i = 0; i < 3; ++i) a[i] = global_connection(bundle, b, v[i]);
  const auto da = [&](int i, int j) { return total_curvature(bundle, b, v[i], v[j]) - bracket(a[i], a[j]); };
  const double a_da = trace_product(a[0], da(1, 2)) - trace_product(a[1], da(0, 2)) + trace_product(a[2], da(0, 1));
  const double cubic = 2.0 * trace_product(a[0], bracket(a[1], a[2]));
  return level * (a_da + cubic) / (8.0 * M_PI * M_PI);
}

DifferentialForm<TotalSpace, double> chern_simons_form(std::shared_ptr<const BundleData> bundle, int level) {
  return {3, [bundle, level](const BundlePoint& b, const std::vector<BundleTangent>& v) {
            return chern_simons(*bundle, b, v, level);
          }};
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw InvalidArgument("gauss_legendre needs at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  nodes.resize(static_cast<std::size_t>(n));
  weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double v0 = eig.eigenvectors()(0, i);
    nodes[i] = 0.5 * (a + b) + 0.5 * (b - a) * eig.eigenvalues()(i);
    weights[i] = (b - a) * v0 * v0;
  }
}

InstantonNumber instanton_number(const BundleData& bundle, int radial_nodes, int angular_nodes) {
  if (bundle.base.dimension != 4 || bundle.nerve.chart_count != 2)
    throw InvalidArgument("instanton_number needs a two-chart four-manifold");
  std::vector<double> tn, tw, cn, cw;
  gauss_legendre(radial_nodes, 0.0, 1.0, tn, tw);
  gauss_legendre(angular_nodes, 0.0, M_PI, cn, cw);
  const int azimuths = 2 * angular_nodes;
  std::vector<Eigen::VectorXd> e(4, Eigen::VectorXd::Zero(4));
  for (int i = 0; i < 4; ++i) e[i](i) = 1.0;

  const auto chart_integral = [&](int chart) {
    double total = 0.0;
    for (std::size_t ir = 0; ir < tn.size(); ++ir) {
      const double t = tn[ir];
      const double r = t / (1.0 - t);
      const double dr = tw[ir] / ((1.0 - t) * (1.0 - t));
      const double rho = 1.0 / (1.0 + std::pow(r, 4));
      for (std::size_t ic = 0; ic < cn.size(); ++ic) {
        for (std::size_t it = 0; it < cn.size(); ++it) {
          for (int ip = 0; ip < azimuths; ++ip) {
            const double chi = cn[ic], th = cn[it], ph = 2.0 * M_PI * ip / azimuths;
            Eigen::VectorXd x(4);
            x << std::cos(chi), std::sin(chi) * std::cos(th), std::sin(chi) * std::sin(th) * std::cos(ph),
                std::sin(chi) * std::sin(th) * std::sin(ph);
            x *= r;
            const double jac = std::pow(r, 3) * std::pow(std::sin(chi), 2) * std::sin(th);
            const double w = dr * cw[ic] * cw[it] * (2.0 * M_PI / azimuths);
            total += w * jac * rho * char_form(bundle, chart, x, e);
          }
        }
      }
    }
    return total;
  };

  InstantonNumber out;
  out.positively_oriented = bundle.base.positively_oriented;
  Eigen::VectorXd probe(4);
  probe << 0.6, 0.5, -0.4, 0.3;
  Eigen::Matrix4d jac;
  for (int i = 0; i < 4; ++i) jac.col(i) = bundle.base.push_tangent(kSouth, kNorth, probe, e[i]);
  const double orientation = jac.determinant() > 0.0 ? 1.0 : -1.0;
  out.south = chart_integral(kSouth);
  out.north = orientation * chart_integral(kNorth);
  out.value = (out.positively_oriented ? 1.0 : -1.0) * (out.south + out.north);
  return out;
}

AlgebraLoop higgs_from_connection(const TotalSpace& space, const LoopBundlePoint& p) {
  return pointwise(p, [&](int j) { return global_connection(space.bundle(), p[j], loop_velocity(space, p, j)); });
}

double higgs_transformation_residual(const TotalSpace& space, const LoopBundlePoint& p, const GroupLoop& gamma) {
  require_same_grid(p, gamma, "higgs_transformation_residual");
  const LoopBundlePoint moved = pointwise(p, [&](int j) { return act(p[j], gamma[j]); });
  const AlgebraLoop expected = adjoint(inverse(gamma), higgs_from_connection(space, p)) + mc_pullback(gamma);
  return norm(higgs_from_connection(space, moved) - expected);
}

Imag loop_reduced_splitting(const TotalSpace& space, const LoopBundlePoint& p, const AlgebraLoop& x, int level) {
  require_same_grid(p, x, "loop_reduced_splitting");
  return -loop_trace_integral(level, higgs_from_connection(space, p), x);
}

LoopGerbe loop_gerbe(std::shared_ptr<const BundleData> bundle, const LoopExtension& model) {
  const TotalSpace space(bundle);
  LoopGerbe g{LoopTotalSpace{space}, model, {}, {}, {}, {}, {}, {}, {}, {}};
  const int level = model.level();
  const LoopShift shift = model.shift();
  g.splitting = {[space, level, shift](const LoopBundlePoint& p, const AlgebraLoop& x) {
    return loop_reduced_splitting(space, p, x, level) + shift(x);
  }};
  g.connection = [bundle](const LoopBundlePoint& p, const LoopBundleTangent& v) {
    require_same_grid(p, v, "loop connection");
    return pointwise(p, [&](int j) { return global_connection(*bundle, p[j], v[j]); });
  };
  g.curvature = [bundle](const LoopBundlePoint& p, const LoopBundleTangent& v, const LoopBundleTangent& w) {
    require_same_grid(p, v, "loop curvature");
    require_same_grid(p, w, "loop curvature");
    return pointwise(p, [&](int j) { return total_curvature(*bundle, p[j], v[j], w[j]); });
  };
  g.division = [bundle](const LoopBundlePoint& a, const LoopBundlePoint& b) {
    require_same_grid(a, b, "loop division");
    return pointwise(a, [&](int j) { return division(*bundle, a[j], b[j]); });
  };
  g.act = [](const LoopBundlePoint& p, const GroupLoop& x) {
    require_same_grid(p, x, "loop action");
    return pointwise(p, [&](int j) { return act(p[j], x[j]); });
  };
  g.horizontal = [bundle](const LoopBundlePoint& p, const LoopBundleTangent& v) {
    require_same_grid(p, v, "loop horizontal part");
    return pointwise(p, [&](int j) { return horizontal_part(*bundle, p[j], v[j]); });
  };
  g.vertical = [](const LoopBundlePoint& p, const AlgebraLoop& x) {
    require_same_grid(p, x, "loop vertical");
    return pointwise(p, [&](int j) { return vertical(p[j], x[j]); });
  };
  g.log_difference = [](const GroupLoop& a, const GroupLoop& b) {
    require_same_grid(a, b, "loop log difference");
    return pointwise(a, [&](int j) { return log(a[j].inverse() * b[j]); });
  };
  return g;
}

Imag loop_curving(const TotalSpace& space, const LoopBundlePoint& p, const LoopBundleTangent& v,
                  const LoopBundleTangent& w, int level) {
  require_same_grid(p, v, "loop_curving");
  require_same_grid(p, w, "loop_curving");
  const BundleData& bundle = space.bundle();
  const AlgebraLoop av = pointwise(p, [&](int j) { return global_connection(bundle, p[j], v[j]); });
  const AlgebraLoop aw = pointwise(p, [&](int j) { return global_connection(bundle, p[j], w[j]); });
  const AlgebraLoop f = pointwise(p, [&](int j) { return total_curvature(bundle, p[j], v[j], w[j]); });
  return -loop_trace_integral(level, av, derivative(aw)) +
         loop_trace_integral(level, higgs_from_connection(space, p), f);
}

double upsilon(const TotalSpace& space, const LoopBundlePoint& p, const LoopBundleTangent& v, int level) {
  require_same_grid(p, v, "upsilon");
  const AlgebraLoop phi = higgs_from_connection(space, p);
  double s = 0.0;
  for (int j = 0; j < p.size(); ++j) s += trace_product(phi[j], global_connection(space.bundle(), p[j], v[j]));
  return level * s * p.step() / (8.0 * M_PI * M_PI);
}

DifferentialForm<LoopTotalSpace, double> upsilon_form(std::shared_ptr<const BundleData> bundle, int level) {
  const TotalSpace space(bundle);
  return {1, [space, level](const LoopBundlePoint& p, const std::vector<LoopBundleTangent>& v) {
            return upsilon(space, p, v[0], level);
          }};
}

TransgressionResidual cs_transgression_residual(std::shared_ptr<const BundleData> bundle, const LoopBundlePoint& p,
                                                const LoopBundleTangent& v, const LoopBundleTangent& w, int level,
                                                double h) {
  const TotalSpace space(bundle);
  const LoopGerbe geo = loop_gerbe(bundle, LoopExtension(level));
  TransgressionResidual r;
  r.curving = curving(geo, p, v, w);
  const double tau_cs = transgress_loop(space, chern_simons_form(bundle, level))(p, {v, w});
  const double d_upsilon = extrapolated_derivative(LoopTotalSpace{space}, upsilon_form(bundle, level), p, {v, w}, h);
  r.transgressed = Imag(2.0 * M_PI * (tau_cs + d_upsilon));
  r.residual = abs(r.curving - r.transgressed);
  return r;
}

AlgebraLoop LoopGroupSpace::difference(const GroupLoop& g, const GroupLoop& q) const {
  require_same_grid(g, q, "loop group difference");
  return pointwise(g, [&](int j) { return log(g[j].inverse() * q[j]); });
}

VolumeRelation volume_relation(const GroupLoop& gamma, const AlgebraLoop& x, const AlgebraLoop& y, int level,
                               double h) {
  require_same_grid(gamma, x, "volume_relation");
  require_same_grid(gamma, y, "volume_relation");
  VolumeRelation r;
  r.lhs = -LoopExtension(level).lie_cocycle(x, y);
  const AlgebraLoop m = mc_pullback(gamma);
  double tau_sigma = 0.0;
  for (int j = 0; j < gamma.size(); ++j) tau_sigma += 3.0 * trace_product(m[j], bracket(x[j], y[j]));
  tau_sigma *= level * gamma.step() / (24.0 * M_PI * M_PI);
  const DifferentialForm<LoopGroupSpace, double> beta{
      1, [level](const GroupLoop& g, const std::vector<AlgebraLoop>& v) {
        const AlgebraLoop mu = mc_pullback(g);
        double s = 0.0;
        for (int j = 0; j < g.size(); ++j) s += trace_product(mu[j], v[0][j]);
        return level * s * g.step() / (8.0 * M_PI * M_PI);
      }};
  const double d_beta = extrapolated_derivative(LoopGroupSpace{}, beta, gamma, {x, y}, h);
  r.rhs = Imag(2.0 * M_PI * (d_beta - tau_sigma));
  r.residual = abs(r.lhs - r.rhs);
  return r;
}

StringClassResidual string_class_residual(const LoopGerbe& geo, const LoopBundlePoint& p,
                                          const std::vector<LoopBundleTangent>& v, double h) {
  const TotalSpace& space = geo.space.target;
  StringClassResidual r;
  r.three_curvature = three_curvature(geo, p, v, h);
  const double tau_xi = transgress_loop(space, char_form_on_total(space.bundle_ptr()))(p, v);
  r.transgressed = Imag(-2.0 * M_PI * geo.model.level() * tau_xi);
  r.residual = abs(r.three_curvature - r.transgressed);
  return r;
}

DifferentialForm<DiskTotalSpace, Imag> sigma_connection_form(std::shared_ptr<const BundleData> bundle, int level) {
  const TotalSpace space(bundle);
  const auto tau_cs = transgress_disk(space, chern_simons_form(bundle, level));
  return {1, [space, tau_cs, level](const DiskBundlePoint& p, const std::vector<DiskBundleTangent>& v) {
            const double interior = tau_cs(p, v);
            const double boundary = upsilon(space, restrict_to_boundary(p), restrict_to_boundary(v[0]), level);
            return Imag(-2.0 * M_PI * (interior - boundary));
          }};
}

DifferentialForm<DiskTotalSpace, Imag> sigma_scalar_curvature_form(std::shared_ptr<const BundleData> bundle,
                                                                   int level) {
  const TotalSpace space(bundle);
  const auto tau_xi = transgress_disk(space, char_form_on_total(bundle));
  return {2, [tau_xi, level](const DiskBundlePoint& p, const std::vector<DiskBundleTangent>& v) {
            return Imag(-2.0 * M_PI * level * tau_xi(p, v));
          }};
}

SigmaSurface sigma_surface(std::shared_ptr<const BundleData> bundle, const DiskBundlePoint& p,
                           const LoopBundlePoint& boundary, const std::vector<DiskBundleTangent>& v, int level,
                           double h) {
  if (v.size() != 3) throw DegreeError("sigma_surface needs three tangents");
  const LoopBundlePoint r = restrict_to_boundary(p);
  if (r.size() != boundary.size()) throw GridMismatch("boundary loop does not match the disk grid");
  for (int j = 0; j < r.size(); ++j) {
    if (r[j].chart != boundary[j].chart || r[j].x != boundary[j].x || distance(r[j].g, boundary[j].g) != 0.0)
      throw GridMismatch("boundary loop differs from the restriction of the disk map");
  }
  const TotalSpace space(bundle);
  const DiskTotalSpace disks{space};
  const auto n_form = sigma_connection_form(bundle, level);
  const auto k_form = sigma_scalar_curvature_form(bundle, level);
  const LoopGerbe geo = loop_gerbe(bundle, LoopExtension(level));
  std::vector<LoopBundleTangent> rv;
  for (const auto& t : v) rv.push_back(restrict_to_boundary(t));

  SigmaSurface s;
  s.connection = n_form(p, {v[0]});
  s.scalar_curvature = k_form(p, {v[0], v[1]});
  const Imag dn = extrapolated_derivative(disks, n_form, p, {v[0], v[1]}, h);
  s.descent = abs(s.scalar_curvature - (dn - curving(geo, boundary, rv[0], rv[1])));
  const Imag dk = extrapolated_derivative(disks, k_form, p, v, h);
  s.stokes = abs(three_curvature(geo, boundary, rv, h) + dk);
  return s;
}

Eigen::VectorXd FourierField::base_at(double theta) const {
  Eigen::VectorXd x = base_constant;
  for (std::size_t n = 0; n < base_cos.size(); ++n)
    x += std::cos((n + 1.0) * theta) * base_cos[n] + std::sin((n + 1.0) * theta) * base_sin[n];
  return x;
}

AlgebraElement FourierField::fiber_at(double theta) const {
  Eigen::Vector3d y = fiber_constant;
  for (std::size_t n = 0; n < fiber_cos.size(); ++n)
    y += std::cos((n + 1.0) * theta) * fiber_cos[n] + std::sin((n + 1.0) * theta) * fiber_sin[n];
  return AlgebraElement::su2(y);
}

LoopBundlePoint FourierField::point(int samples) const {
  require_loop_size(samples, "FourierField::point");
  LoopBundlePoint p(static_cast<std::size_t>(samples), BundlePoint{});
  for (int j = 0; j < samples; ++j) {
    const double theta = p.theta(j);
    p[j] = {chart, base_at(theta), exp(fiber_at(theta))};
  }
  return p;
}

LoopBundleTangent FourierField::tangent(int samples) const {
  require_loop_size(samples, "FourierField::tangent");
  LoopBundleTangent v(static_cast<std::size_t>(samples), BundleTangent{});
  for (int j = 0; j < samples; ++j) {
    const double theta = v.theta(j);
    v[j] = {base_at(theta), fiber_at(theta)};
  }
  return v;
}

FourierField random_fourier_field(SampleRng& rng, const LoopConfig& config, int dimension) {
  FourierField f;
  f.chart = config.chart;
  const auto cube = [&](int n, double scale) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = scale * rng.uniform(-1.0, 1.0);
    return v;
  };
  f.base_constant = cube(dimension, config.center_radius / std::sqrt(static_cast<double>(dimension)));
  f.fiber_constant = cube(3, config.fiber_amplitude);
  for (int n = 1; n <= config.modes; ++n) {
    const double a = config.amplitude / (n * std::sqrt(static_cast<double>(dimension)));
    f.base_cos.push_back(cube(dimension, a));
    f.base_sin.push_back(cube(dimension, a));
    f.fiber_cos.push_back(cube(3, config.fiber_amplitude / n));
    f.fiber_sin.push_back(cube(3, config.fiber_amplitude / n));
  }
  return f;
}

AlgebraLoop random_algebra_loop(SampleRng& rng, int samples, int modes, double amplitude) {
  LoopConfig c;
  c.modes = modes;
  c.fiber_amplitude = amplitude;
  const FourierField f = random_fourier_field(rng, c, 1);
  AlgebraLoop x(static_cast<std::size_t>(samples), AlgebraElement::zero(GroupKind::SU2));
  for (int j = 0; j < samples; ++j) x[j] = f.fiber_at(x.theta(j));
  return x;
}

GroupLoop random_group_loop(SampleRng& rng, int samples, int modes, double amplitude) {
  return exp(random_algebra_loop(rng, samples, modes, amplitude));
}

namespace {

std::array<double, 6> monomials(const Eigen::Vector2d& s) {
  return {1.0, s(0), s(1), s(0) * s(0), s(0) * s(1), s(1) * s(1)};
}

}  // namespace

Eigen::VectorXd PolynomialDiskField::base_at(const Eigen::Vector2d& s) const {
  const auto m = monomials(s);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(base[0].size());
  for (int i = 0; i < 6; ++i) x += m[i] * base[i];
  return x;
}

AlgebraElement PolynomialDiskField::fiber_at(const Eigen::Vector2d& s) const {
  const auto m = monomials(s);
  Eigen::Vector3d y = Eigen::Vector3d::Zero();
  for (int i = 0; i < 6; ++i) y += m[i] * fiber[i];
  return AlgebraElement::su2(y);
}

DiskBundlePoint PolynomialDiskField::point(std::shared_ptr<const DiskGrid> grid) const {
  return sample_disk<BundlePoint>(grid, [&](const Eigen::Vector2d& s) {
    return BundlePoint{chart, base_at(s), exp(fiber_at(s))};
  });
}

DiskBundleTangent PolynomialDiskField::tangent(std::shared_ptr<const DiskGrid> grid) const {
  return sample_disk<BundleTangent>(grid, [&](const Eigen::Vector2d& s) {
    return BundleTangent{base_at(s), fiber_at(s)};
  });
}

PolynomialDiskField random_disk_field(SampleRng& rng, const DiskConfig& config, int dimension) {
  PolynomialDiskField f;
  f.chart = config.chart;
  const auto cube = [&](int n, double scale) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = scale * rng.uniform(-1.0, 1.0);
    return v;
  };
  const double root = std::sqrt(static_cast<double>(dimension));
  f.base[0] = cube(dimension, config.center_radius / root);
  f.fiber[0] = cube(3, config.fiber_amplitude);
  for (int i = 1; i < 6; ++i) {
    const double order = i < 3 ? 1.0 : 2.0;
    f.base[i] = cube(dimension, config.amplitude / (order * root));
    f.fiber[i] = cube(3, config.fiber_amplitude / order);
  }
  return f;
}

BaseMap equatorial_sphere() {
  BaseMap phi;
  BundleData cover;
  two_ball_cover(cover, 3);
  phi.source = cover.base;
  phi.source.name = "S3";
  phi.source.transition = [](int from, int to, const Eigen::VectorXd& z) -> Eigen::VectorXd {
    return from == to ? z : Eigen::VectorXd(z / z.squaredNorm());
  };
  phi.nerve = cover.nerve;
  // Stereographic coordinates from −1 (chart 0) and +1 (chart 1) of the unit quaternions.
  const auto sphere_point = [](int a, const Eigen::VectorXd& z) {
    const double n2 = z.squaredNorm();
    Eigen::VectorXd x(4);
    x(0) = (a == 0 ? 1.0 : -1.0) * (1.0 - n2) / (1.0 + n2);
    x.tail(3) = 2.0 * z / (1.0 + n2);
    return x;
  };
  phi.map = [sphere_point](int a, const Eigen::VectorXd& z) -> Eigen::VectorXd {
    const Eigen::VectorXd x = sphere_point(a, z);
    return a == 0 ? x : coords(quat(x).conjugate());
  };
  const auto map = phi.map;
  phi.differential = [map](int a, const Eigen::VectorXd& z, const Eigen::VectorXd& u) {
    return central4([&](const Eigen::VectorXd& y) { return map(a, y); }, z, u, 1e-4);
  };
  return phi;
}

}  // namespace gerbekit
