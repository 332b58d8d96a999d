#include "gerbekit/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "gerbekit/errors.hpp"
#include "gerbekit/gerbe.hpp"
#include "gerbekit/loopstring.hpp"

namespace gerbekit {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw InvalidArgument("key '" + key + "': expected a number, got '" + value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  const double x = parse_double(key, value);
  if (x != std::floor(x)) throw InvalidArgument("key '" + key + "': expected an integer, got '" + value + "'");
  return static_cast<int>(x);
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

LinearShift shift_of(const std::vector<double>& c) {
  LinearShift s;
  s.coefficients = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
  return s;
}

struct FiniteCase {
  std::shared_ptr<const BundleData> bundle;
  FiniteExtension model;
  BundleGerbe geo;
  LinearShift extra;
};

FiniteCase finite_case(const CaseDeclaration& c, const std::string& model_name, std::string_view stream) {
  SampleRng rng(c.seed, stream, 0);
  const bool heis = model_name == "heisenberg";
  const GroupKind kind = heis ? GroupKind::R2 : GroupKind::SU2;
  const int dim = coordinate_count(kind);
  const LinearShift shift = model_name == c.model && !c.lambda.empty() ? shift_of(c.lambda) : LinearShift{};
  const FiniteExtension model =
      heis ? FiniteExtension::heisenberg(c.kappa, shift) : FiniteExtension::trivial(GroupKind::SU2, shift);
  auto bundle = gauge_bundle(GaugeFamily::random(kind, rng, c.eta_scale, c.phi_scale));
  const auto splitting = trivialized_splitting(bundle, model, rng.vector(dim, 0.5));
  LinearShift extra;
  extra.coefficients = rng.vector(dim, 0.5);
  return {bundle, model, bundle_gerbe(bundle, model, splitting), extra};
}

struct LoopSample {
  LoopBundlePoint p;
  std::vector<LoopBundleTangent> v;
};

LoopSample loop_sample(const CaseDeclaration& c, std::string_view stream, std::uint64_t index, int tangents, int n) {
  SampleRng rng(c.seed, stream, index);
  const LoopConfig config;
  LoopSample s{random_fourier_field(rng, config).point(n), {}};
  for (int k = 0; k < tangents; ++k) s.v.push_back(random_fourier_field(rng, config).tangent(n));
  return s;
}

int loop_level(const CaseDeclaration& c) { return std::max(c.level, 1); }

CheckRow row(std::string name, std::string anchor, double residual, double tolerance) {
  return {std::move(name), std::move(anchor), residual, tolerance, false};
}

template <class G, class A>
std::vector<CocycleSample<G, A>> finite_cocycle_samples(GroupKind kind, SampleRng& rng, int count) {
  std::vector<CocycleSample<G, A>> out;
  for (int i = 0; i < count; ++i)
    out.push_back({rng.group(kind), rng.group(kind), rng.algebra(kind, 1.0), rng.algebra(kind, 1.0),
                   rng.algebra(kind, 1.0)});
  return out;
}

CocycleResiduals finite_cocycles(const CaseDeclaration& c, double h) {
  const FiniteCase f = finite_case(c, c.model, "cocycle");
  SampleRng rng(c.seed, "cocycle-samples", 0);
  const auto samples = finite_cocycle_samples<GroupElement, AlgebraElement>(f.model.kind(), rng, c.samples);
  return cocycle_identities_residual(f.model, f.model.shifted(f.extra), f.extra, samples, h);
}

CheckOutput check_cocycle_algebra(const CaseDeclaration& c) {
  const CocycleResiduals r = finite_cocycles(c, 1e-4);
  CheckOutput out;
  out.rows.push_back(row("cocycle_algebra/z_adjoint", "Z(γη, X) = Z(γ, Ad_η X) + Z(η, X)", r.z_adjoint, 1e-10));
  out.rows.push_back(row("cocycle_algebra/z_shift", "Z_σ'(γ, X) − Z_σ(γ, X) = (σ' − σ)(X − Ad_γ X)", r.z_shift, 1e-10));
  out.rows.push_back(row("cocycle_algebra/jacobi", "ω([X,Y],Z) + ω([Y,Z],X) + ω([Z,X],Y) = 0", r.jacobi, 1e-10));
  if (r.group_two_cocycle)
    out.rows.push_back(row("cocycle_algebra/group_two_cocycle", "c(γ₁,γ₂)c(γ₁γ₂,γ₃) = c(γ₁,γ₂γ₃)c(γ₂,γ₃)",
                           *r.group_two_cocycle, 1e-10));
  return out;
}

CheckOutput check_derivative_link(const CaseDeclaration& c) {
  CheckOutput out;
  const std::string anchor = "d/dt|₀ Z_σ(exp tX, Y) = ω_σ(X, Y)";
  out.rows.push_back(row("derivative_link/finite", anchor, finite_cocycles(c, 1e-4).derivative_link, 1e-6));
  if (c.level > 0) {
    const int n = c.loop_samples;
    SampleRng rng(c.seed, "derivative-link-loop", 0);
    std::vector<CocycleSample<GroupLoop, AlgebraLoop>> samples;
    for (int i = 0; i < std::min(c.samples, 10); ++i) {
      samples.push_back({random_group_loop(rng, n, 2, 0.4), random_group_loop(rng, n, 2, 0.4),
                         random_algebra_loop(rng, n, 2, 0.5), random_algebra_loop(rng, n, 2, 0.5),
                         random_algebra_loop(rng, n, 2, 0.5)});
    }
    const LoopExtension model(c.level);
    const auto r = cocycle_identities_residual(model, model, LoopShift{}, samples, 1e-4);
    out.rows.push_back(row("derivative_link/loop", anchor, r.derivative_link, 1e-5));
  }
  return out;
}

CheckOutput check_deligne(const CaseDeclaration& c) {
  CheckOutput out;
  const std::string anchor = "(z, u, K) is a Čech–Deligne 2-cocycle";
  const int per_simplex = std::max(1, c.samples / 20);
  std::vector<std::string> models = {"trivial"};
  if (c.model != "trivial") models.push_back(c.model);
  for (const auto& m : models) {
    const FiniteCase f = finite_case(c, m, "deligne-" + m);
    const auto cochain = build_obstruction(f.bundle, f.model, canonical_lifts(f.bundle, f.model), f.geo.splitting, c.h);
    SampleRng rng(c.seed, "deligne-samples-" + m, 0);
    out.rows.push_back(
        row("deligne/" + m, anchor, cech_deligne_residual(cochain, *f.bundle, rng, per_simplex, c.h).max(), 1e-6));
  }
  SampleRng rng(c.seed, "deligne-coboundary", 0);
  const FlatObstructionCase flat = flat_obstruction_case(rng, c.phi_scale);
  const DeligneCochain dhk = coboundary(flat.hk, c.h);
  out.rows.push_back(row("deligne/coboundary", "D(h, k) is a cocycle",
                         cech_deligne_residual(dhk, *flat.bundle, rng, per_simplex, c.h).max(), 1e-6));
  return out;
}

CheckOutput check_delta_curving(const CaseDeclaration& c) {
  CheckOutput out;
  const std::string anchor = "F_∇ = π₁*(½ω(θ,θ) + κ) − π₂*(½ω(θ,θ) + κ)";
  const FiniteCase f = finite_case(c, c.model, "delta-curving");
  SampleRng rng(c.seed, "delta-curving-samples", 0);
  double worst = 0.0;
  for (int i = 0; i < c.samples; ++i) {
    const int chart = rng.integer(0, f.bundle->nerve.chart_count - 1);
    const BundlePair p = sample_pair(*f.bundle, rng, chart);
    const auto v = sample_pair_tangent(*f.bundle, rng);
    const auto w = sample_pair_tangent(*f.bundle, rng);
    worst = std::max(worst, delta_curving_residual(f.geo, p, v, w, c.h).max());
  }
  out.rows.push_back(row("delta_curving/finite", anchor, worst, 1e-8));
  if (c.level > 0) {
    const LoopGerbe geo = loop_gerbe(instanton_bundle(), LoopExtension(c.level));
    const int n = c.loop_samples;
    double loop_worst = 0.0;
    for (int i = 0; i < c.samples; ++i) {
      const LoopSample s = loop_sample(c, "delta-curving-loop", static_cast<std::uint64_t>(i), 4, n);
      SampleRng g(c.seed, "delta-curving-gamma", static_cast<std::uint64_t>(i));
      const PairSpace<LoopGerbe>::Point p{{s.p, geo.act(s.p, random_group_loop(g, n, 3, 0.7))}};
      LoopBundleTangent v2 = s.v[0], w2 = s.v[1];
      for (int j = 0; j < n; ++j) {
        v2[j].fiber = s.v[2][j].fiber;
        w2[j].fiber = s.v[3][j].fiber;
      }
      loop_worst = std::max(loop_worst, delta_curving_residual(geo, p, {{s.v[0], v2}}, {{s.v[1], w2}}, c.h).max());
    }
    out.rows.push_back(row("delta_curving/loop", anchor, loop_worst, 1e-5));
  }
  return out;
}

CheckOutput check_sigma_shift(const CaseDeclaration& c) {
  CheckOutput out;
  const FiniteCase f = finite_case(c, c.model, "sigma-shift");
  SampleRng rng(c.seed, "sigma-shift-samples", 0);
  SigmaShiftResidual worst;
  for (int i = 0; i < c.samples; ++i) {
    const int chart = rng.integer(0, f.bundle->nerve.chart_count - 1);
    const auto r = sigma_shift_residual(f.geo, f.extra, sample_pair(*f.bundle, rng, chart),
                                        sample_pair_tangent(*f.bundle, rng), sample_pair_tangent(*f.bundle, rng), c.h);
    worst.connection = std::max(worst.connection, r.connection);
    worst.curving = std::max(worst.curving, r.curving);
  }
  out.rows.push_back(row("sigma_shift/finite_connection", "∇' = ∇ + (π₁* − π₂*)λ(θ)", worst.connection, 1e-8));
  out.rows.push_back(row("sigma_shift/finite_curving", "f' = f − λ(dθ)", worst.curving, 1e-8));
  if (c.level > 0) {
    const LoopGerbe geo = loop_gerbe(instanton_bundle(), LoopExtension(c.level));
    SampleRng lr(c.seed, "sigma-shift-loop-lambda", 0);
    LoopShift lambda;
    lambda.cos_coefficients = {lr.vector(3, 0.3), lr.vector(3, 0.3)};
    lambda.sin_coefficients = {lr.vector(3, 0.3), lr.vector(3, 0.3)};
    const int n = c.loop_samples;
    double loop_worst = 0.0;
    for (int i = 0; i < c.configurations; ++i) {
      const LoopSample s = loop_sample(c, "sigma-shift-loop", static_cast<std::uint64_t>(i), 2, n);
      SampleRng g(c.seed, "sigma-shift-gamma", static_cast<std::uint64_t>(i));
      const PairSpace<LoopGerbe>::Point p{{s.p, geo.act(s.p, random_group_loop(g, n, 3, 0.7))}};
      const auto r = sigma_shift_residual(geo, lambda, p, {{s.v[0], s.v[0]}}, {{s.v[1], s.v[1]}}, c.h);
      loop_worst = std::max(loop_worst, r.curving);
    }
    out.rows.push_back(row("sigma_shift/loop_curving", "f' = f − λ(dθ)", loop_worst, 1e-5));
  }
  return out;
}

CheckOutput check_gerbe_connection(const CaseDeclaration& c) {
  const FiniteCase f = finite_case(c, c.model, "gerbe-connection");
  SampleRng rng(c.seed, "gerbe-connection-samples", 0);
  double worst = 0.0;
  for (int i = 0; i < c.samples; ++i) {
    const int chart = rng.integer(0, f.bundle->nerve.chart_count - 1);
    const BundleTriple p = sample_triple(*f.bundle, rng, chart);
    const BundleTripleTangent v = sample_triple_tangent(*f.bundle, rng);
    const auto u12 = std::polar(1.0, rng.uniform(-3.0, 3.0));
    const auto u23 = std::polar(1.0, rng.uniform(-3.0, 3.0));
    worst = std::max(worst, gerbe_connection_residual(f.geo, p, v, u12, u23, Imag(rng.normal()), Imag(rng.normal()),
                                                      1e-4)
                                .max());
  }
  CheckOutput out;
  out.rows.push_back(row("gerbe_connection", "m*(ζ*ν) = π₁₂*ζ*ν + π₂₃*ζ*ν + Z(π₂₃*ζ⁻¹, π₁₂*ζ*μ)", worst, 1e-6));
  return out;
}

CheckOutput check_instanton_number(const CaseDeclaration&) {
  const InstantonNumber n = instanton_number(*instanton_bundle());
  CheckOutput out;
  out.rows.push_back(row("instanton_number", "|∫_{S⁴} ξ| = 1, ξ = (1/8π²)Tr(F ∧ F)", std::abs(std::abs(n.value) - 1.0),
                         1e-3));
  std::ostringstream value;
  value << std::setprecision(9) << n.value;
  out.conventions.push_back({"instanton_orientation", n.positively_oriented ? "standard" : "reversed"});
  out.conventions.push_back({"instanton_number", value.str()});
  return out;
}

CheckOutput check_chern_simons(const CaseDeclaration& c) {
  const auto b = instanton_bundle();
  const TotalSpace space(b);
  const int level = loop_level(c);
  const auto cs = chern_simons_form(b, level);
  const auto xi = char_form_on_total(b);
  SampleRng rng(c.seed, "chern-simons", 0);
  double worst = 0.0;
  for (int i = 0; i < std::max(1, c.samples / 10); ++i) {
    const BundlePoint p = sample_point(*b, rng, i % 2);
    std::vector<BundleTangent> v;
    for (int k = 0; k < 4; ++k) v.push_back(sample_tangent(*b, rng));
    worst = std::max(worst, std::abs(extrapolated_derivative(space, cs, p, v, c.h) - level * xi(p, v)));
  }
  CheckOutput out;
  out.rows.push_back(row("chern_simons", "dCS = k·π*ξ", worst, 1e-4));
  return out;
}

double cs_residual_at(const CaseDeclaration& c, std::uint64_t index, int n) {
  const LoopSample s = loop_sample(c, "cs-transgression", index, 2, n);
  return cs_transgression_residual(instanton_bundle(), s.p, s.v[0], s.v[1], loop_level(c), c.h).residual;
}

CheckOutput check_cs_transgression(const CaseDeclaration& c) {
  double worst = 0.0;
  for (int i = 0; i < c.configurations; ++i)
    worst = std::max(worst, cs_residual_at(c, static_cast<std::uint64_t>(i), c.loop_samples));
  SampleRng rng(c.seed, "volume-relation", 0);
  double volume = 0.0;
  for (int i = 0; i < std::min(c.configurations, 5); ++i) {
    const GroupLoop g = random_group_loop(rng, c.loop_samples, 3, 0.7);
    const AlgebraLoop x = random_algebra_loop(rng, c.loop_samples, 3, 0.5);
    const AlgebraLoop y = random_algebra_loop(rng, c.loop_samples, 3, 0.5);
    volume = std::max(volume, volume_relation(g, x, y, loop_level(c), c.h).residual);
  }
  CheckOutput out;
  out.rows.push_back(row("cs_transgression", "f = 2πi(τ_L CS + dΥ)", worst, 1e-4));
  out.rows.push_back(row("cs_transgression/volume_relation", "−½ω(μ, μ) = 2πi(dβ − τ_L σ)", volume, 1e-8));
  out.conventions.push_back({"loop_curving_factor", "1"});
  out.conventions.push_back({"volume_relation_sigma_sign", "-1"});
  return out;
}

CheckOutput check_loop_curving(const CaseDeclaration& c) {
  const auto b = instanton_bundle();
  const LoopGerbe geo = loop_gerbe(b, LoopExtension(loop_level(c)));
  double worst = 0.0;
  for (int i = 0; i < c.configurations; ++i) {
    const LoopSample s = loop_sample(c, "loop-curving", static_cast<std::uint64_t>(i), 2, c.loop_samples);
    worst = std::max(worst, abs(loop_curving(geo.space.target, s.p, s.v[0], s.v[1], loop_level(c)) -
                                curving(geo, s.p, s.v[0], s.v[1])));
  }
  CheckOutput out;
  out.rows.push_back(row("loop_curving", "f(p; V, W) = −(ki/2π)∫{Tr(A(V) dA(W)) − Tr(p*A · F(V, W))}", worst, 1e-5));
  return out;
}

CheckOutput check_loop_splitting(const CaseDeclaration& c) {
  const LoopGerbe geo = loop_gerbe(instanton_bundle(), LoopExtension(loop_level(c)));
  std::vector<std::tuple<LoopBundlePoint, GroupLoop, AlgebraLoop>> samples;
  SampleRng rng(c.seed, "loop-splitting", 0);
  for (int i = 0; i < c.configurations; ++i) {
    const LoopSample s = loop_sample(c, "loop-splitting-loops", static_cast<std::uint64_t>(i), 0, c.loop_samples);
    samples.emplace_back(s.p, random_group_loop(rng, c.loop_samples, 3, 0.7),
                         random_algebra_loop(rng, c.loop_samples, 3, 1.0));
  }
  CheckOutput out;
  out.rows.push_back(row("loop_splitting", "ℓ(p, X) = −(ki/2π)∫Tr(p*A · X) is equivariant",
                         reduced_splitting_equivariance_residual(geo.model, geo.splitting, geo.act, samples), 1e-6));
  return out;
}

CheckOutput check_string_class(const CaseDeclaration& c) {
  const LoopGerbe geo = loop_gerbe(instanton_bundle(), LoopExtension(loop_level(c)));
  double worst = 0.0;
  for (int i = 0; i < c.configurations; ++i) {
    const LoopSample s = loop_sample(c, "string-class", static_cast<std::uint64_t>(i), 3, c.loop_samples);
    worst = std::max(worst, string_class_residual(geo, s.p, s.v, c.h).residual);
  }
  CheckOutput out;
  out.rows.push_back(row("string_class", "Ξ = −2πi τ_L ξ", worst, 1e-4));
  out.conventions.push_back({"string_class_level_factor", "k"});
  return out;
}

SigmaSurface sigma_surface_at(const CaseDeclaration& c, int rings) {
  const auto grid = std::make_shared<const DiskGrid>(rings, 4 * rings);
  SampleRng rng(c.seed, "sigma-surface", 0);
  const DiskConfig config;
  const DiskBundlePoint p = random_disk_field(rng, config).point(grid);
  std::vector<DiskBundleTangent> v;
  for (int k = 0; k < 3; ++k) v.push_back(random_disk_field(rng, config).tangent(grid));
  return sigma_surface(instanton_bundle(), p, restrict_to_boundary(p), v, loop_level(c), c.h);
}

CheckOutput check_sigma_surface(const CaseDeclaration& c) {
  const SigmaSurface s = sigma_surface_at(c, c.grid);
  CheckOutput out;
  out.rows.push_back(row("sigma_surface/descent", "π_Σ*(−2πi τ_Σ ξ) = dÑ − r*f", s.descent, 1e-3));
  out.rows.push_back(row("sigma_surface/stokes", "r*Ξ = −dK", s.stokes, 1e-3));
  return out;
}

CheckOutput check_higgs(const CaseDeclaration& c) {
  const TotalSpace space(instanton_bundle());
  double worst = 0.0;
  for (int i = 0; i < c.samples; ++i) {
    const LoopSample s = loop_sample(c, "higgs", static_cast<std::uint64_t>(i), 0, c.loop_samples);
    SampleRng g(c.seed, "higgs-gamma", static_cast<std::uint64_t>(i));
    worst = std::max(worst, higgs_transformation_residual(space, s.p, random_group_loop(g, c.loop_samples, 3, 0.7)));
  }
  CheckOutput out;
  out.rows.push_back(row("higgs", "Φ_{pγ} = Ad_{γ⁻¹}Φ_p + γ⁻¹∂γ/∂θ", worst, 1e-6));
  return out;
}

CheckOutput check_trivialize(const CaseDeclaration& c) {
  SampleRng rng(c.seed, "trivialize", 0);
  const FlatObstructionCase f = flat_obstruction_case(rng, c.phi_scale);
  const auto cochain = build_obstruction(f.bundle, f.model, f.lifts, f.splitting, c.h);
  SampleRng check(c.seed, "trivialize-samples", 0);
  const int per_chart = std::max(1, c.samples / 20);
  const auto r = trivialize(f.bundle, f.model, f.splitting, f.lifts, cochain, f.hk, check, per_chart, c.h, 1e-6);
  CheckOutput out;
  out.rows.push_back(row("trivialize/scalar_curvature", "K_θ̂ = K_α − dk_α = 0", r.scalar_curvature, 1e-6));
  out.rows.push_back(row("trivialize/three_curvature", "Ξ = −dK_θ̂", r.three_curvature, 1e-4));
  return out;
}

CheckOutput check_pullback(const CaseDeclaration& c) {
  SampleRng rng(c.seed, "pullback", 0);
  LinearShift lambda;
  lambda.coefficients = rng.vector(3, 0.5);
  const FiniteExtension model = FiniteExtension::trivial(GroupKind::SU2, lambda);
  const auto r = pullback_naturality_residual(instanton_bundle(), model, shift_splitting(model), trivial_lifts(),
                                              equatorial_sphere(), rng, std::max(1, c.samples / 20), c.h);
  CheckOutput out;
  out.rows.push_back(row("pullback", "φ*(f, κ, z, u, K) of S³ ↪ S⁴", r.max(), 1e-8));
  return out;
}

// d(dα) for α = Tr(A · X₀) on the instanton total space, where the frozen frames do not commute.
double d_squared_at(const CaseDeclaration& c, double h) {
  const auto bundle = instanton_bundle();
  const TotalSpace space(bundle);
  SampleRng rng(c.seed, "d-squared", 0);
  const AlgebraElement x0 = rng.algebra(GroupKind::SU2, 1.0);
  const DifferentialForm<TotalSpace, double> alpha{
      1, [bundle, x0](const BundlePoint& p, const std::vector<BundleTangent>& v) {
        return trace_product(global_connection(*bundle, p, v[0]), x0);
      }};
  const auto d_alpha = exterior_derivative(space, alpha, h);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const BundlePoint p = sample_point(*bundle, rng, i % 2);
    const std::vector<BundleTangent> v = {sample_tangent(*bundle, rng), sample_tangent(*bundle, rng),
                                          sample_tangent(*bundle, rng)};
    worst = std::max(worst, std::abs(exterior_derivative(space, d_alpha, p, v, h)));
  }
  return worst;
}

CheckOutput check_d_squared(const CaseDeclaration& c) {
  CheckOutput out;
  out.rows.push_back(row("d_squared", "d² = 0", d_squared_at(c, c.h), 1e-3));
  return out;
}

std::string format_number(double x) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(6) << x;
  return s.str();
}

}  // namespace

CaseDeclaration parse_case(std::istream& in, const std::string& source) {
  CaseDeclaration c;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(number);
    if (eq == std::string::npos) throw InvalidArgument(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "id") {
      c.id = value;
    } else if (key == "model") {
      c.model = value;
    } else if (key == "kappa") {
      c.kappa = parse_double(key, value);
    } else if (key == "lambda") {
      c.lambda.clear();
      for (const auto& s : split_list(value)) c.lambda.push_back(parse_double(key, s));
    } else if (key == "bundle") {
      c.bundle = value;
    } else if (key == "eta_scale") {
      c.eta_scale = parse_double(key, value);
    } else if (key == "phi_scale") {
      c.phi_scale = parse_double(key, value);
    } else if (key == "level") {
      c.level = parse_int(key, value);
    } else if (key == "samples") {
      c.samples = parse_int(key, value);
    } else if (key == "configurations") {
      c.configurations = parse_int(key, value);
    } else if (key == "loop_samples") {
      c.loop_samples = parse_int(key, value);
    } else if (key == "grid") {
      c.grid = parse_int(key, value);
    } else if (key == "h") {
      c.h = parse_double(key, value);
    } else if (key == "seed") {
      try {
        c.seed = std::stoull(value);
      } catch (const std::exception&) {
        throw InvalidArgument(where + ": key 'seed': expected an unsigned integer, got '" + value + "'");
      }
    } else if (key == "checks") {
      c.checks = split_list(value);
    } else if (key == "order_floor") {
      c.order_floor = parse_double(key, value);
    } else if (key.rfind("tolerance.", 0) == 0) {
      c.tolerances[key.substr(10)] = parse_double(key, value);
    } else {
      throw InvalidArgument(where + ": unknown key '" + key + "'");
    }
  }
  validate(c);
  return c;
}

CaseDeclaration load_case(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open case file '" + path + "'");
  return parse_case(in, path);
}

void validate(const CaseDeclaration& c) {
  if (c.model != "heisenberg" && c.model != "trivial")
    throw InvalidArgument("unknown model '" + c.model + "' (expected heisenberg or trivial)");
  if (c.bundle != "gauge") throw InvalidArgument("unknown bundle family '" + c.bundle + "' (expected gauge)");
  const std::size_t dim = c.model == "heisenberg" ? 2 : 3;
  if (!c.lambda.empty() && c.lambda.size() != dim)
    throw InvalidArgument("lambda has " + std::to_string(c.lambda.size()) + " coefficients, model '" + c.model +
                          "' needs " + std::to_string(dim));
  if (c.level < 0) throw InvalidArgument("level must be non-negative");
  if (c.samples < 1 || c.configurations < 1) throw InvalidArgument("samples and configurations must be positive");
  if (!power_of_two(c.loop_samples) || c.loop_samples < kMinLoopSamples)
    throw InvalidArgument("loop_samples must be a power of two >= " + std::to_string(kMinLoopSamples));
  if (c.grid < 2) throw InvalidArgument("grid must be at least 2");
  if (!(c.h > 0.0)) throw InvalidArgument("h must be positive");
  if (!(c.kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  for (const auto& [name, tol] : c.tolerances)
    if (!(tol > 0.0)) throw InvalidArgument("tolerance." + name + " must be positive");
  for (const auto& name : c.checks) {
    const CheckSpec& spec = find_check(name);
    if (spec.needs_loop && c.level == 0)
      throw InvalidArgument("check '" + name + "' needs the loop model; set level >= 1");
  }
}

const std::vector<CheckSpec>& check_registry() {
  static const std::vector<CheckSpec> registry = {
      {"cocycle_algebra", false, check_cocycle_algebra},
      {"derivative_link", false, check_derivative_link},
      {"deligne", false, check_deligne},
      {"delta_curving", false, check_delta_curving},
      {"sigma_shift", false, check_sigma_shift},
      {"gerbe_connection", false, check_gerbe_connection},
      {"instanton_number", false, check_instanton_number},
      {"chern_simons", false, check_chern_simons},
      {"cs_transgression", true, check_cs_transgression},
      {"loop_curving", true, check_loop_curving},
      {"loop_splitting", true, check_loop_splitting},
      {"string_class", true, check_string_class},
      {"sigma_surface", true, check_sigma_surface},
      {"higgs", true, check_higgs},
      {"trivialize", false, check_trivialize},
      {"pullback", false, check_pullback},
      {"d_squared", false, check_d_squared},
  };
  return registry;
}

const CheckSpec& find_check(const std::string& name) {
  for (const auto& s : check_registry())
    if (s.name == name) return s;
  throw InvalidArgument("unknown check '" + name + "'");
}

std::optional<double> fitted_order(const std::string& parameter, const std::vector<double>& levels,
                                   const std::vector<double>& residuals) {
  if (levels.size() != residuals.size() || levels.size() < 2) return std::nullopt;
  const double sign = parameter == "h" ? 1.0 : -1.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(residuals[i] > 0.0)) return std::nullopt;
    const double x = std::log(levels[i]);
    const double y = std::log(residuals[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return sign * slope;
}

SweepTable convergence_sweep(const CaseDeclaration& c, const std::string& parameter, const std::vector<double>& levels) {
  if (levels.size() < 3) throw InvalidArgument("a convergence sweep needs at least 3 levels");
  SweepTable t;
  t.parameter = parameter;
  t.levels = levels;
  t.floor = c.order_floor;
  for (double level : levels) {
    if (parameter == "N") {
      const int n = static_cast<int>(level);
      if (level != n || !power_of_two(n) || n < 64) throw InvalidArgument("N levels must be powers of two >= 64");
      t.residuals.push_back(cs_residual_at(c, 0, n));
    } else if (parameter == "h") {
      if (!(level > 0.0)) throw InvalidArgument("h levels must be positive");
      t.residuals.push_back(d_squared_at(c, level));
    } else if (parameter == "grid") {
      const int rings = static_cast<int>(level);
      if (level != rings || rings < 2) throw InvalidArgument("grid levels must be integers >= 2");
      t.residuals.push_back(sigma_surface_at(c, rings).descent);
    } else {
      throw InvalidArgument("unknown sweep parameter '" + parameter + "' (expected N, h or grid)");
    }
  }
  // Order refinement: increasing N or grid, decreasing h.
  std::vector<std::size_t> order(levels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return parameter == "h" ? levels[a] > levels[b] : levels[a] < levels[b];
  });
  const bool roundoff =
      std::all_of(t.residuals.begin(), t.residuals.end(), [](double r) { return r < 1e-13; });
  bool monotone = true;
  for (std::size_t i = 1; i < order.size(); ++i)
    if (!(t.residuals[order[i]] < t.residuals[order[i - 1]])) monotone = false;
  if (roundoff) {
    t.note = "residuals at round-off; order fit skipped";
  } else if (!monotone) {
    t.note = "warning: non-monotone residuals; order not fitted";
  } else {
    t.order = fitted_order(parameter, levels, t.residuals);
    t.pass = t.order && *t.order >= t.floor;
  }
  return t;
}

bool VerificationReport::passed() const {
  const bool rows_ok = std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
  return rows_ok && (!sweep || sweep->pass);
}

VerificationReport run_case(const CaseDeclaration& c, const RunOptions& options) {
  validate(c);
  if (!(options.tolerance_scale > 0.0)) throw InvalidArgument("tolerance scale must be positive");
  const auto start = std::chrono::steady_clock::now();
  VerificationReport report;
  report.case_id = c.id;
  report.seed = c.seed;
  std::vector<std::string> names = c.checks;
  if (names.empty()) {
    for (const auto& s : check_registry())
      if (!s.needs_loop || c.level > 0) names.push_back(s.name);
  }
  std::vector<std::string> selected;
  for (const auto& n : names)
    if (options.filter.empty() || n.find(options.filter) != std::string::npos) selected.push_back(n);
  if (selected.empty()) throw InvalidArgument("no declared check matches '" + options.filter + "'");
  for (const auto& name : selected) {
    const CheckSpec& spec = find_check(name);
    if (spec.needs_loop && c.level == 0)
      throw InvalidArgument("check '" + name + "' needs the loop model; set level >= 1");
    CheckOutput out = spec.run(c);
    for (auto& r : out.rows) {
      const auto it = c.tolerances.find(r.name);
      if (it != c.tolerances.end()) r.tolerance = it->second;
      r.tolerance *= options.tolerance_scale;
      r.pass = std::isfinite(r.residual) && r.residual < r.tolerance;
      report.rows.push_back(r);
    }
    for (auto& cv : out.conventions) report.conventions.push_back(cv);
  }
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void write_report(std::ostream& out, const VerificationReport& r) {
  out << "case = " << r.case_id << "\n";
  out << "seed = " << r.seed << "\n";
  for (const auto& row : r.rows) {
    out << "\n[check " << row.name << "]\n";
    out << "anchor = " << row.anchor << "\n";
    out << "residual = " << format_number(row.residual) << "\n";
    out << "tolerance = " << format_number(row.tolerance) << "\n";
    out << "status = " << (row.pass ? "pass" : "fail") << "\n";
  }
  if (r.sweep) {
    const SweepTable& t = *r.sweep;
    out << "\n[sweep " << t.parameter << "]\n";
    for (std::size_t i = 0; i < t.levels.size(); ++i)
      out << "level = " << format_number(t.levels[i]) << " residual = " << format_number(t.residuals[i]) << "\n";
    out << "floor = " << format_number(t.floor) << "\n";
    out << "order = " << (t.order ? format_number(*t.order) : std::string("none")) << "\n";
    if (!t.note.empty()) out << "note = " << t.note << "\n";
    out << "status = " << (t.pass ? "pass" : "fail") << "\n";
  }
  if (!r.conventions.empty()) {
    out << "\n[conventions]\n";
    for (const auto& cv : r.conventions) out << cv.name << " = " << cv.value << "\n";
  }
  std::size_t passed = 0;
  for (const auto& row : r.rows) passed += row.pass ? 1 : 0;
  out << "\n[summary]\n";
  out << "checks_passed = " << passed << "/" << r.rows.size() << "\n";
  out << "status = " << (r.passed() ? "pass" : "fail") << "\n";
  out << "wall_time_s = " << std::fixed << std::setprecision(3) << r.wall_time << "\n";
  out.unsetf(std::ios::floatfield);
}

}  // namespace gerbekit
