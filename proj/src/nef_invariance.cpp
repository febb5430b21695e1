#include "homocone/nef_invariance.hpp"

#include <algorithm>
#include <cmath>

#include "homocone/errors.hpp"
#include "homocone/rng.hpp"

namespace homocone {

NEFDescriptor NEFDescriptor::make(std::vector<double> s, StructuredMatrix theta0, double a0,
                                  bool reflected, const Tolerances& tol) {
  const auto& c = theta0.structure();
  auto param = RieszParameter::classify(*c, std::move(s), tol);
  if (!param.in_gindikin_set()) throw NotInGindikinSet("s is outside the Gindikin-Wallach set");
  for (double v : param.s) {
    if (!(v > tol.gindikin_equality)) {
      throw NotInGindikinSet("every s_k must be positive for the family to exist");
    }
  }
  return NEFDescriptor{c, std::move(param), std::move(theta0), a0, reflected};
}

namespace {

/// Argument of Delta*_{-s*} for L_mu(theta): theta0 - theta, or its negative.
StructuredMatrix dual_argument(const NEFDescriptor& d, const StructuredMatrix& theta) {
  return d.reflected ? theta - d.theta0 : d.theta0 - theta;
}

double log_laplace(const NEFDescriptor& d, const StructuredMatrix& theta, const Tolerances& tol) {
  try {
    return d.a0 + log_riesz_laplace(d.s, dual_argument(d, theta), tol);
  } catch (const NotInDualCone& e) {
    throw OutOfDomain(std::string("theta is outside Theta(mu): ") + e.what());
  }
}

double log_laplace_mu0(const NEFDescriptor& d, const StructuredMatrix& theta, const Tolerances& tol) {
  try {
    return d.a0 + log_riesz_laplace(d.s, d.reflected ? theta : -theta, tol);
  } catch (const NotInDualCone& e) {
    throw OutOfDomain(std::string("theta is outside Theta(mu0): ") + e.what());
  }
}

}  // namespace

double laplace(const NEFDescriptor& d, const StructuredMatrix& theta, const Tolerances& tol) {
  return std::exp(log_laplace(d, theta, tol));
}

double cumulant(const NEFDescriptor& d, const StructuredMatrix& theta, const Tolerances& tol) {
  return log_laplace(d, theta, tol);
}

bool in_domain(const NEFDescriptor& d, const StructuredMatrix& theta, const Tolerances& tol) {
  return in_dual_cone(dual_argument(d, theta), tol);
}

double laplace_mu0(const NEFDescriptor& d, const StructuredMatrix& theta, const Tolerances& tol) {
  return std::exp(log_laplace_mu0(d, theta, tol));
}

StructuredMatrix mean_with_step(const NEFDescriptor& d, const StructuredMatrix& theta, double h,
                                const Tolerances& tol) {
  const auto& c = *theta.structure();
  Vector g(c.dim());
  for (int j = 0; j < c.dim(); ++j) {
    Vector e = Vector::Zero(c.dim());
    e[j] = h;
    const StructuredMatrix step(theta.structure(), e);
    const double fp = cumulant(d, theta + step, tol);
    const double fm = cumulant(d, theta - step, tol);
    // d k / d coord_j = <m, e_j> = weight(j) m_j.
    g[j] = (fp - fm) / (2.0 * h) / c.weight(j);
  }
  return StructuredMatrix(theta.structure(), std::move(g));
}

StructuredMatrix mean(const NEFDescriptor& d, const StructuredMatrix& theta, const Tolerances& tol) {
  return mean_with_step(d, theta, tol.fd_step * (1.0 + norm(theta)), tol);
}

InvarianceCheck invariance_check(const NEFDescriptor& d, const TriangularElement& t,
                                 const StructuredMatrix& theta, const Tolerances& tol) {
  const auto moved = rho_star_apply(t, theta, tol);
  std::vector<double> minus_s = d.s.s;
  for (auto& v : minus_s) v = -v;
  InvarianceCheck out;
  out.lhs = laplace_mu0(d, moved, tol);
  out.rhs = character(minus_s, t) * laplace_mu0(d, theta, tol);
  out.c_g = character(d.s.s, t);
  return out;
}

double measured_invariance_constant(const NEFDescriptor& d, const TriangularElement& t,
                                    const StructuredMatrix& theta, const Tolerances& tol) {
  const auto moved = rho_star_apply(t, theta, tol);
  return std::exp(log_laplace_mu0(d, theta, tol) - log_laplace_mu0(d, moved, tol));
}

namespace {

StructuredMatrix cocycle_a(const NEFDescriptor& d, const LinearMap& g) {
  // a(g) = theta0 - (g*)^{-1} theta0.
  return d.theta0 - g.adjoint().inverse().apply(d.theta0);
}

}  // namespace

CocycleRecord cocycle_from_descriptor(const NEFDescriptor& d, const TriangularElement& t,
                                      const Tolerances& tol) {
  auto g = rho_map(t, tol);
  auto a = cocycle_a(d, g);
  const double log_c = log_character(d.s.s, t);
  return {std::move(g), std::move(a), -log_c, std::exp(log_c)};
}

CocycleRecord cocycle_from_descriptor(const NEFDescriptor& d, const LinearMap& g,
                                      const Tolerances& tol) {
  require_same_structure(*d.structure, *g.structure());
  auto a = cocycle_a(d, g);
  // L_{g_* mu}(theta) = L_mu(g* theta) = e^b L_mu(theta + a). The probe is
  // chosen so that theta + a sits at the base point theta0 -+ I.
  const auto gs = g.adjoint();
  const auto unit = StructuredMatrix::identity(d.structure);
  const auto probe = gs.inverse().apply(d.theta0) + d.side() * unit;
  double b = 0.0;
  try {
    b = cumulant(d, gs.apply(probe), tol) - cumulant(d, probe + a, tol);
  } catch (const OutOfDomain& e) {
    throw OutOfDomain(std::string("cocycle probe failed: ") + e.what());
  }
  return {g, std::move(a), b, std::exp(-b)};
}

CocycleLawReport cocycle_laws(const CocycleRecord& g, const CocycleRecord& g_prime,
                              const CocycleRecord& product, const Tolerances& tol) {
  CocycleLawReport rep;
  const auto predicted = g.g.adjoint().inverse().apply(g_prime.a) + g.a;
  rep.a_error = norm(product.a - predicted);
  rep.b_error = std::abs(product.b - (g.b + g_prime.b));
  const double a_scale = 1.0 + norm(product.a);
  const double b_scale = 1.0 + std::abs(product.b);
  rep.pass = rep.a_error <= tol.cocycle * a_scale && rep.b_error <= tol.cocycle * b_scale;
  return rep;
}

StructuredMatrix extract_theta0(const StructuredMatrix& a_of_scalar, double c) {
  if (!(c > 0.0)) throw InvalidInput("scale c must be positive");
  if (std::abs(c - 1.0) < 1e-12) throw DegenerateScale("c = 1 carries no information on theta0");
  return (c / (c - 1.0)) * a_of_scalar;
}

std::vector<CharacterProbe> character_probes(const NEFDescriptor& d, const Tolerances& tol) {
  const auto& c = d.structure;
  const auto base = d.side() * StructuredMatrix::identity(c);
  std::vector<CharacterProbe> out;
  for (int j = 0; j < c->rank(); ++j) {
    for (double t : {2.0, 3.0}) {
      std::vector<double> diag(static_cast<std::size_t>(c->rank()), 1.0);
      diag[static_cast<std::size_t>(j)] = t;
      const auto probe = TriangularElement::diagonal(c, diag);
      out.push_back({j, t, measured_invariance_constant(d, probe, base, tol)});
    }
  }
  return out;
}

RieszParameter recover_parameter(const ConeStructure& c, const std::vector<CharacterProbe>& probes,
                                 const Tolerances& tol) {
  const int r = c.rank();
  std::vector<std::optional<double>> s(static_cast<std::size_t>(r));
  for (const auto& p : probes) {
    if (p.block < 0 || p.block >= r) throw InvalidInput("probe block out of range");
    if (!(p.t > 0.0) || std::abs(p.t - 1.0) < 1e-12 || !(p.c_g > 0.0)) {
      throw InvalidInput("probe needs t > 0, t != 1 and c_g > 0");
    }
    const double value = std::log(p.c_g) / (2.0 * std::log(p.t));
    auto& slot = s[static_cast<std::size_t>(p.block)];
    if (slot && std::abs(*slot - value) > tol.recovery * (1.0 + std::abs(value))) {
      throw InconsistentCharacter("probes of block " + std::to_string(p.block + 1) +
                                  " disagree: " + std::to_string(*slot) + " vs " +
                                  std::to_string(value));
    }
    if (!slot) slot = value;
  }
  std::vector<double> out;
  for (int k = 0; k < r; ++k) {
    if (!s[static_cast<std::size_t>(k)]) throw InvalidInput("no probe for block " + std::to_string(k + 1));
    out.push_back(*s[static_cast<std::size_t>(k)]);
  }
  return RieszParameter::classify(c, std::move(out), tol);
}

// ---------------------------------------------------------------------------

bool AuditReport::pass() const {
  for (const auto& s : steps)
    if (!s.pass) return false;
  return !steps.empty();
}

nlohmann::json AuditReport::to_json(const NEFDescriptor& d, std::uint64_t seed, std::size_t n) const {
  nlohmann::json j;
  j["cone"] = d.structure->name();
  j["s"] = d.s.s;
  j["theta0"] = std::vector<double>(d.theta0.coords().data(),
                                    d.theta0.coords().data() + d.theta0.coords().size());
  j["reflected"] = d.reflected;
  j["seed"] = seed;
  j["n"] = n;
  j["steps"] = nlohmann::json::array();
  for (const auto& s : steps) {
    j["steps"].push_back({{"name", s.name}, {"pass", s.pass}, {"metrics", s.metrics}});
  }
  j["pass"] = pass();
  return j;
}

namespace {

constexpr std::uint64_t kAuditStream = 0xA0D17ULL;

TriangularElement random_element(const ConePtr& c, CounterRng& rng, double spread) {
  Vector p(c->dim());
  for (int k = 0; k < c->rank(); ++k) p[k] = std::exp(spread * (2.0 * rng.uniform() - 1.0));
  for (int j = c->rank(); j < c->dim(); ++j) p[j] = spread * rng.normal();
  return TriangularElement(c, std::move(p));
}

std::vector<SignVector> all_signs(int r) {
  std::vector<SignVector> out;
  for (unsigned mask = 0; mask < (1u << r); ++mask) {
    std::vector<int> e(static_cast<std::size_t>(r));
    for (int k = 0; k < r; ++k) e[static_cast<std::size_t>(k)] = (mask >> k) & 1u ? 1 : -1;
    out.emplace_back(std::move(e));
  }
  return out;
}

bool mixed(const SignVector& e) {
  bool plus = false, minus = false;
  for (int v : e.eps) (v > 0 ? plus : minus) = true;
  return plus && minus;
}

AuditStep orbit_step(const NEFDescriptor& d, CounterRng& rng, const Tolerances& tol) {
  const auto& c = d.structure;
  // Theta(mu0) = side * Omega*.
  auto in_theta = [&](const StructuredMatrix& th) { return in_dual_cone(d.side() * th, tol); };
  const int expected = d.reflected ? 1 : -1;
  AuditStep step{"orbit_identification", true, {}};
  nlohmann::json members = nlohmann::json::array();
  int count = 0;
  int orbit_probes = 0, orbit_failures = 0;
  for (const auto& eps : all_signs(c->rank())) {
    const auto e = sign_matrix(c, eps);
    const bool member = in_theta(e);
    const bool should = std::all_of(eps.eps.begin(), eps.eps.end(), [&](int v) { return v == expected; });
    if (member) {
      ++count;
      members.push_back(eps.eps);
    }
    if (member != should) step.pass = false;
    // Points of the orbit rho*(H) E_eps share the membership of E_eps.
    for (int q = 0; q < 3; ++q) {
      const auto t = random_element(c, rng, 0.5);
      const bool inside = in_theta(rho_star_apply(t, e, tol));
      ++orbit_probes;
      if (inside != should) ++orbit_failures;
    }
  }
  if (count != 1 || orbit_failures != 0) step.pass = false;
  step.metrics = {{"members", members},
                  {"member_count", count},
                  {"orbit_probes", orbit_probes},
                  {"orbit_failures", orbit_failures}};
  return step;
}

AuditStep convexity_step(const NEFDescriptor& d, const Tolerances& tol) {
  const auto& c = d.structure;
  AuditStep step{"convexity_violation", true, {}};
  int mixed_count = 0, bridges = 0;
  double worst = 0.0;
  nlohmann::json no_bridge = nlohmann::json::array();
  for (const auto& eps : all_signs(c->rank())) {
    if (!mixed(eps)) continue;
    ++mixed_count;
    const auto pairs = bridging_pairs(*c, eps);
    if (pairs.empty()) {
      no_bridge.push_back(eps.eps);
      step.pass = false;
      continue;
    }
    for (const auto& [k, l] : pairs) {
      Vector v = Vector::Zero(c->block_dim(l, k));
      v[0] = std::sqrt(2.0);
      const auto mid = flip_midpoint(c, eps, k, l, v, tol);
      const auto want = sign_matrix(c, flipped_signs(eps, k, l));
      worst = std::max(worst, (mid.coords() - want.coords()).cwiseAbs().maxCoeff());
      ++bridges;
    }
  }
  if (worst > 1e-12) step.pass = false;
  step.metrics = {{"mixed_orbits", mixed_count},
                  {"bridges_checked", bridges},
                  {"max_error", worst},
                  {"no_bridge", no_bridge}};
  if (!no_bridge.empty()) step.metrics["error"] = "NoBridge";
  return step;
}

AuditStep invariance_step(const NEFDescriptor& d, CounterRng& rng, const Tolerances& tol) {
  const auto& c = d.structure;
  AuditStep step{"invariance_identity", true, {}};
  double worst = 0.0, worst_character = 0.0;
  const auto unit = StructuredMatrix::identity(c);
  for (int q = 0; q < 10; ++q) {
    const auto t = random_element(c, rng, 0.5);
    const auto base = random_element(c, rng, 0.5);
    const auto theta = d.side() * rho_star_apply(base, unit, tol);
    const auto chk = invariance_check(d, t, theta, tol);
    worst = std::max(worst, std::abs(chk.lhs - chk.rhs) / std::abs(chk.rhs));
    // T -> c_g is a character: c_{ST} = c_S c_T.
    const auto s2 = random_element(c, rng, 0.5);
    const double cst = invariance_check(d, compose(s2, t, tol), theta, tol).c_g;
    const double cs = invariance_check(d, s2, theta, tol).c_g;
    worst_character = std::max(worst_character, std::abs(cst - cs * chk.c_g) / std::abs(cst));
  }
  step.pass = worst <= 1e-8 && worst_character <= 1e-9;
  step.metrics = {{"max_relative_error", worst}, {"max_character_error", worst_character}};
  return step;
}

AuditStep theta0_step(const NEFDescriptor& d, const Tolerances& tol) {
  AuditStep step{"theta0_extraction", true, {}};
  double worst = 0.0;
  for (double cval : {2.0, 0.5, 3.0}) {
    const auto rec = cocycle_from_descriptor(d, LinearMap::scalar(d.structure, cval), tol);
    const auto th = extract_theta0(rec.a, cval);
    worst = std::max(worst, norm(th - d.theta0));
  }
  step.pass = worst <= 1e-10 * (1.0 + norm(d.theta0));
  step.metrics = {{"max_error", worst}};
  return step;
}

AuditStep recovery_step(const NEFDescriptor& d, const Tolerances& tol) {
  AuditStep step{"parameter_recovery", true, {}};
  try {
    const auto rec = recover_parameter(*d.structure, character_probes(d, tol), tol);
    double worst = 0.0;
    for (std::size_t k = 0; k < rec.s.size(); ++k) worst = std::max(worst, std::abs(rec.s[k] - d.s.s[k]));
    step.pass = worst <= tol.recovery;
    step.metrics = {{"recovered_s", rec.s}, {"max_error", worst}};
  } catch (const ConeError& e) {
    step.pass = false;
    step.metrics = {{"error", e.what()}};
  }
  return step;
}

AuditStep monte_carlo_step(const NEFDescriptor& d, CounterRng& rng, const AuditOptions& opts) {
  const auto& c = d.structure;
  const auto& tol = opts.tol;
  AuditStep step{"monte_carlo_pushforward", true, {}};
  const auto unit = StructuredMatrix::identity(c);
  // Reference member P(theta, mu): canonical parameter of the Riesz law is -I.
  const auto theta = d.theta0 + d.side() * unit;
  SamplerOptions so;
  so.threads = opts.threads;
  so.tol = tol;
  auto batch = sample_wishart(d.s, -unit, opts.samples, opts.seed, so);
  if (d.reflected) batch = map_samples(batch, LinearMap::scalar(c, -1.0));

  const auto tg = random_element(c, rng, 0.3);
  const auto rec = cocycle_from_descriptor(d, tg, tol);
  const auto pushed = map_samples(batch, rec.g);
  // g_* P(theta, mu) = P(theta', mu), theta' = (g*)^{-1} theta + a(g).
  const auto theta_prime = rec.g.adjoint().inverse().apply(theta) + rec.a;

  nlohmann::json probes = nlohmann::json::array();
  for (double scale : {0.25, 0.5, 1.0}) {
    const auto u = random_element(c, rng, 0.3);
    const auto eta = (d.side() * scale) * rho_star_apply(u, unit, tol);
    const auto est = empirical_laplace(pushed, eta);
    const double expected = std::exp(cumulant(d, theta_prime + eta, tol) - cumulant(d, theta_prime, tol));
    const double z = std::abs(est.estimate - expected) / est.std_error;
    const bool ok = std::abs(est.estimate - expected) <= 3.0 * est.std_error;
    if (!ok) step.pass = false;
    probes.push_back({{"scale", scale},
                      {"estimate", est.estimate},
                      {"std_error", est.std_error},
                      {"expected", expected},
                      {"z", z},
                      {"pass", ok}});
  }
  step.metrics = {{"samples", opts.samples}, {"probes", probes}};
  return step;
}

}  // namespace

AuditReport characterization_audit(const NEFDescriptor& d, const AuditOptions& opts) {
  AuditReport rep;
  CounterRng rng(opts.seed, kAuditStream);
  auto guarded = [&](const char* name, auto&& fn) {
    try {
      rep.steps.push_back(fn());
    } catch (const ConeError& e) {
      rep.steps.push_back({name, false, {{"error", e.what()}}});
    }
  };
  guarded("orbit_identification", [&] { return orbit_step(d, rng, opts.tol); });
  guarded("convexity_violation", [&] { return convexity_step(d, opts.tol); });
  guarded("invariance_identity", [&] { return invariance_step(d, rng, opts.tol); });
  guarded("theta0_extraction", [&] { return theta0_step(d, opts.tol); });
  guarded("parameter_recovery", [&] { return recovery_step(d, opts.tol); });
  guarded("monte_carlo_pushforward", [&] { return monte_carlo_step(d, rng, opts); });
  return rep;
}

}  // namespace homocone
