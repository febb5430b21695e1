#include <doctest.h>

#include "homocone/errors.hpp"
#include "homocone/nef_invariance.hpp"
#include "support.hpp"

using namespace homocone;
using namespace testing_support;

namespace {

std::vector<double> random_s(const ConeStructure& c) {
  const std::vector<int> ones(static_cast<std::size_t>(c.rank()), 1);
  const auto p = p_vector(c, ones);
  std::vector<double> s;
  for (double pk : p) s.push_back(pk / 2 + uniform(0.2, 2.0));
  return s;
}

NEFDescriptor random_descriptor(const ConePtr& c, bool reflected) {
  return NEFDescriptor::make(random_s(*c), random_vector(c, 0.5), uniform(-1, 1), reflected);
}

/// A parameter inside Theta(mu): theta0 -+ rho*(T) I.
StructuredMatrix inside(const NEFDescriptor& d) { return d.theta0 + d.side() * random_dual(d.structure); }

CocycleRecord random_record(const NEFDescriptor& d) {
  const int pick = std::uniform_int_distribution<int>(0, 3)(engine());
  if (pick == 3) return cocycle_from_descriptor(d, random_element(d.structure, 0.4));
  const double c = std::array<double, 3>{0.5, 2.0, 3.0}[static_cast<std::size_t>(pick)];
  return cocycle_from_descriptor(d, LinearMap::scalar(d.structure, c));
}

}  // namespace

TEST_CASE("descriptor validation") {
  const auto c = sym_cone(2);
  CHECK_NOTHROW(NEFDescriptor::make({2, 2}, StructuredMatrix::zero(c)));
  CHECK_THROWS_AS(NEFDescriptor::make({0.25, 0.25}, StructuredMatrix::zero(c)), NotInGindikinSet);
  CHECK_THROWS_AS(NEFDescriptor::make({0.0, 1.0}, StructuredMatrix::zero(c)), NotInGindikinSet);
}

TEST_CASE("Laplace transform of a Sym cone family") {
  const auto c = sym_cone(2);
  const auto theta0 = random_vector(c, 0.3);
  const auto d = NEFDescriptor::make({1.5, 1.5}, theta0, 0.4);
  const auto theta = inside(d);
  const double det = embed(theta0 - theta).determinant();
  CHECK(laplace(d, theta) == doctest::Approx(std::exp(0.4) * std::pow(det, -1.5)).epsilon(1e-10));
  CHECK(in_domain(d, theta));
  CHECK_FALSE(in_domain(d, theta0 + StructuredMatrix::identity(c)));
  CHECK_THROWS_AS(laplace(d, theta0 + StructuredMatrix::identity(c)), OutOfDomain);

  const auto r = NEFDescriptor::make({1.5, 1.5}, theta0, 0.0, true);
  CHECK(in_domain(r, theta0 + StructuredMatrix::identity(c)));
  CHECK_FALSE(in_domain(r, theta0 - StructuredMatrix::identity(c)));
}

TEST_CASE("finite-difference mean matches p (theta0 - theta)^{-1} on Sym cones") {
  const auto c = sym_cone(3);
  const auto d = NEFDescriptor::make({2, 2, 2}, random_vector(c, 0.3));
  const auto theta = inside(d);
  const Matrix want = 2.0 * embed(d.theta0 - theta).inverse();
  const auto got = mean(d, theta);
  CHECK((embed(got) - want).norm() < 1e-7 * want.norm());
}

TEST_CASE("finite-difference truncation error shrinks quadratically") {
  const auto c = sym_cone(2);
  const auto d = NEFDescriptor::make({2, 2}, StructuredMatrix::zero(c));
  const StructuredMatrix theta(c, (Vector(3) << -1.0, -0.8, 0.3).finished());
  const Matrix exact = 2.0 * embed(-theta).inverse();
  const double h = 0.02;
  const double e1 = (embed(mean_with_step(d, theta, h)) - exact).norm();
  const double e2 = (embed(mean_with_step(d, theta, h / 2)) - exact).norm();
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("invariance identity and the measured constant") {
  for (const auto& c : zoo()) {
    CAPTURE(c->name());
    for (bool reflected : {false, true}) {
      const auto d = random_descriptor(c, reflected);
      for (int q = 0; q < 10; ++q) {
        const auto t = random_element(c);
        const auto theta = d.side() * random_dual(c);
        const auto chk = invariance_check(d, t, theta);
        CHECK(chk.lhs == doctest::Approx(chk.rhs).epsilon(1e-10));
        CHECK(chk.c_g == doctest::Approx(character(d.s.s, t)).epsilon(1e-14));
        CHECK(measured_invariance_constant(d, t, theta) == doctest::Approx(chk.c_g).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("closed-form and probe cocycles agree on rho(T)") {
  for (const auto& c : zoo()) {
    const auto d = random_descriptor(c, false);
    const auto t = random_element(c, 0.4);
    const auto closed = cocycle_from_descriptor(d, t);
    const auto probed = cocycle_from_descriptor(d, rho_map(t));
    CHECK(closed.b == doctest::Approx(probed.b).epsilon(1e-10));
    CHECK(max_abs(closed.a.coords() - probed.a.coords()) < 1e-12);
  }
}

TEST_CASE("scalar maps have b = -sum(s) log c") {
  const auto c = vinberg_cone();
  const auto d = NEFDescriptor::make({1, 1, 2}, random_vector(c, 0.5));
  for (double k : {0.5, 2.0, 3.0}) {
    const auto rec = cocycle_from_descriptor(d, LinearMap::scalar(c, k));
    CHECK(rec.b == doctest::Approx(-4.0 * std::log(k)).epsilon(1e-10));
  }
}

TEST_CASE("cocycle laws hold over random pairs") {
  for (const auto& c : {sym_cone(2), vinberg_cone()}) {
    CAPTURE(c->name());
    for (bool reflected : {false, true}) {
      const auto d = random_descriptor(c, reflected);
      for (int q = 0; q < 100; ++q) {
        const auto g = random_record(d);
        const auto h = random_record(d);
        const auto gh = cocycle_from_descriptor(d, g.g.then_after(h.g));
        const auto rep = cocycle_laws(g, h, gh);
        CHECK(rep.pass);
        CHECK(rep.a_error < 1e-9);
        CHECK(rep.b_error < 1e-9);
      }
    }
  }
}

TEST_CASE("cocycle laws detect a corrupted record") {
  const auto c = sym_cone(2);
  const auto d = NEFDescriptor::make({2, 2}, random_vector(c, 0.5));
  const auto g = cocycle_from_descriptor(d, LinearMap::scalar(c, 2.0));
  const auto h = cocycle_from_descriptor(d, random_element(c));
  auto gh = cocycle_from_descriptor(d, g.g.then_after(h.g));
  gh.b += 1e-6;
  CHECK_FALSE(cocycle_laws(g, h, gh).pass);
}

TEST_CASE("theta0 is recovered from scalar cocycles") {
  for (const auto& c : zoo()) {
    for (int q = 0; q < 50; ++q) {
      const auto d = random_descriptor(c, q % 2 == 1);
      for (double k : {2.0, 0.5, 3.0}) {
        const auto rec = cocycle_from_descriptor(d, LinearMap::scalar(c, k));
        const auto got = extract_theta0(rec.a, k);
        CHECK(max_abs(got.coords() - d.theta0.coords()) < 1e-10);
      }
    }
  }
  const auto z = StructuredMatrix::zero(sym_cone(2));
  CHECK_THROWS_AS(extract_theta0(z, 1.0), DegenerateScale);
  CHECK_THROWS_AS(extract_theta0(z, -2.0), InvalidInput);
}

TEST_CASE("Riesz parameter is recovered from character probes") {
  for (const auto& c : zoo()) {
    CAPTURE(c->name());
    for (bool reflected : {false, true}) {
      const auto d = random_descriptor(c, reflected);
      const auto probes = character_probes(d);
      CHECK(probes.size() == static_cast<std::size_t>(2 * c->rank()));
      const auto rec = recover_parameter(*c, probes);
      for (std::size_t k = 0; k < rec.s.size(); ++k) CHECK(std::abs(rec.s[k] - d.s.s[k]) <= 1e-9);
      CHECK(rec.stratum == d.s.stratum);
    }
  }
}

TEST_CASE("inconsistent character probes are rejected") {
  const auto c = sym_cone(2);
  std::vector<CharacterProbe> probes{{0, 2.0, 16.0}, {0, 3.0, 81.0}, {1, 2.0, 16.0}, {1, 3.0, 82.0}};
  CHECK_THROWS_AS(recover_parameter(*c, probes), InconsistentCharacter);
  probes.pop_back();
  probes.pop_back();
  CHECK_THROWS_AS(recover_parameter(*c, probes), InvalidInput);
  CHECK(recover_parameter(*c, {{0, 2.0, 16.0}, {1, 3.0, 9.0}}).s == std::vector<double>{2.0, 1.0});
}

TEST_CASE("audit passes on a Sym cone family and reports every step") {
  const auto c = sym_cone(2);
  const auto d = NEFDescriptor::make({2, 2}, random_vector(c, 0.3));
  AuditOptions opts;
  opts.samples = 20000;
  const auto rep = characterization_audit(d, opts);
  CHECK(rep.pass());
  REQUIRE(rep.steps.size() == 6);
  CHECK(rep.steps.front().name == "orbit_identification");
  CHECK(rep.steps.back().name == "monte_carlo_pushforward");
  const auto j = rep.to_json(d, opts.seed, opts.samples);
  CHECK(j["pass"] == true);
  CHECK(j["cone"] == "sym2");
}

TEST_CASE("audit flags a missing bridge on a reducible cone") {
  const auto c = direct_sum(sym_cone(1), sym_cone(1));
  const auto d = NEFDescriptor::make({1, 1}, StructuredMatrix::zero(c));
  AuditOptions opts;
  opts.samples = 5000;
  const auto rep = characterization_audit(d, opts);
  CHECK_FALSE(rep.pass());
  const auto& conv = rep.steps[1];
  CHECK(conv.name == "convexity_violation");
  CHECK_FALSE(conv.pass);
  CHECK(conv.metrics["error"] == "NoBridge");
}
