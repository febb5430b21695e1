// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes. Criteria 10 and 11 drive the command-line tool.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "homocone/errors.hpp"
#include "homocone/nef_invariance.hpp"
#include "support.hpp"

using namespace homocone;
using namespace testing_support;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

std::vector<double> regular_s(const ConeStructure& c, double margin) {
  const std::vector<int> ones(static_cast<std::size_t>(c.rank()), 1);
  std::vector<double> s;
  for (double p : p_vector(c, ones)) s.push_back(p / 2 + margin);
  return s;
}

Outcome laplace_oracle() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  int probes = 0;
  for (const auto& c : zoo()) {
    const auto s = RieszParameter::classify(*c, regular_s(*c, 1.5));
    const auto theta = -StructuredMatrix::identity(c);
    const auto batch = sample_wishart(s, theta, 100000, 42);
    const double base = log_riesz_laplace(s, -theta);
    for (double t : {0.5, 1.0, 2.0, 3.0, 4.0}) {
      // Tilted probes see the off-diagonal law, not only the trace.
      const auto eta = -t * rho_star_apply(random_element(c, 0.4), StructuredMatrix::identity(c));
      const auto est = empirical_laplace(batch, eta);
      const double expected = std::exp(log_riesz_laplace(s, -(theta + eta)) - base);
      const double z = std::abs(est.estimate - expected) / est.std_error;
      worst = std::max(worst, z);
      ++probes;
      if (!(z <= 3.0)) {
        o.pass = false;
        o.detail += " " + c->name() + "@t=" + fmt(t);
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= 300) o.pass = false;
  o.detail = std::to_string(probes) + " probes, max |z| = " + fmt(worst) + ", " + fmt(secs) + " s" + o.detail;
  return o;
}

Outcome multiplicativity() {
  double worst = 0.0;
  for (const auto& c : zoo()) {
    const auto id = StructuredMatrix::identity(c);
    for (int q = 0; q < 200; ++q) {
      std::vector<double> s;
      for (int k = 0; k < c->rank(); ++k) s.push_back(uniform(-2.0, 2.0));
      const auto g = random_element(c);
      const auto xi = random_dual(c);
      const double lhs = log_dual_power(s, rho_star_apply(g, xi));
      const double rhs = log_dual_power(s, rho_star_apply(g, id)) + log_dual_power(s, xi);
      worst = std::max(worst, std::abs(std::expm1(lhs - rhs)));
    }
  }
  return {worst <= 1e-8, "max relative error " + fmt(worst)};
}

Outcome symmetric_reduction() {
  double worst = 0.0;
  for (int r = 1; r <= 4; ++r) {
    const auto c = sym_cone(r);
    for (int q = 0; q < 100; ++q) {
      const auto xi = random_dual(c, 0.6);
      const double p = uniform(-2.0, 3.0);
      const std::vector<double> s(static_cast<std::size_t>(r), p);
      const double want = std::pow(embed(xi).determinant(), p);
      worst = std::max(worst, std::abs(dual_power(s, xi) - want) / want);
    }
  }
  return {worst <= 1e-9, "max relative error " + fmt(worst)};
}

Outcome gindikin_grid() {
  const auto c = sym_cone(3);
  const std::vector<std::pair<double, bool>> grid{{0.0, true}, {0.25, false}, {0.5, true},
                                                  {0.75, false}, {1.0, true}, {1.25, true}};
  Outcome o;
  for (const auto& [p, member] : grid) {
    const std::vector<double> s(3, p);
    const bool got = gindikin_membership(*c, s).has_value();
    o.detail += (o.detail.empty() ? "" : " ") + fmt(p) + (got ? ":member" : ":non");
    if (got != member) o.pass = false;
  }
  return o;
}

Outcome support_theorem() {
  Outcome o;
  const auto c = sym_cone(2);
  const std::vector<int> eps{0, 1};
  const auto batch = sample_singular(c, RieszParameter::classify(*c, {0.0, 1.0}), eps, 10000, 42);
  std::size_t bad = 0;
  for (std::size_t i = 0; i < batch.count(); ++i) {
    if (batch.value(i, 0) != 0.0 || batch.value(i, 2) != 0.0) ++bad;
  }
  if (bad) o.pass = false;
  double min_eig = INFINITY;
  for (const auto& z : zoo()) {
    const auto s = RieszParameter::classify(*z, regular_s(*z, 1.0));
    const auto m = empirical_moments(sample_wishart(s, -StructuredMatrix::identity(z), 100000, 42));
    const double e = Eigen::SelfAdjointEigenSolver<Matrix>(m.covariance).eigenvalues().minCoeff();
    min_eig = std::min(min_eig, e);
    if (!(e > 0)) o.pass = false;
  }
  o.detail = "singular violations " + std::to_string(bad) + "/10000, min covariance eigenvalue " + fmt(min_eig);
  return o;
}

Outcome convexity_identity() {
  double worst_mid = 0.0, worst_primal = 0.0;
  int bridges = 0;
  for (const auto& c : {sym_cone(3), vinberg_cone()}) {
    const int r = c->rank();
    for (unsigned mask = 0; mask < (1u << r); ++mask) {
      std::vector<int> e;
      for (int k = 0; k < r; ++k) e.push_back((mask >> k) & 1u ? 1 : -1);
      const SignVector eps(e);
      for (const auto& [k, l] : bridging_pairs(*c, eps)) {
        Vector v = Vector::Zero(c->block_dim(l, k));
        v[0] = std::sqrt(2.0);
        const auto mid = flip_midpoint(c, eps, k, l, v);
        const auto want = sign_matrix(c, flipped_signs(eps, k, l));
        worst_mid = std::max(worst_mid, max_abs(mid.coords() - want.coords()));
        ++bridges;
      }
    }
    for (int q = 0; q < 100; ++q) {
      const auto x = random_primal(c);
      for (int l = 1; l < r; ++l) {
        for (int k = 0; k < l; ++k) {
          if (c->block_dim(l, k) == 0) continue;
          Vector v = Vector::Zero(c->block_dim(l, k));
          v[0] = std::sqrt(2.0);
          const auto avg = flip_primal_average(x, k, l, v);
          worst_primal = std::max(worst_primal, std::abs(avg.diag(l) - (2 * x.diag(k) + x.diag(l))));
        }
      }
    }
  }
  return {worst_mid <= 1e-12 && worst_primal <= 1e-12 && bridges > 0,
          std::to_string(bridges) + " bridges, midpoint error " + fmt(worst_mid) + ", primal error " +
              fmt(worst_primal)};
}

CocycleRecord random_record(const NEFDescriptor& d) {
  const int pick = std::uniform_int_distribution<int>(0, 3)(engine());
  if (pick == 3) return cocycle_from_descriptor(d, random_element(d.structure, 0.4));
  const double c = std::array<double, 3>{0.5, 2.0, 3.0}[static_cast<std::size_t>(pick)];
  return cocycle_from_descriptor(d, LinearMap::scalar(d.structure, c));
}

Outcome cocycle_laws_check() {
  double wa = 0.0, wb = 0.0;
  bool pass = true;
  for (const auto& c : {sym_cone(2), vinberg_cone()}) {
    const auto d = NEFDescriptor::make(regular_s(*c, 0.8), random_vector(c, 0.5));
    for (int q = 0; q < 100; ++q) {
      const auto g = random_record(d);
      const auto h = random_record(d);
      const auto gh = cocycle_from_descriptor(d, g.g.then_after(h.g));
      const auto rep = cocycle_laws(g, h, gh);
      wa = std::max(wa, rep.a_error);
      wb = std::max(wb, rep.b_error);
      pass = pass && rep.a_error <= 1e-9 && rep.b_error <= 1e-9;
    }
  }
  return {pass, "max a error " + fmt(wa) + ", max b error " + fmt(wb)};
}

Outcome theta0_round_trip() {
  double worst = 0.0;
  for (const auto& c : zoo()) {
    for (int q = 0; q < 50; ++q) {
      const auto d = NEFDescriptor::make(regular_s(*c, 0.8), random_vector(c, 1.0));
      for (double k : {2.0, 0.5, 3.0}) {
        const auto rec = cocycle_from_descriptor(d, LinearMap::scalar(c, k));
        worst = std::max(worst, max_abs(extract_theta0(rec.a, k).coords() - d.theta0.coords()));
      }
    }
  }
  return {worst <= 1e-10, "max error " + fmt(worst)};
}

Outcome parameter_recovery() {
  double worst = 0.0;
  for (const auto& c : zoo()) {
    std::vector<double> s = regular_s(*c, 0.0);
    for (auto& v : s) v += uniform(0.3, 2.5);
    const auto d = NEFDescriptor::make(s, random_vector(c, 0.5));
    const auto rec = recover_parameter(*c, character_probes(d));
    for (std::size_t k = 0; k < s.size(); ++k) worst = std::max(worst, std::abs(rec.s[k] - s[k]));
  }
  return {worst <= 1e-9, "max error " + fmt(worst)};
}

// ---------------------------------------------------------------------------

const std::filesystem::path& workdir() {
  static const std::filesystem::path dir = [] {
    auto p = std::filesystem::temp_directory_path() / ("homocone_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(p);
    return p;
  }();
  return dir;
}

int run_cli(const std::string& args, const std::string& stdout_name) {
  const std::string cmd = std::string("\"") + HOMOCONE_CLI_PATH + "\" " + args + " > \"" +
                          (workdir() / stdout_name).string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& name) {
  std::ifstream f(workdir() / name, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Outcome end_to_end_audit() {
  const int a = run_cli("audit sym2 --s 2,2 -n 100000 --seed 42", "audit_sym2.json");
  const int b = run_cli("audit vinberg --s 1,1,2 -n 100000 --seed 42", "audit_vinberg.json");
  const int c = run_cli("audit sym1+sym1 --s 1,1 -n 100000 --seed 42", "audit_sum.json");
  const bool no_bridge = slurp("audit_sum.json").find("\"NoBridge\"") != std::string::npos;
  return {a == 0 && b == 0 && c == 1 && no_bridge,
          "exit codes " + std::to_string(a) + "/" + std::to_string(b) + "/" + std::to_string(c) +
              (no_bridge ? ", NoBridge reported" : ", NoBridge missing")};
}

Outcome determinism() {
  const auto csv = [](const std::string& name) { return (workdir() / name).string(); };
  const std::string sample = "sample vinberg --s 1,1,2 --theta -1,-2,-1.5,0.3,-0.2 -n 5000 --seed 7 ";
  int rc = 0;
  rc |= run_cli(sample + "--threads 1 -o \"" + csv("s1.csv") + "\"", "s1.log");
  rc |= run_cli(sample + "--threads 1 -o \"" + csv("s1b.csv") + "\"", "s1b.log");
  rc |= run_cli(sample + "--threads 4 -o \"" + csv("s4.csv") + "\"", "s4.log");
  const std::string audit = "audit sym2 --s 2,2 -n 20000 --seed 11 ";
  rc |= run_cli(audit + "--threads 1", "a1.json");
  rc |= run_cli(audit + "--threads 1", "a1b.json");
  rc |= run_cli(audit + "--threads 4", "a4.json");
  const bool same_sample = slurp("s1.csv") == slurp("s1b.csv") && slurp("s1.csv") == slurp("s4.csv") &&
                           slurp("s1.csv.json") == slurp("s4.csv.json") && !slurp("s1.csv").empty();
  const bool same_audit = slurp("a1.json") == slurp("a1b.json") && slurp("a1.json") == slurp("a4.json");
  return {rc == 0 && same_sample && same_audit,
          std::string("sample ") + (same_sample ? "identical" : "differs") + ", audit " +
              (same_audit ? "identical" : "differs")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"laplace_oracle", laplace_oracle},
      {"dual_power_multiplicativity", multiplicativity},
      {"symmetric_cone_reduction", symmetric_reduction},
      {"gindikin_set_sym3", gindikin_grid},
      {"support_both_directions", support_theorem},
      {"convexity_violation_identity", convexity_identity},
      {"cocycle_laws", cocycle_laws_check},
      {"theta0_round_trip", theta0_round_trip},
      {"parameter_recovery", parameter_recovery},
      {"end_to_end_audit", end_to_end_audit},
      {"determinism", determinism},
  };
  int failures = 0;
  int index = 1;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << index++ << ". " << c.name << "  (" << o.detail << ")"
              << std::endl;
  }
  std::filesystem::remove_all(workdir());
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
