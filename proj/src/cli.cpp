#include "homocone/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include "homocone/cone_io.hpp"
#include "homocone/cone_zoo.hpp"
#include "homocone/errors.hpp"
#include "homocone/nef_invariance.hpp"
#include "homocone/rng.hpp"

namespace homocone {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 42;
constexpr std::uint64_t kProbeStream = 0x1A71ACEULL;

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string item = text.substr(pos, comma - pos);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    double v = 0.0;
    const char* b = item.data();
    const char* e = item.data() + item.size();
    const auto res = std::from_chars(b, e, v);
    if (item.empty() || res.ec != std::errc{} || res.ptr != e || !std::isfinite(v)) {
      throw InvalidInput(std::string("cannot parse ") + what + " entry '" + item + "'");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text, const char* what) {
  std::vector<int> out;
  for (double v : parse_list(text, what)) {
    if (v != std::floor(v)) throw InvalidInput(std::string(what) + " entries must be integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

/// Coordinates in Z_V order, given inline or as a path to a file with one
/// comma- or whitespace-separated list.
StructuredMatrix parse_point(const ConePtr& c, const std::string& text, const char* what) {
  std::string body = text;
  if (std::filesystem::is_regular_file(text)) {
    std::ifstream in(text);
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::replace_if(all.begin(), all.end(), [](char ch) { return ch == '\n' || ch == ' ' || ch == '\t'; }, ',');
    all.erase(std::unique(all.begin(), all.end(), [](char a, char b) { return a == ',' && b == ','; }),
              all.end());
    if (!all.empty() && all.front() == ',') all.erase(0, 1);
    if (!all.empty() && all.back() == ',') all.pop_back();
    body = all;
  }
  const auto v = parse_list(body, what);
  if (static_cast<int>(v.size()) != c->dim()) {
    throw InvalidInput(std::string(what) + " needs " + std::to_string(c->dim()) + " coordinates, got " +
                       std::to_string(v.size()));
  }
  return StructuredMatrix(c, Eigen::Map<const Vector>(v.data(), c->dim()));
}

ConePtr load_cone(const std::string& source, const Tolerances& tol) {
  if (std::filesystem::is_regular_file(source)) return load_cone_file(source, tol);
  return zoo_cone(source);
}

json coords_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json witness_json(const AxiomCheck& chk) {
  json j = {{"pass", chk.pass}, {"worst_residual", chk.worst_residual}};
  if (chk.witness) {
    const auto& w = *chk.witness;
    auto mat = [](const Matrix& m) {
      json rows = json::array();
      for (int i = 0; i < m.rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(m.cols()));
        for (int q = 0; q < m.cols(); ++q) row[static_cast<std::size_t>(q)] = m(i, q);
        rows.push_back(row);
      }
      return rows;
    };
    j["witness"] = {{"l", w.l},       {"k", w.k}, {"i", w.i},         {"a_index", w.a_index},
                    {"b_index", w.b_index},       {"a", mat(w.a)},    {"b", mat(w.b)},
                    {"product", mat(w.product)},  {"residual", w.residual}};
  }
  return j;
}

struct Common {
  std::string cone;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  double closure_tol = -1, gindikin_tol = -1, dual_tol = -1;

  Tolerances tolerances() const {
    Tolerances t = default_tolerances();
    if (closure_tol > 0) t.closure = closure_tol;
    if (gindikin_tol > 0) t.gindikin_equality = gindikin_tol;
    if (dual_tol > 0) t.dual_residual = dual_tol;
    return t;
  }

  std::uint64_t resolved_seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv("HOMOCONE_SEED")) {
      std::uint64_t v = 0;
      const std::string s(env);
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw InvalidInput("HOMOCONE_SEED must be a non-negative integer");
      }
      return v;
    }
    return kDefaultSeed;
  }
};

void add_common(CLI::App* sub, Common& c, bool with_seed) {
  sub->add_option("cone", c.cone, "zoo name (sym<r>, lorentz<m>, vinberg, a+b) or cone JSON file")
      ->required();
  sub->add_option("--closure-tol", c.closure_tol, "closure tolerance override");
  sub->add_option("--gindikin-tol", c.gindikin_tol, "Gindikin equality band override");
  sub->add_option("--dual-tol", c.dual_tol, "dual decomposition residual override");
  if (with_seed) {
    sub->add_option("--seed", c.seed, "RNG seed (default 42, or HOMOCONE_SEED)");
    sub->add_option("--threads", c.threads, "worker threads; output does not depend on it")
        ->check(CLI::Range(1, 1024));
  }
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw InvalidInput("failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------

int cmd_validate(const Common& o, std::ostream& out) {
  const auto tol = o.tolerances();
  const auto c = load_cone(o.cone, tol);
  const auto rep = validate_axioms(*c, tol);
  const bool irr = is_irreducible(*c);
  emit(out, {{"cone", c->name()},
             {"rank", c->rank()},
             {"matrix_size", c->matrix_size()},
             {"dim", c->dim()},
             {"V1", witness_json(rep.v1)},
             {"V2", witness_json(rep.v2)},
             {"V3", witness_json(rep.v3)},
             {"irreducible", irr},
             {"pass", rep.all_pass()}});
  return rep.all_pass() ? kExitPass : kExitCheckFailed;
}

int cmd_decompose(const Common& o, const std::string& point, bool dual, std::ostream& out) {
  const auto tol = o.tolerances();
  const auto c = load_cone(o.cone, tol);
  const auto x = parse_point(c, point, "point");
  json j = {{"cone", c->name()}, {"point", coords_json(x.coords())}};
  if (dual) {
    const auto dec = dual_decompose(x, tol);
    j["factor"] = coords_json(dec.factor.params());
    j["iterations"] = dec.iterations;
    j["relative_residual"] = dec.relative_residual;
  } else {
    const auto t = cholesky_structured(x, tol);
    j["factor"] = coords_json(t.params());
  }
  j["coordinates"] = c->coordinate_names();
  emit(out, j);
  return kExitPass;
}

int cmd_power(const Common& o, const std::string& s_text, const std::string& xi_text, std::ostream& out) {
  const auto tol = o.tolerances();
  const auto c = load_cone(o.cone, tol);
  const auto s = parse_list(s_text, "s");
  if (static_cast<int>(s.size()) != c->rank()) throw InvalidInput("s needs r entries");
  const auto xi = parse_point(c, xi_text, "xi");
  const double lv = log_dual_power(s, xi, tol);
  emit(out, {{"cone", c->name()}, {"s", s}, {"xi", coords_json(xi.coords())}, {"log_value", lv},
             {"value", std::exp(lv)}});
  return kExitPass;
}

int cmd_gindikin(const Common& o, const std::string& s_text, std::ostream& out) {
  const auto tol = o.tolerances();
  const auto c = load_cone(o.cone, tol);
  const auto s = parse_list(s_text, "s");
  if (static_cast<int>(s.size()) != c->rank()) throw InvalidInput("s needs r entries");
  const auto eps = gindikin_membership(*c, s, tol);
  json j = {{"cone", c->name()}, {"s", s}, {"member", eps.has_value()}};
  if (eps) {
    j["stratum"] = *eps;
    j["p"] = p_vector(*c, *eps);
  }
  emit(out, j);
  return eps ? kExitPass : kExitCheckFailed;
}

void require_parameter_domain(const StructuredMatrix& theta, const Tolerances& tol) {
  if (!in_dual_cone(-theta, tol)) {
    throw InvalidInput("-theta is not in the dual cone (coordinates are diagonals first, then blocks)");
  }
}

SamplerOptions sampler_options(const Common& o, const std::string& convention) {
  SamplerOptions so;
  so.threads = o.threads;
  so.tol = o.tolerances();
  if (convention == "row") {
    so.convention = BartlettConvention::RowCounts;
  } else if (convention == "column") {
    so.convention = BartlettConvention::ColumnCounts;
  } else {
    throw InvalidInput("--convention must be row or column");
  }
  return so;
}

int cmd_sample(const Common& o, const std::string& s_text, const std::string& theta_text,
               const std::string& eps_text, std::size_t n, const std::string& output,
               const std::string& convention, std::ostream& out) {
  const auto so = sampler_options(o, convention);
  const auto c = load_cone(o.cone, so.tol);
  const auto s = RieszParameter::classify(*c, parse_list(s_text, "s"), so.tol);
  const auto seed = o.resolved_seed();
  std::optional<SampleBatch> batch;
  if (!eps_text.empty()) {
    if (!theta_text.empty()) throw InvalidInput("--eps samples the theta = -I law; drop --theta");
    const auto eps = parse_ints(eps_text, "eps");
    batch.emplace(sample_singular(c, s, eps, n, seed, so));
  } else {
    const auto theta = theta_text.empty() ? -StructuredMatrix::identity(c) : parse_point(c, theta_text, "theta");
    require_parameter_domain(theta, so.tol);
    batch.emplace(sample_wishart(s, theta, n, seed, so));
  }
  if (output.empty()) {
    write_csv(*batch, out);
  } else {
    std::ostringstream csv;
    write_csv(*batch, csv);
    write_text_file(output, csv.str());
    write_text_file(output + ".json", sidecar_json(*batch).dump(2) + "\n");
  }
  return kExitPass;
}

int cmd_laplace_check(const Common& o, const std::string& s_text, const std::string& theta_text,
                      std::size_t n, const std::string& convention, std::ostream& out) {
  const auto so = sampler_options(o, convention);
  const auto c = load_cone(o.cone, so.tol);
  const auto s = RieszParameter::classify(*c, parse_list(s_text, "s"), so.tol);
  const auto seed = o.resolved_seed();
  const auto theta = theta_text.empty() ? -StructuredMatrix::identity(c) : parse_point(c, theta_text, "theta");
  require_parameter_domain(theta, so.tol);
  const auto batch = sample_wishart(s, theta, n, seed, so);
  const double base = log_riesz_laplace(s, -theta, so.tol);

  // Probe directions eta = -t rho*(U) I are tilted off the identity so that
  // they see more than the trace of X.
  CounterRng rng(seed, kProbeStream);
  const auto unit = StructuredMatrix::identity(c);
  json rows = json::array();
  bool all = true;
  for (double t : {0.5, 1.0, 2.0, 3.0, 4.0}) {
    Vector p(c->dim());
    for (int k = 0; k < c->rank(); ++k) p[k] = std::exp(0.4 * (2.0 * rng.uniform() - 1.0));
    for (int j = c->rank(); j < c->dim(); ++j) p[j] = 0.4 * rng.normal();
    const auto eta = -t * rho_star_apply(TriangularElement(c, std::move(p)), unit, so.tol);
    const auto est = empirical_laplace(batch, eta);
    const double expected = std::exp(log_riesz_laplace(s, -(theta + eta), so.tol) - base);
    const double z = est.std_error > 0 ? (est.estimate - expected) / est.std_error : INFINITY;
    const bool ok = std::abs(est.estimate - expected) <= 3.0 * est.std_error;
    all = all && ok;
    rows.push_back({{"t", t},
                    {"eta", coords_json(eta.coords())},
                    {"estimate", est.estimate},
                    {"std_error", est.std_error},
                    {"expected", expected},
                    {"z", z},
                    {"dominated", est.dominated},
                    {"pass", ok}});
  }
  emit(out, {{"cone", c->name()},
             {"s", s.s},
             {"theta", coords_json(theta.coords())},
             {"n", n},
             {"seed", seed},
             {"convention", convention},
             {"probes", rows},
             {"pass", all}});
  return all ? kExitPass : kExitCheckFailed;
}

int cmd_audit(const Common& o, const std::string& s_text, const std::string& theta0_text, bool reflected,
              std::size_t n, const std::string& output, std::ostream& out) {
  const auto tol = o.tolerances();
  const auto c = load_cone(o.cone, tol);
  auto s = parse_list(s_text, "s");
  if (s.size() == 1 && c->rank() > 1) s.assign(static_cast<std::size_t>(c->rank()), s.front());
  const auto theta0 = theta0_text.empty() ? StructuredMatrix::zero(c) : parse_point(c, theta0_text, "theta0");
  const auto d = NEFDescriptor::make(std::move(s), theta0, 0.0, reflected, tol);
  AuditOptions opts;
  opts.samples = n;
  opts.seed = o.resolved_seed();
  opts.threads = o.threads;
  opts.tol = tol;
  const auto rep = characterization_audit(d, opts);
  const auto text = rep.to_json(d, opts.seed, n).dump(2) + "\n";
  if (!output.empty()) write_text_file(output, text);
  out << text;
  return rep.pass() ? kExitPass : kExitCheckFailed;
}

int cmd_flip_demo(const Common& o, const std::string& eps_text, int k, int l, std::ostream& out) {
  const auto tol = o.tolerances();
  const auto c = load_cone(o.cone, tol);
  const SignVector eps(parse_ints(eps_text, "eps"));
  const int k0 = k - 1, l0 = l - 1;
  if (!(0 <= k0 && k0 < l0 && l0 < c->rank())) throw InvalidInput("need 1 <= k < l <= r");
  if (c->block_dim(l0, k0) == 0) throw InvalidInput("V_lk is zero; no flip exists for this pair");
  Vector v = Vector::Zero(c->block_dim(l0, k0));
  v[0] = std::sqrt(2.0);
  const auto mid = flip_midpoint(c, eps, k0, l0, v, tol);
  const auto target = flipped_signs(eps, k0, l0);
  const auto want = sign_matrix(c, target);
  const double err = (mid.coords() - want.coords()).cwiseAbs().maxCoeff();
  const bool ok = err <= 1e-12;
  emit(out, {{"cone", c->name()},
             {"eps", eps.eps},
             {"k", k},
             {"l", l},
             {"midpoint", coords_json(mid.coords())},
             {"flipped_eps", target.eps},
             {"expected", coords_json(want.coords())},
             {"max_error", err},
             {"pass", ok}});
  return ok ? kExitPass : kExitCheckFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Homogeneous cones, Riesz measures and Wishart exponential families.\n"
               "Points and parameters are comma-separated Z_V coordinates: the r diagonal\n"
               "scalars, then block coefficients ordered by (l, k, j).",
               "homocone"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "expand all help");

  Common common;
  std::string point, s_text, xi_text, theta_text, theta0_text, eps_text, output, convention = "row";
  std::size_t n = 100000;
  bool reflected = false;
  int k = 0, l = 0;

  auto* validate = app.add_subcommand("validate", "check the clan axioms and irreducibility");
  add_common(validate, common, false);

  auto* decompose = app.add_subcommand("decompose", "x = rho(T) I for x in the cone");
  add_common(decompose, common, false);
  decompose->add_option("--point", point, "coordinates of x")->required();

  auto* dual = app.add_subcommand("dual-decompose", "xi = rho*(T) I for xi in the dual cone");
  add_common(dual, common, false);
  dual->add_option("--point", point, "coordinates of xi")->required();

  auto* power = app.add_subcommand("power", "generalized power Delta*_s(xi)");
  add_common(power, common, false);
  power->add_option("--s", s_text, "s_1,...,s_r")->required();
  power->add_option("--xi", xi_text, "coordinates of xi")->required();

  auto* gindikin = app.add_subcommand("gindikin", "stratum of s in the Gindikin-Wallach set");
  add_common(gindikin, common, false);
  gindikin->add_option("--s", s_text, "s_1,...,s_r")->required();

  auto* sample = app.add_subcommand("sample", "draw Wishart samples as CSV (plus a .json sidecar with -o)");
  add_common(sample, common, true);
  sample->add_option("--s", s_text, "s_1,...,s_r")->required();
  sample->add_option("--theta", theta_text, "canonical parameter, -theta in the dual cone (default -I)");
  sample->add_option("--eps", eps_text, "singular stratum (0/1 entries); uses theta = -I");
  sample->add_option("-n", n, "sample count")->check(CLI::PositiveNumber);
  sample->add_option("-o,--output", output, "CSV path; stdout when omitted");
  sample->add_option("--convention", convention, "Bartlett shape convention: row or column");

  auto* laplace = app.add_subcommand("laplace-check", "empirical vs closed-form Laplace transform");
  add_common(laplace, common, true);
  laplace->add_option("--s", s_text, "s_1,...,s_r")->required();
  laplace->add_option("--theta", theta_text, "canonical parameter (default -I)");
  laplace->add_option("-n", n, "sample count")->check(CLI::PositiveNumber);
  laplace->add_option("--convention", convention, "Bartlett shape convention: row or column");

  auto* audit = app.add_subcommand("audit", "characterization audit of a Wishart family");
  add_common(audit, common, true);
  audit->add_option("--s", s_text, "s_1,...,s_r, or one value for all blocks")->required();
  audit->add_option("--theta0", theta0_text, "tilt theta0 (default 0)");
  audit->add_flag("--reflected", reflected, "use R_s(-dx)");
  audit->add_option("-n", n, "Monte Carlo sample count")->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
  audit->add_option("-o,--output", output, "also write the JSON report here");

  auto* flip = app.add_subcommand("flip-demo", "midpoint of the flip orbit pair at E_eps");
  add_common(flip, common, false);
  flip->add_option("--eps", eps_text, "sign vector with entries -1, 0, 1")->required();
  flip->add_option("--k", k, "1-based k")->required();
  flip->add_option("--l", l, "1-based l, k < l")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitBadInput;
  }

  try {
    if (*validate) return cmd_validate(common, out);
    if (*decompose) return cmd_decompose(common, point, false, out);
    if (*dual) return cmd_decompose(common, point, true, out);
    if (*power) return cmd_power(common, s_text, xi_text, out);
    if (*gindikin) return cmd_gindikin(common, s_text, out);
    if (*sample) return cmd_sample(common, s_text, theta_text, eps_text, n, output, convention, out);
    if (*laplace) return cmd_laplace_check(common, s_text, theta_text, n, convention, out);
    if (*audit) return cmd_audit(common, s_text, theta0_text, reflected, n, output, out);
    if (*flip) return cmd_flip_demo(common, eps_text, k, l, out);
  } catch (const InvalidInput& e) {
    err << e.what() << "\n";
    return kExitBadInput;
  } catch (const PreconditionViolation& e) {
    err << e.what() << "\n";
    return kExitBadInput;
  } catch (const ConeError& e) {
    err << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitBadInput;
}

}  // namespace homocone
