#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "homocone/cone_io.hpp"
#include "homocone/errors.hpp"
#include "support.hpp"

using namespace homocone;
using namespace testing_support;

TEST_CASE("zoo cones satisfy the clan axioms") {
  for (const auto& c : zoo()) {
    CAPTURE(c->name());
    const auto rep = validate_axioms(*c);
    CHECK(rep.all_pass());
    CHECK(rep.v1.worst_residual < 1e-12);
    CHECK(rep.v2.worst_residual < 1e-12);
    CHECK(rep.v3.worst_residual < 1e-12);
    CHECK(is_irreducible(*c));
  }
}

TEST_CASE("misoriented Vinberg structures fail with a witness") {
  const auto mirrored = validate_axioms(*vinberg_mirrored());
  CHECK_FALSE(mirrored.v1.pass);
  REQUIRE(mirrored.v1.witness);
  // V_32 V_21 lands in V_31 = {0}.
  CHECK(mirrored.v1.witness->l == 3);
  CHECK(mirrored.v1.witness->k == 2);
  CHECK(mirrored.v1.witness->i == 1);
  CHECK(mirrored.v1.witness->residual == doctest::Approx(1.0));
  CHECK(mirrored.v2.pass);

  const auto transposed = validate_axioms(*vinberg_transposed());
  CHECK(transposed.v1.pass);
  CHECK_FALSE(transposed.v2.pass);
  REQUIRE(transposed.v2.witness);
  CHECK(transposed.v2.witness->l == 3);
  CHECK(transposed.v2.witness->k == 2);
}

TEST_CASE("a block space whose products are not scalar fails V3") {
  // Rank 2, partition (1, 2); V_21 spanned by e_1 only is fine, but full
  // Mat(2,1) has a a^T of rank one, not a multiple of I_2.
  std::vector<Matrix> cols;
  for (int i = 0; i < 2; ++i) {
    Matrix a = Matrix::Zero(2, 1);
    a(i, 0) = std::sqrt(2.0);
    cols.push_back(a);
  }
  const auto c = ConeStructure::create("bad", BlockPartition({1, 2}), {BlockSpace{1, 0, cols}});
  const auto rep = validate_axioms(*c);
  CHECK(rep.v1.pass);
  CHECK(rep.v2.pass);
  CHECK_FALSE(rep.v3.pass);
}

TEST_CASE("sym and direct-sum structure") {
  const auto s1 = sym_cone(1);
  CHECK(s1->dim() == 1);
  CHECK(is_irreducible(*s1));
  const auto s4 = sym_cone(4);
  CHECK(s4->dim() == 10);

  const auto sum = direct_sum(sym_cone(1), sym_cone(1));
  CHECK(sum->dim() == 2);
  CHECK(sum->block_dim(1, 0) == 0);
  CHECK_FALSE(is_irreducible(*sum));
  CHECK(validate_axioms(*sum).all_pass());

  const auto big = direct_sum(vinberg_cone(), sym_cone(2));
  CHECK(big->rank() == 5);
  CHECK(big->block_dim(4, 3) == 1);
  CHECK(big->block_dim(3, 2) == 0);
  CHECK(validate_axioms(*big).all_pass());
  CHECK_FALSE(is_irreducible(*big));
  CHECK(zoo_cone("vinberg+sym2")->same_as(*big));
}

TEST_CASE("lorentz_cone(1) is the sym2 structure") {
  const auto l1 = lorentz_cone(1);
  const auto s2 = sym_cone(2);
  CHECK(l1->partition() == s2->partition());
  CHECK(l1->basis(1, 0).front() == s2->basis(1, 0).front());
  CHECK(lorentz_cone(3)->dim() == 5);
}

TEST_CASE("zoo lookup rejects unknown names") {
  CHECK_THROWS_AS(zoo_cone("sym"), InvalidInput);
  CHECK_THROWS_AS(zoo_cone("sym0"), InvalidInput);
  CHECK_THROWS_AS(zoo_cone("symx"), InvalidInput);
  CHECK_THROWS_AS(zoo_cone("hyperbolic"), InvalidInput);
  CHECK(zoo_cone("lorentz4")->dim() == 6);
}

TEST_CASE("standard inner product matches the trace form on symmetric cones") {
  const auto c = sym_cone(3);
  for (int q = 0; q < 20; ++q) {
    const auto x = random_vector(c);
    const auto y = random_vector(c);
    const double trace = (embed(x) * embed(y)).trace();
    CHECK(inner_product(x, y) == doctest::Approx(trace).epsilon(1e-13));
  }
}

TEST_CASE("project inverts embed and reports leakage") {
  for (const auto& c : zoo()) {
    const auto x = random_vector(c);
    const auto p = project(c, embed(x));
    CHECK(max_abs(p.value.coords() - x.coords()) < 1e-14);
    CHECK(p.residual < 1e-14);
  }
  const auto v = vinberg_cone();
  Matrix m = Matrix::Zero(3, 3);
  m(1, 0) = m(0, 1) = 1.0;  // V_21 = {0}
  const auto p = project(v, m);
  CHECK(p.residual == doctest::Approx(std::sqrt(2.0)));
  CHECK(max_abs(p.value.coords()) == 0.0);
}

TEST_CASE("identity readout is exact") {
  // Scalar diagonal blocks must come back without rounding even on wide blocks.
  const auto c = lorentz_cone(7);
  Matrix m = Matrix::Identity(8, 8) * 0.1;
  const auto p = project(c, m);
  CHECK(p.value.diag(0) == 0.1);
  CHECK(p.value.diag(1) == 0.1);
}

TEST_CASE("triangle product closes inside clans only") {
  const auto v = vinberg_cone();
  for (int q = 0; q < 10; ++q) {
    CHECK_NOTHROW(triangle_product(random_vector(v), random_vector(v)));
  }
  const auto m = vinberg_mirrored();
  const auto x = StructuredMatrix(m, (Vector(5) << 0, 0, 0, 1, 1).finished());
  CHECK_THROWS_AS(triangle_product(x, x), ClosureViolation);
}

TEST_CASE("structure creation rejects malformed bases") {
  CHECK_THROWS_AS(ConeStructure::create("x", BlockPartition({1, 1}), {BlockSpace{0, 1, {Matrix::Ones(1, 1)}}}),
                  InvalidInput);
  CHECK_THROWS_AS(ConeStructure::create("x", BlockPartition({1, 1}), {BlockSpace{1, 0, {Matrix::Ones(2, 1)}}}),
                  InvalidInput);
  CHECK_THROWS_AS(ConeStructure::create("x", BlockPartition({2, 1}),
                                        {BlockSpace{1, 0, {Matrix::Ones(1, 2), 2.0 * Matrix::Ones(1, 2)}}}),
                  InvalidInput);
  CHECK_THROWS_AS(BlockPartition({1, 0}), InvalidInput);
}

TEST_CASE("non-orthonormal bases are orthonormalized") {
  Matrix a(1, 2), b(1, 2);
  a << 3, 0;
  b << 1, 1;
  const auto c = ConeStructure::create("skew", BlockPartition({2, 1}), {BlockSpace{1, 0, {a, b}}});
  const auto& basis = c->basis(1, 0);
  REQUIRE(basis.size() == 2);
  CHECK(block_inner(basis[0], basis[0]) == doctest::Approx(1.0));
  CHECK(block_inner(basis[1], basis[1]) == doctest::Approx(1.0));
  CHECK(std::abs(block_inner(basis[0], basis[1])) < 1e-15);
  CHECK(validate_axioms(*c).all_pass());
}

TEST_CASE("coordinate names follow the documented order") {
  const auto names = vinberg_cone()->coordinate_names();
  const std::vector<std::string> expected{"d1", "d2", "d3", "b_3_1_1", "b_3_2_1"};
  CHECK(names == expected);
}

TEST_CASE("JSON export round-trips bit for bit") {
  std::vector<ConePtr> cones = zoo();
  cones.push_back(direct_sum(sym_cone(1), lorentz_cone(2)));
  for (const auto& c : cones) {
    CAPTURE(c->name());
    const auto j = cone_to_json(*c);
    const auto back = cone_from_json(j);
    CHECK(back->same_as(*c));
    CHECK(cone_to_json(*back) == j);
  }
  const auto path = std::filesystem::temp_directory_path() / "homocone_cone_roundtrip.json";
  save_cone_file(*vinberg_cone(), path.string());
  CHECK(load_cone_file(path.string())->same_as(*vinberg_cone()));
  std::filesystem::remove(path);
}

TEST_CASE("malformed cone JSON is rejected") {
  CHECK_THROWS_AS(cone_from_json(nlohmann::json::parse(R"({"name":"x"})")), InvalidInput);
  CHECK_THROWS_AS(cone_from_json(nlohmann::json::parse(R"({"name":"x","partition":[1,1],
      "blocks":[{"l":2,"k":1,"basis":[[1,2]]}]})")),
                  InvalidInput);
  CHECK_THROWS_AS(load_cone_file("/nonexistent/cone.json"), InvalidInput);
}

TEST_CASE("operations across structures are refused") {
  const auto a = random_vector(sym_cone(3));
  const auto b = random_vector(vinberg_cone());
  CHECK_THROWS_AS(a + b, InvalidInput);
  CHECK_THROWS_AS(inner_product(a, b), InvalidInput);
}
