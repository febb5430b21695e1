#include "homocone/cone_zoo.hpp"

#include <charconv>

#include "homocone/errors.hpp"

namespace homocone {

namespace {

Matrix one() { return Matrix::Ones(1, 1); }

ConePtr rank3(std::string name, bool v21, bool v31, bool v32) {
  std::vector<BlockSpace> blocks;
  if (v21) blocks.push_back({1, 0, {one()}});
  if (v31) blocks.push_back({2, 0, {one()}});
  if (v32) blocks.push_back({2, 1, {one()}});
  return ConeStructure::create(std::move(name), BlockPartition({1, 1, 1}), std::move(blocks));
}

int parse_suffix(const std::string& name, std::size_t prefix) {
  int v = 0;
  const char* first = name.data() + prefix;
  const char* last = name.data() + name.size();
  const auto res = std::from_chars(first, last, v);
  if (first == last || res.ec != std::errc{} || res.ptr != last) {
    throw InvalidInput("unknown cone '" + name + "'");
  }
  return v;
}

}  // namespace

ConePtr sym_cone(int r) {
  if (r < 1) throw InvalidInput("sym_cone needs r >= 1");
  std::vector<BlockSpace> blocks;
  for (int l = 1; l < r; ++l)
    for (int k = 0; k < l; ++k) blocks.push_back({l, k, {one()}});
  return ConeStructure::create("sym" + std::to_string(r),
                               BlockPartition(std::vector<int>(static_cast<std::size_t>(r), 1)),
                               std::move(blocks));
}

ConePtr lorentz_cone(int m) {
  if (m < 1) throw InvalidInput("lorentz_cone needs m >= 1");
  std::vector<Matrix> rows;
  for (int j = 0; j < m; ++j) {
    Matrix a = Matrix::Zero(1, m);
    a(0, j) = 1.0;
    rows.push_back(std::move(a));
  }
  return ConeStructure::create("lorentz" + std::to_string(m), BlockPartition({m, 1}),
                               {BlockSpace{1, 0, std::move(rows)}});
}

ConePtr vinberg_cone() { return rank3("vinberg", false, true, true); }
ConePtr vinberg_mirrored() { return rank3("vinberg-mirrored", true, false, true); }
ConePtr vinberg_transposed() { return rank3("vinberg-transposed", true, true, false); }

ConePtr direct_sum(const ConePtr& a, const ConePtr& b) {
  std::vector<int> sizes = a->partition().sizes();
  const auto& sb = b->partition().sizes();
  sizes.insert(sizes.end(), sb.begin(), sb.end());
  const int ra = a->rank();
  std::vector<BlockSpace> blocks;
  for (int l = 1; l < ra; ++l)
    for (int k = 0; k < l; ++k)
      if (a->block_dim(l, k) > 0) blocks.push_back({l, k, a->basis(l, k)});
  for (int l = 1; l < b->rank(); ++l)
    for (int k = 0; k < l; ++k)
      if (b->block_dim(l, k) > 0) blocks.push_back({l + ra, k + ra, b->basis(l, k)});
  return ConeStructure::create(a->name() + "+" + b->name(), BlockPartition(std::move(sizes)),
                               std::move(blocks));
}

ConePtr zoo_cone(const std::string& name) {
  if (const auto plus = name.find('+'); plus != std::string::npos) {
    return direct_sum(zoo_cone(name.substr(0, plus)), zoo_cone(name.substr(plus + 1)));
  }
  if (name == "vinberg") return vinberg_cone();
  if (name == "vinberg-mirrored") return vinberg_mirrored();
  if (name == "vinberg-transposed") return vinberg_transposed();
  if (name.rfind("sym", 0) == 0) return sym_cone(parse_suffix(name, 3));
  if (name.rfind("lorentz", 0) == 0) return lorentz_cone(parse_suffix(name, 7));
  throw InvalidInput("unknown cone '" + name + "'");
}

std::vector<std::string> zoo_names() { return {"sym2", "sym3", "lorentz3", "vinberg"}; }

}  // namespace homocone
