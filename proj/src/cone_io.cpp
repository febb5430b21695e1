#include "homocone/cone_io.hpp"

#include <fstream>

#include "homocone/errors.hpp"

namespace homocone {

ConePtr cone_from_json(const nlohmann::json& j, const Tolerances& tol) {
  try {
    const std::string name = j.value("name", std::string("unnamed"));
    BlockPartition part(j.at("partition").get<std::vector<int>>());
    std::vector<BlockSpace> blocks;
    if (j.contains("blocks")) {
      for (const auto& b : j.at("blocks")) {
        BlockSpace space;
        space.l = b.at("l").get<int>() - 1;
        space.k = b.at("k").get<int>() - 1;
        if (space.l < 0 || space.l >= part.rank() || space.k < 0 || space.k >= space.l) {
          throw InvalidInput("block indices must satisfy 1 <= k < l <= r");
        }
        const int rows = part.size(space.l);
        const int cols = part.size(space.k);
        for (const auto& flat : b.at("basis")) {
          const auto v = flat.get<std::vector<double>>();
          if (static_cast<int>(v.size()) != rows * cols) {
            throw InvalidInput("basis element of V_" + std::to_string(space.l + 1) +
                               std::to_string(space.k + 1) + " needs " +
                               std::to_string(rows * cols) + " entries");
          }
          Matrix a(rows, cols);
          for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) a(r, c) = v[static_cast<std::size_t>(r * cols + c)];
          space.basis.push_back(std::move(a));
        }
        blocks.push_back(std::move(space));
      }
    }
    return ConeStructure::create(name, std::move(part), std::move(blocks), tol);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("cone description: ") + e.what());
  }
}

nlohmann::json cone_to_json(const ConeStructure& c) {
  nlohmann::json j;
  j["name"] = c.name();
  j["partition"] = c.partition().sizes();
  j["blocks"] = nlohmann::json::array();
  for (int l = 1; l < c.rank(); ++l) {
    for (int k = 0; k < l; ++k) {
      const auto& basis = c.basis(l, k);
      if (basis.empty()) continue;
      nlohmann::json b;
      b["l"] = l + 1;
      b["k"] = k + 1;
      b["basis"] = nlohmann::json::array();
      for (const auto& a : basis) {
        std::vector<double> flat;
        for (int r = 0; r < a.rows(); ++r)
          for (int col = 0; col < a.cols(); ++col) flat.push_back(a(r, col));
        b["basis"].push_back(flat);
      }
      j["blocks"].push_back(std::move(b));
    }
  }
  return j;
}

ConePtr load_cone_file(const std::string& path, const Tolerances& tol) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open cone file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("cone file '" + path + "': " + e.what());
  }
  return cone_from_json(j, tol);
}

void save_cone_file(const ConeStructure& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << cone_to_json(c).dump(2) << '\n';
}

}  // namespace homocone
