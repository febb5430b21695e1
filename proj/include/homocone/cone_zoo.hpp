#pragma once

// Built-in cone structures used as ground truth by the tests and the CLI.

#include <string>
#include <vector>

#include "homocone/cone_model.hpp"

namespace homocone {

/// Sym_+(r): partition (1,...,1) with every V_lk = R.
ConePtr sym_cone(int r);

/// Rank-2 clan with partition (m, 1) and V_21 = Mat(1, m); a Lorentz cone of
/// dimension m + 2.
ConePtr lorentz_cone(int m);

/// The rank-3 Vinberg cone: V_21 = {0}, V_31 = V_32 = R.
ConePtr vinberg_cone();

/// Vinberg-like structures with the zero block moved. They are well formed
/// coordinate systems but fail the clan axioms (V1 and V2 respectively).
ConePtr vinberg_mirrored();
ConePtr vinberg_transposed();

/// Block-diagonal sum; every cross block is {0}.
ConePtr direct_sum(const ConePtr& a, const ConePtr& b);

/// Resolves "sym<r>", "lorentz<m>", "vinberg", "vinberg-mirrored",
/// "vinberg-transposed" and sums written "a+b". Throws InvalidInput.
ConePtr zoo_cone(const std::string& name);

/// Names of the cones that should satisfy every axiom.
std::vector<std::string> zoo_names();

}  // namespace homocone
