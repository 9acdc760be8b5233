#pragma once

#include <boost/dynamic_bitset.hpp>

#include <vector>

namespace primecvp {

using BitRow = boost::dynamic_bitset<>;

/// Basis of the left nullspace of a GF(2) matrix given by rows: each result
/// has one bit per input row and the selected rows XOR to zero. All rows
/// must have the same width.
std::vector<BitRow> gf2_nullspace(const std::vector<BitRow>& rows);

}  // namespace primecvp
