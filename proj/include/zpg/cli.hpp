#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "zpg/classifier.hpp"

namespace zpg {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitMismatch = 3;

// Desk-scale bounds for grids.
inline constexpr i64 kMaxGridPrime = 5;
inline constexpr int kMaxGridN = 3;
inline constexpr int kMaxGridAPlusM = 5;

// "p=2,3;n=1..2;a=0..3" -> {p: [2,3], n: [1,2], a: [0,1,2,3]}
using GridSpec = std::map<std::string, std::vector<i64>>;
GridSpec parse_grid(const std::string& spec);

// Valid descriptors of a sweep grid, in sweep order.
std::vector<ExtensionDescriptor> sweep_descriptors(const GridSpec& grid);

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zpg
