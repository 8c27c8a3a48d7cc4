#pragma once

#include <gmpxx.h>

#include <vector>

namespace zpg {

using QMatrix = std::vector<std::vector<mpq_class>>;

// Rank over Q by Gaussian elimination on exact rationals. Rows may be ragged
// only if empty; otherwise all rows share one length.
std::size_t rational_rank(QMatrix m);

}  // namespace zpg
