#include "zpg/rational.hpp"

#include <stdexcept>

namespace zpg {

std::size_t rational_rank(QMatrix m) {
    if (m.empty()) return 0;
    const std::size_t cols = m.front().size();
    for (const auto& r : m)
        if (r.size() != cols) throw std::invalid_argument("rational_rank: ragged matrix");
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
        std::size_t piv = rank;
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t r = rank + 1; r < m.size(); ++r) {
            if (m[r][c] == 0) continue;
            mpq_class f = m[r][c] / m[rank][c];
            for (std::size_t j = c; j < cols; ++j) m[r][j] -= f * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

}  // namespace zpg
