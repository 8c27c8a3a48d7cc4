#pragma once

#include <optional>
#include <vector>

#include "zpg/modular.hpp"

namespace zpg {

// Smith form U*M*V = diag(p^v_0, ..., p^v_{r-1}, 0, ...) over Z/p^K.
// Pivots are chosen with minimal valuation, ties broken by row-major position.
struct SmithForm {
    Zpk ring;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<int> pivots;  // valuations v_t < K, nondecreasing
    ModMatrix U, Uinv, V, Vinv;  // populated on request

    std::size_t rank() const { return pivots.size(); }
    // One exponent per ambient column: v_t for pivot slots, K for the rest.
    // The cokernel of M is the direct sum of Z/p^e over these.
    std::vector<int> column_exponents() const;
};

struct SmithOptions {
    bool row_transforms = false;
    bool column_transforms = false;
};

SmithForm smith(const ModMatrix& M, const Zpk& R, SmithOptions opts = {});

// Solve x*M = v over Z/p^K; nullopt when v is not in the row space.
std::optional<std::vector<i64>> solve_left(const ModMatrix& M, const std::vector<i64>& v, const Zpk& R);

// Log-order of the cokernel of M (sum of column exponents).
int cokernel_log_order(const ModMatrix& M, const Zpk& R);

// Kernel of a homomorphism between finite abelian p-groups
//   phi : (+)_i Z/p^{dom[i]} -> (+)_j Z/p^{tgt[j]},
// given by integer rows phi[i] = image of the i-th generator.
// Returns the elementary divisor exponents of the kernel (zeros dropped, sorted).
std::vector<int> finite_kernel(i64 p, const std::vector<int>& dom, const std::vector<int>& tgt,
                               const std::vector<std::vector<i64>>& phi);

}  // namespace zpg
