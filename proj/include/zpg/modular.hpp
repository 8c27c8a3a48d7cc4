#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace zpg {

using i64 = std::int64_t;

class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bool is_prime(i64 x);

// Exact p^e; throws std::overflow_error when the result leaves int64.
i64 ipow(i64 base, int e);

// p-adic valuation of a nonzero integer.
int valuation(i64 x, i64 p);

i64 checked_add(i64 a, i64 b);
i64 checked_mul(i64 a, i64 b);

// The ring Z/p^K with representatives in [0, p^K).
class Zpk {
public:
    Zpk() = default;
    Zpk(i64 p, int K);

    i64 p() const { return p_; }
    int K() const { return K_; }
    i64 modulus() const { return mod_; }

    i64 reduce(i64 x) const {
        i64 r = x % mod_;
        return r < 0 ? r + mod_ : r;
    }
    i64 add(i64 a, i64 b) const { return reduce(a + b); }
    i64 sub(i64 a, i64 b) const { return reduce(a - b); }
    i64 neg(i64 a) const { return a == 0 ? 0 : mod_ - a; }
    i64 mul(i64 a, i64 b) const {
        __int128 r = static_cast<__int128>(a) * b % mod_;
        return r < 0 ? static_cast<i64>(r + mod_) : static_cast<i64>(r);
    }

    // Valuation of a residue; K for zero.
    int val(i64 a) const;
    // Inverse of a unit; throws std::domain_error if p | a.
    i64 inv(i64 a) const;
    // p^e reduced, with p^e = 0 once e >= K.
    i64 pow_p(int e) const;

private:
    i64 p_ = 2;
    int K_ = 1;
    i64 mod_ = 2;
};

// Largest K with p^K < 2^62.
int max_precision(i64 p);

// Dense row-major matrix of residues.
struct ModMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<i64> a;

    ModMatrix() = default;
    ModMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

    static ModMatrix identity(std::size_t n);

    i64& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    i64 operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    std::vector<i64> row(std::size_t r) const;
    void append_row(const std::vector<i64>& v);
};

ModMatrix mat_mul(const ModMatrix& x, const ModMatrix& y, const Zpk& R);
std::vector<i64> vec_mat(const std::vector<i64>& v, const ModMatrix& m, const Zpk& R);
ModMatrix reduce_matrix(const ModMatrix& m, const Zpk& R);

}  // namespace zpg
