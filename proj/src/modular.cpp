#include "zpg/modular.hpp"

#include <limits>

namespace zpg {

bool is_prime(i64 x) {
    if (x < 2) return false;
    for (i64 d = 2; d * d <= x; ++d)
        if (x % d == 0) return false;
    return true;
}

i64 checked_add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in addition");
    return r;
}

i64 checked_mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in multiplication");
    return r;
}

i64 ipow(i64 base, int e) {
    if (e < 0) throw std::domain_error("negative exponent");
    i64 r = 1;
    for (int i = 0; i < e; ++i) r = checked_mul(r, base);
    return r;
}

int valuation(i64 x, i64 p) {
    if (x == 0) throw std::domain_error("valuation of zero");
    int v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

int max_precision(i64 p) {
    const i64 limit = i64{1} << 62;
    int K = 0;
    i64 q = 1;
    while (q <= limit / p) {
        q *= p;
        ++K;
    }
    return K;
}

Zpk::Zpk(i64 p, int K) : p_(p), K_(K) {
    if (!is_prime(p)) throw std::invalid_argument("modulus base must be prime");
    if (K < 1) throw std::invalid_argument("precision K must be at least 1");
    if (K > max_precision(p))
        throw PrecisionError("precision " + std::to_string(K) + " exceeds 64-bit range for p=" +
                             std::to_string(p));
    mod_ = ipow(p, K);
}

int Zpk::val(i64 a) const {
    a = reduce(a);
    if (a == 0) return K_;
    int v = 0;
    while (a % p_ == 0) {
        a /= p_;
        ++v;
    }
    return v;
}

i64 Zpk::inv(i64 a) const {
    a = reduce(a);
    if (a % p_ == 0) throw std::domain_error("residue is not a unit");
    // extended Euclid on (a, mod)
    __int128 r0 = mod_, r1 = a, t0 = 0, t1 = 1;
    while (r1 != 0) {
        __int128 q = r0 / r1;
        __int128 tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    return reduce(static_cast<i64>(t0 % mod_));
}

i64 Zpk::pow_p(int e) const {
    if (e >= K_) return 0;
    return ipow(p_, e);
}

ModMatrix ModMatrix::identity(std::size_t n) {
    ModMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

std::vector<i64> ModMatrix::row(std::size_t r) const {
    return {a.begin() + static_cast<std::ptrdiff_t>(r * cols),
            a.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols)};
}

void ModMatrix::append_row(const std::vector<i64>& v) {
    if (rows == 0 && cols == 0) cols = v.size();
    if (v.size() != cols) throw std::invalid_argument("row length mismatch");
    a.insert(a.end(), v.begin(), v.end());
    ++rows;
}

ModMatrix mat_mul(const ModMatrix& x, const ModMatrix& y, const Zpk& R) {
    if (x.cols != y.rows) throw std::invalid_argument("matrix shape mismatch");
    ModMatrix z(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            i64 xv = x(i, k);
            if (xv == 0) continue;
            for (std::size_t j = 0; j < y.cols; ++j) z(i, j) = R.add(z(i, j), R.mul(xv, y(k, j)));
        }
    return z;
}

std::vector<i64> vec_mat(const std::vector<i64>& v, const ModMatrix& m, const Zpk& R) {
    if (v.size() != m.rows) throw std::invalid_argument("vector/matrix shape mismatch");
    std::vector<i64> out(m.cols, 0);
    for (std::size_t k = 0; k < m.rows; ++k) {
        if (v[k] == 0) continue;
        for (std::size_t j = 0; j < m.cols; ++j) out[j] = R.add(out[j], R.mul(v[k], m(k, j)));
    }
    return out;
}

ModMatrix reduce_matrix(const ModMatrix& m, const Zpk& R) {
    ModMatrix out = m;
    for (auto& x : out.a) x = R.reduce(x);
    return out;
}

}  // namespace zpg
