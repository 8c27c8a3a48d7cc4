#pragma once
// Brute-force reference computations used only by the tests. Nothing here
// calls into the Smith form or group-ring code it is checking.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using i64 = std::int64_t;

inline i64 pw(i64 b, int e) {
    i64 r = 1;
    while (e-- > 0) r *= b;
    return r;
}

inline i64 md(i64 x, i64 m) {
    i64 r = x % m;
    return r < 0 ? r + m : r;
}

// Product in Z[X]/(X^N - 1) (mod > 0: coefficients reduced mod `mod`).
// Full polynomial product first, then fold exponents.
inline std::vector<i64> convolve(const std::vector<i64>& u, const std::vector<i64>& v, i64 mod) {
    const std::size_t N = u.size();
    std::vector<i64> full(2 * N, 0);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            i64 t = mod > 0 ? md(md(u[i], mod) * md(v[j], mod), mod) : u[i] * v[j];
            full[i + j] = mod > 0 ? md(full[i + j] + t, mod) : full[i + j] + t;
        }
    std::vector<i64> out(N, 0);
    for (std::size_t k = 0; k < full.size(); ++k) out[k % N] = mod > 0 ? md(out[k % N] + full[k], mod) : out[k % N] + full[k];
    return out;
}

// Elements of (Z/q)^N encoded as base-q integers.
inline i64 encode(const std::vector<i64>& v, i64 q) {
    i64 c = 0;
    for (std::size_t i = v.size(); i-- > 0;) c = c * q + md(v[i], q);
    return c;
}

inline std::vector<i64> decode(i64 c, std::size_t N, i64 q) {
    std::vector<i64> v(N);
    for (std::size_t i = 0; i < N; ++i) {
        v[i] = c % q;
        c /= q;
    }
    return v;
}

// Subgroup of (Z/q)^N generated by `gens`, by closure under addition.
inline std::set<i64> span(const std::vector<std::vector<i64>>& gens, std::size_t N, i64 q) {
    std::set<i64> seen{0};
    std::vector<i64> frontier{0};
    while (!frontier.empty()) {
        std::vector<i64> next;
        for (i64 c : frontier) {
            auto v = decode(c, N, q);
            for (const auto& g : gens) {
                std::vector<i64> w(N);
                for (std::size_t i = 0; i < N; ++i) w[i] = md(v[i] + g[i], q);
                i64 e = encode(w, q);
                if (seen.insert(e).second) next.push_back(e);
            }
        }
        frontier.swap(next);
    }
    return seen;
}

inline int log_p(i64 x, i64 p) {
    int e = 0;
    while (x > 1) {
        x /= p;
        ++e;
    }
    return e;
}

// log_p |(Z/p^K)^N / span(rows)|
inline int cokernel_log_order(const std::vector<std::vector<i64>>& rows, std::size_t N, i64 p, int K) {
    const i64 q = pw(p, K);
    return static_cast<int>(N) * K - log_p(static_cast<i64>(span(rows, N, q).size()), p);
}

// Elementary divisors of a finite abelian p-group from the counts
// c_k = log_p #{x : p^k x = 0}.
inline std::vector<int> divisors_from_counts(const std::vector<int>& c) {
    std::vector<int> out;
    for (std::size_t k = 0; k + 1 < c.size(); ++k) {
        const int above = c[k + 1] - c[k];  // number of cyclic factors of exponent > k
        const int above_next = k + 2 < c.size() ? c[k + 2] - c[k + 1] : 0;
        for (int t = 0; t < above - above_next; ++t) out.push_back(static_cast<int>(k) + 1);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Kernel of phi : (+) Z/p^{dom_i} -> (+) Z/p^{tgt_j}, enumerated.
inline std::vector<int> finite_kernel(i64 p, const std::vector<int>& dom, const std::vector<int>& tgt,
                                      const std::vector<std::vector<i64>>& phi) {
    std::vector<std::vector<i64>> ker;
    std::vector<i64> x(dom.size(), 0);
    int emax = 0;
    for (int e : dom) emax = std::max(emax, e);
    while (true) {
        bool zero = true;
        for (std::size_t j = 0; j < tgt.size() && zero; ++j) {
            i64 s = 0;
            for (std::size_t i = 0; i < dom.size(); ++i) s += x[i] * phi[i][j];
            zero = md(s, pw(p, tgt[j])) == 0;
        }
        if (zero) ker.push_back(x);
        std::size_t i = 0;
        while (i < dom.size() && ++x[i] == pw(p, dom[i])) x[i++] = 0;
        if (i == dom.size()) break;
    }
    std::vector<int> counts;
    for (int k = 0; k <= emax + 1; ++k) {
        i64 c = 0;
        for (const auto& v : ker) {
            bool killed = true;
            for (std::size_t i = 0; i < v.size() && killed; ++i) killed = md(v[i] * pw(p, k), pw(p, dom[i])) == 0;
            c += killed;
        }
        counts.push_back(log_p(c, p));
    }
    return divisors_from_counts(counts);
}

// A finite module M = (Z/p^e)^N with sigma acting by v -> v * S.
struct FiniteModule {
    i64 p;
    int e;
    std::size_t N;
    std::vector<std::vector<i64>> S;
};

inline std::vector<i64> act(const FiniteModule& M, const std::vector<i64>& v) {
    const i64 q = pw(M.p, M.e);
    std::vector<i64> w(M.N, 0);
    for (std::size_t i = 0; i < M.N; ++i)
        for (std::size_t j = 0; j < M.N; ++j) w[j] = md(w[j] + v[i] * M.S[i][j], q);
    return w;
}

// Apply B = sum b_k s^k.
inline std::vector<i64> apply(const FiniteModule& M, const std::vector<i64>& B, const std::vector<i64>& v) {
    const i64 q = pw(M.p, M.e);
    std::vector<i64> out(M.N, 0), cur = v;
    for (std::size_t k = 0; k < B.size(); ++k) {
        for (std::size_t j = 0; j < M.N; ++j) out[j] = md(out[j] + B[k] * cur[j], q);
        cur = act(M, cur);
    }
    return out;
}

// Random sigma = I + pX with sigma^{p^n} = I, or empty on failure.
inline FiniteModule random_module(std::mt19937_64& rng, i64 p, int e, std::size_t N, int n) {
    const i64 q = pw(p, e);
    std::uniform_int_distribution<i64> dist(0, q - 1);
    for (int attempt = 0; attempt < 50; ++attempt) {
        FiniteModule M{p, e, N, std::vector<std::vector<i64>>(N, std::vector<i64>(N, 0))};
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) M.S[i][j] = md((i == j ? 1 : 0) + p * dist(rng), q);
        bool ok = true;
        for (std::size_t i = 0; i < N && ok; ++i) {
            std::vector<i64> v(N, 0);
            v[i] = 1;
            std::vector<i64> w = v;
            for (i64 s = 0; s < pw(p, n); ++s) w = act(M, w);
            ok = w == v;
        }
        if (ok) return M;
    }
    return FiniteModule{p, e, 0, {}};
}

// |ker B / im C| on a finite module, as a log_p, plus its divisors.
struct HResult {
    int log_order = 0;
    std::vector<int> divisors;
};

inline HResult cohomology(const FiniteModule& M, const std::vector<i64>& B, const std::vector<i64>& C) {
    const i64 q = pw(M.p, M.e);
    const i64 size = pw(q, static_cast<int>(M.N));
    std::vector<std::vector<i64>> ker;
    std::set<i64> im;
    for (i64 c = 0; c < size; ++c) {
        auto v = decode(c, M.N, q);
        auto b = apply(M, B, v);
        if (std::all_of(b.begin(), b.end(), [](i64 x) { return x == 0; })) ker.push_back(v);
        im.insert(encode(apply(M, C, v), q));
    }
    HResult r;
    r.log_order = log_p(static_cast<i64>(ker.size()), M.p) - log_p(static_cast<i64>(im.size()), M.p);
    // structure of ker/im: count x in ker with p^k x in im
    std::vector<int> counts;
    for (int k = 0; k <= M.e + 1; ++k) {
        i64 cnt = 0;
        for (const auto& v : ker) {
            std::vector<i64> w(M.N);
            for (std::size_t i = 0; i < M.N; ++i) w[i] = md(v[i] * pw(M.p, k), q);
            cnt += im.count(encode(w, q));
        }
        counts.push_back(log_p(cnt, M.p) - log_p(static_cast<i64>(im.size()), M.p));
    }
    r.divisors = divisors_from_counts(counts);
    return r;
}

// v_p(k^{p^m} - 1) for k = 1 + kappa p^a, by repeated multiplication modulo
// a large power of p.
inline int omega_by_power(i64 p, int m, int a, i64 kappa) {
    const int E = p == 2 ? 60 : (p == 3 ? 37 : 25);
    const auto mod = static_cast<unsigned __int128>(pw(p, E));
    auto red = [&](__int128 x) {
        __int128 r = x % static_cast<__int128>(mod);
        return static_cast<unsigned __int128>(r < 0 ? r + static_cast<__int128>(mod) : r);
    };
    unsigned __int128 k = red(1 + static_cast<__int128>(kappa) * pw(p, a));
    unsigned __int128 x = 1;
    for (i64 i = 0; i < pw(p, m); ++i) x = x * k % mod;
    unsigned __int128 v = (x + mod - 1) % mod;
    if (v == 0) return E;
    int e = 0;
    while (v % static_cast<unsigned __int128>(p) == 0) {
        v /= static_cast<unsigned __int128>(p);
        ++e;
    }
    return e;
}

}  // namespace oracle
