#pragma once

#include <string>
#include <utility>
#include <vector>

#include "zpg/modular.hpp"

namespace zpg {

enum class CoeffMode { Truncated, Exact };

// The cyclic group G = <s> of order p^n and the coefficient ring.
// Truncated mode works in Z/p^K; exact mode keeps int64 integers and
// throws on overflow.
struct RingContext {
    i64 p = 2;
    int n = 1;
    int K = 0;
    CoeffMode mode = CoeffMode::Exact;

    static RingContext truncated(i64 p, int n, int K);
    static RingContext exact(i64 p, int n);

    i64 order() const;  // p^n
    Zpk ring() const;   // Z/p^K, truncated mode only

    bool operator==(const RingContext&) const = default;
};

void validate_context(const RingContext& ctx);

class GroupRingElem {
public:
    GroupRingElem() = default;

    const RingContext& ctx() const { return ctx_; }
    const std::vector<i64>& coeffs() const { return c_; }
    i64 coeff(std::size_t k) const { return c_[k]; }
    std::size_t size() const { return c_.size(); }

    bool is_zero() const;
    int degree() const;  // -1 for zero

    GroupRingElem operator+(const GroupRingElem& o) const;
    GroupRingElem operator-(const GroupRingElem& o) const;
    GroupRingElem operator-() const;
    GroupRingElem operator*(const GroupRingElem& o) const;
    GroupRingElem scaled(i64 c) const;
    bool operator==(const GroupRingElem& o) const { return ctx_ == o.ctx_ && c_ == o.c_; }

    // Same coefficients read in another context of the same group
    // (exact -> truncated reduces; truncated -> exact keeps representatives).
    GroupRingElem in_context(const RingContext& target) const;

    friend GroupRingElem gre_make(const RingContext& ctx, const std::vector<i64>& coeffs);

private:
    RingContext ctx_;
    std::vector<i64> c_;
};

GroupRingElem gre_make(const RingContext& ctx, const std::vector<i64>& coeffs);
GroupRingElem gre_zero(const RingContext& ctx);
GroupRingElem gre_constant(const RingContext& ctx, i64 c);
GroupRingElem gre_sigma(const RingContext& ctx, i64 j);  // s^j, j taken mod p^n

GroupRingElem gre_mul(const GroupRingElem& u, const GroupRingElem& v);
i64 gre_eval_one(const GroupRingElem& u);

enum class Special { N, A, S, Am, Nm };
GroupRingElem gre_special(const RingContext& ctx, Special which, int m = 0);

struct DivMod {
    GroupRingElem quotient;
    GroupRingElem remainder;
};
DivMod gre_divmod(const GroupRingElem& u, const GroupRingElem& f);

// Image of u in Q[X]/(P_k), reduced to degree < deg P_k. Since P_k is monic
// the coefficients stay integral.
struct ComponentElem {
    i64 p = 2;
    int k = 0;
    std::vector<i64> coeffs;
    bool is_zero() const;
};
int component_degree(i64 p, int k);  // 1 for k = 0, p^k - p^(k-1) otherwise
ComponentElem gre_eval_component(const GroupRingElem& u, int k);

std::string to_text(const GroupRingElem& u);
GroupRingElem from_text(const RingContext& ctx, const std::string& text);

}  // namespace zpg
