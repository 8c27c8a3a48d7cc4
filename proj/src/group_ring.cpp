#include "zpg/group_ring.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace zpg {

RingContext RingContext::truncated(i64 p, int n, int K) {
    RingContext c{p, n, K, CoeffMode::Truncated};
    validate_context(c);
    return c;
}

RingContext RingContext::exact(i64 p, int n) {
    RingContext c{p, n, 0, CoeffMode::Exact};
    validate_context(c);
    return c;
}

i64 RingContext::order() const { return ipow(p, n); }

Zpk RingContext::ring() const {
    if (mode != CoeffMode::Truncated) throw std::logic_error("exact context has no residue ring");
    return Zpk(p, K);
}

void validate_context(const RingContext& ctx) {
    if (!is_prime(ctx.p)) throw std::invalid_argument("p must be prime");
    if (ctx.n < 1) throw std::invalid_argument("n must be at least 1");
    if (ipow(ctx.p, ctx.n) > (i64{1} << 16)) throw std::invalid_argument("group order too large");
    if (ctx.mode == CoeffMode::Truncated) (void)Zpk(ctx.p, ctx.K);
}

namespace {

void require_same(const GroupRingElem& u, const GroupRingElem& v) {
    if (!(u.ctx() == v.ctx())) throw std::invalid_argument("group ring context mismatch");
}

i64 fold_add(const RingContext& ctx, i64 a, i64 b) {
    if (ctx.mode == CoeffMode::Exact) return checked_add(a, b);
    return Zpk(ctx.p, ctx.K).add(a, b);
}

}  // namespace

GroupRingElem gre_make(const RingContext& ctx, const std::vector<i64>& coeffs) {
    validate_context(ctx);
    const auto N = static_cast<std::size_t>(ctx.order());
    GroupRingElem e;
    e.ctx_ = ctx;
    e.c_.assign(N, 0);
    if (ctx.mode == CoeffMode::Exact) {
        for (std::size_t i = 0; i < coeffs.size(); ++i) e.c_[i % N] = checked_add(e.c_[i % N], coeffs[i]);
    } else {
        Zpk R = ctx.ring();
        for (std::size_t i = 0; i < coeffs.size(); ++i) e.c_[i % N] = R.add(e.c_[i % N], R.reduce(coeffs[i]));
    }
    return e;
}

GroupRingElem gre_zero(const RingContext& ctx) { return gre_make(ctx, {}); }

GroupRingElem gre_constant(const RingContext& ctx, i64 c) { return gre_make(ctx, {c}); }

GroupRingElem gre_sigma(const RingContext& ctx, i64 j) {
    i64 N = ctx.order();
    j %= N;
    if (j < 0) j += N;
    std::vector<i64> c(static_cast<std::size_t>(j) + 1, 0);
    c[static_cast<std::size_t>(j)] = 1;
    return gre_make(ctx, c);
}

bool GroupRingElem::is_zero() const {
    for (i64 x : c_)
        if (x != 0) return false;
    return true;
}

int GroupRingElem::degree() const {
    for (std::size_t i = c_.size(); i-- > 0;)
        if (c_[i] != 0) return static_cast<int>(i);
    return -1;
}

GroupRingElem GroupRingElem::operator+(const GroupRingElem& o) const {
    require_same(*this, o);
    GroupRingElem r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = fold_add(ctx_, c_[i], o.c_[i]);
    return r;
}

GroupRingElem GroupRingElem::operator-() const {
    GroupRingElem r = *this;
    if (ctx_.mode == CoeffMode::Exact) {
        for (auto& x : r.c_) x = checked_mul(x, -1);
    } else {
        Zpk R = ctx_.ring();
        for (auto& x : r.c_) x = R.neg(x);
    }
    return r;
}

GroupRingElem GroupRingElem::operator-(const GroupRingElem& o) const { return *this + (-o); }

GroupRingElem GroupRingElem::operator*(const GroupRingElem& o) const { return gre_mul(*this, o); }

GroupRingElem GroupRingElem::scaled(i64 c) const { return gre_mul(*this, gre_constant(ctx_, c)); }

GroupRingElem GroupRingElem::in_context(const RingContext& target) const {
    if (target.p != ctx_.p || target.n != ctx_.n) throw std::invalid_argument("different group");
    return gre_make(target, c_);
}

GroupRingElem gre_mul(const GroupRingElem& u, const GroupRingElem& v) {
    require_same(u, v);
    const RingContext& ctx = u.ctx();
    const std::size_t N = u.size();
    std::vector<i64> out(N, 0);
    if (ctx.mode == CoeffMode::Exact) {
        for (std::size_t i = 0; i < N; ++i) {
            if (u.coeff(i) == 0) continue;
            for (std::size_t j = 0; j < N; ++j) {
                std::size_t k = (i + j) % N;
                out[k] = checked_add(out[k], checked_mul(u.coeff(i), v.coeff(j)));
            }
        }
    } else {
        Zpk R = ctx.ring();
        for (std::size_t i = 0; i < N; ++i) {
            if (u.coeff(i) == 0) continue;
            for (std::size_t j = 0; j < N; ++j) {
                std::size_t k = (i + j) % N;
                out[k] = R.add(out[k], R.mul(u.coeff(i), v.coeff(j)));
            }
        }
    }
    return gre_make(ctx, out);
}

i64 gre_eval_one(const GroupRingElem& u) {
    i64 s = 0;
    for (i64 c : u.coeffs()) s = fold_add(u.ctx(), s, c);
    return s;
}

GroupRingElem gre_special(const RingContext& ctx, Special which, int m) {
    validate_context(ctx);
    if (which != Special::N && which != Special::A && (m < 0 || m > ctx.n))
        throw std::out_of_range("tower index m must satisfy 0 <= m <= n");
    const i64 N = ctx.order();
    std::vector<i64> c(static_cast<std::size_t>(N), 0);
    switch (which) {
    case Special::N:
        for (auto& x : c) x = 1;
        break;
    case Special::A:
        for (i64 k = 0; k < N; ++k) c[static_cast<std::size_t>(k)] = k;
        break;
    case Special::S:
        for (i64 k = 0; k < ipow(ctx.p, m); ++k) c[static_cast<std::size_t>(k)] = 1;
        break;
    case Special::Am: {
        i64 step = ipow(ctx.p, m);
        for (i64 k = 0; k < ipow(ctx.p, ctx.n - m); ++k) c[static_cast<std::size_t>(k * step)] = k;
        break;
    }
    case Special::Nm: {
        i64 step = ipow(ctx.p, m);
        for (i64 k = 0; k < ipow(ctx.p, ctx.n - m); ++k) c[static_cast<std::size_t>(k * step)] = 1;
        break;
    }
    }
    return gre_make(ctx, c);
}

DivMod gre_divmod(const GroupRingElem& u, const GroupRingElem& f) {
    require_same(u, f);
    const RingContext& ctx = u.ctx();
    int df = f.degree();
    if (df < 0) throw std::domain_error("division by zero");
    i64 lc = f.coeff(static_cast<std::size_t>(df));
    i64 lc_inv = 0;
    if (ctx.mode == CoeffMode::Exact) {
        if (lc != 1 && lc != -1)
            throw std::domain_error("leading coefficient must be +-1 for exact-mode division");
        lc_inv = lc;
    } else {
        Zpk R = ctx.ring();
        if (lc % ctx.p == 0) throw std::domain_error("leading coefficient is not a unit mod p");
        lc_inv = R.inv(lc);
    }
    std::vector<i64> r = u.coeffs();
    std::vector<i64> q(u.size(), 0);
    auto mulc = [&](i64 a, i64 b) {
        return ctx.mode == CoeffMode::Exact ? checked_mul(a, b) : ctx.ring().mul(a, b);
    };
    for (int i = u.degree(); i >= df; --i) {
        i64 c = mulc(r[static_cast<std::size_t>(i)], lc_inv);
        if (c == 0) continue;
        q[static_cast<std::size_t>(i - df)] = c;
        for (int j = 0; j <= df; ++j) {
            auto idx = static_cast<std::size_t>(i - df + j);
            r[idx] = fold_add(ctx, r[idx], mulc(-c, f.coeff(static_cast<std::size_t>(j))));
        }
    }
    return {gre_make(ctx, q), gre_make(ctx, r)};
}

bool ComponentElem::is_zero() const {
    for (i64 x : coeffs)
        if (x != 0) return false;
    return true;
}

int component_degree(i64 p, int k) {
    if (k == 0) return 1;
    return static_cast<int>(ipow(p, k) - ipow(p, k - 1));
}

ComponentElem gre_eval_component(const GroupRingElem& u, int k) {
    const RingContext& ctx = u.ctx();
    if (ctx.mode != CoeffMode::Exact) throw std::invalid_argument("component evaluation needs exact mode");
    if (k < 0 || k > ctx.n) throw std::out_of_range("component index out of range");
    ComponentElem out{ctx.p, k, {}};
    if (k == 0) {
        out.coeffs = {gre_eval_one(u)};
        return out;
    }
    // fold mod X^{p^k} - 1, then reduce by the monic P_k
    const auto pk = static_cast<std::size_t>(ipow(ctx.p, k));
    const auto step = static_cast<std::size_t>(ipow(ctx.p, k - 1));
    const auto deg = static_cast<std::size_t>(component_degree(ctx.p, k));
    std::vector<i64> c(pk, 0);
    for (std::size_t i = 0; i < u.size(); ++i) c[i % pk] = checked_add(c[i % pk], u.coeff(i));
    for (std::size_t i = pk; i-- > deg;) {
        i64 top = c[i];
        if (top == 0) continue;
        c[i] = 0;
        // X^deg = -(1 + X^step + ... + X^{(p-2) step}) mod P_k
        for (std::size_t j = 0; j + 1 < static_cast<std::size_t>(ctx.p); ++j) {
            std::size_t idx = i - deg + j * step;
            c[idx] = checked_add(c[idx], -top);
        }
    }
    c.resize(deg);
    out.coeffs = std::move(c);
    return out;
}

std::string to_text(const GroupRingElem& u) {
    std::ostringstream os;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (k) os << " + ";
        os << u.coeff(k);
        if (k == 1) os << "*s";
        if (k > 1) os << "*s^" << k;
    }
    return os.str();
}

GroupRingElem from_text(const RingContext& ctx, const std::string& text) {
    // terms "c", "c*s", "c*s^k" separated by '+'; a leading '-' belongs to c
    std::vector<i64> coeffs(static_cast<std::size_t>(ctx.order()), 0);
    std::string t;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
    if (t.empty()) throw std::invalid_argument("empty group ring text");
    std::size_t pos = 0;
    while (pos <= t.size()) {
        std::size_t end = t.find('+', pos);
        if (end == std::string::npos) end = t.size();
        std::string term = t.substr(pos, end - pos);
        if (term.empty()) throw std::invalid_argument("malformed group ring text: " + text);
        std::size_t star = term.find('*');
        i64 c = 0;
        i64 power = 0;
        try {
            std::size_t used = 0;
            c = std::stoll(term.substr(0, star), &used);
            if (used != (star == std::string::npos ? term.size() : star)) throw std::invalid_argument("trailing");
            if (star != std::string::npos) {
                std::string rest = term.substr(star + 1);
                if (rest == "s") {
                    power = 1;
                } else if (rest.rfind("s^", 0) == 0) {
                    power = std::stoll(rest.substr(2), &used);
                    if (used != rest.size() - 2) throw std::invalid_argument("trailing");
                } else {
                    throw std::invalid_argument("bad monomial");
                }
            }
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed group ring term: " + term);
        }
        if (power < 0) throw std::invalid_argument("negative power in group ring text");
        i64 N = ctx.order();
        auto idx = static_cast<std::size_t>(power % N);
        coeffs[idx] = checked_add(coeffs[idx], c);
        if (end == t.size()) break;
        pos = end + 1;
    }
    return gre_make(ctx, coeffs);
}

}  // namespace zpg
