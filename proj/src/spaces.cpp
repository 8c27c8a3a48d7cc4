#include "zpg/spaces.hpp"

#include <algorithm>
#include <sstream>

namespace zpg {

namespace {

std::string join_constraints(const std::vector<std::string>& c) {
    std::string s = "constraint violated: ";
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "; " : "") + c[i];
    return s;
}

GroupRingElem one_minus_sigma(const RingContext& ctx) { return gre_constant(ctx, 1) - gre_sigma(ctx, 1); }

// sum_{k < p^n} (-s)^k
GroupRingElem alternating_sum(const RingContext& ctx) {
    std::vector<i64> c(static_cast<std::size_t>(ctx.order()));
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = k % 2 == 0 ? 1 : -1;
    return gre_make(ctx, c);
}

bool is_special_space(CaseId c) {
    return c == CaseId::Case3_3a || c == CaseId::Case3_3b || c == CaseId::Case6_norm || c == CaseId::Case6_nonorm;
}

bool xi_degenerate(CaseId c, const FormalSpaceParams& prm) {
    return c == CaseId::Case7 && prm.p == 2 && prm.a == 1 && prm.m == 0;
}

bool is_w_space(CaseId c) {
    return c == CaseId::Case1 || c == CaseId::Case2 || c == CaseId::Case3_2 || c == CaseId::Case4 || c == CaseId::Case5;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> constraints)
    : std::invalid_argument(join_constraints(constraints)), constraints_(std::move(constraints)) {}

std::string case_name(CaseId c) {
    switch (c) {
    case CaseId::Case1: return "Case1";
    case CaseId::Case2: return "Case2";
    case CaseId::Case3_2: return "Case3_2";
    case CaseId::Case3_3a: return "Case3_3a";
    case CaseId::Case3_3b: return "Case3_3b";
    case CaseId::Case4: return "Case4";
    case CaseId::Case5: return "Case5";
    case CaseId::Case6_norm: return "Case6_norm";
    case CaseId::Case6_nonorm: return "Case6_nonorm";
    case CaseId::Case7: return "Case7";
    }
    throw std::logic_error("unknown case");
}

const std::vector<CaseId>& all_cases() {
    static const std::vector<CaseId> v{CaseId::Case1,    CaseId::Case2,      CaseId::Case3_2,      CaseId::Case3_3a,
                                       CaseId::Case3_3b, CaseId::Case4,      CaseId::Case5,        CaseId::Case6_norm,
                                       CaseId::Case6_nonorm, CaseId::Case7};
    return v;
}

CaseId case_from_name(const std::string& s) {
    for (CaseId c : all_cases())
        if (case_name(c) == s) return c;
    throw std::invalid_argument("unknown case id: " + s);
}

int derived_l(i64 kappa) {
    if (kappa == -1) throw std::domain_error("l is undefined for kappa = -1");
    return valuation(1 + kappa, 2) + 2;
}

bool is_special_case_1(const FormalSpaceParams& prm) { return prm.p == 2 && prm.a == 1 && prm.m >= 1; }

std::vector<std::string> param_violations(const FormalSpaceParams& prm) {
    std::vector<std::string> v;
    if (!is_prime(prm.p)) v.push_back("p is prime");
    if (prm.n < 1) v.push_back("n ≥ 1");
    if (prm.a < 0 || prm.b < 0 || prm.m < 0) v.push_back("a, b, m ≥ 0");
    if (prm.b > std::min(prm.a, prm.n)) v.push_back("b ≤ min(a,n)");
    if (prm.m + prm.b > prm.n) v.push_back("m+b ≤ n");
    if (prm.a == 0 && prm.m != 0) v.push_back("m = 0 when a = 0");
    if (is_prime(prm.p) && prm.kappa % prm.p == 0) v.push_back("κ is a unit mod p");
    if (prm.p == 2 && prm.a == 1 && prm.kappa == -1) v.push_back("κ ≠ −1");
    if (prm.l && *prm.l < 2) v.push_back("l ≥ 2");
    if (v.empty() && is_special_case_1(prm) && prm.l && *prm.l != derived_l(prm.kappa))
        v.push_back("l = v_2(1+κ)+2");
    return v;
}

void validate_params(const FormalSpaceParams& prm) {
    auto v = param_violations(prm);
    if (!v.empty()) throw ValidationError(v);
}

Presentation make_W(const FormalSpaceParams& prm) {
    validate_params(prm);
    RingContext ctx = RingContext::exact(prm.p, prm.n);
    const i64 kpa = checked_mul(prm.kappa, ipow(prm.p, prm.a));
    GroupRingElem P = gre_constant(ctx, checked_add(1, kpa)) - gre_sigma(ctx, 1);
    GroupRingElem Q = gre_constant(ctx, -checked_mul(prm.kappa, ipow(prm.p, prm.a - prm.b)));
    GroupRingElem R = gre_sigma(ctx, ipow(prm.p, prm.m)) - gre_constant(ctx, 1);
    std::vector<std::string> names{"X", "S", "T"};
    return pres_make(ctx, names, {Row{Q, P, R}}, {0});
}

namespace {

void require(bool ok, const std::string& what, std::vector<std::string>& v) {
    if (!ok) v.push_back(what);
}

void check_case_params(CaseId c, const FormalSpaceParams& prm) {
    std::vector<std::string> v;
    if (is_special_space(c)) {
        require(prm.p == 2, "p = 2", v);
        require(prm.l.has_value() && *prm.l >= 2, "l ≥ 2", v);
        if (c == CaseId::Case3_3a || c == CaseId::Case3_3b)
            require(prm.n == 1, "n = 1", v);
        else
            require(prm.n >= 2, "n ≥ 2", v);
        if (!v.empty()) throw ValidationError(v);
        return;
    }
    v = param_violations(prm);
    // Case 7 reads m as the inertia exponent, so a = 0 allows m = n there
    if (c == CaseId::Case7) std::erase(v, std::string("m = 0 when a = 0"));
    switch (c) {
    case CaseId::Case1: require(prm.a == 0, "a = 0", v); break;
    case CaseId::Case2: require(prm.a >= 1 && prm.m == 0 && prm.b == 0, "a ≥ 1, m = 0, b = 0", v); break;
    case CaseId::Case3_2: require(prm.a >= 1 && prm.m == prm.n, "a ≥ 1, m = n", v); break;
    case CaseId::Case4: require(prm.a >= 1 && prm.m == 0 && prm.b >= 1, "a ≥ 1, m = 0, b ≥ 1", v); break;
    case CaseId::Case5: require(prm.a >= 1 && prm.m >= 1 && prm.m < prm.n, "a ≥ 1, 1 ≤ m < n", v); break;
    case CaseId::Case7: require(prm.n == prm.m + prm.b, "n=m+b", v); break;
    default: break;
    }
    if (!v.empty()) throw ValidationError(v);
}

}  // namespace

CaseId w_case_of(const FormalSpaceParams& prm) {
    if (prm.a == 0) return CaseId::Case1;
    if (prm.m == prm.n) return CaseId::Case3_2;
    if (prm.m == 0) return prm.b == 0 ? CaseId::Case2 : CaseId::Case4;
    return CaseId::Case5;
}

Presentation make_case_presentation(CaseId c, const FormalSpaceParams& prm) {
    check_case_params(c, prm);
    if (is_w_space(c)) return make_W(prm);
    RingContext ctx = RingContext::exact(prm.p, prm.n);
    if (c == CaseId::Case7) {
        const i64 kpa = checked_mul(prm.kappa, ipow(prm.p, prm.a));
        GroupRingElem P = gre_constant(ctx, checked_add(1, kpa)) - gre_sigma(ctx, 1);
        GroupRingElem Q = gre_constant(ctx, -checked_mul(prm.kappa, ipow(prm.p, prm.a - prm.b)));
        return pres_make(ctx, {"X", "S"}, {Row{Q, P}}, {0});
    }
    const int l = *prm.l;
    const GroupRingElem zero = gre_zero(ctx);
    const GroupRingElem two_l = gre_constant(ctx, ipow(2, l));
    const GroupRingElem minus_one_minus_sigma = -(gre_constant(ctx, 1) + gre_sigma(ctx, 1));
    switch (c) {
    case CaseId::Case3_3a:
        return pres_make(ctx, {"X", "S"}, {Row{gre_constant(ctx, -1), two_l}}, {0});
    case CaseId::Case3_3b:
        return pres_make(ctx, {"X", "S", "T"},
                         {Row{zero, one_minus_sigma(ctx).scaled(ipow(2, l - 1)), minus_one_minus_sigma}}, {0});
    case CaseId::Case6_norm:
        return pres_make(ctx, {"X", "S", "T"}, {Row{zero, two_l, minus_one_minus_sigma}}, {0});
    case CaseId::Case6_nonorm:
        return pres_make(ctx, {"X", "S", "T"}, {Row{gre_constant(ctx, -1), two_l, minus_one_minus_sigma}}, {0});
    default: break;
    }
    throw std::logic_error("unhandled case in make_case_presentation");
}

int expected_torsion_exponent(CaseId c, const FormalSpaceParams& prm) {
    if (is_special_space(c)) return *prm.l;
    if (c == CaseId::Case7 && prm.a == 0) return 0;
    if (is_special_case_1(prm) || (c == CaseId::Case7 && prm.p == 2 && prm.a == 1))
        return prm.m + derived_l(prm.kappa) - 1;
    return prm.a + prm.m;
}

InvariantReport expected_invariants(CaseId c, const FormalSpaceParams& prm) {
    check_case_params(c, prm);
    InvariantReport r;
    r.p = prm.p;
    const i64 order = ipow(prm.p, prm.n);
    const int t = expected_torsion_exponent(c, prm);
    if (t > 0) r.torsion_divisors = {t};
    if (!xi_degenerate(c, prm)) r.torsion_gen_exponent = t;
    r.h0_exponent = prm.n;
    r.h1_exponent = 0;
    std::vector<int> trivial(static_cast<std::size_t>(prm.n) + 1, 0);
    trivial[0] = 1;
    std::vector<int> reg_plus_one(static_cast<std::size_t>(prm.n) + 1, 1);
    reg_plus_one[0] = 2;
    if (c == CaseId::Case7 || c == CaseId::Case3_3a) {
        r.character = trivial;
        r.zp_rank = 1;
    } else {
        r.character = reg_plus_one;
        r.zp_rank = static_cast<std::size_t>(order) + 1;
    }
    PrecisionPair pp = space_precision(c, prm);
    r.K1 = pp.K1;
    r.K2 = pp.K2;
    return r;
}

ElementExpr torsion_generator_xi(const FormalSpaceParams& prm) {
    if (prm.n < 1 || prm.m < 0 || prm.m > prm.n) throw std::invalid_argument("torsion_generator_xi: need 0 <= m <= n");
    if (prm.n - prm.m - prm.b < 0)
        throw std::domain_error("torsion generator branch: P(1) does not divide Q(1)V(1); the two-generator branch is not implemented");
    RingContext ctx = RingContext::exact(prm.p, prm.n);
    GroupRingElem Nm = gre_special(ctx, Special::Nm, prm.m);
    GroupRingElem xexp = gre_constant(ctx, -ipow(prm.p, prm.n - prm.m - prm.b));
    return ElementExpr{{xexp, Nm, gre_zero(ctx)}};
}

std::optional<ElementExpr> case_torsion_generator(CaseId c, const FormalSpaceParams& prm, const Presentation& pres) {
    if (xi_degenerate(c, prm)) return std::nullopt;
    const RingContext& ctx = pres.ctx();
    ElementExpr e = element_identity(pres);
    if (is_special_space(c)) {
        e.exponents[pres.index_of("S")] = alternating_sum(ctx);
        return e;
    }
    ElementExpr xi = torsion_generator_xi(prm);
    e.exponents[pres.index_of("X")] = xi.exponents[0];
    e.exponents[pres.index_of("S")] = xi.exponents[1];
    return e;
}

PrecisionPair space_precision(CaseId c, const FormalSpaceParams& prm) {
    int bound = std::max(prm.a + prm.m, expected_torsion_exponent(c, prm)) + prm.n;
    return precision_from_k1(bound + kHeadroom);
}

int omega_exponent(i64 p, int m, int a, i64 kappa) {
    const int n = std::max(m, 1);
    RingContext ctx = RingContext::exact(p, n);
    GroupRingElem P = gre_constant(ctx, checked_add(1, checked_mul(kappa, ipow(p, a)))) - gre_sigma(ctx, 1);
    GroupRingElem R = gre_sigma(ctx, ipow(p, m)) - gre_constant(ctx, 1);
    Presentation pres = pres_make(ctx, {"S"}, {Row{P}, Row{R}});
    int K1 = a + m + n + kIdentityHeadroom;
    if (p == 2 && a == 1 && kappa != -1) K1 += derived_l(kappa);
    ModuleStructure s = module_structure(pres, K1, K1 + kSecondGap);
    if (!s.stabilized || s.zp_rank != 0) throw InstabilityError("omega module did not stabilize to a finite group");
    int t = 0;
    for (int e : s.torsion_divisors) t += e;
    return t;
}

std::string rewrite_item_name(RewriteItem it) {
    switch (it) {
    case RewriteItem::A: return "item a";
    case RewriteItem::B: return "item b";
    case RewriteItem::C: return "item c";
    case RewriteItem::D: return "item d";
    case RewriteItem::E: return "item e";
    }
    return "?";
}

GeneratorSubstitution rewrite_substitution(RewriteItem it, const FormalSpaceParams& prm) {
    RingContext ctx = RingContext::exact(prm.p, prm.n);
    auto c = [&](i64 v) { return gre_constant(ctx, v); };
    const i64 k = prm.kappa;
    GeneratorSubstitution s;
    switch (it) {
    case RewriteItem::A:  // X0 = X^k, Z = S^k, Y = T/S
        s.new_names = {"X0", "Z", "Y"};
        s.exponents = {{c(k), c(0), c(0)}, {c(0), c(k), c(0)}, {c(0), c(-1), c(1)}};
        break;
    case RewriteItem::B:  // Z = S/X
        s.new_names = {"X", "Z", "T"};
        s.exponents = {{c(1), c(0), c(0)}, {c(-1), c(1), c(0)}, {c(0), c(0), c(1)}};
        break;
    case RewriteItem::C:  // Z = S^k/X^k, Y = T/S
    case RewriteItem::E:
        s.new_names = {"X0", "Z", "Y"};
        s.exponents = {{c(1), c(0), c(0)}, {c(-k), c(k), c(0)}, {c(0), c(-1), c(1)}};
        break;
    case RewriteItem::D:  // Z = S^k/X^k
        s.new_names = {"X", "Z", "T"};
        s.exponents = {{c(1), c(0), c(0)}, {c(-k), c(k), c(0)}, {c(0), c(0), c(1)}};
        break;
    }
    return s;
}

std::optional<RewriteItem> applicable_item(const FormalSpaceParams& prm) {
    if (prm.a == 0 && prm.b == 0 && prm.m == 0) return RewriteItem::E;
    if (prm.m == 0 && prm.b == 0) return RewriteItem::C;
    if (prm.m == prm.n && prm.b == 0) return RewriteItem::D;
    if (prm.m == 0) return RewriteItem::A;
    if (prm.b == 0) return RewriteItem::B;
    return std::nullopt;
}

namespace {

bool item_applies(RewriteItem it, const FormalSpaceParams& prm) {
    switch (it) {
    case RewriteItem::A: return prm.m == 0;
    case RewriteItem::B: return prm.b == 0;
    case RewriteItem::C: return prm.m == 0 && prm.b == 0;
    case RewriteItem::D: return prm.m == prm.n && prm.b == 0;
    case RewriteItem::E: return prm.a == 0 && prm.b == 0 && prm.m == 0;
    }
    return false;
}

}  // namespace

Rewrite rewrite_reduction(const FormalSpaceParams& prm, std::optional<RewriteItem> item) {
    validate_params(prm);
    if (!item) item = applicable_item(prm);
    if (!item || !item_applies(*item, prm)) throw std::invalid_argument("no applicable rewrite item for these parameters");
    Rewrite rw;
    rw.item = *item;
    rw.pres = pres_substitute(make_W(prm), rewrite_substitution(*item, prm));
    rw.x_free = true;
    for (const auto& r : rw.pres.relations())
        if (!r[0].is_zero()) rw.x_free = false;
    std::ostringstream os;
    os << rewrite_item_name(*item) << ": generators (" << rw.pres.gen_names()[0] << ", " << rw.pres.gen_names()[1]
       << ", " << rw.pres.gen_names()[2] << ")";
    if (rw.x_free)
        os << "; relation is free of " << rw.pres.gen_names()[0] << ", so <" << rw.pres.gen_names()[0]
           << "> splits off as a direct summand";
    rw.notes = os.str();
    return rw;
}

}  // namespace zpg
