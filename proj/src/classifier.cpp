#include "zpg/classifier.hpp"

#include <algorithm>

namespace zpg {

namespace {

bool two_a1(const ExtensionDescriptor& d) { return d.p == 2 && d.a == 1; }

// p = 2, a = 1 regimes that carry the 2-adic parameter l.
bool sc1(const ExtensionDescriptor& d) { return two_a1(d) && d.residual_char_is_p && d.procyclic && d.m >= 1; }
bool sc2(const ExtensionDescriptor& d) { return two_a1(d) && d.residual_char_is_p && !d.procyclic; }
bool sc2_m1(const ExtensionDescriptor& d) { return sc2(d) && d.m == 1; }
bool case7_two_a1(const ExtensionDescriptor& d) { return two_a1(d) && !d.residual_char_is_p; }
bool l_from_kappa(const ExtensionDescriptor& d) { return sc1(d) || case7_two_a1(d); }

void add(std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

i64 kappa_from_l(int l) { return ipow(2, l - 2) - 1; }

// kappa, l as used downstream; assumes the shape constraints already hold.
std::pair<i64, std::optional<int>> fill_kappa_l(const ExtensionDescriptor& d) {
    if (sc2_m1(d)) return {d.kappa.value_or(-1), d.l};
    if (l_from_kappa(d)) {
        i64 k = d.kappa ? *d.kappa : (d.l ? kappa_from_l(*d.l) : 1);
        return {k, d.l ? d.l : std::optional<int>(derived_l(k))};
    }
    return {d.kappa.value_or(1), std::nullopt};
}

}  // namespace

std::vector<std::string> descriptor_violations(const ExtensionDescriptor& d) {
    std::vector<std::string> v;
    if (!is_prime(d.p)) add(v, "p is prime");
    if (d.n < 1) add(v, "n ≥ 1");
    if (d.d < 1) add(v, "d ≥ 1");
    if (d.a < 0 || d.b < 0 || d.m < 0) add(v, "a, b, m ≥ 0");
    if (d.b > std::min(d.a, d.n)) add(v, "b ≤ min(a,n)");
    // special case 2 has its own spaces; Case 3.3.a needs b = m = n = 1
    if (d.m + d.b > d.n && !sc2(d)) add(v, "m+b ≤ n");
    if (!d.residual_char_is_p) {
        if (d.n != d.m + d.b) add(v, "n = m+b");
        if (d.d != 1) add(v, "d = 1");
    } else if (d.a == 0 && d.m != 0) {
        add(v, "m = 0 when a = 0");
    }
    if (d.p == 2 && d.a < 1) add(v, "a ≥ 1 when p = 2");
    if (d.kappa && is_prime(d.p) && *d.kappa % d.p == 0) add(v, "κ is a unit mod p");
    if (d.l && *d.l < 2) add(v, "l ≥ 2");
    if (!v.empty()) return v;

    if (sc2(d) && d.m > 1) add(v, "m ≤ 1 in special case 2");
    if (sc2_m1(d)) {
        if (!d.l) {
            add(v, "l is required");
        } else {
            const i64 k = d.kappa.value_or(-1);
            const i64 mod = ipow(2, *d.l - 1);
            if (((k + 1) % mod + mod) % mod != 0) add(v, "κ ≡ −1 mod 2^(l−1) in special case 2");
        }
        const bool d_even = d.d % 2 == 0;
        if (d.n == 1) {
            if ((d.b == 0) != d_even) add(v, "b = 0 iff d even in Case 3.3");
        } else {
            if (!d_even) add(v, "d even in Case 6");
            if ((d.b == 0) != d.minus_one_is_norm) add(v, "b = 0 iff −1 is a norm in Case 6");
        }
        return v;
    }
    if (two_a1(d) && d.kappa == -1) add(v, "κ ≠ −1");
    if (l_from_kappa(d) && d.l) {
        if (d.kappa) {
            if (*d.kappa != -1 && *d.l != derived_l(*d.kappa)) add(v, "l = v_2(1+κ)+2");
        } else if (*d.l < 3) {
            add(v, "l = v_2(1+κ)+2");  // l = 2 would need an even kappa
        }
    }
    if (!v.empty()) return v;

    NormalizedDescriptor nd;
    nd.desc = d;
    std::tie(nd.desc.kappa, nd.desc.l) = fill_kappa_l(d);
    FormalSpaceParams prm = space_params(nd);
    std::vector<std::string> w = param_violations(prm);
    if (!d.residual_char_is_p) std::erase(w, std::string("m = 0 when a = 0"));
    for (const auto& s : w) add(v, s);
    return v;
}

NormalizedDescriptor validate_descriptor(const ExtensionDescriptor& desc) {
    auto v = descriptor_violations(desc);
    if (!v.empty()) throw ValidationError(v);
    NormalizedDescriptor nd;
    nd.desc = desc;
    std::tie(nd.desc.kappa, nd.desc.l) = fill_kappa_l(desc);
    // the flags only carry information where they select a case
    if (!two_a1(desc) || !desc.residual_char_is_p) nd.desc.procyclic = true;
    if (!(sc2_m1(desc) && desc.n >= 2)) nd.desc.minus_one_is_norm = false;
    nd.special_case_1 = sc1(desc);
    nd.special_case_2 = sc2(desc);
    nd.k_sigma = checked_add(1, checked_mul(*nd.desc.kappa, ipow(desc.p, desc.a)));
    nd.norm_exponent = desc.a - desc.b;
    nd.mu_F_exponent = expected_torsion_exponent(dispatch(nd), space_params(nd));
    return nd;
}

FormalSpaceParams space_params(const NormalizedDescriptor& nd) {
    const auto& d = nd.desc;
    return FormalSpaceParams{d.p, d.n, d.a, d.b, d.m, d.kappa.value_or(1), d.l};
}

CaseId dispatch(const NormalizedDescriptor& nd) {
    const auto& d = nd.desc;
    if (!d.residual_char_is_p) return CaseId::Case7;
    if (sc2_m1(d)) {
        if (d.n == 1) return d.d % 2 == 1 ? CaseId::Case3_3a : CaseId::Case3_3b;
        return d.minus_one_is_norm ? CaseId::Case6_norm : CaseId::Case6_nonorm;
    }
    if (d.m == d.n && d.a >= 1) return CaseId::Case3_2;
    if (d.a == 0) return CaseId::Case1;
    if (d.m == 0) return d.b == 0 ? CaseId::Case2 : CaseId::Case4;
    if (d.m < d.n) return CaseId::Case5;
    throw std::logic_error("dispatch: unreachable parameter combination");
}

std::pair<i64, i64> ConcreteModel::act(i64 alpha, i64 beta) const {
    const i64 mod = ipow(p, torsion_exponent);
    Zpk R(p, std::max(torsion_exponent, 1));
    i64 b = R.add(R.mul(R.reduce(ipow(p, delta)), R.reduce(alpha)), R.mul(R.reduce(k_sigma), R.reduce(beta)));
    return {alpha, mod == 1 ? 0 : b};
}

LatticeModule ConcreteModel::lattice() const {
    LatticeModule lat;
    lat.p = p;
    lat.n = n;
    lat.rank = 2;
    lat.relations = {{0, ipow(p, torsion_exponent)}};
    lat.sigma = {{1, ipow(p, delta)}, {0, k_sigma}};
    return lat;
}

ConcreteModel case7_concrete(const ExtensionDescriptor& desc) {
    if (desc.residual_char_is_p) throw std::invalid_argument("case7_concrete: residual characteristic must differ from p");
    NormalizedDescriptor nd = validate_descriptor(desc);
    const auto& d = nd.desc;
    ConcreteModel cm;
    cm.p = d.p;
    cm.n = d.n;
    cm.torsion_exponent = nd.mu_F_exponent;
    // a - b also for p = 2, a = 1: with b = 1, s^{p^m} generates inertia and
    // forces pi_F^{1-s} to have the full order 2^{l+m-1}, so delta = 0 there
    cm.delta = d.a - d.b;
    cm.k_sigma = nd.k_sigma;
    cm.K = std::max(d.n + d.a + d.m + 2, cm.torsion_exponent + d.n + kHeadroom);
    return cm;
}

bool concrete_iterate_is_identity(const ConcreteModel& model) {
    const i64 mod = ipow(model.p, model.torsion_exponent);
    const i64 steps = ipow(model.p, model.n);
    for (auto [a0, b0] : {std::pair<i64, i64>{1, 0}, std::pair<i64, i64>{0, 1}}) {
        i64 a = a0, b = b0;
        for (i64 s = 0; s < steps; ++s) std::tie(a, b) = model.act(a, b);
        if (a != a0 || b != b0 % mod) return false;
    }
    return true;
}

InvariantReport concrete_invariants(const ConcreteModel& model, int K) {
    if (K < model.n + model.torsion_exponent + 2)
        throw std::invalid_argument("concrete_invariants: precision below n + a + m + 2");
    return measure(model.lattice(), PrecisionPair{K, K + 1});
}

PrecisionPair classification_precision(const NormalizedDescriptor& nd, std::optional<int> k1_override) {
    if (k1_override) return precision_from_k1(*k1_override);
    return space_precision(dispatch(nd), space_params(nd));
}

Classification classify(const ExtensionDescriptor& desc, std::optional<int> k1_override) {
    Classification cl;
    cl.normalized = validate_descriptor(desc);
    const auto& d = cl.normalized.desc;
    cl.case_id = dispatch(cl.normalized);
    FormalSpaceParams prm = space_params(cl.normalized);
    cl.case_presentation = make_case_presentation(cl.case_id, prm);

    // the two-generator Case 3.3.a space lacks the free T of the others
    std::vector<std::string> extra;
    if (cl.case_id == CaseId::Case3_3a) extra.push_back("T");
    for (int i = 1; i < d.d; ++i) extra.push_back("U" + std::to_string(i));
    cl.presentation = add_free_generators(cl.case_presentation, extra);

    PrecisionPair prec = classification_precision(cl.normalized, k1_override);
    cl.expected = expected_invariants(cl.case_id, prm);
    const std::size_t e = extra.size();
    cl.expected.zp_rank += e * static_cast<std::size_t>(ipow(d.p, d.n));
    for (int& x : cl.expected.character) x += static_cast<int>(e);
    cl.expected.K1 = prec.K1;
    cl.expected.K2 = prec.K2;

    std::optional<ElementExpr> tg = case_torsion_generator(cl.case_id, prm, cl.case_presentation);
    if (tg) tg->exponents.resize(cl.presentation.g(), gre_zero(cl.presentation.ctx()));
    cl.measured = measure(cl.presentation, prec, tg);
    cl.splitting = d.b == 0;
    cl.diff = report_diff(cl.expected, cl.measured);

    if (!d.residual_char_is_p) {
        Case7CrossCheck cc;
        cc.model = case7_concrete(desc);
        const int K = k1_override ? std::max(*k1_override, cc.model.K) : cc.model.K;
        cc.concrete = concrete_invariants(cc.model, K);
        cc.iterate_identity = concrete_iterate_is_identity(cc.model);
        cc.diff = report_diff(cc.concrete, cl.measured);
        cl.case7 = cc;
    }
    return cl;
}

EquivalenceVerdict equivalent(const ExtensionDescriptor& d1, const ExtensionDescriptor& d2) {
    if (d1.p != d2.p) return {false, "p differs"};
    if (d1.n != d2.n) return {false, "n differs"};
    NormalizedDescriptor n1 = validate_descriptor(d1);
    NormalizedDescriptor n2 = validate_descriptor(d2);
    if (d1.residual_char_is_p != d2.residual_char_is_p) return {false, "residual characteristic class differs"};
    if (d1.residual_char_is_p && d1.d != d2.d) return {false, "d differs"};
    if (n1.mu_F_exponent != n2.mu_F_exponent) return {false, "|μ_F| differs"};
    const i64 mod = ipow(d1.p, n1.mu_F_exponent);
    auto cls = [mod](i64 k) { return ((k % mod) + mod) % mod; };
    if (cls(n1.k_sigma) != cls(n2.k_sigma)) return {false, "k_σ differs mod |μ_F|"};
    if (n1.norm_exponent != n2.norm_exponent) return {false, "|μ_K ∩ N(F^×)| differs"};
    return {true, "|μ_F|, k_σ mod |μ_F|, |μ_K ∩ N(F^×)|, residual class and d agree"};
}

}  // namespace zpg
