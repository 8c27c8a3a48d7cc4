#include "zpg/identities.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <sstream>
#include <thread>

#include "zpg/invariants.hpp"

namespace zpg {

namespace {

GroupRingElem one(const RingContext& ctx) { return gre_constant(ctx, 1); }

GroupRingElem tower_S(const RingContext& ctx, int m, const IdentityOptions& opt) {
    if (!opt.inject_wrong_sm) return gre_special(ctx, Special::S, m);
    std::vector<i64> c(static_cast<std::size_t>(ctx.order()), 0);
    for (i64 k = 0; k <= ipow(ctx.p, m); ++k) c[static_cast<std::size_t>(k % ctx.order())] += 1;
    return gre_make(ctx, c);
}

std::string show(const GroupRingElem& u) { return to_text(u); }

MembershipWitness membership_fact(const Presentation& pres, const std::string& label, const ElementExpr& target,
                                  int K) {
    MembershipWitness mw;
    mw.label = label;
    mw.target = target;
    auto w = membership_witness(pres, target, K);
    if (w) {
        mw.witness = *w;
        mw.verified = verify_witness(pres, target, *w);
    }
    return mw;
}

void finish(IdentityCheck& chk) {
    chk.pass = std::all_of(chk.witnesses.begin(), chk.witnesses.end(),
                           [](const MembershipWitness& w) { return w.verified; });
    std::ostringstream os;
    for (const auto& w : chk.witnesses)
        if (!w.verified) os << (os.tellp() > 0 ? "; " : "") << w.label << ": no witness";
    if (!chk.pass) chk.detail = os.str();
}

// r = Z^{p^{a-c} A} Y^{p^{n-c}} on the generators named Z and Y.
ElementExpr lemma_r(const Presentation& pres, int a, int c) {
    const RingContext& ctx = pres.ctx();
    const i64 p = ctx.p;
    return element_of(pres, {{"Z", gre_special(ctx, Special::A).scaled(ipow(p, a - c))},
                             {"Y", gre_constant(ctx, ipow(p, ctx.n - c))}});
}

}  // namespace

IdentityCheck check_abel(const RingContext& ctx_in) {
    RingContext ctx = RingContext::exact(ctx_in.p, ctx_in.n);
    IdentityCheck chk;
    chk.name = "abel";
    chk.params.p = ctx.p;
    chk.params.n = ctx.n;
    GroupRingElem lhs = gre_mul(gre_special(ctx, Special::A), one(ctx) - gre_sigma(ctx, 1));
    GroupRingElem rhs = gre_special(ctx, Special::N) - gre_constant(ctx, ctx.order());
    chk.pass = lhs == rhs;
    if (!chk.pass) chk.detail = "A(1-s) = " + show(lhs) + " but N - p^n = " + show(rhs);
    return chk;
}

IdentityCheck check_tower(const RingContext& ctx_in, int m, const IdentityOptions& opt) {
    RingContext ctx = RingContext::exact(ctx_in.p, ctx_in.n);
    IdentityCheck chk;
    chk.name = "tower";
    chk.params.p = ctx.p;
    chk.params.n = ctx.n;
    chk.params.m = m;
    if (m < 0 || m > ctx.n) throw std::invalid_argument("check_tower: need 0 <= m <= n");
    const i64 pm = ipow(ctx.p, m);
    GroupRingElem Sm = tower_S(ctx, m, opt);
    GroupRingElem l1 = gre_mul(one(ctx) - gre_sigma(ctx, 1), Sm);
    GroupRingElem r1 = one(ctx) - gre_sigma(ctx, pm);
    GroupRingElem l2 = gre_mul(gre_special(ctx, Special::Am, m), one(ctx) - gre_sigma(ctx, pm));
    GroupRingElem r2 = gre_special(ctx, Special::Nm, m) - gre_constant(ctx, ipow(ctx.p, ctx.n - m));
    GroupRingElem l3 = gre_mul(gre_special(ctx, Special::Nm, m), Sm);
    GroupRingElem r3 = gre_special(ctx, Special::N);
    std::ostringstream os;
    if (!(l1 == r1)) os << "(1-s)S_m = " << show(l1) << " vs " << show(r1) << "; ";
    if (!(l2 == r2)) os << "A_m(1-s^{p^m}) = " << show(l2) << " vs " << show(r2) << "; ";
    if (!(l3 == r3)) os << "N_m S_m = " << show(l3) << " vs N = " << show(r3) << "; ";
    chk.detail = os.str();
    chk.pass = chk.detail.empty();
    return chk;
}

IdentityCheck check_lemma_321(i64 p, int n, int a) {
    if (a < 1) throw std::invalid_argument("check_lemma_321: need a >= 1");
    RingContext ctx = RingContext::exact(p, n);
    IdentityCheck chk;
    chk.name = "lemma_321";
    chk.params.p = p;
    chk.params.n = n;
    chk.params.a = a;
    const int c = std::min(n, a);
    chk.params.c = c;
    const std::vector<std::string> names{"Z", "Y"};
    Presentation pres = pres_make(ctx, names,
                                  {make_row(ctx, names, {{"Z", gre_constant(ctx, ipow(p, a))},
                                                         {"Y", gre_sigma(ctx, 1) - one(ctx)}})});
    const int K = a + n + kIdentityHeadroom;
    ElementExpr r = lemma_r(pres, a, c);
    GroupRingElem N = gre_special(ctx, Special::N);
    GroupRingElem A = gre_special(ctx, Special::A);
    // r^{1-s} = Z^{p^{a-c} N}
    ElementExpr lhs1 = r.pow(one(ctx) - gre_sigma(ctx, 1));
    ElementExpr rhs1 = element_of(pres, {{"Z", N.scaled(ipow(p, a - c))}});
    chk.witnesses.push_back(membership_fact(pres, "r^(1-s) = Z^(p^(a-c) N)", lhs1 - rhs1, K));
    // Y^N = Z^{p^a A} Y^{p^n}
    ElementExpr lhs2 = element_of(pres, {{"Y", N}});
    ElementExpr rhs2 = element_of(pres, {{"Z", A.scaled(ipow(p, a))}, {"Y", gre_constant(ctx, ipow(p, n))}});
    chk.witnesses.push_back(membership_fact(pres, "Y^N = Z^(p^a A) Y^(p^n)", lhs2 - rhs2, K));
    finish(chk);
    return chk;
}

IdentityCheck check_lemma_357(i64 p, int n, int a) {
    if (a < 1) throw std::invalid_argument("check_lemma_357: need a >= 1");
    RingContext ctx = RingContext::exact(p, n);
    IdentityCheck chk;
    chk.name = "lemma_357";
    chk.params.p = p;
    chk.params.n = n;
    chk.params.a = a;
    const int c = std::min(n, a);
    chk.params.c = c;
    const std::vector<std::string> names{"X0", "Z", "Y"};
    Presentation pres = pres_make(ctx, names,
                                  {make_row(ctx, names, {{"X0", gre_constant(ctx, -1)},
                                                         {"Z", gre_constant(ctx, ipow(p, a))},
                                                         {"Y", gre_sigma(ctx, 1) - one(ctx)}})},
                                  {0});
    const int K = a + n + kIdentityHeadroom;
    ElementExpr r = lemma_r(pres, a, c);
    GroupRingElem N = gre_special(ctx, Special::N);
    const i64 pn = ipow(p, n);
    // r^{1-s} = Z^{p^{a-c} N} X0^{-p^{n-c}}
    ElementExpr lhs1 = r.pow(one(ctx) - gre_sigma(ctx, 1));
    ElementExpr rhs1 = element_of(pres, {{"Z", N.scaled(ipow(p, a - c))}, {"X0", gre_constant(ctx, -ipow(p, n - c))}});
    chk.witnesses.push_back(membership_fact(pres, "r^(1-s) = Z^(p^(a-c) N) X0^(-p^(n-c))", lhs1 - rhs1, K));
    // Y^N = r^{p^c} X0^{-p^n(p^n-1)/2}
    ElementExpr lhs2 = element_of(pres, {{"Y", N}});
    ElementExpr rhs2 = r.scaled(ipow(p, c)) + element_of(pres, {{"X0", gre_constant(ctx, -(pn * (pn - 1) / 2))}});
    chk.witnesses.push_back(membership_fact(pres, "Y^N = r^(p^c) X0^(-p^n(p^n-1)/2)", lhs2 - rhs2, K));
    finish(chk);
    return chk;
}

IdentityCheck check_case5_radical(const FormalSpaceParams& prm, const IdentityOptions& opt) {
    validate_params(prm);
    if (prm.m < 1 || prm.n <= prm.m) throw std::invalid_argument("check_case5_radical: need 1 <= m < n");
    IdentityCheck chk;
    chk.name = "case5_radical";
    chk.params = {prm.p, prm.n, prm.a, prm.b, prm.m, std::min(prm.n - prm.m, prm.a), std::nullopt, prm.kappa, std::nullopt};
    const i64 p = prm.p;
    const int c = *chk.params.c;
    Presentation W = make_W(prm);
    const RingContext& ctx = W.ctx();
    GroupRingElem Sm = tower_S(ctx, prm.m, opt);
    GroupRingElem Am = gre_special(ctx, Special::Am, prm.m);
    const i64 kp = checked_mul(prm.kappa, ipow(p, prm.a - c));
    const i64 q = ipow(p, prm.n - prm.m - c);
    // r = S^{kappa S_m A_m p^{a-c}} (T^{S_m} S^{-1})^{p^{n-m-c}}
    ElementExpr r = element_of(W, {{"S", gre_mul(Sm, Am).scaled(kp) - gre_constant(ctx, q)}, {"T", Sm.scaled(q)}});
    ElementExpr xi = torsion_generator_xi(prm);
    ElementExpr v = r.pow(one(ctx) - gre_sigma(ctx, 1)) - xi.scaled(kp);
    const int t = expected_torsion_exponent(w_case_of(prm), prm);
    const int K = std::max(prm.a + prm.m, t) + prm.n + kIdentityHeadroom;
    chk.witnesses.push_back(membership_fact(W, "r^(1-s) = Xi^(kappa p^(a-c))", v, K));
    finish(chk);
    return chk;
}

IdentityCheck check_case6_relations(int l, int n, bool minus_one_is_norm) {
    IdentityCheck chk;
    chk.name = "case6";
    chk.params.p = 2;
    chk.params.n = n;
    chk.params.l = l;
    chk.params.variant = minus_one_is_norm ? "W1" : "W2";
    if (l < 2 || n < 2) throw std::invalid_argument("check_case6_relations: need l >= 2, n >= 2");
    const CaseId c = minus_one_is_norm ? CaseId::Case6_norm : CaseId::Case6_nonorm;
    FormalSpaceParams prm{2, n, 1, minus_one_is_norm ? 0 : 1, 1, -1, l};
    Presentation W = make_case_presentation(c, prm);
    const RingContext& ctx = W.ctx();
    std::ostringstream os;

    InvariantReport got = measure(W, space_precision(c, prm), case_torsion_generator(c, prm, W));
    InvariantReport exp = expected_invariants(c, prm);
    for (const auto& d : report_diff(exp, got)) os << d << "; ";

    const int K = l + n + kIdentityHeadroom;
    ElementExpr xi = *case_torsion_generator(c, prm, W);
    chk.witnesses.push_back(membership_fact(W, "Xi^(2^l) = 1", xi.scaled(ipow(2, l)), K));
    if (rel_membership(W, xi.scaled(ipow(2, l - 1)), K)) os << "Xi^(2^(l-1)) is trivial; ";

    // e = N(S^{2^{l-1}} T^{-1}) X^{-2^{n-1}} stands for -1: order exactly 2
    GroupRingElem N = gre_special(ctx, Special::N);
    std::vector<std::pair<std::string, GroupRingElem>> e_parts{{"S", N.scaled(ipow(2, l - 1))}, {"T", -N}};
    if (!minus_one_is_norm) e_parts.push_back({"X", gre_constant(ctx, -ipow(2, n - 1))});
    ElementExpr e = element_of(W, e_parts);
    chk.witnesses.push_back(membership_fact(W, "e^2 = 1", e.scaled(2), K));
    if (rel_membership(W, e, K)) os << "e is trivial; ";

    finish(chk);
    if (!os.str().empty()) {
        chk.pass = false;
        chk.detail = os.str() + chk.detail;
    }
    return chk;
}

IdentityCheck check_case_space(CaseId c, const FormalSpaceParams& prm) {
    IdentityCheck chk;
    chk.name = "spaces";
    chk.params = {prm.p, prm.n, prm.a, prm.b, prm.m, std::nullopt, prm.l, prm.kappa, case_name(c)};
    Presentation W = make_case_presentation(c, prm);
    const RingContext& ctx = W.ctx();
    auto tg = case_torsion_generator(c, prm, W);
    std::ostringstream os;
    InvariantReport got = measure(W, space_precision(c, prm), tg);
    for (const auto& d : report_diff(expected_invariants(c, prm), got)) os << d << "; ";

    const int t = expected_torsion_exponent(c, prm);
    const int K = std::max(prm.a + prm.m, t) + prm.n + kIdentityHeadroom;
    if (tg) {
        chk.witnesses.push_back(membership_fact(W, "Xi^(p^t) = 1", tg->scaled(ipow(prm.p, t)), K));
        if (t > 0 && rel_membership(W, tg->scaled(ipow(prm.p, t - 1)), K)) os << "Xi has order below p^t; ";
        if (c != CaseId::Case3_3a && c != CaseId::Case3_3b && c != CaseId::Case6_norm && c != CaseId::Case6_nonorm) {
            GroupRingElem P = gre_constant(ctx, checked_add(1, checked_mul(prm.kappa, ipow(prm.p, prm.a)))) -
                              gre_sigma(ctx, 1);
            GroupRingElem R = gre_sigma(ctx, ipow(prm.p, prm.m)) - one(ctx);
            chk.witnesses.push_back(membership_fact(W, "Xi^P = 1", tg->pow(P), K));
            chk.witnesses.push_back(membership_fact(W, "Xi^R = 1", tg->pow(R), K));
        }
    }
    finish(chk);
    if (!os.str().empty()) {
        chk.pass = false;
        chk.detail = os.str() + chk.detail;
    }
    return chk;
}

const std::vector<std::string>& identity_check_names() {
    static const std::vector<std::string> v{"abel", "tower", "lemma_321", "lemma_357", "case5_radical", "case6", "spaces"};
    return v;
}

namespace {

std::vector<FormalSpaceParams> w_grid(i64 p, int n, int a_max) {
    std::vector<FormalSpaceParams> out;
    for (int a = 0; a <= a_max; ++a)
        for (int b = 0; b <= std::min(a, n); ++b)
            for (int m = 0; m + b <= n; ++m)
                for (i64 k : {i64{1}, 1 + p}) {
                    FormalSpaceParams prm{p, n, a, b, m, k, std::nullopt};
                    if (param_violations(prm).empty()) out.push_back(prm);
                }
    return out;
}

}  // namespace

std::vector<IdentityCheck> run_identity_suite(const IdentityGrid& grid, const std::optional<std::string>& only,
                                              const IdentityOptions& opt, int jobs) {
    if (only && std::find(identity_check_names().begin(), identity_check_names().end(), *only) ==
                    identity_check_names().end())
        throw std::invalid_argument("unknown check name: " + *only);
    auto wanted = [&](const std::string& name) { return !only || *only == name; };

    std::vector<std::pair<i64, int>> pn;
    for (i64 p : grid.primes)
        for (int n = 1; n <= grid.n_max; ++n) pn.emplace_back(p, n);
    if (grid.spot_p5 && std::find(grid.primes.begin(), grid.primes.end(), 5) == grid.primes.end()) pn.emplace_back(5, 1);

    std::vector<std::function<IdentityCheck()>> tasks;
    for (auto [p, n] : pn) {
        if (wanted("abel")) tasks.push_back([p = p, n = n] { return check_abel(RingContext::exact(p, n)); });
        if (wanted("tower"))
            for (int m = 0; m <= n; ++m)
                tasks.push_back([p = p, n = n, m, opt] { return check_tower(RingContext::exact(p, n), m, opt); });
    }
    for (auto [p, n] : pn)
        for (int a = 1; a <= grid.a_max; ++a) {
            if (wanted("lemma_321")) tasks.push_back([p = p, n = n, a] { return check_lemma_321(p, n, a); });
            if (wanted("lemma_357")) tasks.push_back([p = p, n = n, a] { return check_lemma_357(p, n, a); });
        }
    for (auto [p, n] : pn)
        for (const auto& prm : w_grid(p, n, grid.a_max)) {
            if (wanted("case5_radical") && prm.m >= 1 && prm.n > prm.m)
                tasks.push_back([prm, opt] { return check_case5_radical(prm, opt); });
            if (wanted("spaces")) tasks.push_back([prm] { return check_case_space(w_case_of(prm), prm); });
        }
    const bool has2 = std::find(grid.primes.begin(), grid.primes.end(), 2) != grid.primes.end();
    if (has2)
        for (int l : grid.ls) {
            if (wanted("spaces")) {
                FormalSpaceParams prm{2, 1, 1, 0, 1, -1, l};
                tasks.push_back([prm] { return check_case_space(CaseId::Case3_3a, prm); });
                tasks.push_back([prm] { return check_case_space(CaseId::Case3_3b, prm); });
            }
            if (wanted("case6"))
                for (int n = 2; n <= std::max(2, grid.n_max); ++n)
                    for (bool v : {true, false}) tasks.push_back([l, n, v] { return check_case6_relations(l, n, v); });
        }

    std::vector<IdentityCheck> out(tasks.size());
    auto run_one = [&](std::size_t i) {
        try {
            out[i] = tasks[i]();
        } catch (const std::exception& e) {
            out[i].name = "error";
            out[i].pass = false;
            out[i].detail = e.what();
        }
    };
    const std::size_t workers = static_cast<std::size_t>(std::max(1, jobs));
    if (workers == 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < tasks.size(); i = next++) run_one(i);
            });
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace zpg
