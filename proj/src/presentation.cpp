#include "zpg/presentation.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <set>
#include <stdexcept>

#include "zpg/smith.hpp"

namespace zpg {

namespace {

GroupRingElem constant_part(const GroupRingElem& e) { return gre_constant(e.ctx(), gre_eval_one(e)); }

Row invariance_row(const RingContext& ctx, std::size_t g, std::size_t i) {
    Row r(g, gre_zero(ctx));
    r[i] = gre_constant(ctx, 1) - gre_sigma(ctx, 1);
    return r;
}

bool row_is_zero(const Row& r) {
    return std::all_of(r.begin(), r.end(), [](const GroupRingElem& e) { return e.is_zero(); });
}

}  // namespace

Presentation pres_make(const RingContext& ctx, const std::vector<std::string>& gen_names,
                       const std::vector<Row>& rows, const std::vector<std::size_t>& invariant_gens) {
    validate_context(ctx);
    if (ctx.mode != CoeffMode::Exact) throw std::invalid_argument("presentation rows must be exact-integer");
    std::set<std::string> seen;
    for (const auto& nm : gen_names) {
        if (nm.empty()) throw std::invalid_argument("empty generator name");
        if (!seen.insert(nm).second) throw std::invalid_argument("duplicate generator name: " + nm);
    }
    const std::size_t g = gen_names.size();
    std::vector<std::size_t> inv = invariant_gens;
    std::sort(inv.begin(), inv.end());
    inv.erase(std::unique(inv.begin(), inv.end()), inv.end());
    for (auto i : inv)
        if (i >= g) throw std::invalid_argument("invariant generator index out of range");

    Presentation P;
    P.ctx_ = ctx;
    P.names_ = gen_names;
    P.invariant_ = inv;
    for (const auto& r : rows) {
        if (r.size() != g) throw std::invalid_argument("relation row length differs from generator count");
        Row nr = r;
        for (auto& e : nr)
            if (!(e.ctx() == ctx)) throw std::invalid_argument("relation entry context mismatch");
        for (auto i : inv) nr[i] = constant_part(nr[i]);
        P.rows_.push_back(std::move(nr));
    }
    P.relation_count_ = P.rows_.size();
    for (auto i : inv) P.rows_.push_back(invariance_row(ctx, g, i));
    return P;
}

std::size_t Presentation::index_of(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw std::invalid_argument("unknown generator: " + name);
    return static_cast<std::size_t>(it - names_.begin());
}

bool Presentation::is_invariant(std::size_t i) const {
    return std::binary_search(invariant_.begin(), invariant_.end(), i);
}

Row make_row(const RingContext& ctx, const std::vector<std::string>& names,
             const std::vector<std::pair<std::string, GroupRingElem>>& entries) {
    Row r(names.size(), gre_zero(ctx));
    for (const auto& [nm, e] : entries) {
        auto it = std::find(names.begin(), names.end(), nm);
        if (it == names.end()) throw std::invalid_argument("unknown generator: " + nm);
        auto i = static_cast<std::size_t>(it - names.begin());
        r[i] = r[i] + e;
    }
    return r;
}

Row make_row(const Presentation& shape, const std::vector<std::pair<std::string, GroupRingElem>>& entries) {
    return make_row(shape.ctx(), shape.gen_names(), entries);
}

ElementExpr ElementExpr::operator+(const ElementExpr& o) const {
    if (exponents.size() != o.exponents.size()) throw std::invalid_argument("element shape mismatch");
    ElementExpr r = *this;
    for (std::size_t i = 0; i < exponents.size(); ++i) r.exponents[i] = exponents[i] + o.exponents[i];
    return r;
}

ElementExpr ElementExpr::operator-(const ElementExpr& o) const {
    if (exponents.size() != o.exponents.size()) throw std::invalid_argument("element shape mismatch");
    ElementExpr r = *this;
    for (std::size_t i = 0; i < exponents.size(); ++i) r.exponents[i] = exponents[i] - o.exponents[i];
    return r;
}

ElementExpr ElementExpr::pow(const GroupRingElem& lambda) const {
    ElementExpr r = *this;
    for (auto& e : r.exponents) e = e * lambda;
    return r;
}

ElementExpr ElementExpr::scaled(i64 c) const {
    ElementExpr r = *this;
    for (auto& e : r.exponents) e = e.scaled(c);
    return r;
}

ElementExpr element_identity(const Presentation& pres) {
    return ElementExpr{std::vector<GroupRingElem>(pres.g(), gre_zero(pres.ctx()))};
}

ElementExpr element_of(const Presentation& pres, const std::vector<std::pair<std::string, GroupRingElem>>& entries) {
    return ElementExpr{make_row(pres, entries)};
}

ElementExpr element_from_row(const Row& row) { return ElementExpr{row}; }

std::vector<i64> flatten(const std::vector<GroupRingElem>& entries) {
    std::vector<i64> v;
    for (const auto& e : entries) v.insert(v.end(), e.coeffs().begin(), e.coeffs().end());
    return v;
}

namespace {

std::vector<i64> shifted(const Row& r, i64 j) {
    std::vector<i64> v;
    for (const auto& e : r) {
        const auto N = static_cast<i64>(e.size());
        std::vector<i64> c(e.size(), 0);
        for (i64 k = 0; k < N; ++k) c[static_cast<std::size_t>((k + j) % N)] = e.coeff(static_cast<std::size_t>(k));
        v.insert(v.end(), c.begin(), c.end());
    }
    return v;
}

std::vector<std::vector<i64>> block_shift(std::size_t g, i64 order) {
    const auto N = g * static_cast<std::size_t>(order);
    std::vector<std::vector<i64>> s(N, std::vector<i64>(N, 0));
    for (std::size_t i = 0; i < g; ++i)
        for (i64 k = 0; k < order; ++k) {
            std::size_t from = i * static_cast<std::size_t>(order) + static_cast<std::size_t>(k);
            std::size_t to = i * static_cast<std::size_t>(order) + static_cast<std::size_t>((k + 1) % order);
            s[from][to] = 1;
        }
    return s;
}

struct Translates {
    std::vector<std::vector<i64>> rows;
    std::vector<std::pair<std::size_t, i64>> provenance;
};

Translates translates(const Presentation& pres) {
    Translates t;
    std::set<std::vector<i64>> seen;
    const i64 order = pres.ctx().order();
    for (std::size_t r = 0; r < pres.rows().size(); ++r)
        for (i64 j = 0; j < order; ++j) {
            auto v = shifted(pres.rows()[r], j);
            if (std::all_of(v.begin(), v.end(), [](i64 x) { return x == 0; })) continue;
            if (!seen.insert(v).second) continue;
            t.rows.push_back(std::move(v));
            t.provenance.emplace_back(r, j);
        }
    return t;
}

FiniteModel truncate_rows(i64 p, int n, std::size_t rank, const std::vector<std::vector<i64>>& rows,
                          const std::vector<std::vector<i64>>& sigma, int K) {
    FiniteModel fm;
    fm.ctx = RingContext::truncated(p, n, K);
    fm.K = K;
    fm.ambient_rank = rank;
    Zpk R(p, K);
    fm.relation_matrix = ModMatrix(0, rank);
    for (const auto& r : rows) {
        std::vector<i64> v(rank);
        for (std::size_t j = 0; j < rank; ++j) v[j] = R.reduce(r[j]);
        fm.relation_matrix.append_row(v);
    }
    fm.sigma_matrix = ModMatrix(rank, rank);
    for (std::size_t i = 0; i < rank; ++i)
        for (std::size_t j = 0; j < rank; ++j) fm.sigma_matrix(i, j) = R.reduce(sigma[i][j]);
    return fm;
}

}  // namespace

LatticeModule pres_lattice(const Presentation& pres) {
    LatticeModule L;
    L.p = pres.ctx().p;
    L.n = pres.ctx().n;
    L.rank = pres.g() * static_cast<std::size_t>(pres.ctx().order());
    L.relations = translates(pres).rows;
    L.sigma = block_shift(pres.g(), pres.ctx().order());
    return L;
}

FiniteModel pres_truncate(const Presentation& pres, int K) {
    Translates t = translates(pres);
    const std::size_t rank = pres.g() * static_cast<std::size_t>(pres.ctx().order());
    FiniteModel fm = truncate_rows(pres.ctx().p, pres.ctx().n, rank, t.rows, block_shift(pres.g(), pres.ctx().order()), K);
    fm.provenance = std::move(t.provenance);
    return fm;
}

FiniteModel lattice_truncate(const LatticeModule& lat, int K) {
    return truncate_rows(lat.p, lat.n, lat.rank, lat.relations, lat.sigma, K);
}

namespace {

void check_shape(const Presentation& pres, const ElementExpr& v) {
    if (v.exponents.size() != pres.g()) throw std::invalid_argument("element does not match presentation shape");
}

}  // namespace

bool rel_membership(const Presentation& pres, const ElementExpr& v, int K) {
    return membership_witness(pres, v, K).has_value();
}

std::optional<Witness> membership_witness(const Presentation& pres, const ElementExpr& v, int K) {
    check_shape(pres, v);
    FiniteModel fm = pres_truncate(pres, K);
    Zpk R(pres.ctx().p, K);
    auto x = solve_left(fm.relation_matrix, flatten(v.exponents), R);
    if (!x) return std::nullopt;
    Witness w;
    w.K = K;
    RingContext tc = fm.ctx;
    w.lambda.assign(pres.rows().size(), gre_zero(tc));
    for (std::size_t t = 0; t < fm.provenance.size(); ++t) {
        auto [r, j] = fm.provenance[t];
        if ((*x)[t] == 0) continue;
        w.lambda[r] = w.lambda[r] + gre_sigma(tc, j).scaled((*x)[t]);
    }
    return w;
}

bool verify_witness(const Presentation& pres, const ElementExpr& v, const Witness& w) {
    check_shape(pres, v);
    if (w.lambda.size() != pres.rows().size()) return false;
    RingContext tc = RingContext::truncated(pres.ctx().p, pres.ctx().n, w.K);
    std::vector<GroupRingElem> acc(pres.g(), gre_zero(tc));
    for (std::size_t r = 0; r < pres.rows().size(); ++r) {
        if (!(w.lambda[r].ctx() == tc)) return false;
        for (std::size_t i = 0; i < pres.g(); ++i) acc[i] = acc[i] + w.lambda[r] * pres.rows()[r][i].in_context(tc);
    }
    for (std::size_t i = 0; i < pres.g(); ++i)
        if (!(acc[i] == v.exponents[i].in_context(tc))) return false;
    return true;
}

namespace {

// Q[G] arithmetic for transporting rows through a substitution.
using QElem = std::vector<mpq_class>;

QElem to_q(const GroupRingElem& e) {
    QElem q(e.size());
    for (std::size_t k = 0; k < e.size(); ++k) q[k] = mpq_class(static_cast<long>(e.coeff(k)));
    return q;
}

QElem q_mul(const QElem& a, const QElem& b) {
    const std::size_t N = a.size();
    QElem out(N, mpq_class(0));
    for (std::size_t i = 0; i < N; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < N; ++j)
            if (b[j] != 0) out[(i + j) % N] += a[i] * b[j];
    }
    return out;
}

QElem q_sub(QElem a, const QElem& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

bool q_is_zero(const QElem& a) {
    return std::all_of(a.begin(), a.end(), [](const mpq_class& x) { return x == 0; });
}

// Inverse of a unit monomial c*s^t with p not dividing c.
QElem monomial_inverse(const GroupRingElem& e) {
    std::size_t nz = 0, pos = 0;
    for (std::size_t k = 0; k < e.size(); ++k)
        if (e.coeff(k) != 0) {
            ++nz;
            pos = k;
        }
    if (nz != 1 || e.coeff(pos) % e.ctx().p == 0) throw std::invalid_argument("non-unit diagonal exponent");
    QElem q(e.size(), mpq_class(0));
    q[(e.size() - pos) % e.size()] = mpq_class(1, static_cast<unsigned long>(std::abs(e.coeff(pos)))) *
                                     (e.coeff(pos) < 0 ? -1 : 1);
    return q;
}

}  // namespace

Presentation pres_substitute(const Presentation& pres, const GeneratorSubstitution& subst) {
    const std::size_t g = pres.g();
    const RingContext& ctx = pres.ctx();
    if (subst.new_names.size() != g || subst.exponents.size() != g)
        throw std::invalid_argument("substitution must have one entry per generator");
    for (const auto& r : subst.exponents)
        if (r.size() != g) throw std::invalid_argument("substitution row length mismatch");

    bool lower = true, upper = true;
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < g; ++j) {
            if (subst.exponents[i][j].is_zero()) continue;
            if (j > i) lower = false;
            if (j < i) upper = false;
        }
    if (!lower && !upper) throw std::invalid_argument("substitution is not triangular");

    // Gauss-Jordan on diagonal pivots: F = E^{-1} over Q[G]
    const std::size_t N = static_cast<std::size_t>(ctx.order());
    QElem zero(N, mpq_class(0)), one(N, mpq_class(0));
    one[0] = 1;
    std::vector<std::vector<QElem>> E(g, std::vector<QElem>(g)), F(g, std::vector<QElem>(g, zero));
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < g; ++j) E[i][j] = to_q(subst.exponents[i][j]);
        F[i][i] = one;
    }
    for (std::size_t c = 0; c < g; ++c) {
        QElem inv = monomial_inverse(subst.exponents[c][c]);
        for (std::size_t j = 0; j < g; ++j) {
            E[c][j] = q_mul(E[c][j], inv);
            F[c][j] = q_mul(F[c][j], inv);
        }
        for (std::size_t r = 0; r < g; ++r) {
            if (r == c || q_is_zero(E[r][c])) continue;
            QElem f = E[r][c];
            for (std::size_t j = 0; j < g; ++j) {
                E[r][j] = q_sub(E[r][j], q_mul(f, E[c][j]));
                F[r][j] = q_sub(F[r][j], q_mul(f, F[c][j]));
            }
        }
    }

    std::vector<std::size_t> new_inv;
    for (std::size_t i = 0; i < g; ++i) {
        std::size_t nz = 0, col = 0;
        for (std::size_t j = 0; j < g; ++j)
            if (!subst.exponents[i][j].is_zero()) {
                ++nz;
                col = j;
            }
        const auto& e = subst.exponents[i][col];
        if (nz == 1 && pres.is_invariant(col) && e.degree() == 0) new_inv.push_back(i);
    }

    std::vector<Row> out_rows;
    for (const auto& row : pres.rows()) {
        std::vector<QElem> t(g, zero);
        for (std::size_t j = 0; j < g; ++j) {
            QElem rj = to_q(row[j]);
            if (q_is_zero(rj)) continue;
            for (std::size_t k = 0; k < g; ++k)
                if (!q_is_zero(F[j][k])) {
                    QElem prod = q_mul(rj, F[j][k]);
                    for (std::size_t s = 0; s < N; ++s) t[k][s] += prod[s];
                }
        }
        // clear denominators; they are p-adic units, so the row spans the same module
        mpz_class den = 1;
        for (const auto& e : t)
            for (const auto& x : e) den = lcm(den, mpz_class(x.get_den()));
        if (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(ctx.p)))
            throw std::logic_error("substitution produced a non-integral row at p");
        Row nr;
        for (const auto& e : t) {
            std::vector<i64> c(N);
            for (std::size_t s = 0; s < N; ++s) {
                mpq_class v = e[s] * den;
                if (!v.get_num().fits_slong_p()) throw std::overflow_error("substituted coefficient too large");
                c[s] = v.get_num().get_si();
            }
            nr.push_back(gre_make(ctx, c));
        }
        if (row_is_zero(nr)) continue;
        // drop transported invariance rows that the new invariant generators regenerate
        bool redundant = false;
        for (auto i : new_inv) {
            bool only_i = true;
            for (std::size_t k = 0; k < g; ++k)
                if (k != i && !nr[k].is_zero()) only_i = false;
            if (!only_i) continue;
            auto d = gre_divmod(nr[i], gre_constant(ctx, 1) - gre_sigma(ctx, 1));
            if (d.remainder.is_zero() && d.quotient.degree() == 0 && d.quotient.coeff(0) % ctx.p != 0) redundant = true;
        }
        if (!redundant) out_rows.push_back(std::move(nr));
    }
    return pres_make(ctx, subst.new_names, out_rows, new_inv);
}

Presentation pres_quotient_gen(const Presentation& pres, std::size_t i) {
    if (i >= pres.g()) throw std::out_of_range("generator index out of range");
    std::vector<std::string> names;
    for (std::size_t k = 0; k < pres.g(); ++k)
        if (k != i) names.push_back(pres.gen_names()[k]);
    std::vector<Row> rows;
    for (const auto& r : pres.relations()) {
        Row nr;
        for (std::size_t k = 0; k < pres.g(); ++k)
            if (k != i) nr.push_back(r[k]);
        if (!row_is_zero(nr)) rows.push_back(std::move(nr));
    }
    std::vector<std::size_t> inv;
    for (auto k : pres.invariant_gens())
        if (k != i) inv.push_back(k > i ? k - 1 : k);
    return pres_make(pres.ctx(), names, rows, inv);
}

Presentation add_free_generators(const Presentation& pres, const std::vector<std::string>& names) {
    std::vector<std::string> all = pres.gen_names();
    all.insert(all.end(), names.begin(), names.end());
    std::vector<Row> rows;
    for (auto r : pres.relations()) {
        r.resize(all.size(), gre_zero(pres.ctx()));
        rows.push_back(std::move(r));
    }
    return pres_make(pres.ctx(), all, rows, pres.invariant_gens());
}

Presentation direct_sum(const Presentation& a, const Presentation& b) {
    if (!(a.ctx() == b.ctx())) throw std::invalid_argument("direct sum of presentations over different rings");
    std::vector<std::string> names = a.gen_names();
    std::set<std::string> used(names.begin(), names.end());
    for (auto nm : b.gen_names()) {
        while (used.count(nm)) nm += "'";
        used.insert(nm);
        names.push_back(nm);
    }
    const RingContext& ctx = a.ctx();
    std::vector<Row> rows;
    for (auto r : a.relations()) {
        r.resize(names.size(), gre_zero(ctx));
        rows.push_back(std::move(r));
    }
    for (const auto& r : b.relations()) {
        Row nr(a.g(), gre_zero(ctx));
        nr.insert(nr.end(), r.begin(), r.end());
        rows.push_back(std::move(nr));
    }
    std::vector<std::size_t> inv = a.invariant_gens();
    for (auto k : b.invariant_gens()) inv.push_back(k + a.g());
    return pres_make(ctx, names, rows, inv);
}

}  // namespace zpg
