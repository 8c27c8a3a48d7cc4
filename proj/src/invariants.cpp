#include "zpg/invariants.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "zpg/rational.hpp"

namespace zpg {

std::optional<int> precision_override_from_env() {
    const char* s = std::getenv("ZPG_PRECISION");
    if (s == nullptr || *s == '\0') return std::nullopt;
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (*end != '\0' || v < 2 || v > 60) throw std::invalid_argument("ZPG_PRECISION must be an integer in [2, 60]");
    return static_cast<int>(v);
}

std::vector<int> SNFResult::torsion() const {
    std::vector<int> t;
    for (int e : exponents)
        if (e > 0 && e < K) t.push_back(e);
    std::sort(t.begin(), t.end());
    return t;
}

std::size_t SNFResult::free_count() const {
    return static_cast<std::size_t>(std::count(exponents.begin(), exponents.end(), K));
}

SNFResult snf_exponents(const ModMatrix& M, const Zpk& R) {
    return {R.p(), R.K(), smith(M, R).column_exponents()};
}

namespace {

SNFResult lattice_snf(const LatticeModule& lat, int K) {
    FiniteModel fm = lattice_truncate(lat, K);
    return snf_exponents(fm.relation_matrix, Zpk(lat.p, K));
}

using Sparse = std::vector<std::vector<std::pair<std::size_t, i64>>>;

Sparse sparse_of(const ModMatrix& m) {
    Sparse s(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            if (m(i, j) != 0) s[i].emplace_back(j, m(i, j));
    return s;
}

// sum_j c_j * sigma^j, built row by row from the sparse action.
ModMatrix poly_matrix(const GroupRingElem& f, const ModMatrix& sigma, const Zpk& R) {
    const std::size_t N = sigma.rows;
    Sparse sp = sparse_of(sigma);
    ModMatrix out(N, N);
    std::vector<i64> w(N), nw(N);
    for (std::size_t i = 0; i < N; ++i) {
        std::fill(w.begin(), w.end(), 0);
        w[i] = 1;
        for (std::size_t j = 0; j < f.size(); ++j) {
            i64 c = R.reduce(f.coeff(j));
            if (c != 0)
                for (std::size_t k = 0; k < N; ++k)
                    if (w[k] != 0) out(i, k) = R.add(out(i, k), R.mul(c, w[k]));
            if (j + 1 == f.size()) break;
            std::fill(nw.begin(), nw.end(), 0);
            for (std::size_t k = 0; k < N; ++k) {
                if (w[k] == 0) continue;
                for (auto [col, v] : sp[k]) nw[col] = R.add(nw[col], R.mul(w[k], v));
            }
            std::swap(w, nw);
        }
    }
    return out;
}

ModMatrix stack(const ModMatrix& a, const ModMatrix& b) {
    ModMatrix out = a;
    if (out.rows == 0) out.cols = b.cols;
    for (std::size_t i = 0; i < b.rows; ++i) out.append_row(b.row(i));
    return out;
}

}  // namespace

ModuleStructure module_structure(const LatticeModule& lat, int K1, int K2) {
    if (K1 >= K2) throw std::invalid_argument("module_structure needs K1 < K2");
    SNFResult a = lattice_snf(lat, K1);
    SNFResult b = lattice_snf(lat, K2);
    ModuleStructure s;
    s.K1 = K1;
    s.K2 = K2;
    s.zp_rank = a.free_count();
    s.torsion_divisors = a.torsion();
    // A torsion exponent at or above K1 reads as free at both precisions, so
    // the free count is also held against the exact rank over Q.
    QMatrix q;
    for (const auto& r : lat.relations) q.emplace_back(r.begin(), r.end());
    const std::size_t q_free = lat.rank - rational_rank(std::move(q));
    s.stabilized = a.free_count() == b.free_count() && a.torsion() == b.torsion() && a.free_count() == q_free;
    return s;
}

ModuleStructure module_structure(const Presentation& pres, int K1, int K2) {
    return module_structure(pres_lattice(pres), K1, K2);
}

int FiniteGroup::log_order() const {
    int s = 0;
    for (int e : divisors) s += e;
    return s;
}

void check_factorization(const GroupRingElem& B, const GroupRingElem& C) {
    if (B.ctx().mode != CoeffMode::Exact || !(B.ctx() == C.ctx()))
        throw std::invalid_argument("cohomology operators must be exact elements of one group ring");
    const std::size_t N = B.size();
    std::vector<i64> prod(2 * N, 0);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) prod[i + j] = checked_add(prod[i + j], checked_mul(B.coeff(i), C.coeff(j)));
    int sign = prod[N] == 1 ? 1 : (prod[N] == -1 ? -1 : 0);
    bool ok = sign != 0 && prod[0] == -sign;
    for (std::size_t k = 1; ok && k < 2 * N; ++k)
        if (k != N && prod[k] != 0) ok = false;
    if (!ok) throw std::invalid_argument("B*C is not X^{p^n} - 1 up to sign");
    bool b0 = gre_eval_one(B) == 0, c0 = gre_eval_one(C) == 0;
    if (b0 == c0) throw std::invalid_argument("exactly one of B(1), C(1) must vanish");
}

FiniteGroup cohomology_at(const LatticeModule& lat, const GroupRingElem& B, const GroupRingElem& C, int K) {
    Zpk R(lat.p, K);
    FiniteModel fm = lattice_truncate(lat, K);
    ModMatrix Bm = poly_matrix(B, fm.sigma_matrix, R);
    ModMatrix Cm = poly_matrix(C, fm.sigma_matrix, R);
    const ModMatrix& D = fm.relation_matrix;

    SmithForm sD = smith(D, R, {false, true});
    SmithForm sC = smith(stack(D, Cm), R, {false, true});
    std::vector<int> f = sD.column_exponents();
    std::vector<int> e = sC.column_exponents();

    std::vector<std::size_t> dom, tgt;
    int emax = 0, fmax = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] > 0 && e[i] < K) {
            dom.push_back(i);
            emax = std::max(emax, e[i]);
        }
    for (std::size_t j = 0; j < f.size(); ++j)
        if (f[j] > 0 && f[j] < K) {
            tgt.push_back(j);
            fmax = std::max(fmax, f[j]);
        }
    // a generator of W/CW is torsion only up to p^{K-e} * free; the read is
    // exact once that error dies in every torsion slot of W
    if (emax + fmax >= K) {
        int K2 = emax + fmax + 1;
        if (K2 > max_precision(lat.p)) throw PrecisionError("cohomology needs more precision than int64 allows");
        return cohomology_at(lat, B, C, K2);
    }

    std::vector<int> dom_e, tgt_f;
    for (auto i : dom) dom_e.push_back(e[i]);
    for (auto j : tgt) tgt_f.push_back(f[j]);
    std::vector<std::vector<i64>> phi;
    for (auto i : dom) {
        std::vector<i64> y = vec_mat(vec_mat(sC.Vinv.row(i), Bm, R), sD.V, R);
        const int bound = K - std::max(fmax, e[i]);
        for (std::size_t j = 0; j < f.size(); ++j)
            if (f[j] == K && R.val(y[j]) < bound)
                throw std::logic_error("cohomology: torsion class has a free component");
        std::vector<i64> r;
        for (auto j : tgt) r.push_back(y[j]);
        phi.push_back(std::move(r));
    }
    return {lat.p, finite_kernel(lat.p, dom_e, tgt_f, phi)};
}

FiniteGroup cohomology_BC(const LatticeModule& lat, const GroupRingElem& B, const GroupRingElem& C, int K) {
    check_factorization(B, C);
    if (B.ctx().p != lat.p || B.ctx().n != lat.n) throw std::invalid_argument("operator ring does not match module");
    FiniteGroup a = cohomology_at(lat, B, C, K);
    FiniteGroup b = cohomology_at(lat, B, C, K + 1);
    if (a.divisors != b.divisors)
        throw InstabilityError("cohomology differs between K=" + std::to_string(K) + " and K=" + std::to_string(K + 1));
    return a;
}

FiniteGroup cohomology_BC(const Presentation& pres, const GroupRingElem& B, const GroupRingElem& C, int K) {
    return cohomology_BC(pres_lattice(pres), B, C, K);
}

int cohomology_closed_form(const GroupRingElem& B, const GroupRingElem& C) {
    check_factorization(B, C);
    if (gre_eval_one(B) != 0) return 0;
    return valuation(gre_eval_one(C), B.ctx().p);
}

namespace {

GroupRingElem one_minus_sigma(const RingContext& ctx) { return gre_constant(ctx, 1) - gre_sigma(ctx, 1); }

}  // namespace

FiniteGroup h0(const LatticeModule& lat, int K) {
    RingContext ctx = RingContext::exact(lat.p, lat.n);
    return cohomology_BC(lat, one_minus_sigma(ctx), gre_special(ctx, Special::N), K);
}

FiniteGroup h1(const LatticeModule& lat, int K) {
    RingContext ctx = RingContext::exact(lat.p, lat.n);
    return cohomology_BC(lat, gre_special(ctx, Special::N), one_minus_sigma(ctx), K);
}

std::string HerbrandQuotient::to_string() const {
    std::ostringstream os;
    if (exponent >= 0)
        os << ipow(p, exponent);
    else
        os << "1/" << ipow(p, -exponent);
    return os.str();
}

HerbrandQuotient herbrand_quotient(const LatticeModule& lat, int K) {
    return {lat.p, h0(lat, K).log_order() - h1(lat, K).log_order()};
}

HerbrandQuotient herbrand_quotient(const Presentation& pres, int K) { return herbrand_quotient(pres_lattice(pres), K); }

std::size_t character_rank(i64 p, const std::vector<int>& character) {
    std::size_t r = 0;
    for (std::size_t k = 0; k < character.size(); ++k)
        r += static_cast<std::size_t>(character[k]) * static_cast<std::size_t>(component_degree(p, static_cast<int>(k)));
    return r;
}

std::vector<int> character_multiplicities(const Presentation& pres) {
    const RingContext& ctx = pres.ctx();
    std::vector<int> m;
    for (int k = 0; k <= ctx.n; ++k) {
        const auto deg = static_cast<std::size_t>(component_degree(ctx.p, k));
        // each entry becomes its deg x deg multiplication matrix over Q
        QMatrix big;
        for (const auto& row : pres.rows())
            for (std::size_t r = 0; r < deg; ++r) {
                std::vector<mpq_class> line;
                for (const auto& e : row) {
                    ComponentElem c = gre_eval_component(e * gre_sigma(ctx, static_cast<i64>(r)), k);
                    for (i64 x : c.coeffs) line.emplace_back(static_cast<long>(x));
                }
                big.push_back(std::move(line));
            }
        std::size_t rk = rational_rank(big);
        if (rk % deg != 0) throw std::logic_error("component rank not a multiple of the field degree");
        m.push_back(static_cast<int>(pres.g()) - static_cast<int>(rk / deg));
    }
    return m;
}

namespace {

using ZMat = std::vector<std::vector<mpz_class>>;

ZMat zmul(const ZMat& a, const ZMat& b) {
    const std::size_t N = a.size();
    ZMat c(N, std::vector<mpz_class>(N, 0));
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < N; ++j)
                if (b[k][j] != 0) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

}  // namespace

std::vector<int> lattice_character(const LatticeModule& lat) {
    const std::size_t N = lat.rank;
    ZMat sigma(N, std::vector<mpz_class>(N, 0)), id(N, std::vector<mpz_class>(N, 0));
    for (std::size_t i = 0; i < N; ++i) {
        id[i][i] = 1;
        for (std::size_t j = 0; j < N; ++j) sigma[i][j] = static_cast<long>(lat.sigma[i][j]);
    }
    std::vector<int> m;
    for (int k = 0; k <= lat.n; ++k) {
        ZMat Pk(N, std::vector<mpz_class>(N, 0));
        if (k == 0) {
            for (std::size_t i = 0; i < N; ++i)
                for (std::size_t j = 0; j < N; ++j) Pk[i][j] = sigma[i][j] - id[i][j];
        } else {
            // P_k(s) = sum_{j<p} s^{j p^{k-1}}
            ZMat step = id;
            for (i64 t = 0; t < ipow(lat.p, k - 1); ++t) step = zmul(step, sigma);
            ZMat pw = id;
            for (i64 j = 0; j < lat.p; ++j) {
                for (std::size_t r = 0; r < N; ++r)
                    for (std::size_t c = 0; c < N; ++c) Pk[r][c] += pw[r][c];
                pw = zmul(pw, step);
            }
        }
        QMatrix big;
        for (const auto& r : Pk) big.emplace_back(r.begin(), r.end());
        for (const auto& r : lat.relations) {
            std::vector<mpq_class> line;
            for (i64 x : r) line.emplace_back(static_cast<long>(x));
            big.push_back(std::move(line));
        }
        std::size_t rk = rational_rank(big);
        const auto deg = static_cast<std::size_t>(component_degree(lat.p, k));
        std::size_t kernel = N - rk;
        if (kernel % deg != 0) throw std::logic_error("eigenspace dimension not a multiple of the field degree");
        m.push_back(static_cast<int>(kernel / deg));
    }
    return m;
}

std::optional<int> element_order(const Presentation& pres, const ElementExpr& v, int K) {
    for (int e = 0; e <= K - 2; ++e)
        if (rel_membership(pres, v.scaled(ipow(pres.ctx().p, e)), K)) return e;
    return std::nullopt;
}

DirectFactorVerdict direct_factor_test(const FiniteModel& model, const std::vector<std::vector<i64>>& sub_gens) {
    const Zpk R(model.ctx.p, model.K);
    const Zpk F(model.ctx.p, 1);
    for (const auto& v : sub_gens) {
        if (v.size() != model.ambient_rank) throw std::invalid_argument("sub-generator length mismatch");
        if (std::all_of(v.begin(), v.end(), [&](i64 x) { return R.reduce(x) == 0; }))
            throw std::invalid_argument("degenerate sub-generator (zero vector)");
    }
    // L cap M^p = L^p  <=>  the images of the l_i in W/pW are independent
    ModMatrix D = reduce_matrix(model.relation_matrix, F);
    ModMatrix DL = D;
    if (DL.rows == 0) DL.cols = model.ambient_rank;
    for (const auto& v : sub_gens) {
        std::vector<i64> r(v.size());
        for (std::size_t j = 0; j < v.size(); ++j) r[j] = F.reduce(v[j]);
        DL.append_row(r);
    }
    if (D.rows == 0) D = ModMatrix(0, model.ambient_rank);
    DirectFactorVerdict out;
    out.direct_factor = smith(DL, F).rank() - smith(D, F).rank() == sub_gens.size();
    out.ambient_torsion_free = snf_exponents(model.relation_matrix, R).torsion().empty();
    return out;
}

int InvariantReport::torsion_log_order() const {
    int s = 0;
    for (int e : torsion_divisors) s += e;
    return s;
}

namespace {

template <class T>
std::string join(const std::vector<T>& v) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << "]";
    return os.str();
}

}  // namespace

std::vector<std::string> report_diff(const InvariantReport& a, const InvariantReport& b) {
    std::vector<std::string> d;
    if (a.p != b.p) d.push_back("p: " + std::to_string(a.p) + " vs " + std::to_string(b.p));
    if (a.zp_rank != b.zp_rank) d.push_back("zp_rank: " + std::to_string(a.zp_rank) + " vs " + std::to_string(b.zp_rank));
    if (a.torsion_divisors != b.torsion_divisors)
        d.push_back("torsion_divisors: " + join(a.torsion_divisors) + " vs " + join(b.torsion_divisors));
    if (a.h0_exponent != b.h0_exponent)
        d.push_back("h0_order: p^" + std::to_string(a.h0_exponent) + " vs p^" + std::to_string(b.h0_exponent));
    if (a.h1_exponent != b.h1_exponent)
        d.push_back("h1_order: p^" + std::to_string(a.h1_exponent) + " vs p^" + std::to_string(b.h1_exponent));
    if (a.character != b.character) d.push_back("character: " + join(a.character) + " vs " + join(b.character));
    if (a.torsion_gen_exponent && b.torsion_gen_exponent && *a.torsion_gen_exponent != *b.torsion_gen_exponent)
        d.push_back("torsion_gen_order: p^" + std::to_string(*a.torsion_gen_exponent) + " vs p^" +
                    std::to_string(*b.torsion_gen_exponent));
    return d;
}

PrecisionPair default_precision(const Presentation& pres) {
    const i64 p = pres.ctx().p;
    int digits = 0;
    for (const auto& row : pres.rows())
        for (const auto& e : row)
            for (i64 c : e.coeffs()) {
                int d = 0;
                for (i64 x = c < 0 ? -c : c; x > 0; x /= p) ++d;
                digits = std::max(digits, d);
            }
    return precision_from_k1(2 * pres.ctx().n + digits + kHeadroom);
}

namespace {

InvariantReport measure_common(const LatticeModule& lat, PrecisionPair prec) {
    ModuleStructure s = module_structure(lat, prec.K1, prec.K2);
    if (!s.stabilized)
        throw InstabilityError("module structure differs between K=" + std::to_string(prec.K1) + " and K=" +
                               std::to_string(prec.K2));
    InvariantReport r;
    r.p = lat.p;
    r.zp_rank = s.zp_rank;
    r.torsion_divisors = s.torsion_divisors;
    r.K1 = prec.K1;
    r.K2 = prec.K2;
    FiniteGroup a0 = h0(lat, prec.K1), b0 = h0(lat, prec.K2);
    FiniteGroup a1 = h1(lat, prec.K1), b1 = h1(lat, prec.K2);
    if (a0.divisors != b0.divisors || a1.divisors != b1.divisors)
        throw InstabilityError("cohomology differs between K1 and K2");
    r.h0_exponent = a0.log_order();
    r.h1_exponent = a1.log_order();
    return r;
}

}  // namespace

InvariantReport measure(const Presentation& pres, PrecisionPair prec, const std::optional<ElementExpr>& torsion_gen) {
    InvariantReport r = measure_common(pres_lattice(pres), prec);
    r.character = character_multiplicities(pres);
    if (torsion_gen) {
        auto a = element_order(pres, *torsion_gen, prec.K1);
        auto b = element_order(pres, *torsion_gen, prec.K2);
        if (a != b) throw InstabilityError("torsion generator order differs between K1 and K2");
        if (!a) throw std::logic_error("torsion generator has infinite order");
        r.torsion_gen_exponent = *a;
    }
    return r;
}

InvariantReport measure(const LatticeModule& lat, PrecisionPair prec) {
    InvariantReport r = measure_common(lat, prec);
    r.character = lattice_character(lat);
    return r;
}

}  // namespace zpg
