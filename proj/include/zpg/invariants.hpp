#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zpg/config.hpp"
#include "zpg/group_ring.hpp"
#include "zpg/presentation.hpp"
#include "zpg/smith.hpp"

namespace zpg {

class InstabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SNFResult {
    i64 p = 2;
    int K = 1;
    std::vector<int> exponents;  // one per ambient column; K means free at this precision

    std::vector<int> torsion() const;  // 0 < e < K, sorted
    std::size_t free_count() const;
};
SNFResult snf_exponents(const ModMatrix& M, const Zpk& R);

struct ModuleStructure {
    std::size_t zp_rank = 0;
    std::vector<int> torsion_divisors;
    bool stabilized = false;
    int K1 = 0;
    int K2 = 0;
};
ModuleStructure module_structure(const Presentation& pres, int K1, int K2);
ModuleStructure module_structure(const LatticeModule& lat, int K1, int K2);

// H(B,C,W) = ker(B) / im(C) as a finite p-group.
struct FiniteGroup {
    i64 p = 2;
    std::vector<int> divisors;  // exponents of the cyclic factors
    int log_order() const;
};

// Checks B*C = +-(X^{p^n} - 1) as polynomials and that exactly one of B(1), C(1) is zero.
void check_factorization(const GroupRingElem& B, const GroupRingElem& C);

// Single-precision read (K is raised internally when the torsion exponents
// demand it). The stabilized entry points below compare K and K+1.
FiniteGroup cohomology_at(const LatticeModule& lat, const GroupRingElem& B, const GroupRingElem& C, int K);
FiniteGroup cohomology_BC(const Presentation& pres, const GroupRingElem& B, const GroupRingElem& C, int K);
FiniteGroup cohomology_BC(const LatticeModule& lat, const GroupRingElem& B, const GroupRingElem& C, int K);

// Closed form: v_p(C(1)) when B(1) = 0, else 0.
int cohomology_closed_form(const GroupRingElem& B, const GroupRingElem& C);

FiniteGroup h0(const LatticeModule& lat, int K);  // H(1 - s, N)
FiniteGroup h1(const LatticeModule& lat, int K);  // H(N, 1 - s)

// q = p^exponent, exponent possibly negative.
struct HerbrandQuotient {
    i64 p = 2;
    int exponent = 0;
    std::string to_string() const;
    bool operator==(const HerbrandQuotient&) const = default;
};
HerbrandQuotient herbrand_quotient(const Presentation& pres, int K);
HerbrandQuotient herbrand_quotient(const LatticeModule& lat, int K);

std::vector<int> character_multiplicities(const Presentation& pres);
// Same quantity computed from the sigma action on Q (x) W (kernel of P_k(sigma)).
std::vector<int> lattice_character(const LatticeModule& lat);
std::size_t character_rank(i64 p, const std::vector<int>& character);

// Least e <= K-2 with p^e * v in the relation module, or nullopt.
std::optional<int> element_order(const Presentation& pres, const ElementExpr& v, int K);

struct DirectFactorVerdict {
    bool direct_factor = false;
    bool ambient_torsion_free = false;  // false means the criterion was applied outside its hypothesis
};
DirectFactorVerdict direct_factor_test(const FiniteModel& model, const std::vector<std::vector<i64>>& sub_gens);

struct InvariantReport {
    i64 p = 2;
    std::size_t zp_rank = 0;
    std::vector<int> torsion_divisors;
    int h0_exponent = 0;
    int h1_exponent = 0;
    std::vector<int> character;
    std::optional<int> torsion_gen_exponent;
    int K1 = 0;
    int K2 = 0;

    int torsion_log_order() const;
};

// Field-by-field differences of the invariant fields. Precision metadata is
// not compared; torsion_gen_exponent only when both sides carry it.
std::vector<std::string> report_diff(const InvariantReport& a, const InvariantReport& b);
inline bool same_invariants(const InvariantReport& a, const InvariantReport& b) { return report_diff(a, b).empty(); }

// Default pair for a presentation whose parameters are unknown: read a bound
// off the coefficients of the rows.
PrecisionPair default_precision(const Presentation& pres);

InvariantReport measure(const Presentation& pres, PrecisionPair prec,
                        const std::optional<ElementExpr>& torsion_gen = std::nullopt);
InvariantReport measure(const LatticeModule& lat, PrecisionPair prec);

}  // namespace zpg
