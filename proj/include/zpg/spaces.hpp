#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zpg/config.hpp"
#include "zpg/invariants.hpp"
#include "zpg/presentation.hpp"

namespace zpg {

// A rejected input. Each violated constraint is named separately.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::vector<std::string> constraints);
    const std::vector<std::string>& constraints() const { return constraints_; }

private:
    std::vector<std::string> constraints_;
};

struct FormalSpaceParams {
    i64 p = 2;
    int n = 1;
    int a = 0;
    int b = 0;
    int m = 0;
    i64 kappa = 1;
    std::optional<int> l;  // 2-adic parameter of the special spaces

    bool operator==(const FormalSpaceParams&) const = default;
};

enum class CaseId { Case1, Case2, Case3_2, Case3_3a, Case3_3b, Case4, Case5, Case6_norm, Case6_nonorm, Case7 };

std::string case_name(CaseId c);
CaseId case_from_name(const std::string& s);
const std::vector<CaseId>& all_cases();

// v_2(1 + kappa) + 2: the exponent with |mu_{K(i)}| = 2^l when p = 2, a = 1.
int derived_l(i64 kappa);
// p = 2, a = 1, m >= 1: the torsion order is 2^{m+l-1} instead of 2^{a+m}.
bool is_special_case_1(const FormalSpaceParams& prm);

// Constraints of the W constructor; returns the violated ones.
std::vector<std::string> param_violations(const FormalSpaceParams& prm);
void validate_params(const FormalSpaceParams& prm);

// W_{a,b,m,n}: generators (X invariant, S, T), relation
// S^{-s+1+kappa p^a} X^{-kappa p^{a-b}} T^{s^{p^m}-1}.
Presentation make_W(const FormalSpaceParams& prm);
// Which of the W-type cases (1, 2, 3.2, 4, 5) a parameter set falls in.
CaseId w_case_of(const FormalSpaceParams& prm);
Presentation make_case_presentation(CaseId c, const FormalSpaceParams& prm);

// Closed-form torsion exponent of the case space.
int expected_torsion_exponent(CaseId c, const FormalSpaceParams& prm);
InvariantReport expected_invariants(CaseId c, const FormalSpaceParams& prm);

// Xi = S^{N_m} X^{-p^{n-m-b}} on the (X, S, T) shape of W.
ElementExpr torsion_generator_xi(const FormalSpaceParams& prm);
// Torsion generator of the case presentation: Xi for the W-type cases and
// Case 7, S^V with V = sum (-s)^k for the 2-adic special spaces. Empty for
// Case 7 with p = 2, a = 1, m = 0, where Xi has order 2 only.
std::optional<ElementExpr> case_torsion_generator(CaseId c, const FormalSpaceParams& prm, const Presentation& pres);

PrecisionPair space_precision(CaseId c, const FormalSpaceParams& prm);

// Order of Z_p[X]/(X^{p^m} - 1, -X + 1 + kappa p^a) as a log_p, computed by SNF.
int omega_exponent(i64 p, int m, int a, i64 kappa);

enum class RewriteItem { A, B, C, D, E };
std::string rewrite_item_name(RewriteItem it);

struct Rewrite {
    Presentation pres;
    RewriteItem item = RewriteItem::A;
    bool x_free = false;  // the transported relation has zero X-exponent
    std::string notes;
};

// The change of variables of an item, without applicability checks.
GeneratorSubstitution rewrite_substitution(RewriteItem it, const FormalSpaceParams& prm);
std::optional<RewriteItem> applicable_item(const FormalSpaceParams& prm);
Rewrite rewrite_reduction(const FormalSpaceParams& prm, std::optional<RewriteItem> item = std::nullopt);

}  // namespace zpg
