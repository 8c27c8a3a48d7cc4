#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zpg/invariants.hpp"
#include "zpg/presentation.hpp"
#include "zpg/spaces.hpp"

namespace zpg {

struct ExtensionDescriptor {
    i64 p = 2;
    int n = 1;
    bool residual_char_is_p = true;
    int d = 1;
    int a = 0;
    int b = 0;
    int m = 0;
    std::optional<i64> kappa;
    bool procyclic = false;  // read only when p = 2, a = 1
    std::optional<int> l;    // read only when p = 2, a = 1
    bool minus_one_is_norm = false;

    bool operator==(const ExtensionDescriptor&) const = default;
};

struct NormalizedDescriptor {
    ExtensionDescriptor desc;  // kappa and l filled in where they apply
    i64 k_sigma = 1;           // 1 + kappa p^a
    int mu_F_exponent = 0;     // |mu_F| = p^e
    int norm_exponent = 0;     // |mu_K cap N(F^x)| = p^{a-b}
    bool special_case_1 = false;
    bool special_case_2 = false;
};

// All violated constraints, by name.
std::vector<std::string> descriptor_violations(const ExtensionDescriptor& desc);
NormalizedDescriptor validate_descriptor(const ExtensionDescriptor& desc);

FormalSpaceParams space_params(const NormalizedDescriptor& nd);
CaseId dispatch(const NormalizedDescriptor& nd);

// F^x restricted to the Case 7 coordinates (alpha, beta) of pi_F^alpha xi_F^beta.
struct ConcreteModel {
    i64 p = 2;
    int n = 1;
    int K = 0;
    int torsion_exponent = 0;  // torsion modulus p^t
    int delta = 0;
    i64 k_sigma = 1;

    std::pair<i64, i64> act(i64 alpha, i64 beta) const;
    LatticeModule lattice() const;
};
ConcreteModel case7_concrete(const ExtensionDescriptor& desc);
// sigma^{p^n} acts as the identity on the basis (1,0), (0,1).
bool concrete_iterate_is_identity(const ConcreteModel& model);
InvariantReport concrete_invariants(const ConcreteModel& model, int K);

struct Case7CrossCheck {
    ConcreteModel model;
    InvariantReport concrete;
    bool iterate_identity = false;
    std::vector<std::string> diff;  // concrete vs presentation
    bool match() const { return iterate_identity && diff.empty(); }
};

struct Classification {
    NormalizedDescriptor normalized;
    CaseId case_id = CaseId::Case1;
    Presentation case_presentation;
    Presentation presentation;  // case space (+) free summands
    InvariantReport expected;
    InvariantReport measured;
    bool splitting = false;  // b = 0: <X> splits off
    std::vector<std::string> diff;
    std::optional<Case7CrossCheck> case7;

    bool match() const { return diff.empty() && (!case7 || case7->match()); }
};

// Precision pair used for a classification; env/CLI overrides replace K1.
PrecisionPair classification_precision(const NormalizedDescriptor& nd, std::optional<int> k1_override = std::nullopt);
Classification classify(const ExtensionDescriptor& desc, std::optional<int> k1_override = std::nullopt);

struct EquivalenceVerdict {
    bool equivalent = false;
    std::string reason;
};
EquivalenceVerdict equivalent(const ExtensionDescriptor& d1, const ExtensionDescriptor& d2);

}  // namespace zpg
