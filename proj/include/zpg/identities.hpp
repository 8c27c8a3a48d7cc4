#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zpg/group_ring.hpp"
#include "zpg/presentation.hpp"
#include "zpg/spaces.hpp"

namespace zpg {

struct IdentityParams {
    i64 p = 2;
    int n = 1;
    std::optional<int> a, b, m, c, l;
    std::optional<i64> kappa;
    std::optional<std::string> variant;
};

// A membership fact: target lies in the relation module, with lambda.
struct MembershipWitness {
    std::string label;
    ElementExpr target;
    Witness witness;
    bool verified = false;  // re-multiplied against the rows
};

struct IdentityCheck {
    std::string name;
    IdentityParams params;
    bool pass = false;
    std::vector<MembershipWitness> witnesses;  // empty for exact identities
    std::string detail;
};

// Negative control: S_m summed over k <= p^m instead of k < p^m.
struct IdentityOptions {
    bool inject_wrong_sm = false;
};

IdentityCheck check_abel(const RingContext& ctx);
IdentityCheck check_tower(const RingContext& ctx, int m, const IdentityOptions& opt = {});
IdentityCheck check_lemma_321(i64 p, int n, int a);
IdentityCheck check_lemma_357(i64 p, int n, int a);
IdentityCheck check_case5_radical(const FormalSpaceParams& prm, const IdentityOptions& opt = {});
// variant: true for W_1 (-1 a norm), false for W_2.
IdentityCheck check_case6_relations(int l, int n, bool minus_one_is_norm);
// Measured invariants of a case space against the closed forms, plus the
// torsion generator facts (exact order, annihilated by P and R).
IdentityCheck check_case_space(CaseId c, const FormalSpaceParams& prm);

struct IdentityGrid {
    std::vector<i64> primes{2, 3};
    int n_max = 2;
    int a_max = 3;
    std::vector<int> ls{2, 3};
    bool spot_p5 = true;  // p = 5, n = 1 instances on top of the grid
};

const std::vector<std::string>& identity_check_names();
// Runs every check of the grid (or only `only`), in a deterministic order.
std::vector<IdentityCheck> run_identity_suite(const IdentityGrid& grid, const std::optional<std::string>& only = std::nullopt,
                                              const IdentityOptions& opt = {}, int jobs = 1);

}  // namespace zpg
