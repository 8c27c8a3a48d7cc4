#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zpg/group_ring.hpp"
#include "zpg/modular.hpp"

namespace zpg {

using Row = std::vector<GroupRingElem>;

// A finitely presented Z_p[G]-module: free generators modulo the
// Z_p[G]-span of the relation rows. Rows live in exact-integer mode.
// Invariant generators get an automatic (1 - s) row, and their columns are
// normalized to constants (X^e = X^{e(1)} once X is invariant).
class Presentation {
public:
    Presentation() = default;

    const RingContext& ctx() const { return ctx_; }
    std::size_t g() const { return names_.size(); }
    const std::vector<std::string>& gen_names() const { return names_; }
    const std::vector<std::size_t>& invariant_gens() const { return invariant_; }
    // All rows: the supplied relations followed by invariance rows.
    const std::vector<Row>& rows() const { return rows_; }
    std::size_t relation_count() const { return relation_count_; }
    std::vector<Row> relations() const { return {rows_.begin(), rows_.begin() + static_cast<std::ptrdiff_t>(relation_count_)}; }

    std::size_t index_of(const std::string& name) const;
    bool is_invariant(std::size_t i) const;

    friend Presentation pres_make(const RingContext& ctx, const std::vector<std::string>& gen_names,
                                  const std::vector<Row>& rows, const std::vector<std::size_t>& invariant_gens);

private:
    RingContext ctx_;
    std::vector<std::string> names_;
    std::vector<std::size_t> invariant_;
    std::vector<Row> rows_;
    std::size_t relation_count_ = 0;
};

Presentation pres_make(const RingContext& ctx, const std::vector<std::string>& gen_names,
                       const std::vector<Row>& rows, const std::vector<std::size_t>& invariant_gens = {});

// Convenience: build a row from (generator name, exponent) pairs.
Row make_row(const Presentation& shape, const std::vector<std::pair<std::string, GroupRingElem>>& entries);
Row make_row(const RingContext& ctx, const std::vector<std::string>& names,
             const std::vector<std::pair<std::string, GroupRingElem>>& entries);

// The element prod_i gen_i^{exponents_i}.
struct ElementExpr {
    std::vector<GroupRingElem> exponents;

    ElementExpr operator+(const ElementExpr& o) const;  // product of elements
    ElementExpr operator-(const ElementExpr& o) const;  // quotient
    ElementExpr pow(const GroupRingElem& lambda) const; // element^lambda
    ElementExpr scaled(i64 c) const;
};

ElementExpr element_identity(const Presentation& pres);
ElementExpr element_of(const Presentation& pres, const std::vector<std::pair<std::string, GroupRingElem>>& entries);
ElementExpr element_from_row(const Row& row);

// A presented Z_p-lattice with a sigma action: ambient Z^rank, Z-span of
// relations, and sigma acting on row vectors (v -> v * sigma).
struct LatticeModule {
    i64 p = 2;
    int n = 1;
    std::size_t rank = 0;
    std::vector<std::vector<i64>> relations;
    std::vector<std::vector<i64>> sigma;
};

struct FiniteModel {
    RingContext ctx;  // truncated, carries K
    int K = 1;
    std::size_t ambient_rank = 0;
    ModMatrix relation_matrix;
    ModMatrix sigma_matrix;
    // For presentation truncations: (row index, shift j) of each relation row.
    std::vector<std::pair<std::size_t, i64>> provenance;
};

// Coordinates (generator i, power k) -> i * p^n + k.
std::vector<i64> flatten(const std::vector<GroupRingElem>& entries);
LatticeModule pres_lattice(const Presentation& pres);
FiniteModel pres_truncate(const Presentation& pres, int K);
FiniteModel lattice_truncate(const LatticeModule& lat, int K);

// Membership of v in the relation module at precision K.
bool rel_membership(const Presentation& pres, const ElementExpr& v, int K);

// lambda_j in (Z/p^K)[G], one per row of pres.rows(), with sum lambda_j * row_j = v.
struct Witness {
    int K = 1;
    std::vector<GroupRingElem> lambda;
};
std::optional<Witness> membership_witness(const Presentation& pres, const ElementExpr& v, int K);
// Re-multiplies the witness against the rows and compares with v mod p^K.
bool verify_witness(const Presentation& pres, const ElementExpr& v, const Witness& w);

// new_i = sum_j exponents[i][j] * old_j (additively). The matrix must be
// triangular with diagonal entries c * s^t, p not dividing c.
struct GeneratorSubstitution {
    std::vector<std::string> new_names;
    std::vector<std::vector<GroupRingElem>> exponents;
};
Presentation pres_substitute(const Presentation& pres, const GeneratorSubstitution& subst);

Presentation pres_quotient_gen(const Presentation& pres, std::size_t i);

// pres (+) free generators with the given names.
Presentation add_free_generators(const Presentation& pres, const std::vector<std::string>& names);
Presentation direct_sum(const Presentation& a, const Presentation& b);

}  // namespace zpg
