#pragma once

// Finitely generated abelian groups in canonical form, integer matrix
// normal forms, and the subgroup/quotient calculus used by the six-term
// sequence solver.
//
// Conventions:
//  - A group is stored as Z^rank  (+)  Z_{d_1} (+) ... (+) Z_{d_k} with
//    d_1 | d_2 | ... | d_k and every d_i >= 2.
//  - Generator coordinates list the free generators first, then the torsion
//    generators in chain order, so the ambient dimension is rank + k and the
//    relation lattice is spanned by { d_i * e_{rank+i} }.
//  - All matrix arithmetic is exact (arbitrary-precision integers).

#include <cil/errors.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <vector>

namespace cil {

using bigint = boost::multiprecision::cpp_int;

// Dense row-major integer matrix, exact arithmetic.
struct IntMatrix {
  long long rows = 0;
  long long cols = 0;
  std::vector<bigint> a;

  IntMatrix() = default;
  IntMatrix(long long r, long long c) : rows(r), cols(c), a(static_cast<std::size_t>(r * c)) {}

  bigint& at(long long r, long long c) { return a[static_cast<std::size_t>(r * cols + c)]; }
  const bigint& at(long long r, long long c) const {
    return a[static_cast<std::size_t>(r * cols + c)];
  }

  static IntMatrix identity(long long n);
  static IntMatrix zero(long long r, long long c) { return IntMatrix(r, c); }

  bool operator==(const IntMatrix& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

IntMatrix mat_mul(const IntMatrix& x, const IntMatrix& y);
IntMatrix hstack(const IntMatrix& x, const IntMatrix& y);

// Exact determinant (Bareiss fraction-free elimination). Square input.
bigint determinant(const IntMatrix& m);

// Smith normal form: U * M * V = D with U, V unimodular and D diagonal,
// d_1 | d_2 | ..., all diagonal entries >= 0. Pivot selection is
// deterministic: smallest nonzero absolute value, ties broken row-major.
// u_inv and v_inv are maintained alongside so callers can change basis in
// both directions without inverting anything.
struct SmithResult {
  IntMatrix u, d, v;
  IntMatrix u_inv, v_inv;
  long long rank = 0;  // number of nonzero diagonal entries
};

SmithResult smith_normal_form(const IntMatrix& m);

// Canonical finitely generated abelian group.
struct FgAbelianGroup {
  long long rank = 0;
  std::vector<bigint> invariant_factors;  // each >= 2, divisibility chain

  long long torsion_count() const { return static_cast<long long>(invariant_factors.size()); }
  long long ambient_dim() const { return rank + torsion_count(); }
  bool is_trivial() const { return rank == 0 && invariant_factors.empty(); }
  bool is_free() const { return invariant_factors.empty(); }
  bigint torsion_order() const;

  bool operator==(const FgAbelianGroup& o) const {
    return rank == o.rank && invariant_factors == o.invariant_factors;
  }
  bool operator!=(const FgAbelianGroup& o) const { return !(*this == o); }
};

FgAbelianGroup free_group(long long rank);
FgAbelianGroup cyclic_group(const bigint& order);  // order >= 1; order 1 -> trivial
FgAbelianGroup direct_sum(const FgAbelianGroup& x, const FgAbelianGroup& y);

// "0", "Z", "Z^3", "Z^2 + Z_2 + Z_6".
std::string group_to_string(const FgAbelianGroup& g);
FgAbelianGroup parse_group(const std::string& text);  // throws ParseError

// Total order used to sort possibility lists canonically.
bool group_less(const FgAbelianGroup& x, const FgAbelianGroup& y);

// Z^rows / image(M)  (columns of M are the relators).
FgAbelianGroup group_from_presentation(const IntMatrix& m);

// Same, plus the change of basis: generator_map has one column per canonical
// generator of the quotient (free first, then torsion), expressed in ambient
// Z^rows coordinates; class_map sends an ambient vector to its coordinates in
// the canonical generators (torsion rows to be read mod the factor).
struct Presentation {
  FgAbelianGroup group;
  IntMatrix generator_map;  // rows x ambient_dim(group)
  IntMatrix class_map;      // ambient_dim(group) x rows
};

Presentation present(const IntMatrix& relations);

// Homomorphism between canonical groups: matrix is codomain-ambient x
// domain-ambient, columns are images of the domain's canonical generators.
// Construction validates that relations map into relations (IllDefinedHom).
struct GroupHom {
  FgAbelianGroup domain;
  FgAbelianGroup codomain;
  IntMatrix matrix;
};

GroupHom make_hom(const FgAbelianGroup& domain, const FgAbelianGroup& codomain,
                  const IntMatrix& matrix);
GroupHom identity_hom(const FgAbelianGroup& g);
GroupHom zero_hom(const FgAbelianGroup& domain, const FgAbelianGroup& codomain);
GroupHom compose(const GroupHom& g, const GroupHom& f);  // g after f

// A subgroup of `ambient` presented by the sublattice it pulls back to in the
// ambient generator coordinates (always contains the relation lattice).
struct Subgroup {
  FgAbelianGroup group;    // abstract class of the subgroup
  IntMatrix inclusion;     // hom matrix: ambient_dim(parent) x ambient_dim(group)
};

struct QuotientGroup {
  FgAbelianGroup group;    // abstract class of the quotient
  IntMatrix projection;    // hom matrix: ambient_dim(group) x ambient_dim(parent)
};

FgAbelianGroup hom_kernel(const GroupHom& f);
FgAbelianGroup hom_image(const GroupHom& f);
FgAbelianGroup hom_cokernel(const GroupHom& f);

Subgroup kernel_subgroup(const GroupHom& f);      // kernel with its inclusion
Subgroup image_subgroup(const GroupHom& f);       // image with its inclusion
QuotientGroup cokernel_quotient(const GroupHom& f);

// Exactness of a chain  A_0 -f0-> A_1 -f1-> ... ; when cyclic, the last arrow
// returns to A_0 and every node is checked, otherwise only interior nodes.
struct ExactnessReport {
  bool exact = true;
  std::vector<bool> node_ok;
  long long first_failure = -1;
  std::string detail;
};

ExactnessReport check_exact(const std::vector<GroupHom>& arrows, bool cyclic);

// Does G contain a subgroup isomorphic to A with quotient isomorphic to C?
// Complete when C is free, when A or C is trivial, and when everything is
// finite; the remaining mixed cases are decided by a bounded enumeration of
// surjections G -> C and may throw BoundTooSmall if that family is too large.
bool admits_extension(const FgAbelianGroup& g, const FgAbelianGroup& a,
                      const FgAbelianGroup& c);

// All middle terms X of short exact sequences 0 -> A -> X -> C -> 0, sorted
// canonically. If C is free the answer is exactly { A (+) C }; otherwise
// candidates share rank(A)+rank(C) and torsion order |T(A)|*|T(C)| and are
// kept when admits_extension certifies them. A (+) C is always present.
std::vector<FgAbelianGroup> solve_extension(const FgAbelianGroup& a, const FgAbelianGroup& c,
                                            long long bound);

}  // namespace cil
