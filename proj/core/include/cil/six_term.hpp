#pragma once

// Solver for cyclic six-term exact sequences of finitely generated abelian
// groups with some nodes unknown.
//
// Model: nodes N_0..N_5 with arrows a_j : N_j -> N_{j+1 mod 6}. Exactness is
// tracked through the subgroup chain S_j = im a_{j-1} = ker a_j <= N_j: a
// consistent assignment picks, at every node, a pair of isomorphism classes
// (S_j, N_j/S_j) that a subgroup of N_j can realize, such that each quotient
// matches the next subgroup around the cycle. Unknown nodes are recovered as
// extensions 0 -> S_j -> N_j -> N_j/S_j -> 0 of the flanking data.
//
// At free nodes the enumeration of (subgroup, quotient) pairs is complete up
// to the chain bound. At nodes with torsion it covers split free quotients
// and the trivial subgroup, which is enough for every sequence this library
// ships; constraints that need more raise Underdetermined rather than guess.

#include <cil/abelian_group.hpp>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cil {

struct SixTermConstraint {
  enum class Kind {
    zero,                       // arrow is the zero map
    surjective,                 // arrow is onto
    injective,                  // arrow has trivial kernel
    kills_generators,           // listed free generators lie in the kernel
    image_contains_primitive,   // image contains a primitive infinite-order element
    image_direct_summand,       // image is a direct summand of the target node
  };
  Kind kind = Kind::zero;
  int arrow = 0;                       // index j of a_j : N_j -> N_{j+1}
  std::vector<long long> generators;   // for kills_generators
  std::string citation;
};

// A linked list of joint possibilities for several unknown variables,
// typically the solution set of an earlier sequence in the same scenario.
struct CandidateFamily {
  std::vector<int> vars;
  std::vector<std::vector<FgAbelianGroup>> options;  // option[i] matches vars
  std::string source;
};

struct SixTermSequence {
  std::array<std::string, 6> node_labels{};
  std::array<std::string, 6> arrow_labels{};
  std::array<std::optional<FgAbelianGroup>, 6> nodes{};       // nullopt = unknown
  std::array<int, 6> node_var{{-1, -1, -1, -1, -1, -1}};      // slot ids; shared slots repeat
  std::vector<SixTermConstraint> constraints;
  std::vector<CandidateFamily> candidates;
  std::vector<std::string> citations;
};

struct SixTermAssignment {
  std::map<int, FgAbelianGroup> values;    // variable id -> group
  std::array<FgAbelianGroup, 6> nodes;     // all six nodes, resolved
  std::array<FgAbelianGroup, 6> images;    // class of im a_j (= S_{j+1})
  std::vector<std::string> trace;
};

struct SixTermSolution {
  std::vector<SixTermAssignment> assignments;  // deduped, canonically sorted
  std::vector<std::string> derived_facts;      // true in every consistent walk
};

// Enumerates every assignment of the unknown nodes consistent with exactness
// and the constraints, with invariant factors bounded by `bound`. Throws
// Inconsistent when nothing fits and Underdetermined when the unknown layout
// is outside what the engine can pin down (e.g. two adjacent unknowns with no
// candidate lists).
SixTermSolution six_term_solve(const SixTermSequence& seq, long long bound);

// A staged computation: each stage is a six-term sequence whose solved
// unknowns become linked candidate lists for the later stages.
struct KTheoryStage {
  std::string name;
  SixTermSequence seq;
};

struct KTheoryScenario {
  std::string name;
  std::string description;
  std::vector<KTheoryStage> stages;
  std::map<int, std::string> var_labels;
  std::vector<int> primary_vars;       // the variables the scenario is about
  std::vector<std::string> citations;
};

struct KTheoryStageResult {
  std::string name;
  SixTermSolution solution;
};

struct KTheoryScenarioResult {
  std::string name;
  std::vector<KTheoryStageResult> stages;   // last stage carries the final answer
};

// Structural equality ignoring citation and source strings; used to compare
// a sequence parsed from a scenario file against a built-in one.
bool sequences_equivalent(const SixTermSequence& a, const SixTermSequence& b);

std::vector<std::string> builtin_ktheory_scenario_names();
KTheoryScenario builtin_ktheory_scenario(const std::string& name);   // UnknownScenario
// The scenario's headline sequence with knowns and constraints prefilled.
SixTermSequence builtin_ktheory_sequence(const std::string& name);
KTheoryScenarioResult solve_ktheory_scenario(const KTheoryScenario& scenario, long long bound);

}  // namespace cil
