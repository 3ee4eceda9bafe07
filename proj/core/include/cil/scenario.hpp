#pragma once

// Scenario files and the built-in target registry.
//
// A scenario file is a line-oriented description of one verification run:
// one "key: value" pair per line, '#' starts a comment, blank lines are
// ignored. Keys:
//
//   kind: fedosov | winding | lattice | groups      (required)
//   target: <built-in name> | inline                (required; inline = groups)
//   name: <report name>                             default: target
//   grid: 64  |  grid: 64 64 64                     one size for every axis,
//                                                   or explicit per-axis sizes
//   scheme: spectral | central4                     derivative scheme
//   blocks: 2                                       sigma_T_blocks copies
//   power: 3                                        winding monomial exponent
//   seed: 12345                                     seeded random targets
//   window: 64                                      lattice scan half-width
//   n0: 0                                           prop3_15 step position
//   bound: 12                                       invariant-factor bound
//   expect_index: 1
//   expect_kernel: 0 1 -1                           ker  coker  index
//   expect_group: K0(A) = Z^5                       repeatable
//
// Inline six-term sequences (kind groups, target inline) use a node table:
//
//   node0: 0            known node, abelian-group syntax (Z^2, Z_4, 0, ...)
//   node1: ? 0          unknown node bound to variable 0
//   label0: K0(I)       node label
//   arrow_label0: i0*   arrow label
//   constraint: zero 3
//   constraint: surjective 5
//   constraint: injective 4
//   constraint: kills_generators 2 0 1              arrow 2, generators 0, 1
//   constraint: image_contains_primitive 2
//   constraint: image_direct_summand 1
//
// Malformed lines raise ParseError with the line number; missing or invalid
// fields raise ValidationError naming the field.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cil/lattice_fredholm.hpp"
#include "cil/six_term.hpp"
#include "cil/symbol_library.hpp"

namespace cil {

struct ScenarioFile {
  std::string kind;
  std::string target;
  std::string name;  // defaults to target

  std::vector<int> grid_sizes;         // empty = 64 per axis the target needs
  std::string scheme = "spectral";
  int blocks = 2;
  long long power = 1;
  unsigned long long seed = 12345;
  long long window = 64;
  long long n0 = 0;
  long long bound = 12;

  std::optional<long long> expect_index;
  std::optional<std::array<long long, 3>> expect_kernel;
  std::vector<std::pair<std::string, std::string>> expect_groups;

  std::optional<SixTermSequence> inline_sequence;
  std::map<std::string, std::string> raw;  // every parsed key, echoed in reports
};

ScenarioFile parse_scenario(const std::string& text);
ScenarioFile load_scenario(const std::string& path);

// Built-in targets, by the names the command line accepts.
//
//   thm3_8          distinguished 2x2 elliptic symbol on a 3-axis grid; index 1
//   sigma_T_blocks  block-diagonal copies of the same symbol; index = blocks
//   b456_identity   the unit-sphere coefficient triple as a 3x1 symbol on a
//                   2-axis grid mapped affinely onto the square [-20, 20]^2
//   prop3_15        step-coefficient band operator on Z; index -1
//   mult_jk         Z^2 multiplier (j - ik)(1 + j^2 + k^2)^{-1/2}; index 0
//   a5_plus_ia6     alias of mult_jk (the generator pair it is built from)
//
// builtin() dispatches on the name and ignores the grid for lattice targets.
// Unknown names raise UnknownScenario; a grid of the wrong dimension raises
// GridMismatch.
std::variant<MatrixSymbol, LatticeOperator> builtin(const std::string& name,
                                                    const TorusGrid& grid);
MatrixSymbol builtin_symbol(const std::string& name, const TorusGrid& grid,
                            int blocks = 2);
LatticeOperator builtin_lattice(const std::string& name, long long n0 = 0);
std::vector<std::string> builtin_names();

// sup over the integer window [-half, half]^2 of |b4^2 + b5^2 + b6^2 - 1|.
double b456_sup_deviation(long long half = 20);

}  // namespace cil
