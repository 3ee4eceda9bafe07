#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cil {

// Two failure categories, mapped to process exit codes by the CLI:
//   usage     -> exit 2 (caller handed us something malformed)
//   numerical -> exit 3 (computation could not certify its result)
enum class ErrorKind { usage, numerical };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what_arg)
      : std::runtime_error(what_arg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

struct UsageError : Error {
  explicit UsageError(const std::string& msg) : Error(ErrorKind::usage, msg) {}
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& msg) : Error(ErrorKind::numerical, msg) {}
};

// Grid axis size is odd or below the minimum (sizes must be even and >= 8).
struct OddSize : UsageError {
  explicit OddSize(int size)
      : UsageError("grid axis size " + std::to_string(size) +
                   " is invalid: sizes must be even and >= 8"),
        size(size) {}
  int size;
};

// A sampled matrix did not have the declared shape, or two symbols with
// incompatible shapes/grids were combined.
struct ShapeInconsistent : UsageError {
  explicit ShapeInconsistent(const std::string& msg) : UsageError(msg) {}
};

// Pointwise inverse hit a grid point where the matrix is (nearly) singular.
struct NearSingular : NumericalError {
  NearSingular(std::vector<int> point, double smallest_singular_value)
      : NumericalError("matrix nearly singular at grid point " + fmt_point(point) +
                       ": smallest singular value " +
                       std::to_string(smallest_singular_value)),
        point(std::move(point)),
        smallest_singular_value(smallest_singular_value) {}
  std::vector<int> point;
  double smallest_singular_value;

private:
  static std::string fmt_point(const std::vector<int>& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(p[i]);
    }
    return s + ")";
  }
};

// A quantity that must be an integer landed too far from one.
struct IntegralityFailure : NumericalError {
  IntegralityFailure(std::complex<double> raw, long long nearest, double residual)
      : NumericalError("value (" + std::to_string(raw.real()) + " + " +
                       std::to_string(raw.imag()) + "i) is not within tolerance of an "
                       "integer (nearest " + std::to_string(nearest) + ", residual " +
                       std::to_string(residual) + ")"),
        raw(raw), nearest(nearest), residual(residual) {}
  std::complex<double> raw;
  long long nearest;
  double residual;
};

// A symbol failed the unitarity check at some grid point.
struct NotUnitary : NumericalError {
  explicit NotUnitary(double deviation)
      : NumericalError("symbol is not unitary: max deviation " + std::to_string(deviation)),
        deviation(deviation) {}
  double deviation;
};

// A symbol failed the projection (p = p* = p^2) check at some grid point.
struct NotProjection : NumericalError {
  explicit NotProjection(double deviation)
      : NumericalError("symbol is not a projection: max deviation " +
                       std::to_string(deviation)),
        deviation(deviation) {}
  double deviation;
};

// A symbol failed the self-adjointness check (p = p*) at some grid point.
struct NotSelfAdjoint : NumericalError {
  explicit NotSelfAdjoint(double deviation)
      : NumericalError("symbol is not self-adjoint: max deviation " +
                       std::to_string(deviation)),
        deviation(deviation) {}
  double deviation;
};

// Two independent index computations disagreed; neither result is trustworthy.
struct MethodDisagreement : NumericalError {
  MethodDisagreement(const std::string& method_a, long long value_a,
                     const std::string& method_b, long long value_b)
      : NumericalError("index methods disagree: " + method_a + " gives " +
                       std::to_string(value_a) + ", " + method_b + " gives " +
                       std::to_string(value_b)),
        method_a(method_a), value_a(value_a), method_b(method_b), value_b(value_b) {}
  std::string method_a;
  long long value_a;
  std::string method_b;
  long long value_b;
};

// No certifying method applies to the given operator.
struct NoApplicableMethod : UsageError {
  explicit NoApplicableMethod(const std::string& msg) : UsageError(msg) {}
};

// The scan window cannot certify the result: either the operator varies
// beyond it or the boundary invertibility margin is too small.
struct WindowTooSmall : NumericalError {
  WindowTooSmall(double margin, double threshold)
      : NumericalError("window boundary shell margin " + std::to_string(margin) +
                       " is below the certification threshold " +
                       std::to_string(threshold)),
        margin(margin), threshold(threshold) {}
  explicit WindowTooSmall(const std::string& msg)
      : NumericalError(msg), margin(0), threshold(0) {}
  double margin;
  double threshold;
};

// multiplier_kernel_dims was handed an operator with shift terms.
struct NotPureMultiplier : UsageError {
  NotPureMultiplier() : UsageError("operator is not a pure multiplication operator") {}
};

// exact_kernel_band requires each constant tail to be a single invertible shift term.
struct TailNotMonomial : UsageError {
  explicit TailNotMonomial(const std::string& msg) : UsageError(msg) {}
};

// A limit symbol of a band operator vanishes somewhere on the circle, so the
// winding certificate does not apply.
struct LimitSymbolVanishes : NumericalError {
  explicit LimitSymbolVanishes(double min_abs)
      : NumericalError("limit symbol comes within " + std::to_string(min_abs) +
                       " of zero on the circle"),
        min_abs(min_abs) {}
  double min_abs;
};

// band_symbol_index requires scalar (1x1) multipliers.
struct NotScalar : UsageError {
  NotScalar() : UsageError("operator must have scalar (1x1) multipliers") {}
};

// Extension enumeration needs torsion beyond the configured bound.
struct BoundTooSmall : NumericalError {
  BoundTooSmall(long long needed, long long bound)
      : NumericalError("enumeration bound " + std::to_string(bound) +
                       " too small: torsion up to " + std::to_string(needed) +
                       " required"),
        needed(needed), bound(bound) {}
  long long needed;
  long long bound;
};

// A GroupHom matrix does not map the domain's relations into the codomain's.
struct IllDefinedHom : UsageError {
  explicit IllDefinedHom(const std::string& msg) : UsageError(msg) {}
};

// A six-term solve found no consistent assignment.
struct Inconsistent : NumericalError {
  explicit Inconsistent(const std::string& msg) : NumericalError(msg) {}
};

// A six-term solve cannot pin the unknowns with the given data/bound.
struct Underdetermined : NumericalError {
  explicit Underdetermined(const std::string& msg) : NumericalError(msg) {}
};

// Scenario file could not be parsed.
struct ParseError : UsageError {
  ParseError(int line, const std::string& msg)
      : UsageError("parse error at line " + std::to_string(line) + ": " + msg),
        line(line) {}
  explicit ParseError(const std::string& msg)
      : UsageError("parse error: " + msg), line(0) {}
  int line;
};

// Scenario file parsed but a field has an invalid value.
struct ValidationError : UsageError {
  ValidationError(const std::string& field, const std::string& msg)
      : UsageError("invalid field '" + field + "': " + msg), field(field) {}
  std::string field;
};

// Name does not denote a built-in scenario.
struct UnknownScenario : UsageError {
  explicit UnknownScenario(const std::string& name)
      : UsageError("unknown scenario '" + name + "'"), name(name) {}
  std::string name;
};

// A built-in object was requested on a grid of the wrong dimension.
struct GridMismatch : UsageError {
  GridMismatch(const std::string& name, int expected, int got)
      : UsageError("scenario '" + name + "' needs a " + std::to_string(expected) +
                   "-axis grid, got " + std::to_string(got)),
        name(name), expected(expected), got(got) {}
  std::string name;
  int expected;
  int got;
};

}  // namespace cil
