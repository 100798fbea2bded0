#pragma once

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace upade {

/// Index pair (p, q) of a Padé approximant: numerator degree bound p,
/// denominator degree bound q.
struct PadeIndex {
  int p = 0;
  int q = 0;

  friend bool operator==(const PadeIndex&, const PadeIndex&) = default;
  friend auto operator<=>(const PadeIndex&, const PadeIndex&) = default;
};

/// Where an error happened. Every library error carries the operation name
/// and, when known, the index (p, q) and the region label involved.
struct ErrorContext {
  std::string operation;
  std::optional<PadeIndex> index;
  std::string region;
};

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message, ErrorContext ctx = {})
      : std::runtime_error(compose(kind, message, ctx)),
        kind_(std::move(kind)),
        detail_(message),
        ctx_(std::move(ctx)) {}

  const std::string& kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  const ErrorContext& context() const noexcept { return ctx_; }

 private:
  static std::string compose(const std::string& kind, const std::string& message,
                             const ErrorContext& ctx) {
    std::ostringstream os;
    os << kind;
    if (!ctx.operation.empty()) os << " in " << ctx.operation;
    if (ctx.index) os << " at (p,q)=(" << ctx.index->p << "," << ctx.index->q << ")";
    if (!ctx.region.empty()) os << " on region '" << ctx.region << "'";
    if (!message.empty()) os << ": " << message;
    return os.str();
  }

  std::string kind_;
  std::string detail_;
  ErrorContext ctx_;
};

/// Malformed input: non-finite numbers, negative indices, bad parameters.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& message, ErrorContext ctx = {})
      : Error("InvalidArgument", message, std::move(ctx)) {}
};

class CenterMismatch : public Error {
 public:
  explicit CenterMismatch(ErrorContext ctx = {})
      : Error("CenterMismatch", "operands are expanded about different centers; recenter first",
              std::move(ctx)) {}
};

/// A coefficient beyond the series' truncation order was required.
class InsufficientOrder : public Error {
 public:
  InsufficientOrder(int required, int available, ErrorContext ctx = {})
      : Error("InsufficientOrder",
              "required order " + std::to_string(required) + ", series has order " +
                  std::to_string(available),
              std::move(ctx)),
        required_(required),
        available_(available) {}

  int required() const noexcept { return required_; }
  int available() const noexcept { return available_; }

 private:
  int required_;
  int available_;
};

/// A denominator vanishes (within tolerance) where it must not.
class NearPole : public Error {
 public:
  explicit NearPole(const std::string& message, ErrorContext ctx = {})
      : Error("NearPole", message, std::move(ctx)) {}
};

/// The Hankel determinant test failed, so [p/q] does not exist.
class NotInExistenceClass : public Error {
 public:
  explicit NotInExistenceClass(const std::string& message, ErrorContext ctx = {})
      : Error("NotInExistenceClass", message, std::move(ctx)) {}
};

/// The denominator system of the linear-solve route is singular.
class SingularSystem : public Error {
 public:
  explicit SingularSystem(const std::string& message, ErrorContext ctx = {})
      : Error("SingularSystem", message, std::move(ctx)) {}
};

class RegionsOverlap : public Error {
 public:
  explicit RegionsOverlap(const std::string& message, ErrorContext ctx = {})
      : Error("RegionsOverlap", message, std::move(ctx)) {}
};

class BudgetUnreachable : public Error {
 public:
  BudgetUnreachable(double best_error, int at_degree, double budget, ErrorContext ctx = {})
      : Error("BudgetUnreachable",
              "best sampled sup error " + fmt(best_error) + " at degree " +
                  std::to_string(at_degree) + " does not meet budget " + fmt(budget),
              std::move(ctx)),
        best_error_(best_error),
        at_degree_(at_degree) {}

  double best_error() const noexcept { return best_error_; }
  int at_degree() const noexcept { return at_degree_; }

 private:
  static std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
  }
  double best_error_;
  int at_degree_;
};

class FamilyExhausted : public Error {
 public:
  FamilyExhausted(int min_p_exclusive, ErrorContext ctx = {})
      : Error("FamilyExhausted",
              "no witness index with p > " + std::to_string(min_p_exclusive), std::move(ctx)),
        min_p_exclusive_(min_p_exclusive) {}

  int min_p_exclusive() const noexcept { return min_p_exclusive_; }

 private:
  int min_p_exclusive_;
};

}  // namespace upade
