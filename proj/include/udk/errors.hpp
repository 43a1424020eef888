#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace udk {

// Two bases so callers (the CLI in particular) can map failures to exit codes
// without enumerating concrete types: ValidationError -> 2, BudgetError -> 3.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonCoprimeBases : ValidationError {
  NonCoprimeBases(unsigned a, unsigned b)
      : ValidationError("bases " + std::to_string(a) + " and " + std::to_string(b) +
                        " share a common factor") {}
};

struct ZeroFrequency : ValidationError {
  ZeroFrequency() : ValidationError("frequency vector h must not be all zero") {}
};

struct EmptyPointSet : ValidationError {
  EmptyPointSet() : ValidationError("point set is empty") {}
};

struct TooLarge : ValidationError {
  TooLarge(std::size_t n, std::size_t cap)
      : ValidationError("point count " + std::to_string(n) + " exceeds exact-evaluation cap " +
                        std::to_string(cap)) {}
};

struct UnsupportedDim : ValidationError {
  explicit UnsupportedDim(std::size_t d)
      : ValidationError("dimension " + std::to_string(d) + " not supported by exact evaluator") {}
};

struct Unsorted : ValidationError {
  Unsorted() : ValidationError("breakpoints must be sorted strictly ascending") {}
};

struct EmptyPartition : ValidationError {
  EmptyPartition() : ValidationError("partition has no breakpoints") {}
};

struct OutOfRange : ValidationError {
  explicit OutOfRange(const std::string& what) : ValidationError(what) {}
};

struct BudgetExceeded : BudgetError {
  BudgetExceeded(std::size_t need, std::size_t cap)
      : BudgetError("operation needs " + std::to_string(need) + " units, budget is " +
                    std::to_string(cap)) {}
};

struct DegenerateRule : ValidationError {
  explicit DegenerateRule(const std::string& what) : ValidationError(what) {}
};

struct IrrationallyRelated : ValidationError {
  IrrationallyRelated()
      : ValidationError("log-ratios admit no rational relation at this precision") {}
};

struct UnequalRatios : ValidationError {
  UnequalRatios()
      : ValidationError("system has unequal contraction ratios; use the probability-driven "
                        "partition instead") {}
};

struct DepthTooShallow : ValidationError {
  DepthTooShallow(std::size_t depth, std::size_t n)
      : ValidationError("elementary-set depth " + std::to_string(depth) +
                        " too shallow for N = " + std::to_string(n)) {}
};

struct NoConvergence : std::runtime_error {
  explicit NoConvergence(std::vector<long> failed)
      : std::runtime_error("zero search failed in " + std::to_string(failed.size()) + " box(es)"),
        boxes(std::move(failed)) {}
  std::vector<long> boxes;
};

struct DimMismatch : ValidationError {
  DimMismatch(std::size_t got, std::size_t want)
      : ValidationError("dimension mismatch: point set is " + std::to_string(got) +
                        "-dimensional, integrand wants " + std::to_string(want)) {}
};

struct ParseError : ValidationError {
  ParseError(const std::string& what, std::size_t pos)
      : ValidationError(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
  std::size_t position;
};

struct SumNotOne : ValidationError {
  explicit SumNotOne(const std::string& deficit)
      : ValidationError("rule lengths must sum to 1, deficit is " + deficit) {}
};

struct UnknownExperiment : ValidationError {
  explicit UnknownExperiment(const std::string& name)
      : ValidationError("unknown experiment \"" + name + "\"") {}
};

}  // namespace udk
