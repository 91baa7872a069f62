#pragma once

#include <cstddef>
#include <stdexcept>
#include <stop_token>
#include <string>
#include <utility>
#include <vector>

#include "hysim/ast.hpp"
#include "hysim/interp.hpp"

namespace hysim {

struct VariantDimension {
  std::string var;
  std::vector<double> values;
};

struct VariantSet {
  std::vector<VariantDimension> dimensions;
  /// Cartesian product of the dimensions, last dimension varying fastest.
  std::vector<State> bindings;
};

/// A program whose variant arrays have been turned into plain assignments.
struct VariantExpansion {
  VariantSet variants;
  Program program_template;
  /// Top-level statement index of each dimension's assignment.
  std::vector<std::size_t> slots;

  std::size_t size() const { return variants.bindings.size(); }
  /// The concrete program for binding `index`.
  Program instantiate(std::size_t index) const;
};

inline constexpr std::size_t kDefaultBatchCap = 10'000;

/// Raised when the number of runs would exceed the batch cap.
class BatchTooLarge : public std::runtime_error {
 public:
  BatchTooLarge(std::size_t runs, std::size_t cap);
  std::size_t runs() const { return runs_; }

 private:
  std::size_t runs_;
};

/// Counts bindings without materializing them.
std::size_t count_variants(const Program& program);

/// Throws BatchTooLarge when the product of dimension sizes exceeds `cap`
/// (0 disables the cap).
VariantExpansion expand_variants(const Program& program, std::size_t cap = kDefaultBatchCap);

struct BatchOptions {
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  std::size_t parallelism = 0;
  std::size_t cap = kDefaultBatchCap;
  std::stop_token stop;
};

/// One RunResult per binding, in binding order whatever the scheduling.
/// Per-run failures are recorded in each result; the batch itself only throws
/// for configuration errors and BatchTooLarge.
std::vector<RunResult> run_all(const Program& program, const SimConfig& config,
                               const BatchOptions& options = {});

}  // namespace hysim
