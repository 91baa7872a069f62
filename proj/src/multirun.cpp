#include "hysim/multirun.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

namespace hysim {

BatchTooLarge::BatchTooLarge(std::size_t runs, std::size_t cap)
    : std::runtime_error("variant arrays expand to " + std::to_string(runs) +
                         " runs, more than the batch cap of " + std::to_string(cap)),
      runs_(runs) {}

Program VariantExpansion::instantiate(std::size_t index) const {
  const State& binding = variants.bindings.at(index);
  std::vector<StmtPtr> body = program_template.statements();
  for (std::size_t d = 0; d < slots.size(); ++d) {
    const auto& var = variants.dimensions[d].var;
    const SourcePos pos = body[slots[d]]->pos;
    body[slots[d]] = make_stmt(Stmt::Assign{var, make_number(binding.at(var), pos)}, pos);
  }
  return Program{make_seq(std::move(body), program_template.body->pos), program_template.source};
}

namespace {

std::vector<VariantDimension> dimensions_of(const Program& program,
                                            std::vector<std::size_t>* slots) {
  std::vector<VariantDimension> dims;
  const auto& top = program.statements();
  for (std::size_t i = 0; i < top.size(); ++i) {
    if (const auto* av = std::get_if<Stmt::AssignVariants>(&top[i]->node)) {
      dims.push_back({av->var, av->values});
      if (slots) slots->push_back(i);
    }
  }
  return dims;
}

std::size_t product(const std::vector<VariantDimension>& dims) {
  std::size_t n = 1;
  for (const auto& d : dims) {
    const std::size_t k = d.values.size();
    if (k != 0 && n > std::numeric_limits<std::size_t>::max() / k) {
      return std::numeric_limits<std::size_t>::max();
    }
    n *= k;
  }
  return n;
}

}  // namespace

std::size_t count_variants(const Program& program) {
  return product(dimensions_of(program, nullptr));
}

VariantExpansion expand_variants(const Program& program, std::size_t cap) {
  VariantExpansion out;
  out.variants.dimensions = dimensions_of(program, &out.slots);
  const std::size_t total = product(out.variants.dimensions);
  if (cap != 0 && total > cap) throw BatchTooLarge(total, cap);

  const auto& dims = out.variants.dimensions;
  out.variants.bindings.reserve(total);
  std::vector<std::size_t> digit(dims.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    State binding;
    for (std::size_t d = 0; d < dims.size(); ++d) binding[dims[d].var] = dims[d].values[digit[d]];
    out.variants.bindings.push_back(std::move(binding));
    // Odometer increment: last dimension fastest.
    for (std::size_t d = dims.size(); d-- > 0;) {
      if (++digit[d] < dims[d].values.size()) break;
      digit[d] = 0;
    }
  }

  std::vector<StmtPtr> body = program.statements();
  for (std::size_t d = 0; d < out.slots.size(); ++d) {
    const auto& s = body[out.slots[d]];
    body[out.slots[d]] = make_stmt(
        Stmt::Assign{dims[d].var, make_number(dims[d].values.front(), s->pos)}, s->pos);
  }
  out.program_template = Program{make_seq(std::move(body), program.body->pos), program.source};
  return out;
}

std::vector<RunResult> run_all(const Program& program, const SimConfig& config,
                               const BatchOptions& options) {
  config.validate();
  const VariantExpansion expansion = expand_variants(program, options.cap);
  const std::size_t n = expansion.size();
  std::vector<RunResult> results(n);

  std::size_t workers = options.parallelism;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      results[i] = run(expansion.instantiate(i), config, expansion.variants.bindings[i], i,
                       options.stop);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return results;
}

}  // namespace hysim
