#pragma once

// Source-to-circuit driver shared by the CLI and the tests.

#include <optional>
#include <string>
#include <vector>

#include "hml/circuit.hpp"
#include "hml/cost_model.hpp"
#include "hml/lower.hpp"
#include "hml/typecheck.hpp"

namespace hml {

// An error tagged with the pipeline stage that raised it: "parse", "typecheck",
// "lower", "optimize", "bitblast".
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// The file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

struct PipelineConfig {
  Scheme scheme = Scheme::generic();
  std::uint32_t bitwidth = 64;
  Level level = Level::Arith;
  ComparisonEncoding encoding = ComparisonEncoding::Auto;
  // nullopt: default pass list. Empty: no optimization.
  std::optional<std::vector<std::string>> passes;
  // Model consulted by cmp_rewrite; secret_sharing at `bitwidth` when unset.
  std::optional<CostModel> model;
  std::string objective;
};

// Parse and type-check. Throws StageError; type errors keep their diagnostics
// in the message, one per line, formatted against `file`.
TypedProgram front_end(std::string_view source, const Scheme& scheme, const std::string& file = "<input>");

// Lowers at arith level, optimizes there, then bit-blasts when cfg.level is
// Bool. Throws StageError.
Circuit compile(std::string_view source, const PipelineConfig& cfg, const std::string& file = "<input>");

// Applies cfg's pass list to an existing circuit.
Circuit optimize_circuit(const Circuit& c, const PipelineConfig& cfg);

}  // namespace hml
