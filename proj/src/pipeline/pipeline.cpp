#include "hml/pipeline.hpp"

#include <fstream>
#include <sstream>

#include "hml/optimizer.hpp"
#include "hml/parser.hpp"

namespace hml {

StageError::StageError(std::string stage, const std::string& message)
    : Error(stage + ": " + message), stage_(std::move(stage)) {}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write '" + path + "'");
}

TypedProgram front_end(std::string_view source, const Scheme& scheme, const std::string& file) {
  ast::Program program;
  try {
    program = parse_source(source);
  } catch (const LexError& e) {
    throw StageError("parse", file + ":" + e.what());
  } catch (const ParseError& e) {
    throw StageError("parse", file + ":" + e.what());
  }
  try {
    return check_program(program, scheme);
  } catch (const TypeErrors& e) {
    std::string msg;
    for (const auto& d : e.diagnostics()) msg += (msg.empty() ? "" : "\n") + format_diagnostic(file, d);
    throw StageError("typecheck", msg);
  } catch (const TypeError& e) {
    throw StageError("typecheck", format_diagnostic(file, e.diagnostic()));
  }
}

Circuit optimize_circuit(const Circuit& c, const PipelineConfig& cfg) {
  OptimizeOptions opts;
  if (cfg.passes) opts.passes = *cfg.passes;
  if (opts.passes.empty()) return c;
  opts.model = cfg.model ? *cfg.model : secret_sharing_model(c.bitwidth);
  opts.objective = cfg.objective;
  try {
    return optimize(c, opts);
  } catch (const Error& e) {
    throw StageError("optimize", e.what());
  }
}

Circuit compile(std::string_view source, const PipelineConfig& cfg, const std::string& file) {
  TypedProgram typed = front_end(source, cfg.scheme, file);
  LowerConfig lc;
  lc.bitwidth = cfg.bitwidth;
  lc.target_level = Level::Arith;
  lc.comparison_encoding = cfg.encoding;
  lc.scheme = cfg.scheme;
  Circuit c;
  try {
    c = lower_program(typed, lc);
  } catch (const LowerError& e) {
    throw StageError("lower", file + ":" + e.what());
  } catch (const Error& e) {
    throw StageError("lower", e.what());
  }
  c = optimize_circuit(c, cfg);
  if (cfg.level != Level::Bool) return c;
  try {
    return bitblast(c);
  } catch (const Error& e) {
    throw StageError("bitblast", e.what());
  }
}

}  // namespace hml
