// hmlc: check | lower | opt | estimate | run | emit
// Exit codes: 0 success, 1 user or program error, 2 environment error.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <json.hpp>

#include "hml/backends.hpp"
#include "hml/estimator.hpp"
#include "hml/optimizer.hpp"
#include "hml/pipeline.hpp"

namespace {

using namespace hml;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kUserError = 1;
constexpr int kEnvError = 2;

struct Options {
  std::string source;
  std::string scheme = "generic";
  std::uint32_t bitwidth = 64;
  std::string level = "arith";
  std::string passes;
  bool no_opt = false;
  std::vector<std::string> cost_models;
  std::string objective;
  std::string inputs;
  std::string backend = "clear";
  std::uint32_t parties = 3;
  std::uint64_t seed = 0;
  std::string output;
  std::string spec;
  std::string encoding = "auto";
};

// Flags given on the command line; these win over --spec.
struct Given {
  std::set<std::string> names;
  bool has(const std::string& n) const { return names.contains(n); }
};

void apply_spec(Options& o, const Given& given) {
  if (o.spec.empty()) return;
  json j;
  try {
    j = json::parse(read_file(o.spec));
  } catch (const json::exception& e) {
    throw Error(std::string("spec: malformed JSON: ") + e.what());
  }
  auto take = [&](const char* key, auto& field) {
    if (j.contains(key) && !given.has(key)) field = j[key].get<std::decay_t<decltype(field)>>();
  };
  try {
    take("scheme", o.scheme);
    take("bitwidth", o.bitwidth);
    take("level", o.level);
    take("objective", o.objective);
    take("inputs", o.inputs);
    take("backend", o.backend);
    take("parties", o.parties);
    take("seed", o.seed);
    take("encoding", o.encoding);
    take("no_opt", o.no_opt);
    if (j.contains("passes") && !given.has("passes")) {
      if (j["passes"].is_array()) {
        o.passes.clear();
        for (const auto& p : j["passes"]) o.passes += (o.passes.empty() ? "" : ",") + p.get<std::string>();
      } else {
        o.passes = j["passes"].get<std::string>();
      }
    }
    if (j.contains("cost_model") && !given.has("cost_model")) {
      o.cost_models.clear();
      if (j["cost_model"].is_array())
        for (const auto& m : j["cost_model"]) o.cost_models.push_back(m.get<std::string>());
      else
        o.cost_models.push_back(j["cost_model"].get<std::string>());
    }
  } catch (const json::exception& e) {
    throw Error(std::string("spec: ") + e.what());
  }
}

PipelineConfig pipeline_config(const Options& o) {
  PipelineConfig cfg;
  cfg.scheme = parse_scheme(o.scheme, o.parties);
  if (o.bitwidth < 4 || o.bitwidth > 64) throw Error("--bitwidth must be between 4 and 64");
  cfg.bitwidth = o.bitwidth;
  if (o.level != "arith" && o.level != "bool") throw Error("--level must be arith or bool");
  cfg.level = o.level == "bool" ? Level::Bool : Level::Arith;
  cfg.encoding = parse_comparison_encoding(o.encoding);
  if (o.no_opt) cfg.passes = std::vector<std::string>{};
  else if (!o.passes.empty()) cfg.passes = parse_pass_list(o.passes);
  cfg.objective = o.objective;
  return cfg;
}

std::string model_locator(const std::string& name) {
  if (name == "secret_sharing" || name == "mult_depth" || name == "boolean") return name;
  if (!std::filesystem::exists(name)) throw IoError("cannot read cost model '" + name + "'");
  return name;
}

std::vector<CostModel> cost_models(const Options& o, std::uint32_t bitwidth) {
  std::vector<CostModel> out;
  for (const auto& m : o.cost_models) out.push_back(resolve_cost_model(model_locator(m), bitwidth));
  if (out.empty()) out.push_back(secret_sharing_model(bitwidth));
  return out;
}

bool looks_like_json(const std::string& text) {
  auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && text[pos] == '{';
}

// Source programs are compiled; circuit JSON is taken as is and, for `opt`,
// run through the pass list.
Circuit load_circuit(const Options& o, bool optimize, bool allow_json) {
  const std::string text = read_file(o.source);
  PipelineConfig cfg = pipeline_config(o);
  auto models = cost_models(o, cfg.bitwidth);
  cfg.model = models.front();
  if (looks_like_json(text)) {
    if (!allow_json) throw Error("expected a source program, got circuit JSON");
    Circuit c = circuit_from_json(text);
    if (auto errs = validate(c); !errs.empty()) throw CircuitError("invalid circuit: " + errs.front());
    return optimize ? optimize_circuit(c, cfg) : c;
  }
  if (!optimize) cfg.passes = std::vector<std::string>{};
  return compile(text, cfg, o.source);
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty()) std::cout << text;
  else write_file(o.output, text);
}

int cmd_check(const Options& o) {
  const std::string text = read_file(o.source);
  front_end(text, parse_scheme(o.scheme, o.parties), o.source);
  std::cout << o.source << ": ok\n";
  return kOk;
}

int cmd_estimate(const Options& o) {
  Circuit c = load_circuit(o, true, true);
  auto models = cost_models(o, c.bitwidth);
  if (models.size() == 1) {
    emit(o, report_to_json(estimate(c, models.front())));
    return kOk;
  }
  if (o.objective.empty()) throw Error("ranking several cost models needs --objective");
  json ranking = json::array();
  for (const auto& [name, value] : rank_backends(c, models, o.objective))
    ranking.push_back({{"model", name}, {"value", value}});
  json reports = json::array();
  for (const auto& m : models) reports.push_back(json::parse(report_to_json(estimate(c, m))));
  emit(o, json{{"objective", o.objective}, {"ranking", ranking}, {"reports", reports}}.dump(2) + "\n");
  return kOk;
}

int cmd_run(const Options& o) {
  if (o.inputs.empty()) throw Error("run needs --inputs");
  Circuit c = load_circuit(o, !o.no_opt, true);
  InputMap inputs = parse_inputs_json(read_file(o.inputs));
  if (o.backend == "clear") {
    emit(o, outputs_to_json(interpret_clear(c, inputs)));
    return kOk;
  }
  if (o.backend != "shares") throw Error("--backend must be clear or shares");
  SimulateOptions so;
  so.parties = o.parties;
  so.seed = o.seed;
  so.model = cost_models(o, c.bitwidth).front();
  SharedResult r = simulate_shared(c, inputs, so);
  emit(o, outputs_to_json(r.outputs));
  std::cerr << "trace: "
            << json{{"rounds", r.trace.rounds},
                    {"multicasts", r.trace.multicasts},
                    {"triples_consumed", r.trace.triples_consumed},
                    {"bits_consumed", r.trace.bits_consumed}}
                   .dump()
            << "\n";
  return kOk;
}

int cmd_emit(const Options& o) {
  if (o.level != "bool") throw Error("emit requires --level bool");
  emit(o, emit_gatelist(load_circuit(o, !o.no_opt, true)));
  return kOk;
}

void add_common(CLI::App* sub, Options& o, bool pipeline) {
  sub->add_option("source", o.source, "Program (.hml) or circuit JSON")->required();
  sub->add_option("--scheme", o.scheme, "generic | tfhe | additive");
  sub->add_option("-n,--parties", o.parties, "Number of parties");
  sub->add_option("--spec", o.spec, "JSON file of defaults; flags win");
  if (!pipeline) return;
  sub->add_option("--bitwidth", o.bitwidth, "Word width in bits");
  sub->add_option("--level", o.level, "arith | bool");
  sub->add_option("--passes", o.passes, "Comma-separated pass list");
  sub->add_flag("--no-opt", o.no_opt, "Disable all optimization passes");
  sub->add_option("--cost-model", o.cost_models, "Builtin model name or JSON path (repeatable)");
  sub->add_option("--objective", o.objective, "Resource to minimize");
  sub->add_option("--encoding", o.encoding, "Comparison encoding: direct | rewrite | auto");
  sub->add_option("--inputs", o.inputs, "Inputs JSON");
  sub->add_option("--backend", o.backend, "clear | shares");
  sub->add_option("--seed", o.seed, "Simulation seed");
  sub->add_option("-o,--output", o.output, "Output file (default stdout)");
}

Given given_flags(CLI::App* sub) {
  Given g;
  const std::pair<const char*, const char*> flags[] = {
      {"--scheme", "scheme"},     {"--parties", "parties"},   {"--bitwidth", "bitwidth"},
      {"--level", "level"},       {"--passes", "passes"},     {"--no-opt", "no_opt"},
      {"--cost-model", "cost_model"}, {"--objective", "objective"}, {"--encoding", "encoding"},
      {"--inputs", "inputs"},     {"--backend", "backend"},   {"--seed", "seed"}};
  for (const auto& [flag, key] : flags) {
    try {
      if (sub->get_option(flag)->count() > 0) g.names.insert(key);
    } catch (const CLI::OptionNotFound&) {
    }
  }
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hmlc: compile .hml programs to secure-computation circuits"};
  app.require_subcommand(1);
  Options o;
  struct Cmd {
    const char* name;
    const char* help;
    bool pipeline;
    int (*run)(const Options&);
  };
  const Cmd cmds[] = {
      {"check", "Type-check a program", false, cmd_check},
      {"lower", "Write the unoptimized circuit JSON", true,
       [](const Options& o) {
         emit(o, circuit_to_json(load_circuit(o, false, false)));
         return kOk;
       }},
      {"opt", "Write the optimized circuit JSON", true,
       [](const Options& o) {
         emit(o, circuit_to_json(load_circuit(o, true, true)));
         return kOk;
       }},
      {"estimate", "Write a resource report", true, cmd_estimate},
      {"run", "Execute on a backend", true, cmd_run},
      {"emit", "Write the boolean gate list", true, cmd_emit},
  };
  std::vector<std::pair<CLI::App*, const Cmd*>> subs;
  for (const auto& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, o, c.pipeline);
    subs.emplace_back(sub, &c);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUserError;
  }

  for (const auto& [sub, cmd] : subs) {
    if (!sub->parsed()) continue;
    try {
      apply_spec(o, given_flags(sub));
      return cmd->run(o);
    } catch (const IoError& e) {
      std::cerr << "hmlc: " << e.what() << "\n";
      return kEnvError;
    } catch (const StageError& e) {
      std::cerr << e.what() << "\n";
      return kUserError;
    } catch (const std::exception& e) {
      std::cerr << "hmlc " << cmd->name << ": " << e.what() << "\n";
      return kUserError;
    }
  }
  return kUserError;
}
