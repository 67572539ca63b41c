#pragma once

#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "hml/ast.hpp"
#include "hml/types.hpp"

namespace hml {

using TypeEnv = std::map<std::string, SecType>;

struct Diagnostic {
  Position pos;
  std::string rule;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

// `file:line:col: error[RULE]: message`
std::string format_diagnostic(const std::string& file, const Diagnostic& d);

class TypeError : public Error {
 public:
  explicit TypeError(Diagnostic d);
  const Diagnostic& diagnostic() const { return diag_; }
  const std::string& rule() const { return diag_.rule; }
  Position position() const { return diag_.pos; }

 private:
  Diagnostic diag_;
};

// Every error found by check_program, in source order.
class TypeErrors : public Error {
 public:
  explicit TypeErrors(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

// A checked program with the type of every expression node. Move-only: the
// map is keyed by node address inside the owned Program.
class TypedProgram {
 public:
  TypedProgram(std::unique_ptr<ast::Program> program, Scheme scheme,
               std::unordered_map<const ast::Expr*, SecType> types);
  TypedProgram(TypedProgram&&) noexcept = default;
  TypedProgram& operator=(TypedProgram&&) noexcept = default;

  const ast::Program& program() const { return *program_; }
  const Scheme& scheme() const { return scheme_; }
  // Throws Error for nodes outside this program.
  const SecType& type_of(const ast::Expr& e) const;
  std::size_t size() const { return types_.size(); }

 private:
  std::unique_ptr<ast::Program> program_;
  Scheme scheme_;
  std::unordered_map<const ast::Expr*, SecType> types_;
};

// Converts written syntax; throws TypeError(rule "type") for ill-formed types.
SecType resolve_type(const ast::TypeSyntax& t, const Scheme& scheme, Position pos = {});

// Single-judgment entry points. Calls resolve against `functions` when given.
SecType check_expr(const TypeEnv& env, const ast::Expr& e, const Scheme& scheme,
                   const ast::Program* functions = nullptr);
TypeEnv check_stmt(const TypeEnv& env, const ast::Stmt& s, const Scheme& scheme,
                   const ast::Program* functions = nullptr);

// Checks every function and the main block. Throws TypeErrors.
TypedProgram check_program(const ast::Program& p, const Scheme& scheme);

}  // namespace hml
