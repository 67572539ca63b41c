#pragma once

#include <optional>
#include <string>

#include "hml/ast.hpp"
#include "hml/common.hpp"

namespace hml {

// Security scheme the type rules and share metadata are instantiated for.
struct Scheme {
  enum class Kind { Generic, Tfhe, AdditiveShare };

  Kind kind = Kind::Generic;
  Party parties = 0;  // AdditiveShare only; >= 2

  static Scheme generic() { return {Kind::Generic, 0}; }
  static Scheme tfhe() { return {Kind::Tfhe, 0}; }
  static Scheme additive(Party n);

  friend bool operator==(const Scheme&, const Scheme&) = default;
};

std::string to_string(const Scheme& s);

// "generic", "tfhe", "additive". `parties` is used for additive only.
Scheme parse_scheme(const std::string& name, Party parties);

// Plain(α) | Owned(α, o) | Arr(int, o) | plain int array.
struct SecType {
  ast::Atomic base = ast::Atomic::Int;
  bool is_array = false;
  std::optional<OwnerSet> owners;  // absent => plaintext

  static SecType plain(ast::Atomic a) { return {a, false, std::nullopt}; }
  static SecType owned(ast::Atomic a, OwnerSet o) { return {a, false, std::move(o)}; }
  static SecType array(OwnerSet o) { return {ast::Atomic::Int, true, std::move(o)}; }
  static SecType plain_array() { return {ast::Atomic::Int, true, std::nullopt}; }

  bool is_plain() const { return !owners.has_value(); }
  // Owner set, empty for plaintext.
  OwnerSet owner_set() const { return owners.value_or(OwnerSet{}); }

  friend bool operator==(const SecType&, const SecType&) = default;
};

// "int", "(int,{1})", "arr(int,{1,2})", "arr(int)".
std::string to_string(const SecType& t);

// Whether data owned by `o` may be revealed to `audience`.
bool valid(const OwnerSet& o, const OwnerSet& audience, const Scheme& scheme);

}  // namespace hml
