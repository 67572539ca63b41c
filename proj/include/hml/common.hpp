#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hml {

using Party = std::uint32_t;

// Source location, 1-based.
struct Position {
  std::uint32_t line = 1;
  std::uint32_t column = 1;

  friend auto operator<=>(const Position&, const Position&) = default;
  friend bool operator==(const Position&, const Position&) = default;
};

std::string to_string(Position pos);

// Sorted, duplicate-free set of party ids. Used for owner sets, providers,
// players, observers and reveal audiences.
class OwnerSet {
 public:
  OwnerSet() = default;
  OwnerSet(std::initializer_list<Party> parties);
  explicit OwnerSet(std::vector<Party> parties);

  static OwnerSet range(Party count);  // {0, ..., count-1}

  bool empty() const { return parties_.empty(); }
  std::size_t size() const { return parties_.size(); }
  bool contains(Party p) const;
  bool subset_of(const OwnerSet& other) const;

  OwnerSet unite(const OwnerSet& other) const;
  OwnerSet intersect(const OwnerSet& other) const;

  const std::vector<Party>& parties() const { return parties_; }
  auto begin() const { return parties_.begin(); }
  auto end() const { return parties_.end(); }

  friend auto operator<=>(const OwnerSet&, const OwnerSet&) = default;
  friend bool operator==(const OwnerSet&, const OwnerSet&) = default;

 private:
  std::vector<Party> parties_;
};

// Renders as "{1,2}".
std::string to_string(const OwnerSet& set);
std::ostream& operator<<(std::ostream& os, const OwnerSet& set);

// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Deep-copying owning pointer for recursive value types (AST nodes).
template <typename T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;
  ~Box() = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }
  const T* get() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

// std::visit helper.
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace hml
