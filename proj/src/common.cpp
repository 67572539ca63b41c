#include "hml/common.hpp"

#include <sstream>

namespace hml {

std::string to_string(Position pos) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

OwnerSet::OwnerSet(std::initializer_list<Party> parties) : OwnerSet(std::vector<Party>(parties)) {}

OwnerSet::OwnerSet(std::vector<Party> parties) : parties_(std::move(parties)) {
  std::sort(parties_.begin(), parties_.end());
  parties_.erase(std::unique(parties_.begin(), parties_.end()), parties_.end());
}

OwnerSet OwnerSet::range(Party count) {
  std::vector<Party> out(count);
  for (Party i = 0; i < count; ++i) out[i] = i;
  return OwnerSet(std::move(out));
}

bool OwnerSet::contains(Party p) const {
  return std::binary_search(parties_.begin(), parties_.end(), p);
}

bool OwnerSet::subset_of(const OwnerSet& other) const {
  return std::includes(other.parties_.begin(), other.parties_.end(), parties_.begin(),
                       parties_.end());
}

OwnerSet OwnerSet::unite(const OwnerSet& other) const {
  OwnerSet out;
  std::set_union(parties_.begin(), parties_.end(), other.parties_.begin(), other.parties_.end(),
                 std::back_inserter(out.parties_));
  return out;
}

OwnerSet OwnerSet::intersect(const OwnerSet& other) const {
  OwnerSet out;
  std::set_intersection(parties_.begin(), parties_.end(), other.parties_.begin(),
                        other.parties_.end(), std::back_inserter(out.parties_));
  return out;
}

std::string to_string(const OwnerSet& set) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (Party p : set) {
    if (!first) os << ',';
    os << p;
    first = false;
  }
  os << '}';
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const OwnerSet& set) { return os << to_string(set); }

}  // namespace hml
