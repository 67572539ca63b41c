#include "hml/backends.hpp"

namespace hml {

namespace field {

std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;  // < 2^62, no overflow
  return s >= kPrime ? s - kPrime : s;
}

std::uint64_t sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kPrime - b; }

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  // 2^61 = 1 (mod p)
  std::uint64_t lo = static_cast<std::uint64_t>(p) & kPrime;
  std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
  return add(lo, hi % kPrime);
}

std::uint64_t embed(std::int64_t v) {
  if (v >= 0) return static_cast<std::uint64_t>(v) % kPrime;
  std::uint64_t m = (~static_cast<std::uint64_t>(v) + 1) % kPrime;
  return m == 0 ? 0 : kPrime - m;
}

std::int64_t lift(std::uint64_t a) {
  return a > kPrime / 2 ? -static_cast<std::int64_t>(kPrime - a) : static_cast<std::int64_t>(a);
}

std::uint64_t random(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(0, kPrime - 1);
  return dist(rng);
}

}  // namespace field

ShareVector share(Fe value, std::uint32_t n, std::mt19937_64& rng) {
  if (n < 2) throw Error("share: at least two players are required");
  ShareVector sv;
  sv.players = OwnerSet::range(n);
  sv.observers = sv.players;
  sv.threshold = n;
  Fe rest = value % field::kPrime;
  for (Party p = 0; p + 1 < n; ++p) {
    Fe r = field::random(rng);
    sv.shares[p] = r;
    rest = field::sub(rest, r);
  }
  sv.shares[n - 1] = rest;
  return sv;
}

ShareVector share(Fe value, std::uint32_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return share(value, n, rng);
}

Fe reconstruct(const ShareVector& sv) {
  Fe sum = 0;
  for (Party p : sv.players.parties()) {
    auto it = sv.shares.find(p);
    if (it == sv.shares.end())
      throw IncompleteSharesError("reconstruct: missing share of player " + std::to_string(p));
    sum = field::add(sum, it->second);
  }
  if (sv.players.empty() || sv.shares.size() != sv.players.size())
    throw IncompleteSharesError("reconstruct: share set does not match the players");
  return sum;
}

BeaverTriple make_triple(std::uint32_t n, std::mt19937_64& rng) {
  const Fe a = field::random(rng), b = field::random(rng);
  BeaverTriple t{share(a, n, rng), share(b, n, rng), share(field::mul(a, b), n, rng), false};
  return t;
}

ShareVector beaver_mul(const ShareVector& x, const ShareVector& y, BeaverTriple& t, BeaverStats* stats) {
  if (t.consumed) throw TripleExhaustedError("beaver_mul: triple already consumed");
  if (x.players != y.players || x.players != t.a.players)
    throw PlayerMismatchError("beaver_mul: operands are shared among different players");
  t.consumed = true;
  // Each player multicasts its shares of d and e; everyone sums them.
  Fe d = 0, e = 0;
  for (Party p : x.players.parties()) {
    d = field::add(d, field::sub(x.shares.at(p), t.a.shares.at(p)));
    e = field::add(e, field::sub(y.shares.at(p), t.b.shares.at(p)));
  }
  if (stats) {
    stats->rounds += 1;
    stats->multicasts += 2;
  }
  ShareVector z = x;
  const Party first = x.players.parties().front();
  for (Party p : x.players.parties()) {
    Fe s = t.c.shares.at(p);
    s = field::add(s, field::mul(d, t.b.shares.at(p)));
    s = field::add(s, field::mul(e, t.a.shares.at(p)));
    if (p == first) s = field::add(s, field::mul(d, e));
    z.shares[p] = s;
  }
  z.provider = x.provider.unite(y.provider);
  return z;
}

}  // namespace hml
