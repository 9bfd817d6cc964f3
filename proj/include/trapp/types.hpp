#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace trapp {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using CellId = std::uint32_t;
using Distance = std::int64_t;

/// Marker for "no restriction of this type" on an edge or combination.
inline constexpr double kNoLimit = std::numeric_limits<double>::infinity();
inline constexpr Distance kUnreachable = std::numeric_limits<Distance>::max();

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidParam : Error {
  using Error::Error;
};
struct NonAdjacent : Error {
  using Error::Error;
};
struct UnknownVertex : Error {
  using Error::Error;
};
struct UnknownCell : Error {
  using Error::Error;
};
struct Infeasible : Error {
  using Error::Error;
};
struct DanglingRef : Error {
  using Error::Error;
};
struct MismatchedIndex : Error {
  using Error::Error;
};

/// Malformed input file; carries the byte offset of the offending position.
struct FormatError : Error {
  FormatError(const std::string& what, std::size_t byte_offset)
      : Error(what + " (byte " + std::to_string(byte_offset) + ")"), offset(byte_offset) {}
  std::size_t offset;
};

/// A (height, width, weight) limit triple. Components are finite positive
/// values or kNoLimit. Doubles as a restriction combination: the same
/// comparison rules apply whether the triple restricts an edge or labels a
/// precomputed path.
struct LimitTriple {
  double he = kNoLimit;
  double wi = kNoLimit;
  double wt = kNoLimit;

  friend bool operator==(const LimitTriple&, const LimitTriple&) = default;
};

/// Lexicographic (he, wi, wt) order; kNoLimit sorts after every finite value.
inline bool lex_less(const LimitTriple& a, const LimitTriple& b) {
  if (a.he != b.he) return a.he < b.he;
  if (a.wi != b.wi) return a.wi < b.wi;
  return a.wt < b.wt;
}

/// a fits everywhere b fits: every component of a is <= the one in b.
inline bool componentwise_le(const LimitTriple& a, const LimitTriple& b) {
  return a.he <= b.he && a.wi <= b.wi && a.wt <= b.wt;
}

/// A vehicle with finite positive height (m), width (m) and weight (t).
struct Vehicle {
  double he = 0;
  double wi = 0;
  double wt = 0;

  friend bool operator==(const Vehicle&, const Vehicle&) = default;
};

inline bool valid_vehicle(const Vehicle& c) {
  auto ok = [](double x) { return x > 0 && x < kNoLimit; };
  return ok(c.he) && ok(c.wi) && ok(c.wt);
}

/// Vehicle c is dominated by combination rc when every attribute of c is
/// within the corresponding component of rc. Any path feasible under rc is
/// then feasible for c.
inline bool dominates(const Vehicle& c, const LimitTriple& rc) {
  return c.he <= rc.he && c.wi <= rc.wi && c.wt <= rc.wt;
}

/// An actor (vehicle or combination) may traverse an edge when every actor
/// component is within the edge limit of the same type.
inline bool edge_feasible(const LimitTriple& limits, const LimitTriple& actor) {
  return actor.he <= limits.he && actor.wi <= limits.wi && actor.wt <= limits.wt;
}

inline bool edge_feasible(const LimitTriple& limits, const Vehicle& actor) {
  return actor.he <= limits.he && actor.wi <= limits.wi && actor.wt <= limits.wt;
}

inline LimitTriple as_triple(const Vehicle& c) { return {c.he, c.wi, c.wt}; }

}  // namespace trapp
