#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "digraph.hpp"
#include "gadgets.hpp"

namespace maxleaf {

// Text format, one record per line:
//   c <comment>                ignored
//   p <n> <m>                  header: n vertices (ids 1..n), m arcs; required, once
//   a <tail> <head>            arc, 1-indexed; exactly m of these
//   r <root>                   optional, at most once
//   k <target>                 optional, at most once
// Duplicate arcs, self-loops and out-of-range endpoints are hard errors, not
// silently dropped; every error carries its 1-based line number.

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

struct ParsedDigraph {
  Digraph graph;
  std::optional<Vertex> root;
  std::optional<int> k;
};

namespace detail {

inline bool read_int(std::istringstream& in, long long& out) {
  return static_cast<bool>(in >> out);
}

inline void expect_done(std::istringstream& in, int line) {
  std::string extra;
  if (in >> extra) throw ParseError(line, "unexpected trailing token '" + extra + "'");
}

}  // namespace detail

inline ParsedDigraph parse_digraph(const std::string& text) {
  ParsedDigraph res;
  std::istringstream lines(text);
  std::string raw;
  int line = 0;
  long long n = -1, m = -1, arcs_seen = 0;
  while (std::getline(lines, raw)) {
    ++line;
    std::istringstream in(raw);
    std::string tag;
    if (!(in >> tag)) continue;  // blank line
    if (tag == "c") continue;
    if (tag == "p") {
      if (n >= 0) throw ParseError(line, "duplicate p line");
      if (!detail::read_int(in, n) || !detail::read_int(in, m))
        throw ParseError(line, "p line needs two integers");
      detail::expect_done(in, line);
      if (n < 1 || m < 0) throw ParseError(line, "p line out of range");
      for (long long v = 1; v <= n; ++v) res.graph.add_vertex(static_cast<Vertex>(v));
      continue;
    }
    if (n < 0) throw ParseError(line, "record before the p line");
    if (tag == "a") {
      long long t, h;
      if (!detail::read_int(in, t) || !detail::read_int(in, h))
        throw ParseError(line, "a line needs two integers");
      detail::expect_done(in, line);
      if (t < 1 || t > n || h < 1 || h > n)
        throw ParseError(line, "arc endpoint out of range");
      if (t == h) throw ParseError(line, "self-loop rejected");
      if (!res.graph.add_arc(static_cast<Vertex>(t), static_cast<Vertex>(h)))
        throw ParseError(line, "duplicate arc rejected");
      ++arcs_seen;
      continue;
    }
    if (tag == "r") {
      if (res.root) throw ParseError(line, "duplicate r line");
      long long r;
      if (!detail::read_int(in, r)) throw ParseError(line, "r line needs an integer");
      detail::expect_done(in, line);
      if (r < 1 || r > n) throw ParseError(line, "root out of range");
      res.root = static_cast<Vertex>(r);
      continue;
    }
    if (tag == "k") {
      if (res.k) throw ParseError(line, "duplicate k line");
      long long k;
      if (!detail::read_int(in, k)) throw ParseError(line, "k line needs an integer");
      detail::expect_done(in, line);
      if (k < 1) throw ParseError(line, "k must be >= 1");
      res.k = static_cast<int>(k);
      continue;
    }
    throw ParseError(line, "unknown record '" + tag + "'");
  }
  if (n < 0) throw ParseError(line, "missing p line");
  if (arcs_seen != m)
    throw ParseError(line, "p line promised " + std::to_string(m) + " arcs, got " +
                               std::to_string(arcs_seen));
  return res;
}

/// Canonical text: header, then arcs ascending, then r and k if present.
/// Requires vertex ids 1..n (normalize_ids first for surgery output);
/// parse(serialize(d)) reproduces d exactly.
inline std::string serialize_digraph(const Digraph& d, std::optional<Vertex> root = {},
                                     std::optional<int> k = {}) {
  std::vector<Vertex> vs = d.vertices();
  for (std::size_t i = 0; i < vs.size(); ++i)
    if (vs[i] != static_cast<Vertex>(i + 1))
      throw std::invalid_argument("serialize_digraph: vertex ids must be 1..n");
  std::ostringstream os;
  os << "p " << d.vertex_count() << " " << d.arc_count() << "\n";
  for (const Arc& a : d.arcs()) os << "a " << a.tail << " " << a.head << "\n";
  if (root) os << "r " << *root << "\n";
  if (k) os << "k " << *k << "\n";
  return os.str();
}

struct Normalized {
  Digraph graph;                       // same shape, ids 1..n
  std::map<Vertex, Vertex> to_normal;  // old id -> new id
};

inline Normalized normalize_ids(const Digraph& d) {
  Normalized res;
  Vertex next = 1;
  for (Vertex v : d.vertices()) {
    res.to_normal[v] = next;
    res.graph.add_vertex(next);
    ++next;
  }
  for (const Arc& a : d.arcs()) res.graph.add_arc(res.to_normal[a.tail], res.to_normal[a.head]);
  return res;
}

// Set Cover file: first line "n m b", then exactly m lines of space-separated
// element ids, one line per set (a blank line is an empty set). Anything
// after the m set lines must be blank.
inline SetCoverInstance parse_set_cover(const std::string& text) {
  std::istringstream lines(text);
  std::string raw;
  int line = 0;
  SetCoverInstance sc;
  long long n = -1, m = -1, b = -1;
  long long sets_seen = 0;
  while (std::getline(lines, raw)) {
    ++line;
    std::istringstream in(raw);
    if (n < 0) {
      if (!detail::read_int(in, n) || !detail::read_int(in, m) || !detail::read_int(in, b))
        throw ParseError(line, "header needs three integers: n m b");
      detail::expect_done(in, line);
      if (n < 1 || m < 0 || b < 0) throw ParseError(line, "header out of range");
      continue;
    }
    if (sets_seen == m) {  // only trailing blank lines allowed
      std::string extra;
      if (in >> extra) throw ParseError(line, "unexpected content after the last set");
      continue;
    }
    std::set<int> s;
    long long e;
    while (detail::read_int(in, e)) {
      if (e < 1 || e > n) throw ParseError(line, "element out of range");
      if (!s.insert(static_cast<int>(e)).second)
        throw ParseError(line, "duplicate element in one set");
    }
    if (!in.eof()) {  // the loop stopped on a non-integer token
      in.clear();
      std::string extra;
      in >> extra;
      throw ParseError(line, "unexpected token '" + extra + "' in set line");
    }
    sc.family.push_back(std::move(s));
    ++sets_seen;
  }
  if (n < 0) throw ParseError(line, "missing header");
  if (sets_seen != m)
    throw ParseError(line, "header promised " + std::to_string(m) + " sets, got " +
                               std::to_string(sets_seen));
  sc.universe_size = static_cast<int>(n);
  sc.bound = static_cast<int>(b);
  validate_set_cover(sc);  // coverage and bound range
  return sc;
}

}  // namespace maxleaf
