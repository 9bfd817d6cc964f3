#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "trapp/graph.hpp"
#include "trapp/types.hpp"

namespace trapp {

/// Shortest round-trip decimal form, the same on every run.
inline std::string fmt_double(double x) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

/// Limits print as "-" when absent.
inline std::string fmt_limit(double x) { return x == kNoLimit ? "-" : fmt_double(x); }

namespace detail {

/// Whitespace tokenizer that tracks byte offsets for FormatError reporting.
class LineScanner {
 public:
  LineScanner(std::string_view text, std::size_t base_offset)
      : text_(text), base_(base_offset) {}

  bool done() {
    skip_ws();
    return pos_ >= text_.size();
  }

  std::string_view token(const char* what) {
    skip_ws();
    if (pos_ >= text_.size()) throw FormatError(std::string("expected ") + what, base_ + pos_);
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ' ' && text_[pos_] != '\t') ++pos_;
    return text_.substr(start, pos_ - start);
  }

  std::uint64_t uint(const char* what) {
    auto t = token(what);
    std::uint64_t value = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || p != t.data() + t.size())
      throw FormatError(std::string("bad ") + what + " '" + std::string(t) + "'",
                        base_ + (t.data() - text_.data()));
    return value;
  }

  double real(const char* what) {
    auto t = token(what);
    double value = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || p != t.data() + t.size())
      throw FormatError(std::string("bad ") + what + " '" + std::string(t) + "'",
                        base_ + (t.data() - text_.data()));
    return value;
  }

  /// A finite positive value or "-" for kNoLimit.
  double limit(const char* what) {
    auto t = token(what);
    if (t == "-") return kNoLimit;
    double value = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || p != t.data() + t.size() || !(value > 0))
      throw FormatError(std::string("bad ") + what + " '" + std::string(t) + "'",
                        base_ + (t.data() - text_.data()));
    return value;
  }

  std::size_t offset() const { return base_ + pos_; }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }
  std::string_view text_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

/// Calls fn(scanner) for every non-empty line of text.
template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t eol = text.find('\n', offset);
    std::size_t len = (eol == std::string_view::npos ? text.size() : eol) - offset;
    std::string_view line = text.substr(offset, len);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    bool blank = line.find_first_not_of(" \t") == std::string_view::npos;
    if (!blank) {
      LineScanner scan(line, offset);
      fn(scan);
    }
    if (eol == std::string_view::npos) break;
    offset = eol + 1;
  }
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline void spit(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace detail

/// Graph text format: header "<#vertices> E=<#edges>", then one edge per
/// line as "u v length he wi wt" with "-" for an absent limit.
inline std::string graph_to_text(const RoadNetwork& net) {
  std::string out;
  out += std::to_string(net.vertex_count());
  out += " E=";
  out += std::to_string(net.edges().size());
  out += '\n';
  for (const auto& e : net.edges()) {
    out += std::to_string(e.u);
    out += ' ';
    out += std::to_string(e.v);
    out += ' ';
    out += std::to_string(e.length);
    out += ' ';
    out += fmt_limit(e.limits.he);
    out += ' ';
    out += fmt_limit(e.limits.wi);
    out += ' ';
    out += fmt_limit(e.limits.wt);
    out += '\n';
  }
  return out;
}

inline RoadNetwork graph_from_text(std::string_view text) {
  bool have_header = false;
  std::uint64_t n = 0, declared_edges = 0;
  std::vector<Edge> edges;
  detail::for_each_line(text, [&](detail::LineScanner& scan) {
    if (!have_header) {
      n = scan.uint("vertex count");
      auto t = scan.token("edge count");
      if (t.substr(0, 2) != "E=")
        throw FormatError("expected E=<count> in header", scan.offset());
      std::from_chars(t.data() + 2, t.data() + t.size(), declared_edges);
      have_header = true;
      return;
    }
    Edge e;
    e.u = static_cast<VertexId>(scan.uint("u"));
    e.v = static_cast<VertexId>(scan.uint("v"));
    e.length = static_cast<std::uint32_t>(scan.uint("length"));
    e.limits.he = scan.limit("he");
    e.limits.wi = scan.limit("wi");
    e.limits.wt = scan.limit("wt");
    if (!scan.done()) throw FormatError("trailing data on edge line", scan.offset());
    edges.push_back(e);
  });
  if (!have_header) throw FormatError("missing header", 0);
  if (edges.size() != declared_edges)
    throw FormatError("edge count mismatch: header says " + std::to_string(declared_edges) +
                          ", found " + std::to_string(edges.size()),
                      text.size());
  try {
    return RoadNetwork(static_cast<VertexId>(n), std::move(edges));
  } catch (const InvalidParam& e) {
    throw FormatError(e.what(), 0);
  }
}

inline void save_graph(const std::string& path, const RoadNetwork& net) {
  detail::spit(path, graph_to_text(net));
}

inline RoadNetwork load_graph(const std::string& path) {
  return graph_from_text(detail::slurp(path));
}

}  // namespace trapp
