#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "treeaut/error.hpp"
#include "treeaut/perm.hpp"

namespace treeaut {

/// A vertex of the d-regular tree, named by its reduced color word from the
/// base vertex. The edge between w and w.k carries color k.
///
/// Letters are stored one per byte. Ordering is length-lexicographic.
class Vertex {
 public:
  Vertex() = default;

  static Vertex base() { return {}; }

  /// Builds a vertex from a word, reducing adjacent equal letters.
  static Vertex from_word(const std::vector<Color>& word) {
    Vertex v;
    for (Color c : word) v = v.neighbor(c);
    return v;
  }

  /// Text form: "e" for the base, otherwise dot-separated colors ("1.2.1").
  /// The word must already be reduced.
  static Vertex parse(std::string_view text) {
    if (text == "e" || text.empty()) return base();
    Vertex v;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t dot = text.find('.', pos);
      if (dot == std::string_view::npos) dot = text.size();
      std::string_view tok = text.substr(pos, dot - pos);
      if (tok.empty() || tok.size() > 3 || !std::all_of(tok.begin(), tok.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
        throw Error(ErrorKind::MalformedVertex, "\"" + std::string(text) + "\"");
      const int c = std::stoi(std::string(tok));
      if (c < 1 || c > kMaxDegree) throw Error(ErrorKind::MalformedVertex, "color out of range in \"" + std::string(text) + "\"");
      if (!v.w_.empty() && v.last() == c) throw Error(ErrorKind::MalformedVertex, "word not reduced: \"" + std::string(text) + "\"");
      v.w_.push_back(static_cast<char>(c));
      pos = dot + 1;
    }
    return v;
  }

  std::size_t length() const { return w_.size(); }
  bool is_base() const { return w_.empty(); }
  Color letter(std::size_t i) const { return static_cast<unsigned char>(w_[i]); }
  Color last() const { return static_cast<unsigned char>(w_.back()); }

  std::vector<Color> word() const {
    std::vector<Color> out;
    out.reserve(w_.size());
    for (char ch : w_) out.push_back(static_cast<unsigned char>(ch));
    return out;
  }

  /// The vertex across the edge of color k.
  Vertex neighbor(Color k) const {
    Vertex v = *this;
    if (!v.w_.empty() && v.last() == k)
      v.w_.pop_back();
    else
      v.w_.push_back(static_cast<char>(k));
    return v;
  }

  Vertex parent() const {
    Vertex v = *this;
    v.w_.pop_back();
    return v;
  }

  Vertex prefix(std::size_t n) const {
    Vertex v;
    v.w_ = w_.substr(0, n);
    return v;
  }

  /// Image of `v` under the color-preserving translation by this word.
  Vertex translate(const Vertex& v) const {
    Vertex out = *this;
    for (char ch : v.w_) out = out.neighbor(static_cast<unsigned char>(ch));
    return out;
  }

  /// The word read backwards; translation by it inverts translation by this.
  Vertex reversed() const {
    Vertex v;
    v.w_.assign(w_.rbegin(), w_.rend());
    return v;
  }

  std::string to_string() const {
    if (w_.empty()) return "e";
    std::string s;
    for (std::size_t i = 0; i < w_.size(); ++i) {
      if (i) s += '.';
      s += std::to_string(static_cast<unsigned char>(w_[i]));
    }
    return s;
  }

  const std::string& key() const { return w_; }

  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend std::strong_ordering operator<=>(const Vertex& a, const Vertex& b) {
    if (auto c = a.w_.size() <=> b.w_.size(); c != 0) return c;
    return a.w_.compare(b.w_) <=> 0;
  }

 private:
  std::string w_;
};

struct VertexHash {
  std::size_t operator()(const Vertex& v) const { return std::hash<std::string>{}(v.key()); }
};

inline Vertex neighbor(const Vertex& v, Color k) { return v.neighbor(k); }

inline std::size_t common_prefix(const Vertex& u, const Vertex& v) {
  std::size_t n = std::min(u.length(), v.length());
  std::size_t i = 0;
  while (i < n && u.letter(i) == v.letter(i)) ++i;
  return i;
}

inline int distance(const Vertex& u, const Vertex& v) {
  return static_cast<int>(u.length() + v.length() - 2 * common_prefix(u, v));
}

/// An edge, named by its endpoint nearer the base and its color.
struct EdgeRef {
  Vertex near;
  Color color = 1;

  Vertex far() const { return near.neighbor(color); }

  static EdgeRef between(const Vertex& a, const Vertex& b) {
    if (distance(a, b) != 1) throw Error(ErrorKind::NotGeodesic, "vertices are not adjacent");
    if (a.length() < b.length()) return {a, b.last()};
    return {b, a.last()};
  }

  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
};

/// A geodesic walk: a start vertex and the colors of successive edges.
class Segment {
 public:
  Segment() = default;
  Segment(Vertex start, std::vector<Color> colors) : start_(std::move(start)), colors_(std::move(colors)) {
    for (std::size_t i = 1; i < colors_.size(); ++i)
      if (colors_[i] == colors_[i - 1]) throw Error(ErrorKind::NotGeodesic, "repeated color backtracks");
  }

  const Vertex& start() const { return start_; }
  const std::vector<Color>& colors() const { return colors_; }
  std::size_t length() const { return colors_.size(); }

  std::vector<Vertex> vertices() const {
    std::vector<Vertex> out{start_};
    for (Color c : colors_) out.push_back(out.back().neighbor(c));
    return out;
  }

  Vertex end() const {
    Vertex v = start_;
    for (Color c : colors_) v = v.neighbor(c);
    return v;
  }

  Segment reversed() const { return Segment(end(), std::vector<Color>(colors_.rbegin(), colors_.rend())); }

  friend bool operator==(const Segment&, const Segment&) = default;

 private:
  Vertex start_;
  std::vector<Color> colors_;
};

/// Geodesic from u to v: climb from u to the common ancestor, then descend.
inline Segment geodesic(const Vertex& u, const Vertex& v) {
  const std::size_t p = common_prefix(u, v);
  std::vector<Color> colors;
  colors.reserve(u.length() + v.length() - 2 * p);
  for (std::size_t i = u.length(); i > p; --i) colors.push_back(u.letter(i - 1));
  for (std::size_t i = p; i < v.length(); ++i) colors.push_back(v.letter(i));
  return Segment(u, std::move(colors));
}

using PointOrMid = std::variant<Vertex, EdgeRef>;

inline PointOrMid midpoint(const Vertex& u, const Vertex& v) {
  const auto path = geodesic(u, v).vertices();
  const std::size_t n = path.size() - 1;
  if (n % 2 == 0) return path[n / 2];
  return EdgeRef::between(path[n / 2], path[n / 2 + 1]);
}

/// All vertices within distance R of v, in BFS order (colors ascending).
inline std::vector<Vertex> ball(const Vertex& v, int radius, int d) {
  if (radius < 0) throw Error(ErrorKind::OutOfRange, "negative radius");
  std::vector<Vertex> out{v};
  std::vector<int> dist{0};
  std::vector<Color> came{0};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (dist[i] == radius) continue;
    for (Color k = 1; k <= d; ++k) {
      if (k == came[i]) continue;
      out.push_back(out[i].neighbor(k));
      dist.push_back(dist[i] + 1);
      came.push_back(k);
    }
  }
  return out;
}

/// Closed-form ball size 1 + d((d-1)^R - 1)/(d-2).
inline long long ball_size(int d, int radius) {
  long long pow = 1;
  for (int i = 0; i < radius; ++i) pow *= (d - 1);
  return 1 + static_cast<long long>(d) * (pow - 1) / (d - 2);
}

/// True iff all points lie on one geodesic: the union of pairwise geodesics
/// has maximum vertex degree at most 2.
inline bool is_aligned(const std::vector<Vertex>& points) {
  if (points.size() <= 2) return true;
  std::set<std::pair<Vertex, Vertex>> edges;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const auto path = geodesic(points[i], points[j]).vertices();
      for (std::size_t k = 1; k < path.size(); ++k) {
        auto a = path[k - 1], b = path[k];
        if (b < a) std::swap(a, b);
        edges.emplace(a, b);
      }
    }
  std::map<Vertex, int> degree;
  for (const auto& [a, b] : edges) {
    if (++degree[a] > 2) return false;
    if (++degree[b] > 2) return false;
  }
  return true;
}

/// An eventually periodic color sequence, indexed from 1.
struct PeriodicSeq {
  std::vector<Color> pre;
  std::vector<Color> period;

  Color at(long long i) const {
    if (i < 1) throw Error(ErrorKind::OutOfRange, "periodic sequence index");
    if (i <= static_cast<long long>(pre.size())) return pre[static_cast<std::size_t>(i - 1)];
    const long long j = i - 1 - static_cast<long long>(pre.size());
    return period[static_cast<std::size_t>(j % static_cast<long long>(period.size()))];
  }

  friend bool operator==(const PeriodicSeq&, const PeriodicSeq&) = default;
};

/// A bi-infinite geodesic through `anchor` = v_0. `forward.at(i)` colors the
/// edge (v_{i-1}, v_i); `backward.at(i)` colors the edge (v_{-i}, v_{-i+1}).
struct LineSpec {
  Vertex anchor;
  PeriodicSeq forward;
  PeriodicSeq backward;

  void validate(int d) const {
    for (const PeriodicSeq* s : {&forward, &backward}) {
      if (s->period.empty()) throw Error(ErrorKind::NotGeodesic, "line needs a nonempty period");
      std::vector<Color> unrolled = s->pre;
      unrolled.insert(unrolled.end(), s->period.begin(), s->period.end());
      unrolled.insert(unrolled.end(), s->period.begin(), s->period.end());
      for (Color c : unrolled)
        if (c < 1 || c > d) throw Error(ErrorKind::OutOfRange, "line color " + std::to_string(c));
      for (std::size_t i = 1; i < unrolled.size(); ++i)
        if (unrolled[i] == unrolled[i - 1]) throw Error(ErrorKind::NotGeodesic, "line backtracks");
    }
    if (forward.at(1) == backward.at(1)) throw Error(ErrorKind::NotGeodesic, "line backtracks at the anchor");
  }

  friend bool operator==(const LineSpec&, const LineSpec&) = default;
};

/// Color of the edge (v_{i-1}, v_i).
inline Color line_edge_color(const LineSpec& line, long long i) {
  if (i >= 1) return line.forward.at(i);
  return line.backward.at(1 - i);
}

inline Vertex line_vertex(const LineSpec& line, long long i) {
  Vertex v = line.anchor;
  if (i >= 0)
    for (long long j = 1; j <= i; ++j) v = v.neighbor(line.forward.at(j));
  else
    for (long long j = 1; j <= -i; ++j) v = v.neighbor(line.backward.at(j));
  return v;
}

/// Nearest-point projection of a vertex onto a line.
struct LineProjection {
  long long index = 0;        // the line vertex v_index nearest to the vertex
  std::vector<Color> away;    // colors walked from v_index out to the vertex
};

inline LineProjection line_project(const LineSpec& line, const Vertex& v) {
  // Coordinates relative to the anchor (translations preserve colors).
  const Vertex rel = line.anchor.reversed().translate(v);
  const auto word = rel.word();
  std::size_t j = 0;
  while (j < word.size() && word[j] == line.forward.at(static_cast<long long>(j) + 1)) ++j;
  long long index = static_cast<long long>(j);
  if (j == 0) {
    while (j < word.size() && word[j] == line.backward.at(static_cast<long long>(j) + 1)) ++j;
    index = -static_cast<long long>(j);
  }
  return {index, std::vector<Color>(word.begin() + static_cast<std::ptrdiff_t>(j), word.end())};
}

inline std::optional<long long> line_index(const LineSpec& line, const Vertex& v) {
  auto p = line_project(line, v);
  if (!p.away.empty()) return std::nullopt;
  return p.index;
}

}  // namespace treeaut
