#pragma once

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "treeaut/autom.hpp"
#include "treeaut/error.hpp"
#include "treeaut/linalg.hpp"
#include "treeaut/localaction.hpp"
#include "treeaut/tree.hpp"

namespace treeaut {

/// Counts oriented G(F, F')-translates of the segment `s` along [v, g v]
/// minus those along [g v, v].
struct MedianQM {
  std::shared_ptr<const GroupContext> ctx;
  Segment s;
  Vertex base;

  MedianQM(std::shared_ptr<const GroupContext> c, Segment seg, Vertex v = Vertex::base())
      : ctx(std::move(c)), s(std::move(seg)), base(std::move(v)) {
    if (s.length() == 0) throw Error(ErrorKind::OutOfRange, "quasimorphism segment must be nonempty");
  }
};

struct QMEvaluation {
  long long value = 0;
  long long forward_count = 0;
  long long backward_count = 0;
};

enum class Counting { Overlapping, Disjoint };

/// Occurrences of translates of `pattern` among the windows of `colors`.
inline long long count_translates(const GroupContext& ctx, const std::vector<Color>& pattern,
                                  const std::vector<Color>& colors, Counting mode = Counting::Overlapping) {
  const std::size_t n = pattern.size();
  if (colors.size() < n) return 0;
  long long count = 0;
  std::vector<Color> window(n);
  for (std::size_t i = 0; i + n <= colors.size();) {
    std::copy(colors.begin() + static_cast<std::ptrdiff_t>(i), colors.begin() + static_cast<std::ptrdiff_t>(i + n),
              window.begin());
    if (colors_matchable(ctx, pattern, window)) {
      ++count;
      i += mode == Counting::Disjoint ? n : 1;
    } else {
      ++i;
    }
  }
  return count;
}

inline QMEvaluation eval_colors(const MedianQM& f, const std::vector<Color>& path, Counting mode = Counting::Overlapping) {
  std::vector<Color> back(path.rbegin(), path.rend());
  QMEvaluation out;
  out.forward_count = count_translates(*f.ctx, f.s.colors(), path, mode);
  out.backward_count = count_translates(*f.ctx, f.s.colors(), back, mode);
  out.value = out.forward_count - out.backward_count;
  return out;
}

inline QMEvaluation eval(const MedianQM& f, const Automorphism& g, Counting mode = Counting::Overlapping) {
  return eval_colors(f, geodesic(f.base, g.apply(f.base)).colors(), mode);
}

/// Signed count of windows of `axis` starting at positions 0..period-1:
/// forward matches minus reversed matches. `axis` must extend at least
/// pattern length past the last start.
inline long long periodic_count(const GroupContext& ctx, const std::vector<Color>& pattern, const std::vector<Color>& axis,
                                std::size_t period) {
  const std::size_t n = pattern.size();
  if (axis.size() + 1 < period + n) throw Error(ErrorKind::LengthMismatch, "axis stretch too short for the period");
  std::vector<Color> window(n), rev(n);
  long long value = 0;
  for (std::size_t i = 0; i < period; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      window[k] = axis[i + k];
      rev[n - 1 - k] = axis[i + k];
    }
    if (colors_matchable(ctx, pattern, window)) ++value;
    if (colors_matchable(ctx, pattern, rev)) --value;
  }
  return value;
}

/// Signed count over start positions in one period of a cyclic color word.
inline long long circular_count(const GroupContext& ctx, const std::vector<Color>& pattern, const std::vector<Color>& period) {
  if (period.empty()) return 0;
  std::vector<Color> unrolled;
  while (unrolled.size() < period.size() + pattern.size()) unrolled.insert(unrolled.end(), period.begin(), period.end());
  return periodic_count(ctx, pattern, unrolled, period.size());
}

/// Colors along the axis of a loxodromic element from its axis point, over
/// enough periods to hold `extra` more edges past the first period. The
/// colors are periodic only up to the local action of g, so they are read
/// off the tree rather than repeated.
inline std::vector<Color> axis_colors(const Automorphism& g, const Loxodromic& lox, std::size_t extra) {
  const std::size_t L = static_cast<std::size_t>(lox.length);
  const Vertex x = lox.axis_point;
  Vertex y = g.apply(x);
  if (distance(x, y) != lox.length)
    throw Error(ErrorKind::InconsistentPortrait, "axis point is not displaced by the translation length");
  std::size_t periods = 1;
  while (periods * L < L + extra) {
    y = g.apply(y);
    ++periods;
  }
  return geodesic(x, y).colors();
}

/// Homogenization: the signed count of translates per period of the axis.
/// Translates of s are carried to translates by g, so the count at start
/// position i + L equals the count at i.
inline long long homogenize(const MedianQM& f, const Automorphism& g, const MoveClass& cls) {
  const auto* lox = std::get_if<Loxodromic>(&cls);
  if (!lox) return 0;
  const auto& pattern = f.s.colors();
  return periodic_count(*f.ctx, pattern, axis_colors(g, *lox, pattern.size()), static_cast<std::size_t>(lox->length));
}

inline long long homogenize(const MedianQM& f, const Automorphism& g) { return homogenize(f, g, classify(g)); }

/// eval(f, g^n) / n for n = 1..N.
inline std::vector<Rational> homogenize_limit(const MedianQM& f, const Automorphism& g, int N) {
  if (N < 1) throw Error(ErrorKind::OutOfRange, "limit length must be positive");
  std::vector<Rational> out;
  Automorphism gn = g;
  for (int n = 1; n <= N; ++n) {
    if (n > 1) gn = compose(g, gn);
    out.emplace_back(eval(f, gn).value, n);
  }
  return out;
}

/// Lower bound for the defect: max |f(ab) - f(a) - f(b)| over the pairs.
inline long long defect_sample(const MedianQM& f, const std::vector<std::pair<Automorphism, Automorphism>>& pairs) {
  long long best = 0;
  for (const auto& [a, b] : pairs) {
    const long long gap = eval(f, compose(a, b)).value - eval(f, a).value - eval(f, b).value;
    best = std::max(best, std::abs(gap));
  }
  return best;
}

/// Color words of length 2..max_len whose first and last letters differ,
/// in length-lex order. Their word translations are loxodromic with the
/// base on the axis.
inline std::vector<Vertex> cyclically_reduced_words(int d, int max_len) {
  std::vector<Vertex> out;
  for (int n = 2; n <= max_len; ++n)
    for (const auto& w : all_color_sequences(d, n))
      if (w.front() != w.back()) out.push_back(Vertex::from_word(w));
  return out;
}

/// Homogenization at the word translation by a cyclically reduced word.
inline long long homogenize_word(const MedianQM& f, const Vertex& w) {
  return circular_count(*f.ctx, f.s.colors(), w.word());
}

struct SplitWitness {
  Vertex a, b;  // word translations with h(ab) != h(a) + h(b)
  long long h_ab = 0, h_a = 0, h_b = 0;
};

/// Splits ab of words up to `search_bound` letters on which the
/// homogenization fails to be additive.
inline std::optional<SplitWitness> nontriviality_witness(const MedianQM& f, int search_bound) {
  const int d = f.ctx->degree();
  for (int n = 2; n <= search_bound; ++n)
    for (const auto& seq : all_color_sequences(d, n)) {
      const Vertex w = Vertex::from_word(seq);
      const Automorphism gw = Automorphism::word(w, d);
      const long long h_ab = homogenize(f, gw);
      for (int k = 1; k < n; ++k) {
        const Vertex a = w.prefix(static_cast<std::size_t>(k));
        const Vertex b = a.reversed().translate(w);
        const long long h_a = homogenize(f, Automorphism::word(a, d));
        const long long h_b = homogenize(f, Automorphism::word(b, d));
        if (h_ab != h_a + h_b) return SplitWitness{a, b, h_ab, h_a, h_b};
      }
    }
  return std::nullopt;
}

struct QMWitness {
  MedianQM f;
  Automorphism g;
  Vertex word;
  long long value = 0;
  bool limit_exact = false;  // eval(g^n) = n * value for n = N-2..N
};

inline bool limit_matches(const MedianQM& f, const Automorphism& g, long long h, int N) {
  const auto seq = homogenize_limit(f, g, N);
  for (int n = std::max(1, N - 2); n <= N; ++n)
    if (seq[static_cast<std::size_t>(n - 1)] != Rational(h)) return false;
  return true;
}

/// Search over segment classes of length up to `max_seg` and word
/// translations up to `search_bound` letters for a nonzero homogenization.
/// Witnesses whose limit sequence is already exact at N are preferred.
inline std::optional<QMWitness> find_nonvanishing_qm(std::shared_ptr<const GroupContext> ctx, int max_seg, int search_bound,
                                                     int N = 8) {
  if (ctx->fp_two_transitive()) return std::nullopt;
  const auto words = cyclically_reduced_words(ctx->degree(), search_bound);
  std::optional<QMWitness> fallback;
  for (int n = 1; n <= max_seg; ++n)
    for (const auto& rep : segment_orbit_census(*ctx, n)) {
      MedianQM f(ctx, Segment(Vertex::base(), rep));
      for (const auto& w : words) {
        const long long h = homogenize_word(f, w);
        if (h == 0) continue;
        const Automorphism g = Automorphism::word(w, ctx->degree());
        QMWitness wit{f, g, w, h, limit_matches(f, g, h, N)};
        if (wit.limit_exact) return wit;
        if (!fallback) fallback = wit;
      }
    }
  return fallback;
}

struct IndependenceCertificate {
  std::vector<MedianQM> qms;
  std::vector<Vertex> element_words;
  std::vector<Automorphism> elements;
  std::vector<std::vector<long long>> matrix;
  std::size_t rank = 0;
  std::vector<std::optional<SplitWitness>> row_witnesses;
};

/// Homogenized values of each quasimorphism at each element, with exact rank.
/// Homomorphisms to R vanish on word translations (they are products of
/// involutions), so rank over word-translation columns is rank modulo
/// homomorphisms.
inline IndependenceCertificate independence_certificate(std::vector<MedianQM> qms, std::vector<Automorphism> elements,
                                                        int witness_bound = 6) {
  if (qms.empty()) throw Error(ErrorKind::OutOfRange, "independence certificate needs at least one quasimorphism");
  IndependenceCertificate cert;
  cert.qms = std::move(qms);
  cert.elements = std::move(elements);
  for (const auto& f : cert.qms) {
    std::vector<long long> row;
    for (const auto& g : cert.elements) row.push_back(homogenize(f, g));
    cert.matrix.push_back(std::move(row));
    cert.row_witnesses.push_back(nontriviality_witness(f, witness_bound));
  }
  cert.rank = cert.elements.empty() ? 0 : integer_rank(cert.matrix);
  return cert;
}

/// Greedily picks `count` segment classes (length <= max_seg) and as many
/// cyclically reduced words (length <= search_bound) giving a square
/// matrix of full rank, as far as the candidates allow.
inline IndependenceCertificate build_independence_family(std::shared_ptr<const GroupContext> ctx, int count, int max_seg,
                                                         int search_bound, int witness_bound = 6) {
  if (count < 1) throw Error(ErrorKind::OutOfRange, "count must be positive");
  const auto words = cyclically_reduced_words(ctx->degree(), search_bound);
  std::vector<MedianQM> rows;
  std::vector<std::vector<long long>> values;
  RationalMatrix basis;
  for (int n = 1; n <= max_seg && static_cast<int>(rows.size()) < count; ++n)
    for (const auto& rep : segment_orbit_census(*ctx, n)) {
      if (static_cast<int>(rows.size()) == count) break;
      MedianQM f(ctx, Segment(Vertex::base(), rep));
      std::vector<long long> row;
      for (const auto& w : words) row.push_back(homogenize_word(f, w));
      RationalMatrix trial = basis;
      trial.emplace_back(row.begin(), row.end());
      if (rank(trial) > basis.size()) {
        basis = std::move(trial);
        rows.push_back(f);
        values.push_back(std::move(row));
      }
    }
  std::vector<std::size_t> cols;
  std::size_t achieved = 0;
  for (std::size_t j = 0; j < words.size() && achieved < rows.size(); ++j) {
    std::vector<std::vector<long long>> sub(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t c : cols) sub[i].push_back(values[i][c]);
      sub[i].push_back(values[i][j]);
    }
    const std::size_t r = integer_rank(sub);
    if (r > achieved) {
      cols.push_back(j);
      achieved = r;
    }
  }
  std::vector<Automorphism> elements;
  for (std::size_t c : cols) elements.push_back(Automorphism::word(words[c], ctx->degree()));
  auto cert = rows.empty() ? IndependenceCertificate{} : independence_certificate(rows, elements, witness_bound);
  for (std::size_t c : cols) cert.element_words.push_back(words[c]);
  return cert;
}

}  // namespace treeaut
