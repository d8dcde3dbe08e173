#pragma once

// Minimization of a linear objective over a small bounded polytope by vertex
// enumeration. Dimension is 2 or 3; every N-subset of the bounding hyperplanes
// is intersected and the feasible intersection points are scored.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>

namespace dmt::poly {

template <std::size_t N>
using Vec = std::array<double, N>;

/// a . x <= b
template <std::size_t N>
struct HalfSpace {
  Vec<N> a{};
  double b = 0.0;
};

/// c . x + c0
template <std::size_t N>
struct LinearObjective {
  Vec<N> c{};
  double c0 = 0.0;

  double operator()(const Vec<N>& x) const {
    double v = c0;
    for (std::size_t i = 0; i < N; ++i) v += c[i] * x[i];
    return v;
  }
};

template <std::size_t N>
struct VertexMin {
  double value = 0.0;
  Vec<N> x{};
};

inline constexpr double kFeasTol = 1e-11;
inline constexpr double kSingularTol = 1e-12;
inline constexpr double kTieTol = 1e-12;

namespace detail {

template <std::size_t N>
bool lex_less(const Vec<N>& u, const Vec<N>& v) {
  for (std::size_t i = 0; i < N; ++i) {
    if (u[i] < v[i]) return true;
    if (u[i] > v[i]) return false;
  }
  return false;
}

inline std::optional<Vec<2>> intersect(const HalfSpace<2>& p, const HalfSpace<2>& q) {
  const double det = p.a[0] * q.a[1] - p.a[1] * q.a[0];
  if (std::abs(det) < kSingularTol) return std::nullopt;
  return Vec<2>{(p.b * q.a[1] - p.a[1] * q.b) / det, (p.a[0] * q.b - p.b * q.a[0]) / det};
}

inline std::optional<Vec<3>> intersect(const HalfSpace<3>& p, const HalfSpace<3>& q,
                                       const HalfSpace<3>& s) {
  const auto& a = p.a;
  const auto& b = q.a;
  const auto& c = s.a;
  // rows a, b, c; Cramer's rule via cofactors
  const Vec<3> bxc{b[1] * c[2] - b[2] * c[1], b[2] * c[0] - b[0] * c[2], b[0] * c[1] - b[1] * c[0]};
  const Vec<3> cxa{c[1] * a[2] - c[2] * a[1], c[2] * a[0] - c[0] * a[2], c[0] * a[1] - c[1] * a[0]};
  const Vec<3> axb{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  const double det = a[0] * bxc[0] + a[1] * bxc[1] + a[2] * bxc[2];
  if (std::abs(det) < kSingularTol) return std::nullopt;
  Vec<3> x{};
  for (std::size_t i = 0; i < 3; ++i) x[i] = (p.b * bxc[i] + q.b * cxa[i] + s.b * axb[i]) / det;
  return x;
}

template <std::size_t N>
bool feasible(const Vec<N>& x, std::span<const HalfSpace<N>> planes) {
  for (const auto& h : planes) {
    double lhs = 0.0;
    for (std::size_t i = 0; i < N; ++i) lhs += h.a[i] * x[i];
    if (lhs > h.b + kFeasTol) return false;
  }
  return true;
}

}  // namespace detail

/// Folds a candidate into a running best: lower value wins, ties within
/// kTieTol go to the lexicographically smaller point.
template <std::size_t N>
void keep_better(std::optional<VertexMin<N>>& best, const VertexMin<N>& cand) {
  if (!best || cand.value < best->value - kTieTol) {
    best = cand;
  } else if (std::abs(cand.value - best->value) <= kTieTol && detail::lex_less(cand.x, best->x)) {
    best = VertexMin<N>{std::min(cand.value, best->value), cand.x};
  }
}

/// Minimum of a linear objective over a bounded polytope; empty optional when
/// no vertex is feasible.
template <std::size_t N>
std::optional<VertexMin<N>> minimize_on_polytope(std::span<const HalfSpace<N>> planes,
                                                 const LinearObjective<N>& obj) {
  static_assert(N == 2 || N == 3);
  std::optional<VertexMin<N>> best;
  const std::size_t m = planes.size();
  auto score = [&](const std::optional<Vec<N>>& x) {
    if (x && detail::feasible<N>(*x, planes)) keep_better(best, VertexMin<N>{obj(*x), *x});
  };
  if constexpr (N == 2) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) score(detail::intersect(planes[i], planes[j]));
  } else {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        for (std::size_t k = j + 1; k < m; ++k)
          score(detail::intersect(planes[i], planes[j], planes[k]));
  }
  return best;
}

}  // namespace dmt::poly
