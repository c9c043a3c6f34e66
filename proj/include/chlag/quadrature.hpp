#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace chlag::quad {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<double, 8> kGLNodes = {
    -0.96028985649753618, -0.79666647741362673, -0.52553240991632899, -0.18343464249564978,
    0.18343464249564978,  0.52553240991632899,  0.79666647741362673,  0.96028985649753618};
inline constexpr std::array<double, 8> kGLWeights = {
    0.10122853629037669, 0.22238103445337434, 0.31370664587788705, 0.36268378337836177,
    0.36268378337836177, 0.31370664587788705, 0.22238103445337434, 0.10122853629037669};

template <typename Scalar, typename F>
Scalar gauss_legendre(F&& f, Scalar a, Scalar b) {
  const Scalar mid = (a + b) / 2;
  const Scalar half = (b - a) / 2;
  Scalar acc = 0;
  for (std::size_t k = 0; k < kGLNodes.size(); ++k) acc += Scalar(kGLWeights[k]) * f(mid + half * Scalar(kGLNodes[k]));
  return acc * half;
}

/// Composite Gauss-Legendre with panels no wider than max_panel.
template <typename Scalar, typename F>
Scalar composite(F&& f, Scalar a, Scalar b, Scalar max_panel) {
  if (!(b > a)) return Scalar(0);
  const auto panels = static_cast<long>(std::ceil(static_cast<double>((b - a) / max_panel)));
  const long n = std::max(1L, panels);
  const Scalar h = (b - a) / Scalar(n);
  Scalar acc = 0;
  for (long i = 0; i < n; ++i) acc += gauss_legendre(f, a + h * Scalar(i), i + 1 == n ? b : a + h * Scalar(i + 1));
  return acc;
}

/// Composite rule over [a, b] broken at the given sorted breakpoints.
template <typename Scalar, typename F>
Scalar piecewise(F&& f, Scalar a, Scalar b, const std::vector<Scalar>& breaks, Scalar max_panel) {
  std::vector<Scalar> pts{a};
  for (auto it = std::upper_bound(breaks.begin(), breaks.end(), a); it != breaks.end() && *it < b; ++it)
    pts.push_back(*it);
  pts.push_back(b);
  Scalar acc = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) acc += composite(f, pts[i], pts[i + 1], max_panel);
  return acc;
}

}  // namespace chlag::quad
