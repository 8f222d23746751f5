#ifndef MSING_LINALG_HPP
#define MSING_LINALG_HPP

// Dense linear algebra over F_ell.  The blocks that arise are small
// per-bidegree matrices, so plain Gaussian elimination is enough.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fp.hpp"

namespace msing {

struct FpMat {
  int ell = 2;
  int rows = 0, cols = 0;
  std::vector<int> a;  // row-major

  FpMat() = default;
  FpMat(int ell_, int r, int c) : ell(ell_), rows(r), cols(c), a(r * c, 0) {}
  int& at(int i, int j) { return a[i * cols + j]; }
  int at(int i, int j) const { return a[i * cols + j]; }
};

namespace detail {

// Bit-packed row reduction for ell = 2: rows are arrays of 64-bit words.
inline std::vector<int> f2_rref(FpMat& m) {
  int words = (m.cols + 63) / 64;
  std::vector<uint64_t> w(static_cast<size_t>(m.rows) * words, 0);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      if (m.at(i, j)) w[i * words + j / 64] |= 1ULL << (j % 64);
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    uint64_t mask = 1ULL << (c % 64);
    int cw = c / 64, p = -1;
    for (int i = r; i < m.rows; ++i)
      if (w[i * words + cw] & mask) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (int k = 0; k < words; ++k) std::swap(w[p * words + k], w[r * words + k]);
    for (int i = 0; i < m.rows; ++i)
      if (i != r && (w[i * words + cw] & mask))
        for (int k = cw; k < words; ++k) w[i * words + k] ^= w[r * words + k];
    pivots.push_back(c);
    ++r;
  }
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      m.at(i, j) = (w[i * words + j / 64] >> (j % 64)) & 1;
  return pivots;
}

}  // namespace detail

// Row-reduce in place; returns pivot columns.
inline std::vector<int> fp_rref(FpMat& m) {
  if (m.ell == 2) return detail::f2_rref(m);
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int p = -1;
    for (int i = r; i < m.rows; ++i)
      if (m.at(i, c) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(p, j), m.at(r, j));
    int inv = fp_inv(m.at(r, c), m.ell);
    for (int j = 0; j < m.cols; ++j) m.at(r, j) = fp_mul(m.at(r, j), inv, m.ell);
    for (int i = 0; i < m.rows; ++i)
      if (i != r && m.at(i, c) != 0) {
        int f = m.at(i, c);
        for (int j = 0; j < m.cols; ++j)
          m.at(i, j) = fp_sub(m.at(i, j), fp_mul(f, m.at(r, j), m.ell), m.ell);
      }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline int fp_rank(FpMat m) { return static_cast<int>(fp_rref(m).size()); }

// Solve A x = b (A given column-wise action); returns nullopt if inconsistent.
inline std::optional<std::vector<int>> fp_solve(const FpMat& A,
                                                const std::vector<int>& b) {
  if (static_cast<int>(b.size()) != A.rows)
    throw std::invalid_argument("fp_solve: size mismatch");
  FpMat aug(A.ell, A.rows, A.cols + 1);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) aug.at(i, j) = A.at(i, j);
    aug.at(i, A.cols) = fp_norm(b[i], A.ell);
  }
  auto piv = fp_rref(aug);
  for (int c : piv)
    if (c == A.cols) return std::nullopt;
  std::vector<int> x(A.cols, 0);
  for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug.at(static_cast<int>(r), A.cols);
  return x;
}

// Basis of the null space of A, as column vectors.
inline std::vector<std::vector<int>> fp_kernel(FpMat A) {
  auto piv = fp_rref(A);
  std::vector<bool> is_piv(A.cols, false);
  for (int c : piv) is_piv[c] = true;
  std::vector<std::vector<int>> out;
  for (int f = 0; f < A.cols; ++f) {
    if (is_piv[f]) continue;
    std::vector<int> v(A.cols, 0);
    v[f] = 1;
    for (size_t r = 0; r < piv.size(); ++r)
      v[piv[r]] = fp_norm(-A.at(static_cast<int>(r), f), A.ell);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace msing

#endif  // MSING_LINALG_HPP
