#include "k3p/zlattice.hpp"

#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace k3p {

namespace {

BigInt abs_big(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

void swap_columns(ZMat& m, unsigned c1, unsigned c2) {
  if (c1 == c2) return;
  for (unsigned i = 0; i < m.rows; ++i) std::swap(m.at(i, c1), m.at(i, c2));
}

// column[dst] -= q * column[src]
void submul_column(ZMat& m, unsigned dst, unsigned src, const BigInt& q) {
  if (q == 0) return;
  for (unsigned i = 0; i < m.rows; ++i) m.at(i, dst) -= q * m.at(i, src);
}

void negate_column(ZMat& m, unsigned c) {
  for (unsigned i = 0; i < m.rows; ++i) m.at(i, c) = -m.at(i, c);
}

// Column-echelon reduction by unimodular column operations.  Shared between
// the kernel computation (which tracks the transform) and membership tests
// (which track pivot positions).  Returns the number of pivots; pivot_row[j]
// receives the pivot row of surviving column j for j < rank.
unsigned column_echelon(ZMat& h, ZMat* transform, std::vector<unsigned>* pivot_row) {
  unsigned next_col = 0;
  for (unsigned row = 0; row < h.rows && next_col < h.cols; ++row) {
    // Euclid across the row: shrink entries until one nonzero remains.
    for (;;) {
      unsigned best = h.cols;
      for (unsigned j = next_col; j < h.cols; ++j) {
        if (h.at(row, j) == 0) continue;
        if (best == h.cols || abs_big(h.at(row, j)) < abs_big(h.at(row, best))) best = j;
      }
      if (best == h.cols) break;  // row has no pivot among free columns
      swap_columns(h, next_col, best);
      if (transform != nullptr) swap_columns(*transform, next_col, best);
      bool cleared = true;
      for (unsigned j = next_col + 1; j < h.cols; ++j) {
        if (h.at(row, j) == 0) continue;
        const BigInt q = h.at(row, j) / h.at(row, next_col);
        submul_column(h, j, next_col, q);
        if (transform != nullptr) submul_column(*transform, j, next_col, q);
        if (h.at(row, j) != 0) cleared = false;
      }
      if (cleared) {
        if (h.at(row, next_col) < 0) {
          negate_column(h, next_col);
          if (transform != nullptr) negate_column(*transform, next_col);
        }
        if (pivot_row != nullptr) pivot_row->push_back(row);
        ++next_col;
        break;
      }
    }
  }
  return next_col;
}

}  // namespace

ZMat zmat_identity(unsigned n) {
  ZMat m(n, n);
  for (unsigned i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

ZMat zmat_mul(const ZMat& x, const ZMat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("zmat_mul: shape mismatch");
  ZMat out(x.rows, y.cols);
  for (unsigned i = 0; i < x.rows; ++i)
    for (unsigned k = 0; k < x.cols; ++k) {
      const BigInt& xv = x.at(i, k);
      if (xv == 0) continue;
      for (unsigned j = 0; j < y.cols; ++j) {
        const BigInt& yv = y.at(k, j);
        if (yv == 0) continue;
        out.at(i, j) += xv * yv;
      }
    }
  return out;
}

ZMat zmat_sub(const ZMat& x, const ZMat& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument("zmat_sub: shape mismatch");
  ZMat out = x;
  for (size_t i = 0; i < out.a.size(); ++i) out.a[i] -= y.a[i];
  return out;
}

ZMat saturated_kernel(const ZMat& a) {
  ZMat h = a;
  ZMat u = zmat_identity(a.cols);
  const unsigned rank = column_echelon(h, &u, nullptr);
  // Columns rank..cols-1 of h are zero; the matching columns of the unimodular
  // transform span the kernel (and are saturated because u is unimodular).
  ZMat ker(a.cols, a.cols - rank);
  for (unsigned i = 0; i < a.cols; ++i)
    for (unsigned j = rank; j < a.cols; ++j) ker.at(i, j - rank) = u.at(i, j);
  return ker;
}

bool lattice_contains(const ZMat& a, const BigInt& mod, const std::vector<BigInt>& v) {
  if (v.size() != a.rows) throw std::invalid_argument("lattice_contains: length mismatch");
  if (mod < 0) throw std::invalid_argument("lattice_contains: modulus must be >= 0");
  const unsigned extra = mod == 0 ? 0u : a.rows;
  ZMat b(a.rows, a.cols + extra);
  for (unsigned i = 0; i < a.rows; ++i)
    for (unsigned j = 0; j < a.cols; ++j) b.at(i, j) = a.at(i, j);
  for (unsigned i = 0; i < extra; ++i) b.at(i, a.cols + i) = mod;
  std::vector<unsigned> pivot_row;
  const unsigned rank = column_echelon(b, nullptr, &pivot_row);
  std::vector<BigInt> rem = v;
  for (unsigned j = 0; j < rank; ++j) {
    const unsigned row = pivot_row[j];
    const BigInt& piv = b.at(row, j);
    if (rem[row] % piv != 0) return false;
    const BigInt q = rem[row] / piv;
    for (unsigned i = 0; i < a.rows; ++i) rem[i] -= q * b.at(i, j);
  }
  for (const BigInt& x : rem)
    if (x != 0) return false;
  return true;
}

bool sublattice_equal_mod(const ZMat& w1, const ZMat& w2, const BigInt& mod) {
  if (w1.rows != w2.rows) throw std::invalid_argument("sublattice_equal_mod: row mismatch");
  const auto spans = [&](const ZMat& big, const ZMat& small) {
    std::vector<BigInt> col(small.rows);
    for (unsigned j = 0; j < small.cols; ++j) {
      for (unsigned i = 0; i < small.rows; ++i) col[i] = small.at(i, j);
      if (!lattice_contains(big, mod, col)) return false;
    }
    return true;
  };
  return spans(w1, w2) && spans(w2, w1);
}

}  // namespace k3p
