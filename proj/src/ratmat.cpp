#include "k3p/ratmat.hpp"

#include <stdexcept>

namespace k3p {

namespace {

void require_same_shape(const QMat& x, const QMat& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument("qmat: shape mismatch");
}

BigRat trace_of(const QMat& m) {
  BigRat t = 0;
  for (unsigned i = 0; i < m.rows; ++i) t += m.at(i, i);
  return t;
}

}  // namespace

QMat qmat_identity(unsigned n) {
  QMat m(n, n);
  for (unsigned i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

QMat qmat_mul(const QMat& x, const QMat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("qmat_mul: shape mismatch");
  QMat out(x.rows, y.cols);
  for (unsigned i = 0; i < x.rows; ++i)
    for (unsigned k = 0; k < x.cols; ++k) {
      const BigRat& xv = x.at(i, k);
      if (xv == 0) continue;
      for (unsigned j = 0; j < y.cols; ++j) {
        const BigRat& yv = y.at(k, j);
        if (yv == 0) continue;
        out.at(i, j) += xv * yv;
      }
    }
  return out;
}

QMat qmat_add(const QMat& x, const QMat& y) {
  require_same_shape(x, y);
  QMat out = x;
  for (size_t i = 0; i < out.a.size(); ++i) out.a[i] += y.a[i];
  return out;
}

QMat qmat_sub(const QMat& x, const QMat& y) {
  require_same_shape(x, y);
  QMat out = x;
  for (size_t i = 0; i < out.a.size(); ++i) out.a[i] -= y.a[i];
  return out;
}

QMat qmat_scale(const QMat& x, const BigRat& c) {
  QMat out = x;
  for (auto& v : out.a) v *= c;
  return out;
}

QMat qmat_transpose(const QMat& x) {
  QMat out(x.cols, x.rows);
  for (unsigned i = 0; i < x.rows; ++i)
    for (unsigned j = 0; j < x.cols; ++j) out.at(j, i) = x.at(i, j);
  return out;
}

unsigned qmat_rank(QMat m) {
  unsigned rank = 0;
  for (unsigned col = 0; col < m.cols && rank < m.rows; ++col) {
    unsigned piv = rank;
    while (piv < m.rows && m.at(piv, col) == 0) ++piv;
    if (piv == m.rows) continue;
    for (unsigned j = col; j < m.cols; ++j) std::swap(m.at(rank, j), m.at(piv, j));
    const BigRat lead = m.at(rank, col);
    for (unsigned i = rank + 1; i < m.rows; ++i) {
      if (m.at(i, col) == 0) continue;
      const BigRat f = m.at(i, col) / lead;
      for (unsigned j = col; j < m.cols; ++j) m.at(i, j) -= f * m.at(rank, j);
    }
    ++rank;
  }
  return rank;
}

BigRat qmat_det(QMat m) {
  if (m.rows != m.cols) throw std::invalid_argument("qmat_det: square matrix required");
  BigRat det = 1;
  for (unsigned col = 0; col < m.cols; ++col) {
    unsigned piv = col;
    while (piv < m.rows && m.at(piv, col) == 0) ++piv;
    if (piv == m.rows) return 0;
    if (piv != col) {
      for (unsigned j = col; j < m.cols; ++j) std::swap(m.at(col, j), m.at(piv, j));
      det = -det;
    }
    const BigRat lead = m.at(col, col);
    det *= lead;
    for (unsigned i = col + 1; i < m.rows; ++i) {
      if (m.at(i, col) == 0) continue;
      const BigRat f = m.at(i, col) / lead;
      for (unsigned j = col; j < m.cols; ++j) m.at(i, j) -= f * m.at(col, j);
    }
  }
  return det;
}

bool qmat_inverse(QMat m, QMat* inv) {
  if (m.rows != m.cols) throw std::invalid_argument("qmat_inverse: square matrix required");
  const unsigned n = m.rows;
  QMat right = qmat_identity(n);
  for (unsigned col = 0; col < n; ++col) {
    unsigned piv = col;
    while (piv < n && m.at(piv, col) == 0) ++piv;
    if (piv == n) return false;
    if (piv != col) {
      for (unsigned j = 0; j < n; ++j) {
        std::swap(m.at(col, j), m.at(piv, j));
        std::swap(right.at(col, j), right.at(piv, j));
      }
    }
    const BigRat lead = m.at(col, col);
    for (unsigned j = 0; j < n; ++j) {
      m.at(col, j) /= lead;
      right.at(col, j) /= lead;
    }
    for (unsigned i = 0; i < n; ++i) {
      if (i == col || m.at(i, col) == 0) continue;
      const BigRat f = m.at(i, col);
      for (unsigned j = 0; j < n; ++j) {
        m.at(i, j) -= f * m.at(col, j);
        right.at(i, j) -= f * right.at(col, j);
      }
    }
  }
  if (inv != nullptr) *inv = std::move(right);
  return true;
}

QMat qmat_kernel(const QMat& m) {
  const unsigned n = m.cols;
  QMat red = m;
  std::vector<int> pivot_of_col(n, -1);
  unsigned rank = 0;
  for (unsigned col = 0; col < n && rank < red.rows; ++col) {
    unsigned piv = rank;
    while (piv < red.rows && red.at(piv, col) == 0) ++piv;
    if (piv == red.rows) continue;
    for (unsigned j = 0; j < n; ++j) std::swap(red.at(rank, j), red.at(piv, j));
    const BigRat lead = red.at(rank, col);
    for (unsigned j = 0; j < n; ++j) red.at(rank, j) /= lead;
    for (unsigned i = 0; i < red.rows; ++i) {
      if (i == rank || red.at(i, col) == 0) continue;
      const BigRat f = red.at(i, col);
      for (unsigned j = 0; j < n; ++j) red.at(i, j) -= f * red.at(rank, j);
    }
    pivot_of_col[col] = static_cast<int>(rank);
    ++rank;
  }
  QMat ker(n, n - rank);
  unsigned out_col = 0;
  for (unsigned free_col = 0; free_col < n; ++free_col) {
    if (pivot_of_col[free_col] >= 0) continue;
    ker.at(free_col, out_col) = 1;
    for (unsigned col = 0; col < n; ++col) {
      const int pr = pivot_of_col[col];
      if (pr >= 0) ker.at(col, out_col) = -red.at(static_cast<unsigned>(pr), free_col);
    }
    ++out_col;
  }
  return ker;
}

std::vector<BigRat> qmat_charpoly(const QMat& m) {
  if (m.rows != m.cols)
    throw std::invalid_argument("qmat_charpoly: square matrix required");
  const unsigned n = m.rows;
  std::vector<BigRat> c(n + 1);
  c[n] = 1;
  if (n == 0) return c;
  // Faddeev-LeVerrier: B_1 = M, c_{n-k} = -tr(M B_{k-1} + c_{n-k+1} I)/k.
  QMat b = m;
  c[n - 1] = -trace_of(b);
  for (unsigned k = 2; k <= n; ++k) {
    for (unsigned i = 0; i < n; ++i) b.at(i, i) += c[n - k + 1];
    b = qmat_mul(m, b);
    c[n - k] = -trace_of(b) / BigRat(k);
  }
  return c;
}

std::pair<unsigned, unsigned> qmat_signature(QMat s) {
  if (s.rows != s.cols)
    throw std::invalid_argument("qmat_signature: square matrix required");
  const unsigned n = s.rows;
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i + 1; j < n; ++j)
      if (s.at(i, j) != s.at(j, i))
        throw std::invalid_argument("qmat_signature: symmetric matrix required");
  unsigned pos = 0, neg = 0;
  for (unsigned k = 0; k < n; ++k) {
    if (s.at(k, k) == 0) {
      // Symmetric pivot repair: pull a nonzero diagonal below, or create one
      // from a nonzero off-diagonal pair via a congruence row+column add.
      unsigned swap_row = k + 1;
      while (swap_row < n && s.at(swap_row, swap_row) == 0) ++swap_row;
      if (swap_row < n) {
        for (unsigned j = 0; j < n; ++j) std::swap(s.at(k, j), s.at(swap_row, j));
        for (unsigned i = 0; i < n; ++i) std::swap(s.at(i, k), s.at(i, swap_row));
      } else {
        unsigned partner = n;
        for (unsigned j = k + 1; j < n; ++j)
          if (s.at(k, j) != 0) {
            partner = j;
            break;
          }
        if (partner == n) continue;  // zero row and column: null direction
        for (unsigned j = 0; j < n; ++j) s.at(k, j) += s.at(partner, j);
        for (unsigned i = 0; i < n; ++i) s.at(i, k) += s.at(i, partner);
      }
    }
    const BigRat d = s.at(k, k);
    if (d > 0)
      ++pos;
    else
      ++neg;
    for (unsigned i = k + 1; i < n; ++i) {
      if (s.at(i, k) == 0) continue;
      const BigRat f = s.at(i, k) / d;
      for (unsigned j = k; j < n; ++j) s.at(i, j) -= f * s.at(k, j);
      for (unsigned j = k; j < n; ++j) s.at(j, i) -= f * s.at(j, k);
    }
  }
  return {pos, neg};
}

}  // namespace k3p
