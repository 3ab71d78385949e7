// Dense exact rational matrices: the small-dimension linear algebra used by
// the orthogonal-group experiments (ranks, inverses, kernels, characteristic
// polynomials, signatures of symmetric forms).
#pragma once

#include <utility>
#include <vector>

#include "k3p/numth.hpp"

namespace k3p {

struct QMat {
  unsigned rows = 0, cols = 0;
  std::vector<BigRat> a;  // row-major

  QMat() = default;
  QMat(unsigned r, unsigned c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
  BigRat& at(unsigned i, unsigned j) { return a[static_cast<size_t>(i) * cols + j]; }
  const BigRat& at(unsigned i, unsigned j) const {
    return a[static_cast<size_t>(i) * cols + j];
  }
  bool operator==(const QMat&) const = default;
};

QMat qmat_identity(unsigned n);
QMat qmat_mul(const QMat& x, const QMat& y);
QMat qmat_add(const QMat& x, const QMat& y);
QMat qmat_sub(const QMat& x, const QMat& y);
QMat qmat_scale(const QMat& x, const BigRat& c);
QMat qmat_transpose(const QMat& x);

unsigned qmat_rank(QMat m);  // by value: reduced in place
BigRat qmat_det(QMat m);

// Gauss-Jordan inverse; false when singular.
bool qmat_inverse(QMat m, QMat* inv);

// Columns form a basis of the right kernel (cols = n - rank, possibly 0).
QMat qmat_kernel(const QMat& m);

// det(T*I - M), monic, constant coefficient first (size n+1).
std::vector<BigRat> qmat_charpoly(const QMat& m);

// (positives, negatives) of a symmetric matrix by exact congruence
// diagonalization; rank deficit contributes to neither count.
std::pair<unsigned, unsigned> qmat_signature(QMat s);

}  // namespace k3p
