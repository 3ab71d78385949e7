// Integer matrices and sublattices of Z^n: saturated kernels via unimodular
// column reduction, and membership / equality tests for column spans taken
// modulo an integer.  Used to compare fixed eigenlattices of congruent
// integral matrices.
#pragma once

#include <vector>

#include "k3p/numth.hpp"

namespace k3p {

struct ZMat {
  unsigned rows = 0, cols = 0;
  std::vector<BigInt> a;  // row-major

  ZMat() = default;
  ZMat(unsigned r, unsigned c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
  BigInt& at(unsigned i, unsigned j) { return a[static_cast<size_t>(i) * cols + j]; }
  const BigInt& at(unsigned i, unsigned j) const {
    return a[static_cast<size_t>(i) * cols + j];
  }
  bool operator==(const ZMat&) const = default;
};

ZMat zmat_identity(unsigned n);
ZMat zmat_mul(const ZMat& x, const ZMat& y);
ZMat zmat_sub(const ZMat& x, const ZMat& y);

// Basis (as columns) of the full integer right kernel {v : A v = 0}.  Because
// the basis comes from a unimodular column reduction it is saturated: every
// rational kernel vector with integer entries is an integer combination.
ZMat saturated_kernel(const ZMat& a);

// Is v in the subgroup (column span of A) + mod * Z^rows?  mod = 0 tests pure
// column-span membership.
bool lattice_contains(const ZMat& a, const BigInt& mod, const std::vector<BigInt>& v);

// Do the column spans of w1 and w2 generate the same subgroup of (Z/mod)^rows?
bool sublattice_equal_mod(const ZMat& w1, const ZMat& w2, const BigInt& mod);

}  // namespace k3p
