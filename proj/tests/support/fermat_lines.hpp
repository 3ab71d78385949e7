// Independent oracle for the discriminant square class of the diagonal
// quartic x^4 + y^4 + z^4 + w^4 = 0: its 48 lines, their intersection
// numbers, and the determinant class of a rank-20 sublattice they span.
//
// Everything here is exact arithmetic in Q(zeta_8) built from first
// principles: lines come in 3 coordinate pairings x = a*other, with a^4 = -1;
// two distinct lines of P^3 meet iff their four spanning points are linearly
// dependent; a line has self-intersection -2 on a quartic surface and meets
// a distinct line with multiplicity 1.  None of the library's counting,
// reconstruction, or special-value code is involved.
#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "k3p/numth.hpp"
#include "k3p/ratmat.hpp"

namespace fermat_lines {

using k3p::BigInt;
using k3p::BigRat;
using k3p::QMat;

// Elements of Q(zeta_8) = Q[x]/(x^4 + 1) as coefficient 4-tuples.
struct Z8 {
  std::array<BigRat, 4> c{};
};

inline Z8 z8_zeta_power(int k) {
  k %= 8;
  if (k < 0) k += 8;
  Z8 v;
  if (k < 4)
    v.c[k] = 1;
  else
    v.c[k - 4] = -1;
  return v;
}

inline Z8 z8_add(const Z8& a, const Z8& b) {
  Z8 r;
  for (int i = 0; i < 4; ++i) r.c[i] = a.c[i] + b.c[i];
  return r;
}

inline Z8 z8_sub(const Z8& a, const Z8& b) {
  Z8 r;
  for (int i = 0; i < 4; ++i) r.c[i] = a.c[i] - b.c[i];
  return r;
}

inline Z8 z8_mul(const Z8& a, const Z8& b) {
  Z8 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const BigRat t = a.c[i] * b.c[j];
      if (i + j < 4)
        r.c[i + j] += t;
      else
        r.c[i + j - 4] -= t;  // x^4 = -1
    }
  return r;
}

inline Z8 z8_scale(const Z8& a, int64_t s) {
  Z8 r;
  for (int i = 0; i < 4; ++i) r.c[i] = a.c[i] * s;
  return r;
}

inline bool z8_is_zero(const Z8& a) {
  for (int i = 0; i < 4; ++i)
    if (a.c[i] != 0) return false;
  return true;
}

using Point = std::array<Z8, 4>;  // projective coordinates in Q(zeta_8)

struct Line {
  Point p1, p2;
};

// The 48 lines: for each of the 3 ways to pair the coordinates, the line
// { first = a * second, third = b * fourth } with a, b odd powers of zeta_8.
inline std::vector<Line> all_lines() {
  const std::array<std::array<int, 4>, 3> pairings = {{
      {0, 1, 2, 3},  // x = a y, z = b w
      {0, 2, 1, 3},  // x = a z, y = b w
      {0, 3, 1, 2},  // x = a w, y = b z
  }};
  std::vector<Line> lines;
  for (const auto& pr : pairings)
    for (int i = 1; i < 8; i += 2)
      for (int j = 1; j < 8; j += 2) {
        Line l;
        l.p1[pr[0]] = z8_zeta_power(i);
        l.p1[pr[1]] = z8_zeta_power(0);
        l.p2[pr[2]] = z8_zeta_power(j);
        l.p2[pr[3]] = z8_zeta_power(0);
        lines.push_back(l);
      }
  if (lines.size() != 48) throw std::logic_error("line enumeration is off");
  return lines;
}

inline Z8 surface_value(const Point& pt) {
  Z8 acc;
  for (int v = 0; v < 4; ++v) {
    Z8 q = pt[v];
    q = z8_mul(q, q);
    q = z8_mul(q, q);
    acc = z8_add(acc, q);
  }
  return acc;
}

// A degree-4 form vanishing at 5 points of a line vanishes on the line.
inline bool line_on_surface(const Line& l) {
  const std::array<std::pair<int64_t, int64_t>, 5> st = {
      {{1, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 1}}};
  for (const auto& [s, t] : st) {
    Point pt;
    for (int v = 0; v < 4; ++v)
      pt[v] = z8_add(z8_scale(l.p1[v], s), z8_scale(l.p2[v], t));
    if (!z8_is_zero(surface_value(pt))) return false;
  }
  return true;
}

inline Z8 det3(const std::array<std::array<Z8, 3>, 3>& m) {
  Z8 acc;
  acc = z8_add(acc, z8_mul(m[0][0], z8_sub(z8_mul(m[1][1], m[2][2]),
                                           z8_mul(m[1][2], m[2][1]))));
  acc = z8_sub(acc, z8_mul(m[0][1], z8_sub(z8_mul(m[1][0], m[2][2]),
                                           z8_mul(m[1][2], m[2][0]))));
  acc = z8_add(acc, z8_mul(m[0][2], z8_sub(z8_mul(m[1][0], m[2][1]),
                                           z8_mul(m[1][1], m[2][0]))));
  return acc;
}

inline Z8 det4(const std::array<Point, 4>& rows) {
  Z8 acc;
  for (int col = 0; col < 4; ++col) {
    std::array<std::array<Z8, 3>, 3> minor;
    for (int r = 1; r < 4; ++r) {
      int cc = 0;
      for (int c = 0; c < 4; ++c) {
        if (c == col) continue;
        minor[r - 1][cc++] = rows[r][c];
      }
    }
    const Z8 term = z8_mul(rows[0][col], det3(minor));
    acc = (col % 2 == 0) ? z8_add(acc, term) : z8_sub(acc, term);
  }
  return acc;
}

// Two distinct lines of P^3 meet iff their spanning points are dependent.
inline bool lines_meet(const Line& a, const Line& b) {
  return z8_is_zero(det4({a.p1, a.p2, b.p1, b.p2}));
}

// Gram matrix of all 48 line classes: -2 on the diagonal, incidence off it.
inline QMat line_gram() {
  const std::vector<Line> lines = all_lines();
  for (const Line& l : lines)
    if (!line_on_surface(l)) throw std::logic_error("enumerated a non-line");
  QMat g(48, 48);
  for (int i = 0; i < 48; ++i) {
    g.at(i, i) = -2;
    for (int j = i + 1; j < 48; ++j) {
      const BigRat v = lines_meet(lines[i], lines[j]) ? 1 : 0;
      g.at(i, j) = v;
      g.at(j, i) = v;
    }
  }
  return g;
}

// Greedily picks lines whose classes are independent (rank of their rows in
// the full Gram matrix keeps growing); the principal Gram block of the
// selection is the lattice they span.
inline QMat independent_basis_gram(const QMat& g) {
  std::vector<int> chosen;
  QMat rows(0, 48);
  for (int i = 0; i < 48; ++i) {
    QMat next(rows.rows + 1, 48);
    next.a = rows.a;
    for (int c = 0; c < 48; ++c) next.a.push_back(g.at(i, c));
    if (k3p::qmat_rank(next) == next.rows) {
      rows = std::move(next);
      chosen.push_back(i);
    }
  }
  QMat basis(chosen.size(), chosen.size());
  for (size_t i = 0; i < chosen.size(); ++i)
    for (size_t j = 0; j < chosen.size(); ++j)
      basis.at(i, j) = g.at(chosen[i], chosen[j]);
  return basis;
}

// The square class (squarefree integer) of the Gram determinant of the
// rank-20 lattice the lines span.
inline BigInt disc_class() {
  const QMat basis = independent_basis_gram(line_gram());
  if (basis.rows != 20) throw std::logic_error("line lattice rank is not 20");
  return k3p::squarefree_part(qmat_det(basis));
}

}  // namespace fermat_lines
