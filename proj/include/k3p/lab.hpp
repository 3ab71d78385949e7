// Experiments on the centralizer of a number field E acting on a rational
// quadratic space.  E = Q[x]/(g) with g monic irreducible, either totally real
// or CM, acts coordinatewise on T = E^r; the bilinear form is
//   psi(u, v) = Tr_{E/Q}( sum_i d_i u_i conj(v_i) )
// with conj the identity in the totally real case and the complex-conjugation
// involution of E in the CM case.  Elements of the centralizer of E inside
// SO(psi) model the isometries available to a transcendental lattice with
// endomorphism field E; the operations below sample them, inspect their
// spectrum, and probe how eigenvalue-one lattices vary inside a congruence
// class of integral matrices.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "k3p/intpoly.hpp"
#include "k3p/numth.hpp"
#include "k3p/ratmat.hpp"
#include "k3p/zlattice.hpp"

namespace k3p {

struct EndoFieldModel {
  enum class Kind { kTotallyReal, kCM };
  IPoly g;                      // monic irreducible integer polynomial, degree e >= 1
  Kind kind = Kind::kTotallyReal;
  unsigned r = 0;               // rank of T over E
  std::vector<RPoly> phi_diag;  // r nonzero elements of E (coefficients, degree < e)
  bool require_k3_signature = true;  // demand signature (2, e*r - 2) of the form
  std::string name;                  // optional label; presets fill it
};

// Throws std::invalid_argument when the model is malformed: g not monic or not
// irreducible, the declared kind contradicting the root pattern of g (checked
// numerically to 1e-9), zero phi entries, CM diagonal entries not fixed by the
// involution, or (when required) signature != (2, e*r - 2).
void validate_model(const EndoFieldModel& model);

// The involution of E induced by complex conjugation, as a polynomial of
// degree < deg(g); the identity map for totally real models.  Found by a
// numeric interpolation across all roots, then certified exactly:
// g(s(x)) = 0 (mod g) and s(s(x)) = x (mod g).
RPoly conjugation_map(const EndoFieldModel& model);

// Gram matrix of psi in the Q-basis { x^j e_i } (coordinate i outer, power j
// inner), a block-diagonal (e*r) x (e*r) rational matrix.
QMat build_trace_form(const EndoFieldModel& model);

// Matrix of multiplication by x on T = E^r in the same basis; centralizer
// elements must commute with it.
QMat field_action_matrix(const EndoFieldModel& model);

struct CentralizerElement {
  QMat h;         // in SO(psi), commuting with the E-action
  uint64_t seed;  // the seed that produced it
};

// Random element of the centralizer of E in SO(psi): a Cayley transform
// (I + A)(I - A)^{-1} of a psi-skew-adjoint E-linear map A whose entries have
// integer coefficients of height <= 10.  Deterministic per seed; throws
// std::runtime_error if 100 consecutive draws leave I - A singular.
CentralizerElement sample_centralizer(const EndoFieldModel& model, uint64_t seed);

// dim ker(h - I), exact.
unsigned eigenvalue_one_multiplicity(const QMat& h);

// Does h have an eigenvalue that is a primitive m-th root of unity for some
// m <= order_bound?  Exact: gcd(charpoly(h), Phi_m) nonconstant.  Orders with
// euler_phi(m) > dim(h) cannot contribute and are skipped.
bool has_root_of_unity_eigenvalue(const QMat& h, uint32_t order_bound);

// Largest m with euler_phi(m) <= dim: the natural search bound above.
uint32_t max_cyclotomic_order(unsigned dim);

// Named example models:
//   "rational-21"       E = Q,                  r = 21, signature (2, 19)
//   "real-quadratic-3"  E = Q(sqrt 2),          r = 3,  signature (2, 4)
//   "real-quartic-3"    E = Q(sqrt2 + sqrt3),   r = 3,  signature (2, 10)
//   "cm-quartic-2"      E = Q(zeta_8),          r = 2,  signature (2, 6)
// Throws std::invalid_argument for unknown names.
EndoFieldModel preset_model(const std::string& name);
std::vector<std::string> preset_names();

struct WitnessElement {
  EndoFieldModel model;
  QMat h;
};

// Explicit centralizer elements whose spectrum lies on the unit circle but
// contains no root of unity:
//  - a rational rotation by arccos(-3/5) on E = Q, r = 2 (general signature);
//  - multiplication by the norm-one unit u = (1+2*zeta)/(1-2*zeta^3) applied
//    to both coordinates of the CM preset (zeta an 8th root of unity).
WitnessElement rotation_witness();
WitnessElement cm_unit_witness();

// ---- congruence experiments on integral matrices ----

struct CongruenceOutcome {
  bool pass = false;          // fixed lattices agree mod ell^d
  bool inconclusive = false;  // no valid perturbation found (rare)
  unsigned multiplicity = 0;  // dim of the common fixed space
};

// Draws a random integral matrix h congruent to g_mat mod ell^n with exactly
// the same eigenvalue-one multiplicity (a structured perturbation composed
// with a unimodular conjugation congruent to the identity), computes the
// saturated fixed lattices of both, and compares them modulo ell^d.
CongruenceOutcome eigenspace_congruence_test(const ZMat& g_mat, uint32_t ell,
                                             unsigned n_exp, unsigned d_exp,
                                             uint64_t seed);

// Random integral semisimple matrix with eigenvalue-one multiplicity exactly
// `mult`: a block sum of I_mult and companion blocks with eigenvalues != 1,
// conjugated by a random unimodular matrix.  Deterministic per seed.
ZMat random_semisimple_with_unit_eigenspace(unsigned dim, unsigned mult,
                                            uint64_t seed);

}  // namespace k3p
