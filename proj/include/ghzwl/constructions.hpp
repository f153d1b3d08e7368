#pragma once

// Explicit triseparable decompositions certifying sufficiency of criteria
// I-IV on the family boundary, with machine verification that the assembled
// mixtures reproduce the target states.
//
// Every builder returns a Decomposition: a weighted list of tripartite product
// states (two Bloch single-qubit parties and one two-qubit party).  verify()
// reassembles the 16x16 density matrix and reports the maximum entrywise
// residual against the target.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ghzwl/core.hpp"
#include "ghzwl/family.hpp"
#include "ghzwl/witness.hpp"

namespace ghzwl {

struct BlochState {
  double theta = 0.0;
  double phi = 0.0;

  Eigen::Vector2cd ket() const;
};

struct ProductTerm {
  double weight = 0.0;
  TripartitePartition partition;
  BlochState single1, single2;       // parties on the two singleton qubits (ascending order)
  Eigen::Vector4cd pair_state;       // two-qubit party in |q_a q_b> ordering

  Vec16c assemble() const;           // 16-component product vector
};

struct Decomposition {
  std::vector<ProductTerm> terms;
  GhzDiagonalState target = GhzDiagonalState::uniform();
  std::string segment;               // provenance label (AB, EF, BC, ...)
};

struct VerifyReport {
  bool weights_ok = false;           // nonnegative, summing to 1
  bool products_ok = false;          // unit-norm party states
  double weight_sum = 0.0;
  double max_residual = 0.0;         // max entrywise |assembled - target|
  bool ok(double tol = 1e-8) const { return weights_ok && products_ok && max_residual < tol; }
};

VerifyReport verify(const Decomposition& dec);

Mat16c assemble_density(const std::vector<ProductTerm>& terms);

// --- Averaged product families ------------------------------------------------
// Each comes in two routes: the explicit product-term average and the closed
// form of its correlation vector; tests require entrywise agreement to 1e-12.

// Criterion-I family: equatorial singles at phi1, phi2, pair (|00> + e^{-i(phi1+phi2)}|11>)/sqrt2,
// averaged over the eight sign/shift variants and the six partitions.
std::vector<ProductTerm> rho1_bar_terms(double phi1, double phi2);
CorrelationVector rho1_bar_correlations(double phi1, double phi2);

// Criterion-II eigenvector families for the witness with coefficients
// (m7, m8, m15) in {+-1}^3 (M9..M14 = 0).  family = 'A' uses the {1,4}
// eigenvalue block (the "23"-type states), family = 'B' the {2,3} block (the
// "45"-type states).  Each is the four-variant theta average over the six
// partitions; every term attains <M> = 1.
struct LineCase {
  int m7 = 1, m8 = 1, m15 = 1;
};
std::vector<ProductTerm> rho_line_terms(const LineCase& c, char family, double theta, double phi);
CorrelationVector rho_line_correlations(const LineCase& c, char family, double theta, double phi);

// Criterion-III/IV families.
std::vector<ProductTerm> rho7_bar_terms(double theta, double phi1, double phi2, double phi3);
CorrelationVector rho7_bar_correlations(double theta, double phi1, double phi2, double phi3);
// mirror = false: the |01>+|10> pair family with the XX-heavy antidiagonal;
// mirror = true: its X<->Y rotation (YY-heavy), used on the HI arc.
std::vector<ProductTerm> rho8_bar_terms(double theta, bool mirror = false);
CorrelationVector rho8_bar_correlations(double theta, bool mirror = false);

// Fully separable diagonal corrector with <ZZ..>-pair coefficient d1 and
// <ZZZZ> coefficient d7 (even-parity computational mixture; d7 = +1 requires
// d1 in [-1/3, 1]).
std::vector<ProductTerm> diagonal_corrector_terms(double d1, double d7);

// --- Boundary decompositions ---------------------------------------------------

// Straight lines AB (alpha = 9) and FG (alpha = 5, needs p16 >= 2/9): the
// kappa-mixture of the criterion-I family with the diagonal state of the
// appendix construction.
Decomposition decompose_line_AB_FG(const FamilyPoint& pt);

// Criterion-II lines AH/AJ, EF, GH, DE, IJ; the segment name fixes the sign
// case.  Solves the mixing weight and angles, adds the diagonal corrector
// needed to match the family's diagonal sector exactly.
Decomposition decompose_line_II(const FamilyPoint& pt, const std::string& segment);

// Criterion-III curves BC and GH (the latter is the mirror arc of figure 2;
// the same angle solve covers both sign orientations of (R8, R15)).
Decomposition decompose_curve_BC(const FamilyPoint& pt);

// Criterion-IV curves: CD is the (1-eta) rho7 + eta rho8 mixture at eta(K);
// HI (mirror = true) replaces rho8 by its X<->Y rotated counterpart.
// The diagonal corrector admits a solution only while eta(K) <= 1/2; beyond
// that the boundary state is provably outside the reachable set and an
// infeasibility error is thrown.
Decomposition decompose_curve_CD(double K, double p16, bool mirror = false);

}  // namespace ghzwl
