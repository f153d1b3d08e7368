#pragma once

// The tripartite-separability criterion set C2 = {I, II, III, IV} plus
// criterion I', with the auxiliary quantities R1~, R2~, R1'~, tau(K) and R''~.
// Margins are signed slack: >= 0 means the criterion is satisfied, a negative
// value is the violation depth.  Margins, not booleans, are the primary output
// so that boundary root-finding elsewhere stays continuous.

#include <array>
#include <optional>
#include <string>

#include "ghzwl/core.hpp"

namespace ghzwl {

// Eq.-(10)-style maximum for a sector (T8, T10, T12, T14): triple-product
// square root when T8 T10 T12 T14 > 0 and Q >= 0, else max |t_i| with
// t = T Gamma.
double r1_tilde(const TVector& T);
double r1_tilde_sector(const std::array<double, 4>& t);

// |T9| + |T15|.
double r2_tilde(const TVector& T);

// Criterion I margin: (1/2) min of the two diagonal four-sums minus the
// largest of the four antidiagonal magnitudes |rho_{1,16}|, |rho_{4,13}|,
// |rho_{5,12}|, |rho_{8,9}|.  Agrees with [1 - |R7| - R1~]/8 whenever the max
// branch of R1~ applies (asserted internally).
double criterion_I(const CorrelationVector& R);

// Criterion I': same left side against the largest of all sixteen
// antidiagonal entries; the eight-term quarter-sum alternative right side is
// also computed and the weaker (larger) bound is used.
double criterion_I_prime(const CorrelationVector& R);

// 1 - (|R7| + |R8| + |R15|).
double criterion_II(const CorrelationVector& R);

struct ConditionalMargin {
  bool applicable = false;
  double margin = 0.0;
};

// Criterion III: applicable iff R8 R15 < 0 and |8 R8 R15| >= |(sum R_i)(R8+R15)|
// (products within 1e-12 of zero count as failing the strict inequality);
// margin = (1 - |R7|) - |R8 - R15| sqrt(1 - (sum R_i)^2 / (16 R8 R15)).
ConditionalMargin criterion_III(const CorrelationVector& R);

// tau(K) of the criterion-IV one-parameter witness family, by dense s-scan
// plus golden-section refinement.  |t|(s) is evaluated in the cancellation-free
// form (s-2) + 4(2-s)/(2-s+u), u = sqrt((1-s)(4-s^2)).
double tau(double K);

struct RDoublePrime {
  double value = 0.0;
  bool degenerate = false;  // R15 = 0: tau route undefined, scan result returned
  double route_a = 0.0;     // M15 scan with M8 solved from the g-tilde equality
  double route_b = 0.0;     // s-scan over the closed-form |t|(s) family
};

// R''~ : maximum of sum_{i=8..15} M_i R_i / |M7| over the criterion-IV witness
// family (M9..M14 = -1, g1~ = g2~ = |M7|), computed two independent ways that
// must agree within 1e-6.
RDoublePrime r_double_prime(const CorrelationVector& R);

double criterion_IV(const CorrelationVector& R);

struct CriterionReport {
  struct Entry {
    bool applicable = true;
    double margin = 0.0;
  };
  Entry I, Iprime, II, III, IV;
  bool detected_entangled = false;  // any applicable margin < 0

  std::string verdict() const { return detected_entangled ? "detected-entangled" : "passes-C2"; }
};

CriterionReport evaluate(const CorrelationVector& R);
CriterionReport evaluate(const GhzDiagonalState& state);

}  // namespace ghzwl
