#pragma once

// The highly symmetric GHZ-diagonal family (p1, p2, p15, p16), its (v, alpha)
// coordinates, the analytic boundary segments of the triseparable set, the
// landmark points, and the assembled boundary polylines for p16 = 0 (figure-1
// layout) and p16 >= 2/9 (figure-2 layout).
//
// Coordinates: alpha = q / w with w = 1 - 2 p16 and q = 1/(p2 + p15);
// p15 = v w / alpha, p2 = (1-v) w / alpha, p1 = 1 - p16 - 7 (p2 + p15).

#include <optional>
#include <string>
#include <vector>

#include "ghzwl/core.hpp"

namespace ghzwl {

struct FamilyPoint {
  double p16 = 0.0;
  double v = 0.0;      // [0, 1]
  double alpha = 7.0;  // > 0

  double w() const { return 1.0 - 2.0 * p16; }
  double p15() const { return v * w() / alpha; }
  double p2() const { return (1.0 - v) * w() / alpha; }
  double p1() const { return 1.0 - p16 - 7.0 * (p2() + p15()); }
};

// Probability vector with p2..p8 and p9..p15 equal; throws when p1 < -1e-12.
GhzDiagonalState to_state(const FamilyPoint& pt);

// Closed-form correlations of a family point (R1..R6 = R7, R9..R14 = -R15).
CorrelationVector family_correlations(const FamilyPoint& pt);

// Coefficients a0..a4 of the criterion-III boundary quartic in v, Eq.-(24b)
// style: a4 = 256, a3 = 96 a - 1184, a2 = 1364 - 144 a, a1 = 60 a - 520,
// a0 = (a - 10)^2.
std::array<double, 5> quartic_coefficients(double alpha);

// Real roots in [0, 1], via companion-matrix eigenvalues with Newton polish;
// near-double roots are deduplicated.
std::vector<double> quartic_roots(double alpha);

// Criterion-IV boundary curve, R7 > 0 branch:
// v = [1 + (K+1)/tau]/2,  alpha = 7 + (7-K)/tau.
struct CurvePoint {
  double v = 0, alpha = 0;
};
CurvePoint cd_curve(double K);

// R7 < 0 continuation (needed below alpha = 8 w when p16 < 1/16):
// 8 w (alpha - 7) tau = (7 - K)(2 alpha - 8 w),  v = [alpha(1+K) - 8K]/(14 - 2K).
CurvePoint cd_curve_negative_r7(double K, double p16);

struct PointC {
  double v = 0, alpha = 0, K = 0;
};
// Simultaneous root of the quartic and the criterion-IV curve; the (v, alpha)
// coordinates are p16-independent.
PointC point_C(double p16 = 0.0);

struct Landmark {
  std::string label;
  double v = 0, alpha = 0;
  double p15 = 0, p2 = 0;
};

// Landmark table for a given p16.  Labels follow the figures: for p16 = 0 the
// set {A,B,C,D,E,H} (D is the R7 sign change on the criterion-IV arc, E its
// intersection with the p15 = 1/8 line); for p16 >= 2/9 the set {A..J}.
std::vector<Landmark> landmarks(double p16);

struct BoundaryPoint {
  double v = 0, alpha = 0;
  double p15 = 0, p2 = 0, p1 = 0, p16 = 0;
};

struct BoundarySegment {
  std::string label;      // AB, BC, CDE, ...
  std::string criterion;  // I, II, III, IV, physical
  std::vector<BoundaryPoint> points;
};

// Ordered boundary polyline with n >= 2 points per segment.  Supports the two
// regimes treated in the source material: p16 = 0 and p16 in [2/9, 1/2).
// Adjacent segments are checked to meet within 1e-4 (assembly error otherwise),
// and every emitted point is checked against the sourcing criterion.
std::vector<BoundarySegment> boundary(double p16, int n);

struct EtaResult {
  double eta = 0.0;
  double residual = 0.0;  // value of the defining equation at the maximizer
  bool negative = false;  // maximizer below zero (K < K_C)
};

// Root eta of the criterion-IV sufficiency equation along the CD curve: the
// left side  1 - eta - |R8' - R15' + eta| sqrt(1 - (R9' + eta/2)^2 / ((R8'+eta) R15'))
// attains its local maximum value 0 at eta(K).  The eta/2 shift follows from
// the mixing chain; see the decompositions module.
EtaResult eta_of_K(double K);

}  // namespace ghzwl
