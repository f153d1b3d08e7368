#pragma once

// Reference constants used by the reproduction commands and the acceptance
// suite.  Exact values carry their closed forms; the point-C coordinates and
// the matched-witness minima are the published numerical values.

#include <array>
#include <cmath>

namespace ghzwl::ref {

inline const double kSqrt41 = std::sqrt(41.0);

// Landmark coordinates in (v, alpha).
inline const double vA = 1.0 / 6.0;
inline const double vB = (5.0 + kSqrt41) / 16.0;        // ~0.712695
inline const double vF = 5.0 / 6.0;
inline const double vG = (11.0 - kSqrt41) / 16.0;       // ~0.287305
inline const double vE = 10.0 / 11.0;
inline const double alphaA = 9.0;
inline const double alphaE = 80.0 / 11.0;
inline const double alphaD = 22.0 / 3.0;
inline const double alphaI = 20.0 / 3.0;
inline const double alphaJ = 8.0;
inline const double alphaF = 5.0;

// Intersection of criteria III and IV.
inline const double vC = 0.7492394;
inline const double alphaC = 8.900032;
inline const double KC = 0.6626275;

// Triseparability threshold of the generalized Werner state.
inline const double wernerThreshold = 0.2;

// The asymmetric-vs-symmetric comparison state (R8..R15; diagonal zero) and
// the published matched-witness minima.
inline const std::array<double, 8> exampleAntidiagonal = {
    0.3255, -0.5260, 0.0739, 0.4046, -0.8764, -0.4321, -0.5037, 0.8752};
inline const double exampleSymmetricL = 0.6641;
inline const double exampleAsymmetricL = 0.5347;

// p2 values of the points I and J at p16 = 0.3.
inline const double p2_I = 0.06;
inline const double p2_J = 0.05;

}  // namespace ghzwl::ref
