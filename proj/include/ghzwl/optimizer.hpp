#pragma once

// Matched-witness search: minimize L = Lambda / <M> over witness parameters,
// in the symmetric mode (M7, M8, M9 = ... = M14, M15 with the analytic Lambda)
// and the asymmetric mode (M8..M15 free, diagonal part pinned at |M7| = Lambda,
// Lambda taken over all six partitions).  Deterministic multistart plus
// coordinate descent; results are reproducible for a fixed seed.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ghzwl/core.hpp"
#include "ghzwl/criteria.hpp"
#include "ghzwl/witness.hpp"

namespace ghzwl {

enum class WitnessMode { kSymmetric, kAsymmetric };

struct OptimizerConfig {
  WitnessMode mode = WitnessMode::kAsymmetric;
  int multistarts = 200;
  uint64_t seed = 1;
  double refine_tol = 1e-6;
  int oracle_grid = 24;  // reserved for brute-force cross-checks
};

struct MatchedWitness {
  double L_min = 0.0;
  WitnessParams M;      // the achieving witness (asymmetric mode: M7 filled with sign(R7) Lambda)
  double lambda = 0.0;
  double expectation = 0.0;  // sum_{i=1}^{15} M_i R_i
};

// Lambda of a purely antidiagonal witness: max over the six partitions of both
// corner-sector maxima, each evaluated with the closed-form g-tilde.
double lambda_antidiagonal(const WitnessParams& M);

// Throws std::domain_error when every antidiagonal correlation vanishes.
MatchedWitness minimize_L(const CorrelationVector& R, const OptimizerConfig& cfg);
MatchedWitness minimize_L(const GhzDiagonalState& state, const OptimizerConfig& cfg);

struct ScanPoint {
  double p15 = 0, p2 = 0;
  double L_min = 0;
  bool physical = false;
};

struct BoundaryScan {
  double p16 = 0;
  int grid = 0;
  std::vector<ScanPoint> points;  // row-major over (i: p15 index, j: p2 index)

  const ScanPoint& at(int i, int j) const { return points[static_cast<size_t>(i) * (grid + 1) + j]; }
};

// L_min over the physical triangle p2 + p15 <= (1 - p16)/7 on an
// (n+1) x (n+1) grid, asymmetric mode.
BoundaryScan scan_numeric_boundary(double p16, int n, const OptimizerConfig& cfg);

// Linear-interpolated crossings of L_min = 1 along grid edges.
std::vector<std::pair<double, double>> level_set_crossings(const BoundaryScan& scan);

// Largest distance from any crossing to the polyline (both in (p15, p2)).
double max_deviation(const std::vector<std::pair<double, double>>& crossings,
                     const std::vector<std::pair<double, double>>& polyline);

struct HierarchyEvidence {
  // (a) a family state passing criterion I but violating criterion II
  double c1_p16 = 0, c1_v = 0, c1_alpha = 0;
  double c1_margin_I = 0, c1_margin_II = 0;
  // (b) the asymmetric-vs-symmetric example
  CorrelationVector example_R;
  double sym_L = 0, asym_L = 0;
  // (c) a Werner state below threshold passing everything
  double werner_p = 0;
  bool werner_passes = false;
};

HierarchyEvidence verify_hierarchy(uint64_t seed);

}  // namespace ghzwl
