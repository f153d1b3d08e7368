#pragma once

// Witness operators M-hat over the 15 GHZ-diagonal Pauli strings, the K
// coefficient transform, the analytic product-state maximum Lambda under the
// symmetric parameter assumptions, and a deterministic brute-force angle
// oracle valid for arbitrary coefficients and all six tripartite partitions.

#include <array>
#include <complex>
#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "ghzwl/core.hpp"

namespace ghzwl {

struct WitnessParams {
  std::array<double, kNumPauli + 1> M{};  // M[1..15], slot 0 unused

  double& operator[](int i) { return M[i]; }
  double operator[](int i) const { return M[i]; }

  // The generalized-Werner witness: M7 = 2, M8 = M15 = 1, M9..M14 = -1.
  static WitnessParams werner();
};

struct KCoefficients {
  std::array<double, 16> K{};  // K[0..15]

  double& operator[](int i) { return K[i]; }
  double operator[](int i) const { return K[i]; }
};

KCoefficients k_from_m(const WitnessParams& M);
WitnessParams m_from_k(const KCoefficients& K);

// A tripartite partition of the four qubits is fixed by its two-qubit party.
struct TripartitePartition {
  int pair_a = 3, pair_b = 4;  // 1-based qubit numbers, pair_a < pair_b

  static const std::array<TripartitePartition, 6>& all();
  bool is_canonical() const { return pair_a == 3 && pair_b == 4; }
  std::string name() const;  // e.g. "1|2|34"
};

// Relabel witness coefficients under the qubit permutation that maps the given
// partition onto the canonical 1|2|34; generated from the label strings.
WitnessParams relabel_for_partition(const WitnessParams& M, const TripartitePartition& part);

struct ProductAngles {
  double theta1 = 0, theta2 = 0;  // [0, pi]
  double phi1 = 0, phi2 = 0;      // [0, 2pi)
};

// <psi1 psi2| M-hat |psi1 psi2> as a 4x4 X-type matrix on the two-qubit party,
// in the computational |q3 q4> ordering (|00>,|01>,|10>,|11>).  For partitions
// other than {3,4} the coefficients are relabeled first.
Eigen::Matrix4cd x_matrix(const WitnessParams& M, const TripartitePartition& part,
                          const ProductAngles& a);

// Largest-eigenvalue candidates of an X-type 4x4 matrix: the {1,4} and {2,3}
// blocks.  Throws if entries off the diagonal/antidiagonal exceed 1e-10.
std::pair<double, double> eigen_candidates(const Eigen::Matrix4cd& x);

// Analytic max of |g_j(phi1,phi2)| over the two angles for one corner sector
// (Gamma transform, product/max branch).  k = (K8,K10,K12,K14) or (K9,K11,K13,K15).
double g_tilde(const std::array<double, 4>& k);
double g_tilde_sector(int sector, const KCoefficients& K);  // sector 1 or 2

// Same value, also reporting whether the square-root (product) branch fired.
double g_tilde_branched(const std::array<double, 4>& k, bool* product_branch);

// The constant 4x4 matrix with -1 on the diagonal and +1 elsewhere; satisfies
// Gamma^2 = 4 I and Gamma^{-1} = Gamma/4.
Eigen::Matrix4d gamma_matrix();

// Grid-plus-refinement maximization of |g_j| over (phi1, phi2); deterministic.
double g_tilde_bruteforce(const std::array<double, 4>& k, int grid = 96);

// Lambda = max(|M7|, g1~, g2~) under the symmetric assumptions
// M1 = ... = M6 = 0 and M9 = ... = M14.  Throws when they fail beyond 1e-12.
double lambda_symmetric(const WitnessParams& M);

// Deterministic two-stage angle maximization of max(lambda1, lambda2) for one
// partition: coarse grids (theta and phi maximizations separate) followed by
// coordinate-descent refinement in the full four-angle space.
double lambda_bruteforce(const WitnessParams& M, const TripartitePartition& part,
                         int grid = 48);

double lambda_all_partitions(const WitnessParams& M, int grid = 48);

struct WitnessReport {
  double expectation = 0;  // sum M_i R_i = sum K_i T_i
  double lambda = 0;
  double L = 0;
  bool entangled = false;
};

// Evaluates Tr(rho M-hat) both ways, Lambda via the symmetric formula when the
// assumptions hold and the all-partition oracle otherwise.  Throws when the
// expectation is not positive (flip the witness signs in that case).
WitnessReport witness_report(const WitnessParams& M, const CorrelationVector& R);
WitnessReport witness_report(const WitnessParams& M, const GhzDiagonalState& state);

bool symmetric_assumptions_hold(const WitnessParams& M, double tol = 1e-12);

// M-hat as an explicit 16x16 matrix (test and verification aid).
Mat16c witness_matrix(const WitnessParams& M);

}  // namespace ghzwl
