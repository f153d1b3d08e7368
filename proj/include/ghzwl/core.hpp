#pragma once

// Four-qubit GHZ-diagonal states: basis construction, density matrices,
// Pauli-string correlations and the half-sum T coordinates.
//
// Index conventions (important):
//  - GHZ basis states are numbered j = 1..16.  |GHZ_j> = (|0 x2 x3 x4> +/- |1 ~x2 ~x3 ~x4>)/sqrt(2)
//    with the "+" branch for j <= 8 (j-1 = 0 x2 x3 x4 in binary) and the "-" branch
//    for j >= 9 (j-1 = 1 ~x2 ~x3 ~x4).
//  - Density-matrix entries use 1-based indices rho(i,j), i,j = 1..16, so that the
//    antidiagonal partner of row i is column 17-i.  Qubit 1 is the most significant bit
//    of the computational index.
//  - Correlation components R_1..R_15 follow the fixed Pauli-string order
//    IIZZ, IZIZ, IZZI, ZIIZ, ZIZI, ZZII, ZZZZ, XXXX, XXYY, XYXY, XYYX, YXXY, YXYX, YYXX, YYYY.

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ghzwl {

using cplx = std::complex<double>;
using Vec16c = Eigen::Matrix<cplx, 16, 1>;
using Mat16c = Eigen::Matrix<cplx, 16, 16>;

inline constexpr int kNumBasis = 16;
inline constexpr int kNumPauli = 15;
inline constexpr double kProbTol = 1e-12;

// The 15 Pauli strings of the GHZ-diagonal decomposition, index 1..15 (slot 0 unused).
extern const std::array<const char*, kNumPauli + 1> kPauliLabels;

// index of a label ("XXYY" -> 9); throws on unknown labels.
int pauli_index(const std::string& label);

// 16x16 matrix of Pauli string i (1..15), qubit 1 = most significant bit.
Mat16c pauli_string_matrix(int i);

// Eigenvalue of Pauli string i on |GHZ_j>; every basis state is a +-1 eigenvector
// of every string in the list.  i in 1..15, j in 1..16.
int pauli_sign(int i, int j);

struct CorrelationVector {
  // R[1..15]; R[0] unused and kept at 0.
  std::array<double, kNumPauli + 1> R{};

  double& operator[](int i) { return R[i]; }
  double operator[](int i) const { return R[i]; }
};

struct TVector {
  // T[0..15] per the half-sum rules T_{2i},T_{2i+1} = (R_{2i} +- R_{2i+1})/2
  // (with the sign swapped for i = 4, 7 and R_0 = 0).
  std::array<double, 16> T{};

  double& operator[](int i) { return T[i]; }
  double operator[](int i) const { return T[i]; }
};

class GhzDiagonalState {
 public:
  // Probabilities over |GHZ_1>..|GHZ_16>.  Values in [-1e-12, 0) are clamped to
  // zero and the vector renormalized; anything lower throws std::invalid_argument,
  // as does a total differing from 1 by more than 1e-12 (pre-clamp).
  explicit GhzDiagonalState(const std::array<double, kNumBasis>& probs);

  double p(int j) const { return p_.at(static_cast<size_t>(j - 1)); }  // j = 1..16
  const std::array<double, kNumBasis>& probs() const { return p_; }

  static GhzDiagonalState uniform();
  // Generalized Werner state: p |GHZ_1><GHZ_1| + (1-p)/16 I.
  static GhzDiagonalState werner(double p);

 private:
  std::array<double, kNumBasis> p_{};
};

// |GHZ_j> as a 16-component vector, j = 1..16.
Vec16c ghz_basis_state(int j);

// Antidiagonal partner index: |GHZ_j> and |GHZ_{partner(j)}> span the same
// {|a>, |~a>} pair.  partner(j) = 17 - j, derived from the indexing rule.
int ghz_partner(int j);

Mat16c density_matrix(const GhzDiagonalState& state);

// rho(i,j) with 1-based indices, matching the rho_{1,16} style of the criteria.
double rho_entry(const GhzDiagonalState& state, int i, int j);

// R_i = Tr(rho P_i), evaluated through the precomputed sign table and
// cross-checked against the explicit matrix trace (must agree to 1e-12).
CorrelationVector correlations(const GhzDiagonalState& state);

// The explicit-trace route alone (oracle path, used by the consistency check).
CorrelationVector correlations_via_trace(const GhzDiagonalState& state);

TVector t_from_r(const CorrelationVector& R);
CorrelationVector r_from_t(const TVector& T);

// Inverse of the linear trace map: p_j = (1 + sum_i R_i s_{ij}) / 16.
// Throws std::invalid_argument naming the most negative p_j when R lies
// outside the state set.
GhzDiagonalState state_from_correlations(const CorrelationVector& R);

// Same inversion without the positivity check; used where criteria are
// evaluated on raw correlation data that need not be a physical state.
std::array<double, kNumBasis> pseudo_probs_from_correlations(const CorrelationVector& R);

}  // namespace ghzwl
