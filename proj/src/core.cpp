#include "ghzwl/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ghzwl {

const std::array<const char*, kNumPauli + 1> kPauliLabels = {
    "",     "IIZZ", "IZIZ", "IZZI", "ZIIZ", "ZIZI", "ZZII", "ZZZZ",
    "XXXX", "XXYY", "XYXY", "XYYX", "YXXY", "YXYX", "YYXX", "YYYY"};

int pauli_index(const std::string& label) {
  for (int i = 1; i <= kNumPauli; ++i) {
    if (label == kPauliLabels[i]) return i;
  }
  throw std::invalid_argument("unknown Pauli label: " + label);
}

namespace {

// Single-qubit Paulis.
Eigen::Matrix2cd pauli_1q(char axis) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  const cplx I1(0.0, 1.0);
  switch (axis) {
    case 'I': m(0, 0) = 1; m(1, 1) = 1; break;
    case 'X': m(0, 1) = 1; m(1, 0) = 1; break;
    case 'Y': m(0, 1) = -I1; m(1, 0) = I1; break;
    case 'Z': m(0, 0) = 1; m(1, 1) = -1; break;
    default: throw std::invalid_argument("bad Pauli axis");
  }
  return m;
}

// First computational ket of |GHZ_j> (the one with qubit 1 = 0), as a 4-bit index.
int ghz_first_ket(int j) {
  if (j < 1 || j > 16) throw std::out_of_range("GHZ basis index out of range");
  return (j <= 8) ? (j - 1) : (16 - j);
}

int bit(int a, int qubit) { return (a >> (4 - qubit)) & 1; }  // qubit 1 = MSB

}  // namespace

Mat16c pauli_string_matrix(int i) {
  if (i < 1 || i > kNumPauli) throw std::out_of_range("Pauli index out of range");
  const char* lbl = kPauliLabels[i];
  // Qubit 1 is the most significant factor.
  Eigen::MatrixXcd m = pauli_1q(lbl[0]);
  for (int q = 1; q < 4; ++q) {
    Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
    Eigen::Matrix2cd p = pauli_1q(lbl[q]);
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c)
        next.block(r * 2, c * 2, 2, 2) = m(r, c) * p;
    m = next;
  }
  return m;
}

int pauli_sign(int i, int j) {
  const char* lbl = kPauliLabels[i];
  const int a = ghz_first_ket(j);
  const int branch = (j <= 8) ? +1 : -1;
  bool has_x = false;
  for (int q = 0; q < 4; ++q) has_x = has_x || lbl[q] == 'X' || lbl[q] == 'Y';
  if (!has_x) {
    // Even-weight Z string: both kets share the eigenvalue (-1)^(sum of bits under Z).
    int s = 0;
    for (int q = 1; q <= 4; ++q)
      if (lbl[q - 1] == 'Z') s ^= bit(a, q);
    return s ? -1 : +1;
  }
  // X/Y string with an even number of Y's: maps |a> -> c|~a> with
  // c = (-1)^(nY/2) * (-1)^(sum of a-bits under Y); eigenvalue is (branch)*c.
  int ny = 0, s = 0;
  for (int q = 1; q <= 4; ++q) {
    if (lbl[q - 1] == 'Y') {
      ++ny;
      s ^= bit(a, q);
    }
  }
  int c = ((ny / 2) % 2 ? -1 : +1) * (s ? -1 : +1);
  return branch * c;
}

GhzDiagonalState::GhzDiagonalState(const std::array<double, kNumBasis>& probs) {
  double sum = 0.0;
  for (int j = 0; j < kNumBasis; ++j) {
    if (probs[j] < -kProbTol) {
      std::ostringstream os;
      os << "negative probability p_" << (j + 1) << " = " << probs[j];
      throw std::invalid_argument(os.str());
    }
    sum += probs[j];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "probabilities sum to " << sum << ", expected 1";
    throw std::invalid_argument(os.str());
  }
  double clamped = 0.0;
  for (int j = 0; j < kNumBasis; ++j) {
    p_[j] = std::max(probs[j], 0.0);
    clamped += p_[j];
  }
  for (double& v : p_) v /= clamped;
}

GhzDiagonalState GhzDiagonalState::uniform() {
  std::array<double, kNumBasis> p;
  p.fill(1.0 / 16.0);
  return GhzDiagonalState(p);
}

GhzDiagonalState GhzDiagonalState::werner(double w) {
  if (w < 0.0 || w > 1.0) throw std::invalid_argument("Werner parameter outside [0,1]");
  std::array<double, kNumBasis> p;
  p.fill((1.0 - w) / 16.0);
  p[0] += w;
  return GhzDiagonalState(p);
}

Vec16c ghz_basis_state(int j) {
  const int a = ghz_first_ket(j);
  const int b = 15 - a;
  const double r = 1.0 / std::sqrt(2.0);
  Vec16c v = Vec16c::Zero();
  v(a) = r;
  v(b) = (j <= 8) ? r : -r;
  return v;
}

int ghz_partner(int j) {
  if (j < 1 || j > 16) throw std::out_of_range("GHZ basis index out of range");
  return 17 - j;
}

Mat16c density_matrix(const GhzDiagonalState& state) {
  Mat16c rho = Mat16c::Zero();
  for (int j = 1; j <= 8; ++j) {
    const int a = ghz_first_ket(j);
    const int b = 15 - a;
    const double pj = state.p(j);
    const double pk = state.p(17 - j);
    rho(a, a) += (pj + pk) / 2.0;
    rho(b, b) += (pj + pk) / 2.0;
    rho(a, b) += (pj - pk) / 2.0;
    rho(b, a) += (pj - pk) / 2.0;
  }
  return rho;
}

double rho_entry(const GhzDiagonalState& state, int i, int j) {
  if (i < 1 || i > 16 || j < 1 || j > 16) throw std::out_of_range("matrix index out of range");
  Mat16c rho = density_matrix(state);
  return rho(i - 1, j - 1).real();
}

CorrelationVector correlations_via_trace(const GhzDiagonalState& state) {
  Mat16c rho = density_matrix(state);
  CorrelationVector R;
  for (int i = 1; i <= kNumPauli; ++i) {
    R[i] = (rho * pauli_string_matrix(i)).trace().real();
  }
  return R;
}

CorrelationVector correlations(const GhzDiagonalState& state) {
  CorrelationVector R;
  for (int i = 1; i <= kNumPauli; ++i) {
    double r = 0.0;
    for (int j = 1; j <= kNumBasis; ++j) r += state.p(j) * pauli_sign(i, j);
    R[i] = r;
  }
  CorrelationVector Rt = correlations_via_trace(state);
  for (int i = 1; i <= kNumPauli; ++i) {
    if (std::abs(R[i] - Rt[i]) > 1e-12) {
      throw std::logic_error("sign-table and matrix-trace correlations disagree");
    }
  }
  return R;
}

TVector t_from_r(const CorrelationVector& R) {
  TVector T;
  for (int i = 0; i <= 7; ++i) {
    const double a = (i == 0) ? 0.0 : R[2 * i];
    const double b = R[2 * i + 1];
    const double sgn = (i == 4 || i == 7) ? -1.0 : +1.0;
    T[2 * i] = 0.5 * (a + sgn * b);
    T[2 * i + 1] = 0.5 * (a - sgn * b);
  }
  return T;
}

CorrelationVector r_from_t(const TVector& T) {
  CorrelationVector R;
  for (int i = 0; i <= 7; ++i) {
    const double a = T[2 * i] + T[2 * i + 1];
    const double sgn = (i == 4 || i == 7) ? -1.0 : +1.0;
    const double b = sgn * (T[2 * i] - T[2 * i + 1]);
    if (i > 0) R[2 * i] = a;
    R[2 * i + 1] = b;
  }
  return R;
}

std::array<double, kNumBasis> pseudo_probs_from_correlations(const CorrelationVector& R) {
  std::array<double, kNumBasis> p{};
  for (int j = 1; j <= kNumBasis; ++j) {
    double s = 1.0;
    for (int i = 1; i <= kNumPauli; ++i) s += R[i] * pauli_sign(i, j);
    p[static_cast<size_t>(j - 1)] = s / 16.0;
  }
  return p;
}

GhzDiagonalState state_from_correlations(const CorrelationVector& R) {
  auto p = pseudo_probs_from_correlations(R);
  int worst = 0;
  for (int j = 1; j < kNumBasis; ++j)
    if (p[j] < p[worst]) worst = j;
  if (p[worst] < -kProbTol) {
    std::ostringstream os;
    os << "correlations outside the state set: p_" << (worst + 1) << " = " << p[worst];
    throw std::invalid_argument(os.str());
  }
  return GhzDiagonalState(p);
}

}  // namespace ghzwl
