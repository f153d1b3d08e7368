#include "ghzwl/witness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ghzwl {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Apply the Gamma matrix (diag -1, off-diag +1) to a length-4 row vector.
std::array<double, 4> gamma_apply(const std::array<double, 4>& v) {
  const double s = v[0] + v[1] + v[2] + v[3];
  return {s - 2 * v[0], s - 2 * v[1], s - 2 * v[2], s - 2 * v[3]};
}

}  // namespace

WitnessParams WitnessParams::werner() {
  WitnessParams M;
  M[7] = 2;
  M[8] = M[15] = 1;
  for (int i = 9; i <= 14; ++i) M[i] = -1;
  return M;
}

KCoefficients k_from_m(const WitnessParams& M) {
  KCoefficients K;
  K[0] = M[1];
  K[1] = -M[1];
  K[2] = M[2] + M[3];
  K[3] = M[2] - M[3];
  K[4] = M[4] + M[5];
  K[5] = M[4] - M[5];
  K[6] = M[6] + M[7];
  K[7] = M[6] - M[7];
  K[8] = M[8] - M[9];
  K[9] = M[8] + M[9];
  K[10] = M[10] + M[11];
  K[11] = M[10] - M[11];
  K[12] = M[12] + M[13];
  K[13] = M[12] - M[13];
  K[14] = M[14] - M[15];
  K[15] = M[14] + M[15];
  return K;
}

WitnessParams m_from_k(const KCoefficients& K) {
  WitnessParams M;
  M[1] = K[0];
  M[2] = (K[2] + K[3]) / 2;
  M[3] = (K[2] - K[3]) / 2;
  M[4] = (K[4] + K[5]) / 2;
  M[5] = (K[4] - K[5]) / 2;
  M[6] = (K[6] + K[7]) / 2;
  M[7] = (K[6] - K[7]) / 2;
  M[8] = (K[8] + K[9]) / 2;
  M[9] = (K[9] - K[8]) / 2;
  M[10] = (K[10] + K[11]) / 2;
  M[11] = (K[10] - K[11]) / 2;
  M[12] = (K[12] + K[13]) / 2;
  M[13] = (K[12] - K[13]) / 2;
  M[14] = (K[14] + K[15]) / 2;
  M[15] = (K[15] - K[14]) / 2;
  return M;
}

const std::array<TripartitePartition, 6>& TripartitePartition::all() {
  static const std::array<TripartitePartition, 6> parts = {
      TripartitePartition{1, 2}, TripartitePartition{1, 3}, TripartitePartition{1, 4},
      TripartitePartition{2, 3}, TripartitePartition{2, 4}, TripartitePartition{3, 4}};
  return parts;
}

std::string TripartitePartition::name() const {
  int c = 0, d = 0;
  for (int q = 1; q <= 4; ++q) {
    if (q == pair_a || q == pair_b) continue;
    if (!c) c = q; else d = q;
  }
  return std::to_string(c) + "|" + std::to_string(d) + "|" +
         std::to_string(pair_a) + std::to_string(pair_b);
}

WitnessParams relabel_for_partition(const WitnessParams& M, const TripartitePartition& part) {
  if (part.is_canonical()) return M;
  // pi maps old qubit position -> new position: singletons to 1,2, pair to 3,4.
  std::array<int, 5> pi{};
  int c = 0, d = 0;
  for (int q = 1; q <= 4; ++q) {
    if (q == part.pair_a || q == part.pair_b) continue;
    if (!c) c = q; else d = q;
  }
  pi[c] = 1;
  pi[d] = 2;
  pi[part.pair_a] = 3;
  pi[part.pair_b] = 4;
  WitnessParams out;
  for (int i = 1; i <= kNumPauli; ++i) {
    const char* lbl = kPauliLabels[i];
    char permuted[5] = {0, 0, 0, 0, 0};
    for (int q = 1; q <= 4; ++q) permuted[pi[q] - 1] = lbl[q - 1];
    out[pauli_index(std::string(permuted, 4))] = M[i];
  }
  return out;
}

namespace {

cplx g_corner(int sector, const KCoefficients& K, double phi1, double phi2) {
  const double c1 = std::cos(phi1), s1 = std::sin(phi1);
  const double c2 = std::cos(phi2), s2 = std::sin(phi2);
  const cplx I1(0.0, 1.0);
  if (sector == 1) {
    return K[8] * c1 * c2 - I1 * K[10] * c1 * s2 - I1 * K[12] * s1 * c2 + K[14] * s1 * s2;
  }
  return K[9] * c1 * c2 - I1 * K[11] * c1 * s2 - I1 * K[13] * s1 * c2 + K[15] * s1 * s2;
}

}  // namespace

Eigen::Matrix4cd x_matrix(const WitnessParams& Min, const TripartitePartition& part,
                          const ProductAngles& a) {
  const WitnessParams M = relabel_for_partition(Min, part);
  const KCoefficients K = k_from_m(M);
  const double c1 = std::cos(a.theta1), s1 = std::sin(a.theta1);
  const double c2 = std::cos(a.theta2), s2 = std::sin(a.theta2);

  Eigen::Matrix4cd x = Eigen::Matrix4cd::Zero();
  x(0, 0) = K[0] + K[2] * c2 + K[4] * c1 + K[6] * c1 * c2;
  x(1, 1) = K[1] - K[3] * c2 - K[5] * c1 + K[7] * c1 * c2;  // |01>
  x(2, 2) = K[1] + K[3] * c2 + K[5] * c1 + K[7] * c1 * c2;  // |10>
  x(3, 3) = K[0] - K[2] * c2 - K[4] * c1 + K[6] * c1 * c2;
  const cplx g1 = g_corner(1, K, a.phi1, a.phi2);
  const cplx g2 = g_corner(2, K, a.phi1, a.phi2);
  x(0, 3) = s1 * s2 * g1;
  x(3, 0) = std::conj(x(0, 3));
  x(1, 2) = s1 * s2 * std::conj(g2);
  x(2, 1) = std::conj(x(1, 2));
  return x;
}

std::pair<double, double> eigen_candidates(const Eigen::Matrix4cd& x) {
  const double off = std::max({std::abs(x(0, 1)), std::abs(x(0, 2)), std::abs(x(1, 0)),
                               std::abs(x(1, 3)), std::abs(x(2, 0)), std::abs(x(2, 3)),
                               std::abs(x(3, 1)), std::abs(x(3, 2))});
  if (off > 1e-10) throw std::invalid_argument("matrix is not X-type");
  const double a = x(0, 0).real(), d = x(3, 3).real();
  const double b = x(1, 1).real(), c = x(2, 2).real();
  const double l1 = 0.5 * (a + d + std::hypot(a - d, 2.0 * std::abs(x(0, 3))));
  const double l2 = 0.5 * (b + c + std::hypot(b - c, 2.0 * std::abs(x(1, 2))));
  return {l1, l2};
}

double g_tilde_branched(const std::array<double, 4>& kin, bool* product_branch) {
  if (product_branch) *product_branch = false;
  double scale = std::max({std::abs(kin[0]), std::abs(kin[1]), std::abs(kin[2]), std::abs(kin[3])});
  if (scale == 0.0) return 0.0;
  std::array<double, 4> k;
  for (int i = 0; i < 4; ++i) k[i] = kin[i] / scale;

  std::array<double, 4> xi4 = gamma_apply(k);
  const double xi = xi4[0] / 4, be = xi4[1] / 4, ga = xi4[2] / 4, de = xi4[3] / 4;
  const double prod = xi * be * ga * de;
  const double maxk = std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2]), std::abs(k[3])});
  // Products within 1e-14 of zero are treated as failing the strict inequality.
  if (prod > 1e-14) {
    std::array<double, 4> w = {xi * be * ga, xi * be * de, xi * ga * de, be * ga * de};
    std::array<double, 4> q = gamma_apply(w);
    const double qt = q[0] * q[1] * q[2] * q[3];
    if (qt >= -1e-14) {
      const double num = (xi * be + ga * de) * (xi * ga + be * de) * (xi * de + be * ga);
      if (num >= 0.0) {
        if (product_branch) *product_branch = true;
        return scale * std::sqrt(num / prod);
      }
    }
  }
  return scale * maxk;
}

double g_tilde(const std::array<double, 4>& kin) { return g_tilde_branched(kin, nullptr); }

Eigen::Matrix4d gamma_matrix() {
  Eigen::Matrix4d g = Eigen::Matrix4d::Ones();
  g.diagonal().setConstant(-1.0);
  return g;
}

double g_tilde_sector(int sector, const KCoefficients& K) {
  if (sector == 1) return g_tilde({K[8], K[10], K[12], K[14]});
  if (sector == 2) return g_tilde({K[9], K[11], K[13], K[15]});
  throw std::invalid_argument("sector must be 1 or 2");
}

double g_tilde_bruteforce(const std::array<double, 4>& k, int grid) {
  auto absg = [&](double p1, double p2) {
    const double c1 = std::cos(p1), s1 = std::sin(p1);
    const double c2 = std::cos(p2), s2 = std::sin(p2);
    const double re = k[0] * c1 * c2 + k[3] * s1 * s2;
    const double im = -(k[1] * c1 * s2 + k[2] * s1 * c2);
    return std::hypot(re, im);
  };
  // Keep several well-separated grid candidates; a single basin can hide a
  // slightly higher neighbor (axis configurations are frequent local maxima).
  struct Cand { double v, p1, p2; };
  std::vector<Cand> cands;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double p1 = 2.0 * kPi * i / grid, p2 = 2.0 * kPi * j / grid;
      const double v = absg(p1, p2);
      bool placed = false;
      for (auto& c : cands) {
        if (std::abs(std::remainder(c.p1 - p1, 2.0 * kPi)) < 0.5 &&
            std::abs(std::remainder(c.p2 - p2, 2.0 * kPi)) < 0.5) {
          placed = true;
          if (v > c.v) { c.v = v; c.p1 = p1; c.p2 = p2; }
          break;
        }
      }
      if (!placed) cands.push_back({v, p1, p2});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.v > b.v; });
  if (cands.size() > 12) cands.resize(12);

  double best = 0.0;
  for (auto c : cands) {
    double step = 2.0 * kPi / grid;
    while (step > 1e-9) {
      bool improved = false;
      for (int dim = 0; dim < 2; ++dim) {
        for (double sgn : {+1.0, -1.0}) {
          const double t1 = c.p1 + (dim == 0 ? sgn * step : 0.0);
          const double t2 = c.p2 + (dim == 1 ? sgn * step : 0.0);
          const double v = absg(t1, t2);
          if (v > c.v) { c.v = v; c.p1 = t1; c.p2 = t2; improved = true; }
        }
      }
      if (!improved) step /= 2;
    }
    best = std::max(best, c.v);
  }
  return best;
}

bool symmetric_assumptions_hold(const WitnessParams& M, double tol) {
  for (int i = 1; i <= 6; ++i)
    if (std::abs(M[i]) > tol) return false;  // (6x) together with M1 = 0
  for (int i = 10; i <= 14; ++i)
    if (std::abs(M[i] - M[9]) > tol) return false;  // (6y)
  return true;
}

double lambda_symmetric(const WitnessParams& M) {
  if (!symmetric_assumptions_hold(M))
    throw std::invalid_argument("witness violates the symmetric assumptions");
  const KCoefficients K = k_from_m(M);
  return std::max({std::abs(M[7]), g_tilde_sector(1, K), g_tilde_sector(2, K)});
}

namespace {

// max over theta grids of K0 + K6 c1 c2 + sqrt((K2 c2 + K4 c1)^2 + (g~ s1 s2)^2)
// for one lambda candidate; the phi and theta maximizations decouple because the
// corner enters only through |g|.
double lambda_theta_max(double k0, double k2, double k4, double k6, double gt, int grid,
                        double* bt1, double* bt2) {
  auto val = [&](double t1, double t2) {
    const double c1 = std::cos(t1), c2 = std::cos(t2);
    const double s1 = std::sin(t1), s2 = std::sin(t2);
    return k0 + k6 * c1 * c2 + std::hypot(k2 * c2 + k4 * c1, gt * s1 * s2);
  };
  double best = -1e300;
  for (int i = 0; i <= grid; ++i) {
    for (int j = 0; j <= grid; ++j) {
      const double t1 = kPi * i / grid, t2 = kPi * j / grid;
      const double v = val(t1, t2);
      if (v > best) { best = v; *bt1 = t1; *bt2 = t2; }
    }
  }
  return best;
}

}  // namespace

double lambda_bruteforce(const WitnessParams& Min, const TripartitePartition& part, int grid) {
  const WitnessParams M = relabel_for_partition(Min, part);
  const KCoefficients K = k_from_m(M);
  const double g1 = g_tilde_bruteforce({K[8], K[10], K[12], K[14]}, 2 * grid);
  const double g2 = g_tilde_bruteforce({K[9], K[11], K[13], K[15]}, 2 * grid);

  double t1 = 0, t2 = 0, u1 = 0, u2 = 0;
  const double l1 = lambda_theta_max(K[0], K[2], K[4], K[6], g1, grid, &t1, &t2);
  const double l2 = lambda_theta_max(K[1], K[3], K[5], K[7], g2, grid, &u1, &u2);

  // Refine in the full four-angle space from the better grid candidate.
  ProductAngles a;
  if (l1 >= l2) { a.theta1 = t1; a.theta2 = t2; }
  else { a.theta1 = u1; a.theta2 = u2; }
  auto val = [&](const ProductAngles& ang) {
    auto [x1, x2] = eigen_candidates(x_matrix(M, TripartitePartition{3, 4}, ang));
    return std::max(x1, x2);
  };
  // Seed phi at the coarse-grid argmax of the dominating corner.
  double best = val(a);
  for (int i = 0; i < 2 * grid; ++i) {
    ProductAngles c = a;
    c.phi1 = 2.0 * kPi * i / (2 * grid);
    for (int j = 0; j < 2 * grid; ++j) {
      c.phi2 = 2.0 * kPi * j / (2 * grid);
      const double v = val(c);
      if (v > best) { best = v; a = c; }
    }
  }
  double step = kPi / grid;
  while (step > 1e-7) {
    bool improved = false;
    for (int dim = 0; dim < 4; ++dim) {
      for (double sgn : {+1.0, -1.0}) {
        ProductAngles c = a;
        double* fields[4] = {&c.theta1, &c.theta2, &c.phi1, &c.phi2};
        *fields[dim] += sgn * step;
        const double v = val(c);
        if (v > best) { best = v; a = c; improved = true; }
      }
    }
    if (!improved) step /= 2;
  }
  return best;
}

double lambda_all_partitions(const WitnessParams& M, int grid) {
  double best = -1e300;
  for (const auto& part : TripartitePartition::all())
    best = std::max(best, lambda_bruteforce(M, part, grid));
  return best;
}

WitnessReport witness_report(const WitnessParams& M, const CorrelationVector& R) {
  double mr = 0.0;
  for (int i = 1; i <= kNumPauli; ++i) mr += M[i] * R[i];
  const KCoefficients K = k_from_m(M);
  const TVector T = t_from_r(R);
  double kt = 0.0;
  for (int i = 0; i < 16; ++i) kt += K[i] * T[i];
  if (std::abs(mr - kt) > 1e-10)
    throw std::logic_error("sum M_i R_i and sum K_i T_i disagree");
  if (mr <= 0.0)
    throw std::domain_error("witness expectation is not positive; flip the witness signs");

  WitnessReport rep;
  rep.expectation = mr;
  rep.lambda = symmetric_assumptions_hold(M) ? lambda_symmetric(M) : lambda_all_partitions(M);
  rep.L = rep.lambda / mr;
  rep.entangled = rep.L < 1.0;
  return rep;
}

WitnessReport witness_report(const WitnessParams& M, const GhzDiagonalState& state) {
  return witness_report(M, correlations(state));
}

Mat16c witness_matrix(const WitnessParams& M) {
  Mat16c m = Mat16c::Zero();
  for (int i = 1; i <= kNumPauli; ++i) m += M[i] * pauli_string_matrix(i);
  return m;
}

}  // namespace ghzwl
