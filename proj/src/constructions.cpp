#include "ghzwl/constructions.hpp"

#include "ghzwl/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ghzwl {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI(0.0, 1.0);

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

}  // namespace

Eigen::Vector2cd BlochState::ket() const {
  Eigen::Vector2cd v;
  v << std::cos(theta / 2.0), std::sin(theta / 2.0) * std::exp(kI * phi);
  return v;
}

Vec16c ProductTerm::assemble() const {
  int c = 0, d = 0;
  for (int q = 1; q <= 4; ++q) {
    if (q == partition.pair_a || q == partition.pair_b) continue;
    if (!c) c = q; else d = q;
  }
  const Eigen::Vector2cd k1 = single1.ket();
  const Eigen::Vector2cd k2 = single2.ket();
  Vec16c v;
  for (int idx = 0; idx < 16; ++idx) {
    const int b1 = (idx >> (4 - c)) & 1;
    const int b2 = (idx >> (4 - d)) & 1;
    const int ba = (idx >> (4 - partition.pair_a)) & 1;
    const int bb = (idx >> (4 - partition.pair_b)) & 1;
    v(idx) = k1(b1) * k2(b2) * pair_state(ba * 2 + bb);
  }
  return v;
}

Mat16c assemble_density(const std::vector<ProductTerm>& terms) {
  Mat16c rho = Mat16c::Zero();
  for (const auto& t : terms) {
    const Vec16c v = t.assemble();
    rho += t.weight * (v * v.adjoint());
  }
  return rho;
}

VerifyReport verify(const Decomposition& dec) {
  VerifyReport rep;
  double sum = 0.0;
  bool nonneg = true, norms = true;
  for (const auto& t : dec.terms) {
    sum += t.weight;
    if (t.weight < -1e-12) nonneg = false;
    if (std::abs(t.pair_state.norm() - 1.0) > 1e-9) norms = false;
  }
  rep.weight_sum = sum;
  rep.weights_ok = nonneg && std::abs(sum - 1.0) < 1e-9;
  rep.products_ok = norms;
  const Mat16c got = assemble_density(dec.terms);
  const Mat16c want = density_matrix(dec.target);
  rep.max_residual = (got - want).cwiseAbs().maxCoeff();
  return rep;
}

namespace {

Eigen::Vector4cd ghz_pair(int a, int b, double phase) {
  // (|ab> + e^{i phase}|~a ~b>)/sqrt(2) in |q_a q_b> ordering
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v(a * 2 + b) = 1.0 / std::sqrt(2.0);
  v((1 - a) * 2 + (1 - b)) = std::exp(kI * phase) / std::sqrt(2.0);
  return v;
}

// Spread one canonical-partition single/single/pair configuration over the
// full qubit-permutation orbit: six partitions, both orders of the singleton
// parties (the pair states used here are swap-invariant, so the pair order
// does not add anything).
void spread_partitions(std::vector<ProductTerm>& out, double weight, const BlochState& s1,
                       const BlochState& s2, const Eigen::Vector4cd& pair) {
  for (const auto& part : TripartitePartition::all()) {
    for (int swap : {0, 1}) {
      ProductTerm t;
      t.weight = weight / 12.0;
      t.partition = part;
      t.single1 = swap ? s2 : s1;
      t.single2 = swap ? s1 : s2;
      t.pair_state = pair;
      out.push_back(t);
    }
  }
}

const std::array<double, 4> kThetaVariants = {1.0, -1.0, 1.0, -1.0};  // sign
const std::array<double, 4> kThetaShifts = {0.0, 0.0, kPi, kPi};

}  // namespace

std::vector<ProductTerm> rho1_bar_terms(double phi1, double phi2) {
  std::vector<ProductTerm> out;
  for (int k0 = 0; k0 < 2; ++k0) {
    for (int k1 = 0; k1 < 2; ++k1) {
      for (int k2 = 0; k2 < 2; ++k2) {
        const double sgn = k0 ? -1.0 : 1.0;
        const double a = sgn * (phi1 + k1 * kPi);
        const double b = sgn * (phi2 + k2 * kPi);
        spread_partitions(out, 1.0 / 8.0, {kPi / 2, a}, {kPi / 2, b}, ghz_pair(0, 0, -(a + b)));
      }
    }
  }
  return out;
}

CorrelationVector rho1_bar_correlations(double phi1, double phi2) {
  const double cp = std::cos(phi1 + phi2), cm = std::cos(phi1 - phi2);
  const double sp = std::sin(phi1 + phi2);
  CorrelationVector R;
  for (int i = 1; i <= 6; ++i) R[i] = 1.0 / 6.0;
  R[7] = 0.0;
  R[8] = 0.5 * (cp * cp + cp * cm);
  R[15] = 0.5 * (cp * cp - cp * cm);
  for (int i = 9; i <= 14; ++i) R[i] = -(1.0 + sp * sp) / 6.0;
  return R;
}

std::vector<ProductTerm> rho_line_terms(const LineCase& c, char family, double theta, double phi) {
  require(std::abs(c.m7) == 1 && std::abs(c.m8) == 1 && std::abs(c.m15) == 1,
          "line case coefficients must be +-1");
  const bool same = c.m8 * c.m15 > 0;
  std::vector<ProductTerm> out;
  for (int var = 0; var < 4; ++var) {
    const double t1 = kThetaVariants[var] * theta + kThetaShifts[var];
    for (double fsgn : {+1.0, -1.0}) {  // phi-sign variant cancels residual phases
      const double p1 = fsgn * phi;
      for (int cse = 0; cse < 2; ++cse) {
        double t2, p2, g;  // second Bloch state and the corner value g (=+-1)
        Eigen::Vector4cd pair;
        if (family == 'A') {
          t2 = (c.m7 > 0) ? t1 : kPi - t1;
          if (same) p2 = (cse == 0) ? -p1 : kPi - p1;  // phi+ locked
          else p2 = (cse == 0) ? p1 : p1 + kPi;        // phi- locked
          g = (cse == 0) ? c.m8 : -c.m8;
          pair = ghz_pair(0, 0, (g > 0) ? 0.0 : kPi);
        } else {
          t2 = (c.m7 > 0) ? kPi - t1 : t1;
          if (same) p2 = (cse == 0) ? p1 : p1 + kPi;   // phi- locked
          else p2 = (cse == 0) ? -p1 : kPi - p1;       // phi+ locked
          g = (cse == 0) ? c.m8 : -c.m8;
          pair = ghz_pair(0, 1, (g > 0) ? 0.0 : kPi);
        }
        spread_partitions(out, 1.0 / 16.0, {t1, p1}, {t2, p2}, pair);
      }
    }
  }
  return out;
}

CorrelationVector rho_line_correlations(const LineCase& c, char family, double theta, double phi) {
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = 1.0 - c2;
  const double cf2 = std::cos(phi) * std::cos(phi);
  const double sf2 = 1.0 - cf2;
  const double fam = (family == 'A') ? 1.0 : -1.0;
  const bool same = c.m8 * c.m15 > 0;
  CorrelationVector R;
  for (int i = 1; i <= 6; ++i) R[i] = fam * (1.0 + c.m7 * c2) / 6.0;
  R[7] = c.m7 * c2;
  R[8] = c.m8 * s2 * cf2;
  R[15] = c.m15 * s2 * sf2;
  const double twoY = same ? (-fam * c.m8 * s2 / 6.0)
                           : (-fam * c.m8 * s2 * (cf2 - sf2) / 6.0);
  for (int i = 9; i <= 14; ++i) R[i] = twoY;
  return R;
}

std::vector<ProductTerm> rho7_bar_terms(double theta, double phi1, double phi2, double phi3) {
  std::vector<ProductTerm> out;
  const std::array<std::array<double, 3>, 4> phase_variants = {{
      {phi1, phi2, phi3},
      {phi1 + kPi, phi2, phi3 + kPi},
      {-phi1, -phi2, -phi3},
      {-phi1 + kPi, -phi2, -phi3 + kPi},
  }};
  for (int var = 0; var < 4; ++var) {
    const double t = kThetaVariants[var] * theta + kThetaShifts[var];
    for (const auto& ph : phase_variants) {
      spread_partitions(out, 1.0 / 16.0, {t, ph[0]}, {t, ph[1]}, ghz_pair(0, 0, -ph[2]));
    }
  }
  return out;
}

CorrelationVector rho7_bar_correlations(double theta, double phi1, double phi2, double phi3) {
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = 1.0 - c2;
  const double r0 = std::cos(phi1) * std::cos(phi2) * std::cos(phi3);
  const double r1 = std::cos(phi1) * std::sin(phi2) * std::sin(phi3);
  const double r2 = std::sin(phi1) * std::cos(phi2) * std::sin(phi3);
  const double r3 = std::sin(phi1) * std::sin(phi2) * std::cos(phi3);
  CorrelationVector R;
  for (int i = 1; i <= 6; ++i) R[i] = (1.0 + c2) / 6.0;
  R[7] = c2;
  R[8] = s2 * r0;
  R[15] = -s2 * r3;
  // Sign convention fixed by the product terms (phase e^{-i phi3} on the pair).
  const double twoY = s2 * (-r0 + r3 - 2.0 * r1 - 2.0 * r2) / 6.0;
  for (int i = 9; i <= 14; ++i) R[i] = twoY;
  return R;
}

namespace {

// X<->Y single-qubit rotation diag(1, i); conjugation swaps the XXXX and YYYY
// sectors while leaving all Z strings fixed.
Eigen::Vector2cd rot_xy(const Eigen::Vector2cd& k) {
  Eigen::Vector2cd v = k;
  v(1) *= kI;
  return v;
}

}  // namespace

std::vector<ProductTerm> rho8_bar_terms(double theta, bool mirror) {
  std::vector<ProductTerm> out;
  for (int var = 0; var < 4; ++var) {
    const double t = kThetaVariants[var] * theta + kThetaShifts[var];
    for (double phi3 : {0.0, kPi}) {
      // |psi1> = cos(t/2)|0> + sin(t/2)|1>, |psi2> = -sin(t/2)|0> + cos(t/2) e^{i phi3}|1>
      BlochState s1{t, 0.0};
      BlochState s2{kPi - t, phi3 + kPi};
      Eigen::Vector4cd pair = Eigen::Vector4cd::Zero();
      pair(1) = 1.0 / std::sqrt(2.0);
      pair(2) = std::exp(-kI * phi3) / std::sqrt(2.0);
      if (!mirror) {
        spread_partitions(out, 1.0 / 8.0, s1, s2, pair);
      } else {
        // Conjugate every party by diag(1, i).
        ProductTerm proto;
        const Eigen::Vector2cd k1 = rot_xy(s1.ket());
        const Eigen::Vector2cd k2 = rot_xy(s2.ket());
        Eigen::Vector4cd pr;
        const cplx f[2] = {1.0, kI};
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) pr(a * 2 + b) = f[a] * f[b] * pair(a * 2 + b);
        // represent rotated singles as explicit Bloch states via angles
        auto to_bloch = [](const Eigen::Vector2cd& k) {
          const double th = 2.0 * std::atan2(std::abs(k(1)), std::abs(k(0)));
          const double ph = std::arg(k(1)) - std::arg(k(0));
          return BlochState{th, ph};
        };
        spread_partitions(out, 1.0 / 8.0, to_bloch(k1), to_bloch(k2), pr);
      }
    }
  }
  return out;
}

CorrelationVector rho8_bar_correlations(double theta, bool mirror) {
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = 1.0 - c2;
  CorrelationVector R;
  for (int i = 1; i <= 6; ++i) R[i] = -(1.0 + c2) / 6.0;
  R[7] = c2;
  R[8] = mirror ? 0.0 : -s2;
  R[15] = mirror ? -s2 : 0.0;
  for (int i = 9; i <= 14; ++i) R[i] = -s2 / 6.0;
  return R;
}

std::vector<ProductTerm> diagonal_corrector_terms(double d1, double d7) {
  const double w04 = (1.0 + 6.0 * d1 + d7) / 16.0;   // |0000>, |1111>
  const double wodd = (1.0 - d7) / 16.0;             // eight odd-parity states
  const double w2 = (1.0 - 2.0 * d1 + d7) / 16.0;    // six weight-2 states
  require(w04 > -1e-12 && wodd > -1e-12 && w2 > -1e-12,
          "diagonal corrector outside its positivity range");
  std::vector<ProductTerm> out;
  for (int idx = 0; idx < 16; ++idx) {
    int k = 0;
    for (int q = 0; q < 4; ++q) k += (idx >> q) & 1;
    double w = (k == 0 || k == 4) ? w04 : (k % 2 ? wodd : w2);
    if (w <= 0.0) continue;
    ProductTerm t;
    t.weight = w;
    t.partition = TripartitePartition{3, 4};
    t.single1 = BlochState{((idx >> 3) & 1) ? kPi : 0.0, 0.0};
    t.single2 = BlochState{((idx >> 2) & 1) ? kPi : 0.0, 0.0};
    t.pair_state = Eigen::Vector4cd::Zero();
    t.pair_state(((idx >> 1) & 1) * 2 + (idx & 1)) = 1.0;
    out.push_back(t);
  }
  return out;
}

namespace {

void append_scaled(std::vector<ProductTerm>& dst, std::vector<ProductTerm> src, double factor) {
  for (auto& t : src) {
    t.weight *= factor;
    dst.push_back(t);
  }
}

// Conjugate every term by Z on qubit 1; flips the sign of all eight
// antidiagonal correlations and fixes the diagonal ones.
void apply_z1(std::vector<ProductTerm>& terms) {
  for (auto& t : terms) {
    if (t.partition.pair_a == 1) {
      t.pair_state(2) = -t.pair_state(2);
      t.pair_state(3) = -t.pair_state(3);
    } else {
      t.single1.phi += kPi;  // singleton parties are stored ascending, so #1 holds qubit 1
    }
  }
}

// Shared diagonal-corrector solve: mixture part has per-unit R1 = diag_r1(c2)
// (linear in c2) and R7 = c2, corrector has d7 = +1 and d1 in [-1/3, 1].
// Equations: (1-mu) c2 + mu = r7t   and   (1-mu) diag_r1(c2) + mu d1 = r1t.
struct CorrectorSolve {
  double mu = 0.0, d1 = 0.0, c2 = 0.0;
};

CorrectorSolve solve_corrector_linear(double r7t, double r1t, double diag_a, double diag_b,
                                      const std::string& what) {
  // diag_r1(c2) = diag_a + diag_b * c2.
  // Substitute (1-mu) c2 = r7t - mu:
  //   (1-mu) diag_a + diag_b (r7t - mu) + mu d1 = r1t
  //   mu (d1 - diag_a - diag_b) = r1t - diag_a - diag_b r7t
  const double num = r1t - diag_a - diag_b * r7t;
  CorrectorSolve s;
  if (std::abs(num) < 1e-13) {
    s.mu = 0.0;
    s.d1 = 1.0;
  } else {
    s.d1 = (num > 0.0) ? 1.0 : -1.0 / 3.0;
    const double den = s.d1 - diag_a - diag_b;
    require(std::abs(den) > 1e-12, what + ": degenerate corrector equation");
    s.mu = num / den;
  }
  require(s.mu > -1e-11 && s.mu < 1.0 - 1e-12, what + ": corrector weight out of range");
  s.mu = std::max(s.mu, 0.0);
  s.c2 = (r7t - s.mu) / (1.0 - s.mu);
  if (s.c2 > -1e-11 && s.c2 < 0.0) s.c2 = 0.0;
  if (s.c2 > 1.0 && s.c2 < 1.0 + 1e-11) s.c2 = 1.0;
  std::ostringstream os;
  os << what << ": required cos^2(theta) = " << s.c2
     << " outside [0,1]; the diagonal sector of the target cannot be reached "
        "by the witness-eigenvector family (the state is outside the reachable set)";
  require(s.c2 >= 0.0 && s.c2 <= 1.0, os.str());
  return s;
}

// Solve (phi1=phi2=psi, phi3) from the r-targets of the rho7 family under the
// r1 = r2 constraint; r0 = cpsi^2 c3, r3 = spsi^2 c3, r1 = cpsi spsi s3.
struct RhoSevenAngles {
  double psi = 0.0, phi3 = 0.0;
};

RhoSevenAngles solve_rho7_angles(double r0, double r3, double r1_signed, const std::string& what) {
  require(r0 * r3 > 0.0, what + ": r0 and r3 must share a sign");
  const double c3 = r0 + r3;
  require(std::abs(c3) <= 1.0 + 1e-9, what + ": |cos(phi3)| > 1");
  const double tan2 = r3 / r0;
  RhoSevenAngles a;
  a.psi = std::atan(std::sqrt(tan2));
  const double s3sq = 1.0 - std::min(1.0, c3 * c3);
  // (42)-consistency: r1^2 should equal r0 r3 (1 - c3^2)/c3^2.
  const double r1req = std::sqrt(std::max(0.0, r0 * r3 * s3sq / (c3 * c3)));
  require(std::abs(std::abs(r1_signed) - r1req) < 1e-5,
          what + ": r1 target inconsistent with the closed constraint");
  const double s3 = (r1_signed >= 0 ? 1.0 : -1.0) * std::sqrt(s3sq);
  a.phi3 = std::atan2(s3, std::min(1.0, std::max(-1.0, c3)));
  return a;
}

}  // namespace

Decomposition decompose_line_AB_FG(const FamilyPoint& pt) {
  const double alpha = pt.alpha, w = pt.w();
  const bool ab = std::abs(alpha - 9.0) < 1e-9;
  const bool fg = std::abs(alpha - 5.0) < 1e-9;
  require(ab || fg, "AB/FG construction needs alpha = 9 or alpha = 5");
  if (fg) require(pt.p16 >= 2.0 / 9.0 - 1e-12, "alpha = 5 line is physical only for p16 >= 2/9");

  const double kappa = 4.0 * std::abs(alpha - 7.0) * w / alpha;
  require(kappa <= 8.0 / 9.0 + 1e-12, "kappa exceeds 8/9");

  const double x2 = (6.0 * pt.v - alpha + 4.0) / (2.0 * (7.0 - alpha));
  const double x2min = (25.0 - 3.0 * std::sqrt(41.0)) / 32.0;
  require(x2 >= x2min - 1e-9 && x2 <= 1.0 + 1e-9,
          "cos^2(phi+) outside the admissible interval");
  const double x = std::sqrt(std::min(1.0, std::max(x2, x2min)));
  const double cm = (4.0 * x * x - 2.0) / (3.0 * x);
  require(std::abs(cm) <= 1.0 + 1e-9, "cos(phi-) out of range");
  const double phip = std::acos(std::min(1.0, std::max(-1.0, x)));
  const double phim = std::acos(std::min(1.0, std::max(-1.0, cm)));
  const double phi1 = 0.5 * (phip + phim), phi2 = 0.5 * (phip - phim);

  Decomposition dec;
  dec.segment = ab ? "AB" : "FG";
  dec.target = to_state(pt);
  std::vector<ProductTerm> family = rho1_bar_terms(phi1, phi2);
  // On the alpha = 5 line the antidiagonal signs are reversed (p1 < p16):
  // use the Z1-conjugated family.
  if (fg) apply_z1(family);
  append_scaled(dec.terms, std::move(family), kappa);
  const double d1 = 1.0 - kappa / (6.0 * (1.0 - kappa));
  append_scaled(dec.terms, diagonal_corrector_terms(d1, 1.0), 1.0 - kappa);
  return dec;
}

Decomposition decompose_line_II(const FamilyPoint& pt, const std::string& segment) {
  LineCase c;
  if (segment == "AH" || segment == "AJ") c = {1, 1, 1};
  else if (segment == "EF2") c = {1, -1, -1};
  else if (segment == "DE") c = {1, -1, 1};
  else if (segment == "IJ") c = {1, 1, -1};
  else if (segment == "EF1") c = {-1, -1, 1};
  else if (segment == "GH1") c = {-1, 1, -1};
  else throw std::invalid_argument("unknown criterion-II segment: " + segment);

  const CorrelationVector R = family_correlations(pt);
  const double r7t = R[7], r8t = R[8], r15t = R[15];
  const double u8 = c.m8 * r8t, u15 = c.m15 * r15t;  // |R8|, |R15| in the case orientation
  require(u8 > -1e-9 && u15 > -1e-9, segment + ": sign case does not match the point");
  require(std::abs(c.m7 * r7t + u8 + u15 - 1.0) < 1e-9,
          segment + ": point is not on the criterion-II equality line");

  Decomposition dec;
  dec.segment = segment;
  dec.target = to_state(pt);

  const bool same = c.m8 * c.m15 > 0;
  if (same) {
    const double W = u15 / (u8 + u15);
    require(W <= 1.0 / 6.0 + 1e-9, segment + ": mixing weight W out of range");
    const double p = 0.5 + 3.0 * W;
    // Per-unit family diagonal: R1 = (2p-1)(1 + m7 c2)/6 with m7 = +1 here.
    const auto cs = solve_corrector_linear(r7t, R[1], (2.0 * p - 1.0) / 6.0,
                                           (2.0 * p - 1.0) / 6.0, segment);
    const double theta = std::acos(std::sqrt(cs.c2));
    const double phi = std::asin(std::sqrt(std::min(1.0, std::max(0.0, W))));
    append_scaled(dec.terms, rho_line_terms(c, 'A', theta, phi), (1.0 - cs.mu) * p);
    append_scaled(dec.terms, rho_line_terms(c, 'B', theta, phi), (1.0 - cs.mu) * (1.0 - p));
    if (cs.mu > 0.0)
      append_scaled(dec.terms, diagonal_corrector_terms(cs.d1, 1.0), cs.mu);
    return dec;
  }

  // Mixed sign case: K >= 5 territory.
  const double K = u8 / u15;
  const double Xbar = u15 / (u8 + u15);
  if (c.m7 < 0) {
    // Figure-1 lines EF/GH: R7 < 0, no corrector needed.
    const double q = -r7t;  // |R7|
    require(q > 0.0 && q < 1.0, segment + ": unexpected R7");
    const double g = -6.0 * q / (1.0 - q);  // 2p - 1
    const double p = 0.5 * (1.0 + g);
    require(p > -1e-9 && p <= 0.5 + 1e-12, segment + ": family weight out of range");
    const double P = (8.0 * Xbar - (1.0 - 2.0 * p)) / 4.0;
    const double Q = ((1.0 - 2.0 * p) - 4.0 * Xbar) / 4.0;
    require(P > -1e-9 && Q > -1e-9, segment + ": infeasible split (needs K >= 5)");
    const double x = (p > 1e-12) ? std::max(0.0, P) / p : 0.0;
    const double y = (1.0 - p > 1e-12) ? std::max(0.0, Q) / (1.0 - p) : 0.0;
    require(x <= 1.0 + 1e-9 && y <= 1.0 + 1e-9, segment + ": sin^2 targets exceed 1 (K < 5)");
    const double theta = std::acos(std::sqrt(q));
    const double phi = std::asin(std::sqrt(std::min(1.0, x)));
    const double phip = std::asin(std::sqrt(std::min(1.0, y)));
    if (p > 1e-12) append_scaled(dec.terms, rho_line_terms(c, 'A', theta, phi), p);
    if (1.0 - p > 1e-12) append_scaled(dec.terms, rho_line_terms(c, 'B', theta, phip), 1.0 - p);
    return dec;
  }

  // m7 = +1 mixed cases (DE, IJ): the diagonal sector is reachable only where
  // the antidiagonal demand vanishes (the K -> infinity end of the line).
  if (Xbar < 1e-9) {
    const auto cs = solve_corrector_linear(r7t, R[1], 0.0, 0.0, segment);
    const double theta = std::acos(std::sqrt(cs.c2));
    append_scaled(dec.terms, rho_line_terms(c, 'A', theta, 0.0), (1.0 - cs.mu) * 0.5);
    append_scaled(dec.terms, rho_line_terms(c, 'B', theta, 0.0), (1.0 - cs.mu) * 0.5);
    if (cs.mu > 0.0)
      append_scaled(dec.terms, diagonal_corrector_terms(cs.d1, 1.0), cs.mu);
    return dec;
  }
  // Best reachable diagonal: g = -4 Xbar, mu = R7, c2 = 0, d1 = 1.
  const double best_r1 = r7t - (2.0 / 3.0) * Xbar * (1.0 - r7t);
  std::ostringstream os;
  os << segment << ": target diagonal R1 = " << R[1] << " exceeds the maximum " << best_r1
     << " reachable over the tight-witness eigenvector families (deficit "
     << R[1] - best_r1 << "); the interior of this line is outside the separable set"
     << " (K = " << K << ")";
  throw std::runtime_error(os.str());
}

Decomposition decompose_curve_BC(const FamilyPoint& pt) {
  const CorrelationVector R = family_correlations(pt);
  const ConditionalMargin c3m = criterion_III(R);
  require(c3m.applicable && std::abs(c3m.margin) < 1e-7,
          "BC construction needs a point on the criterion-III equality");
  const double r7t = R[7];
  require(r7t > 0.0, "BC construction assumes R7 > 0");
  require(r7t >= 1.0 / 9.0 - 1e-12,
          "BC: R7 < 1/9, diagonal sector unreachable (p16 too small)");

  // Family diagonal per unit: R1 = (1 + c2)/6.
  const auto cs = solve_corrector_linear(r7t, R[1], 1.0 / 6.0, 1.0 / 6.0, "BC");
  const double scale = (1.0 - cs.mu) * (1.0 - cs.c2);  // (1-mu) s^2
  require(scale > 1e-12, "BC: vanishing antidiagonal scale");
  const double r0 = R[8] / scale;
  const double r3 = -R[15] / scale;
  const double r1t = (6.0 * R[9] / scale + r0 - r3) / (-4.0);  // from the term-sign convention
  const auto ang = solve_rho7_angles(r0, r3, r1t, "BC");
  const double theta = std::acos(std::sqrt(cs.c2));

  Decomposition dec;
  dec.segment = "BC";
  dec.target = to_state(pt);
  append_scaled(dec.terms, rho7_bar_terms(theta, ang.psi, ang.psi, ang.phi3), 1.0 - cs.mu);
  if (cs.mu > 0.0)
    append_scaled(dec.terms, diagonal_corrector_terms(cs.d1, 1.0), cs.mu);
  return dec;
}

Decomposition decompose_curve_CD(double K, double p16, bool mirror) {
  if (mirror) {
    // The Z1 conjugation (sign flip of all antidiagonal correlations) maps the
    // mirror point (1-v, 14-alpha, p16) onto the CD point (v, alpha) at the
    // shifted weight p16' = p1 of the mirror state; decompose there and
    // conjugate every term back.
    const CurvePoint cp = cd_curve(K);
    const FamilyPoint mpt{p16, 1.0 - cp.v, 14.0 - cp.alpha};
    const double p16_flipped = mpt.p1();
    require(p16_flipped >= 0.0 && p16_flipped < 0.5, "HI: flipped weight out of range");
    Decomposition dec = decompose_curve_CD(K, p16_flipped, false);
    apply_z1(dec.terms);
    dec.segment = "HI";
    dec.target = to_state(mpt);
    return dec;
  }

  const EtaResult er = eta_of_K(K);
  if (er.negative)
    throw std::runtime_error("eta(K) < 0: K below the criterion III/IV intersection");
  require(std::abs(er.residual) < 1e-6,
          "no admissible eta root: the boundary state is outside the reachable set "
          "of the tight-witness eigenvector families");
  const double eta = std::max(0.0, er.eta);
  if (eta > 0.5 + 1e-9) {
    std::ostringstream os;
    os << "CD/HI construction infeasible at K = " << K << ": eta(K) = " << eta
       << " > 1/2, the diagonal corrector range is exhausted and the boundary "
          "state is outside the reachable set";
    throw std::runtime_error(os.str());
  }

  const CurvePoint cp = cd_curve(K);
  const FamilyPoint pt{p16, cp.v, cp.alpha};
  const CorrelationVector R = family_correlations(pt);
  const double r7t = R[7];
  require(r7t > 0.0, "CD construction assumes R7 > 0");

  // Mixture diagonal per unit: R1 = (1 - 2 eta)(1 + c2)/6.
  const auto cs = solve_corrector_linear(r7t, R[1], (1.0 - 2.0 * eta) / 6.0,
                                         (1.0 - 2.0 * eta) / 6.0, "CD");
  const double scale = (1.0 - cs.mu) * (1.0 - cs.c2);
  require(scale > 1e-12, "CD: vanishing antidiagonal scale");
  const double theta = std::acos(std::sqrt(cs.c2));

  const double r0 = (R[8] / scale + eta) / (1.0 - eta);
  const double r3 = -(R[15] / scale) / (1.0 - eta);
  // 2Y sector: R9 = scale * [(1-eta)(-r0+r3-4r1)/6 - eta/6]
  const double r1s =
      -(6.0 * R[9] / scale + eta - (1.0 - eta) * (-r0 + r3)) / (4.0 * (1.0 - eta));
  const auto ang = solve_rho7_angles(r0, r3, r1s, "CD");

  Decomposition dec;
  dec.segment = "CD";
  dec.target = to_state(pt);
  append_scaled(dec.terms, rho7_bar_terms(theta, ang.psi, ang.psi, ang.phi3),
                (1.0 - cs.mu) * (1.0 - eta));
  append_scaled(dec.terms, rho8_bar_terms(theta, false), (1.0 - cs.mu) * eta);
  if (cs.mu > 0.0)
    append_scaled(dec.terms, diagonal_corrector_terms(cs.d1, 1.0), cs.mu);
  return dec;
}

}  // namespace ghzwl
