#include "ghzwl/criteria.hpp"

#include "ghzwl/witness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ghzwl {

namespace {

std::array<double, 4> gamma_apply(const std::array<double, 4>& v) {
  const double s = v[0] + v[1] + v[2] + v[3];
  return {s - 2 * v[0], s - 2 * v[1], s - 2 * v[2], s - 2 * v[3]};
}

// Golden-section maximization of f on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double xtol, double* xbest) {
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol) {
    if (f1 < f2) {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a); f2 = f(x2);
    } else {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a); f1 = f(x1);
    }
  }
  const double xm = 0.5 * (a + b), fm = f(xm);
  if (xbest) *xbest = xm;
  return fm;
}

// Dense scan followed by golden refinement around the best sample.
double scan_max(const std::function<double(double)>& f, double lo, double hi, int n,
                double xtol, double* xbest) {
  double best = -1e300, xb = lo;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    const double v = f(x);
    if (v > best) { best = v; xb = x; }
  }
  const double h = (hi - lo) / n;
  double xr = xb;
  const double refined = golden_max(f, std::max(lo, xb - h), std::min(hi, xb + h), xtol, &xr);
  if (refined > best) { best = refined; xb = xr; }
  if (xbest) *xbest = xb;
  return best;
}

}  // namespace

double r1_tilde_sector(const std::array<double, 4>& tin) {
  double scale = std::max({std::abs(tin[0]), std::abs(tin[1]), std::abs(tin[2]), std::abs(tin[3])});
  if (scale == 0.0) return 0.0;
  std::array<double, 4> t;
  for (int i = 0; i < 4; ++i) t[i] = tin[i] / scale;

  const double prod = t[0] * t[1] * t[2] * t[3];
  if (prod > 1e-14) {
    std::array<double, 4> w = {t[1] * t[2] * t[3], t[0] * t[2] * t[3], t[0] * t[1] * t[3],
                               t[0] * t[1] * t[2]};
    std::array<double, 4> q = gamma_apply(w);
    if (q[0] * q[1] * q[2] * q[3] >= -1e-14) {
      const double num =
          (t[0] * t[1] + t[2] * t[3]) * (t[0] * t[2] + t[1] * t[3]) * (t[0] * t[3] + t[1] * t[2]);
      if (num >= 0.0) return scale * std::sqrt(num / prod);
    }
  }
  std::array<double, 4> g = gamma_apply(t);
  return scale * std::max({std::abs(g[0]), std::abs(g[1]), std::abs(g[2]), std::abs(g[3])});
}

double r1_tilde(const TVector& T) { return r1_tilde_sector({T[8], T[10], T[12], T[14]}); }

double r2_tilde(const TVector& T) { return std::abs(T[9]) + std::abs(T[15]); }

namespace {

struct DiagView {
  // rho_{j,j} and rho_{j,17-j} from (possibly unnormalizable) pseudo probabilities.
  std::array<double, kNumBasis> p;
  double diag(int j) const { return (p[j - 1] + p[16 - j]) / 2.0; }
  double anti(int j) const { return (p[j - 1] - p[16 - j]) / 2.0; }
};

DiagView diag_view(const CorrelationVector& R) { return {pseudo_probs_from_correlations(R)}; }

double half_min_four_sums(const DiagView& d) {
  const double sa = d.diag(1) + d.diag(4) + d.diag(6) + d.diag(7);
  const double sb = d.diag(2) + d.diag(3) + d.diag(5) + d.diag(8);
  return 0.5 * std::min(sa, sb);
}

bool r1_max_branch(const TVector& T) {
  const std::array<double, 4> t = {T[8], T[10], T[12], T[14]};
  double scale = std::max({std::abs(t[0]), std::abs(t[1]), std::abs(t[2]), std::abs(t[3])});
  if (scale == 0.0) return true;
  std::array<double, 4> u;
  for (int i = 0; i < 4; ++i) u[i] = t[i] / scale;
  const double prod = u[0] * u[1] * u[2] * u[3];
  if (prod <= 1e-14) return true;
  std::array<double, 4> w = {u[1] * u[2] * u[3], u[0] * u[2] * u[3], u[0] * u[1] * u[3],
                             u[0] * u[1] * u[2]};
  std::array<double, 4> q = gamma_apply(w);
  return q[0] * q[1] * q[2] * q[3] < -1e-14;
}

}  // namespace

double criterion_I(const CorrelationVector& R) {
  const DiagView d = diag_view(R);
  const double lhs = std::max({std::abs(d.anti(1)), std::abs(d.anti(4)), std::abs(d.anti(5)),
                               std::abs(d.anti(8))});
  const double margin = half_min_four_sums(d) - lhs;

  const TVector T = t_from_r(R);
  if (r1_max_branch(T)) {
    const double alt = (1.0 - std::abs(R[7]) - r1_tilde(T)) / 8.0;
    if (std::abs(alt - margin) > 1e-12)
      throw std::logic_error("criterion I entry form and correlation form disagree");
  }
  return margin;
}

double criterion_I_prime(const CorrelationVector& R) {
  const DiagView d = diag_view(R);
  double lhs = 0.0;
  for (int j = 1; j <= 8; ++j) lhs = std::max(lhs, std::abs(d.anti(j)));

  const double rhs_half = half_min_four_sums(d);
  const double sa8 = d.diag(1) + d.diag(4) + d.diag(6) + d.diag(7) + d.diag(10) + d.diag(11) +
                     d.diag(13) + d.diag(16);
  const double sb8 = d.diag(2) + d.diag(3) + d.diag(5) + d.diag(8) + d.diag(9) + d.diag(12) +
                     d.diag(14) + d.diag(15);
  const double rhs_quarter = 0.25 * std::min(sa8, sb8);
  return std::max(rhs_half, rhs_quarter) - lhs;
}

double criterion_II(const CorrelationVector& R) {
  return 1.0 - (std::abs(R[7]) + std::abs(R[8]) + std::abs(R[15]));
}

namespace {

// Witness validity condition for criterion III: the sector K* maximizing
// sum K_i T'_i / g1~ must, once completed to a full witness under the
// M9 = ... = M14 assumption, satisfy g2~ <= g1~.  Where this fails (past the
// intersection with criterion IV) the matched witness is no longer optimal
// and criterion III stops being a valid necessary condition.
bool third_witness_condition(const std::array<double, 4>& tp) {
  auto h = [&](std::array<double, 4> k) {
    // enforce K10 = K12 (T'10 = T'12, the optimum can be symmetrized)
    const double avg = 0.5 * (k[1] + k[2]);
    k[1] = k[2] = avg;
    const double g = g_tilde(k);
    if (g < 1e-14) return -1e300;
    return (k[0] * tp[0] + k[1] * tp[1] + k[2] * tp[2] + k[3] * tp[3]) / g;
  };
  std::vector<std::array<double, 4>> starts = {
      {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {1, 1, 1, 1}};
  starts.push_back({tp[0] >= 0 ? 1.0 : -1.0, tp[1] >= 0 ? 1.0 : -1.0,
                    tp[2] >= 0 ? 1.0 : -1.0, tp[3] >= 0 ? 1.0 : -1.0});
  starts.push_back(gamma_apply(tp));

  double best = -1e300;
  std::array<double, 4> bk{};
  for (auto k : starts) {
    double scale = std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2]), std::abs(k[3])});
    if (scale == 0) continue;
    for (double& v : k) v /= scale;
    double cur = h(k);
    if (cur <= -1e299) continue;
    double step = 0.5;
    while (step > 1e-10) {
      bool improved = false;
      for (int i = 0; i < 4; ++i) {
        for (double sgn : {+1.0, -1.0}) {
          auto kk = k;
          kk[static_cast<size_t>(i)] += sgn * step;
          const double v = h(kk);
          if (v > cur + 1e-15) {
            cur = v;
            k = kk;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (cur > best) {
      best = cur;
      bk = k;
    }
  }
  const double k10 = 0.5 * (bk[1] + bk[2]);
  const double g1 = g_tilde({bk[0], k10, k10, bk[3]});
  const double g2 = std::max(std::abs(bk[0] + k10), std::abs(k10 - bk[3]));
  return g2 <= g1 + 1e-9;
}

}  // namespace

ConditionalMargin criterion_III(const CorrelationVector& R) {
  ConditionalMargin out;
  double sum = 0.0;
  for (int i = 8; i <= 15; ++i) sum += R[i];
  const double p = R[8] * R[15];
  if (!(p < -1e-12)) return out;
  const double lhs = std::abs(8.0 * p);
  const double rhs = std::abs(sum * (R[8] + R[15]));
  if (lhs - rhs < -1e-12) return out;
  // Third condition (witness validity; see Fig. 3: criterion III stops being
  // valid past the intersection with criterion IV).
  if (!third_witness_condition({R[8], sum / 4.0, sum / 4.0, -R[15]})) return out;
  out.applicable = true;
  const double rad = 1.0 - sum * sum / (16.0 * p);
  out.margin = (1.0 - std::abs(R[7])) - std::abs(R[8] - R[15]) * std::sqrt(rad);
  return out;
}

namespace {

// |t|(s) of the criterion-IV family, cancellation-free for small s.
double t_of_s(double s) {
  const double u = std::sqrt(std::max(0.0, (1.0 - s) * (4.0 - s * s)));
  return (s - 2.0) + 4.0 * (2.0 - s) / (2.0 - s + u);
}

constexpr double kSMin = 1e-6;
constexpr int kSScan = 10000;

}  // namespace

double tau(double K) {
  auto f = [K](double s) {
    const double t = t_of_s(s);
    return (s * (1.0 - K) + t * (1.0 + K) + K + 5.0) / std::abs(s - t - 2.0);
  };
  double v = scan_max(f, kSMin, 1.0, kSScan, 1e-10, nullptr);
  if (!std::isfinite(v)) throw std::domain_error("tau scan produced no finite candidate");
  return v;
}

namespace {

// Family objective over the one-parameter witness family, for arbitrary
// correlation input: value(s, sign) = [(s-1)(R8+R15) + sign*|t|(R8-R15) - S] / (2 - s + |t|)
// with S = sum of R9..R14.  On highly symmetric input (R9..R14 = -R15) this is
// R15 * tau(-R8/R15) maximized over s.
double family_value_scan(double r8, double r15, double S) {
  double best = -1e300;
  for (double sgn : {+1.0, -1.0}) {
    auto f = [=](double s) {
      const double t = t_of_s(s);
      return ((s - 1.0) * (r8 + r15) + sgn * t * (r8 - r15) - S) / (2.0 - s + t);
    };
    best = std::max(best, scan_max(f, kSMin, 1.0, kSScan, 1e-10, nullptr));
  }
  return best;
}

// Independent route: scan M15, solve M8 from the g1~ = g2~ constraint by
// bracketed bisection, evaluate the witness value at every root where the
// square-root branch of g1~ is active (the one-parameter family of the
// criterion; degenerate max-branch roots belong to a different family).
double family_value_m15_scan(double r8, double r15, double S) {
  auto constraint = [](double m8, double m15) {
    // g1~ of (K8,K10,K12,K14) = (m8+1,-2,-2,-1-m15); g2~ = max(|m8-1|, |m15-1|).
    const double g1 = g_tilde({m8 + 1.0, -2.0, -2.0, -(1.0 + m15)});
    return g1 - std::max(std::abs(m8 - 1.0), std::abs(m15 - 1.0));
  };
  auto best_at_m15 = [&](double m15) {
    double best = -1e300;
    const int nm8 = 180;
    double prev_m8 = -9.0, prev_h = constraint(prev_m8, m15);
    for (int j = 1; j <= nm8; ++j) {
      const double m8 = -9.0 + 18.0 * j / nm8;
      const double h = constraint(m8, m15);
      if ((prev_h <= 0 && h >= 0) || (prev_h >= 0 && h <= 0)) {
        double lo = prev_m8, hi = m8, flo = prev_h;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = constraint(mid, m15);
          if ((flo <= 0) == (fm <= 0)) { lo = mid; flo = fm; } else { hi = mid; }
        }
        const double root = 0.5 * (lo + hi);
        bool product = false;
        g_tilde_branched({root + 1.0, -2.0, -2.0, -(1.0 + m15)}, &product);
        if (product) {
          const double m7 = std::max(std::abs(root - 1.0), std::abs(m15 - 1.0));
          best = std::max(best, (root * r8 - S + m15 * r15) / m7);
        }
      }
      prev_m8 = m8;
      prev_h = h;
    }
    return best;
  };
  return scan_max(best_at_m15, -8.0, 8.0, 1600, 1e-9, nullptr);
}

}  // namespace

RDoublePrime r_double_prime(const CorrelationVector& R) {
  double S = 0.0;
  for (int i = 9; i <= 14; ++i) S += R[i];
  RDoublePrime out;
  out.route_b = family_value_scan(R[8], R[15], S);
  out.degenerate = std::abs(R[15]) < 1e-12 && std::abs(R[8]) < 1e-12;
  out.route_a = family_value_m15_scan(R[8], R[15], S);
  out.value = out.route_b;
  return out;
}

double criterion_IV(const CorrelationVector& R) {
  double S = 0.0;
  for (int i = 9; i <= 14; ++i) S += R[i];
  // Both witness normalizations M9 = -1 and M9 = +1 (the latter is the Z1
  // conjugate, i.e. the scan on sign-flipped antidiagonals); the mirror arcs
  // of the boundary bind through the + normalization.
  const double r = std::max(family_value_scan(R[8], R[15], S),
                            family_value_scan(-R[8], -R[15], -S));
  return (1.0 - std::abs(R[7])) - r;
}

CriterionReport evaluate(const CorrelationVector& R) {
  CriterionReport rep;
  rep.I.margin = criterion_I(R);
  rep.Iprime.margin = criterion_I_prime(R);
  rep.II.margin = criterion_II(R);
  const ConditionalMargin c3 = criterion_III(R);
  rep.III.applicable = c3.applicable;
  rep.III.margin = c3.margin;
  rep.IV.margin = criterion_IV(R);
  rep.detected_entangled = (rep.I.margin < 0) || (rep.Iprime.margin < 0) ||
                           (rep.II.margin < 0) || (c3.applicable && c3.margin < 0) ||
                           (rep.IV.margin < 0);
  return rep;
}

CriterionReport evaluate(const GhzDiagonalState& state) { return evaluate(correlations(state)); }

}  // namespace ghzwl
