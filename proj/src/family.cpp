#include "ghzwl/family.hpp"

#include "ghzwl/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace ghzwl {

namespace {

constexpr double kSqrt41 = 6.4031242374328485;  // sqrt(41)

double golden_min(const std::function<double(double)>& f, double lo, double hi, double xtol,
                  double* xbest) {
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol) {
    if (f1 > f2) {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a); f2 = f(x2);
    } else {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a); f1 = f(x1);
    }
  }
  const double xm = 0.5 * (a + b);
  if (xbest) *xbest = xm;
  return f(xm);
}

double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 80) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((flo <= 0) == (fm <= 0)) { lo = mid; flo = fm; } else { hi = mid; }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

GhzDiagonalState to_state(const FamilyPoint& pt) {
  const double p15 = pt.p15(), p2 = pt.p2(), p1 = pt.p1();
  if (p1 < -kProbTol) {
    std::ostringstream os;
    os << "unphysical family point: p1 = " << p1 << " at (p16=" << pt.p16 << ", v=" << pt.v
       << ", alpha=" << pt.alpha << ")";
    throw std::invalid_argument(os.str());
  }
  std::array<double, kNumBasis> p{};
  p[0] = std::max(p1, 0.0);
  for (int j = 2; j <= 8; ++j) p[j - 1] = p2;
  for (int j = 9; j <= 15; ++j) p[j - 1] = p15;
  p[15] = pt.p16;
  return GhzDiagonalState(p);
}

CorrelationVector family_correlations(const FamilyPoint& pt) {
  const double w = pt.w();
  CorrelationVector R;
  const double r7 = 1.0 - 8.0 * (pt.p2() + pt.p15());
  const double r8 = w - 14.0 * pt.p15();
  const double r15 = w - 8.0 * pt.p2() - 6.0 * pt.p15();
  for (int i = 1; i <= 7; ++i) R[i] = r7;
  R[8] = r8;
  for (int i = 9; i <= 14; ++i) R[i] = -r15;
  R[15] = r15;
  return R;
}

std::array<double, 5> quartic_coefficients(double alpha) {
  return {(alpha - 10.0) * (alpha - 10.0), 60.0 * alpha - 520.0, 1364.0 - 144.0 * alpha,
          96.0 * alpha - 1184.0, 256.0};
}

std::vector<double> quartic_roots(double alpha) {
  const auto a = quartic_coefficients(alpha);
  std::vector<double> roots;

  // Perfect-square detection: the quartic factors as (16 v^2 + b v + g)^2 at
  // special alpha (9 and 5); solve the inner quadratic exactly there.
  const double b = a[3] / 32.0;
  const double scale = std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2]), 256.0});
  for (double g : {std::sqrt(a[0]), -std::sqrt(a[0])}) {
    if (std::abs(a[2] - (b * b + 32.0 * g)) < 1e-9 * scale &&
        std::abs(a[1] - 2.0 * b * g) < 1e-9 * scale) {
      const double disc = b * b - 64.0 * g;
      if (disc >= 0.0) {
        roots.push_back((-b - std::sqrt(disc)) / 32.0);
        roots.push_back((-b + std::sqrt(disc)) / 32.0);
      }
      break;
    }
  }

  if (roots.empty()) {
    Eigen::Matrix4d comp = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 3; ++i) comp(i + 1, i) = 1.0;
    for (int i = 0; i < 4; ++i) comp(i, 3) = -a[i] / a[4];
    Eigen::EigenSolver<Eigen::Matrix4d> es(comp);
    auto P = [&](double v) {
      return (((a[4] * v + a[3]) * v + a[2]) * v + a[1]) * v + a[0];
    };
    auto dP = [&](double v) {
      return ((4 * a[4] * v + 3 * a[3]) * v + 2 * a[2]) * v + a[1];
    };
    for (int i = 0; i < 4; ++i) {
      const auto ev = es.eigenvalues()(i);
      if (std::abs(ev.imag()) > 1e-5) continue;
      double v = ev.real();
      for (int it = 0; it < 50; ++it) {
        const double d = dP(v);
        if (std::abs(d) < 1e-9 * scale) break;
        const double step = P(v) / d;
        v -= step;
        if (std::abs(step) < 1e-14) break;
      }
      if (std::abs(P(v)) < 1e-6 * scale) roots.push_back(v);
    }
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double v : roots) {
    if (v < -1e-9 || v > 1.0 + 1e-9) continue;
    v = std::clamp(v, 0.0, 1.0);
    if (!out.empty() && std::abs(v - out.back()) < 1e-7) continue;
    out.push_back(v);
  }
  return out;
}

CurvePoint cd_curve(double K) {
  const double t = tau(K);
  return {0.5 * (1.0 + (K + 1.0) / t), 7.0 + (7.0 - K) / t};
}

CurvePoint cd_curve_negative_r7(double K, double p16) {
  const double w = 1.0 - 2.0 * p16;
  const double t = tau(K);
  // 8 w (alpha - 7) tau = (7 - K)(2 alpha - 8 w)
  const double alpha = w * (28.0 * t - 4.0 * (7.0 - K)) / (4.0 * w * t - (7.0 - K));
  const double v = (alpha * (1.0 + K) - 8.0 * K) / (14.0 - 2.0 * K);
  return {v, alpha};
}

PointC point_C(double /*p16*/) {
  auto residual = [](double K) {
    const CurvePoint c = cd_curve(K);
    const auto a = quartic_coefficients(c.alpha);
    const double v = c.v;
    return (((a[4] * v + a[3]) * v + a[2]) * v + a[1]) * v + a[0];
  };
  // The criterion-III and IV curves are tangent at C, so the residual along the
  // IV curve touches zero; look for a sign change first and fall back to
  // minimizing the squared residual.
  const int n = 800;
  const double Klo = 0.2, Khi = 2.0;
  double prevK = Klo, prevR = residual(prevK);
  double bestK = Klo, bestAbs = std::abs(prevR);
  bool bracketed = false;
  double K = 0;
  for (int i = 1; i <= n; ++i) {
    const double k = Klo + (Khi - Klo) * i / n;
    const double r = residual(k);
    if (std::abs(r) < bestAbs) { bestAbs = std::abs(r); bestK = k; }
    if ((prevR <= 0 && r >= 0) || (prevR >= 0 && r <= 0)) {
      K = bisect(residual, prevK, k);
      bracketed = true;
      break;
    }
    prevK = k;
    prevR = r;
  }
  if (!bracketed) {
    auto sq = [&](double k) { const double r = residual(k); return r * r; };
    const double h = (Khi - Klo) / n;
    golden_min(sq, bestK - h, bestK + h, 1e-11, &K);
  }
  const CurvePoint c = cd_curve(K);
  return {c.v, c.alpha, K};
}

namespace {

bool fig1_regime(double p16) { return p16 < 1e-9; }
bool fig2_regime(double p16) { return p16 >= 2.0 / 9.0 - 1e-12 && p16 < 0.5; }

// K where the R7 > 0 branch of the criterion-IV curve reaches alpha = 8 w
// (only exists for small p16); (7 - K)/tau(K) = 8 w - 7.
double neg_branch_transition_K(double p16) {
  const double target = 8.0 * (1.0 - 2.0 * p16) - 7.0;
  auto h = [&](double K) { return (7.0 - K) / tau(K) - target; };
  return bisect(h, point_C(p16).K, 5.0);
}

}  // namespace

std::vector<Landmark> landmarks(double p16) {
  std::vector<Landmark> out;
  const double w = 1.0 - 2.0 * p16;
  auto add = [&](const std::string& label, double v, double alpha) {
    out.push_back({label, v, alpha, v * w / alpha, (1.0 - v) * w / alpha});
  };
  const double vB = (5.0 + kSqrt41) / 16.0;
  const double vG = (11.0 - kSqrt41) / 16.0;
  const PointC C = point_C(p16);

  add("A", 1.0 / 6.0, 9.0);
  add("B", vB, 9.0);
  add("C", C.v, C.alpha);
  if (fig1_regime(p16)) {
    const double Kd = neg_branch_transition_K(p16);
    const CurvePoint d = cd_curve(Kd);
    add("D", d.v, d.alpha);
    add("E", 10.0 / 11.0, 80.0 / 11.0);
    add("H", 0.0, 8.0);
  } else if (fig2_regime(p16)) {
    add("D", 1.0, 22.0 / 3.0);
    add("E", 1.0, 6.0);
    add("F", 5.0 / 6.0, 5.0);
    add("G", vG, 5.0);
    add("H", 1.0 - C.v, 14.0 - C.alpha);
    add("I", 0.0, 20.0 / 3.0);
    add("J", 0.0, 8.0);
  }
  return out;
}

namespace {

BoundaryPoint make_point(double p16, double v, double alpha) {
  FamilyPoint pt{p16, v, alpha};
  return {v, alpha, pt.p15(), pt.p2(), pt.p1(), p16};
}

// Continuation along the criterion-III quartic from (v0, alpha0) to alpha1.
void trace_quartic(std::vector<BoundaryPoint>& pts, double p16, double v0, double alpha0,
                   double alpha1, int n) {
  double prev = v0;
  for (int i = 0; i <= n; ++i) {
    const double alpha = alpha0 + (alpha1 - alpha0) * i / n;
    const auto roots = quartic_roots(alpha);
    if (roots.empty()) throw std::runtime_error("criterion-III quartic lost its roots");
    double best = roots.front();
    for (double r : roots)
      if (std::abs(r - prev) < std::abs(best - prev)) best = r;
    pts.push_back(make_point(p16, best, alpha));
    prev = best;
  }
}

void line_segment(std::vector<BoundaryPoint>& pts, double p16,
                  const std::function<std::pair<double, double>(double)>& param, int n) {
  for (int i = 0; i <= n; ++i) {
    const auto [v, alpha] = param(static_cast<double>(i) / n);
    pts.push_back(make_point(p16, v, alpha));
  }
}

void check_assembly(const std::vector<BoundarySegment>& segs) {
  for (size_t s = 0; s + 1 < segs.size(); ++s) {
    const auto& a = segs[s].points.back();
    const auto& b = segs[s + 1].points.front();
    const double gap = std::hypot(a.p15 - b.p15, a.p2 - b.p2);
    if (gap > 1e-4) {
      std::ostringstream os;
      os << "boundary assembly gap " << gap << " between " << segs[s].label << " and "
         << segs[s + 1].label;
      throw std::runtime_error(os.str());
    }
  }
}

void check_criteria(const std::vector<BoundarySegment>& segs) {
  for (const auto& seg : segs) {
    for (const auto& bp : seg.points) {
      const FamilyPoint pt{bp.p16, bp.v, bp.alpha};
      const CorrelationVector R = family_correlations(pt);
      const CriterionReport rep = evaluate(R);
      double source = 0.0;
      if (seg.criterion == "I") source = rep.I.margin;
      else if (seg.criterion == "II") source = rep.II.margin;
      else if (seg.criterion == "III") source = rep.III.margin;
      else if (seg.criterion == "IV") source = rep.IV.margin;
      else {  // physical
        if (std::abs(bp.p1) > 1e-8)
          throw std::runtime_error("physical boundary point has p1 != 0");
        continue;
      }
      if (std::abs(source) > 1e-8) {
        std::ostringstream os;
        os << "boundary point on " << seg.label << " misses criterion " << seg.criterion
           << " equality by " << source;
        throw std::runtime_error(os.str());
      }
      const double floor = -1e-8;
      if (rep.I.margin < floor || rep.II.margin < floor ||
          (rep.III.applicable && rep.III.margin < floor) || rep.IV.margin < floor) {
        std::ostringstream os;
        os << "boundary point on " << seg.label << " violates another criterion";
        throw std::runtime_error(os.str());
      }
    }
  }
}

}  // namespace

std::vector<BoundarySegment> boundary(double p16, int n) {
  if (n < 2) throw std::invalid_argument("need at least 2 points per segment");
  if (!fig1_regime(p16) && !fig2_regime(p16))
    throw std::invalid_argument(
        "boundary assembly supports p16 = 0 and p16 in [2/9, 1/2) only");

  const double w = 1.0 - 2.0 * p16;
  const double vB = (5.0 + kSqrt41) / 16.0;
  const PointC C = point_C(p16);
  std::vector<BoundarySegment> segs;
  auto add = [&](const std::string& label, const std::string& crit) -> std::vector<BoundaryPoint>& {
    segs.push_back({label, crit, {}});
    return segs.back().points;
  };

  if (fig1_regime(p16)) {
    line_segment(add("AB", "I"), p16,
                 [&](double t) { return std::pair{1.0 / 6.0 + (vB - 1.0 / 6.0) * t, 9.0}; }, n);
    trace_quartic(add("BC", "III"), p16, vB, 9.0, C.alpha, n);
    {
      auto& pts = add("CDE", "IV");
      const double Kd = neg_branch_transition_K(p16);
      const int n1 = std::max(2, n / 2), n2 = std::max(2, n - n1);
      for (int i = 0; i <= n1; ++i) {
        const double K = C.K + (Kd - C.K) * i / n1;
        const CurvePoint c = cd_curve(K);
        pts.push_back(make_point(p16, c.v, c.alpha));
      }
      for (int i = 1; i <= n2; ++i) {
        const double K = Kd + (5.0 - Kd) * i / n2;
        const CurvePoint c = cd_curve_negative_r7(K, p16);
        pts.push_back(make_point(p16, c.v, c.alpha));
      }
    }
    const double vF = 7.0 / (8.0 * (1.0 - p16));
    const double vG1 = 1.0 - vF;
    const double aphys = 7.0 * w / (1.0 - p16);
    line_segment(add("EF", "II"), p16,
                 [&](double t) {
                   const double v = 10.0 / 11.0 + (vF - 10.0 / 11.0) * t;
                   return std::pair{v, 8.0 * v * w};
                 }, n);
    line_segment(add("FG", "physical"), p16,
                 [&](double t) { return std::pair{vF + (vG1 - vF) * t, aphys}; }, n);
    line_segment(add("GH", "II"), p16,
                 [&](double t) {
                   const double v = vG1 * (1.0 - t);
                   return std::pair{v, 8.0 * (1.0 - v) * w};
                 }, n);
    line_segment(add("AH", "II"), p16,
                 [&](double t) {
                   const double v = t / 6.0;
                   return std::pair{v, 8.0 + 6.0 * v};
                 }, n);
  } else {
    const double vG = (11.0 - kSqrt41) / 16.0;
    line_segment(add("AB", "I"), p16,
                 [&](double t) { return std::pair{1.0 / 6.0 + (vB - 1.0 / 6.0) * t, 9.0}; }, n);
    trace_quartic(add("BC", "III"), p16, vB, 9.0, C.alpha, n);
    {
      auto& pts = add("CD", "IV");
      for (int i = 0; i <= n; ++i) {
        const double K = C.K + (5.0 - C.K) * i / n;
        const CurvePoint c = cd_curve(K);
        pts.push_back(make_point(p16, c.v, c.alpha));
      }
    }
    line_segment(add("DE", "II"), p16,
                 [&](double t) { return std::pair{1.0, 22.0 / 3.0 + (6.0 - 22.0 / 3.0) * t}; }, n);
    line_segment(add("EF", "II"), p16,
                 [&](double t) {
                   const double v = 1.0 + (5.0 / 6.0 - 1.0) * t;
                   return std::pair{v, 6.0 * v};
                 }, n);
    line_segment(add("FG", "I"), p16,
                 [&](double t) { return std::pair{5.0 / 6.0 + (vG - 5.0 / 6.0) * t, 5.0}; }, n);
    {  // Mirror images (v, alpha) -> (1 - v, 14 - alpha) of BC and CD.
      auto& pts = add("GH", "III");
      std::vector<BoundaryPoint> tmp;
      trace_quartic(tmp, p16, vB, 9.0, C.alpha, n);
      for (const auto& bp : tmp) pts.push_back(make_point(p16, 1.0 - bp.v, 14.0 - bp.alpha));
    }
    {
      auto& pts = add("HI", "IV");
      for (int i = 0; i <= n; ++i) {
        const double K = C.K + (5.0 - C.K) * i / n;
        const CurvePoint c = cd_curve(K);
        pts.push_back(make_point(p16, 1.0 - c.v, 14.0 - c.alpha));
      }
    }
    line_segment(add("IJ", "II"), p16,
                 [&](double t) { return std::pair{0.0, 20.0 / 3.0 + (8.0 - 20.0 / 3.0) * t}; }, n);
    line_segment(add("AJ", "II"), p16,
                 [&](double t) {
                   const double v = t / 6.0;
                   return std::pair{v, 8.0 + 6.0 * v};
                 }, n);
  }

  check_assembly(segs);
  check_criteria(segs);
  return segs;
}

EtaResult eta_of_K(double K) {
  const CurvePoint c = cd_curve(K);
  // p16-independent normalized antidiagonals on the R7 > 0 branch.
  const double r8p = (c.alpha - 14.0 * c.v) / 8.0;
  const double r15p = (c.alpha - 8.0 + 2.0 * c.v) / 8.0;
  const double r9p = (10.0 - c.alpha - 6.0 * c.v) / 8.0;

  // The construction needs r0 = (r8' + eta)/(1 - eta) < 0, i.e. eta < |r8'|;
  // past that point the equation has spurious roots.
  auto lhs = [&](double eta) {
    const double denom = (r8p + eta) * r15p;
    const double num = r9p + 0.5 * eta;
    if (denom >= 0.0) return -1e300;
    const double rad = 1.0 - num * num / denom;
    if (rad < 0.0) return -1e300;
    return 1.0 - eta - std::abs(r8p - r15p + eta) * std::sqrt(rad);
  };

  double best = -1e300, ebest = 0.0;
  const int nscan = 8000;
  const double lo = -0.45, hi = std::abs(r8p) - 1e-12;
  for (int i = 0; i <= nscan; ++i) {
    const double e = lo + (hi - lo) * i / nscan;
    const double v = lhs(e);
    if (v > best) { best = v; ebest = e; }
  }
  const double gr = 0.6180339887498949;
  double a = std::max(lo, ebest - (hi - lo) / nscan), b = std::min(hi, ebest + (hi - lo) / nscan);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = lhs(x1), f2 = lhs(x2);
  while (b - a > 1e-13) {
    if (f1 < f2) { a = x1; x1 = x2; f1 = f2; x2 = a + gr * (b - a); f2 = lhs(x2); }
    else { b = x2; x2 = x1; f2 = f1; x1 = b - gr * (b - a); f1 = lhs(x1); }
  }
  EtaResult out;
  out.eta = 0.5 * (a + b);
  out.residual = lhs(out.eta);
  out.negative = out.eta < -1e-6;
  return out;
}

}  // namespace ghzwl
