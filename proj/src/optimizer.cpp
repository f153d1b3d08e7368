#include "ghzwl/optimizer.hpp"

#include "ghzwl/family.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <thread>

namespace ghzwl {

namespace {

// Precomputed index permutations of the 15 Pauli strings for each partition.
const std::array<std::array<int, kNumPauli + 1>, 6>& partition_perms() {
  static const auto perms = [] {
    std::array<std::array<int, kNumPauli + 1>, 6> out{};
    const auto& parts = TripartitePartition::all();
    for (size_t p = 0; p < parts.size(); ++p) {
      WitnessParams probe;
      for (int i = 1; i <= kNumPauli; ++i) probe[i] = i;
      const WitnessParams mapped = relabel_for_partition(probe, parts[p]);
      for (int j = 1; j <= kNumPauli; ++j) out[p][static_cast<int>(mapped[j])] = j;
      // out[p][i] = index of string i after relabeling
    }
    return out;
  }();
  return perms;
}

int thread_budget() {
  if (const char* env = std::getenv("GHZWL_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

}  // namespace

double lambda_antidiagonal(const WitnessParams& M) {
  const auto& perms = partition_perms();
  double best = 0.0;
  for (const auto& perm : perms) {
    double mp[16];
    for (int i = 8; i <= 15; ++i) mp[perm[i]] = M[i];
    const double k8 = mp[8] - mp[9], k9 = mp[8] + mp[9];
    const double k10 = mp[10] + mp[11], k11 = mp[10] - mp[11];
    const double k12 = mp[12] + mp[13], k13 = mp[12] - mp[13];
    const double k14 = mp[14] - mp[15], k15 = mp[14] + mp[15];
    best = std::max(best, g_tilde({k8, k10, k12, k14}));
    best = std::max(best, g_tilde({k9, k11, k13, k15}));
  }
  return best;
}

namespace {

struct Objective {
  WitnessMode mode;
  double r7 = 0;
  std::array<double, kNumPauli + 1> R{};
  double s9to14 = 0;

  // Parameter vector: symmetric (M7, M8, M9, M15), asymmetric (M8..M15).
  int dim() const { return mode == WitnessMode::kSymmetric ? 4 : 8; }

  double L(const std::vector<double>& x) const {
    if (mode == WitnessMode::kSymmetric) {
      const double m7 = x[0], m8 = x[1], m9 = x[2], m15 = x[3];
      const double obj = m7 * R[7] + m8 * R[8] + m9 * s9to14 + m15 * R[15];
      if (obj <= 1e-12) return 1e300;
      const double g1 = g_tilde({m8 - m9, 2 * m9, 2 * m9, m9 - m15});
      const double g2 = std::max(std::abs(m8 + m9), std::abs(m9 + m15));
      const double lam = std::max({std::abs(m7), g1, g2});
      return lam / obj;
    }
    WitnessParams M;
    for (int i = 0; i < 8; ++i) M[8 + i] = x[static_cast<size_t>(i)];
    double v = 0.0;
    for (int i = 8; i <= 15; ++i) v += M[i] * R[i];
    if (v <= 1e-12) return 1e300;
    const double lam = lambda_antidiagonal(M);
    if (lam <= 0.0) return 1e300;
    // |M7| pinned to Lambda with the sign of R7.
    return lam / (lam * std::abs(r7) + v);
  }
};

void normalize_inf(std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (m > 0) for (double& v : x) v /= m;
}

double coordinate_descent(const Objective& f, std::vector<double>& x, double tol) {
  normalize_inf(x);
  double best = f.L(x);
  for (int cycle = 0; cycle < 3; ++cycle) {
    double step = 0.5;
    while (step > tol) {
      bool improved = false;
      for (size_t i = 0; i < x.size(); ++i) {
        for (double sgn : {+1.0, -1.0}) {
          std::vector<double> y = x;
          y[i] += sgn * step;
          normalize_inf(y);
          const double v = f.L(y);
          if (v < best - 1e-15) {
            best = v;
            x = y;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
  }
  return best;
}

std::vector<std::vector<double>> smart_starts(WitnessMode mode, const Objective& f) {
  std::vector<std::vector<double>> s;
  if (mode == WitnessMode::kSymmetric) {
    s.push_back({2, 1, -1, 1});      // generalized-Werner witness
    s.push_back({1, 0.5, -0.5, 0.5});
    s.push_back({1, 1, 0, 1});
    s.push_back({1, -1, 0, -1});
    s.push_back({1, -1, 0, 1});
    s.push_back({1, 1, 0, -1});
    s.push_back({1, 0, -1, 0});
  } else {
    s.push_back({0.5, -0.5, -0.5, -0.5, -0.5, -0.5, -0.5, 0.5});
    s.push_back({1, 0, 0, 0, 0, 0, 0, 1});
    s.push_back({-1, 0, 0, 0, 0, 0, 0, -1});
    s.push_back({-1, 0, 0, 0, 0, 0, 0, 1});
    s.push_back({1, 0, 0, 0, 0, 0, 0, -1});
    // sign-matched to the antidiagonal correlations
    std::vector<double> m(8);
    for (int i = 0; i < 8; ++i) m[static_cast<size_t>(i)] = (f.R[8 + i] >= 0 ? 1.0 : -1.0);
    s.push_back(m);
  }
  return s;
}

}  // namespace

MatchedWitness minimize_L(const CorrelationVector& R, const OptimizerConfig& cfg) {
  double anti = 0.0;
  for (int i = 8; i <= 15; ++i) anti += std::abs(R[i]);
  if (anti < 1e-12) throw std::domain_error("all antidiagonal correlations vanish");

  Objective f;
  f.mode = cfg.mode;
  f.r7 = R[7];
  for (int i = 1; i <= kNumPauli; ++i) f.R[i] = R[i];
  for (int i = 9; i <= 14; ++i) f.s9to14 += R[i];

  double bestL = 1e300;
  std::vector<double> bestx;
  auto consider = [&](std::vector<double> x) {
    if (f.L(x) >= 1e299) return;
    const double v = coordinate_descent(f, x, cfg.refine_tol);
    if (v < bestL) {
      bestL = v;
      bestx = x;
    }
  };
  for (auto& s : smart_starts(cfg.mode, f)) consider(s);
  for (int start = 0; start < cfg.multistarts; ++start) {
    std::mt19937_64 rng(cfg.seed * 1000003ULL + static_cast<uint64_t>(start));
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> x(static_cast<size_t>(f.dim()));
    bool ok = false;
    for (int tries = 0; tries < 64 && !ok; ++tries) {
      for (double& v : x) v = uni(rng);
      ok = f.L(x) < 1e299;
    }
    if (ok) consider(x);
  }
  if (bestx.empty()) throw std::domain_error("no witness with positive expectation found");

  MatchedWitness out;
  out.L_min = bestL;
  if (cfg.mode == WitnessMode::kSymmetric) {
    out.M[7] = bestx[0];
    out.M[8] = bestx[1];
    for (int i = 9; i <= 14; ++i) out.M[i] = bestx[2];
    out.M[15] = bestx[3];
    out.lambda = lambda_symmetric(out.M);
  } else {
    for (int i = 0; i < 8; ++i) out.M[8 + i] = bestx[static_cast<size_t>(i)];
    const double lam = lambda_antidiagonal(out.M);
    out.M[7] = (R[7] >= 0 ? 1.0 : -1.0) * lam;
    out.lambda = lam;
  }
  out.expectation = 0.0;
  for (int i = 1; i <= kNumPauli; ++i) out.expectation += out.M[i] * R[i];
  return out;
}

MatchedWitness minimize_L(const GhzDiagonalState& state, const OptimizerConfig& cfg) {
  return minimize_L(correlations(state), cfg);
}

BoundaryScan scan_numeric_boundary(double p16, int n, const OptimizerConfig& cfg) {
  BoundaryScan scan;
  scan.p16 = p16;
  scan.grid = n;
  scan.points.assign(static_cast<size_t>(n + 1) * (n + 1), {});
  const double lim = (1.0 - p16) / 7.0;

  const int nthreads = std::min(thread_budget(), n + 1);
  std::atomic<int> next_row{0};
  auto worker = [&] {
    for (;;) {
      const int i = next_row.fetch_add(1);
      if (i > n) break;
      for (int j = 0; j <= n; ++j) {
        ScanPoint& pt = scan.points[static_cast<size_t>(i) * (n + 1) + j];
        pt.p15 = lim * i / n;
        pt.p2 = lim * j / n;
        const double p1 = 1.0 - p16 - 7.0 * (pt.p2 + pt.p15);
        if (p1 < -1e-12) continue;
        std::array<double, kNumBasis> probs{};
        probs[0] = std::max(p1, 0.0);
        for (int q = 2; q <= 8; ++q) probs[q - 1] = pt.p2;
        for (int q = 9; q <= 15; ++q) probs[q - 1] = pt.p15;
        probs[15] = p16;
        const GhzDiagonalState st(probs);
        pt.physical = true;
        OptimizerConfig local = cfg;
        local.mode = WitnessMode::kAsymmetric;
        local.seed = cfg.seed + 7919ULL * static_cast<uint64_t>(i * (n + 1) + j);
        try {
          pt.L_min = minimize_L(correlations(st), local).L_min;
        } catch (const std::domain_error&) {
          pt.L_min = 1e6;  // fully mixed corner: nothing to detect
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads - 1; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return scan;
}

std::vector<std::pair<double, double>> level_set_crossings(const BoundaryScan& scan) {
  std::vector<std::pair<double, double>> out;
  const int n = scan.grid;
  auto add_crossing = [&](const ScanPoint& a, const ScanPoint& b) {
    const double fa = a.L_min - 1.0, fb = b.L_min - 1.0;
    if (!a.physical || !b.physical) return;
    if ((fa < 0 && fb >= 0) || (fa >= 0 && fb < 0)) {
      const double t = fa / (fa - fb);
      out.emplace_back(a.p15 + t * (b.p15 - a.p15), a.p2 + t * (b.p2 - a.p2));
    }
  };
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (i < n) add_crossing(scan.at(i, j), scan.at(i + 1, j));
      if (j < n) add_crossing(scan.at(i, j), scan.at(i, j + 1));
    }
  }
  return out;
}

double max_deviation(const std::vector<std::pair<double, double>>& crossings,
                     const std::vector<std::pair<double, double>>& polyline) {
  auto seg_dist = [](double px, double py, double ax, double ay, double bx, double by) {
    const double dx = bx - ax, dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(px - (ax + t * dx), py - (ay + t * dy));
  };
  double worst = 0.0;
  for (const auto& c : crossings) {
    double d = 1e300;
    for (size_t k = 0; k + 1 < polyline.size(); ++k) {
      d = std::min(d, seg_dist(c.first, c.second, polyline[k].first, polyline[k].second,
                               polyline[k + 1].first, polyline[k + 1].second));
    }
    worst = std::max(worst, d);
  }
  return worst;
}

HierarchyEvidence verify_hierarchy(uint64_t seed) {
  HierarchyEvidence ev;

  // (a) interior of the criterion-I region violating criterion II: a point just
  // below the p15 = 1/8 line of the figure-1 layout.
  ev.c1_p16 = 0.0;
  ev.c1_v = 0.942;
  ev.c1_alpha = ev.c1_v / 0.13;  // p15 = 0.13 > 1/8
  {
    const FamilyPoint pt{ev.c1_p16, ev.c1_v, ev.c1_alpha};
    const CorrelationVector R = family_correlations(pt);
    ev.c1_margin_I = criterion_I(R);
    ev.c1_margin_II = criterion_II(R);
  }

  // (b) the asymmetric-vs-symmetric comparison state (diagonal part zero).
  CorrelationVector R;
  const std::array<double, 8> anti = {0.3255, -0.5260, 0.0739, 0.4046,
                                      -0.8764, -0.4321, -0.5037, 0.8752};
  for (int i = 0; i < 8; ++i) R[8 + i] = anti[static_cast<size_t>(i)];
  ev.example_R = R;
  OptimizerConfig sym{WitnessMode::kSymmetric, 200, seed, 1e-7, 24};
  OptimizerConfig asym{WitnessMode::kAsymmetric, 400, seed, 1e-7, 24};
  ev.sym_L = minimize_L(R, sym).L_min;
  ev.asym_L = minimize_L(R, asym).L_min;

  // (c) Werner state below the threshold.
  ev.werner_p = 0.19;
  const CriterionReport rep = evaluate(GhzDiagonalState::werner(ev.werner_p));
  ev.werner_passes = !rep.detected_entangled;
  return ev;
}

}  // namespace ghzwl
