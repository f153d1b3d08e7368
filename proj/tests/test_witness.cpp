#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "ghzwl/core.hpp"
#include "ghzwl/witness.hpp"

using namespace ghzwl;

namespace {

// Explicit product vector for the canonical partition 1|2|34.
Vec16c product_vector(const TripartitePartition& part, const Eigen::Vector2cd& k1,
                      const Eigen::Vector2cd& k2, const Eigen::Vector4cd& pair) {
  int c = 0, d = 0;
  for (int q = 1; q <= 4; ++q) {
    if (q == part.pair_a || q == part.pair_b) continue;
    if (!c) c = q; else d = q;
  }
  Vec16c v;
  for (int idx = 0; idx < 16; ++idx) {
    const int b1 = (idx >> (4 - c)) & 1;
    const int b2 = (idx >> (4 - d)) & 1;
    const int ba = (idx >> (4 - part.pair_a)) & 1;
    const int bb = (idx >> (4 - part.pair_b)) & 1;
    v(idx) = k1(b1) * k2(b2) * pair(ba * 2 + bb);
  }
  return v;
}

Eigen::Vector2cd bloch(double theta, double phi) {
  Eigen::Vector2cd v;
  v << std::cos(theta / 2), std::sin(theta / 2) * std::exp(std::complex<double>(0, phi));
  return v;
}

}  // namespace

TEST_CASE("K transform") {
  SUBCASE("generalized Werner witness") {
    KCoefficients K = k_from_m(WitnessParams::werner());
    CHECK(K[8] == doctest::Approx(2.0));
    CHECK(K[10] == doctest::Approx(-2.0));
    CHECK(K[12] == doctest::Approx(-2.0));
    CHECK(K[14] == doctest::Approx(-2.0));
    CHECK(K[6] == doctest::Approx(2.0));
    CHECK(K[7] == doctest::Approx(-2.0));
    CHECK(std::abs(K[9]) + std::abs(K[11]) + std::abs(K[13]) + std::abs(K[15]) < 1e-15);
  }
  SUBCASE("zero maps to zero") {
    KCoefficients K = k_from_m(WitnessParams{});
    for (int i = 0; i < 16; ++i) CHECK(K[i] == 0.0);
  }
  SUBCASE("round trip") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> uni(-1, 1);
    for (int t = 0; t < 100; ++t) {
      WitnessParams M;
      for (int i = 1; i <= 15; ++i) M[i] = uni(rng);
      WitnessParams back = m_from_k(k_from_m(M));
      for (int i = 1; i <= 15; ++i) CHECK(back[i] == doctest::Approx(M[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("x matrix") {
  SUBCASE("criterion-I coefficients reproduce the cos/exp structure") {
    WitnessParams M;
    M[7] = 1;
    M[8] = M[15] = 0.5;
    for (int i = 9; i <= 14; ++i) M[i] = -0.5;
    ProductAngles a{0.9, 1.4, 0.6, 1.1};
    Eigen::Matrix4cd x = x_matrix(M, TripartitePartition{3, 4}, a);
    const double c1c2 = std::cos(a.theta1) * std::cos(a.theta2);
    const double s1s2 = std::sin(a.theta1) * std::sin(a.theta2);
    CHECK(x(0, 0).real() == doctest::Approx(c1c2).epsilon(1e-12));
    CHECK(x(1, 1).real() == doctest::Approx(-c1c2).epsilon(1e-12));
    CHECK(x(2, 2).real() == doctest::Approx(-c1c2).epsilon(1e-12));
    CHECK(x(3, 3).real() == doctest::Approx(c1c2).epsilon(1e-12));
    const std::complex<double> corner =
        s1s2 * std::exp(std::complex<double>(0, a.phi1 + a.phi2));
    CHECK(std::abs(x(0, 3) - corner) < 1e-12);
    CHECK(std::abs(x(1, 2)) < 1e-12);
  }
  SUBCASE("poles kill the corners") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> uni(-1, 1);
    WitnessParams M;
    for (int i = 1; i <= 15; ++i) M[i] = uni(rng);
    Eigen::Matrix4cd x = x_matrix(M, TripartitePartition{3, 4}, {0.0, 0.0, 0.3, 0.9});
    CHECK(std::abs(x(0, 3)) < 1e-14);
    CHECK(std::abs(x(1, 2)) < 1e-14);
  }
  SUBCASE("agrees with explicit tensor contraction on every partition") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(-1, 1);
    std::uniform_real_distribution<double> ang(0, 3.14159265358979323846);
    for (int t = 0; t < 25; ++t) {
      WitnessParams M;
      for (int i = 1; i <= 15; ++i) M[i] = uni(rng);
      Mat16c mhat = witness_matrix(M);
      for (const auto& part : TripartitePartition::all()) {
        ProductAngles a{ang(rng), ang(rng), 2 * ang(rng), 2 * ang(rng)};
        Eigen::Matrix4cd x = x_matrix(M, part, a);
        const Eigen::Vector2cd k1 = bloch(a.theta1, a.phi1);
        const Eigen::Vector2cd k2 = bloch(a.theta2, a.phi2);
        for (int i = 0; i < 4; ++i) {
          for (int j = 0; j < 4; ++j) {
            Eigen::Vector4cd ei = Eigen::Vector4cd::Zero(), ej = Eigen::Vector4cd::Zero();
            ei(i) = 1; ej(j) = 1;
            const Vec16c vi = product_vector(part, k1, k2, ei);
            const Vec16c vj = product_vector(part, k1, k2, ej);
            const std::complex<double> want = vi.adjoint() * (mhat * vj);
            CHECK(std::abs(x(i, j) - want) < 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("eigen candidates") {
  SUBCASE("diagonal and corner limits") {
    Eigen::Matrix4cd x = Eigen::Matrix4cd::Zero();
    x(0, 0) = 0.3; x(1, 1) = -0.2; x(2, 2) = 0.7; x(3, 3) = 0.5;
    auto [l1, l2] = eigen_candidates(x);
    CHECK(l1 == doctest::Approx(0.5));
    CHECK(l2 == doctest::Approx(0.7));

    x.setZero();
    x(0, 3) = std::complex<double>(0.3, -0.4);
    x(3, 0) = std::conj(x(0, 3));
    auto [m1, m2] = eigen_candidates(x);
    CHECK(m1 == doctest::Approx(0.5));
    CHECK(m2 == doctest::Approx(0.0));
  }
  SUBCASE("non X-type rejected") {
    Eigen::Matrix4cd x = Eigen::Matrix4cd::Zero();
    x(0, 1) = 0.5;
    CHECK_THROWS(eigen_candidates(x));
  }
  SUBCASE("max candidate matches a dense eigensolve") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> uni(-1, 1);
    for (int t = 0; t < 1000; ++t) {
      Eigen::Matrix4cd x = Eigen::Matrix4cd::Zero();
      for (int i = 0; i < 4; ++i) x(i, i) = uni(rng);
      x(0, 3) = std::complex<double>(uni(rng), uni(rng));
      x(3, 0) = std::conj(x(0, 3));
      x(1, 2) = std::complex<double>(uni(rng), uni(rng));
      x(2, 1) = std::conj(x(1, 2));
      auto [l1, l2] = eigen_candidates(x);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(x);
      CHECK(std::max(l1, l2) == doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-12));
    }
  }
}

TEST_CASE("gamma matrix") {
  Eigen::Matrix4d g = gamma_matrix();
  CHECK((g - g.transpose()).cwiseAbs().maxCoeff() == 0.0);
  // Gamma^2 = 4 I; note the quadratic relation Gamma^2 = 4 I - 2 Gamma does
  // not hold (Gamma is not idempotent-shifted), only the involution-like one.
  CHECK((g * g - 4.0 * Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() == 0.0);
  // the transform used throughout: row vector times Gamma
  std::array<double, 4> v{0.3, -0.2, 0.7, 1.1};
  Eigen::RowVector4d r(v[0], v[1], v[2], v[3]);
  Eigen::RowVector4d w = r * g;
  const double s = v[0] + v[1] + v[2] + v[3];
  for (int i = 0; i < 4; ++i) CHECK(w(i) == doctest::Approx(s - 2 * v[size_t(i)]).epsilon(1e-15));
}

TEST_CASE("g tilde") {
  CHECK(g_tilde({2, -2, -2, -2}) == doctest::Approx(2.0));  // Werner sector, max branch
  CHECK(g_tilde({1, 0, 0, 0}) == doctest::Approx(1.0));
  CHECK(g_tilde({1, 1, 1, 1}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  SUBCASE("matches the two-angle brute force") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> uni(-1, 1);
    for (int t = 0; t < 300; ++t) {
      std::array<double, 4> k{uni(rng), uni(rng), uni(rng), uni(rng)};
      CHECK(g_tilde(k) == doctest::Approx(g_tilde_bruteforce(k, 96)).epsilon(1e-9));
    }
  }
}

TEST_CASE("lambda") {
  SUBCASE("symmetric closed form") {
    CHECK(lambda_symmetric(WitnessParams::werner()) == doctest::Approx(2.0));
    WitnessParams m7only;
    m7only[7] = 1;
    CHECK(lambda_symmetric(m7only) == doctest::Approx(1.0));
    WitnessParams critI;
    critI[7] = 1; critI[8] = critI[15] = 0.5;
    for (int i = 9; i <= 14; ++i) critI[i] = -0.5;
    CHECK(lambda_symmetric(critI) == doctest::Approx(1.0));
  }
  SUBCASE("assumption violations rejected") {
    WitnessParams M;
    M[1] = 0.5;  // violates M1 = 0
    M[7] = 1;
    CHECK_THROWS(lambda_symmetric(M));
    WitnessParams N;
    N[7] = 1; N[9] = 0.5; N[10] = -0.5;  // violates M9 = ... = M14
    CHECK_THROWS(lambda_symmetric(N));
  }
  SUBCASE("brute force on the Werner witness") {
    CHECK(lambda_bruteforce(WitnessParams::werner(), TripartitePartition{3, 4}) ==
          doctest::Approx(2.0).epsilon(1e-6));
    WitnessParams m7only;
    m7only[7] = 1;
    for (const auto& part : TripartitePartition::all())
      CHECK(lambda_bruteforce(m7only, part, 24) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("asymmetric example: per-partition values and the overall maximum") {
    // K8=1, K10=K12=K14=-1, K9=x, K11=K13=K15=-x at x=1
    const double x = 1.0;
    KCoefficients K;
    K[8] = 1; K[10] = K[12] = K[14] = -1;
    K[9] = x; K[11] = K[13] = K[15] = -x;
    WitnessParams M = m_from_k(K);
    CHECK(lambda_bruteforce(M, TripartitePartition{2, 4}, 32) ==
          doctest::Approx(1.0 + x).epsilon(1e-6));
    CHECK(lambda_bruteforce(M, TripartitePartition{3, 4}, 32) ==
          doctest::Approx(1.0).epsilon(1e-6));
    CHECK(lambda_all_partitions(M, 32) == doctest::Approx(1.0 + x).epsilon(1e-6));
  }
  SUBCASE("all zero") {
    CHECK(lambda_all_partitions(WitnessParams{}, 12) == doctest::Approx(0.0));
  }
  SUBCASE("invariant under qubit relabeling") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> uni(-1, 1);
    WitnessParams M;
    for (int i = 1; i <= 15; ++i) M[i] = uni(rng);
    const double lam = lambda_all_partitions(M, 24);
    for (const auto& part : TripartitePartition::all()) {
      WitnessParams Mp = relabel_for_partition(M, part);
      CHECK(lambda_all_partitions(Mp, 24) == doctest::Approx(lam).epsilon(1e-6));
    }
  }
}

TEST_CASE("witness validity: W = Lambda I - M has nonnegative product means") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> uni(-1, 1);
  std::normal_distribution<double> gauss(0, 1);
  WitnessParams M;
  M[7] = 0.8;
  M[8] = 0.7; M[15] = -0.4;
  for (int i = 9; i <= 14; ++i) M[i] = -0.6;
  const double lam = lambda_symmetric(M);
  Mat16c mhat = witness_matrix(M);
  for (int t = 0; t < 20000; ++t) {
    const auto& part = TripartitePartition::all()[rng() % 6];
    Eigen::Vector2cd k1 = bloch(std::acos(uni(rng)), 2 * 3.141592653589793 * (uni(rng) + 1) / 2);
    Eigen::Vector2cd k2 = bloch(std::acos(uni(rng)), 2 * 3.141592653589793 * (uni(rng) + 1) / 2);
    Eigen::Vector4cd pair;
    for (int i = 0; i < 4; ++i) pair(i) = std::complex<double>(gauss(rng), gauss(rng));
    pair.normalize();
    Vec16c v = product_vector(part, k1, k2, pair);
    const double mean = (v.adjoint() * (mhat * v)).value().real();
    CHECK(mean <= lam + 1e-9);
  }
}

TEST_CASE("witness report") {
  SUBCASE("Werner state and witness") {
    const double p = 0.31;
    WitnessReport rep = witness_report(WitnessParams::werner(), GhzDiagonalState::werner(p));
    CHECK(rep.expectation == doctest::Approx(10 * p).epsilon(1e-12));
    CHECK(rep.lambda == doctest::Approx(2.0));
    CHECK(rep.L == doctest::Approx(1.0 / (5 * p)).epsilon(1e-12));
    CHECK(rep.entangled == (p > 0.2));
  }
  SUBCASE("uniform state rejected") {
    CHECK_THROWS_AS((void)witness_report(WitnessParams::werner(), GhzDiagonalState::uniform()),
                    std::domain_error);
  }
}
