#include <doctest.h>

#include <cmath>
#include <random>

#include "ghzwl/core.hpp"

using namespace ghzwl;

namespace {

GhzDiagonalState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::array<double, kNumBasis> p{};
  double sum = 0;
  for (auto& v : p) { v = uni(rng); sum += v; }
  for (auto& v : p) v /= sum;
  return GhzDiagonalState(p);
}

}  // namespace

TEST_CASE("ghz basis indexing") {
  const double r = 1.0 / std::sqrt(2.0);
  Vec16c v1 = ghz_basis_state(1);
  CHECK(std::abs(v1(0) - r) < 1e-15);   // |0000>
  CHECK(std::abs(v1(15) - r) < 1e-15);  // +|1111>

  Vec16c v16 = ghz_basis_state(16);
  CHECK(std::abs(v16(0) - r) < 1e-15);
  CHECK(std::abs(v16(15) + r) < 1e-15);  // -|1111>

  Vec16c v9 = ghz_basis_state(9);
  CHECK(std::abs(v9(0b0111) - r) < 1e-15);
  CHECK(std::abs(v9(0b1000) + r) < 1e-15);  // (|0111> - |1000>)/sqrt2

  CHECK_THROWS(ghz_basis_state(0));
  CHECK_THROWS(ghz_basis_state(17));

  for (int j = 1; j <= 16; ++j) CHECK(ghz_partner(j) == 17 - j);
}

TEST_CASE("each basis state is a +-1 eigenvector of every string") {
  for (int j = 1; j <= 16; ++j) {
    Vec16c v = ghz_basis_state(j);
    for (int i = 1; i <= kNumPauli; ++i) {
      Vec16c w = pauli_string_matrix(i) * v;
      const int s = pauli_sign(i, j);
      CHECK((w - double(s) * v).norm() < 1e-14);
    }
  }
}

TEST_CASE("density matrix structure") {
  SUBCASE("pure GHZ projector") {
    std::array<double, 16> p{};
    p[0] = 1.0;
    Mat16c rho = density_matrix(GhzDiagonalState(p));
    CHECK(std::abs(rho(0, 0).real() - 0.5) < 1e-15);
    CHECK(std::abs(rho(0, 15).real() - 0.5) < 1e-15);
    CHECK(std::abs(rho(15, 15).real() - 0.5) < 1e-15);
    CHECK(std::abs(rho(1, 1)) < 1e-15);
  }
  SUBCASE("uniform mixture is identity/16") {
    Mat16c rho = density_matrix(GhzDiagonalState::uniform());
    CHECK((rho - Mat16c::Identity() / 16.0).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("highly symmetric entries") {
    std::array<double, 16> p{};
    const double p1 = 0.4, p2 = 0.05, p15 = 0.02, p16 = 0.11;
    p[0] = p1; p[15] = p16;
    for (int j = 2; j <= 8; ++j) p[j - 1] = p2;
    for (int j = 9; j <= 15; ++j) p[j - 1] = p15;
    GhzDiagonalState st(p);
    CHECK(rho_entry(st, 1, 1) == doctest::Approx((p1 + p16) / 2).epsilon(1e-12));
    CHECK(rho_entry(st, 16, 16) == doctest::Approx((p1 + p16) / 2).epsilon(1e-12));
    CHECK(rho_entry(st, 1, 16) == doctest::Approx((p1 - p16) / 2).epsilon(1e-12));
    CHECK(rho_entry(st, 2, 15) == doctest::Approx((p2 - p15) / 2).epsilon(1e-12));
  }
  SUBCASE("hermitian, trace one, X type") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
      Mat16c rho = density_matrix(random_state(rng));
      CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
      CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
      for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j)
          if (i != j && i + j != 15) CHECK(std::abs(rho(i, j)) == 0.0);
    }
  }
}

TEST_CASE("correlations") {
  SUBCASE("generalized Werner") {
    CorrelationVector R = correlations(GhzDiagonalState::werner(0.37));
    for (int i = 1; i <= 8; ++i) CHECK(R[i] == doctest::Approx(0.37).epsilon(1e-12));
    for (int i = 9; i <= 14; ++i) CHECK(R[i] == doctest::Approx(-0.37).epsilon(1e-12));
    CHECK(R[15] == doctest::Approx(0.37).epsilon(1e-12));
  }
  SUBCASE("highly symmetric family closed forms") {
    std::array<double, 16> p{};
    const double p2 = 0.03, p15 = 0.045, p16 = 0.2;
    const double p1 = 1 - p16 - 7 * (p2 + p15);
    p[0] = p1; p[15] = p16;
    for (int j = 2; j <= 8; ++j) p[j - 1] = p2;
    for (int j = 9; j <= 15; ++j) p[j - 1] = p15;
    CorrelationVector R = correlations(GhzDiagonalState(p));
    CHECK(R[7] == doctest::Approx(1 - 8 * (p2 + p15)).epsilon(1e-12));
    CHECK(R[7] == doctest::Approx(R[1]).epsilon(1e-12));
    CHECK(R[8] == doctest::Approx(1 - 2 * p16 - 14 * p15).epsilon(1e-12));
    CHECK(R[15] == doctest::Approx(1 - 2 * p16 - 8 * p2 - 6 * p15).epsilon(1e-12));
    CHECK(R[9] == doctest::Approx(-R[15]).epsilon(1e-12));
  }
  SUBCASE("uniform mixture vanishes") {
    CorrelationVector R = correlations(GhzDiagonalState::uniform());
    for (int i = 1; i <= 15; ++i) CHECK(std::abs(R[i]) < 1e-14);
  }
  SUBCASE("sign table equals explicit trace") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
      GhzDiagonalState st = random_state(rng);
      CorrelationVector a = correlations(st);
      CorrelationVector b = correlations_via_trace(st);
      for (int i = 1; i <= 15; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
    }
  }
}

TEST_CASE("T vector") {
  SUBCASE("Werner values") {
    const double p = 0.41;
    TVector T = t_from_r(correlations(GhzDiagonalState::werner(p)));
    CHECK(T[8] == doctest::Approx(p).epsilon(1e-12));
    CHECK(std::abs(T[9]) < 1e-14);
    CHECK(T[10] == doctest::Approx(-p).epsilon(1e-12));
    CHECK(T[12] == doctest::Approx(-p).epsilon(1e-12));
    CHECK(T[14] == doctest::Approx(-p).epsilon(1e-12));
    CHECK(std::abs(T[11]) + std::abs(T[13]) + std::abs(T[15]) < 1e-14);
  }
  SUBCASE("sum K_i T_i equals sum M_i R_i for random coefficients") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(-1, 1);
    for (int t = 0; t < 200; ++t) {
      CorrelationVector R;
      for (int i = 1; i <= 15; ++i) R[i] = uni(rng);
      TVector T = t_from_r(R);
      std::array<double, 16> M{};
      for (int i = 1; i <= 15; ++i) M[i] = uni(rng);
      double mr = 0;
      for (int i = 1; i <= 15; ++i) mr += M[i] * R[i];
      const double K[16] = {M[1], -M[1], M[2] + M[3], M[2] - M[3], M[4] + M[5], M[4] - M[5],
                            M[6] + M[7], M[6] - M[7], M[8] - M[9], M[8] + M[9], M[10] + M[11],
                            M[10] - M[11], M[12] + M[13], M[12] - M[13], M[14] - M[15],
                            M[14] + M[15]};
      double kt = 0;
      for (int i = 0; i < 16; ++i) kt += K[i] * T[i];
      CHECK(mr == doctest::Approx(kt).epsilon(1e-12));
      CorrelationVector back = r_from_t(T);
      for (int i = 1; i <= 15; ++i) CHECK(back[i] == doctest::Approx(R[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("state from correlations") {
  SUBCASE("all zero gives uniform") {
    CorrelationVector R;
    GhzDiagonalState st = state_from_correlations(R);
    for (int j = 1; j <= 16; ++j) CHECK(st.p(j) == doctest::Approx(1.0 / 16).epsilon(1e-12));
  }
  SUBCASE("Werner p = 0.2 probabilities") {
    GhzDiagonalState st = state_from_correlations(correlations(GhzDiagonalState::werner(0.2)));
    CHECK(st.p(1) == doctest::Approx(0.25).epsilon(1e-12));
    for (int j = 2; j <= 16; ++j) CHECK(st.p(j) == doctest::Approx(0.05).epsilon(1e-12));
  }
  SUBCASE("out of range correlations rejected") {
    CorrelationVector R;
    R[7] = 2.0;
    CHECK_THROWS_AS((void)state_from_correlations(R), std::invalid_argument);
  }
  SUBCASE("round trip p -> R -> p") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 200; ++t) {
      GhzDiagonalState st = random_state(rng);
      GhzDiagonalState back = state_from_correlations(correlations(st));
      for (int j = 1; j <= 16; ++j)
        CHECK(std::abs(back.p(j) - st.p(j)) < 1e-12);
    }
  }
}

TEST_CASE("state validation") {
  std::array<double, 16> p{};
  p[0] = 1.0 + 5e-13;
  p[1] = -5e-13;  // clamped and renormalized
  GhzDiagonalState st(p);
  CHECK(st.p(2) == 0.0);
  p[1] = -1e-6;
  p[0] = 1.0 + 1e-6;
  CHECK_THROWS_AS(GhzDiagonalState{p}, std::invalid_argument);
}
