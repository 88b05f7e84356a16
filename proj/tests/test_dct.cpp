#include <cmath>

#include "doctest.h"
#include "stabflow/dct.hpp"
#include "support.hpp"

using namespace stabflow;
namespace ts = testsupport;

namespace {

const DctAlgorithm kFast[] = {DctAlgorithm::iterative, DctAlgorithm::recursive, DctAlgorithm::hybrid};

}  // namespace

TEST_SUITE("dct") {

TEST_CASE("two-point transforms") {
  for (auto alg : {DctAlgorithm::naive, DctAlgorithm::iterative, DctAlgorithm::recursive, DctAlgorithm::hybrid}) {
    const DctPlan plan(2, alg);
    const auto a = dct(plan, {1.0, 1.0});
    CHECK(a[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(std::abs(a[1]) <= 1e-15);
    const auto b = dct(plan, {1.0, 0.0});
    CHECK(b[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b[1] == doctest::Approx(0.70710678118654752).epsilon(1e-15));
    const auto c = idct(plan, {2.0, 0.0});
    CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c[1] == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("cosine modes are orthogonal") {
  for (int n : {8, 64, 256}) {
    const DctPlan plan(n, DctAlgorithm::hybrid);
    for (int m : {1, 3, n - 1}) {
      std::vector<double> f(n);
      for (int k = 0; k < n; ++k) f[k] = std::cos((2 * k + 1) * m * M_PI / (2.0 * n));
      const auto F = dct(plan, f);
      for (int k = 0; k < n; ++k) {
        if (k == m)
          CHECK(F[k] == doctest::Approx(n / 2.0).epsilon(1e-12));
        else
          CHECK(std::abs(F[k]) <= 1e-12 * n);
      }
    }
  }
}

TEST_CASE("inverse of the leading coefficient is constant") {
  for (int n : {2, 16, 128}) {
    std::vector<double> F(n, 0.0);
    F[0] = 1.0;
    for (auto alg : kFast) {
      const auto f = idct(DctPlan(n, alg), F);
      for (double x : f) CHECK(x == doctest::Approx(1.0 / n).epsilon(1e-13));
    }
  }
}

TEST_CASE("algorithms agree with the direct sums") {
  for (int n = 2; n <= 512; n *= 2) {
    const auto f = ts::random_vector(n);
    const auto ref = ts::oracle_dct(f);
    const double scale = ts::max_abs(ref);
    for (auto alg : kFast) {
      const DctPlan plan(n, alg);
      CHECK(ts::max_abs_diff(dct(plan, f), ref) <= 1e-12 * scale);
      const auto naive_inv = idct(DctPlan(n, DctAlgorithm::naive), f);
      CHECK(ts::max_abs_diff(idct(plan, f), naive_inv) <= 1e-12 * ts::max_abs(naive_inv));
    }
  }
}

TEST_CASE("round trip") {
  for (int n = 2; n <= 256; n *= 2) {
    for (auto alg : kFast) {
      const DctPlan plan(n, alg);
      for (int trial = 0; trial < 100; ++trial) {
        const auto f = ts::random_vector(n);
        REQUIRE(ts::max_abs_diff(idct(plan, dct(plan, f)), f) <= 1e-12 * ts::max_abs(f));
      }
    }
  }
}

TEST_CASE("odd lengths fall back to the direct sums") {
  const DctPlan plan(7, DctAlgorithm::naive);
  const auto f = ts::random_vector(7);
  CHECK(ts::max_abs_diff(dct(plan, f), ts::oracle_dct(f)) <= 1e-13);
  CHECK(ts::max_abs_diff(idct(plan, dct(plan, f)), f) <= 1e-13);
}

TEST_CASE("invalid plans and inputs") {
  CHECK_THROWS(DctPlan(6, DctAlgorithm::recursive));
  CHECK_THROWS(DctPlan(12, DctAlgorithm::hybrid));
  CHECK_THROWS(DctPlan(7, DctAlgorithm::iterative));
  CHECK_NOTHROW(DctPlan(12, DctAlgorithm::iterative));
  const DctPlan plan(8, DctAlgorithm::hybrid);
  CHECK_THROWS(dct(plan, std::vector<double>(4, 0.0)));
  CHECK_THROWS(idct(plan, std::vector<double>(9, 0.0)));
  CHECK_THROWS(dct2d(plan, std::vector<double>(60, 0.0)));
}

TEST_CASE("two-dimensional transforms") {
  const int n = 8;
  const DctPlan plan(n, DctAlgorithm::hybrid);
  const auto ones = dct2d(plan, std::vector<double>(n * n, 1.0));
  CHECK(ones[0] == doctest::Approx(n * n).epsilon(1e-14));
  for (int q = 1; q < n * n; ++q) CHECK(std::abs(ones[q]) <= 1e-12);

  const auto f = ts::random_vector(n * n);
  CHECK(ts::max_abs_diff(idct2d(plan, dct2d(plan, f)), f) <= 1e-12);

  // Double-sum definition with rows indexed by the second coordinate.
  const auto F = dct2d(plan, f);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          acc += f[r * n + c] * std::cos((2 * c + 1) * j * M_PI / (2.0 * n)) *
                 std::cos((2 * r + 1) * k * M_PI / (2.0 * n));
      CHECK(F[k * n + j] == doctest::Approx(acc).epsilon(1e-12).scale(1.0));
    }

  const auto a = ts::random_vector(n), b = ts::random_vector(n);
  std::vector<double> sep(n * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) sep[r * n + c] = a[r] * b[c];
  const auto S = dct2d(plan, sep);
  const auto A = dct(plan, a), B = dct(plan, b);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) CHECK(std::abs(S[r * n + c] - A[r] * B[c]) <= 1e-12);
}

TEST_CASE("property: linearity") {
  for (int n : {4, 32, 128}) {
    for (auto alg : kFast) {
      const DctPlan plan(n, alg);
      for (int trial = 0; trial < 10; ++trial) {
        const auto f = ts::random_vector(n), g = ts::random_vector(n);
        const double a = ts::uniform(), b = ts::uniform();
        std::vector<double> h(n);
        for (int k = 0; k < n; ++k) h[k] = a * f[k] + b * g[k];
        const auto F = dct(plan, f), G = dct(plan, g), H = dct(plan, h);
        double diff = 0.0;
        for (int k = 0; k < n; ++k) diff = std::max(diff, std::abs(H[k] - (a * F[k] + b * G[k])));
        CHECK(diff <= 1e-13 * std::max(1.0, ts::max_abs(H)));
      }
    }
  }
}

TEST_CASE("property: mirrored input has no odd coefficients") {
  for (int n : {4, 16, 64, 512}) {
    for (auto alg : kFast) {
      const DctPlan plan(n, alg);
      auto f = ts::random_vector(n);
      for (int k = 0; k < n / 2; ++k) f[n - 1 - k] = f[k];
      const auto F = dct(plan, f);
      for (int k = 1; k < n; k += 2) CHECK(std::abs(F[k]) <= 1e-12 * ts::max_abs(F));
    }
  }
}

}
