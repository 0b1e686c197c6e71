#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ceap/error.hpp"
#include "ceap/hankel_pencil.hpp"
#include "expect.hpp"
#include "oracles.hpp"

using ceap::Complex;
using ceap::EigenSolution;
using ceap::SignalSeries;

namespace {

struct Truth {
  std::vector<Complex> weights;
  std::vector<Complex> nodes;
};

// Random model with nodes at least 0.2 apart, 0.5 <= |xi| <= 1.1.
Truth random_model(std::mt19937_64& gen, std::size_t p) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Truth t;
  while (t.nodes.size() < p) {
    const Complex z = std::polar(0.5 + 0.6 * u(gen), 2 * std::numbers::pi * u(gen));
    if (std::all_of(t.nodes.begin(), t.nodes.end(), [&](Complex y) { return std::abs(y - z) >= 0.2; })) {
      t.nodes.push_back(z);
      t.weights.push_back(std::polar(0.5 + u(gen), 2 * std::numbers::pi * u(gen)));
    }
  }
  return t;
}

EigenSolution solve(const std::vector<Complex>& s) {
  const SignalSeries series(s);
  return ceap::solve_pencil(ceap::build_pencil(series), series);
}

// Relative error of each true pair against its matched estimate.
double max_pair_error(const Truth& t, const EigenSolution& sol) {
  double worst = 0.0;
  for (std::size_t j = 0; j < t.nodes.size(); ++j) {
    const auto it = std::min_element(sol.pairs.begin(), sol.pairs.end(), [&](const auto& a, const auto& b) {
      return std::abs(a.node - t.nodes[j]) < std::abs(b.node - t.nodes[j]);
    });
    if (it == sol.pairs.end()) return INFINITY;
    worst = std::max({worst, std::abs(it->node - t.nodes[j]) / std::abs(t.nodes[j]),
                      std::abs(it->weight - t.weights[j]) / std::abs(t.weights[j])});
  }
  return worst;
}

}  // namespace

TEST(BuildPencil, HankelDefinition) {
  const ceap::HankelPencil p = ceap::build_pencil(std::vector<Complex>{1, 2, 3, 4});
  Eigen::MatrixXcd u0(2, 2), u1(2, 2);
  u0 << 1, 2, 2, 3;
  u1 << 2, 3, 3, 4;
  EXPECT_EQ(p.u0, u0);
  EXPECT_EQ(p.u1, u1);
  EXPECT_EQ(p.size(), 2u);
}

TEST(BuildPencil, OneByOne) {
  const ceap::HankelPencil p = ceap::build_pencil(std::vector<Complex>{5, 10});
  EXPECT_EQ(p.u0(0, 0), Complex(5));
  EXPECT_EQ(p.u1(0, 0), Complex(10));
}

TEST(BuildPencil, ZeroInput) {
  const ceap::HankelPencil p = ceap::build_pencil(std::vector<Complex>(4));
  EXPECT_TRUE(p.u0.isZero(0));
  EXPECT_TRUE(p.u1.isZero(0));
}

TEST(BuildPencil, RejectsOddLength) {
  EXPECT_THROW_MSG(ceap::build_pencil(std::vector<Complex>{1, 2, 3}), ceap::InvalidInput,
                   "series length must be even");
}

TEST(BuildPencil, AntiDiagonalsAreConstant) {
  std::mt19937_64 gen(1);
  std::vector<Complex> s(12);
  for (Complex& x : s) x = oracle::complex_noise(gen, 1.0);
  const ceap::HankelPencil p = ceap::build_pencil(s);
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index j = 0; j < 6; ++j) {
      EXPECT_EQ(p.u0(i, j), s[static_cast<std::size_t>(i + j)]);
      EXPECT_EQ(p.u1(i, j), s[static_cast<std::size_t>(i + j + 1)]);
    }
}

TEST(SolvePencil, OneByOne) {
  const EigenSolution sol = solve({2.0, 1.0});
  ASSERT_EQ(sol.size(), 1u);
  EXPECT_LE(std::abs(sol.pairs[0].node - 0.5), 1e-15);
  EXPECT_LE(std::abs(sol.pairs[0].weight - 2.0), 1e-15);
}

TEST(SolvePencil, ConjugatePair) {
  const Truth t{{1.0, 1.0}, {std::polar(0.9, std::numbers::pi / 4), std::polar(0.9, -std::numbers::pi / 4)}};
  const EigenSolution sol = solve(oracle::exponential_sum(t.weights, t.nodes, 0, 4));
  ASSERT_EQ(sol.size(), 2u);
  EXPECT_LE(max_pair_error(t, sol), 1e-10);
}

TEST(SolvePencil, ZeroSeriesHasNoPairs) {
  const EigenSolution sol = solve(std::vector<Complex>(4));
  EXPECT_TRUE(sol.pairs.empty());
  EXPECT_EQ(sol.excluded.size(), 2u);
}

TEST(SolvePencil, RecoversRandomFullOrderModels) {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t p = 1 + static_cast<std::size_t>(trial % 5);
    const Truth t = random_model(gen, p);
    const EigenSolution sol = solve(oracle::exponential_sum(t.weights, t.nodes, 0, 2 * p));
    ASSERT_EQ(sol.size(), p);
    EXPECT_LE(max_pair_error(t, sol), 1e-8) << "trial " << trial;
    EXPECT_EQ(sol.quality.size(), sol.size());
  }
}

TEST(SolvePencil, LowOrderDataDropsDeficientDirections) {
  const Truth t{{1.0, Complex(0.5, 0.5)}, {0.8, Complex(0, 0.9)}};
  const EigenSolution sol = solve(oracle::exponential_sum(t.weights, t.nodes, 0, 10));
  ASSERT_EQ(sol.size(), 2u);
  EXPECT_LE(max_pair_error(t, sol), 1e-8);
  EXPECT_EQ(sol.excluded.size(), 3u);
  for (const auto& e : sol.excluded) EXPECT_EQ(e.reason, ceap::ExclusionReason::kRankDeficient);
}

TEST(SolvePencil, MaxRankCapsTheProjection) {
  std::mt19937_64 gen(5);
  const Truth t{{1.0, 0.7}, {std::polar(0.95, 0.5), std::polar(0.9, -1.0)}};
  std::vector<Complex> s = oracle::exponential_sum(t.weights, t.nodes, 0, 16);
  for (Complex& x : s) x += oracle::complex_noise(gen, 1e-6);
  const SignalSeries series(s);
  const EigenSolution full = ceap::solve_pencil(ceap::build_pencil(series), series);
  const EigenSolution capped = ceap::solve_pencil(ceap::build_pencil(series), series, 2);
  EXPECT_EQ(full.size(), 8u);
  ASSERT_EQ(capped.size(), 2u);
  EXPECT_LE(max_pair_error(t, capped), 1e-4);
}

TEST(SolvePencil, FactorizationHolds) {
  // U0 = V C V^T and U1 = V C Z V^T with V[i][j] = xi_j^i.
  std::mt19937_64 gen(8);
  for (std::size_t p = 1; p <= 5; ++p) {
    const Truth t = random_model(gen, p);
    const std::vector<Complex> s = oracle::exponential_sum(t.weights, t.nodes, 0, 2 * p);
    const ceap::HankelPencil pencil = ceap::build_pencil(s);
    const EigenSolution sol = ceap::solve_pencil(pencil, SignalSeries(s));
    ASSERT_EQ(sol.size(), p);
    Eigen::MatrixXcd v(p, p);
    Eigen::VectorXcd c(p), z(p);
    for (std::size_t j = 0; j < p; ++j) {
      c(j) = sol.pairs[j].weight;
      z(j) = sol.pairs[j].node;
      for (std::size_t i = 0; i < p; ++i) v(i, j) = ceap::ipow(z(j), i);
    }
    const Eigen::MatrixXcd r0 = v * c.asDiagonal() * v.transpose();
    const Eigen::MatrixXcd r1 = v * c.cwiseProduct(z).asDiagonal() * v.transpose();
    EXPECT_LE((r0 - pencil.u0).norm(), 1e-10 * pencil.u0.norm());
    EXPECT_LE((r1 - pencil.u1).norm(), 1e-10 * pencil.u1.norm());
  }
}

TEST(SolvePencil, ScalingTheSeriesScalesTheWeights) {
  std::mt19937_64 gen(9);
  const Complex alpha(-2.5, 1.5);
  for (std::size_t p = 1; p <= 4; ++p) {
    const Truth t = random_model(gen, p);
    std::vector<Complex> s = oracle::exponential_sum(t.weights, t.nodes, 0, 2 * p);
    const EigenSolution a = solve(s);
    for (Complex& x : s) x *= alpha;
    const EigenSolution b = solve(s);
    ASSERT_EQ(a.size(), b.size());
    const Truth scaled{[&] {
                         std::vector<Complex> w;
                         for (const auto& pr : a.pairs) w.push_back(alpha * pr.weight);
                         return w;
                       }(),
                       a.nodes()};
    EXPECT_LE(max_pair_error(scaled, b), 1e-10);
  }
}

TEST(SolvePencil, ShiftedSeriesHasSameNodes) {
  std::mt19937_64 gen(10);
  for (std::size_t p = 1; p <= 4; ++p) {
    const Truth t = random_model(gen, p);
    const std::size_t n = 2 * p + 2;
    const std::vector<Complex> s = oracle::exponential_sum(t.weights, t.nodes, 0, n + 1);
    const EigenSolution a = solve({s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n)});
    const EigenSolution b = solve({s.begin() + 1, s.end()});
    ASSERT_EQ(a.size(), p);
    ASSERT_EQ(b.size(), p);
    for (const auto& pr : a.pairs) {
      double best = INFINITY;
      for (const auto& q : b.pairs) best = std::min(best, std::abs(q.node - pr.node));
      EXPECT_LE(best, 1e-8);
    }
  }
}

TEST(SolvePencil, EigenvectorWeightsMatchVandermondeOracle) {
  std::mt19937_64 gen(12);
  const Truth t = random_model(gen, 4);
  const std::vector<Complex> s = oracle::exponential_sum(t.weights, t.nodes, 0, 8);
  const EigenSolution sol = solve(s);
  ASSERT_EQ(sol.size(), 4u);
  Eigen::MatrixXcd v(8, 4);
  Eigen::VectorXcd rhs(8);
  for (Eigen::Index k = 0; k < 8; ++k) {
    rhs(k) = s[static_cast<std::size_t>(k)];
    for (Eigen::Index j = 0; j < 4; ++j) v(k, j) = ceap::ipow(sol.pairs[static_cast<std::size_t>(j)].node, static_cast<std::size_t>(k));
  }
  const Eigen::VectorXcd w = v.colPivHouseholderQr().solve(rhs);
  for (Eigen::Index j = 0; j < 4; ++j)
    EXPECT_LE(std::abs(w(j) - sol.pairs[static_cast<std::size_t>(j)].weight), 1e-9 * std::abs(w(j)));
}

namespace {

EigenSolution with_weights(const std::vector<double>& mags) {
  EigenSolution sol;
  for (std::size_t j = 0; j < mags.size(); ++j) {
    sol.pairs.push_back({Complex(0.1 * static_cast<double>(j + 1), 0), Complex(mags[j], 0)});
    sol.quality.push_back(ceap::PairQuality::kEigenvector);
  }
  return sol;
}

}  // namespace

TEST(TruncateByWeight, KeepsLargestInDescendingOrder) {
  const EigenSolution t = ceap::truncate_by_weight(with_weights({3, 1, 2}), 2);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.pairs[0].weight, Complex(3));
  EXPECT_EQ(t.pairs[1].weight, Complex(2));
  EXPECT_EQ(t.quality.size(), 2u);
}

TEST(TruncateByWeight, FullCountKeepsEverything) {
  const EigenSolution t = ceap::truncate_by_weight(with_weights({3, 1, 2}), 3);
  ASSERT_EQ(t.size(), 3u);
  std::vector<double> mags;
  for (const auto& p : t.pairs) mags.push_back(std::abs(p.weight));
  EXPECT_EQ(mags, (std::vector<double>{3, 2, 1}));
}

TEST(TruncateByWeight, TieKeepsEarlierIndex) {
  const EigenSolution t = ceap::truncate_by_weight(with_weights({1, 1}), 1);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t.pairs[0].node, Complex(0.1));
}

TEST(TruncateByWeight, OversizedRequestReturnsAll) {
  EXPECT_EQ(ceap::truncate_by_weight(with_weights({1, 2}), 5).size(), 2u);
}
