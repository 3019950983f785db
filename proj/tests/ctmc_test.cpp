#include "qbd2d/ctmc.hpp"

#include "test_util.hpp"

#include <Eigen/SVD>
#include <gtest/gtest.h>

using namespace qbd2d;

namespace {

// A(+)_{*,*} of the priority-setup model at mu1 = mu2 = 1, gamma1 = gamma2 = 2.
Matrix priority_setup_plus() {
  Matrix g(4, 4);
  g << 0, 0, 0, 0,   //
      2, -2, 0, 0,   //
      0, 1, -1, 0,   //
      0, 0, 2, -2;
  return g;
}

}  // namespace

TEST(ClosedClasses, PrioritySetupInteriorHasOnlyServeOne) {
  const auto classes = closed_classes(priority_setup_plus());
  ASSERT_EQ(classes.size(), 1u);
  EXPECT_EQ(classes[0], (StateSet{0}));
}

TEST(ClosedClasses, ZeroGeneratorHasOneClassPerState) {
  const auto classes = closed_classes(Matrix::Zero(2, 2));
  ASSERT_EQ(classes.size(), 2u);
  EXPECT_EQ(classes[0], (StateSet{0}));
  EXPECT_EQ(classes[1], (StateSet{1}));
}

TEST(ClosedClasses, AdditionalServerInterior) {
  Matrix g(2, 2);
  g << 0, 0, 1, -1;
  const auto classes = closed_classes(g);
  ASSERT_EQ(classes.size(), 1u);
  EXPECT_EQ(classes[0], (StateSet{0}));
}

TEST(ClosedClasses, EveryClassIsClosedUnderTransitions) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix g = Matrix::Zero(8, 8);
    std::bernoulli_distribution edge(0.2);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        if (i != j && edge(rng)) g(i, j) = 1.0;
    for (int i = 0; i < 8; ++i) g(i, i) = -g.row(i).sum();
    for (const auto& cls : closed_classes(g))
      for (auto i : cls)
        for (int j = 0; j < 8; ++j)
          if (g(i, j) > 0 && i != j) EXPECT_NE(std::find(cls.begin(), cls.end(), j), cls.end());
  }
}

TEST(Stationary, PrioritySetupInterior) {
  const RowVector pi = stationary(priority_setup_plus());
  RowVector expected(4);
  expected << 1, 0, 0, 0;
  EXPECT_EQ(pi, expected);
}

TEST(Stationary, SingleState) { EXPECT_EQ(stationary(Matrix::Zero(1, 1)), RowVector::Ones(1)); }

TEST(Stationary, TwoStateBalance) {
  const double a = 0.3, b = 1.7;
  Matrix g(2, 2);
  g << -a, a, b, -b;
  const RowVector pi = stationary(g);
  EXPECT_NEAR(pi(0), b / (a + b), 1e-15);
  EXPECT_NEAR(pi(1), a / (a + b), 1e-15);
}

TEST(Stationary, TwoClosedClassesIsAnError) {
  try {
    stationary(Matrix::Zero(2, 2));
    FAIL();
  } catch (const ClosedClassError& e) {
    EXPECT_EQ(e.count(), 2u);
  }
}

TEST(Stationary, RandomIrreducibleMatchesNullSpace) {
  std::mt19937_64 rng(5);
  for (int n : {2, 3, 5, 8, 20, 50}) {
    const Matrix g = test::random_irreducible_generator(rng, n);
    const RowVector pi = stationary(g);
    EXPECT_NEAR(pi.sum(), 1.0, 1e-12);
    const double gnorm = g.cwiseAbs().rowwise().sum().maxCoeff();
    EXPECT_LE((pi * g).cwiseAbs().maxCoeff(), 1e-12 * gnorm);

    Eigen::JacobiSVD<Matrix> svd(g.transpose(), Eigen::ComputeFullV);
    Vector null = svd.matrixV().col(n - 1);
    null /= null.sum();
    EXPECT_LE((pi.transpose() - null).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Uniformize, AbsorbingState) { EXPECT_EQ(uniformize(Matrix::Zero(1, 1), 1.0), Matrix::Ones(1, 1)); }

TEST(Uniformize, TwoState) {
  Matrix g(2, 2);
  g << -1, 1, 1, -1;
  EXPECT_TRUE(uniformize(g, 2.0).isApprox(Matrix::Constant(2, 2, 0.5)));
}

TEST(Uniformize, StochasticAndPreservesStationarity) {
  std::mt19937_64 rng(9);
  const Matrix g = test::random_irreducible_generator(rng, 6);
  const Matrix p = uniformize(g);
  EXPECT_LE((p.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-14);
  EXPECT_GE(p.minCoeff(), 0.0);
  EXPECT_LE(p.maxCoeff(), 1.0);
  const RowVector pi = stationary(g);
  EXPECT_LE((pi * p - pi).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Uniformize, RateBelowBoundIsRejected) {
  Matrix g(2, 2);
  g << -3, 3, 1, -1;
  EXPECT_THROW(uniformize(g, 2.0), InvalidArgument);
}
