#include "qbd2d/efficiency.hpp"

#include <gtest/gtest.h>

using namespace qbd2d;

TEST(DriftOfLambda, PrioritySetup) {
  const ModelFamily f = priority_setup_family(ScanAxis::L2, 0.1);
  EXPECT_LT(std::abs(drift_of_lambda(f, 0.821)), 1e-3);
  EXPECT_LT(drift_of_lambda(f, 0.1), 0.0);
  EXPECT_GT(drift_of_lambda(f, 0.85), 0.0);
}

TEST(DriftOfLambda, IndependentPairIsLinear) {
  const ModelFamily f = independent_pair_family(ScanAxis::L2, 0.4, 1.0, 1.0);
  for (double l : {0.2, 0.9, 1.3}) EXPECT_NEAR(drift_of_lambda(f, l), l - 1.0, 1e-12);
  const ModelFamily g = independent_pair_family(ScanAxis::L1, 0.4, 1.0, 1.0);
  EXPECT_NEAR(drift_of_lambda(g, 0.7), -0.3, 1e-12);
}

TEST(DriftOfLambda, UndefinedDriftIsAnError) {
  // Scanning lambda1 needs the axis-1 drift, which priority-setup never has.
  const ModelFamily f = priority_setup_family(ScanAxis::L1, 0.3);
  EXPECT_THROW(drift_of_lambda(f, 0.2), DriftUndefined);
}

TEST(FindLambdaStar, PrioritySetupTableColumn) {
  const EfficiencyResult r = find_lambda_star(priority_setup_family(ScanAxis::L2, 0.4), std::nullopt);
  EXPECT_NEAR(r.lambda_star, 0.453, 1e-3);
  EXPECT_NEAR(r.rho_star, 0.853, 1e-3);
  EXPECT_DOUBLE_EQ(r.rho_star, 0.4 + r.lambda_star);
  EXPECT_EQ(r.throughput.first, 0.4);
  EXPECT_EQ(r.throughput.second, r.lambda_star);
  EXPECT_LE(std::abs(r.drift_at_root), 1e-7);
}

TEST(FindLambdaStar, AdditionalServerTableColumn) {
  const EfficiencyResult r = find_lambda_star(additional_server_family(ScanAxis::L2, 1.9), std::nullopt);
  EXPECT_NEAR(r.lambda_star, 1.074, 1e-3);
  EXPECT_NEAR(r.rho_star, 0.991, 1e-3);
}

TEST(FindLambdaStar, IndependentPairRootIsServiceRate) {
  for (auto bracket : {std::pair{0.5, 1.5}, std::pair{0.01, 1.2}}) {
    const EfficiencyResult r = find_lambda_star(independent_pair_family(ScanAxis::L2, 0.3), bracket, 1e-10);
    EXPECT_NEAR(r.lambda_star, 1.0, 1e-9);
  }
}

TEST(FindLambdaStar, BracketErrors) {
  const ModelFamily f = independent_pair_family(ScanAxis::L2, 0.3);
  EXPECT_THROW(find_lambda_star(f, std::pair{0.1, 0.5}), InvalidArgument);
  EXPECT_THROW(find_lambda_star(f, std::pair{0.5, 0.1}), InvalidArgument);
  EXPECT_THROW(find_lambda_star(f, std::pair{0.1, 1.5}, 0.0), InvalidArgument);
}

TEST(FindLambdaStar, ClassificationFlipsAcrossRoot) {
  const ModelFamily f = priority_setup_family(ScanAxis::L2, 0.4);
  const double root = find_lambda_star(f, std::nullopt).lambda_star;
  EXPECT_EQ(classify(f.at(root - 0.01)).verdict, Verdict::PositiveRecurrent);
  EXPECT_EQ(classify(f.at(root + 0.01)).verdict, Verdict::Transient);
}

TEST(TableSweep, EmptyGrid) { EXPECT_TRUE(table_sweep(priority_setup_family(ScanAxis::L2, 0), {}).empty()); }

TEST(TableSweep, RowsInGridOrderAndErrorsKept) {
  const auto rows = table_sweep(priority_setup_family(ScanAxis::L2, 0), {0.7, 1.5, 0.2});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].fixed_rate, 0.7);
  EXPECT_NEAR(rows[0].lambda_star, 0.202, 1e-3);
  EXPECT_TRUE(rows[1].error.has_value());
  EXPECT_TRUE(std::isnan(rows[1].lambda_star));
  EXPECT_FALSE(rows[2].error.has_value());
  EXPECT_NEAR(rows[2].lambda_star, 0.678, 1e-3);
}

TEST(TableSweep, RhoCrossFoots) {
  const auto rows = table_sweep(priority_setup_family(ScanAxis::L2, 0, 1.0, 1.0), make_grid(0.1, 0.9, 0.1));
  for (const auto& r : rows) EXPECT_DOUBLE_EQ(r.rho_star, r.fixed_rate / 1.0 + r.lambda_star / 1.0);
}

TEST(MakeGrid, DecimalPoints) {
  const auto g = make_grid(0.1, 0.9, 0.1);
  ASSERT_EQ(g.size(), 9u);
  for (int i = 0; i < 9; ++i) EXPECT_EQ(g[i], (i + 1) / 10.0);
  EXPECT_EQ(make_grid(1.1, 1.9, 0.1).size(), 9u);
  EXPECT_EQ(make_grid(0.5, 0.5, 0.1).size(), 1u);
  EXPECT_THROW(make_grid(0, 1, 0), InvalidArgument);
}

TEST(ModelFamily, StabilityBound) {
  EXPECT_DOUBLE_EQ(priority_setup_family(ScanAxis::L2, 0.1).stability_bound(), 0.9);
  EXPECT_DOUBLE_EQ(additional_server_family(ScanAxis::L2, 1.5).stability_bound(), 1.5);
  EXPECT_DOUBLE_EQ(priority_setup_family(ScanAxis::L2, 0.1, 2.0, 4.0).stability_bound(), 3.8);
}
