#pragma once

#include "qbd2d/builders.hpp"
#include "qbd2d/stability.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qbd2d {

enum class ScanAxis { L1 = 1, L2 = 2 };

// A two-queue model with one arrival rate scanned and everything else held
// fixed. `make(lambda1, lambda2)` builds the model at a parameter point.
struct ModelFamily {
  std::string name;
  std::function<QbdModel(double, double)> make;
  ScanAxis scan = ScanAxis::L2;
  double fixed = 0.0;  // the arrival rate that is not scanned
  double h1 = 1.0;     // mean service times
  double h2 = 1.0;
  int servers = 1;
  std::vector<std::pair<std::string, double>> params;  // for records

  double lambda1(double scanned) const { return scan == ScanAxis::L1 ? scanned : fixed; }
  double lambda2(double scanned) const { return scan == ScanAxis::L2 ? scanned : fixed; }
  QbdModel at(double scanned) const { return make(lambda1(scanned), lambda2(scanned)); }

  double traffic_intensity(double scanned) const {
    return (lambda1(scanned) * h1 + lambda2(scanned) * h2) / servers;
  }

  // Scanned rate at which the traffic intensity reaches 1.
  double stability_bound() const {
    const double h_fixed = scan == ScanAxis::L1 ? h2 : h1;
    const double h_scan = scan == ScanAxis::L1 ? h1 : h2;
    return (servers - fixed * h_fixed) / h_scan;
  }

  std::pair<double, double> default_bracket() const {
    const double hi = stability_bound() - 1e-4;
    if (!(hi > 1e-4)) throw InvalidArgument(name + ": fixed rate " + std::to_string(fixed) + " leaves no room to scan");
    return {1e-4, hi};
  }

  ModelFamily with_fixed(double value) const {
    ModelFamily f = *this;
    f.fixed = value;
    return f;
  }
};

namespace detail {
inline ModelFamily family_base(std::string name, ScanAxis scan, double fixed) {
  ModelFamily f;
  f.name = std::move(name);
  f.scan = scan;
  f.fixed = fixed;
  return f;
}
}  // namespace detail

inline ModelFamily priority_setup_family(ScanAxis scan, double fixed, double mu1 = 1.0, double mu2 = 1.0,
                                         double gamma1 = 2.0, double gamma2 = 2.0) {
  auto f = detail::family_base("priority-setup", scan, fixed);
  f.make = [=](double l1, double l2) { return build_priority_setup(l1, l2, mu1, mu2, gamma1, gamma2); };
  f.h1 = 1.0 / mu1;
  f.h2 = 1.0 / mu2;
  f.servers = 1;
  f.params = {{"mu1", mu1}, {"mu2", mu2}, {"g1", gamma1}, {"g2", gamma2}};
  return f;
}

// Priority-setup with Poisson arrivals and Erlang service and setup times of
// `stages` stages, keeping the means 1/mu and 1/gamma.
inline ModelFamily priority_setup_mapph_family(ScanAxis scan, double fixed, double mu1 = 1.0, double mu2 = 1.0,
                                               double gamma1 = 2.0, double gamma2 = 2.0, int stages = 2) {
  auto f = detail::family_base("priority-setup-mapph", scan, fixed);
  f.make = [=](double l1, double l2) {
    return build_priority_setup_mapph(poisson_map(l1), poisson_map(l2), erlang_ph(stages, mu1),
                                      erlang_ph(stages, mu2), erlang_ph(stages, gamma1), erlang_ph(stages, gamma2));
  };
  f.h1 = 1.0 / mu1;
  f.h2 = 1.0 / mu2;
  f.servers = 1;
  f.params = {{"mu1", mu1}, {"mu2", mu2}, {"g1", gamma1}, {"g2", gamma2}, {"erlang", double(stages)}};
  return f;
}

inline ModelFamily additional_server_family(ScanAxis scan, double fixed, double mu1 = 1.0, double mu2 = 1.0) {
  auto f = detail::family_base("additional-server", scan, fixed);
  f.make = [=](double l1, double l2) { return build_additional_server(l1, l2, mu1, mu2); };
  f.h1 = 1.0 / mu1;
  f.h2 = 1.0 / mu2;
  f.servers = 3;
  f.params = {{"mu1", mu1}, {"mu2", mu2}};
  return f;
}

inline ModelFamily independent_pair_family(ScanAxis scan, double fixed, double mu1 = 1.0, double mu2 = 1.0) {
  auto f = detail::family_base("independent-pair", scan, fixed);
  f.make = [=](double l1, double l2) { return build_independent_pair(l1, l2, mu1, mu2); };
  f.h1 = 1.0 / mu1;
  f.h2 = 1.0 / mu2;
  f.servers = 2;
  f.params = {{"mu1", mu1}, {"mu2", mu2}};
  return f;
}

// The drift coordinate that decides stability along the scan: a(2)_2 when
// lambda2 is scanned, a(1)_1 when lambda1 is scanned.
inline double drift_of_lambda(const ModelFamily& family, double lambda, double eps = kDefaultZeroTolerance) {
  const int axis = family.scan == ScanAxis::L2 ? 2 : 1;
  const AxisDrift d = drift_axis(family.at(lambda), axis, eps);
  if (!d)
    throw DriftUndefined(family.name + " at scanned rate " + std::to_string(lambda) + ": axis-" +
                         std::to_string(axis) + " drift undefined (" + d.reason + ")");
  return (*d.drift)[axis];
}

struct EfficiencyResult {
  double fixed_rate = 0.0;
  double lambda_star = 0.0;
  double rho_star = 0.0;
  std::pair<double, double> throughput{0.0, 0.0};
  double drift_at_root = 0.0;
  std::optional<std::string> error;  // set by table_sweep when the point failed
};

inline constexpr double kDefaultBisectionTolerance = 1e-8;

inline EfficiencyResult find_lambda_star(const ModelFamily& family, std::optional<std::pair<double, double>> bracket,
                                         double tol = kDefaultBisectionTolerance) {
  if (!(tol > 0.0)) throw InvalidArgument("bisection tolerance must be positive");
  auto [lo, hi] = bracket ? *bracket : family.default_bracket();
  if (!(lo < hi)) throw InvalidArgument("bracket must satisfy lo < hi");

  double f_lo = drift_of_lambda(family, lo);
  const double f_hi = drift_of_lambda(family, hi);
  double root = 0.0, f_root = 0.0;
  if (f_lo == 0.0) {
    root = lo;
  } else if (f_hi == 0.0) {
    root = hi;
  } else {
    if ((f_lo < 0.0) == (f_hi < 0.0))
      throw InvalidArgument(family.name + ": drift has the same sign at both ends of [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      const double f_mid = drift_of_lambda(family, mid);
      if (f_mid == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((f_mid < 0.0) == (f_lo < 0.0)) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
    }
    root = 0.5 * (lo + hi);
  }
  f_root = drift_of_lambda(family, root);

  EfficiencyResult out;
  out.fixed_rate = family.fixed;
  out.lambda_star = root;
  out.rho_star = family.traffic_intensity(root);
  out.throughput = {family.lambda1(root), family.lambda2(root)};
  out.drift_at_root = f_root;
  return out;
}

// One result per fixed rate, in grid order. A failing point keeps its row
// with the error message set.
inline std::vector<EfficiencyResult> table_sweep(const ModelFamily& family, const std::vector<double>& grid,
                                                 std::optional<std::pair<double, double>> bracket = std::nullopt,
                                                 double tol = kDefaultBisectionTolerance) {
  std::vector<EfficiencyResult> rows;
  rows.reserve(grid.size());
  for (double fixed : grid) {
    try {
      rows.push_back(find_lambda_star(family.with_fixed(fixed), bracket, tol));
    } catch (const Error& e) {
      EfficiencyResult r;
      r.fixed_rate = fixed;
      r.lambda_star = r.rho_star = r.drift_at_root = std::nan("");
      r.throughput = {std::nan(""), std::nan("")};
      r.error = e.what();
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

// lo, lo+step, ..., up to hi inclusive. Points are rounded to 12 decimals so
// that 0.1:0.9:0.1 yields the decimal values one would type.
inline std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw InvalidArgument("grid step must be positive");
  if (hi < lo) throw InvalidArgument("grid upper end is below the lower end");
  std::vector<double> grid;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) grid.push_back(std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12);
  return grid;
}

}  // namespace qbd2d
