// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include "qbd2d/qbd2d.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace qbd2d;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct TableCase {
  const char* name;
  ModelFamily family;
  std::vector<double> grid;
  std::vector<double> lambda_star;
  std::vector<double> rho_star;
};

const TableCase& table1() {
  static const TableCase t{"priority-setup",
                           priority_setup_family(ScanAxis::L2, 0.1, 1, 1, 2, 2),
                           {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9},
                           {0.821, 0.678, 0.557, 0.453, 0.361, 0.278, 0.202, 0.131, 0.064},
                           {0.922, 0.878, 0.857, 0.853, 0.861, 0.878, 0.902, 0.931, 0.964}};
  return t;
}

const TableCase& table2() {
  static const TableCase t{"additional-server",
                           additional_server_family(ScanAxis::L2, 1.1, 1, 1),
                           {1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9},
                           {1.610, 1.550, 1.488, 1.424, 1.357, 1.289, 1.219, 1.147, 1.074},
                           {0.903, 0.917, 0.929, 0.941, 0.952, 0.963, 0.973, 0.982, 0.991}};
  return t;
}

Outcome check_table(const TableCase& t) {
  Outcome o;
  const auto t0 = Clock::now();
  const auto rows = table_sweep(t.family, t.grid);
  const double elapsed = seconds_since(t0);
  double worst_l = 0.0, worst_r = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].error) {
      o.pass = false;
      o.detail += " row " + std::to_string(t.grid[i]) + " failed: " + *rows[i].error + ";";
      continue;
    }
    worst_l = std::max(worst_l, std::abs(rows[i].lambda_star - t.lambda_star[i]));
    worst_r = std::max(worst_r, std::abs(rows[i].rho_star - t.rho_star[i]));
  }
  // Compare with a small slack for the decimal rounding of the printed values.
  if (!(worst_l <= 1e-3 + 1e-12) || !(worst_r <= 1e-3 + 1e-12) || elapsed >= 5.0) o.pass = false;
  char buf[160];
  std::snprintf(buf, sizeof buf, "max |dlambda*|=%.2e max |drho*|=%.2e time=%.2fs", worst_l, worst_r, elapsed);
  o.detail = buf + o.detail;
  return o;
}

struct Draw {
  double l1, l2, m1, m2, g1, g2;
};

std::vector<Draw> random_draws(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  std::vector<Draw> out;
  for (int i = 0; i < n; ++i) out.push_back({u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)});
  return out;
}

Outcome criterion3() {
  Outcome o;
  double worst = 0.0;
  for (const Draw& d : random_draws(3, 100)) {
    const DriftVector p = drift_plus(build_priority_setup(d.l1, d.l2, d.m1, d.m2, d.g1, d.g2));
    worst = std::max({worst, std::abs(p.a1 - (d.l1 - d.m1)), std::abs(p.a2 - d.l2)});
    const DriftVector a = drift_plus(build_additional_server(d.l1, d.l2, d.m1, d.m2));
    worst = std::max({worst, std::abs(a.a1 - (d.l1 - 2 * d.m1)), std::abs(a.a2 - (d.l2 - d.m2))});
  }
  // Machine precision relative to rates of order one.
  o.pass = worst <= 1e-13;
  char buf[96];
  std::snprintf(buf, sizeof buf, "max error=%.2e over 100 draws x 2 families", worst);
  o.detail = buf;
  return o;
}

// Rate-matrix residuals from every axis solve, collected for criterion 5.
std::vector<double> g_residuals;

void record_residual(const QbdModel& model, int axis, const AxisDrift& d) {
  if (!d.solution) return;
  const QbdSpec spec = induced_axis(model, axis);
  g_residuals.push_back(rate_matrix_residual(d.solution->r, spec.aup, spec.a0, spec.adown));
}

Outcome criterion4() {
  Outcome o;
  double worst = 0.0;
  int defined = 0, checked = 0;
  for (const Draw& d : random_draws(4, 100)) {
    for (const QbdModel& m : {build_priority_setup(d.l1, d.l2, d.m1, d.m2, d.g1, d.g2),
                              build_additional_server(d.l1, d.l2, d.m1, d.m2)}) {
      for (int axis : {1, 2}) {
        ++checked;
        AxisDrift a;
        try {
          a = drift_axis(m, axis);
        } catch (const Error& e) {
          o.pass = false;
          o.detail += std::string(" ") + m.name() + ": " + e.what() + ";";
          continue;
        }
        if (!a) continue;
        ++defined;
        record_residual(m, axis, a);
        worst = std::max(worst, std::abs((*a.drift)[3 - axis]));
      }
    }
  }
  if (!(worst <= 1e-8) || defined == 0) o.pass = false;
  char buf[128];
  std::snprintf(buf, sizeof buf, "max |orthogonal drift|=%.2e over %d defined of %d axis drifts", worst, defined,
                checked);
  o.detail = buf + o.detail;
  return o;
}

Outcome criterion5() {
  Outcome o;
  // Solved instances from both tables on the stable side of the boundary.
  for (const TableCase* t : {&table1(), &table2()}) {
    for (std::size_t i = 0; i < t->grid.size(); ++i) {
      for (double rate : {t->lambda_star[i] - 0.01, 0.5 * t->lambda_star[i]}) {
        const QbdModel m = t->family.with_fixed(t->grid[i]).at(rate);
        record_residual(m, 2, drift_axis(m, 2));
      }
    }
  }
  double worst = 0.0;
  for (double r : g_residuals) worst = std::max(worst, r);

  double mm1 = 0.0;
  for (auto [lambda, mu] : {std::pair{0.5, 1.0}, std::pair{0.3, 0.7}, std::pair{0.99, 1.0}}) {
    const Matrix up = Matrix::Constant(1, 1, lambda), a0 = Matrix::Constant(1, 1, -(lambda + mu)),
                 down = Matrix::Constant(1, 1, mu);
    const RateMatrix r = minimal_rate_matrix(up, a0, down);
    mm1 = std::max(mm1, std::abs(r.r(0, 0) - lambda / mu));
    worst = std::max(worst, rate_matrix_residual(r.r, up, a0, down));
  }
  o.pass = worst <= 1e-10 && mm1 <= 1e-12 && !g_residuals.empty();
  char buf[128];
  std::snprintf(buf, sizeof buf, "max residual=%.2e over %zu solves, M/M/1 |R - lambda/mu|=%.2e",
                worst, g_residuals.size() + 3, mm1);
  o.detail = buf;
  return o;
}

Outcome criterion6() {
  Outcome o;
  const QbdSpec spec = induced_axis(build_priority_setup(0.1, 0.5, 1, 1, 2, 2), 2);
  const QbdSolution sol = solve_qbd(spec);
  const RowVector dense = stationary(truncated_qbd_generator(spec, 60));
  const Eigen::Index sb = spec.boundary_phases(), s = spec.phases();
  double tv = (sol.pi0 - dense.head(sb)).cwiseAbs().sum();
  for (int l = 1; l <= 5; ++l) tv += (level_distribution(sol, l) - dense.segment(sb + (l - 1) * s, s)).cwiseAbs().sum();
  tv *= 0.5;
  o.pass = tv <= 1e-6;
  char buf[96];
  std::snprintf(buf, sizeof buf, "total variation on levels 0-5=%.2e", tv);
  o.detail = buf;
  return o;
}

struct SimCase {
  std::string label;
  QbdModel model;
  Variant variant;
  DriftVector expected;
};

bool within(const EmpiricalDrift& e, const DriftVector& expected) {
  for (int c = 1; c <= 2; ++c)
    if (std::abs(e.mean[c] - expected[c]) > 3.0 * e.std_error[c] + 1e-12) return false;
  return true;
}

Outcome criterion7() {
  Outcome o;
  const auto t0 = Clock::now();
  std::vector<SimCase> cases;
  const std::vector<std::pair<const char*, QbdModel>> points = {
      {"priority-setup(0.1,0.5)", build_priority_setup(0.1, 0.5, 1, 1, 2, 2)},
      {"priority-setup(0.4,0.3)", build_priority_setup(0.4, 0.3, 1, 1, 2, 2)},
      {"additional-server(1.5,0.8)", build_additional_server(1.5, 0.8, 1, 1)},
      {"additional-server(1.5,1.2)", build_additional_server(1.5, 1.2, 1, 1)},
  };
  for (const auto& [label, model] : points) {
    cases.push_back({std::string(label) + " plus", model, Variant::Plus, drift_plus(model)});
    for (int axis : {1, 2}) {
      const AxisDrift d = drift_axis(model, axis);
      if (!d) continue;
      cases.push_back({std::string(label) + " axis" + std::to_string(axis), model,
                       axis == 1 ? Variant::Axis1 : Variant::Axis2, *d.drift});
    }
  }

  constexpr std::int64_t k = 100000, trials = 200, burn_in = 20000;
  int axis_cases = 0, retries = 0;
  for (const SimCase& c : cases) {
    if (c.variant != Variant::Plus) ++axis_cases;
    const Simulator sim(c.model);
    bool ok = false;
    EmpiricalDrift e;
    for (std::uint64_t attempt = 0; attempt < 2 && !ok; ++attempt) {
      if (attempt > 0) ++retries;
      const std::int64_t burn = c.variant == Variant::Plus ? 0 : burn_in;
      e = empirical_drift(sim, SimState{0, 0, 0}, c.variant, k, trials, 1000 + attempt, burn);
      ok = within(e, c.expected);
    }
    if (!ok) {
      o.pass = false;
      char buf[256];
      std::snprintf(buf, sizeof buf, " %s: empirical (%.5f, %.5f) se (%.1e, %.1e) vs (%.5f, %.5f);", c.label.c_str(),
                    e.mean.a1, e.mean.a2, e.std_error.a1, e.std_error.a2, c.expected.a1, c.expected.a2);
      o.detail += buf;
    }
  }
  const double elapsed = seconds_since(t0);
  // Each family needs two points, each with a plus and an axis comparison.
  if (axis_cases < 4 || elapsed >= 60.0) o.pass = false;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu comparisons (%d axis), %d retries, time=%.1fs", cases.size(), axis_cases,
                retries, elapsed);
  o.detail = buf + o.detail;
  return o;
}

Outcome criterion8() {
  Outcome o;
  int checked = 0;
  for (const TableCase* t : {&table1(), &table2()}) {
    for (std::size_t i = 0; i < t->grid.size(); ++i) {
      const ModelFamily f = t->family.with_fixed(t->grid[i]);
      const Verdict below = classify(f.at(t->lambda_star[i] - 0.01)).verdict;
      const Verdict above = classify(f.at(t->lambda_star[i] + 0.01)).verdict;
      checked += 2;
      if (below != Verdict::PositiveRecurrent || above != Verdict::Transient) {
        o.pass = false;
        o.detail += std::string(" ") + t->name + " lambda1=" + std::to_string(t->grid[i]) + ": " + to_string(below) +
                    " / " + to_string(above) + ";";
      }
    }
  }
  o.detail = std::to_string(checked) + " classifications" + o.detail;
  return o;
}

Outcome criterion9() {
  Outcome o;
  // Interior phase chain split into two closed classes.
  auto blocks = build_additional_server(1.5, 1.0, 1, 1).blocks();
  blocks[BlockKey{Region::Interior, 0, -1}.index()] << 1, 0, 0, 2;
  const QbdModel split("two-class", build_additional_server(1.5, 1.0, 1, 1).layout(), blocks);
  bool rejected = false;
  try {
    drift_plus(split);
  } catch (const AssumptionViolation& e) {
    rejected = e.assumption() == 2;
  }
  if (!rejected) {
    o.pass = false;
    o.detail += " two-closed-class model not rejected with an Assumption 2 error;";
  }

  const QbdModel ps = build_priority_setup(0.1, 0.5, 1, 1, 2, 2);
  const AxisChainClass cls = classify_axis_chain(ps, 1);
  const AxisDrift d = drift_axis(ps, 1);
  if (cls != AxisChainClass::NoIrreducibleClass) {
    o.pass = false;
    o.detail += " priority-setup axis 1 classified as " + to_string(cls) + ";";
  }
  if (d) {
    o.pass = false;
    o.detail += " priority-setup axis-1 drift unexpectedly present;";
  }
  o.detail = "assumption-2 rejection, axis-1 " + to_string(cls) + ", drift " + (d ? "present" : "absent") + o.detail;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"Table 1 reproduction", [] { return check_table(table1()); }},
      {"Table 2 reproduction", [] { return check_table(table2()); }},
      {"exact boundary-free drift", criterion3},
      {"consistency identity", criterion4},
      {"rate-matrix residual", criterion5},
      {"truncation oracle", criterion6},
      {"simulation agreement", criterion7},
      {"classification boundary", criterion8},
      {"assumption violations", criterion9},
  };
  int failures = 0;
  int n = 0;
  for (const auto& [name, run] : criteria) {
    ++n;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
