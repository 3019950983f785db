#pragma once

#include "qbd2d/ctmc.hpp"
#include "qbd2d/model.hpp"
#include "qbd2d/qbd.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace qbd2d {

// Mean level change per unit time along (l1, l2).
struct DriftVector {
  double a1 = 0.0;
  double a2 = 0.0;

  double operator[](int axis) const { return axis == 1 ? a1 : a2; }
};

// Generator of the interior phase process: the sum of all nine A(+) blocks.
inline Matrix induced_plus(const QbdModel& model) {
  const auto s = model.layout().splus;
  Matrix g = Matrix::Zero(s, s);
  for (int k1 = -1; k1 <= 1; ++k1)
    for (int k2 = -1; k2 <= 1; ++k2) g += model.plus(k1, k2);
  return g;
}

inline RowVector plus_stationary(const QbdModel& model) {
  try {
    return stationary(induced_plus(model));
  } catch (const ClosedClassError& e) {
    throw AssumptionViolation(2, "interior phase chain of '" + model.name() + "' has " + std::to_string(e.count()) +
                                     " closed classes, exactly one is required");
  }
}

inline DriftVector drift_plus(const QbdModel& model) {
  const RowVector pi = plus_stationary(model);
  Matrix d1 = Matrix::Zero(pi.size(), pi.size()), d2 = d1;
  for (int k = -1; k <= 1; ++k) {
    d1 += model.plus(1, k) - model.plus(-1, k);
    d2 += model.plus(k, 1) - model.plus(k, -1);
  }
  return {(pi * d1).sum(), (pi * d2).sum()};
}

// The one-dimensional chain left after dropping the boundary of the other
// axis: axis 1 keeps the l1-axis boundary (level = l2), axis 2 keeps the
// l2-axis boundary (level = l1).
inline QbdSpec induced_axis(const QbdModel& model, int axis) {
  if (axis != 1 && axis != 2) throw InvalidArgument("axis must be 1 or 2");
  const Region edge = axis == 1 ? Region::Axis1 : Region::Axis2;
  // Sum over the free coordinate, keep the level step `k`.
  const auto sum_over_free = [&](Region r, int k) {
    Matrix m;
    for (int f = -1; f <= 1; ++f) {
      const Matrix& b = axis == 1 ? model.block(r, f, k) : model.block(r, k, f);
      m = f == -1 ? b : Matrix(m + b);
    }
    return m;
  };
  QbdSpec spec;
  spec.b0 = sum_over_free(edge, 0);
  spec.bup = sum_over_free(edge, 1);
  spec.bdown = sum_over_free(edge, -1);
  spec.adown = sum_over_free(Region::Interior, -1);
  spec.a0 = sum_over_free(Region::Interior, 0);
  spec.aup = sum_over_free(Region::Interior, 1);
  return spec;
}

inline constexpr int kDefaultTruncationLevels = 40;

enum class AxisChainClass { NoIrreducibleClass, OneIrreducibleClass, ViolatesAssumption3 };

inline std::string to_string(AxisChainClass c) {
  switch (c) {
    case AxisChainClass::NoIrreducibleClass: return "NoIrreducibleClass";
    case AxisChainClass::OneIrreducibleClass: return "OneIrreducibleClass";
    case AxisChainClass::ViolatesAssumption3: return "ViolatesAssumption3";
  }
  return "?";
}

// Closed-class analysis of the axis chain truncated at `levels` levels above
// the boundary. An irreducible class of the infinite chain meets level 0, so
// closed classes confined to the top of the truncation are artifacts of the
// cut and are ignored; a closed class clear of both ends is a finite
// irreducible class, which the model assumptions exclude.
inline AxisChainClass classify_axis_chain(const QbdModel& model, int axis, int levels = kDefaultTruncationLevels) {
  const QbdSpec spec = induced_axis(model, axis);
  const Matrix q = truncated_qbd_generator(spec, levels);
  const Eigen::Index boundary = spec.boundary_phases();
  const Eigen::Index top = boundary + spec.phases() * (levels - 1);

  int touching_boundary = 0;
  bool finite_class = false;
  for (const auto& cls : closed_classes(q)) {
    const bool at_boundary = cls.front() < boundary;
    const bool at_top = cls.back() >= top;
    if (at_boundary)
      ++touching_boundary;
    else if (!at_top)
      finite_class = true;
  }
  if (finite_class || touching_boundary > 1) return AxisChainClass::ViolatesAssumption3;
  return touching_boundary == 1 ? AxisChainClass::OneIrreducibleClass : AxisChainClass::NoIrreducibleClass;
}

enum class Sign { Negative, Zero, Positive };

// Sign with a dead band of +-eps after dividing by the model's largest rate.
inline Sign sign_of(double value, double scale, double eps) {
  const double x = value / (scale > 0.0 ? scale : 1.0);
  if (x < -eps) return Sign::Negative;
  if (x > eps) return Sign::Positive;
  return Sign::Zero;
}

struct AxisDrift {
  std::optional<DriftVector> drift;
  std::string reason;  // why the drift is absent
  std::optional<QbdSolution> solution;

  explicit operator bool() const { return drift.has_value(); }
};

inline constexpr double kDefaultZeroTolerance = 1e-9;

// Mean transition rate vector of the chain with only the `axis` boundary,
// evaluated at the stationary distribution of the induced axis chain.
inline AxisDrift drift_axis(const QbdModel& model, int axis, double eps = kDefaultZeroTolerance,
                            int truncation_levels = kDefaultTruncationLevels) {
  if (axis != 1 && axis != 2) throw InvalidArgument("axis must be 1 or 2");
  const DriftVector plus = drift_plus(model);
  const int other = 3 - axis;
  const double scale = model.max_rate();
  if (sign_of(plus[other], scale, eps) != Sign::Negative)
    return {std::nullopt,
            "a+_" + std::to_string(other) + " = " + std::to_string(plus[other]) + " is not negative, so the axis-" +
                std::to_string(axis) + " chain is not positive recurrent",
            std::nullopt};
  const AxisChainClass cls = classify_axis_chain(model, axis, truncation_levels);
  if (cls == AxisChainClass::ViolatesAssumption3)
    throw AssumptionViolation(3, "axis-" + std::to_string(axis) + " chain of '" + model.name() +
                                     "' has more than one irreducible class or a finite one");
  if (cls == AxisChainClass::NoIrreducibleClass)
    return {std::nullopt, "axis-" + std::to_string(axis) + " chain has no irreducible class", std::nullopt};

  const QbdSpec spec = induced_axis(model, axis);
  QbdSolution sol;
  try {
    sol = solve_qbd(spec);
  } catch (const NearCriticalError& e) {
    return {std::nullopt, std::string("axis chain is numerically critical: ") + e.what(), std::nullopt};
  }
  const RowVector& p0 = sol.pi0;
  const RowVector& p1 = sol.pi1;
  const RowVector tail = sol.tail_from_level2();
  const auto& P = [&](int k1, int k2) -> const Matrix& { return model.plus(k1, k2); };
  const auto rs = [](const Matrix& m) -> Vector { return m.rowwise().sum(); };

  DriftVector d;
  if (axis == 1) {
    const auto A = [&](int k1, int k2) -> const Matrix& { return model.block(Region::Axis1, k1, k2); };
    const Vector free_plus = rs(P(1, -1) + P(1, 0) + P(1, 1) - P(-1, -1) - P(-1, 0) - P(-1, 1));
    const Vector level_plus = rs(P(-1, 1) + P(0, 1) + P(1, 1) - P(-1, -1) - P(0, -1) - P(1, -1));
    d.a1 = p0.dot(rs(A(1, 0) - A(-1, 0)) + rs(A(1, 1) - A(-1, 1))) +
           p1.dot(rs(A(1, -1) - A(-1, -1)) + rs(P(1, 0) + P(1, 1) - P(-1, 0) - P(-1, 1))) + tail.dot(free_plus);
    d.a2 = p0.dot(rs(A(-1, 1) + A(0, 1) + A(1, 1))) +
           p1.dot(-rs(A(-1, -1) + A(0, -1) + A(1, -1)) + rs(P(-1, 1) + P(0, 1) + P(1, 1))) + tail.dot(level_plus);
  } else {
    const auto A = [&](int k1, int k2) -> const Matrix& { return model.block(Region::Axis2, k1, k2); };
    const Vector level_plus = rs(P(1, -1) + P(1, 0) + P(1, 1) - P(-1, -1) - P(-1, 0) - P(-1, 1));
    const Vector free_plus = rs(P(-1, 1) + P(0, 1) + P(1, 1) - P(-1, -1) - P(0, -1) - P(1, -1));
    d.a1 = p0.dot(rs(A(1, -1) + A(1, 0) + A(1, 1))) +
           p1.dot(-rs(A(-1, -1) + A(-1, 0) + A(-1, 1)) + rs(P(1, -1) + P(1, 0) + P(1, 1))) + tail.dot(level_plus);
    d.a2 = p0.dot(rs(A(0, 1) - A(0, -1)) + rs(A(1, 1) - A(1, -1))) +
           p1.dot(rs(A(-1, 1) - A(-1, -1)) + rs(P(0, 1) + P(1, 1) - P(0, -1) - P(1, -1))) + tail.dot(free_plus);
  }

  const double orthogonal = axis == 1 ? d.a2 : d.a1;
  if (std::abs(orthogonal) > 1e-8 * std::max(1.0, scale))
    throw InternalError("axis-" + std::to_string(axis) + " drift: level component " + std::to_string(orthogonal) +
                        " should vanish at stationarity");
  return {d, "", std::move(sol)};
}

enum class Verdict { PositiveRecurrent, Transient, Inconclusive };

// Which case of the stability theorem decided the verdict; the a-1 .. d tags
// are the excluded boundary cases, AxisDriftUndefined covers a required axis
// drift that could not be formed.
enum class CaseTag { I, II, III, IV, A1, A2, B, C, D, AxisDriftUndefined };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::PositiveRecurrent: return "PositiveRecurrent";
    case Verdict::Transient: return "Transient";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

inline std::string to_string(CaseTag t) {
  constexpr const char* names[] = {"i", "ii", "iii", "iv", "a-1", "a-2", "b", "c", "d", "axis-drift-undefined"};
  return names[static_cast<int>(t)];
}

struct Classification {
  Verdict verdict = Verdict::Inconclusive;
  CaseTag tag = CaseTag::D;
  DriftVector plus;
  std::optional<DriftVector> axis1;
  std::optional<DriftVector> axis2;
  std::string note;
};

inline Classification classify(const QbdModel& model, double eps = kDefaultZeroTolerance,
                               int truncation_levels = kDefaultTruncationLevels) {
  Classification c;
  c.plus = drift_plus(model);
  const double scale = model.max_rate();
  const Sign s1 = sign_of(c.plus.a1, scale, eps);
  const Sign s2 = sign_of(c.plus.a2, scale, eps);

  const auto done = [&](Verdict v, CaseTag t) {
    c.verdict = v;
    c.tag = t;
    return c;
  };
  const auto need = [&](int axis) -> std::optional<Sign> {
    AxisDrift d = drift_axis(model, axis, eps, truncation_levels);
    if (!d) {
      c.note = d.reason;
      return std::nullopt;
    }
    (axis == 1 ? c.axis1 : c.axis2) = d.drift;
    return sign_of(axis == 1 ? d.drift->a1 : d.drift->a2, scale, eps);
  };

  if (s1 == Sign::Zero && s2 == Sign::Zero) return done(Verdict::Inconclusive, CaseTag::D);
  if ((s1 == Sign::Positive && s2 != Sign::Negative) || (s2 == Sign::Positive && s1 != Sign::Negative))
    return done(Verdict::Transient, CaseTag::IV);

  if (s1 == Sign::Negative && s2 == Sign::Negative) {
    const auto a11 = need(1);
    const auto a22 = need(2);
    if (!a11 || !a22) return done(Verdict::Inconclusive, CaseTag::AxisDriftUndefined);
    if (*a11 == Sign::Negative && *a22 == Sign::Negative) return done(Verdict::PositiveRecurrent, CaseTag::I);
    if (*a11 == Sign::Positive || *a22 == Sign::Positive) return done(Verdict::Transient, CaseTag::I);
    return done(Verdict::Inconclusive, *a11 == Sign::Zero ? CaseTag::A1 : CaseTag::A2);
  }
  if (s2 == Sign::Negative) {  // a+_1 >= 0
    const auto a11 = need(1);
    if (!a11) return done(Verdict::Inconclusive, CaseTag::AxisDriftUndefined);
    if (*a11 == Sign::Negative) return done(Verdict::PositiveRecurrent, CaseTag::II);
    if (*a11 == Sign::Positive) return done(Verdict::Transient, CaseTag::II);
    return done(Verdict::Inconclusive, CaseTag::B);
  }
  // a+_1 < 0, a+_2 >= 0
  const auto a22 = need(2);
  if (!a22) return done(Verdict::Inconclusive, CaseTag::AxisDriftUndefined);
  if (*a22 == Sign::Negative) return done(Verdict::PositiveRecurrent, CaseTag::III);
  if (*a22 == Sign::Positive) return done(Verdict::Transient, CaseTag::III);
  return done(Verdict::Inconclusive, CaseTag::C);
}

}  // namespace qbd2d
