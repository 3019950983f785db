#pragma once

#include "qbd2d/model.hpp"
#include "qbd2d/stability.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace qbd2d {

struct SimState {
  std::int64_t l1 = 0;
  std::int64_t l2 = 0;
  int phase = 0;

  bool operator==(const SimState&) const = default;
};

// full: the process itself. plus: both boundaries removed. axis1 / axis2:
// only the l1-axis (resp. l2-axis) boundary kept; the other coordinate is
// unbounded in both directions.
enum class Variant { Full, Plus, Axis1, Axis2 };

inline std::string to_string(Variant v) {
  switch (v) {
    case Variant::Full: return "full";
    case Variant::Plus: return "plus";
    case Variant::Axis1: return "axis1";
    case Variant::Axis2: return "axis2";
  }
  return "?";
}

inline Variant parse_variant(const std::string& s) {
  if (s == "full") return Variant::Full;
  if (s == "plus") return Variant::Plus;
  if (s == "axis1") return Variant::Axis1;
  if (s == "axis2") return Variant::Axis2;
  throw InvalidArgument("unknown variant '" + s + "' (expected full, plus, axis1 or axis2)");
}

inline Archetype archetype_for(Variant v, std::int64_t l1, std::int64_t l2) {
  const auto bucket = [](std::int64_t l) { return l <= 0 ? 0 : (l == 1 ? 1 : 2); };
  switch (v) {
    case Variant::Full: return archetype_at(l1, l2);
    case Variant::Plus: return Archetype::ManyMany;
    case Variant::Axis1: {
      constexpr Archetype by_l2[] = {Archetype::ManyZero, Archetype::ManyOne, Archetype::ManyMany};
      return by_l2[bucket(l2)];
    }
    case Variant::Axis2: {
      constexpr Archetype by_l1[] = {Archetype::ZeroMany, Archetype::OneMany, Archetype::ManyMany};
      return by_l1[bucket(l1)];
    }
  }
  return Archetype::ManyMany;
}

// Stream for trial `trial` of a run seeded with `seed`: mt19937_64 seeded by
// splitmix64(seed ^ trial * 0x9E3779B97F4A7C15).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(splitmix64(seed ^ (trial * 0x9E3779B97F4A7C15ULL)));
}

// Uniform on [0, 1) from the top 53 bits; identical on every platform.
inline double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Uniformized one-step kernel P = I + Q / nu, tabulated per archetype and
// phase as a cumulative distribution over (d1, d2, next phase).
class Simulator {
 public:
  explicit Simulator(const QbdModel& model) : model_(model) {
    double max_diag = 0.0;
    for (Region r : kRegions) {
      const Matrix& a = model.block(r, 0, 0);
      if (a.size() > 0) max_diag = std::max(max_diag, a.diagonal().cwiseAbs().maxCoeff());
    }
    nu_ = max_diag > 0.0 ? 1.05 * max_diag : 1.0;

    for (Archetype a : kArchetypes) {
      const auto [l1, l2] = representative(a);
      const int phases = model.layout().count(region_at(l1, l2));
      auto& rows = table_[static_cast<int>(a)];
      rows.resize(static_cast<std::size_t>(phases));
      for (int j = 0; j < phases; ++j) {
        Row& row = rows[static_cast<std::size_t>(j)];
        double total = 0.0;
        for (const OutgoingBlock& ob : outgoing_blocks(a)) {
          const Matrix& b = model.block(ob.key);
          for (Eigen::Index t = 0; t < b.cols(); ++t) {
            if (ob.d1 == 0 && ob.d2 == 0 && t == j) continue;
            const double p = b(j, t) / nu_;
            if (p <= 0.0) continue;
            total += p;
            row.cumulative.push_back(total);
            row.moves.push_back({ob.d1, ob.d2, static_cast<int>(t)});
          }
        }
        // Remaining mass is the self-loop.
        row.cumulative.push_back(std::max(total, 1.0));
        row.moves.push_back({0, 0, j});
      }
    }
  }

  double nu() const { return nu_; }
  const QbdModel& model() const { return model_; }

  int phase_count(Variant v, std::int64_t l1, std::int64_t l2) const {
    const auto [r1, r2] = representative(archetype_for(v, l1, l2));
    return model_.layout().count(region_at(r1, r2));
  }

  SimState step(const SimState& s, std::mt19937_64& rng, Variant v = Variant::Full) const {
    const Row& row = table_[static_cast<int>(archetype_for(v, s.l1, s.l2))][static_cast<std::size_t>(s.phase)];
    const double u = unit_draw(rng);
    const auto it = std::upper_bound(row.cumulative.begin(), row.cumulative.end(), u);
    const auto idx = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - row.cumulative.begin(),
                                                                       static_cast<std::ptrdiff_t>(row.moves.size()) - 1));
    const Move& m = row.moves[idx];
    return {s.l1 + m.d1, s.l2 + m.d2, m.phase};
  }

  void check_state(const SimState& s, Variant v) const {
    const bool l1_bounded = v == Variant::Full || v == Variant::Axis2;
    const bool l2_bounded = v == Variant::Full || v == Variant::Axis1;
    if ((l1_bounded && s.l1 < 0) || (l2_bounded && s.l2 < 0)) throw InvalidArgument("start level is negative");
    if (s.phase < 0 || s.phase >= phase_count(v, s.l1, s.l2))
      throw InvalidArgument("start phase " + std::to_string(s.phase) + " is out of range for its region");
  }

 private:
  struct Move {
    int d1;
    int d2;
    int phase;
  };
  struct Row {
    std::vector<double> cumulative;
    std::vector<Move> moves;
  };

  QbdModel model_;
  double nu_ = 1.0;
  std::array<std::vector<Row>, 9> table_;
};

inline SimState step(const Simulator& sim, const SimState& s, std::mt19937_64& rng) { return sim.step(s, rng); }

struct EmpiricalDrift {
  DriftVector mean;
  DriftVector std_error;
  std::int64_t k = 0;
  std::int64_t trials = 0;
  double nu = 1.0;
};

// Average of (L_k - L_0) / k over independent trials, in continuous-time
// units. Each trial first runs `burn_in` steps from `start`; L_0 is the level
// after burn-in, which removes the start-up bias in a reflected coordinate.
inline EmpiricalDrift empirical_drift(const Simulator& sim, const SimState& start, Variant variant, std::int64_t k,
                                      std::int64_t trials, std::uint64_t seed, std::int64_t burn_in = 0) {
  if (k < 1 || trials < 1) throw InvalidArgument("k and trials must be at least 1");
  if (burn_in < 0) throw InvalidArgument("burn-in must be nonnegative");
  sim.check_state(start, variant);

  std::array<double, 2> sum{0.0, 0.0}, sum_sq{0.0, 0.0};
  for (std::int64_t t = 0; t < trials; ++t) {
    auto rng = trial_rng(seed, static_cast<std::uint64_t>(t));
    SimState s = start;
    for (std::int64_t i = 0; i < burn_in; ++i) s = sim.step(s, rng, variant);
    const SimState s0 = s;
    for (std::int64_t i = 0; i < k; ++i) s = sim.step(s, rng, variant);
    const double g1 = static_cast<double>(s.l1 - s0.l1) / static_cast<double>(k);
    const double g2 = static_cast<double>(s.l2 - s0.l2) / static_cast<double>(k);
    sum[0] += g1;
    sum[1] += g2;
    sum_sq[0] += g1 * g1;
    sum_sq[1] += g2 * g2;
  }

  EmpiricalDrift out;
  out.k = k;
  out.trials = trials;
  out.nu = sim.nu();
  const double n = static_cast<double>(trials);
  std::array<double, 2> mean{}, se{};
  for (int c = 0; c < 2; ++c) {
    mean[c] = sum[c] / n;
    if (trials >= 2) {
      const double var = std::max(0.0, (sum_sq[c] - n * mean[c] * mean[c]) / (n - 1.0));
      se[c] = std::sqrt(var / n);
    }
  }
  out.mean = {mean[0] * sim.nu(), mean[1] * sim.nu()};
  out.std_error = {se[0] * sim.nu(), se[1] * sim.nu()};
  return out;
}

inline EmpiricalDrift empirical_drift(const QbdModel& model, const SimState& start, Variant variant, std::int64_t k,
                                      std::int64_t trials, std::uint64_t seed, std::int64_t burn_in = 0) {
  return empirical_drift(Simulator(model), start, variant, k, trials, seed, burn_in);
}

struct OccupancySummary {
  double mean_l1 = 0.0;
  double mean_l2 = 0.0;
  double origin_fraction = 0.0;
  // Means over the first and last tenth of the averaging window.
  double first_decile_l1 = 0.0;
  double first_decile_l2 = 0.0;
  double last_decile_l1 = 0.0;
  double last_decile_l2 = 0.0;
  std::int64_t steps = 0;  // number of averaged steps
};

// Time averages of the full process started at (0, 0, 0), over steps
// burn_in + 1 .. n.
inline OccupancySummary occupancy_probe(const QbdModel& model, std::int64_t n, std::int64_t burn_in,
                                        std::uint64_t seed) {
  if (burn_in < 0 || n <= burn_in) throw InvalidArgument("occupancy probe needs n > burn_in >= 0");
  const Simulator sim(model);
  auto rng = trial_rng(seed, 0);
  SimState s;
  for (std::int64_t i = 0; i < burn_in; ++i) s = sim.step(s, rng);

  const std::int64_t m = n - burn_in;
  const std::int64_t decile = std::max<std::int64_t>(1, m / 10);
  OccupancySummary out;
  out.steps = m;
  double s1 = 0, s2 = 0, f1 = 0, f2 = 0, e1 = 0, e2 = 0;
  std::int64_t at_origin = 0;
  for (std::int64_t i = 0; i < m; ++i) {
    s = sim.step(s, rng);
    const auto l1 = static_cast<double>(s.l1), l2 = static_cast<double>(s.l2);
    s1 += l1;
    s2 += l2;
    if (s.l1 == 0 && s.l2 == 0) ++at_origin;
    if (i < decile) {
      f1 += l1;
      f2 += l2;
    }
    if (i >= m - decile) {
      e1 += l1;
      e2 += l2;
    }
  }
  const auto md = static_cast<double>(m), dd = static_cast<double>(decile);
  out.mean_l1 = s1 / md;
  out.mean_l2 = s2 / md;
  out.origin_fraction = static_cast<double>(at_origin) / md;
  out.first_decile_l1 = f1 / dd;
  out.first_decile_l2 = f2 / dd;
  out.last_decile_l1 = e1 / dd;
  out.last_decile_l2 = e2 / dd;
  return out;
}

}  // namespace qbd2d
