#pragma once

#include "qbd2d/ctmc.hpp"
#include "qbd2d/types.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qbd2d {

// Where a state lives: the origin, the l1-axis (l2 = 0), the l2-axis (l1 = 0)
// or the interior.
enum class Region : int { Origin = 0, Axis1 = 1, Axis2 = 2, Interior = 3 };

inline constexpr std::array<Region, 4> kRegions{Region::Origin, Region::Axis1, Region::Axis2, Region::Interior};

inline char region_symbol(Region r) {
  constexpr char symbols[] = {'0', '1', '2', '+'};
  return symbols[static_cast<int>(r)];
}

inline constexpr Region region_at(std::int64_t l1, std::int64_t l2) {
  if (l1 == 0 && l2 == 0) return Region::Origin;
  if (l2 == 0) return Region::Axis1;
  if (l1 == 0) return Region::Axis2;
  return Region::Interior;
}

struct PhaseLayout {
  int s0 = 1;
  int s1 = 1;
  int s2 = 1;
  int splus = 1;

  int count(Region r) const {
    switch (r) {
      case Region::Origin: return s0;
      case Region::Axis1: return s1;
      case Region::Axis2: return s2;
      case Region::Interior: return splus;
    }
    return 0;
  }

  void check() const {
    if (s0 < 1 || s1 < 1 || s2 < 1 || splus < 1)
      throw InvalidArgument("phase layout: every phase count must be at least 1");
  }

  friend bool operator==(const PhaseLayout&, const PhaseLayout&) = default;
};

inline constexpr int kBlockCount = 36;

// Identifies one of the 36 matrices A^(region)_{k1,k2}, k1, k2 in {-1, 0, 1}.
struct BlockKey {
  Region region = Region::Interior;
  int k1 = 0;
  int k2 = 0;

  constexpr bool valid() const { return k1 >= -1 && k1 <= 1 && k2 >= -1 && k2 <= 1; }
  constexpr int index() const { return static_cast<int>(region) * 9 + (k1 + 1) * 3 + (k2 + 1); }

  static constexpr BlockKey from_index(int i) {
    return BlockKey{static_cast<Region>(i / 9), (i % 9) / 3 - 1, i % 3 - 1};
  }

  // "<region>:<k1>,<k2>", e.g. "+:-1,0".
  std::string to_string() const {
    return std::string(1, region_symbol(region)) + ":" + std::to_string(k1) + "," + std::to_string(k2);
  }

  static BlockKey parse(const std::string& text) {
    const auto colon = text.find(':');
    const auto comma = text.find(',');
    if (colon != 1 || comma == std::string::npos || comma < colon)
      throw InvalidArgument("malformed block key '" + text + "'");
    BlockKey key;
    switch (text[0]) {
      case '0': key.region = Region::Origin; break;
      case '1': key.region = Region::Axis1; break;
      case '2': key.region = Region::Axis2; break;
      case '+': key.region = Region::Interior; break;
      default: throw InvalidArgument("malformed block key '" + text + "': unknown region");
    }
    try {
      std::size_t used1 = 0, used2 = 0;
      const std::string a = text.substr(colon + 1, comma - colon - 1);
      const std::string b = text.substr(comma + 1);
      key.k1 = std::stoi(a, &used1);
      key.k2 = std::stoi(b, &used2);
      if (used1 != a.size() || used2 != b.size()) throw InvalidArgument("trailing characters");
    } catch (const std::exception&) {
      throw InvalidArgument("malformed block key '" + text + "'");
    }
    if (!key.valid()) throw InvalidArgument("block key '" + text + "' out of range");
    return key;
  }

  friend constexpr bool operator==(const BlockKey&, const BlockKey&) = default;
};

// Which block governs the transition (l1, l2) -> (l1 + d1, l2 + d2), or none
// when the destination leaves the quarter plane.
inline constexpr std::optional<BlockKey> block_for(std::int64_t l1, std::int64_t l2, int d1, int d2) {
  const std::int64_t m1 = l1 + d1;
  const std::int64_t m2 = l2 + d2;
  if (l1 < 0 || l2 < 0 || m1 < 0 || m2 < 0 || d1 < -1 || d1 > 1 || d2 < -1 || d2 > 1) return std::nullopt;
  Region r = Region::Interior;
  if ((l1 == 0 && l2 == 0) || (m1 == 0 && m2 == 0) || (l1 == 1 && l2 == 0 && d1 == -1 && d2 == 1) ||
      (l1 == 0 && l2 == 1 && d1 == 1 && d2 == -1))
    r = Region::Origin;
  else if (l2 == 0 || (l2 == 1 && d2 == -1))
    r = Region::Axis1;
  else if (l1 == 0 || (l1 == 1 && d1 == -1))
    r = Region::Axis2;
  return BlockKey{r, d1, d2};
}

// Source and destination regions of a block.
inline std::pair<Region, Region> block_regions(BlockKey key) {
  if (!key.valid()) throw InvalidArgument("invalid block key");
  for (std::int64_t l1 = 0; l1 <= 2; ++l1)
    for (std::int64_t l2 = 0; l2 <= 2; ++l2) {
      const auto k = block_for(l1, l2, key.k1, key.k2);
      if (k && *k == key) return {region_at(l1, l2), region_at(l1 + key.k1, l2 + key.k2)};
    }
  throw InternalError("block " + key.to_string() + " is never used");
}

inline std::pair<Eigen::Index, Eigen::Index> block_shape(BlockKey key, const PhaseLayout& layout) {
  const auto [from, to] = block_regions(key);
  return {layout.count(from), layout.count(to)};
}

// The nine position classes; each one fixes the set of outgoing blocks.
enum class Archetype : int { Origin, OneZero, ManyZero, ZeroOne, ZeroMany, OneOne, OneMany, ManyOne, ManyMany };

inline constexpr std::array<Archetype, 9> kArchetypes{Archetype::Origin,   Archetype::OneZero, Archetype::ManyZero,
                                                     Archetype::ZeroOne,  Archetype::ZeroMany, Archetype::OneOne,
                                                     Archetype::OneMany,  Archetype::ManyOne, Archetype::ManyMany};

inline constexpr std::pair<std::int64_t, std::int64_t> representative(Archetype a) {
  constexpr std::pair<std::int64_t, std::int64_t> reps[] = {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {0, 2},
                                                            {1, 1}, {1, 2}, {2, 1}, {2, 2}};
  return reps[static_cast<int>(a)];
}

inline constexpr Archetype archetype_at(std::int64_t l1, std::int64_t l2) {
  const int c1 = l1 >= 2 ? 2 : static_cast<int>(l1);
  const int c2 = l2 >= 2 ? 2 : static_cast<int>(l2);
  constexpr Archetype table[3][3] = {{Archetype::Origin, Archetype::ZeroOne, Archetype::ZeroMany},
                                     {Archetype::OneZero, Archetype::OneOne, Archetype::OneMany},
                                     {Archetype::ManyZero, Archetype::ManyOne, Archetype::ManyMany}};
  return table[c1][c2];
}

inline std::string to_string(Archetype a) {
  constexpr const char* names[] = {"(0,0)",      "(1,0)",      "(l1>=2,0)",      "(0,1)",         "(0,l2>=2)",
                                   "(1,1)",      "(1,l2>=2)",  "(l1>=2,1)",      "(l1>=2,l2>=2)"};
  return names[static_cast<int>(a)];
}

struct OutgoingBlock {
  int d1;
  int d2;
  BlockKey key;
};

inline std::vector<OutgoingBlock> outgoing_blocks(Archetype a) {
  const auto [l1, l2] = representative(a);
  std::vector<OutgoingBlock> out;
  for (int d1 = -1; d1 <= 1; ++d1)
    for (int d2 = -1; d2 <= 1; ++d2)
      if (auto key = block_for(l1, l2, d1, d2)) out.push_back({d1, d2, *key});
  return out;
}

// A 2d-QBD process: phase counts plus the 36 dense block matrices. Immutable.
class QbdModel {
 public:
  using Blocks = std::array<Matrix, kBlockCount>;

  QbdModel(std::string name, PhaseLayout layout, Blocks blocks)
      : name_(std::move(name)), layout_(layout), blocks_(std::move(blocks)) {
    layout_.check();
    for (int i = 0; i < kBlockCount; ++i) {
      const BlockKey key = BlockKey::from_index(i);
      const auto [rows, cols] = block_shape(key, layout_);
      if (blocks_[i].rows() != rows || blocks_[i].cols() != cols)
        throw InvalidArgument("block " + key.to_string() + " has shape " + std::to_string(blocks_[i].rows()) + "x" +
                              std::to_string(blocks_[i].cols()) + ", expected " + std::to_string(rows) + "x" +
                              std::to_string(cols));
      if (!blocks_[i].allFinite()) throw InvalidArgument("block " + key.to_string() + " has non-finite entries");
    }
  }

  static Blocks zero_blocks(const PhaseLayout& layout) {
    layout.check();
    Blocks blocks;
    for (int i = 0; i < kBlockCount; ++i) {
      const auto [rows, cols] = block_shape(BlockKey::from_index(i), layout);
      blocks[i] = Matrix::Zero(rows, cols);
    }
    return blocks;
  }

  const std::string& name() const { return name_; }
  const PhaseLayout& layout() const { return layout_; }
  const Blocks& blocks() const { return blocks_; }

  const Matrix& block(BlockKey key) const { return blocks_[key.index()]; }
  const Matrix& block(Region r, int k1, int k2) const { return blocks_[BlockKey{r, k1, k2}.index()]; }
  const Matrix& plus(int k1, int k2) const { return block(Region::Interior, k1, k2); }

  double max_rate() const {
    double m = 0.0;
    for (const auto& b : blocks_)
      if (b.size() > 0) m = std::max(m, b.cwiseAbs().maxCoeff());
    return m;
  }

 private:
  std::string name_;
  PhaseLayout layout_;
  Blocks blocks_;
};

inline QbdModel scaled(const QbdModel& model, double factor) {
  auto blocks = model.blocks();
  for (auto& b : blocks) b *= factor;
  return QbdModel(model.name(), model.layout(), std::move(blocks));
}

// Exchange the roles of l1 and l2.
inline QbdModel swap_axes(const QbdModel& model) {
  const auto& in = model.layout();
  const PhaseLayout layout{in.s0, in.s2, in.s1, in.splus};
  QbdModel::Blocks blocks;
  for (int i = 0; i < kBlockCount; ++i) {
    const BlockKey key = BlockKey::from_index(i);
    Region r = key.region;
    if (r == Region::Axis1)
      r = Region::Axis2;
    else if (r == Region::Axis2)
      r = Region::Axis1;
    blocks[BlockKey{r, key.k2, key.k1}.index()] = model.block(key);
  }
  return QbdModel(model.name() + "-swapped", layout, std::move(blocks));
}

struct ValidationIssue {
  enum class Kind { Shape, Sign, RowSum, Irreducibility };
  Kind kind;
  std::optional<Archetype> archetype;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> violations;
  std::vector<ValidationIssue> warnings;

  bool ok() const { return violations.empty(); }
};

struct ValidateOptions {
  // Row-sum failures at the origin archetype become warnings.
  bool origin_rowsum_as_warning = false;
  // Levels per axis of the truncation used for the irreducibility heuristic.
  int irreducibility_levels = 6;
  double relative_tolerance = 1e-12;
};

// Finite generator over the states with l1 <= n1, l2 <= n2. Outflow beyond the
// truncation edge is folded back into the diagonal.
class TruncatedGenerator {
 public:
  TruncatedGenerator(const QbdModel& model, int n1, int n2) : layout_(model.layout()), n1_(n1), n2_(n2) {
    if (n1 < 2 || n2 < 2) throw InvalidArgument("truncation caps must be at least 2");
    offsets_.reserve(static_cast<std::size_t>((n1 + 1) * (n2 + 1)) + 1);
    Eigen::Index offset = 0;
    for (int l1 = 0; l1 <= n1; ++l1)
      for (int l2 = 0; l2 <= n2; ++l2) {
        offsets_.push_back(offset);
        offset += layout_.count(region_at(l1, l2));
      }
    offsets_.push_back(offset);

    generator_ = Matrix::Zero(offset, offset);
    for (int l1 = 0; l1 <= n1; ++l1)
      for (int l2 = 0; l2 <= n2; ++l2) {
        const Eigen::Index row = offsets_[cell(l1, l2)];
        const Eigen::Index phases = layout_.count(region_at(l1, l2));
        for (int d1 = -1; d1 <= 1; ++d1)
          for (int d2 = -1; d2 <= 1; ++d2) {
            const auto key = block_for(l1, l2, d1, d2);
            if (!key) continue;
            const Matrix& b = model.block(*key);
            const int m1 = l1 + d1, m2 = l2 + d2;
            if (m1 > n1 || m2 > n2) {
              generator_.block(row, row, phases, phases).diagonal() += b.rowwise().sum();
              continue;
            }
            generator_.block(row, offsets_[cell(m1, m2)], b.rows(), b.cols()) += b;
          }
      }
  }

  const Matrix& generator() const { return generator_; }
  Eigen::Index size() const { return generator_.rows(); }
  Eigen::Index index(int l1, int l2, int phase) const { return offsets_[cell(l1, l2)] + phase; }
  int n1() const { return n1_; }
  int n2() const { return n2_; }

 private:
  std::size_t cell(int l1, int l2) const { return static_cast<std::size_t>(l1 * (n2_ + 1) + l2); }

  PhaseLayout layout_;
  int n1_;
  int n2_;
  std::vector<Eigen::Index> offsets_;
  Matrix generator_;
};

inline Matrix assemble_truncated_generator(const QbdModel& model, int n1, int n2) {
  return TruncatedGenerator(model, n1, n2).generator();
}

inline ValidationReport validate(const QbdModel& model, const ValidateOptions& options = {}) {
  ValidationReport report;
  const auto& layout = model.layout();
  const double tol = options.relative_tolerance * std::max(model.max_rate(), 1e-300);

  for (int i = 0; i < kBlockCount; ++i) {
    const BlockKey key = BlockKey::from_index(i);
    const Matrix& b = model.block(key);
    const auto [rows, cols] = block_shape(key, layout);
    if (b.rows() != rows || b.cols() != cols) {
      report.violations.push_back({ValidationIssue::Kind::Shape, std::nullopt, "block " + key.to_string() + " has wrong shape"});
      continue;
    }
    const bool local = key.k1 == 0 && key.k2 == 0;
    for (Eigen::Index r = 0; r < b.rows(); ++r)
      for (Eigen::Index c = 0; c < b.cols(); ++c) {
        const double v = b(r, c);
        std::string problem;
        if (local && r == c) {
          if (!(v < 0.0)) problem = "diagonal entry must be negative";
        } else if (v < 0.0) {
          problem = "entry must be nonnegative";
        }
        if (!problem.empty())
          report.violations.push_back({ValidationIssue::Kind::Sign, std::nullopt,
                                       "block " + key.to_string() + " entry (" + std::to_string(r + 1) + "," +
                                           std::to_string(c + 1) + ") = " + std::to_string(v) + ": " + problem});
      }
  }
  for (const auto& v : report.violations)
    if (v.kind == ValidationIssue::Kind::Shape) return report;

  for (Archetype a : kArchetypes) {
    const auto [l1, l2] = representative(a);
    Vector sums = Vector::Zero(layout.count(region_at(l1, l2)));
    for (const auto& out : outgoing_blocks(a)) sums += model.block(out.key).rowwise().sum();
    const double worst = sums.cwiseAbs().maxCoeff();
    if (worst > tol) {
      Eigen::Index phase = 0;
      sums.cwiseAbs().maxCoeff(&phase);
      ValidationIssue issue{ValidationIssue::Kind::RowSum, a,
                            "row sums do not vanish at archetype " + to_string(a) + ": phase " +
                                std::to_string(phase + 1) + " sums to " + std::to_string(sums(phase))};
      if (a == Archetype::Origin && options.origin_rowsum_as_warning)
        report.warnings.push_back(std::move(issue));
      else
        report.violations.push_back(std::move(issue));
    }
  }

  if (options.irreducibility_levels >= 3) {
    const int cap = options.irreducibility_levels - 1;
    const Matrix q = assemble_truncated_generator(model, cap, cap);
    const auto components = strongly_connected_components(q);
    if (components.size() != 1)
      report.warnings.push_back({ValidationIssue::Kind::Irreducibility, std::nullopt,
                                 "truncation to " + std::to_string(cap + 1) + "x" + std::to_string(cap + 1) +
                                     " levels is not irreducible (" + std::to_string(components.size()) +
                                     " communicating classes); Assumption 1 may fail"});
  }
  return report;
}

}  // namespace qbd2d
