#pragma once

#include "qbd2d/kron.hpp"
#include "qbd2d/model.hpp"

#include <array>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace qbd2d {

namespace detail {

inline void require_positive(std::initializer_list<std::pair<const char*, double>> rates) {
  for (const auto& [name, value] : rates)
    if (!(value > 0.0) || !std::isfinite(value))
      throw InvalidArgument(std::string("rate ") + name + " must be positive and finite");
}

inline Matrix& at(QbdModel::Blocks& blocks, Region r, int k1, int k2) { return blocks[BlockKey{r, k1, k2}.index()]; }

inline Matrix mat(Eigen::Index rows, Eigen::Index cols, std::initializer_list<double> values) {
  Matrix m(rows, cols);
  auto it = values.begin();
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = *it++;
  return m;
}

inline Matrix eye(Eigen::Index n) { return Matrix::Identity(n, n); }

inline std::string format_rate(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace detail

// Two uncoupled M/M/1 queues with one phase everywhere. Every drift has a
// closed form, which makes it the reference fixture for the solvers.
inline QbdModel build_independent_pair(double lambda1, double lambda2, double mu1, double mu2) {
  detail::require_positive({{"lambda1", lambda1}, {"lambda2", lambda2}, {"mu1", mu1}, {"mu2", mu2}});
  using detail::at;
  const PhaseLayout layout{1, 1, 1, 1};
  auto b = QbdModel::zero_blocks(layout);
  const auto s = [](double v) { return Matrix::Constant(1, 1, v); };

  at(b, Region::Interior, 1, 0) = s(lambda1);
  at(b, Region::Interior, 0, 1) = s(lambda2);
  at(b, Region::Interior, -1, 0) = s(mu1);
  at(b, Region::Interior, 0, -1) = s(mu2);
  at(b, Region::Interior, 0, 0) = s(-(lambda1 + lambda2 + mu1 + mu2));

  at(b, Region::Axis1, 1, 0) = s(lambda1);
  at(b, Region::Axis1, -1, 0) = s(mu1);
  at(b, Region::Axis1, 0, 1) = s(lambda2);
  at(b, Region::Axis1, 0, 0) = s(-(lambda1 + lambda2 + mu1));
  at(b, Region::Axis1, 0, -1) = s(mu2);

  at(b, Region::Axis2, 0, 1) = s(lambda2);
  at(b, Region::Axis2, 0, -1) = s(mu2);
  at(b, Region::Axis2, 1, 0) = s(lambda1);
  at(b, Region::Axis2, 0, 0) = s(-(lambda1 + lambda2 + mu2));
  at(b, Region::Axis2, -1, 0) = s(mu1);

  at(b, Region::Origin, 0, 0) = s(-(lambda1 + lambda2));
  at(b, Region::Origin, 1, 0) = s(lambda1);
  at(b, Region::Origin, 0, 1) = s(lambda2);
  at(b, Region::Origin, -1, 0) = s(mu1);
  at(b, Region::Origin, 0, -1) = s(mu2);

  return QbdModel("independent-pair", layout, std::move(b));
}

// Single server, two classes, non-preemptive priority for class 1, with an
// exponential setup before every service that follows idling or a class
// switch. Phases: axis 1 {serve 1, setup 1}, axis 2 {serve 2, setup 2},
// interior {serve 1, setup 1, serve 2, setup 2}.
inline QbdModel build_priority_setup(double lambda1, double lambda2, double mu1, double mu2, double gamma1,
                                     double gamma2) {
  detail::require_positive({{"lambda1", lambda1},
                            {"lambda2", lambda2},
                            {"mu1", mu1},
                            {"mu2", mu2},
                            {"gamma1", gamma1},
                            {"gamma2", gamma2}});
  using detail::at;
  using detail::eye;
  using detail::mat;
  const double lambda = lambda1 + lambda2;
  const PhaseLayout layout{1, 2, 2, 4};
  auto b = QbdModel::zero_blocks(layout);

  at(b, Region::Interior, -1, 0) = mat(4, 4, {mu1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  at(b, Region::Interior, 0, 0) = mat(4, 4, {-(lambda + mu1), 0, 0, 0,                  //
                                             gamma1, -(lambda + gamma1), 0, 0,          //
                                             0, 0, -(lambda + mu2), 0,                  //
                                             0, 0, gamma2, -(lambda + gamma2)});
  at(b, Region::Interior, 0, -1) = mat(4, 4, {0, 0, 0, 0, 0, 0, 0, 0, 0, mu2, 0, 0, 0, 0, 0, 0});
  at(b, Region::Interior, 1, 0) = lambda1 * eye(4);
  at(b, Region::Interior, 0, 1) = lambda2 * eye(4);

  at(b, Region::Axis1, 0, -1) = mat(4, 2, {0, 0, 0, 0, 0, mu2, 0, 0});
  at(b, Region::Axis1, -1, 0) = mat(2, 2, {mu1, 0, 0, 0});
  at(b, Region::Axis1, 0, 0) = mat(2, 2, {-(lambda + mu1), 0, gamma1, -(lambda + gamma1)});
  at(b, Region::Axis1, 0, 1) = lambda2 * mat(2, 4, {1, 0, 0, 0, 0, 1, 0, 0});
  at(b, Region::Axis1, 1, 0) = lambda1 * eye(2);

  at(b, Region::Axis2, -1, 0) = mat(4, 2, {0, mu1, 0, 0, 0, 0, 0, 0});
  at(b, Region::Axis2, 0, 0) = mat(2, 2, {-(lambda + mu2), 0, gamma2, -(lambda + gamma2)});
  at(b, Region::Axis2, 0, -1) = mat(2, 2, {mu2, 0, 0, 0});
  at(b, Region::Axis2, 1, 0) = lambda1 * mat(2, 4, {0, 0, 1, 0, 0, 0, 0, 1});
  at(b, Region::Axis2, 0, 1) = lambda2 * eye(2);

  at(b, Region::Origin, -1, 0) = mat(2, 1, {mu1, 0});
  at(b, Region::Origin, 0, 0) = mat(1, 1, {-lambda});
  at(b, Region::Origin, 0, -1) = mat(2, 1, {mu2, 0});
  at(b, Region::Origin, 1, 0) = lambda1 * mat(1, 2, {0, 1});
  at(b, Region::Origin, 0, 1) = lambda2 * mat(1, 2, {0, 1});

  return QbdModel("priority-setup", layout, std::move(b));
}

// ---------------------------------------------------------------------------
// Two M/M/1 queues plus a shared additional server.

// Busy/idle pattern (j1, j2, j3): j1 = 1 when the queue-1 server works, j2 = 2
// when the queue-2 server works, j3 in {0, 1, 2} is the queue served by the
// additional server.
struct ServerState {
  int j1;
  int j2;
  int j3;

  friend bool operator==(const ServerState&, const ServerState&) = default;
};

// Phase numbering of the server states in each region.
inline const std::vector<ServerState>& additional_server_phases(Region r) {
  static const std::vector<ServerState> origin{{0, 0, 0}, {1, 0, 0}, {0, 0, 1}, {0, 2, 0},
                                               {0, 0, 2}, {1, 2, 0}, {0, 2, 1}, {1, 0, 2}};
  static const std::vector<ServerState> axis1{{1, 0, 1}, {1, 2, 1}, {1, 0, 2}};
  static const std::vector<ServerState> axis2{{0, 2, 2}, {1, 2, 2}, {0, 2, 1}};
  static const std::vector<ServerState> interior{{1, 2, 1}, {1, 2, 2}};
  switch (r) {
    case Region::Origin: return origin;
    case Region::Axis1: return axis1;
    case Region::Axis2: return axis2;
    case Region::Interior: return interior;
  }
  return interior;
}

struct ServerTransition {
  std::int64_t l1;
  std::int64_t l2;
  int phase;
  double rate;
};

// Transitions out of ((l1, l2), phase) under the service policy: an arrival is
// taken by its own server, else by an idle additional server, else waits. A
// freed own server takes the next customer of its queue; a freed additional
// server takes a waiting queue-1 customer first, then queue 2, else idles.
// Levels count customers beyond the first in each queue.
inline std::vector<ServerTransition> additional_server_transitions(std::int64_t l1, std::int64_t l2, int phase,
                                                                   double lambda1, double lambda2, double mu1,
                                                                   double mu2) {
  const auto& phases = additional_server_phases(region_at(l1, l2));
  if (phase < 0 || phase >= static_cast<int>(phases.size())) throw InvalidArgument("server phase out of range");
  const ServerState s = phases[static_cast<std::size_t>(phase)];
  const std::int64_t busy1 = (s.j1 == 1) + (s.j3 == 1);
  const std::int64_t busy2 = (s.j2 == 2) + (s.j3 == 2);
  const std::int64_t n1 = l1 == 0 ? busy1 : l1 + 1;
  const std::int64_t n2 = l2 == 0 ? busy2 : l2 + 1;

  std::vector<ServerTransition> out;
  const auto emit = [&](std::int64_t m1, std::int64_t m2, ServerState t, double rate) {
    const std::int64_t d1 = std::max<std::int64_t>(0, m1 - 1);
    const std::int64_t d2 = std::max<std::int64_t>(0, m2 - 1);
    const auto& dest = additional_server_phases(region_at(d1, d2));
    for (std::size_t j = 0; j < dest.size(); ++j)
      if (dest[j] == t) {
        out.push_back({d1, d2, static_cast<int>(j), rate});
        return;
      }
    throw InternalError("additional-server policy reached an unlisted server state");
  };
  const auto refill_additional = [](ServerState t, std::int64_t m1, std::int64_t m2) {
    if (m1 - (t.j1 == 1) > 0)
      t.j3 = 1;
    else if (m2 - (t.j2 == 2) > 0)
      t.j3 = 2;
    else
      t.j3 = 0;
    return t;
  };

  {
    ServerState t = s;
    if (t.j1 == 0)
      t.j1 = 1;
    else if (t.j3 == 0)
      t.j3 = 1;
    emit(n1 + 1, n2, t, lambda1);
  }
  {
    ServerState t = s;
    if (t.j2 == 0)
      t.j2 = 2;
    else if (t.j3 == 0)
      t.j3 = 2;
    emit(n1, n2 + 1, t, lambda2);
  }
  if (s.j1 == 1) {
    ServerState t = s;
    t.j1 = (n1 - 1) - (t.j3 == 1) > 0 ? 1 : 0;
    emit(n1 - 1, n2, t, mu1);
  }
  if (s.j2 == 2) {
    ServerState t = s;
    t.j2 = (n2 - 1) - (t.j3 == 2) > 0 ? 2 : 0;
    emit(n1, n2 - 1, t, mu2);
  }
  if (s.j3 == 1) emit(n1 - 1, n2, refill_additional(s, n1 - 1, n2), mu1);
  if (s.j3 == 2) emit(n1, n2 - 1, refill_additional(s, n1, n2 - 1), mu2);
  return out;
}

// Blocks generated directly from the server policy at the given source
// positions. Off-diagonal rates only; the diagonal of every A_{0,0} is set so
// that the source rows are conservative.
inline QbdModel::Blocks additional_server_policy_blocks(double lambda1, double lambda2, double mu1, double mu2) {
  const PhaseLayout layout{8, 3, 3, 2};
  auto blocks = QbdModel::zero_blocks(layout);
  std::array<bool, kBlockCount> filled{};
  for (Archetype a : kArchetypes) {
    const auto [l1, l2] = representative(a);
    const Region r = region_at(l1, l2);
    std::array<bool, kBlockCount> touched{};
    QbdModel::Blocks local = QbdModel::zero_blocks(layout);
    for (int j = 0; j < layout.count(r); ++j) {
      double out_rate = 0.0;
      for (const auto& t : additional_server_transitions(l1, l2, j, lambda1, lambda2, mu1, mu2)) {
        const auto key = block_for(l1, l2, static_cast<int>(t.l1 - l1), static_cast<int>(t.l2 - l2));
        if (!key) throw InternalError("policy transition leaves the quarter plane");
        local[key->index()](j, t.phase) += t.rate;
        touched[key->index()] = true;
        out_rate += t.rate;
      }
      local[BlockKey{r, 0, 0}.index()](j, j) -= out_rate;
      touched[BlockKey{r, 0, 0}.index()] = true;
    }
    for (const auto& ob : outgoing_blocks(a)) {
      const int i = ob.key.index();
      if (!filled[i]) {
        blocks[i] = local[i];
        filled[i] = true;
      }
    }
  }
  return blocks;
}

// Interior and axis blocks as derived by hand for this model; origin blocks
// come from the server policy.
inline QbdModel build_additional_server(double lambda1, double lambda2, double mu1, double mu2) {
  detail::require_positive({{"lambda1", lambda1}, {"lambda2", lambda2}, {"mu1", mu1}, {"mu2", mu2}});
  using detail::at;
  using detail::eye;
  using detail::mat;
  const double lambda = lambda1 + lambda2;
  const PhaseLayout layout{8, 3, 3, 2};
  auto b = QbdModel::zero_blocks(layout);

  at(b, Region::Interior, -1, 0) = mat(2, 2, {2 * mu1, 0, 0, mu1});
  at(b, Region::Interior, 0, 0) = mat(2, 2, {-(lambda + 2 * mu1 + mu2), 0, 0, -(lambda + mu1 + 2 * mu2)});
  at(b, Region::Interior, 0, -1) = mat(2, 2, {mu2, 0, mu2, mu2});
  at(b, Region::Interior, 1, 0) = lambda1 * eye(2);
  at(b, Region::Interior, 0, 1) = lambda2 * eye(2);

  at(b, Region::Axis1, 0, 0) = mat(3, 3, {-(lambda + 2 * mu1), lambda2, 0,           //
                                          mu2, -(lambda + 2 * mu1 + mu2), 0,         //
                                          mu2, 0, -(lambda + mu1 + mu2)});
  at(b, Region::Axis1, 0, 1) = mat(3, 2, {0, 0, lambda2, 0, 0, lambda2});
  at(b, Region::Axis1, -1, 0) = mat(3, 3, {2 * mu1, 0, 0, 0, 2 * mu1, 0, 0, 0, mu1});
  at(b, Region::Axis1, 0, -1) = mat(2, 3, {0, mu2, 0, 0, mu2, mu2});
  at(b, Region::Axis1, 1, 0) = lambda1 * eye(3);

  // With both queue-2 servers busy the exit rate is lambda + 2 mu2.
  at(b, Region::Axis2, 0, 0) = mat(3, 3, {-(lambda + 2 * mu2), lambda1, 0,           //
                                          mu1, -(lambda + mu1 + 2 * mu2), 0,         //
                                          mu1, 0, -(lambda + mu1 + mu2)});
  at(b, Region::Axis2, 1, 0) = mat(3, 2, {0, 0, 0, lambda1, lambda1, 0});
  at(b, Region::Axis2, 0, -1) = mat(3, 3, {2 * mu2, 0, 0, 0, 2 * mu2, 0, 0, 0, mu2});
  at(b, Region::Axis2, -1, 0) = mat(2, 3, {0, mu1, mu1, 0, mu1, 0});
  at(b, Region::Axis2, 0, 1) = lambda2 * eye(3);

  const auto policy = additional_server_policy_blocks(lambda1, lambda2, mu1, mu2);
  for (int i = 0; i < kBlockCount; ++i)
    if (BlockKey::from_index(i).region == Region::Origin) b[i] = policy[i];

  return QbdModel("additional-server", layout, std::move(b));
}

// ---------------------------------------------------------------------------
// MAP arrivals, PH services and setups.

struct MarkovianArrivalProcess {
  Matrix c;  // transitions without an arrival
  Matrix d;  // transitions with an arrival

  Eigen::Index order() const { return c.rows(); }

  void check(const char* what) const {
    const std::string name(what);
    if (c.rows() < 1 || c.rows() != c.cols() || d.rows() != c.rows() || d.cols() != c.cols())
      throw InvalidArgument(name + ": C and D must be square matrices of equal order");
    const double scale = std::max(1.0, std::max(c.cwiseAbs().maxCoeff(), d.cwiseAbs().maxCoeff()));
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      if (!(c(i, i) < 0.0)) throw InvalidArgument(name + ": C must have a negative diagonal");
      for (Eigen::Index j = 0; j < c.cols(); ++j) {
        if (i != j && c(i, j) < 0.0) throw InvalidArgument(name + ": C must be nonnegative off the diagonal");
        if (d(i, j) < 0.0) throw InvalidArgument(name + ": D must be nonnegative");
      }
    }
    if (((c + d).rowwise().sum()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw InvalidArgument(name + ": C + D must have zero row sums");
  }
};

struct PhaseTypeDistribution {
  Matrix u;        // sub-generator
  RowVector beta;  // initial distribution

  Eigen::Index order() const { return u.rows(); }
  Vector exit_rates() const { return -u.rowwise().sum(); }

  void check(const char* what) const {
    const std::string name(what);
    if (u.rows() < 1 || u.rows() != u.cols() || beta.size() != u.rows())
      throw InvalidArgument(name + ": U must be square and beta must match its order");
    const double scale = std::max(1.0, u.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      if (!(u(i, i) < 0.0)) throw InvalidArgument(name + ": U must have a negative diagonal");
      for (Eigen::Index j = 0; j < u.cols(); ++j)
        if (i != j && u(i, j) < 0.0) throw InvalidArgument(name + ": U must be nonnegative off the diagonal");
    }
    if ((exit_rates().array() < -1e-12 * scale).any())
      throw InvalidArgument(name + ": U must have nonpositive row sums");
    if ((beta.array() < 0.0).any() || std::abs(beta.sum() - 1.0) > 1e-12)
      throw InvalidArgument(name + ": beta must be a probability vector");
  }
};

inline MarkovianArrivalProcess poisson_map(double rate) {
  detail::require_positive({{"arrival rate", rate}});
  return {Matrix::Constant(1, 1, -rate), Matrix::Constant(1, 1, rate)};
}

inline PhaseTypeDistribution exponential_ph(double rate) {
  detail::require_positive({{"rate", rate}});
  return {Matrix::Constant(1, 1, -rate), RowVector::Ones(1)};
}

// Erlang distribution with `stages` stages and the given mean rate.
inline PhaseTypeDistribution erlang_ph(int stages, double rate) {
  if (stages < 1) throw InvalidArgument("erlang: at least one stage");
  detail::require_positive({{"rate", rate}});
  const double r = stages * rate;
  Matrix u = Matrix::Zero(stages, stages);
  for (int i = 0; i < stages; ++i) {
    u(i, i) = -r;
    if (i + 1 < stages) u(i, i + 1) = r;
  }
  RowVector beta = RowVector::Zero(stages);
  beta(0) = 1.0;
  return {u, beta};
}

// Priority queue with setup times where arrivals are MAPs and service and
// setup times are PH. Phases are ordered (arrival-1 phase, arrival-2 phase,
// server phase) lexicographically; the server phase runs over
// [serve 1 | setup 1] on axis 1, [serve 2 | setup 2] on axis 2 and
// [serve 1 | setup 1 | serve 2 | setup 2] in the interior.
inline QbdModel build_priority_setup_mapph(const MarkovianArrivalProcess& map1, const MarkovianArrivalProcess& map2,
                                           const PhaseTypeDistribution& service1,
                                           const PhaseTypeDistribution& service2,
                                           const PhaseTypeDistribution& setup1, const PhaseTypeDistribution& setup2) {
  map1.check("class-1 MAP");
  map2.check("class-2 MAP");
  service1.check("class-1 service PH");
  service2.check("class-2 service PH");
  setup1.check("class-1 setup PH");
  setup2.check("class-2 setup PH");
  using detail::at;
  using detail::eye;

  const Eigen::Index a1 = map1.order(), a2 = map2.order();
  const Eigen::Index m1 = service1.order(), m2 = service2.order();
  const Eigen::Index n1 = setup1.order(), n2 = setup2.order();
  const Eigen::Index k1 = m1 + n1, k2 = m2 + n2, k = k1 + k2;
  const Eigen::Index arrivals = a1 * a2;
  const PhaseLayout layout{static_cast<int>(arrivals), static_cast<int>(arrivals * k1),
                           static_cast<int>(arrivals * k2), static_cast<int>(arrivals * k)};
  auto b = QbdModel::zero_blocks(layout);

  const Vector u1 = service1.exit_rates(), u2 = service2.exit_rates();
  const Vector v1 = setup1.exit_rates(), v2 = setup2.exit_rates();
  const Matrix ia1 = eye(a1), ia2 = eye(a2);
  const Matrix c12 = kron_sum(map1.c, map2.c);
  const auto server = [&](const Matrix& x) { return kron_product(ia1, ia2, x); };
  const auto arrival1 = [&](const Matrix& x) { return kron_product(map1.d, ia2, x); };
  const auto arrival2 = [&](const Matrix& x) { return kron_product(ia1, map2.d, x); };

  // Offsets of the server sub-blocks in the interior.
  const Eigen::Index serve1 = 0, wait1 = m1, serve2 = k1, wait2 = k1 + m2;

  {
    Matrix x = Matrix::Zero(k, k);
    x.block(serve1, serve1, m1, m1) = u1 * service1.beta;
    at(b, Region::Interior, -1, 0) = server(x);

    Matrix t = Matrix::Zero(k, k);
    t.block(serve1, serve1, m1, m1) = service1.u;
    t.block(wait1, serve1, n1, m1) = v1 * service1.beta;
    t.block(wait1, wait1, n1, n1) = setup1.u;
    t.block(serve2, serve2, m2, m2) = service2.u;
    t.block(wait2, serve2, n2, m2) = v2 * service2.beta;
    t.block(wait2, wait2, n2, n2) = setup2.u;
    at(b, Region::Interior, 0, 0) = kron_sum(c12, t);

    Matrix y = Matrix::Zero(k, k);
    y.block(serve2, wait1, m2, n1) = u2 * setup1.beta;
    at(b, Region::Interior, 0, -1) = server(y);

    at(b, Region::Interior, 1, 0) = arrival1(eye(k));
    at(b, Region::Interior, 0, 1) = arrival2(eye(k));
  }
  {
    Matrix x = Matrix::Zero(k1, k1);
    x.block(0, 0, m1, m1) = u1 * service1.beta;
    at(b, Region::Axis1, -1, 0) = server(x);

    Matrix t = Matrix::Zero(k1, k1);
    t.block(0, 0, m1, m1) = service1.u;
    t.block(m1, 0, n1, m1) = v1 * service1.beta;
    t.block(m1, m1, n1, n1) = setup1.u;
    at(b, Region::Axis1, 0, 0) = kron_sum(c12, t);
    at(b, Region::Axis1, 1, 0) = arrival1(eye(k1));

    Matrix embed = Matrix::Zero(k1, k);
    embed.block(0, 0, k1, k1) = eye(k1);
    at(b, Region::Axis1, 0, 1) = arrival2(embed);

    Matrix z = Matrix::Zero(k, k1);
    z.block(serve2, m1, m2, n1) = u2 * setup1.beta;
    at(b, Region::Axis1, 0, -1) = server(z);
  }
  {
    Matrix embed = Matrix::Zero(k2, k);
    embed.block(0, k1, k2, k2) = eye(k2);
    at(b, Region::Axis2, 1, 0) = arrival1(embed);

    Matrix w = Matrix::Zero(k, k2);
    w.block(serve1, m2, m1, n2) = u1 * setup2.beta;
    at(b, Region::Axis2, -1, 0) = server(w);

    Matrix t = Matrix::Zero(k2, k2);
    t.block(0, 0, m2, m2) = service2.u;
    t.block(m2, 0, n2, m2) = v2 * service2.beta;
    t.block(m2, m2, n2, n2) = setup2.u;
    at(b, Region::Axis2, 0, 0) = kron_sum(c12, t);

    Matrix x = Matrix::Zero(k2, k2);
    x.block(0, 0, m2, m2) = u2 * service2.beta;
    at(b, Region::Axis2, 0, -1) = server(x);
    at(b, Region::Axis2, 0, 1) = arrival2(eye(k2));
  }
  {
    Matrix down1 = Matrix::Zero(k1, 1);
    down1.block(0, 0, m1, 1) = u1;
    at(b, Region::Origin, -1, 0) = server(down1);
    at(b, Region::Origin, 0, 0) = c12;

    Matrix down2 = Matrix::Zero(k2, 1);
    down2.block(0, 0, m2, 1) = u2;
    at(b, Region::Origin, 0, -1) = server(down2);

    Matrix start1 = Matrix::Zero(1, k1);
    start1.block(0, m1, 1, n1) = setup1.beta;
    at(b, Region::Origin, 1, 0) = arrival1(start1);

    Matrix start2 = Matrix::Zero(1, k2);
    start2.block(0, m2, 1, n2) = setup2.beta;
    at(b, Region::Origin, 0, 1) = arrival2(start2);
  }
  return QbdModel("priority-setup-mapph", layout, std::move(b));
}

}  // namespace qbd2d
