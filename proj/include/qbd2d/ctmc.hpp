#pragma once

#include "qbd2d/types.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace qbd2d {

using StateSet = std::vector<Eigen::Index>;

// Strongly connected components of the directed graph with an edge i -> j
// whenever g(i, j) > threshold, i != j. Components come out in reverse
// topological order (sinks first), as Tarjan's algorithm produces them.
inline std::vector<StateSet> strongly_connected_components(const Matrix& g, double threshold = 0.0) {
  const Eigen::Index n = g.rows();
  std::vector<Eigen::Index> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<Eigen::Index> stack;
  std::vector<StateSet> components;
  Eigen::Index counter = 0;

  struct Frame {
    Eigen::Index v;
    Eigen::Index next;
  };
  std::vector<Frame> call;

  for (Eigen::Index root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!call.empty()) {
      Frame& f = call.back();
      const Eigen::Index v = f.v;
      bool descended = false;
      while (f.next < n) {
        const Eigen::Index w = f.next++;
        if (w == v || !(g(v, w) > threshold)) continue;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;

      if (low[v] == index[v]) {
        StateSet comp;
        Eigen::Index w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
      call.pop_back();
      if (!call.empty()) {
        const Eigen::Index parent = call.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return components;
}

// Closed communicating classes: strongly connected components with no edge
// leaving them. Sorted by smallest member.
inline std::vector<StateSet> closed_classes(const Matrix& g, double threshold = 0.0) {
  if (g.rows() != g.cols()) throw InvalidArgument("closed_classes: generator must be square");
  auto components = strongly_connected_components(g, threshold);
  std::vector<Eigen::Index> component_of(g.rows());
  for (std::size_t c = 0; c < components.size(); ++c)
    for (auto v : components[c]) component_of[v] = static_cast<Eigen::Index>(c);

  std::vector<StateSet> closed;
  for (std::size_t c = 0; c < components.size(); ++c) {
    bool leaks = false;
    for (auto v : components[c]) {
      for (Eigen::Index w = 0; w < g.cols() && !leaks; ++w)
        leaks = w != v && g(v, w) > threshold && component_of[w] != static_cast<Eigen::Index>(c);
      if (leaks) break;
    }
    if (!leaks) closed.push_back(components[c]);
  }
  std::sort(closed.begin(), closed.end(),
            [](const StateSet& a, const StateSet& b) { return a.front() < b.front(); });
  return closed;
}

// Stationary distribution of a finite generator with exactly one closed class.
// Entries outside the closed class are exactly zero.
inline RowVector stationary(const Matrix& g, double threshold = 0.0) {
  const auto classes = closed_classes(g, threshold);
  if (classes.size() != 1)
    throw ClosedClassError(classes.size(), "stationary: generator has " + std::to_string(classes.size()) +
                                               " closed classes, exactly one is required");
  const StateSet& cls = classes.front();
  const auto m = static_cast<Eigen::Index>(cls.size());

  // Balance equations restricted to the class, last one replaced by sum(pi) = 1.
  Matrix a(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) a(i, j) = g(cls[j], cls[i]);
  a.row(m - 1).setOnes();
  Vector rhs = Vector::Zero(m);
  rhs(m - 1) = 1.0;
  Vector x = a.partialPivLu().solve(rhs);
  x = x.cwiseMax(0.0);
  x /= x.sum();

  RowVector pi = RowVector::Zero(g.rows());
  for (Eigen::Index i = 0; i < m; ++i) pi(cls[i]) = x(i);
  return pi;
}

// P = I + G / nu. Without an explicit nu, 1.05 times the largest exit rate.
inline Matrix uniformize(const Matrix& g, std::optional<double> nu = std::nullopt) {
  if (g.rows() != g.cols()) throw InvalidArgument("uniformize: generator must be square");
  const double bound = g.rows() == 0 ? 0.0 : g.diagonal().cwiseAbs().maxCoeff();
  double rate = nu.value_or(bound > 0.0 ? 1.05 * bound : 1.0);
  if (!(rate > 0.0) || rate < bound)
    throw InvalidArgument("uniformize: rate " + std::to_string(rate) + " is below the largest exit rate " +
                          std::to_string(bound));
  return Matrix::Identity(g.rows(), g.cols()) + g / rate;
}

}  // namespace qbd2d
