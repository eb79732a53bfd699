#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gtl/formula.hpp"
#include "gtl/graph.hpp"

namespace gtl {

/// Truth of a formula at every (node, time): value(v, k) for k in 1..L.
class SatTable {
 public:
  SatTable(std::size_t nodes, int length)
      : nodes_(nodes), length_(length), bits_(nodes * static_cast<std::size_t>(length), 0) {}

  bool value(int v, int k) const { return bits_[index(v, k)] != 0; }
  void set(int v, int k, bool b) { bits_[index(v, k)] = b ? 1 : 0; }
  std::size_t nodes() const { return nodes_; }
  int length() const { return length_; }

 private:
  std::size_t index(int v, int k) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(length_) +
           static_cast<std::size_t>(k - 1);
  }
  std::size_t nodes_;
  int length_;
  std::vector<std::uint8_t> bits_;
};

/// Evaluates a parameter-free formula at every node and time index.
SatTable evaluate(const Trajectory& g, const Formula& f);

bool sat(const Trajectory& g, const Formula& f, int v, int k);
bool sat(const Trajectory& g, const Formula& f, const std::string& node, int k);

/// +1 when the formula holds at (v, 1), -1 otherwise.
int sat_signature(const Trajectory& g, const Formula& f, int v);

/// Per node, whether the formula holds at time index 1.
std::vector<bool> satisfied_nodes(const Trajectory& g, const Formula& f);

/// Average fraction of nodes satisfying the formula at time 1.
double coverage(const TrajectorySet& s, const Formula& f, int workers = 1);

/// Fraction of (trajectory, node) pairs whose signature differs from the
/// trajectory's class label.
double misclassification_rate(const TrajectorySet& d, const Formula& f, int workers = 1);

}  // namespace gtl
