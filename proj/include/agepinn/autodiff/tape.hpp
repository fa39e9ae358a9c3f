#pragma once

// Scalar reverse-over-forward tape. Every node stores its Dual2 value and the
// Dual2 local partials with respect to its parents. A backward sweep seeded
// with {1,0,0} at the root accumulates Dual2 adjoints; for a parameter leaf
// theta the result is (dP/dtheta, d2P/da dtheta, d2P/dt dtheta).

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "agepinn/autodiff/dual2.hpp"

namespace agepinn {

// Per-parameter triples laid out like the flat parameter vector. `value` is
// dP/dtheta, `da` is d(dP/da)/dtheta and `dt` is d(dP/dt)/dtheta.
using Adjoints = std::vector<Dual2>;

class Tape {
 public:
  using Index = std::uint32_t;
  static constexpr Index kNone = std::numeric_limits<Index>::max();

  Index constant(Dual2 value);
  // A leaf whose adjoint is reported at `flat_index` of the returned Adjoints.
  Index parameter(double value, std::size_t flat_index);
  Index unary(DualOp op, Index x, double factor = 1.0);
  Index binary(DualOp op, Index x, Index y);

  const Dual2& value(Index node) const { return nodes_.at(node).value; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  void clear() { nodes_.clear(); }

  // Throws UsageError if the tape is empty or `root` was never recorded.
  Adjoints backward(Index root, std::size_t parameter_count) const;

 private:
  struct Node {
    DualOp op;
    std::array<Index, 2> parents{kNone, kNone};
    std::array<Dual2, 2> partials{};
    Dual2 value;
    std::size_t param_slot = std::numeric_limits<std::size_t>::max();
  };

  Index push(Node node);

  std::vector<Node> nodes_;
};

// Thin handle so that templated model code can run on the tape unchanged.
struct Var {
  Tape* tape = nullptr;
  Tape::Index id = Tape::kNone;

  const Dual2& dual() const { return tape->value(id); }
};

Var operator+(Var x, Var y);
Var operator-(Var x, Var y);
Var operator*(Var x, Var y);
Var operator/(Var x, Var y);
Var operator*(double c, Var x);
Var operator+(Var x, double c);
Var operator+(double c, Var x);
Var operator-(double c, Var x);
Var tanh(Var x);
Var sigmoid(Var x);
Var exp(Var x);

Adjoints tape_backward(const Tape& tape, Tape::Index root, std::size_t parameter_count);

}  // namespace agepinn
