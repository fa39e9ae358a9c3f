#include "agepinn/autodiff/tape.hpp"

#include <string>

#include "agepinn/error.hpp"

namespace agepinn {

Tape::Index Tape::push(Node node) {
  if (nodes_.size() >= kNone) throw UsageError("tape: node capacity exhausted");
  nodes_.push_back(node);
  return static_cast<Index>(nodes_.size() - 1);
}

Tape::Index Tape::constant(Dual2 value) {
  Node n{DualOp::add, {kNone, kNone}, {}, value};
  return push(n);
}

Tape::Index Tape::parameter(double value, std::size_t flat_index) {
  Node n{DualOp::add, {kNone, kNone}, {}, Dual2{value}};
  n.param_slot = flat_index;
  return push(n);
}

Tape::Index Tape::unary(DualOp op, Index x, double factor) {
  const Dual2 xv = value(x);
  Node n{op, {x, kNone}, {}, {}};
  switch (op) {
    case DualOp::tanh: {
      n.value = agepinn::tanh(xv);
      n.partials[0] = 1.0 - n.value * n.value;
      break;
    }
    case DualOp::sigmoid: {
      n.value = agepinn::sigmoid(xv);
      n.partials[0] = n.value * (1.0 - n.value);
      break;
    }
    case DualOp::exp: {
      n.value = agepinn::exp(xv);
      n.partials[0] = n.value;
      break;
    }
    case DualOp::scale: {
      n.value = factor * xv;
      n.partials[0] = Dual2{factor};
      break;
    }
    default:
      throw UsageError("tape: op is not unary");
  }
  return push(n);
}

Tape::Index Tape::binary(DualOp op, Index x, Index y) {
  const Dual2 xv = value(x);
  const Dual2 yv = value(y);
  Node n{op, {x, y}, {}, {}};
  switch (op) {
    case DualOp::add:
      n.value = xv + yv;
      n.partials = {Dual2{1.0}, Dual2{1.0}};
      break;
    case DualOp::sub:
      n.value = xv - yv;
      n.partials = {Dual2{1.0}, Dual2{-1.0}};
      break;
    case DualOp::mul:
      n.value = xv * yv;
      n.partials = {yv, xv};
      break;
    case DualOp::div: {
      n.value = xv / yv;
      const Dual2 inv = Dual2{1.0} / yv;
      n.partials = {inv, -(n.value * inv)};
      break;
    }
    default:
      throw UsageError("tape: op is not binary");
  }
  return push(n);
}

Adjoints Tape::backward(Index root, std::size_t parameter_count) const {
  if (nodes_.empty()) throw UsageError("tape_backward: empty tape");
  if (root >= nodes_.size()) {
    throw UsageError("tape_backward: root " + std::to_string(root) + " out of range");
  }
  std::vector<Dual2> adj(root + 1);
  adj[root] = Dual2{1.0, 0.0, 0.0};
  Adjoints out(parameter_count);
  for (std::size_t i = root + 1; i-- > 0;) {
    const Node& n = nodes_[i];
    const Dual2 a = adj[i];
    if (n.param_slot != std::numeric_limits<std::size_t>::max()) {
      if (n.param_slot >= parameter_count) {
        throw UsageError("tape_backward: parameter slot beyond parameter_count");
      }
      out[n.param_slot] += a;
    }
    for (int k = 0; k < 2; ++k) {
      if (n.parents[k] != kNone) adj[n.parents[k]] += a * n.partials[k];
    }
  }
  return out;
}

Adjoints tape_backward(const Tape& tape, Tape::Index root, std::size_t parameter_count) {
  return tape.backward(root, parameter_count);
}

namespace {
Var make(Tape* t, Tape::Index i) { return Var{t, i}; }
}  // namespace

Var operator+(Var x, Var y) { return make(x.tape, x.tape->binary(DualOp::add, x.id, y.id)); }
Var operator-(Var x, Var y) { return make(x.tape, x.tape->binary(DualOp::sub, x.id, y.id)); }
Var operator*(Var x, Var y) { return make(x.tape, x.tape->binary(DualOp::mul, x.id, y.id)); }
Var operator/(Var x, Var y) { return make(x.tape, x.tape->binary(DualOp::div, x.id, y.id)); }
Var operator*(double c, Var x) { return make(x.tape, x.tape->unary(DualOp::scale, x.id, c)); }
Var operator+(Var x, double c) { return x + make(x.tape, x.tape->constant(Dual2{c})); }
Var operator+(double c, Var x) { return x + c; }
Var operator-(double c, Var x) { return make(x.tape, x.tape->constant(Dual2{c})) - x; }
Var tanh(Var x) { return make(x.tape, x.tape->unary(DualOp::tanh, x.id)); }
Var sigmoid(Var x) { return make(x.tape, x.tape->unary(DualOp::sigmoid, x.id)); }
Var exp(Var x) { return make(x.tape, x.tape->unary(DualOp::exp, x.id)); }

}  // namespace agepinn
