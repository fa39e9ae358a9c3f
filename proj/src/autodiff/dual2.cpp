#include "agepinn/autodiff/dual2.hpp"

#include <string>

#include "agepinn/error.hpp"

namespace agepinn {

Dual2 operator/(const Dual2& x, const Dual2& y) {
  if (y.value == 0.0) throw NumericError("Dual2 division by a zero-valued denominator");
  const double inv = 1.0 / y.value;
  const double q = x.value * inv;
  return {q, (x.da - q * y.da) * inv, (x.dt - q * y.dt) * inv};
}

Dual2 dual_apply(DualOp op, std::span<const Dual2> args, double factor) {
  const auto need = [&](std::size_t n) {
    if (args.size() != n) {
      throw UsageError("dual_apply: expected " + std::to_string(n) + " argument(s), got " +
                       std::to_string(args.size()));
    }
  };
  switch (op) {
    case DualOp::add:
      need(2);
      return args[0] + args[1];
    case DualOp::sub:
      need(2);
      return args[0] - args[1];
    case DualOp::mul:
      need(2);
      return args[0] * args[1];
    case DualOp::div:
      need(2);
      return args[0] / args[1];
    case DualOp::tanh:
      need(1);
      return tanh(args[0]);
    case DualOp::sigmoid:
      need(1);
      return sigmoid(args[0]);
    case DualOp::exp:
      need(1);
      return exp(args[0]);
    case DualOp::scale:
      need(1);
      return factor * args[0];
  }
  throw UsageError("dual_apply: unknown op");
}

}  // namespace agepinn
