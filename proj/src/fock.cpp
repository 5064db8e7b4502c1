#include "hypercs/fock.hpp"

#include <cmath>

namespace hypercs {

namespace {

void check_compatible(const ModelParams& a, std::size_t trunc_a, const ModelParams& b,
                      std::size_t trunc_b) {
  if (trunc_a != trunc_b) throw ShapeError("mismatched truncation levels");
  if (!(a == b)) throw ShapeError("mismatched model parameters");
}

}  // namespace

LadderOperator build_ladder(const ModelParams& params, std::size_t trunc, LadderKind kind) {
  if (trunc < 1) throw DomainError("build_ladder requires trunc >= 1");
  LadderOperator op;
  op.params = validate(params);
  op.kind = kind;
  op.trunc = trunc;
  op.band.assign(trunc + 2, 0.0);
  for (std::size_t n = 1; n <= trunc + 1; ++n) op.band[n] = std::sqrt(e_coeff(params, n));
  return op;
}

StateVector apply(const LadderOperator& op, const StateVector& v) {
  check_compatible(op.params, op.trunc, v.params, v.trunc());
  StateVector out;
  out.params = v.params;
  out.tail_bound = v.tail_bound;
  out.coeffs.assign(v.coeffs.size(), Complex{});
  const std::size_t N = op.trunc;
  if (op.kind == LadderKind::lowering) {
    for (std::size_t n = 0; n < N; ++n) out.coeffs[n] = op.band[n + 1] * v.coeffs[n + 1];
  } else {
    for (std::size_t n = 1; n <= N; ++n) out.coeffs[n] = op.band[n] * v.coeffs[n - 1];
    const double discarded = op.band[N + 1] * std::abs(v.coeffs[N]);
    out.tail_bound += discarded * discarded;
  }
  return out;
}

StateVector basis_state(const ModelParams& params, std::size_t n, std::size_t trunc) {
  if (n > trunc) throw TruncationError("basis level exceeds the truncation");
  StateVector v;
  v.params = params;
  v.coeffs.assign(trunc + 1, Complex{});
  v.coeffs[n] = 1.0;
  return v;
}

StateVector raise_vacuum(const ModelParams& params, std::size_t n, std::size_t trunc) {
  if (n > trunc) throw TruncationError("raise_vacuum target level exceeds the truncation");
  StateVector v = basis_state(params, 0, trunc);
  if (n == 0) return v;
  const LadderOperator up = build_ladder(params, trunc, LadderKind::raising);
  for (std::size_t s = 0; s < n; ++s) v = apply(up, v);
  return v;
}

double number_expectation(const StateVector& v) {
  double acc = 0.0;
  for (std::size_t n = 1; n < v.coeffs.size(); ++n)
    acc += e_coeff(v.params, n) * std::norm(v.coeffs[n]);
  return acc;
}

Complex inner(const StateVector& u, const StateVector& v) {
  check_compatible(u.params, u.trunc(), v.params, v.trunc());
  Complex acc{};
  for (std::size_t n = 0; n < u.coeffs.size(); ++n) acc += std::conj(u.coeffs[n]) * v.coeffs[n];
  return acc;
}

double norm(const StateVector& v) {
  double acc = 0.0;
  for (const Complex& c : v.coeffs) acc += std::norm(c);
  return std::sqrt(acc);
}

}  // namespace hypercs
