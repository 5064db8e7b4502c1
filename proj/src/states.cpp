#include "hypercs/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hypercs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double radius_check(const StructureTable& table, double abs2) {
  const ModelParams& p = table.params();
  if (p.p() == p.q() + 1 && !(abs2 < 1.0))
    throw DivergenceError("label modulus at or beyond the radius of convergence");
  return abs2;
}

// Smallest N with the geometric bound on the remaining coefficient
// amplitudes below `amp_tol`, starting the ratio test only where e(.) is
// monotone.  Returns the bound alongside.
struct Truncation {
  std::size_t level;
  double amp_tail;
};

Truncation choose_truncation(const StructureTable& table, double abs_z, double amp_tol,
                             std::size_t max_trunc) {
  const bool on_boundary = table.params().p() == table.params().q() + 1;
  const double r_lim = on_boundary ? abs_z : 0.0;
  double amp = 1.0;  // |z|^n / sqrt(rho(n)), unnormalized
  const std::size_t n_safe = table.monotonic_from();
  for (std::size_t n = 1; n <= max_trunc; ++n) {
    amp *= abs_z / std::sqrt(table.e(n));
    if (n < n_safe) continue;
    const double r_now = abs_z / std::sqrt(table.e(n + 1));
    const double r = std::max(r_now, r_lim);
    if (r >= 1.0) continue;
    const double tail = amp * r_now / (1.0 - r);
    if (tail <= amp_tol) return {n, tail};
  }
  throw ConvergenceError("state truncation did not reach the requested tolerance");
}

StateVector coherent_from_table(const StructureTable& table, Complex z, const StateOptions& opts) {
  if (!(opts.tol > 0.0)) throw DomainError("state tolerance must be positive");
  const double abs2 = radius_check(table, std::norm(z));

  StateVector v;
  v.params = table.params();
  if (abs2 == 0.0) {
    v.coeffs.assign(opts.trunc.value_or(0) + 1, Complex{});
    v.coeffs[0] = 1.0;
    return v;
  }

  const double f_norm = pfq_real(table, abs2, 1e-15);
  const bool on_boundary = table.params().p() == table.params().q() + 1;
  std::size_t N;
  double amp_tail;
  if (opts.trunc) {
    N = *opts.trunc;
    const double r = std::max(std::abs(z) / std::sqrt(table.e(N + 1)),
                              on_boundary ? std::abs(z) : 0.0);
    const double amp_log = double(N) * std::log(std::abs(z)) - 0.5 * table.rho_log(N);
    amp_tail = r < 1.0 ? std::exp(amp_log) * r / (1.0 - r) : kNaN;
  } else {
    const Truncation t =
        choose_truncation(table, std::abs(z), 0.1 * opts.tol * std::sqrt(f_norm), opts.max_trunc);
    N = t.level;
    amp_tail = t.amp_tail;
  }

  v.coeffs.assign(N + 1, Complex{});
  Complex c = 1.0 / std::sqrt(f_norm);
  v.coeffs[0] = c;
  for (std::size_t n = 1; n <= N; ++n) {
    c *= z / std::sqrt(table.e(n));
    v.coeffs[n] = c;
  }
  // Discarded weight: the squared amplitude tail, normalized, plus a
  // rounding allowance proportional to the expansion length.
  const double weight_tail =
      std::isnan(amp_tail) ? 1.0 : amp_tail * amp_tail / f_norm;
  v.tail_bound = weight_tail + 64.0 * double(N + 1) * std::numeric_limits<double>::epsilon();
  return v;
}

}  // namespace

StateVector bg_state(const ModelParams& params, Complex z, const StateOptions& opts) {
  StructureTable table(params);
  return coherent_from_table(table, z, opts);
}

StateVector kp_state(const ModelParams& params, Complex z, const StateOptions& opts) {
  validate(params);
  if (std::abs(z) == 0.0) return basis_state(params, 0, opts.trunc.value_or(0));
  const ModelParams dual = kp_dual(params);
  if (dual.p() > dual.q() + 1)
    throw DivergenceError("KP normalization series has zero radius for this family");
  StructureTable table(dual);
  StateVector v = coherent_from_table(table, z, opts);
  v.params = params;  // label the state with the original family
  return v;
}

OverlapResult overlap_detail(const ModelParams& params, Complex z, Complex w,
                             const StateOptions& opts) {
  StructureTable table(params);
  radius_check(table, std::norm(z));
  radius_check(table, std::norm(w));
  const double fz = pfq_real(table, std::norm(z), 1e-15);
  const double fw = pfq_real(table, std::norm(w), 1e-15);
  const Complex kernel = pfq(table, std::conj(z) * w, 1e-15).value / std::sqrt(fz * fw);

  StateOptions o = opts;
  const std::size_t nz = coherent_from_table(table, z, o).trunc();
  const std::size_t nw = coherent_from_table(table, w, o).trunc();
  o.trunc = std::max(nz, nw);
  const StateVector sz = coherent_from_table(table, z, o);
  const StateVector sw = coherent_from_table(table, w, o);
  const Complex coeff = inner(sz, sw);
  return {kernel, coeff, std::abs(kernel - coeff)};
}

Complex overlap(const ModelParams& params, Complex z, Complex w, const StateOptions& opts) {
  const OverlapResult r = overlap_detail(params, z, w, opts);
  if (r.gap > 1e-8)
    throw ConvergenceError("overlap kernel and coefficient routes disagree beyond tolerance");
  return r.kernel;
}

double annihilation_residual(const ModelParams& params, Complex z, const StateOptions& opts) {
  const StateVector v = bg_state(params, z, opts);
  if (v.trunc() == 0) return 0.0;
  const LadderOperator down = build_ladder(params, v.trunc(), LadderKind::lowering);
  StateVector w = apply(down, v);
  for (std::size_t n = 0; n < w.coeffs.size(); ++n) w.coeffs[n] -= z * v.coeffs[n];
  return norm(w);
}

double annihilation_residual_bound(const StateVector& state) {
  const double e_top = e_coeff(state.params, state.trunc() + 1);
  return std::sqrt(state.tail_bound * e_top);
}

BinomialPower gen_binom_power(const ModelParams& params, Complex x, Complex y, std::size_t l) {
  StructureTable table(params, l + 1);
  BinomialPower out;
  out.l = l;
  out.terms.resize(l + 1);
  for (std::size_t n = 0; n <= l; ++n) {
    const Complex xp = x == Complex{} ? (l - n == 0 ? Complex{1.0} : Complex{})
                                      : std::pow(x, double(l - n));
    const Complex yp = y == Complex{} ? (n == 0 ? Complex{1.0} : Complex{})
                                      : std::pow(y, double(n));
    out.terms[n] = table.func_binom(l, n) * xp * yp;
    out.value += out.terms[n];
  }
  return out;
}

namespace {

// Scaled binomial coefficient u_l = [x + y]^l / sqrt(rho(l)), evaluated
// term by term in the log domain so large l and labels stay in range, and
// its all-positive modulus majorant M_l = [|x| + |y|]^l / sqrt(rho(l)).
class ScaledBinomial {
 public:
  ScaledBinomial(const StructureTable& table, Complex x, Complex y)
      : table_(table),
        lx_(std::abs(x) > 0.0 ? std::log(std::abs(x)) : 0.0),
        ly_(std::abs(y) > 0.0 ? std::log(std::abs(y)) : 0.0),
        phx_(std::arg(x)),
        phy_(std::arg(y)),
        x_zero_(std::abs(x) == 0.0),
        y_zero_(std::abs(y) == 0.0) {}

  Complex scaled(std::size_t l) const {
    Complex acc{};
    const double half_rho = 0.5 * table_.rho_log(l);
    for (std::size_t n = 0; n <= l; ++n) {
      if (x_zero_ && n != l) continue;
      if (y_zero_ && n != 0) continue;
      const double lg = table_.func_binom_log(l, n) + double(l - n) * lx_ + double(n) * ly_ -
                        half_rho;
      const double ph = double(l - n) * phx_ + double(n) * phy_;
      acc += std::exp(lg) * Complex(std::cos(ph), std::sin(ph));
    }
    return acc;
  }

  double majorant(std::size_t l) const {
    double acc = 0.0;
    const double half_rho = 0.5 * table_.rho_log(l);
    for (std::size_t n = 0; n <= l; ++n) {
      if (x_zero_ && n != l) continue;
      if (y_zero_ && n != 0) continue;
      acc += std::exp(table_.func_binom_log(l, n) + double(l - n) * lx_ + double(n) * ly_ -
                      half_rho);
    }
    return acc;
  }

 private:
  const StructureTable& table_;
  double lx_, ly_, phx_, phy_;
  bool x_zero_, y_zero_;
};

}  // namespace

ShiftedState shifted_state_detail(const ModelParams& params, const ShiftSpec& shift,
                                  const StateOptions& opts) {
  if (!(opts.tol > 0.0)) throw DomainError("state tolerance must be positive");
  StructureTable table(params);
  const Complex x = shift.eps * shift.z;
  const Complex y = shift.lam * shift.sigma;
  const double rx = std::abs(x), ry = std::abs(y);
  const bool on_boundary = params.p() == params.q() + 1;

  ShiftedState out;
  out.state.params = params;

  if (rx + ry == 0.0) {
    out.state.coeffs.assign(opts.trunc.value_or(0) + 1, Complex{});
    out.state.coeffs[0] = 1.0;
    out.norm_module = 1.0;
    out.norm_literal = 1.0;
    out.norm_gap = 0.0;
    return out;
  }

  // The majorant series sum_l M_l^2 has radius (|x| + |y|)^2 in the
  // composite modulus, hence the convergence requirement below.
  if (on_boundary && !((rx + ry) * (rx + ry) < 1.0))
    throw DivergenceError("shifted-state normalization series diverges for these labels");

  const ScaledBinomial bin(table, x, y);
  std::vector<Complex> scaled{bin.scaled(0)};
  std::vector<double> major{bin.majorant(0)};
  double norm_module = std::norm(scaled[0]);
  double amp_tail = kNaN;

  const double r_lim = on_boundary ? rx + ry : 0.0;
  const std::size_t n_safe = std::max<std::size_t>(table.monotonic_from(), 4);
  std::size_t N = opts.trunc.value_or(0);
  const std::size_t cap = opts.trunc.value_or(opts.max_trunc);
  for (std::size_t l = 1; l <= cap; ++l) {
    scaled.push_back(bin.scaled(l));
    major.push_back(bin.majorant(l));
    norm_module += std::norm(scaled[l]);
    if (opts.trunc) continue;
    if (l < n_safe) continue;
    // Ratio test on the majorant amplitudes over a short window.
    double r = r_lim;
    for (std::size_t k = l - 3; k < l; ++k)
      if (major[k] > 0.0) r = std::max(r, major[k + 1] / major[k]);
    if (r >= 1.0) continue;
    const double tail = major[l] * r / (1.0 - r);
    if (tail <= 0.1 * opts.tol * std::sqrt(std::max(1.0, norm_module))) {
      N = l;
      amp_tail = tail;
      break;
    }
  }
  if (!opts.trunc && std::isnan(amp_tail))
    throw ConvergenceError("shifted-state truncation did not reach the requested tolerance");
  if (opts.trunc) {
    N = *opts.trunc;
    const double next = bin.majorant(N + 1);
    const double r = std::max(r_lim, major[N] > 0.0 ? next / major[N] : 0.0);
    amp_tail = r < 1.0 ? next / (1.0 - r) : kNaN;
  }

  out.state.coeffs.assign(N + 1, Complex{});
  const double root_norm = std::sqrt(norm_module);
  for (std::size_t l = 0; l <= N; ++l) out.state.coeffs[l] = scaled[l] / root_norm;
  const double weight_tail = std::isnan(amp_tail) ? 1.0 : amp_tail * amp_tail / norm_module;
  out.state.tail_bound =
      weight_tail + 64.0 * double(N + 1) * std::numeric_limits<double>::epsilon();

  out.norm_module = norm_module;
  const double z2 = std::norm(x + y);
  if (params.p() == params.q() + 1 && !(z2 < 1.0)) {
    out.norm_literal = kNaN;
    out.norm_gap = kNaN;
  } else {
    out.norm_literal = pfq_real(table, z2, 1e-15);
    out.norm_gap = std::abs(out.norm_literal - norm_module) / norm_module;
  }
  return out;
}

StateVector shifted_state(const ModelParams& params, const ShiftSpec& shift,
                          const StateOptions& opts) {
  return shifted_state_detail(params, shift, opts).state;
}

SequentialDisplacement sequential_displacement(const ModelParams& params, const ShiftSpec& shift,
                                               const StateOptions& opts) {
  StructureTable table(params);
  const Complex ez = shift.eps * shift.z;
  const Complex ls = shift.lam * shift.sigma;
  radius_check(table, std::norm(ez));
  radius_check(table, std::norm(ls));

  const ShiftedState target = shifted_state_detail(params, shift, opts);
  const std::size_t N = opts.trunc ? *opts.trunc : target.state.trunc() + 16;

  StateOptions bg_opts = opts;
  bg_opts.trunc = N;
  const StateVector v1 = coherent_from_table(table, ez, bg_opts);

  const LadderOperator up = build_ladder(params, N, LadderKind::raising);
  StateVector acc = v1;
  StateVector u = v1;
  double lost_amp = 0.0;
  std::size_t quiet = 0;
  for (std::size_t m = 1; m <= N && quiet < 3; ++m) {
    lost_amp += std::abs(ls) / table.e(m) * up.band[N + 1] * std::abs(u.coeffs[N]);
    u = apply(up, u);
    const Complex scale = ls / table.e(m);
    double unorm = 0.0;
    for (std::size_t k = 0; k <= N; ++k) {
      u.coeffs[k] *= scale;
      acc.coeffs[k] += u.coeffs[k];
      unorm += std::norm(u.coeffs[k]);
    }
    quiet = std::sqrt(unorm) <= 1e-18 ? quiet + 1 : 0;
  }

  const double norm_acc = norm(acc);
  const double f_ls = pfq_real(table, std::norm(ls), 1e-15);
  const double f_ez = pfq_real(table, std::norm(ez), 1e-15);

  SequentialDisplacement out;
  out.proportionality = norm_acc / std::sqrt(f_ls);
  out.predicted = std::sqrt(target.norm_module / (f_ls * f_ez));
  out.state.params = params;
  out.state.coeffs = std::move(acc.coeffs);
  for (Complex& c : out.state.coeffs) c /= norm_acc;
  const double lost = std::sqrt(v1.tail_bound) + lost_amp;
  out.state.tail_bound = lost * lost / (norm_acc * norm_acc);
  return out;
}

StateVector apply_pfq_lowering(const StructureTable& table, Complex w, const StateVector& v) {
  StateVector acc = v;
  std::vector<Complex> u = v.coeffs;
  const std::size_t N = v.trunc();
  for (std::size_t m = 1; m <= N; ++m) {
    const Complex scale = w / table.e(m);
    // lowering step folded with the series coefficient w^m / rho(m)
    for (std::size_t n = 0; n < N; ++n) u[n] = scale * std::sqrt(table.e(n + 1)) * u[n + 1];
    u[N] = Complex{};
    double unorm = 0.0;
    for (std::size_t n = 0; n + m <= N; ++n) {
      acc.coeffs[n] += u[n];
      unorm += std::norm(u[n]);
    }
    if (unorm == 0.0) break;
  }
  return acc;
}

DisplacementDiagonal displacement_diagonal_detail(const ModelParams& params, Complex z,
                                                  Complex sigma, const StateOptions& opts) {
  StructureTable table(params);
  radius_check(table, std::norm(z));
  radius_check(table, std::norm(sigma));
  const double fz = pfq_real(table, std::norm(z), 1e-15);
  const double fs = pfq_real(table, std::norm(sigma), 1e-15);
  const Complex fwd = pfq(table, z * std::conj(sigma), 1e-15).value;
  const Complex bwd = pfq(table, std::conj(z) * sigma, 1e-15).value;

  DisplacementDiagonal out;
  out.formula = fwd * bwd / (std::sqrt(fz) * fs);

  const StateVector s = coherent_from_table(table, sigma, opts);
  const StateVector t = apply_pfq_lowering(table, std::conj(z), s);
  out.matrix_element = inner(t, t) / (std::sqrt(fz) * fs);
  out.gap = std::abs(out.formula - out.matrix_element);
  return out;
}

Complex displacement_diagonal(const ModelParams& params, Complex z, Complex sigma,
                              const StateOptions& opts) {
  return displacement_diagonal_detail(params, z, sigma, opts).formula;
}

}  // namespace hypercs
