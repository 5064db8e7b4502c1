#ifndef HYPERCS_MODEL_HPP
#define HYPERCS_MODEL_HPP

#include <cstddef>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "hypercs/errors.hpp"

namespace hypercs {

/// Coefficient sets (a_1..a_p; b_1..b_q) selecting one generalized
/// coherent-state family.  p = q = 0 is the canonical oscillator; the
/// pseudoharmonic oscillator is p = 0, q = 1.
///
/// All coefficients must be positive and p <= q + 1, otherwise the
/// normalization series has zero radius; validate() enforces both.
struct ModelParams {
  std::vector<double> a;
  std::vector<double> b;

  std::size_t p() const noexcept { return a.size(); }
  std::size_t q() const noexcept { return b.size(); }

  bool operator==(const ModelParams&) const = default;
};

/// Returns params unchanged iff all coefficients are positive and
/// p <= q + 1; throws ValidationError otherwise.
ModelParams validate(ModelParams params);

/// Parses the textual form `p=0,q=1;a=;b=1.5` (semicolon-separated
/// sections, comma-separated coefficient lists).  The declared p/q must
/// match the list lengths.  The result is validated.
ModelParams parse_model_params(std::string_view text);

/// Canonical textual form of a parameter set (inverse of parsing).
std::string format_model_params(const ModelParams& params);

/// True when the family reduces to the canonical oscillator: p == q and
/// a == b elementwise, so every e(n) collapses to n.
bool is_canonical_equivalent(const ModelParams& params);

/// The dual family with the roles of a and b swapped.  Its structure
/// function equals rho_KP(n) = (n!)^2 / rho(n).
ModelParams kp_dual(const ModelParams& params);

/// e(n) = n * prod_j(b_j - 1 + n) / prod_i(a_i - 1 + n), n >= 1.
double e_coeff(const ModelParams& params, std::size_t n);

/// ln rho(n) with rho(n) = prod_{s<=n} e(s); rho(0) = 1.
double rho_log(const ModelParams& params, std::size_t n);
double rho(const ModelParams& params, std::size_t n);

/// rho(l) / (rho(n) rho(l-n)), the functional binomial coefficient.
double func_binom(const ModelParams& params, std::size_t l, std::size_t n);

/// ln rho_KP(n) with rho_KP(n) = (n!)^2 / rho(n).
double kp_rho_log(const ModelParams& params, std::size_t n);
double kp_rho(const ModelParams& params, std::size_t n);

/// Radius of convergence in the series variable x = |z|^2: infinite for
/// p <= q, and 1 for p = q + 1 (where lim e(n) = 1).
double radius_of_convergence(const ModelParams& params);

/// Precomputed ln rho(n) / e(n) ladder shared by every series and state
/// constructor.  The table extends itself on demand behind a mutex, so a
/// const reference can be shared freely across threads.
class StructureTable {
 public:
  explicit StructureTable(ModelParams params, std::size_t initial = 64);

  StructureTable(const StructureTable&) = delete;
  StructureTable& operator=(const StructureTable&) = delete;

  const ModelParams& params() const noexcept { return params_; }

  double e(std::size_t n) const;        // n >= 1
  double rho_log(std::size_t n) const;  // rho_log(0) = 0
  double rho(std::size_t n) const;
  double func_binom(std::size_t l, std::size_t n) const;
  double func_binom_log(std::size_t l, std::size_t n) const;

  /// lim_{n->inf} e(n): +infinity for p <= q, 1 for p = q + 1.
  double e_limit() const noexcept { return e_limit_; }

  /// Index beyond which e(n) is guaranteed monotone, so the geometric
  /// tail bound built from the last term ratio is valid.
  std::size_t monotonic_from() const noexcept { return monotonic_from_; }

 private:
  void ensure(std::size_t n) const;

  ModelParams params_;
  double e_limit_;
  std::size_t monotonic_from_;
  mutable std::mutex mutex_;
  mutable std::vector<double> e_;        // e_[n] for n >= 1, e_[0] unused
  mutable std::vector<double> rho_log_;  // rho_log_[n]
};

}  // namespace hypercs

#endif
