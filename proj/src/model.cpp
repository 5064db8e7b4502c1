#include "hypercs/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace hypercs {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view s, std::string_view what) {
  const std::string tmp(trim(s));
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tmp, &pos);
  } catch (const std::exception&) {
    throw ValidationError("invalid real number in " + std::string(what) + ": '" + tmp + "'");
  }
  if (pos != tmp.size())
    throw ValidationError("trailing characters in " + std::string(what) + ": '" + tmp + "'");
  return v;
}

std::size_t parse_count(std::string_view s, std::string_view what) {
  const double v = parse_real(s, what);
  if (v < 0.0 || v != std::floor(v))
    throw ValidationError(std::string(what) + " must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

std::vector<double> parse_list(std::string_view s, std::string_view what) {
  std::vector<double> out;
  s = trim(s);
  if (s.empty()) return out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    const std::string_view item =
        s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(parse_real(item, what));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

ModelParams validate(ModelParams params) {
  for (double ai : params.a)
    if (!(ai > 0.0) || !std::isfinite(ai))
      throw ValidationError("model coefficients a_i must be positive and finite");
  for (double bj : params.b)
    if (!(bj > 0.0) || !std::isfinite(bj))
      throw ValidationError("model coefficients b_j must be positive and finite");
  if (params.p() > params.q() + 1)
    throw ValidationError("zero radius of convergence: p exceeds q + 1");
  return params;
}

ModelParams parse_model_params(std::string_view text) {
  std::size_t p_declared = std::numeric_limits<std::size_t>::max();
  std::size_t q_declared = std::numeric_limits<std::size_t>::max();
  ModelParams params;
  bool saw_a = false, saw_b = false;

  std::size_t start = 0;
  const std::string owned(text);
  while (start <= owned.size()) {
    const std::size_t semi = owned.find(';', start);
    const std::string_view section =
        trim(std::string_view(owned).substr(start, semi == std::string::npos ? std::string::npos : semi - start));
    if (!section.empty()) {
      // A section is either a single `key=values` or comma-joined
      // `k=v` assignments (the `p=0,q=1` header).
      const std::size_t eq = section.find('=');
      if (eq == std::string_view::npos)
        throw ValidationError("expected key=value in parameter section '" + std::string(section) + "'");
      const std::string_view key = trim(section.substr(0, eq));
      const std::string_view rest = section.substr(eq + 1);
      if (key == "a") {
        params.a = parse_list(rest, "a");
        saw_a = true;
      } else if (key == "b") {
        params.b = parse_list(rest, "b");
        saw_b = true;
      } else if (key == "p" || key == "q") {
        // split the remainder on commas into further assignments
        std::string_view cur_key = key;
        std::string_view tail = rest;
        while (true) {
          const std::size_t comma = tail.find(',');
          const std::string_view val =
              tail.substr(0, comma == std::string_view::npos ? std::string_view::npos : comma);
          if (cur_key == "p")
            p_declared = parse_count(val, "p");
          else if (cur_key == "q")
            q_declared = parse_count(val, "q");
          else
            throw ValidationError("unknown parameter key '" + std::string(cur_key) + "'");
          if (comma == std::string_view::npos) break;
          tail = tail.substr(comma + 1);
          const std::size_t eq2 = tail.find('=');
          if (eq2 == std::string_view::npos)
            throw ValidationError("expected key=value after ',' in '" + std::string(section) + "'");
          cur_key = trim(tail.substr(0, eq2));
          tail = tail.substr(eq2 + 1);
        }
      } else {
        throw ValidationError("unknown parameter key '" + std::string(key) + "'");
      }
    }
    if (semi == std::string::npos) break;
    start = semi + 1;
  }

  if (p_declared == std::numeric_limits<std::size_t>::max() ||
      q_declared == std::numeric_limits<std::size_t>::max())
    throw ValidationError("parameter string must declare both p and q");
  if (!saw_a && p_declared > 0)
    throw ValidationError("parameter string declares p > 0 but has no a= section");
  if (!saw_b && q_declared > 0)
    throw ValidationError("parameter string declares q > 0 but has no b= section");
  if (params.a.size() != p_declared)
    throw ValidationError("declared p does not match the length of the a list");
  if (params.b.size() != q_declared)
    throw ValidationError("declared q does not match the length of the b list");
  return validate(std::move(params));
}

std::string format_model_params(const ModelParams& params) {
  std::ostringstream os;
  os.precision(17);
  os << "p=" << params.p() << ",q=" << params.q() << ";a=";
  for (std::size_t i = 0; i < params.a.size(); ++i) os << (i ? "," : "") << params.a[i];
  os << ";b=";
  for (std::size_t j = 0; j < params.b.size(); ++j) os << (j ? "," : "") << params.b[j];
  return os.str();
}

bool is_canonical_equivalent(const ModelParams& params) {
  return params.p() == params.q() && params.a == params.b;
}

ModelParams kp_dual(const ModelParams& params) { return ModelParams{params.b, params.a}; }

double e_coeff(const ModelParams& params, std::size_t n) {
  if (n == 0) throw DomainError("e(n) requires n >= 1");
  const double x = static_cast<double>(n);
  double num = x;
  for (double bj : params.b) num *= bj - 1.0 + x;
  double den = 1.0;
  for (double ai : params.a) den *= ai - 1.0 + x;
  return num / den;
}

double rho_log(const ModelParams& params, std::size_t n) {
  double acc = 0.0;
  for (std::size_t s = 1; s <= n; ++s) acc += std::log(e_coeff(params, s));
  return acc;
}

double rho(const ModelParams& params, std::size_t n) { return std::exp(rho_log(params, n)); }

double func_binom(const ModelParams& params, std::size_t l, std::size_t n) {
  if (n > l) throw DomainError("func_binom requires n <= l");
  n = std::min(n, l - n);  // symmetric by construction, bit-exactly
  return std::exp(rho_log(params, l) - rho_log(params, n) - rho_log(params, l - n));
}

double kp_rho_log(const ModelParams& params, std::size_t n) {
  return 2.0 * std::lgamma(static_cast<double>(n) + 1.0) - rho_log(params, n);
}

double kp_rho(const ModelParams& params, std::size_t n) { return std::exp(kp_rho_log(params, n)); }

double radius_of_convergence(const ModelParams& params) {
  validate(params);
  if (params.p() <= params.q()) return std::numeric_limits<double>::infinity();
  return 1.0;
}

StructureTable::StructureTable(ModelParams params, std::size_t initial)
    : params_(validate(std::move(params))) {
  e_limit_ = params_.p() <= params_.q() ? std::numeric_limits<double>::infinity() : 1.0;

  // e(n) is a fixed rational function of n; beyond every coefficient's
  // scale its log-derivative has a fixed sign, which makes the ratio-test
  // tail bound safe.  The bound below is coarse but cheap.
  double m = 0.0;
  for (double ai : params_.a) m = std::max(m, std::abs(ai - 1.0));
  for (double bj : params_.b) m = std::max(m, std::abs(bj - 1.0));
  monotonic_from_ =
      2 + static_cast<std::size_t>(std::ceil(3.0 * (m + 1.0) * double(params_.p() + params_.q() + 2)));

  e_.assign(1, 0.0);
  rho_log_.assign(1, 0.0);
  ensure(initial);
}

void StructureTable::ensure(std::size_t n) const {
  std::lock_guard<std::mutex> lock(mutex_);
  while (e_.size() <= n + 1) {
    const std::size_t s = e_.size();
    const double es = e_coeff(params_, s);
    e_.push_back(es);
    rho_log_.push_back(rho_log_.back() + std::log(es));
  }
}

double StructureTable::e(std::size_t n) const {
  if (n == 0) throw DomainError("e(n) requires n >= 1");
  ensure(n);
  std::lock_guard<std::mutex> lock(mutex_);
  return e_[n];
}

double StructureTable::rho_log(std::size_t n) const {
  ensure(n);
  std::lock_guard<std::mutex> lock(mutex_);
  return rho_log_[n];
}

double StructureTable::rho(std::size_t n) const { return std::exp(rho_log(n)); }

double StructureTable::func_binom_log(std::size_t l, std::size_t n) const {
  if (n > l) throw DomainError("func_binom requires n <= l");
  n = std::min(n, l - n);
  ensure(l);
  std::lock_guard<std::mutex> lock(mutex_);
  return rho_log_[l] - rho_log_[n] - rho_log_[l - n];
}

double StructureTable::func_binom(std::size_t l, std::size_t n) const {
  return std::exp(func_binom_log(l, n));
}

}  // namespace hypercs
