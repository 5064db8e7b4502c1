// Command-line front end: state construction, shifted-argument states and
// the two-route displacement comparison, overlaps, moment tables, and the
// full verification suite.  Emits JSON (17 significant digits, so doubles
// round-trip) or CSV.
//
// Exit codes: 0 success, 1 input/validation error, 2 numerical or
// verification failure.

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypercs/errors.hpp"
#include "hypercs/fock.hpp"
#include "hypercs/kernels.hpp"
#include "hypercs/model.hpp"
#include "hypercs/states.hpp"
#include "hypercs/verify.hpp"

namespace {

using hypercs::Complex;
using Json = nlohmann::ordered_json;

// ------------------------------------------------------------- formatting

void dump_json(std::string& out, const Json& j) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        dump_json(out, it.value());
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const Json& item : j) {
        if (!first) out += ',';
        first = false;
        dump_json(out, item);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        break;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      break;
    }
    default:
      out += j.dump();
  }
}

void emit_json(const Json& j) {
  std::string out;
  dump_json(out, j);
  out += '\n';
  std::fputs(out.c_str(), stdout);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json coeffs_json(const hypercs::StateVector& v) {
  Json arr = Json::array();
  for (const Complex& c : v.coeffs) arr.push_back(complex_json(c));
  return arr;
}

double norm_residual(const hypercs::StateVector& v) {
  double n2 = 0.0;
  for (const Complex& c : v.coeffs) n2 += std::norm(c);
  return std::abs(n2 - 1.0);
}

// ---------------------------------------------------------------- parsing

Complex parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw hypercs::ValidationError("empty complex literal");

  const auto to_real = [](const std::string& t) -> double {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &pos);
    } catch (const std::exception&) {
      throw hypercs::ValidationError("invalid complex literal '" + t + "'");
    }
    if (pos != t.size()) throw hypercs::ValidationError("invalid complex literal '" + t + "'");
    return v;
  };

  if (s.back() != 'i' && s.back() != 'I') return Complex{to_real(s), 0.0};

  s.pop_back();  // drop the i
  // split at the last +/- that is not an exponent sign and not leading
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return Complex{0.0, to_real(s)};
  return Complex{to_real(s.substr(0, split)), to_real(s.substr(split))};
}

// ------------------------------------------------------------- run config

struct CommonOptions {
  std::string params_text = "p=0,q=0;a=;b=";
  double tol = 1e-10;
  std::string trunc = "auto";
  std::string format = "json";
  std::uint64_t seed = 12345;
};

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--params", common.params_text,
                  "family parameters, e.g. \"p=0,q=1;a=;b=1.5\"");
  cmd->add_option("--tol", common.tol, "tolerance in (0, 1e-2]");
  cmd->add_option("--trunc", common.trunc, "truncation level or 'auto'");
  cmd->add_option("--format", common.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--seed", common.seed, "seed for randomized sweeps");
}

struct RunConfig {
  hypercs::ModelParams params;
  double tol;
  std::optional<std::size_t> trunc;
  bool csv;
  std::uint64_t seed;
};

RunConfig resolve(const CommonOptions& common) {
  RunConfig cfg;
  cfg.params = hypercs::parse_model_params(common.params_text);
  if (!(common.tol > 0.0) || common.tol > 1e-2)
    throw hypercs::ValidationError("tol must lie in (0, 1e-2]");
  cfg.tol = common.tol;
  if (common.trunc != "auto") {
    long n = 0;
    try {
      n = std::stol(common.trunc);
    } catch (const std::exception&) {
      throw hypercs::ValidationError("--trunc expects a level or 'auto'");
    }
    if (n < 0 || n > 512) throw hypercs::ValidationError("--trunc must lie in [0, 512]");
    cfg.trunc = static_cast<std::size_t>(n);
  }
  cfg.csv = common.format == "csv";
  cfg.seed = common.seed;
  return cfg;
}

hypercs::StateOptions state_options(const RunConfig& cfg) {
  hypercs::StateOptions o;
  o.tol = cfg.tol;
  o.trunc = cfg.trunc;
  o.max_trunc = 512;  // auto-truncation cap for CLI runs
  return o;
}

std::size_t env_threads() {
  if (const char* v = std::getenv("HYPERCS_THREADS")) {
    const long n = std::atol(v);
    if (n > 0) return static_cast<std::size_t>(n);
  }
  return 0;
}

// --------------------------------------------------------------- commands

int cmd_state(const RunConfig& cfg, const std::string& kind, const std::string& z_text) {
  const Complex z = parse_complex(z_text);
  const hypercs::StateVector v = kind == "bg"
                                     ? hypercs::bg_state(cfg.params, z, state_options(cfg))
                                     : hypercs::kp_state(cfg.params, z, state_options(cfg));
  if (cfg.csv) {
    std::printf("n,re,im\n");
    for (std::size_t n = 0; n < v.coeffs.size(); ++n)
      std::printf("%zu,%s,%s\n", n, fmt_double(v.coeffs[n].real()).c_str(),
                  fmt_double(v.coeffs[n].imag()).c_str());
    return 0;
  }
  Json out;
  out["params"] = hypercs::format_model_params(cfg.params);
  out["kind"] = kind;
  out["z"] = complex_json(z);
  out["tol"] = cfg.tol;
  out["trunc"] = v.trunc();
  out["coeffs"] = coeffs_json(v);
  out["norm_residual"] = norm_residual(v);
  out["tail_bound"] = v.tail_bound;
  emit_json(out);
  return 0;
}

int cmd_shift(const RunConfig& cfg, double eps, const std::string& z_text, double lam,
              const std::string& sigma_text) {
  hypercs::ShiftSpec shift;
  shift.eps = eps;
  shift.lam = lam;
  shift.z = parse_complex(z_text);
  shift.sigma = parse_complex(sigma_text);

  const hypercs::ShiftedState direct =
      hypercs::shifted_state_detail(cfg.params, shift, state_options(cfg));
  const hypercs::SequentialDisplacement seq =
      hypercs::sequential_displacement(cfg.params, shift, state_options(cfg));

  const std::size_t hi = std::max(direct.state.trunc(), seq.state.trunc());
  double max_gap = 0.0;
  for (std::size_t n = 0; n <= hi; ++n) {
    const Complex a = n < direct.state.coeffs.size() ? direct.state.coeffs[n] : Complex{};
    const Complex b = n < seq.state.coeffs.size() ? seq.state.coeffs[n] : Complex{};
    max_gap = std::max(max_gap, std::abs(a - b));
  }

  if (cfg.csv) {
    std::printf("n,shifted_re,shifted_im,sequential_re,sequential_im,abs_gap\n");
    for (std::size_t n = 0; n <= hi; ++n) {
      const Complex a = n < direct.state.coeffs.size() ? direct.state.coeffs[n] : Complex{};
      const Complex b = n < seq.state.coeffs.size() ? seq.state.coeffs[n] : Complex{};
      std::printf("%zu,%s,%s,%s,%s,%s\n", n, fmt_double(a.real()).c_str(),
                  fmt_double(a.imag()).c_str(), fmt_double(b.real()).c_str(),
                  fmt_double(b.imag()).c_str(), fmt_double(std::abs(a - b)).c_str());
    }
    return 0;
  }

  Json out;
  out["params"] = hypercs::format_model_params(cfg.params);
  out["eps"] = shift.eps;
  out["z"] = complex_json(shift.z);
  out["lam"] = shift.lam;
  out["sigma"] = complex_json(shift.sigma);
  out["label"] = complex_json(shift.label());
  out["tol"] = cfg.tol;
  out["shifted"] = Json{{"trunc", direct.state.trunc()}, {"coeffs", coeffs_json(direct.state)}};
  out["sequential"] = Json{{"trunc", seq.state.trunc()}, {"coeffs", coeffs_json(seq.state)}};
  out["max_entrywise_gap"] = max_gap;
  out["proportionality"] = Json{{"measured", seq.proportionality},
                                {"predicted", seq.predicted},
                                {"gap", std::abs(seq.proportionality - seq.predicted)}};
  out["norm_module"] = direct.norm_module;
  out["norm_literal"] = direct.norm_literal;
  out["norm_diagnostic_gap"] = direct.norm_gap;
  emit_json(out);
  return 0;
}

int cmd_overlap(const RunConfig& cfg, const std::string& z_text, const std::string& w_text) {
  const Complex z = parse_complex(z_text);
  const Complex w = parse_complex(w_text);
  const hypercs::OverlapResult r = hypercs::overlap_detail(cfg.params, z, w, state_options(cfg));
  if (cfg.csv) {
    std::printf("kernel_re,kernel_im,coefficient_re,coefficient_im,gap\n");
    std::printf("%s,%s,%s,%s,%s\n", fmt_double(r.kernel.real()).c_str(),
                fmt_double(r.kernel.imag()).c_str(), fmt_double(r.coefficient.real()).c_str(),
                fmt_double(r.coefficient.imag()).c_str(), fmt_double(r.gap).c_str());
    return 0;
  }
  Json out;
  out["params"] = hypercs::format_model_params(cfg.params);
  out["z"] = complex_json(z);
  out["w"] = complex_json(w);
  out["kernel"] = complex_json(r.kernel);
  out["coefficient"] = complex_json(r.coefficient);
  out["gap"] = r.gap;
  out["modulus"] = std::abs(r.kernel);
  emit_json(out);
  return 0;
}

int cmd_moments(const RunConfig& cfg, std::size_t l_max) {
  if (l_max > 30) throw hypercs::ValidationError("--lmax must not exceed 30");
  const hypercs::MomentFunctional mf(cfg.params);
  const bool supported = hypercs::has_quadrature_kernel(cfg.params);

  Json rows = Json::array();
  if (cfg.csv)
    std::printf(supported ? "l,moment_exact,moment_quadrature,rel_gap\n" : "l,moment_exact\n");
  for (std::size_t l = 0; l <= l_max; ++l) {
    const double exact = hypercs::moment_exact(mf, l);
    if (cfg.csv) {
      if (supported) {
        const double quad = hypercs::moment_quadrature(cfg.params, l, 1e-8);
        std::printf("%zu,%s,%s,%s\n", l, fmt_double(exact).c_str(), fmt_double(quad).c_str(),
                    fmt_double(std::abs(quad / exact - 1.0)).c_str());
      } else {
        std::printf("%zu,%s\n", l, fmt_double(exact).c_str());
      }
      continue;
    }
    Json row;
    row["l"] = l;
    row["moment_exact"] = exact;
    if (supported) {
      const double quad = hypercs::moment_quadrature(cfg.params, l, 1e-8);
      row["moment_quadrature"] = quad;
      row["rel_gap"] = std::abs(quad / exact - 1.0);
    }
    rows.push_back(row);
  }
  if (cfg.csv) return 0;
  Json out;
  out["params"] = hypercs::format_model_params(cfg.params);
  out["normalization"] = mf.normalization;
  out["kernel_supported"] = supported;
  out["rows"] = rows;
  emit_json(out);
  return 0;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite_text) {
  hypercs::VerifyOptions opts;
  opts.tol = cfg.tol;
  opts.seed = cfg.seed;
  opts.threads = env_threads();
  const hypercs::VerifyReport report =
      hypercs::run_verification(cfg.params, hypercs::parse_suite(suite_text), opts);

  if (cfg.csv) {
    std::printf("name,status,max_err,tol\n");
    for (const auto& c : report.checks)
      std::printf("%s,%s,%s,%s\n", c.name.c_str(), c.status.c_str(),
                  fmt_double(c.max_err).c_str(), fmt_double(c.tol).c_str());
  } else {
    Json checks = Json::array();
    for (const auto& c : report.checks)
      checks.push_back(Json{{"name", c.name},
                            {"identity", c.identity},
                            {"status", c.status},
                            {"max_err", c.max_err},
                            {"tol", c.tol}});
    Json out;
    out["suite"] = report.suite;
    out["params"] = hypercs::format_model_params(cfg.params);
    out["tol"] = cfg.tol;
    out["seed"] = cfg.seed;
    out["checks"] = checks;
    out["failed_count"] = report.failed_count;
    emit_json(out);
  }
  return report.failed_count == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized hypergeometric coherent states on truncated Fock spaces"};
  app.require_subcommand(1);

  CommonOptions common;

  auto* state = app.add_subcommand("state", "construct a coherent state");
  add_common(state, common);
  std::string kind = "bg";
  std::string z_text = "0+0i";
  state->add_option("--kind", kind, "bg or kp")->check(CLI::IsMember({"bg", "kp"}));
  state->add_option("--z", z_text, "complex label, e.g. 1+0i");

  auto* shift = app.add_subcommand("shift", "shifted-argument state and two-route comparison");
  add_common(shift, common);
  double eps = 1.0, lam = 1.0;
  std::string shift_z = "0+0i", shift_sigma = "0+0i";
  shift->add_option("--eps", eps, "real factor of z");
  shift->add_option("--z", shift_z, "complex label z");
  shift->add_option("--lam", lam, "real factor of sigma");
  shift->add_option("--sigma", shift_sigma, "complex label sigma");

  auto* overlap = app.add_subcommand("overlap", "overlap of two coherent states");
  add_common(overlap, common);
  std::string ov_z = "0+0i", ov_w = "0+0i";
  overlap->add_option("--z", ov_z, "first label");
  overlap->add_option("--w", ov_w, "second label");

  auto* moments = app.add_subcommand("moments", "measure moments, exact and by quadrature");
  add_common(moments, common);
  std::size_t l_max = 10;
  moments->add_option("--lmax", l_max, "largest moment order (<= 30)");

  auto* verify = app.add_subcommand("verify", "run an identity verification suite");
  add_common(verify, common);
  std::string suite = "all";
  verify->add_option("--suite", suite, "all, states, kernels, or limits")
      ->check(CLI::IsMember({"all", "states", "kernels", "limits"}));

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = resolve(common);
    if (state->parsed()) return cmd_state(cfg, kind, z_text);
    if (shift->parsed()) return cmd_shift(cfg, eps, shift_z, lam, shift_sigma);
    if (overlap->parsed()) return cmd_overlap(cfg, ov_z, ov_w);
    if (moments->parsed()) return cmd_moments(cfg, l_max);
    if (verify->parsed()) return cmd_verify(cfg, suite);
  } catch (const hypercs::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const hypercs::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const hypercs::ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const hypercs::TruncationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const hypercs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
