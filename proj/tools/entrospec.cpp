// entrospec: entropy curves, unitary-equivalence tests and spectrum recovery
// for density matrices stored as JSON matrix files.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "entrospec/entrospec.hpp"
#include "entrospec/io.hpp"
#include "entrospec/selftest.hpp"

namespace {

using namespace entrospec;
using nlohmann::json;

enum Exit : int {
  kOk = 0,
  kInputError = 1,
  kDimensionMismatch = 2,
  kNotEquivalent = 3,
  kRecoveryError = 4,
  kSelftestFailed = 5,
};

struct Options {
  ToleranceConfig tols;

  std::string file_a, file_b, out_path;
  double a = 0.9;
  int points = 64;

  std::string mode = "t2";
  std::vector<double> nodes;
  double entropy_tol = 1e-9;
  double spectrum_tol = 1e-8;

  std::string derivative = "analytic";
  double fd_step = 1e-6;
  double trim_tol = 1e-7;
  double root_imag_tol = 1e-6;

  std::uint64_t seed = 42;
};

json to_json(const RealVector<double>& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

void emit(const json& doc) { std::cout << doc.dump(2) << '\n'; }

QuantumState<double> load_state(const std::string& path, const ToleranceConfig& tols) {
  const auto m = io::read_matrix_file(path);
  try {
    return validate_state(m, tols);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.detail());
  }
}

int cmd_entropy(const Options& o) {
  const auto s = load_state(o.file_a, o.tols);
  const auto sp = hermitian_spectrum(s, o.tols);
  emit({{"n", s.dim()}, {"spectrum", to_json(sp.values)}, {"entropy_bits", entropy_of_spectrum(sp)}});
  return kOk;
}

int cmd_curve(const Options& o) {
  const auto s = load_state(o.file_a, o.tols);
  const EntropyCurve<double> curve(s, o.tols);
  if (o.out_path.empty() || o.out_path == "-") {
    io::write_curve_csv(std::cout, curve, o.a, o.points);
    return kOk;
  }
  std::ofstream out(o.out_path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + o.out_path);
  io::write_curve_csv(out, curve, o.a, o.points);
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + o.out_path);
  std::cerr << "wrote " << o.points << " rows to " << o.out_path << '\n';
  return kOk;
}

json report_json(const EquivalenceReport<double>& r) {
  json gaps = json::array();
  for (const auto& [lambda, gap] : r.per_node_gaps) gaps.push_back({{"lambda", lambda}, {"gap", gap}});
  json doc = {
      {"verdict", std::string(to_string(r.verdict))},
      {"method", std::string(to_string(r.method))},
      {"max_entropy_gap", r.max_entropy_gap},
      {"max_spectrum_gap", r.max_spectrum_gap},
      {"per_node_gaps", std::move(gaps)},
      {"spectra", {{"rho", to_json(r.spectrum_rho)}, {"sigma", to_json(r.spectrum_sigma)}}},
      {"tolerances", {{"entropy_tol", r.entropy_tol}, {"spectrum_tol", r.spectrum_tol}}},
      {"witness", nullptr},
  };
  if (r.witness) {
    doc["witness"] = io::matrix_to_json(*r.witness);
    doc["witness_residual"] = r.witness_residual;
    doc["unitarity_residual"] = r.unitarity_residual;
  }
  return doc;
}

int cmd_equiv(const Options& o) {
  const auto rho = load_state(o.file_a, o.tols);
  const auto sigma = load_state(o.file_b, o.tols);
  EquivalenceConfig<double> cfg;
  cfg.a = o.a;
  cfg.grid_points = o.points;
  cfg.nodes = o.nodes;
  cfg.entropy_tol = o.entropy_tol;
  cfg.spectrum_tol = o.spectrum_tol;
  cfg.tols = o.tols;

  EquivalenceReport<double> r;
  if (o.mode == "spectral")
    r = test_spectral(rho, sigma, cfg);
  else if (o.mode == "t1")
    r = test_theorem1_grid(rho, sigma, cfg);
  else
    r = test_theorem2_nodes(rho, sigma, cfg);
  emit(report_json(r));
  return r.equivalent() ? kOk : kNotEquivalent;
}

int cmd_recover(const Options& o) {
  const auto s = load_state(o.file_a, o.tols);
  RecoveryConfig<double> cfg;
  cfg.nodes = o.nodes;
  cfg.fd_step = o.fd_step;
  cfg.coeff_trim_tol = o.trim_tol;
  cfg.root_imag_tol = o.root_imag_tol;
  const auto mode = o.derivative == "fd" ? DerivativeMode::FiniteDifference : DerivativeMode::Analytic;
  const auto truth = hermitian_spectrum(s, o.tols);

  RecoveredSpectrum<double> rec;
  try {
    rec = recover_spectrum(exact_oracle(s, mode, o.tols), cfg);
  } catch (const Error& e) {
    std::cerr << "recovery failed: " << e.what() << '\n';
    return kRecoveryError;
  }
  emit({
      {"n", s.dim()},
      {"derivative", o.derivative},
      {"recovered", to_json(rec.values)},
      {"true", to_json(truth.values)},
      {"linf_error", max_abs(RealVector<double>(rec.values - truth.values))},
      {"fit_residual", rec.residual},
      {"trimmed_degree", rec.trimmed_degree},
      {"sum_drift", rec.sum_drift},
  });
  return kOk;
}

int cmd_selftest(const Options& o) {
  SelftestOptions st;
  st.seed = o.seed;
  st.entropy_tol = o.entropy_tol;
  st.spectrum_tol = o.spectrum_tol;
  const auto results = run_selftest(st);

  bool all = true;
  json props = json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    json p = {{"name", r.name}, {"passed", r.passed}, {"max_residual", r.max_residual},
              {"threshold", r.threshold}};
    if (!r.note.empty()) p["note"] = r.note;
    props.push_back(std::move(p));
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << "  max_residual=" << r.max_residual
              << " threshold=" << r.threshold << (r.note.empty() ? "" : "  (" + r.note + ")") << '\n';
  }
  emit({{"seed", o.seed}, {"passed", all}, {"properties", std::move(props)}});
  return all ? kOk : kSelftestFailed;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::DimensionMismatch: return kDimensionMismatch;
    case ErrorCode::IllConditioned:
    case ErrorCode::ComplexRoots:
    case ErrorCode::DegreeDeficit:
    case ErrorCode::OracleDomain: return kRecoveryError;
    default: return kInputError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-curve tools for finite-dimensional quantum states"};
  app.require_subcommand(1);
  Options o;

  auto add_validation = [&](CLI::App* sub) {
    sub->add_option("--herm-tol", o.tols.herm_tol, "Hermiticity tolerance");
    sub->add_option("--psd-tol", o.tols.psd_tol, "Positive-semidefinite tolerance");
    sub->add_option("--trace-tol", o.tols.trace_tol, "Unit-trace tolerance");
  };

  auto* entropy = app.add_subcommand("entropy", "Spectrum and von Neumann entropy of a state");
  entropy->add_option("file", o.file_a, "Matrix file")->required()->check(CLI::ExistingFile);
  add_validation(entropy);

  auto* curve = app.add_subcommand("curve", "Entropy along the depolarizing line as CSV");
  curve->add_option("file", o.file_a, "Matrix file")->required()->check(CLI::ExistingFile);
  curve->add_option("--a", o.a, "Upper end of the lambda grid")->check(CLI::Range(0.0, 1.0));
  curve->add_option("--points", o.points, "Number of grid nodes")->check(CLI::Range(2, 1 << 24));
  curve->add_option("--out", o.out_path, "Output CSV path (default stdout)");
  add_validation(curve);

  auto* equiv = app.add_subcommand("equiv", "Test two states for unitary equivalence");
  equiv->add_option("first", o.file_a, "First matrix file")->required()->check(CLI::ExistingFile);
  equiv->add_option("second", o.file_b, "Second matrix file")->required()->check(CLI::ExistingFile);
  equiv->add_option("--mode", o.mode, "spectral | t1 (dense grid) | t2 (2n nodes)")
      ->check(CLI::IsMember({"spectral", "t1", "t2"}));
  equiv->add_option("--nodes", o.nodes, "The 2n nodes for t2 mode")->delimiter(',');
  equiv->add_option("--entropy-tol", o.entropy_tol, "Entropy gap tolerance in bits");
  equiv->add_option("--spectrum-tol", o.spectrum_tol, "Spectrum agreement tolerance");
  equiv->add_option("--a", o.a, "Upper end of the t1 grid")->check(CLI::Range(0.0, 1.0));
  equiv->add_option("--points", o.points, "Number of t1 grid nodes")->check(CLI::Range(2, 1 << 24));
  add_validation(equiv);

  auto* recover = app.add_subcommand("recover", "Recover a spectrum from its entropy curve");
  recover->add_option("file", o.file_a, "Matrix file")->required()->check(CLI::ExistingFile);
  recover->add_option("--derivative", o.derivative, "analytic | fd")
      ->check(CLI::IsMember({"analytic", "fd"}));
  recover->add_option("--nodes", o.nodes, "Fit nodes in (0, 0.9]")->delimiter(',');
  recover->add_option("--fd-step", o.fd_step, "Relative finite-difference step");
  recover->add_option("--trim-tol", o.trim_tol, "Relative coefficient trimming tolerance");
  recover->add_option("--root-imag-tol", o.root_imag_tol, "Largest accepted imaginary root part");
  add_validation(recover);

  auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant suites");
  selftest->add_option("--seed", o.seed, "Random seed")->envname("ENTROSPEC_SEED");
  selftest->add_option("--entropy-tol", o.entropy_tol, "Entropy gap tolerance in bits");
  selftest->add_option("--spectrum-tol", o.spectrum_tol, "Spectrum agreement tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (entropy->parsed()) return cmd_entropy(o);
    if (curve->parsed()) return cmd_curve(o);
    if (equiv->parsed()) return cmd_equiv(o);
    if (recover->parsed()) return cmd_recover(o);
    if (selftest->parsed()) return cmd_selftest(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kInputError;
}
