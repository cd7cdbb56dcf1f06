#include "commands.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qboson/fock.hpp"
#include "qboson/linalg.hpp"
#include "qboson/spectral.hpp"
#include "qboson/swanson.hpp"

#ifndef QBOSON_VERSION
#define QBOSON_VERSION "0.0.0"
#endif

namespace qboson::cli {
namespace {

constexpr std::size_t kDefaultLevels = 5;
constexpr double kDefaultTol = 1e-6;
constexpr std::size_t kMetricNmax = 40;

std::size_t default_nmax(std::size_t modes) {
  if (modes == 1) return 60;
  if (modes == 2) return 20;
  return 6;
}

std::string fmt(double x, int digits) {
  char buf[64];
  if (x == 0.0) x = 0.0;  // no "-0"
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string vec9(const CVector& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt9(v(i));
  return s + "]";
}

void print_matrix(std::ostream& out, const std::string& name, const CMatrix& M) {
  out << name << ":\n";
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    out << "  ";
    for (Eigen::Index j = 0; j < M.cols(); ++j) out << (j ? "  " : "") << fmt9(M(i, j));
    out << "\n";
  }
}

void print_ep(std::ostream& out, const EPReport& ep) {
  if (ep.clusters.empty()) {
    out << "exceptional point: none\n";
    return;
  }
  out << "degenerate clusters:\n";
  for (const auto& c : ep.clusters)
    out << "  lambda = " << fmt9(c.lambda) << "  algebraic " << c.algebraic << "  geometric "
        << c.geometric << (c.defective() ? "  (defective)" : "") << "\n";
  out << "exceptional point: " << (ep.defective ? "yes" : "no") << "\n";
}

void print_model(std::ostream& out, const ModelConfig& cfg) {
  out << "model: " << to_string(cfg.kind) << "\n";
  if (cfg.kind != ModelKind::Custom)
    out << "alpha = " << fmt9(cfg.alpha) << "\nbeta = " << fmt9(cfg.beta) << "\n";
  if (cfg.kind == ModelKind::TwoMode) out << "gamma = " << fmt9(cfg.gamma) << "\n";
  out << "modes: " << cfg.modes() << "\n";
}

std::ostream* open_out(const Options& opt, std::ofstream& file, std::ostream& fallback,
                       std::ostream& err) {
  if (!opt.out) return &fallback;
  file.open(*opt.out, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "error: cannot write " << *opt.out << "\n";
    return nullptr;
  }
  return &file;
}

void metadata(std::ostream& csv, const std::string& command, const std::string& raw) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(raw)));
  csv << "# qboson " << QBOSON_VERSION << "\n";
  csv << "# command " << command << "\n";
  csv << "# config fnv1a64 " << hash << "\n";
}

struct SweepRow {
  std::vector<double> x;
  std::vector<cplx> lambda;
  Reality reality = Reality::AllReal;
  bool defective = false;
  double gap = 0.0;
  std::string error;
};

SweepRow evaluate(const ModelConfig& cfg, const std::vector<double>& x) {
  SweepRow row;
  row.x = x;
  ModelConfig c = cfg;
  for (std::size_t a = 0; a < x.size(); ++a) c = c.with(cfg.sweep[a].parameter, x[a]);
  try {
    const auto rep = adjoint_rep(c.form());
    row.lambda = paired_eigenvalues(rep);
    const auto ep = detect_ep(rep);
    row.defective = ep.defective;
    row.reality = classify_reality(rep);
    row.gap = min_pairwise_gap(row.lambda);
  } catch (const std::exception& e) {
    row.error = e.what();
    row.lambda.assign(2 * c.modes(), cplx{std::nan(""), std::nan("")});
    row.gap = std::nan("");
  }
  return row;
}

}  // namespace

std::string fmt17(double x) { return fmt(x, 17); }
std::string fmt9(double x) { return fmt(x, 9); }
std::string fmt9(cplx z) {
  const double im = z.imag();
  return fmt(z.real(), 9) + (im < 0.0 ? "-" : "+") + fmt(std::abs(im), 9) + "i";
}

unsigned sweep_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QBOSON_SWEEP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw ConfigError("QBOSON_SWEEP_THREADS", "expected a positive integer, got '" +
                                                    std::string(env) + "'");
    n = static_cast<unsigned>(v);
  }
  return n;
}

std::vector<std::string> sweep_header(const ModelConfig& cfg) {
  std::vector<std::string> h;
  for (const auto& a : cfg.sweep) h.push_back(a.parameter);
  for (std::size_t i = 1; i <= 2 * cfg.modes(); ++i) {
    h.push_back("lambda" + std::to_string(i) + "_re");
    h.push_back("lambda" + std::to_string(i) + "_im");
  }
  h.push_back("reality");
  h.push_back("defective");
  h.push_back("min_gap");
  return h;
}

int cmd_analyze(const ModelConfig& cfg, const Options&, std::ostream& out, std::ostream& err) {
  const auto form = cfg.form();
  const auto rep = adjoint_rep(form);
  print_model(out, cfg);
  std::vector<cplx> lambdas;
  try {
    lambdas = paired_eigenvalues(rep);
  } catch (const PairingError& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  out << "eigenvalues:\n";
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    out << "  lambda" << i + 1 << " = " << fmt9(lambdas[i]) << "\n";
  const auto ep = detect_ep(rep);
  const auto reality = classify_reality(rep);
  out << "reality: " << to_string(reality) << "\n";
  print_ep(out, ep);
  SpectralDecomposition d;
  try {
    d = decompose(form);
  } catch (const ExceptionalPointError& e) {
    out << "ladder operators: not constructed\n";
    err << "exceptional point: " << e.what() << "\n";
    return kExceptionalPoint;
  }
  out << "frequencies:\n";
  for (std::size_t i = 0; i < d.frequencies.size(); ++i)
    out << "  omega" << i + 1 << " = " << fmt9(d.frequencies[i]) << "\n";
  out << "offset = " << fmt9(d.offset) << "\n";
  out << "ground energy = " << fmt9(d.ground_energy) << "\n";
  out << "basis: (";
  for (std::size_t i = 0; i < form.basis().size(); ++i)
    out << (i ? ", " : "") << form.basis().label(i);
  out << ")\n";
  out << "ladder operators:\n";
  const auto K = d.modes;
  for (std::size_t i = 0; i < K; ++i) {
    const auto& lo = d.pairs[i].lowering;
    const auto& hi = d.pairs[i].raising;
    out << "  Z" << i + 1 << " lowering, lambda = " << fmt9(lo.lambda) << ": " << vec9(lo.C) << "\n";
    out << "  Z" << 2 * K - i << " raising, lambda = " << fmt9(hi.lambda) << ": " << vec9(hi.C)
        << "\n";
  }
  return kOk;
}

int cmd_sweep(const ModelConfig& cfg, const std::string& raw, std::ostream& csv, std::ostream& err,
              unsigned threads) {
  if (cfg.sweep.empty()) {
    err << "error: sweep: config has no \"sweep\" axes\n";
    return kError;
  }
  for (const auto& a : cfg.sweep)
    if (a.steps < 1) {
      err << "error: sweep: steps must be at least 1\n";
      return kError;
    }
  const long long n0 = cfg.sweep[0].steps;
  const long long n1 = cfg.sweep.size() > 1 ? cfg.sweep[1].steps : 1;
  const auto total = static_cast<std::size_t>(n0 * n1);
  std::vector<SweepRow> rows(total);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < total;) {
      const auto i = static_cast<long long>(k) / n1, j = static_cast<long long>(k) % n1;
      std::vector<double> x{cfg.sweep[0].value(i)};
      if (cfg.sweep.size() > 1) x.push_back(cfg.sweep[1].value(j));
      rows[k] = evaluate(cfg, x);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::size_t>(total, 256))));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  metadata(csv, "sweep", raw);
  const auto header = sweep_header(cfg);
  for (std::size_t i = 0; i < header.size(); ++i) csv << (i ? "," : "") << header[i];
  csv << "\n";
  std::size_t failures = 0;
  for (const auto& r : rows) {
    for (double x : r.x) csv << fmt17(x) << ",";
    for (const auto& l : r.lambda) csv << fmt17(l.real()) << "," << fmt17(l.imag()) << ",";
    csv << (r.error.empty() ? to_string(r.reality) : "Error") << "," << (r.defective ? 1 : 0) << ","
        << fmt17(r.gap) << "\n";
    if (!r.error.empty()) {
      if (failures == 0) err << "error: sweep point failed: " << r.error << "\n";
      ++failures;
    }
  }
  if (failures) {
    err << "error: " << failures << " sweep point(s) could not be analyzed\n";
    return kError;
  }
  return kOk;
}

int cmd_oracle(const ModelConfig& cfg, const Options& opt, std::ostream& out, std::ostream& err) {
  const auto form = cfg.form();
  const auto K = cfg.modes();
  const fock::FockTruncation trunc{K, opt.nmax.value_or(cfg.oracle.nmax.value_or(default_nmax(K)))};
  const auto levels = opt.levels.value_or(cfg.oracle.levels.value_or(kDefaultLevels));
  const double tol = opt.tol.value_or(cfg.oracle.tol.value_or(kDefaultTol));
  try {
    trunc.validate();
  } catch (const fock::DimensionError& e) {
    err << "error: " << e.what() << "; suggested nmax = " << e.suggested_nmax() << "\n";
    return kError;
  }
  print_model(out, cfg);
  out << "nmax = " << trunc.nmax << " (dimension " << trunc.dimension() << ")\n";
  SpectralDecomposition d;
  try {
    d = decompose(form);
  } catch (const ExceptionalPointError& e) {
    err << "exceptional point: " << e.what() << "; no ladder spectrum to compare\n";
    const auto ev = fock::oracle_eigenvalues(fock::assemble(form, trunc));
    out << "reality: " << to_string(Reality::ExceptionalPoint) << "\n";
    out << "oracle eigenvalues (lowest " << std::min(levels, ev.size()) << "):\n";
    for (std::size_t k = 0; k < std::min(levels, ev.size()); ++k)
      out << "  E" << k << " = " << fmt9(ev[k]) << "\n";
    return kExceptionalPoint;
  }
  out << "reality: " << to_string(d.reality) << "\n";
  const bool report_only = d.reality != Reality::AllReal;
  if (report_only && !opt.allow_complex) {
    err << "error: spectrum is " << to_string(d.reality)
        << "; rerun with --allow-complex for a report-only comparison\n";
    return kError;
  }
  const auto rep = fock::verify_spectrum(form, d, levels, trunc, tol);
  out << "levels (predicted | oracle | deviation):\n";
  for (std::size_t k = 0; k < rep.matched.size(); ++k) {
    const auto& m = rep.matched[k];
    out << "  E" << k << " = " << fmt9(m.predicted) << " | " << fmt9(m.oracle) << " | "
        << fmt9(m.deviation) << "\n";
  }
  out << "max deviation = " << fmt9(rep.max_deviation) << " (tol " << fmt9(tol) << ")\n";
  out << "convergence: nmax " << rep.nmax << " -> " << rep.nmax_check << ", shift "
      << fmt9(rep.convergence_shift) << ", converged = " << (rep.converged ? "yes" : "no") << "\n";

  std::ofstream file;
  if (opt.out) {
    auto* csv = open_out(opt, file, out, err);
    if (!csv) return kError;
    *csv << "# qboson " << QBOSON_VERSION << "\n# command oracle\n";
    *csv << "level,predicted_re,predicted_im,oracle_re,oracle_im,deviation\n";
    for (std::size_t k = 0; k < rep.matched.size(); ++k) {
      const auto& m = rep.matched[k];
      *csv << k << "," << fmt17(m.predicted.real()) << "," << fmt17(m.predicted.imag()) << ","
           << fmt17(m.oracle.real()) << "," << fmt17(m.oracle.imag()) << "," << fmt17(m.deviation)
           << "\n";
    }
  }
  if (report_only) {
    out << "result: report only (complex spectrum)\n";
    return kOk;
  }
  out << "result: " << (rep.passed ? "PASS" : "FAIL") << "\n";
  return rep.passed ? kOk : kError;
}

int cmd_transform(const ModelConfig& cfg, const Options& opt, std::ostream& out, std::ostream& err) {
  if (cfg.kind != ModelKind::OneMode) {
    err << "error: transform: only the one_mode model has a closed-form canonical map\n";
    return kError;
  }
  const auto p = cfg.one_mode_params();
  const double s11 = opt.s11.value_or(cfg.s11.value_or(1.0));
  CanonicalMap S;
  try {
    S = swanson::bogoliubov_map(p, s11);
  } catch (const ExceptionalPointError& e) {
    err << "exceptional point: " << e.what() << "\n";
    return kExceptionalPoint;
  } catch (const AlgebraError& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  print_model(out, cfg);
  out << "s11 = " << fmt9(s11) << "\n";
  print_matrix(out, "S", S.S);
  out << "det S = " << fmt9(S.S.determinant()) << "\n";
  const auto c = swanson::canonical_conditions(p, S);
  out << "conditions: det - 1 = " << fmt9(std::abs(c[0])) << ", row 1 = " << fmt9(std::abs(c[1]))
      << ", row 2 = " << fmt9(std::abs(c[2])) << "\n";
  const auto t = transform_form(swanson::one_mode(p), S);
  print_matrix(out, "transformed G", t.G());
  out << "transformed offset = " << fmt9(t.offset()) << "\n";
  swanson::Generator g;
  try {
    g = swanson::generator_from_map(S);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  print_matrix(out, "generator G_Q", g.G_Q);
  out << "generator symmetry defect = " << fmt9(g.symmetry_defect) << "\n";
  if (!opt.metric) return kOk;

  const fock::FockTruncation trunc{1, opt.nmax.value_or(cfg.oracle.nmax.value_or(kMetricNmax))};
  const double tol = opt.tol.value_or(cfg.oracle.tol.value_or(kDefaultTol));
  fock::MetricReport m;
  try {
    m = fock::verify_metric(p, S, trunc, tol);
  } catch (const fock::DimensionError& e) {
    err << "error: " << e.what() << "; suggested nmax = " << e.suggested_nmax() << "\n";
    return kError;
  }
  out << "metric check (nmax " << trunc.nmax << ", working cutoff " << m.work_cutoff
      << (m.converged ? "" : ", NOT converged") << "):\n";
  out << "  scaled residual |rho H - H^+ rho| = " << fmt9(m.interior_residual) << " (tol "
      << fmt9(tol) << ")\n";
  out << "  absolute residual = " << fmt9(m.interior_abs_residual) << "\n";
  out << "  residual with rho = I = " << fmt9(m.identity_residual) << "\n";
  out << "  min scaled eigenvalue = " << fmt9(m.min_scaled_eigenvalue)
      << ", positive definite = " << (m.positive_definite ? "yes" : "no") << "\n";
  out << "result: " << (m.passed ? "PASS" : "FAIL") << "\n";
  return m.passed ? kOk : kError;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Algebraic analysis of quadratic boson Hamiltonians", "qboson"};
  app.set_version_flag("--version", std::string(QBOSON_VERSION));
  std::string command, config_path;
  Options opt;
  app.add_option("command", command, "analyze | sweep | oracle | transform")
      ->required()
      ->check(CLI::IsMember({"analyze", "sweep", "oracle", "transform"}));
  app.add_option("--config", config_path, "model definition (JSON)")->required();
  app.add_option("--out", opt.out, "CSV output file");
  app.add_option("--nmax", opt.nmax, "Fock cutoff per mode")->check(CLI::PositiveNumber);
  app.add_option("--levels", opt.levels, "number of levels to compare")->check(CLI::PositiveNumber);
  app.add_option("--tol", opt.tol, "tolerance")->check(CLI::PositiveNumber);
  app.add_option("--s11", opt.s11, "gauge of the canonical map (transform)");
  app.add_flag("--allow-complex", opt.allow_complex, "oracle: report-only run for complex spectra");
  app.add_flag("--oracle", opt.metric, "transform: check the metric in a truncated Fock space");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  try {
    std::string raw;
    const auto cfg = load_config(config_path, &raw);
    if (command == "analyze") return cmd_analyze(cfg, opt, out, err);
    if (command == "oracle") return cmd_oracle(cfg, opt, out, err);
    if (command == "transform") {
      if (opt.out) {
        err << "error: transform does not write CSV\n";
        return kError;
      }
      return cmd_transform(cfg, opt, out, err);
    }
    const unsigned threads = sweep_threads();
    std::ofstream file;
    auto* csv = open_out(opt, file, out, err);
    if (!csv) return kError;
    return cmd_sweep(cfg, raw, *csv, err, threads);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  } catch (const ExceptionalPointError& e) {
    err << "exceptional point: " << e.what() << "\n";
    return kExceptionalPoint;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

}  // namespace qboson::cli
