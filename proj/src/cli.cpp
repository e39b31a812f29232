#include "bellforge/cli.hpp"

#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "bellforge/bell_model.hpp"
#include "bellforge/classical.hpp"
#include "bellforge/construction.hpp"
#include "bellforge/entanglement.hpp"
#include "bellforge/error.hpp"
#include "bellforge/io.hpp"
#include "bellforge/quantum.hpp"
#include "bellforge/random.hpp"
#include "bellforge/sdp.hpp"

namespace bellforge {

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols{
      "n",     "seed",  "K2", "classical_value", "classical_exact", "quantum_lb", "ratio",
      "ratio_over_sqrtn_logn", "omega_op", "wall_time_ms", "error"};
  return cols;
}

std::uint64_t default_root_seed() {
  const char* env = std::getenv("BELLFORGE_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(env, &pos, 0);
    if (pos == std::strlen(env)) return v;
  } catch (const std::exception&) {
  }
  return 0;
}

namespace {

struct Common {
  std::uint64_t seed = 0;
  double budget = kDefaultEnumerationBudget;
  double tol = 1e-7;
  int jobs = 1;
  int restarts = -1;  // command-specific default
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Root seed (default: $BELLFORGE_SEED or 0)");
  cmd->add_option("--budget", c.budget, "Enumeration budget for exact solvers")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol", c.tol, "Solver tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--restarts", c.restarts, "Restarts for local search / see-saw")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", c.out, "Write the result to this file instead of stdout");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

Json envelope(const std::string& command, const Json& config) {
  return Json{{"version", kVersion}, {"command", command}, {"config", config}};
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InvalidArgument("cannot open output file '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void emit(const Common& c, std::ostream& out, const Json& j) {
  Sink sink(c.out, out);
  sink.stream() << j.dump(2) << "\n";
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open input file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what(), "/");
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_escape(std::string s) {
  for (char& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

// ---------------------------------------------------------------- construct

struct ConstructArgs {
  int n = 0;
  double alpha = kDefaultAlphaTop;
  std::string distribution = "bernoulli";
  bool epsilon = false;
  int retry_cap = 3;
};

Json construct_config(const ConstructArgs& a, const Common& c, const ConstructOptions& o) {
  return Json{{"n", a.n},
              {"seed", c.seed},
              {"alpha", a.alpha},
              {"distribution", a.distribution},
              {"budget", c.budget},
              {"local_restarts", o.local_restarts},
              {"retry_cap", o.retry_cap},
              {"epsilon_norm", a.epsilon}};
}

ConstructOptions construct_options(const ConstructArgs& a, const Common& c) {
  ConstructOptions o;
  o.distribution = parse_distribution(a.distribution);
  o.classical_budget = c.budget;
  o.local_restarts = c.restarts >= 0 ? c.restarts : 64;
  o.retry_cap = a.retry_cap;
  o.epsilon_norm = a.epsilon;
  o.jobs = c.jobs;
  return o;
}

void cmd_construct(const ConstructArgs& a, const Common& c, std::ostream& out) {
  const ConstructOptions o = construct_options(a, c);
  const ConstructionReport rep = construct_report(a.n, c.seed, a.alpha, o);
  Json j = envelope("construct", construct_config(a, c, o));
  j["report"] = to_json(rep);
  emit(c, out, j);
}

// -------------------------------------------------------------------- sweep

struct SweepArgs {
  std::vector<int> n_list;
  int seeds = 5;
  double alpha = kDefaultAlphaTop;
  std::string distribution = "bernoulli";
  bool omega = false;
};

struct SweepRow {
  int n = 0;
  int index = 0;
  std::uint64_t seed = 0;
};

std::string sweep_row(const SweepRow& row, const SweepArgs& a, const ConstructOptions& o,
                      const SdpSettings& sdp) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> f(sweep_columns().size());
  f[0] = std::to_string(row.n);
  f[1] = std::to_string(row.seed);
  try {
    const ConstructionReport rep = construct_report(row.n, row.seed, a.alpha, o);
    f[2] = fmt(rep.k2);
    f[3] = fmt(rep.classical.value);
    f[4] = rep.classical.exact ? "true" : "false";
    f[5] = fmt(rep.quantum_lb);
    f[6] = fmt(rep.ratio);
    if (row.n >= 2) {
      f[7] = fmt(rep.ratio / (std::sqrt(static_cast<double>(row.n)) / std::log2(row.n)));
    }
    if (a.omega) {
      const auto m = build_bell(gen_signs(row.n, rep.seed_used, o.distribution));
      f[8] = fmt(omega_op(m, sdp).value);
    }
  } catch (const Error& e) {
    f[10] = csv_escape(std::string(e.kind()) + ": " + e.what());
  }
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  f[9] = fmt(std::round(ms * 1000.0) / 1000.0);
  std::string line;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) line += ',';
    line += f[i];
  }
  return line;
}

void cmd_sweep(const SweepArgs& a, const Common& c, std::ostream& out) {
  if (a.n_list.empty()) throw InvalidArgument("sweep needs a nonempty --n list");
  if (a.seeds < 1) throw InvalidArgument("sweep needs --seeds >= 1");
  for (int n : a.n_list) {
    if (n < 1) throw InvalidArgument("sweep sizes must be >= 1");
  }
  ConstructOptions o;
  o.distribution = parse_distribution(a.distribution);
  o.classical_budget = c.budget;
  o.local_restarts = c.restarts >= 0 ? c.restarts : 64;
  o.jobs = 1;
  SdpSettings sdp;
  sdp.tol = c.tol;

  std::vector<SweepRow> rows;
  for (int n : a.n_list)
    for (int i = 0; i < a.seeds; ++i) {
      rows.push_back({n, i,
                      derive_seed(derive_seed(c.seed, static_cast<std::uint64_t>(n)),
                                  static_cast<std::uint64_t>(i))});
    }

  const Json config{{"n_list", a.n_list},   {"seeds", a.seeds},       {"root_seed", c.seed},
                    {"alpha", a.alpha},     {"distribution", a.distribution},
                    {"budget", c.budget},   {"local_restarts", o.local_restarts},
                    {"omega", a.omega},     {"tol", c.tol},           {"jobs", c.jobs},
                    {"seed_derivation", "derive_seed(derive_seed(root, n), index)"}};
  Sink sink(c.out, out);
  std::ostream& os = sink.stream();

  std::vector<std::optional<std::string>> done(rows.size());
  std::mutex mu;
  std::condition_variable cv;
  auto publish = [&](std::size_t i, std::string line) {
    {
      std::lock_guard lock(mu);
      done[i] = std::move(line);
    }
    cv.notify_all();
  };

  if (c.format == "csv") {
    os << "# version=" << kVersion << "\n# config=" << config.dump() << "\n";
    for (std::size_t i = 0; i < sweep_columns().size(); ++i) os << (i ? "," : "") << sweep_columns()[i];
    os << "\n" << std::flush;
  }
  Json json_rows = Json::array();
  auto write = [&](std::size_t i, const std::string& line) {
    if (c.format == "csv") {
      os << line << "\n" << std::flush;
      return;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    Json row;
    const auto& cols = sweep_columns();
    std::string cell;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (k + 1 < cols.size()) {
        std::getline(ss, cell, ',');
      } else {
        std::getline(ss, cell);
      }
      row[cols[k]] = cell;
    }
    row["n"] = rows[i].n;
    row["seed"] = rows[i].seed;
    json_rows.push_back(std::move(row));
  };

  const int jobs = std::max(1, std::min<int>(c.jobs, static_cast<int>(rows.size())));
  if (jobs == 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) write(i, sweep_row(rows[i], a, o, sdp));
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) publish(i, sweep_row(rows[i], a, o, sdp));
      });
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::string line;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return done[i].has_value(); });
        line = std::move(*done[i]);
      }
      write(i, line);
    }
  }
  if (c.format == "json") {
    Json j = envelope("sweep", config);
    j["rows"] = std::move(json_rows);
    os << j.dump(2) << "\n";
  }
}

// -------------------------------------------------------------------- bench

struct BenchArgs {
  std::string file;
  int dim = 0;
  std::vector<int> dims;
};

void cmd_bench(const BenchArgs& a, const Common& c, std::ostream& out) {
  const BellFunctional m = bell_from_json(read_json_file(a.file));
  const auto& s = m.scenario();
  const int dim = a.dim > 0 ? a.dim : std::clamp(s.n_outputs, 2, 6);
  const int restarts = c.restarts >= 0 ? std::max(1, c.restarts) : 8;
  std::vector<int> dims = a.dims.empty() ? std::vector<int>{dim} : a.dims;

  Json config{{"file", a.file},     {"dim", dim},     {"dims", dims},     {"restarts", restarts},
              {"seed", c.seed},     {"tol", c.tol},   {"budget", c.budget}, {"jobs", c.jobs}};
  Json j = envelope("bench", config);
  j["scenario"] = {{"n_inputs", s.n_inputs}, {"n_outputs", s.n_outputs}};

  ClassicalResult cl;
  if (classical_exact_cost(s) <= c.budget) {
    cl = classical_value_exact(m, {c.budget, c.jobs});
  } else {
    cl = classical_value_local(m, 64, derive_seed(c.seed, 0xC1A55));
  }
  j["classical"] = to_json(cl);

  SeesawConfig cfg;
  cfg.dim = dim;
  cfg.restarts = restarts;
  cfg.seed = c.seed;
  cfg.jobs = c.jobs;
  const BellFunctional neg = m.scaled(-1.0);
  cfg.deterministic_start = cl.argmax;
  const SeesawResult up = seesaw(m, cfg);
  cfg.deterministic_start = cl.argmin;
  const SeesawResult down = seesaw(neg, cfg);
  const double quantum = std::max(up.value, down.value);
  Json methods;
  for (int k = 0; k < 4; ++k) {
    methods[to_string(static_cast<BestResponseMethod>(k))] =
        up.method_counts[static_cast<std::size_t>(k)] + down.method_counts[static_cast<std::size_t>(k)];
  }
  j["seesaw"] = {{"value", quantum},
                 {"max_value", up.value},
                 {"min_value", -down.value},
                 {"rounds", up.rounds},
                 {"converged", up.converged && down.converged},
                 {"state", std::vector<double>(up.state.alphas().begin(), up.state.alphas().end())},
                 {"methods", methods}};

  Json fixed = Json::array();
  double fixed_best = 0.0;
  for (int k : dims) {
    SeesawConfig fc = cfg;
    fc.dim = k;
    fc.fixed_state = SchmidtState::maximally_entangled(k);
    fc.deterministic_start = cl.argmax;
    const double v_up = seesaw(m, fc).value;
    fc.deterministic_start = cl.argmin;
    const double v_down = seesaw(neg, fc).value;
    const double v = std::max(v_up, v_down);
    fixed_best = std::max(fixed_best, v);
    fixed.push_back({{"dim", k}, {"value", v}});
  }
  j["max_entangled"] = {{"best_value", fixed_best}, {"per_dim", fixed}};

  SdpSettings sdp;
  sdp.tol = c.tol;
  const OmegaResult om = omega_op(m, sdp);
  j["omega_op"] = {{"value", om.value},
                   {"max_value", om.max_value},
                   {"min_value", om.min_value},
                   {"converged", om.converged},
                   {"primal_residual", std::max(om.max_solution.primal_residual, om.min_solution.primal_residual)},
                   {"dual_residual", std::max(om.max_solution.dual_residual, om.min_solution.dual_residual)},
                   {"iterations", om.max_solution.iterations + om.min_solution.iterations}};

  const double slack = std::max(1e-6, 10.0 * c.tol) * std::max(1.0, om.value);
  Json anomalies = Json::array();
  const bool c_le_q = cl.value <= quantum + 1e-9;
  const bool q_le_w = quantum <= om.value + slack;
  if (!c_le_q) anomalies.push_back("classical value exceeds see-saw value");
  if (!q_le_w) anomalies.push_back("see-saw value exceeds omega_op");
  if (!om.converged) anomalies.push_back("omega_op solver did not converge");
  j["ordering"] = {{"classical_le_seesaw", c_le_q}, {"seesaw_le_omega_op", q_le_w}};
  j["anomalies"] = anomalies;
  emit(c, out, j);
}

// ------------------------------------------------------------------ entropy

struct EntropyArgs {
  int n = 0;
  std::optional<double> alpha;
  std::vector<double> alphas;
  std::optional<double> delta;
};

void cmd_entropy(const EntropyArgs& a, const Common& c, std::ostream& out) {
  std::optional<SchmidtState> st;
  Json config{{"n", a.n}};
  Json j;
  if (!a.alphas.empty()) {
    st = build_state(profile::Explicit{a.alphas});
    config["alphas"] = a.alphas;
  } else if (a.alpha) {
    if (a.n < 1) throw InvalidArgument("entropy with --alpha needs --n >= 1");
    st = build_state(profile::TwoLevel{*a.alpha, a.n});
    config["alpha"] = *a.alpha;
  } else if (a.n >= 1) {
    st = SchmidtState::maximally_entangled(a.n);
  } else {
    throw InvalidArgument("entropy needs --alphas, --alpha with --n, or --n");
  }
  if (a.delta) config["delta"] = *a.delta;
  j = envelope("entropy", config);
  j["state"] = std::vector<double>(st->alphas().begin(), st->alphas().end());
  j["entropy_bits"] = entropy_of_entanglement(*st);
  j["log2_dim"] = std::log2(static_cast<double>(st->dim()));
  j["iviol"] = iviol(*st);
  if (a.alpha && a.alphas.empty()) j["f_alpha"] = f_alpha(a.n, *a.alpha);
  if (a.delta) {
    const DeltaClass dc = delta_classify(*st, *a.delta);
    j["delta_class"] = {{"label", dc.label()},
                        {"delta_max_entangled", dc.max_entangled},
                        {"delta_non_entangled", dc.non_entangled},
                        {"gap", dc.gap}};
  }
  emit(c, out, j);
}

// ---------------------------------------------------------------- decompose

struct DecomposeArgs {
  std::vector<double> coeffs;
  std::string file;
};

void cmd_decompose(const DecomposeArgs& a, const Common& c, std::ostream& out) {
  std::vector<double> coeffs = a.coeffs;
  if (!a.file.empty()) {
    const Json in = read_json_file(a.file);
    const Json& arr = in.is_object() && in.contains("coeffs") ? in["coeffs"] : in;
    if (!arr.is_array()) throw SchemaError("expected an array of coefficients", "/");
    coeffs.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number()) throw SchemaError("expected a number", "/" + std::to_string(i));
      coeffs.push_back(arr[i].get<double>());
    }
  }
  if (coeffs.empty()) throw InvalidArgument("decompose needs --coeffs or --file");
  const DyadicDecomposition d = dyadic_decompose(coeffs);
  const Vector target = Eigen::Map<const Vector>(coeffs.data(), static_cast<Index>(coeffs.size()));
  Json j = envelope("decompose", Json{{"coeffs", coeffs}, {"file", a.file}});
  j["decomposition"] = to_json(d);
  j["beta_sum"] = d.beta_sum();
  j["beta_bound"] = dyadic_beta_bound(d.source_dim);
  j["reconstruction_error"] = (d.reconstruct() - target).cwiseAbs().maxCoeff();
  emit(c, out, j);
}

// ---------------------------------------------------------------------- sdp

struct SdpArgs {
  std::string file;
  std::string gram;
  bool export_only = false;
  int max_iter = 20000;
};

Json solution_json(const SdpSolution& s) {
  return Json{{"value", s.value},
              {"dual_value", s.dual_value},
              {"primal_residual", s.primal_residual},
              {"dual_residual", s.dual_residual},
              {"gap", s.gap},
              {"iterations", s.iterations},
              {"converged", s.converged}};
}

void cmd_sdp(const SdpArgs& a, const Common& c, std::ostream& out) {
  SdpSettings settings;
  settings.tol = c.tol;
  settings.max_iter = a.max_iter;
  Json config{{"file", a.file}, {"gram", a.gram}, {"tol", c.tol}, {"max_iter", a.max_iter}};
  Json j = envelope("sdp", config);
  if (!a.gram.empty()) {
    const GramProblem p = gram_from_json(read_json_file(a.gram));
    j["solution"] = solution_json(solve_sdp(p, settings));
  } else if (!a.file.empty()) {
    const BellFunctional m = bell_from_json(read_json_file(a.file));
    if (a.export_only) {
      j["problem"] = to_json(build_op_gram(m, Sense::maximize));
    } else {
      const OmegaResult r = omega_op(m, settings);
      j["omega_op"] = r.value;
      j["converged"] = r.converged;
      j["max"] = solution_json(r.max_solution);
      j["min"] = solution_json(r.min_solution);
    }
  } else {
    throw InvalidArgument("sdp needs --file (Bell functional) or --gram (problem)");
  }
  emit(c, out, j);
}

// ------------------------------------------------------------------ certify

struct CertifyArgs {
  int n = 0;
  std::string distribution = "bernoulli";
  bool omega = false;
};

void cmd_certify(const CertifyArgs& a, const Common& c, std::ostream& out) {
  const SignTensor signs = gen_signs(a.n, c.seed, parse_distribution(a.distribution));
  const BellFunctional m = build_bell(signs);
  const CertificateResult cert = vector_certificate_value(m, sign_row_vectors(signs), c.budget);
  Json j = envelope("certify", Json{{"n", a.n},
                                    {"seed", c.seed},
                                    {"distribution", a.distribution},
                                    {"budget", c.budget},
                                    {"omega", a.omega},
                                    {"tol", c.tol}});
  j["certificate"] = {{"value", cert.value},
                      {"pairing", cert.pairing},
                      {"u_norm", cert.u_norm},
                      {"v_norm", cert.v_norm},
                      {"value_over_n", cert.value / a.n}};
  j["signs"] = to_json(signs);
  if (a.omega) {
    SdpSettings settings;
    settings.tol = c.tol;
    const OmegaResult r = omega_op(m, settings);
    j["omega_op"] = {{"value", r.value}, {"converged", r.converged}};
  }
  emit(c, out, j);
}

void write_error(std::ostream& err, const std::string& kind, const std::string& message,
                 Json extra = Json::object()) {
  Json e{{"kind", kind}, {"message", message}};
  for (auto it = extra.begin(); it != extra.end(); ++it) e[it.key()] = it.value();
  err << Json{{"error", e}, {"version", kVersion}}.dump() << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explicit Bell violations: constructions, classical and quantum values, SDP bounds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Common common;
  common.seed = default_root_seed();

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Build one instance and report all values");
  construct->add_option("--n", ca.n, "Size n (n inputs, n + 1 outputs)")->required()->check(CLI::PositiveNumber);
  construct->add_option("--alpha", ca.alpha, "Top Schmidt coefficient")->check(CLI::Range(0.0, 1.0));
  construct->add_option("--distribution", ca.distribution)->check(CLI::IsMember({"bernoulli", "gaussian"}));
  construct->add_option("--retry-cap", ca.retry_cap)->check(CLI::NonNegativeNumber);
  construct->add_flag("--epsilon-norm", ca.epsilon, "Also compute the exact epsilon norm");
  add_common(construct, common);

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "Run the construction over sizes and seeds");
  sweep->add_option("--n", sa.n_list, "Sizes (repeat or comma separated)")->required()->delimiter(',');
  sweep->add_option("--seeds", sa.seeds, "Seeds per size");
  sweep->add_option("--alpha", sa.alpha)->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--distribution", sa.distribution)->check(CLI::IsMember({"bernoulli", "gaussian"}));
  sweep->add_flag("--omega", sa.omega, "Also solve the SDP relaxation per row");
  add_common(sweep, common);

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Compare all solvers on a functional read from JSON");
  bench->add_option("file", ba.file, "Bell functional JSON")->required();
  bench->add_option("--dim", ba.dim, "Local dimension for the see-saw (default: K clamped to [2, 6])");
  bench->add_option("--dims", ba.dims, "Dimensions k for the fixed maximally entangled see-saw")->delimiter(',');
  add_common(bench, common);

  EntropyArgs ea;
  auto* entropy = app.add_subcommand("entropy", "Entropy, iviol and delta classification of a state");
  entropy->add_option("--n", ea.n, "Tail size for --alpha, or dimension of psi_n");
  entropy->add_option("--alpha", ea.alpha, "Top coefficient of the two-level profile");
  entropy->add_option("--alphas", ea.alphas, "Explicit coefficients")->delimiter(',');
  entropy->add_option("--delta", ea.delta)->check(CLI::PositiveNumber);
  add_common(entropy, common);

  DecomposeArgs da;
  auto* decompose = app.add_subcommand("decompose", "Dyadic decomposition of a sorted vector");
  decompose->add_option("--coeffs", da.coeffs)->delimiter(',');
  decompose->add_option("--file", da.file, "JSON array (or {\"coeffs\": [...]})");
  add_common(decompose, common);

  SdpArgs qa;
  auto* sdp = app.add_subcommand("sdp", "Solve the relaxation of a functional or a raw Gram problem");
  sdp->add_option("--file", qa.file, "Bell functional JSON");
  sdp->add_option("--gram", qa.gram, "Sparse-triplet Gram problem JSON");
  sdp->add_flag("--export", qa.export_only, "Print the Gram problem instead of solving it");
  sdp->add_option("--max-iter", qa.max_iter)->check(CLI::PositiveNumber);
  add_common(sdp, common);

  CertifyArgs ra;
  auto* certify = app.add_subcommand("certify", "Certificate value of the sign-row vectors");
  certify->add_option("--n", ra.n)->required()->check(CLI::PositiveNumber);
  certify->add_option("--distribution", ra.distribution)->check(CLI::IsMember({"bernoulli", "gaussian"}));
  certify->add_flag("--omega", ra.omega, "Also solve the SDP relaxation");
  add_common(certify, common);

  sweep->get_option("--format")->default_str("csv");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return 0;
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    write_error(err, "usage", e.what());
    return 1;
  }

  try {
    if (*construct) {
      if (common.format != "json") throw InvalidArgument("construct only supports --format json");
      cmd_construct(ca, common, out);
    } else if (*sweep) {
      if (sweep->get_option("--format")->count() == 0) common.format = "csv";
      cmd_sweep(sa, common, out);
    } else if (*bench) {
      cmd_bench(ba, common, out);
    } else if (*entropy) {
      cmd_entropy(ea, common, out);
    } else if (*decompose) {
      cmd_decompose(da, common, out);
    } else if (*sdp) {
      cmd_sdp(qa, common, out);
    } else if (*certify) {
      cmd_certify(ra, common, out);
    }
  } catch (const SchemaError& e) {
    write_error(err, e.kind(), e.what(), {{"path", e.path()}});
    return 2;
  } catch (const BudgetExceeded& e) {
    write_error(err, e.kind(), e.what(), {{"required", e.required()}, {"budget", e.budget()}});
    return 2;
  } catch (const Error& e) {
    write_error(err, e.kind(), e.what());
    return 2;
  } catch (const std::exception& e) {
    write_error(err, "internal", e.what());
    return 2;
  }
  return 0;
}

}  // namespace bellforge
