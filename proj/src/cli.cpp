#include "ulelab/cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cinttypes>
#include <mutex>
#include <optional>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "ulelab/approx.hpp"
#include "ulelab/diagalg.hpp"
#include "ulelab/hull.hpp"
#include "ulelab/locreport.hpp"
#include "ulelab/sampling.hpp"
#include "ulelab/specops.hpp"
#include "ulelab/version.hpp"

namespace ulelab::cli {

namespace {

// Signals exit code 3 (inconclusive verdict or non-converged iteration).
struct Inconclusive : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<std::int64_t> parse_int_list(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
  return {{"chain", chain},
          {"pattern", pattern},
          {"m", m},
          {"generator", generator == GeneratorKind::Lemma44 ? "LEMMA44" : "POESCHEL"},
          {"eps", eps},
          {"N", sizes},
          {"shifts", shifts},
          {"k_layers", k_layers},
          {"tol", tol},
          {"floor", floor},
          {"interior_margin", interior_margin},
          {"max_iter", max_iter},
          {"output_dir", output_dir},
          {"exact", exact}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  if (j.contains("chain")) c.chain = j.at("chain").get<std::vector<std::int64_t>>();
  if (j.contains("pattern")) c.pattern = j.at("pattern").get<std::string>();
  if (j.contains("m")) c.m = j.at("m").get<int>();
  if (j.contains("generator")) {
    std::string g = j.at("generator").get<std::string>();
    if (g == "LEMMA44")
      c.generator = GeneratorKind::Lemma44;
    else if (g == "POESCHEL")
      c.generator = GeneratorKind::Poeschel;
    else
      throw std::invalid_argument("unknown generator kind: " + g);
  }
  if (j.contains("eps")) c.eps = j.at("eps").get<std::vector<double>>();
  if (j.contains("N")) c.sizes = j.at("N").get<std::vector<int>>();
  if (j.contains("shifts")) c.shifts = j.at("shifts").get<std::vector<std::int64_t>>();
  if (j.contains("k_layers")) c.k_layers = j.at("k_layers").get<int>();
  if (j.contains("tol")) c.tol = j.at("tol").get<double>();
  if (j.contains("floor")) c.floor = j.at("floor").get<double>();
  if (j.contains("interior_margin")) c.interior_margin = j.at("interior_margin").get<int>();
  if (j.contains("max_iter")) c.max_iter = j.at("max_iter").get<int>();
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("exact")) c.exact = j.at("exact").get<bool>();
  return c;
}

void RunConfig::validate() const {
  if (chain.empty() || eps.empty() || sizes.empty() || shifts.empty())
    throw std::invalid_argument("config lists must be nonempty");
  if (!(tol > 0) || !(floor > 0)) throw std::invalid_argument("tolerances must be positive");
  if (k_layers < 1) throw std::invalid_argument("k_layers must be >= 1");
  if (interior_margin < 0) throw std::invalid_argument("interior margin must be >= 0");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  for (double e : eps)
    if (e < 0) throw std::invalid_argument("eps must be nonnegative");
  for (int n : sizes)
    if (n < 2) throw std::invalid_argument("window sizes must be >= 2");
  if (generator == GeneratorKind::Lemma44) {
    hull::FrequencyChain fc(chain, hull::GrowthPattern::parse(pattern));
    hull::ConditionA ca = hull::condition_A(fc);
    if (!ca.holds) throw std::invalid_argument("chain fails condition A");
  }
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, fnv1a(to_json().dump()));
  return buf;
}

namespace {

std::string meta_line(const RunConfig& config) {
  return std::string("# ule_lab v") + kVersion + " config=" + config.hash() +
         " modules=" + kModuleVersions + "\n";
}

void write_file(const RunConfig& config, const std::string& name, const std::string& body) {
  std::filesystem::create_directories(config.output_dir);
  std::ofstream out(std::filesystem::path(config.output_dir) / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + name);
  out << meta_line(config) << body;
}

void write_json_file(const RunConfig& config, const std::string& name, nlohmann::json j) {
  j["_meta"] = {{"version", kVersion},
                {"config_hash", config.hash()},
                {"modules", kModuleVersions}};
  std::filesystem::create_directories(config.output_dir);
  std::ofstream out(std::filesystem::path(config.output_dir) / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + name);
  out << j.dump(2) << "\n";
}

struct Lab {
  RunConfig config;
  std::optional<sampling::DistalGenerator> generator;  // LEMMA44 only
  sampling::LimitPeriodicSeries series;                // initialized after generator

  explicit Lab(const RunConfig& cfg)
      : config(cfg), series(make_series(cfg, generator)) {}

  static sampling::LimitPeriodicSeries make_series(
      const RunConfig& cfg, std::optional<sampling::DistalGenerator>& gen) {
    if (cfg.generator == GeneratorKind::Poeschel)
      return sampling::PoeschelExample(cfg.k_layers).to_series();
    gen.emplace(hull::FrequencyChain(cfg.chain, hull::GrowthPattern::parse(cfg.pattern)),
                cfg.m, cfg.exact);
    return gen->to_series(cfg.k_layers);
  }

  hull::GroupElement phase(std::int64_t t) const {
    // The chain of the tabulated series, truncated to the layers in play.
    std::vector<std::int64_t> elems;
    for (int j = 1; j <= config.k_layers; ++j) elems.push_back(series.layer(j).period);
    return hull::odometer_add(
        hull::GroupElement::identity(hull::FrequencyChain(elems)), t);
  }

  // Potential values over a window at phase T^t(e), Poeschel normalization.
  std::vector<Rational> potential(std::int64_t t, int n) const {
    hull::GroupElement g = phase(t);
    std::vector<Rational> d(n);
    for (int j = 0; j < n; ++j) d[j] = sampling::evaluate_at(series, g, j, config.k_layers);
    return d;
  }

  std::vector<double> potential_f(std::int64_t t, int n) const {
    std::vector<Rational> d = potential(t, n);
    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) out[j] = to_double(d[j]);
    return out;
  }
};

int cmd_potential(const Lab& lab) {
  const RunConfig& c = lab.config;
  int n = c.sizes.front();
  std::int64_t t = c.shifts.front();
  std::vector<Rational> d = lab.potential(t, n);
  std::string body = "n,value_num,value_den,value_float\n";
  for (int j = 0; j < n; ++j) {
    body += std::to_string(j) + ",";
    if (c.exact)
      body += rational_num(d[j]).str() + "," + rational_den(d[j]).str() + ",";
    else
      body += ",,";
    body += fmt(to_double(d[j])) + "\n";
  }
  write_file(c, "potential.csv", body);
  std::cout << "{\"written\": \"potential.csv\", \"rows\": " << n << "}\n";
  return 0;
}

specops::OperatorWindow window_for(const Lab& lab, double eps, int n, std::int64_t t) {
  std::vector<double> diag = lab.potential_f(t, n);
  if (eps == 0) return specops::window_from_diagonal(std::move(diag), 0, specops::WindowForm::Poeschel);
  for (double& v : diag) v /= eps;
  return specops::window_from_diagonal(std::move(diag), eps, specops::WindowForm::Standard);
}

int cmd_spectrum(const Lab& lab, const std::string& vectors_file,
                 const std::string& profile_file) {
  const RunConfig& c = lab.config;
  double eps = c.eps.front();
  int n = c.sizes.front();
  std::int64_t t = c.shifts.front();
  specops::EigenSystem es = specops::eigensystem(window_for(lab, eps, n, t));

  std::string body = "index,eigenvalue,center,fitted_rate\n";
  for (int k = 0; k < es.size(); ++k) {
    locreport::DecayFit fit = locreport::fit_decay(es.vectors[k], es.centers[k], c.floor);
    body += std::to_string(k) + "," + fmt(es.eigenvalues[k]) + "," +
            std::to_string(es.centers[k]) + "," + fmt(fit.r) + "\n";
  }
  write_file(c, "spectrum.csv", body);

  if (!vectors_file.empty()) {
    nlohmann::json jv;
    jv["eigenvalues"] = es.eigenvalues;
    jv["vectors"] = es.vectors;
    write_json_file(c, vectors_file, jv);
  }
  if (!profile_file.empty()) {
    diagalg::DecayProfile prof =
        diagalg::diagonal_decay_profile(diagalg::DiagMatrix::from_columns(es.vectors), c.floor);
    std::string pbody = "k,supnorm\n";
    for (const auto& [k, sup] : prof.points)
      pbody += std::to_string(k) + "," + fmt(sup) + "\n";
    write_file(c, profile_file, pbody);
  }
  std::cout << "{\"written\": \"spectrum.csv\", \"size\": " << n << "}\n";
  return 0;
}

struct DressOutcome {
  specops::DressedResult result;
  double deviation = 0;
  double verified_mismatch = 0;
};

DressOutcome run_dress(const Lab& lab, double eps, int n, std::int64_t t) {
  const RunConfig& c = lab.config;
  std::vector<double> d = lab.potential_f(t, n);
  DressOutcome out;
  out.result =
      specops::construct_dressed_potential(d, eps, c.tol, c.max_iter, c.interior_margin);
  out.deviation = specops::dressed_deviation(out.result.p, d, eps, c.interior_margin);
  if (eps > 0 && out.result.converged) {
    // Independent pass: rebuild the dressed operator, diagonalize afresh and
    // re-match against the targets.
    specops::EigenSystem es = specops::eigensystem(
        specops::window_from_diagonal(out.result.p, eps, specops::WindowForm::Standard));
    std::vector<double> targets(n);
    for (int i = 0; i < n; ++i) targets[i] = d[i] / eps;
    out.verified_mismatch =
        specops::match_eigenvalues(es, targets, c.interior_margin).max_interior_mismatch;
  }
  return out;
}

int cmd_dress(const Lab& lab) {
  const RunConfig& c = lab.config;
  double eps = c.eps.front();
  int n = c.sizes.front();
  std::int64_t t = c.shifts.front();
  DressOutcome out = run_dress(lab, eps, n, t);

  std::string body = "iter,interior_mismatch,damping,collisions\n";
  for (const auto& row : out.result.trace)
    body += std::to_string(row.iter) + "," + fmt(row.interior_mismatch) + "," +
            fmt(row.damping) + "," + std::to_string(row.collisions) + "\n";
  write_file(c, "dress_trace.csv", body);

  nlohmann::json j = {{"eps", eps},
                      {"N", n},
                      {"t", t},
                      {"converged", out.result.converged},
                      {"iterations", out.result.iterations},
                      {"final_mismatch", out.result.final_mismatch},
                      {"verified_mismatch", out.verified_mismatch},
                      {"deviation", out.deviation},
                      {"p", out.result.p}};
  write_json_file(c, "dress.json", j);
  std::cout << j.dump() << "\n";
  return out.result.converged ? 0 : 3;
}

specops::EigenSystem dressed_system(const Lab& lab, double eps, int n, std::int64_t t,
                                    DressOutcome* outcome = nullptr) {
  DressOutcome out = run_dress(lab, eps, n, t);
  if (!out.result.converged)
    throw Inconclusive("dressed-potential iteration did not converge; eps too large");
  if (outcome) *outcome = out;
  if (eps == 0)
    return specops::eigensystem(
        specops::window_from_diagonal(out.result.p, 0, specops::WindowForm::Poeschel));
  return specops::eigensystem(
      specops::window_from_diagonal(out.result.p, eps, specops::WindowForm::Standard));
}

int cmd_ule(const Lab& lab) {
  const RunConfig& c = lab.config;
  specops::EigenSystem es =
      dressed_system(lab, c.eps.front(), c.sizes.front(), c.shifts.front());
  locreport::ULEReport rep = locreport::ule_report(es, c.floor);
  write_json_file(c, "ule.json", rep.to_json());
  nlohmann::json summary = {{"uniform_c", rep.uniform_c},
                            {"uniform_r", rep.uniform_r},
                            {"rate_capped_count", rep.rate_capped_count}};
  std::cout << summary.dump() << "\n";
  return 0;
}

int cmd_dynloc(const Lab& lab) {
  const RunConfig& c = lab.config;
  specops::EigenSystem es =
      dressed_system(lab, c.eps.front(), c.sizes.front(), c.shifts.front());
  locreport::DynLocReport rep = locreport::dynloc_report(es, {0.0, 1.0, 10.0, 100.0}, c.floor);
  write_json_file(c, "dynloc.json", rep.to_json());

  auto kernel = locreport::dynloc_kernel(es);
  std::string body = "n,m,value\n";
  for (size_t i = 0; i < kernel.size(); ++i)
    for (size_t j = 0; j < kernel.size(); ++j)
      body += std::to_string(i) + "," + std::to_string(j) + "," + fmt(kernel[i][j]) + "\n";
  write_file(c, "dynloc_kernel.csv", body);
  std::cout << rep.to_json().dump() << "\n";
  return 0;
}

struct SweepRow {
  double eps;
  int n;
  std::int64_t t;
  double uniform_c, uniform_r, kernel_c, kernel_r, max_mismatch;
  int iters;
  bool ok;
};

int cmd_sweep(const Lab& lab) {
  const RunConfig& c = lab.config;
  std::vector<SweepRow> rows;
  for (double eps : c.eps)
    for (int n : c.sizes)
      for (std::int64_t t : c.shifts) rows.push_back({eps, n, t, 0, 0, 0, 0, 0, 0, false});
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.eps, a.n, a.t) < std::tie(b.eps, b.n, b.t);
  });

  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ULE_LAB_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) hw = static_cast<unsigned>(v);
  }
  hw = std::min<unsigned>(hw, rows.size());

  std::atomic<size_t> next{0};
  std::atomic<bool> not_converged{false};
  std::mutex error_mutex;
  std::string internal_error;
  auto worker = [&]() {
    for (size_t i = next.fetch_add(1); i < rows.size(); i = next.fetch_add(1)) {
      SweepRow& row = rows[i];
      try {
        DressOutcome out;
        specops::EigenSystem es = dressed_system(lab, row.eps, row.n, row.t, &out);
        locreport::ULEReport ule = locreport::ule_report(es, c.floor);
        locreport::DynLocReport dyn =
            locreport::dynloc_report(es, {0.0, 1.0, 10.0, 100.0}, c.floor);
        row.uniform_c = ule.uniform_c;
        row.uniform_r = ule.uniform_r;
        row.kernel_c = dyn.kernel_c;
        row.kernel_r = dyn.kernel_r;
        row.max_mismatch = out.result.final_mismatch;
        row.iters = out.result.iterations;
        row.ok = true;
      } catch (const Inconclusive&) {
        not_converged = true;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (internal_error.empty()) internal_error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < hw; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (!internal_error.empty()) throw std::runtime_error("sweep: " + internal_error);

  std::string body = "eps,N,t,uniform_c,uniform_r,kernel_C,kernel_r,max_mismatch,iters\n";
  for (const auto& row : rows) {
    if (!row.ok) continue;
    body += fmt(row.eps) + "," + std::to_string(row.n) + "," + std::to_string(row.t) + "," +
            fmt(row.uniform_c) + "," + fmt(row.uniform_r) + "," + fmt(row.kernel_c) + "," +
            fmt(row.kernel_r) + "," + fmt(row.max_mismatch) + "," +
            std::to_string(row.iters) + "\n";
  }
  write_file(c, "sweep.csv", body);
  std::cout << "{\"written\": \"sweep.csv\", \"points\": " << rows.size() << "}\n";
  if (not_converged) throw Inconclusive("some sweep points did not converge");
  return 0;
}

int cmd_approx(const RunConfig& c, const std::string& kind, double cval, double beta, double r,
               double x0, double tmin, double tmax, int tcount) {
  approx::ApproximationFunction Q = [&] {
    if (kind == "constant") return approx::ApproximationFunction::constant(cval);
    if (kind == "power") return approx::ApproximationFunction::power_law(beta, r, x0);
    if (kind == "lemma")
      return approx::ApproximationFunction::lemma_distal(c.chain.front(), c.m);
    throw std::invalid_argument("unknown approximation kind: " + kind);
  }();
  if (!(tmin > 0) || !(tmax > tmin) || tcount < 2)
    throw std::invalid_argument("bad t grid");
  std::string body = "t,q,h_upper\n";
  for (int i = 0; i < tcount; ++i) {
    double t = tmin * std::pow(tmax / tmin, static_cast<double>(i) / (tcount - 1));
    body += fmt(t) + "," + fmt(approx::q_of(Q, t)) + "," + fmt(approx::h_upper(Q, t)) + "\n";
  }
  write_file(c, "approx.csv", body);
  std::cout << "{\"written\": \"approx.csv\", \"rows\": " << tcount << "}\n";
  return 0;
}

struct ConfigCliOptions {
  std::string config_file;
  std::string chain, pattern, generator, eps, sizes, shifts, out;
  int m = -1, k_layers = -1, margin = -1, max_iter = -1;
  double tol = -1, floor = -1;
  bool use_float = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "JSON config file");
    app->add_option("--chain", chain, "comma-separated frequency chain");
    app->add_option("--pattern", pattern, "growth pattern: none|powers|square|cube");
    app->add_option("--m", m, "condition-A exponent for the distal generator");
    app->add_option("--generator", generator, "LEMMA44 or POESCHEL");
    app->add_option("--eps", eps, "comma-separated hopping list");
    app->add_option("--N", sizes, "comma-separated window sizes");
    app->add_option("--shifts", shifts, "comma-separated phase shifts");
    app->add_option("--k-layers", k_layers, "layers kept in the expansion");
    app->add_option("--tol", tol, "dressing tolerance");
    app->add_option("--floor", floor, "decay-fit floor");
    app->add_option("--margin", margin, "interior margin");
    app->add_option("--max-iter", max_iter, "dressing iteration cap");
    app->add_option("--out", out, "output directory");
    app->add_flag("--float", use_float, "floating evaluation (drops exactness guarantees)");
  }

  RunConfig resolve() const {
    RunConfig c;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw std::invalid_argument("cannot read config file: " + config_file);
      nlohmann::json j;
      in >> j;
      c = RunConfig::from_json(j);
    }
    if (!chain.empty()) c.chain = parse_int_list(chain);
    if (!pattern.empty()) c.pattern = pattern;
    if (m >= 0) c.m = m;
    if (!generator.empty()) {
      if (generator == "LEMMA44" || generator == "lemma44")
        c.generator = GeneratorKind::Lemma44;
      else if (generator == "POESCHEL" || generator == "poeschel")
        c.generator = GeneratorKind::Poeschel;
      else
        throw std::invalid_argument("unknown generator kind: " + generator);
    }
    if (!eps.empty()) c.eps = parse_double_list(eps);
    if (!sizes.empty()) {
      c.sizes.clear();
      for (std::int64_t v : parse_int_list(sizes)) c.sizes.push_back(static_cast<int>(v));
    }
    if (!shifts.empty()) c.shifts = parse_int_list(shifts);
    if (k_layers >= 0) c.k_layers = k_layers;
    if (tol > 0) c.tol = tol;
    if (floor > 0) c.floor = floor;
    if (margin >= 0) c.interior_margin = margin;
    if (max_iter >= 1) c.max_iter = max_iter;
    if (!out.empty()) c.output_dir = out;
    if (use_float) c.exact = false;
    c.validate();
    return c;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"limit-periodic uniform-localization laboratory"};
  app.require_subcommand(1);

  // hull subcommands
  CLI::App* hull_cmd = app.add_subcommand("hull", "frequency-chain arithmetic");
  hull_cmd->require_subcommand(1);

  std::string hx_chain, hx_pattern;
  int hx_depth = 0;
  CLI::App* hull_max = hull_cmd->add_subcommand("maximalize", "prime-step refinement");
  hull_max->add_option("--chain", hx_chain)->required();
  hull_max->add_option("--pattern", hx_pattern);
  hull_max->add_option("--depth", hx_depth);

  std::string iso_a, iso_b, iso_pa, iso_pb, iso_p;
  int iso_depth = 64;
  CLI::App* hull_iso = hull_cmd->add_subcommand("isomorphic", "hull classification test");
  hull_iso->add_option("--a", iso_a)->required();
  hull_iso->add_option("--b", iso_b)->required();
  hull_iso->add_option("--pattern-a", iso_pa);
  hull_iso->add_option("--pattern-b", iso_pb);
  hull_iso->add_option("--pattern", iso_p, "pattern applied to both chains");
  hull_iso->add_option("--depth", iso_depth);

  std::string ca_chain, ca_pattern;
  CLI::App* hull_ca = hull_cmd->add_subcommand("condition-a", "growth condition check");
  hull_ca->add_option("--chain", ca_chain)->required();
  hull_ca->add_option("--pattern", ca_pattern);

  ConfigCliOptions pot_opts, spec_opts, dress_opts, ule_opts, dyn_opts, sweep_opts;
  CLI::App* pot_cmd = app.add_subcommand("potential", "export a potential window");
  pot_opts.attach(pot_cmd);
  CLI::App* spec_cmd = app.add_subcommand("spectrum", "diagonalize one window");
  spec_opts.attach(spec_cmd);
  std::string vectors_file, profile_file;
  spec_cmd->add_option("--vectors", vectors_file, "also dump eigenvectors (JSON)");
  spec_cmd->add_option("--profile", profile_file, "also dump the diagonal decay profile");
  CLI::App* dress_cmd = app.add_subcommand("dress", "construct the dressed potential");
  dress_opts.attach(dress_cmd);
  CLI::App* ule_cmd = app.add_subcommand("ule", "uniform localization report");
  ule_opts.attach(ule_cmd);
  CLI::App* dyn_cmd = app.add_subcommand("dynloc", "dynamical localization kernel");
  dyn_opts.attach(dyn_cmd);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "iterate the (eps, N, t) grid");
  sweep_opts.attach(sweep_cmd);

  ConfigCliOptions approx_opts;
  CLI::App* approx_cmd = app.add_subcommand("approx", "q(t) and h_upper(t) table");
  approx_opts.attach(approx_cmd);
  std::string ap_kind = "lemma";
  double ap_c = 1, ap_beta = 1, ap_r = 1, ap_x0 = 0, ap_tmin = 0.1, ap_tmax = 10;
  int ap_tcount = 25;
  approx_cmd->add_option("--kind", ap_kind, "constant|power|lemma");
  approx_cmd->add_option("--C", ap_c, "constant Q value");
  approx_cmd->add_option("--beta", ap_beta);
  approx_cmd->add_option("--r", ap_r);
  approx_cmd->add_option("--x0", ap_x0);
  approx_cmd->add_option("--tmin", ap_tmin);
  approx_cmd->add_option("--tmax", ap_tmax);
  approx_cmd->add_option("--tcount", ap_tcount);

  std::vector<std::string> argv_local(args);
  try {
    std::vector<const char*> argv;
    argv.push_back("ule_lab");
    for (const auto& a : argv_local) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());

    if (hull_max->parsed()) {
      hull::FrequencyChain fc(parse_int_list(hx_chain), hull::GrowthPattern::parse(hx_pattern));
      int depth = hx_depth > 0 ? hx_depth : fc.depth();
      hull::FrequencyChain out = hull::maximalize(fc, depth);
      std::cout << out.to_json().dump() << "\n";
      return 0;
    }
    if (hull_iso->parsed()) {
      std::string pa = !iso_pa.empty() ? iso_pa : iso_p;
      std::string pb = !iso_pb.empty() ? iso_pb : iso_p;
      hull::FrequencyChain a(parse_int_list(iso_a), hull::GrowthPattern::parse(pa));
      hull::FrequencyChain b(parse_int_list(iso_b), hull::GrowthPattern::parse(pb));
      hull::IsoCertificate cert = hull::hulls_isomorphic(a, b, iso_depth);
      nlohmann::json j;
      j["verdict"] = cert.verdict == hull::IsoVerdict::Isomorphic       ? "isomorphic"
                     : cert.verdict == hull::IsoVerdict::NotIsomorphic ? "not_isomorphic"
                                                                        : "inconclusive";
      j["isomorphic"] = cert.verdict == hull::IsoVerdict::Isomorphic;
      j["depth"] = cert.depth;
      if (cert.first_failing) {
        j["first_failing"] = *cert.first_failing;
        j["failing_direction"] = cert.failing_forward ? "forward" : "reverse";
      }
      auto witness_json = [](const std::vector<hull::IsoWitness>& ws) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& w : ws) {
          nlohmann::json e = {{"element", w.element}};
          if (w.divides_into) e["divides_into"] = w.divides_into->str();
          arr.push_back(e);
        }
        return arr;
      };
      j["forward"] = witness_json(cert.forward);
      j["reverse"] = witness_json(cert.reverse);
      std::cout << j.dump() << "\n";
      return cert.verdict == hull::IsoVerdict::InconclusiveAtDepth ? 3 : 0;
    }
    if (hull_ca->parsed()) {
      hull::FrequencyChain fc(parse_int_list(ca_chain), hull::GrowthPattern::parse(ca_pattern));
      hull::ConditionA ca = hull::condition_A(fc);
      nlohmann::json j = {{"holds", ca.holds}, {"m_min", ca.m_min}, {"depth", ca.depth}};
      std::cout << j.dump() << "\n";
      return 0;
    }
    if (pot_cmd->parsed()) return cmd_potential(Lab(pot_opts.resolve()));
    if (spec_cmd->parsed()) return cmd_spectrum(Lab(spec_opts.resolve()), vectors_file, profile_file);
    if (dress_cmd->parsed()) return cmd_dress(Lab(dress_opts.resolve()));
    if (ule_cmd->parsed()) return cmd_ule(Lab(ule_opts.resolve()));
    if (dyn_cmd->parsed()) return cmd_dynloc(Lab(dyn_opts.resolve()));
    if (sweep_cmd->parsed()) return cmd_sweep(Lab(sweep_opts.resolve()));
    if (approx_cmd->parsed())
      return cmd_approx(approx_opts.resolve(), ap_kind, ap_c, ap_beta, ap_r, ap_x0, ap_tmin,
                        ap_tmax, ap_tcount);
    return 2;
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cout << nlohmann::json({{"error", e.what()}, {"code", 2}}).dump() << "\n";
    return 2;
  } catch (const Inconclusive& e) {
    std::cout << nlohmann::json({{"error", e.what()}, {"code", 3}}).dump() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cout << nlohmann::json({{"error", e.what()}, {"code", 2}}).dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cout << nlohmann::json({{"error", e.what()}, {"code", 1}}).dump() << "\n";
    return 1;
  }
}

}  // namespace ulelab::cli
