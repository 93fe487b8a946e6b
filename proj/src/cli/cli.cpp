#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hopdim/analytic.hpp"
#include "hopdim/core.hpp"
#include "hopdim/montecarlo.hpp"
#include "hopdim/numerics.hpp"

namespace hopdim::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

// Thrown for flag combinations CLI11 cannot express.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt_double(double v, const char* spec = "%.9g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

Json tagged(const Json& value, Method method) {
  return Json{{"value", value}, {"method", to_string(method)}};
}

struct Options {
  std::int64_t n = 0;
  std::int64_t d = 0;
  double pf = 1e-6;
  std::int64_t ncmax = 0;
  std::int64_t nru = 0;
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::string mode = "latin";
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::uint64_t chunk = 1u << 16;
  std::string out_file;
  bool pretty = false;

  // sweeps
  std::vector<std::int64_t> d_list;
  std::vector<std::int64_t> ncmax_list;
  std::int64_t n_min = 2;
  std::int64_t n_max = 26;
  std::vector<std::string> methods;
  double mc_pf = 1e-2;
  std::int64_t ref_d = 100;
};

struct Flags {
  CLI::Option* n = nullptr;
  CLI::Option* d = nullptr;
  CLI::Option* pf = nullptr;
  CLI::Option* nru = nullptr;
  CLI::Option* p = nullptr;
  CLI::Option* samples = nullptr;
  CLI::Option* seed = nullptr;
};

void add_output_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.out_file, "Write output to FILE instead of stdout");
  cmd->add_flag("--pretty", o.pretty, "Human-readable text instead of JSON/CSV");
}

void add_grid_flags(CLI::App* cmd, Options& o, Flags& f) {
  f.nru = cmd->add_option("--nru", o.nru, "Number of resource units (auto-factorized)");
  f.p = cmd->add_option("--p", o.p, "Frequency channels");
  auto* q = cmd->add_option("--q", o.q, "Time slots");
  f.nru->excludes(f.p)->excludes(q);
  f.p->needs(q);
  q->needs(f.p);
}

void add_threads_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--threads", o.threads, "Worker threads (default: HOPDIM_THREADS or all cores)");
  cmd->add_option("--chunk", o.chunk, "Samples per scheduling chunk")->check(CLI::PositiveNumber);
}

void add_mode_flag(CLI::App* cmd, Options& o) {
  cmd->add_option("--mode", o.mode, "Pattern sampling mode")
      ->check(CLI::IsMember({"latin", "uniform"}))
      ->capture_default_str();
}

// A finished command: either a JSON document or a table.
struct Output {
  std::optional<Json> doc;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_pretty_json(const Json& j, std::ostream& os, const std::string& indent = "") {
  for (const auto& [key, value] : j.items()) {
    if (value.is_object() && value.contains("value") && value.contains("method")) {
      os << indent << key << ": " << value["value"].dump() << "  [" << value["method"].get<std::string>()
         << "]";
      for (const auto& [k2, v2] : value.items()) {
        if (k2 != "value" && k2 != "method") os << "  " << k2 << "=" << v2.dump();
      }
      os << "\n";
    } else if (value.is_object()) {
      os << indent << key << ":\n";
      write_pretty_json(value, os, indent + "  ");
    } else {
      os << indent << key << ": " << value.dump() << "\n";
    }
  }
}

void emit(const Output& output, const Options& o, std::ostream& out) {
  std::ostringstream body;
  if (output.doc) {
    if (o.pretty) {
      write_pretty_json(*output.doc, body);
    } else {
      body << output.doc->dump(2) << "\n";
    }
  } else if (o.pretty) {
    std::vector<std::size_t> width(output.header.size(), 0);
    auto measure = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    };
    measure(output.header);
    for (const auto& r : output.rows) measure(r);
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        body << (i ? "  " : "") << std::string(width[i] - r[i].size(), ' ') << r[i];
      }
      body << "\n";
    };
    line(output.header);
    for (const auto& r : output.rows) line(r);
  } else {
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) body << (i ? "," : "") << r[i];
      body << "\n";
    };
    line(output.header);
    for (const auto& r : output.rows) line(r);
  }
  if (o.out_file.empty()) {
    out << body.str();
  } else {
    std::ofstream file(o.out_file, std::ios::binary);
    if (!file) throw UsageError("cannot open output file " + o.out_file);
    file << body.str();
  }
}

Json base_doc(const std::string& command, Json inputs) {
  return Json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"inputs", std::move(inputs)},
              {"results", Json::object()}};
}

std::int64_t grid_nru(const Options& o, const Flags& f) {
  if (f.nru->count()) return o.nru;
  if (f.p->count()) return ResourceGrid(o.p, o.q).n_ru();
  throw UsageError("a grid is required: pass --nru or --p and --q");
}

Output cmd_failure(const Options& o, const Flags& f) {
  const std::int64_t n_ru = grid_nru(o, f);
  Json doc = base_doc("analytic failure",
                      {{"n", o.n}, {"d", o.d}, {"n_ru", n_ru}, {"ncmax", o.ncmax}});
  doc["results"]["pf"] =
      tagged(analytic::failure_prob_resolvable(o.n, o.d, n_ru, o.ncmax), Method::ClosedForm);
  return {doc, {}, {}};
}

Output cmd_required_ru(const Options& o) {
  const ScenarioConfig sc(o.d, o.n, o.pf, o.ncmax);
  Json doc = base_doc("analytic required-ru",
                      {{"n", o.n}, {"d", o.d}, {"pf_target", o.pf}, {"ncmax", o.ncmax}});
  auto& r = doc["results"];
  const std::int64_t numeric = numerics::invert_required_ru_numeric(o.n, o.d, o.pf, o.ncmax);
  if (o.ncmax == 0) {
    r["n_ru"] = tagged(analytic::required_ru_no_resolution(o.n, o.d, o.pf), Method::ClosedForm);
  } else if (o.ncmax == 1) {
    r["n_ru"] = tagged(analytic::required_ru_single_resolution(o.n, o.d, o.pf), Method::ClosedForm);
  } else {
    r["n_ru"] = tagged(numeric, Method::NumericInversion);
  }
  r["n_ru_numeric"] = tagged(numeric, Method::NumericInversion);
  return {doc, {}, {}};
}

Output cmd_min_ru(const Options& o) {
  const ScenarioConfig sc(o.d, 1, o.pf, o.ncmax);
  Json doc = base_doc("analytic min-ru", {{"d", o.d}, {"pf_target", o.pf}, {"ncmax", o.ncmax}});
  auto& r = doc["results"];
  const auto best = numerics::optimal_reps_numeric(o.d, o.pf, o.ncmax);
  if (o.ncmax == 0) {
    r["n_ru"] = tagged(analytic::min_ru_no_resolution(o.d, o.pf), Method::ClosedForm);
    r["n_ru_linear"] = tagged(analytic::min_ru_no_resolution_linear(o.d, o.pf), Method::LinearApprox);
    r["n_star"] = tagged(analytic::optimal_reps_no_resolution(o.pf), Method::ClosedForm);
  } else if (o.ncmax == 1) {
    r["n_ru"] = tagged(analytic::min_ru_single_resolution(o.d, o.pf), Method::ClosedForm);
    r["n_star"] = tagged(analytic::optimal_reps_single_resolution(o.pf), Method::ClosedForm);
  } else {
    r["n_ru"] = tagged(best.n_ru_min, Method::NumericInversion);
    r["n_star"] = tagged(best.n_star, Method::NumericInversion);
  }
  r["n_ru_numeric"] = tagged(best.n_ru_min, Method::NumericInversion);
  r["n_star_numeric"] = tagged(best.n_star, Method::NumericInversion);
  return {doc, {}, {}};
}

Output cmd_opt_reps(const Options& o, const Flags& f) {
  const ScenarioConfig sc(std::max<std::int64_t>(o.d, 0), 1, o.pf, o.ncmax);
  const bool have_d = f.d->count() > 0;
  if (o.ncmax >= 2 && !have_d) {
    throw UsageError("opt-reps with --ncmax >= 2 has no closed form and needs --d");
  }
  Json inputs{{"pf_target", o.pf}, {"ncmax", o.ncmax}};
  if (have_d) inputs["d"] = o.d;
  Json doc = base_doc("analytic opt-reps", inputs);
  auto& r = doc["results"];
  if (o.ncmax == 0) {
    r["n_star"] = tagged(analytic::optimal_reps_no_resolution(o.pf), Method::ClosedForm);
  } else if (o.ncmax == 1) {
    r["n_star"] = tagged(analytic::optimal_reps_single_resolution(o.pf), Method::ClosedForm);
  }
  if (have_d) {
    const auto best = numerics::optimal_reps_numeric(o.d, o.pf, o.ncmax);
    r["n_star_numeric"] = tagged(best.n_star, Method::NumericInversion);
    r["n_ru_numeric"] = tagged(best.n_ru_min, Method::NumericInversion);
  }
  return {doc, {}, {}};
}

Output cmd_invert(const Options& o) {
  const ScenarioConfig sc(o.d, o.n, o.pf, o.ncmax);
  Json doc = base_doc("invert", {{"n", o.n}, {"d", o.d}, {"pf_target", o.pf}, {"ncmax", o.ncmax}});
  doc["results"]["n_ru"] =
      tagged(numerics::invert_required_ru_numeric(o.n, o.d, o.pf, o.ncmax), Method::NumericInversion);
  return {doc, {}, {}};
}

Json estimate_json(const FailureEstimate& e) {
  Json j = tagged(e.p_hat, Method::MonteCarlo);
  j["ci_low"] = e.ci_low;
  j["ci_high"] = e.ci_high;
  j["failures"] = e.failures;
  j["samples"] = e.samples;
  j["seed"] = e.seed;
  return j;
}

Output cmd_simulate(const Options& o, const Flags& f) {
  const SampleMode mode = parse_sample_mode(o.mode);
  // pf_target plays no role in estimation; any valid value satisfies the config.
  const ScenarioConfig sc(o.d, o.n, 0.5, o.ncmax);
  montecarlo::GridSpec spec = f.nru->count() ? montecarlo::GridSpec{o.nru}
                              : f.p->count() ? montecarlo::GridSpec{ResourceGrid(o.p, o.q)}
                                             : throw UsageError("a grid is required: pass --nru or --p and --q");
  const ResourceGrid grid = montecarlo::resolve_grid(spec, o.n, mode);
  montecarlo::SimJob job{sc, grid, mode, o.samples, o.seed, o.chunk};
  const auto est = montecarlo::estimate_failure(job, {o.threads});
  Json doc = base_doc("simulate", {{"n", o.n},
                                   {"d", o.d},
                                   {"ncmax", o.ncmax},
                                   {"mode", to_string(mode)},
                                   {"grid", {{"p", grid.p()}, {"q", grid.q()}, {"n_ru", grid.n_ru()}}},
                                   {"samples", o.samples},
                                   {"seed", o.seed}});
  doc["results"]["p_hat"] = estimate_json(est);
  return {doc, {}, {}};
}

Output cmd_search(const Options& o) {
  const SampleMode mode = parse_sample_mode(o.mode);
  const auto res =
      montecarlo::search_min_ru(o.n, o.d, o.pf, o.ncmax, mode, o.samples, o.seed, {o.threads});
  Json doc = base_doc("search", {{"n", o.n},
                                 {"d", o.d},
                                 {"pf_target", o.pf},
                                 {"ncmax", o.ncmax},
                                 {"mode", to_string(mode)},
                                 {"samples", o.samples},
                                 {"seed", o.seed}});
  auto& r = doc["results"];
  Json n_ru = tagged(res.result.n_ru, Method::MonteCarlo);
  n_ru["grid"] = {{"p", res.grid.p()}, {"q", res.grid.q()}};
  n_ru["p_hat"] = res.estimate.p_hat;
  n_ru["ci_low"] = res.estimate.ci_low;
  n_ru["ci_high"] = res.estimate.ci_high;
  n_ru["candidate_seed"] = res.estimate.seed;
  n_ru["evaluations"] = res.evaluations;
  n_ru["skipped_candidates"] = res.skipped;
  r["n_ru"] = n_ru;
  r["n_ru_numeric"] =
      tagged(numerics::invert_required_ru_numeric(o.n, o.d, o.pf, o.ncmax), Method::NumericInversion);
  return {doc, {}, {}};
}

bool wants(const Options& o, const std::string& m) {
  return std::find(o.methods.begin(), o.methods.end(), m) != o.methods.end();
}

Output cmd_sweep_fig3(const Options& o) {
  if (o.n_min < 1 || o.n_max < o.n_min) throw UsageError("need 1 <= --n-min <= --n-max");
  if (o.d_list.empty() || o.ncmax_list.empty() || o.methods.empty()) {
    throw UsageError("--d, --ncmax and --methods must be non-empty");
  }
  const bool mc = wants(o, "montecarlo");
  if (mc && (o.samples == 0)) throw UsageError("montecarlo needs --samples and --seed");
  const SampleMode mode = parse_sample_mode(o.mode);

  Output out;
  out.header = {"method", "ncmax", "n", "d", "pf_target", "n_ru"};
  if (mc) {
    for (const char* h : {"p_hat", "ci_low", "ci_high", "samples", "seed"}) out.header.emplace_back(h);
  }
  const std::string pf_text = fmt_double(o.pf, "%g");
  const std::string mc_pf_text = fmt_double(o.mc_pf, "%g");

  auto row = [&](const std::string& method, std::int64_t ncmax, std::int64_t n, std::int64_t d,
                 const std::string& pf, std::int64_t n_ru) {
    std::vector<std::string> r{method, std::to_string(ncmax), std::to_string(n), std::to_string(d), pf,
                               std::to_string(n_ru)};
    if (mc) r.resize(out.header.size());
    return r;
  };

  for (const auto d : o.d_list) {
    for (const auto ncmax : o.ncmax_list) {
      const ScenarioConfig sc(d, o.n_min, o.pf, ncmax);
      // Per-method curve, then a *_min row marking its argmin (ties: smaller n).
      auto curve = [&](const std::string& method, auto&& value_at) {
        std::int64_t best_n = 0;
        std::int64_t best = 0;
        for (std::int64_t n = o.n_min; n <= o.n_max; ++n) {
          const std::int64_t v = value_at(n);
          out.rows.push_back(row(method, ncmax, n, d, pf_text, v));
          if (best_n == 0 || v < best) {
            best_n = n;
            best = v;
          }
        }
        out.rows.push_back(row(method + "_min", ncmax, best_n, d, pf_text, best));
      };
      if (wants(o, "closed_form") && ncmax <= 1) {
        curve("closed_form", [&](std::int64_t n) {
          return ncmax == 0 ? analytic::required_ru_no_resolution(n, d, o.pf)
                            : analytic::required_ru_single_resolution(n, d, o.pf);
        });
      }
      if (wants(o, "numeric")) {
        curve("numeric", [&](std::int64_t n) {
          return numerics::invert_required_ru_numeric(n, d, o.pf, ncmax);
        });
      }
      if (mc) {
        std::int64_t best_n = 0;
        std::vector<std::string> best_row;
        std::int64_t best = 0;
        for (std::int64_t n = o.n_min; n <= o.n_max; ++n) {
          const auto res =
              montecarlo::search_min_ru(n, d, o.mc_pf, ncmax, mode, o.samples, o.seed, {o.threads});
          auto r = row("montecarlo", ncmax, n, d, mc_pf_text, res.result.n_ru);
          r[6] = fmt_double(res.estimate.p_hat);
          r[7] = fmt_double(res.estimate.ci_low);
          r[8] = fmt_double(res.estimate.ci_high);
          r[9] = std::to_string(o.samples);
          r[10] = std::to_string(o.seed);
          out.rows.push_back(r);
          if (best_n == 0 || res.result.n_ru < best) {
            best_n = n;
            best = res.result.n_ru;
            best_row = r;
          }
        }
        best_row[0] = "montecarlo_min";
        out.rows.push_back(best_row);
      }
    }
  }
  return out;
}

Output cmd_sweep_fig4(const Options& o) {
  if (o.d_list.empty() || o.ncmax_list.empty()) throw UsageError("--d and --ncmax must be non-empty");
  for (const auto k : o.ncmax_list) {
    if (k != 0 && k != 1) throw UsageError("sweep-fig4 supports --ncmax 0 and 1 only");
  }
  Output out;
  out.header = {"d", "ncmax", "n_star", "n_ru_min_asymptotic", "n_ru_min_reference", "rel_gap"};
  for (const auto ncmax : o.ncmax_list) {
    // The optimal repetition count does not depend on d; take it from the reference scenario.
    const std::int64_t n_star = numerics::optimal_reps_numeric(o.ref_d, o.pf, ncmax).n_star;
    for (const auto d : o.d_list) {
      const ScenarioConfig sc(d, n_star, o.pf, ncmax);
      if (d < 1) throw PreconditionError("d must be >= 1, got " + std::to_string(d));
      const std::int64_t asym = ncmax == 0 ? analytic::min_ru_no_resolution_linear(d, o.pf)
                                           : analytic::min_ru_single_resolution(d, o.pf);
      const std::int64_t ref = ncmax == 0 ? analytic::required_ru_no_resolution(n_star, d, o.pf)
                                          : numerics::invert_required_ru_numeric(n_star, d, o.pf, 1);
      const double gap = std::abs(static_cast<double>(asym - ref)) / static_cast<double>(ref);
      out.rows.push_back({std::to_string(d), std::to_string(ncmax), std::to_string(n_star),
                          std::to_string(asym), std::to_string(ref), fmt_double(gap, "%.6f")});
    }
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  Flags failure_flags;
  Flags simulate_flags;
  CLI::App app{"Resource dimensioning for frequency-hopped packet repetition", "hopdim"};
  app.require_subcommand(1);

  auto* analytic_cmd = app.add_subcommand("analytic", "Closed-form quantities");
  analytic_cmd->require_subcommand(1);

  auto* failure = analytic_cmd->add_subcommand("failure", "Failure probability of a grid");
  failure->add_option("--n", o.n, "Packet repetitions")->required();
  failure->add_option("--d", o.d, "Interfering devices")->required();
  failure->add_option("--ncmax", o.ncmax, "Resolvable collisions per resource unit");
  add_grid_flags(failure, o, failure_flags);
  add_output_flags(failure, o);

  auto* required = analytic_cmd->add_subcommand("required-ru", "Resource units needed for a given n");
  required->add_option("--n", o.n, "Packet repetitions")->required();
  required->add_option("--d", o.d, "Interfering devices")->required();
  required->add_option("--pf", o.pf, "Target failure probability")->required();
  required->add_option("--ncmax", o.ncmax, "Resolvable collisions per resource unit");
  add_output_flags(required, o);

  auto* min_ru = analytic_cmd->add_subcommand("min-ru", "Minimum resource units over n");
  min_ru->add_option("--d", o.d, "Interfering devices")->required();
  min_ru->add_option("--pf", o.pf, "Target failure probability")->required();
  min_ru->add_option("--ncmax", o.ncmax, "Resolvable collisions per resource unit");
  add_output_flags(min_ru, o);

  auto* opt_reps = analytic_cmd->add_subcommand("opt-reps", "Optimal repetition count");
  opt_reps->add_option("--pf", o.pf, "Target failure probability")->required();
  opt_reps->add_option("--ncmax", o.ncmax, "Resolvable collisions per resource unit");
  Flags opt_flags;
  opt_flags.d = opt_reps->add_option("--d", o.d, "Interfering devices (enables the integer scan)");
  add_output_flags(opt_reps, o);

  auto* invert = app.add_subcommand("invert", "Numeric inversion of the failure probability");
  invert->add_option("--n", o.n, "Packet repetitions")->required();
  invert->add_option("--d", o.d, "Interfering devices")->required();
  invert->add_option("--pf", o.pf, "Target failure probability")->required();
  invert->add_option("--ncmax", o.ncmax, "Resolvable collisions per resource unit");
  add_output_flags(invert, o);

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo failure probability");
  simulate->add_option("--n", o.n, "Packet repetitions")->required();
  simulate->add_option("--d", o.d, "Interfering devices")->required();
  simulate->add_option("--ncmax", o.ncmax, "Resolvable collisions per resource unit");
  add_grid_flags(simulate, o, simulate_flags);
  add_mode_flag(simulate, o);
  simulate->add_option("--samples", o.samples, "Monte-Carlo samples")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", o.seed, "Master seed")->required();
  add_threads_flags(simulate, o);
  add_output_flags(simulate, o);

  auto* search = app.add_subcommand("search", "Monte-Carlo search for the minimum n_ru");
  search->add_option("--n", o.n, "Packet repetitions")->required();
  search->add_option("--d", o.d, "Interfering devices")->required();
  search->add_option("--pf", o.pf, "Target failure probability")->required();
  search->add_option("--ncmax", o.ncmax, "Resolvable collisions per resource unit");
  add_mode_flag(search, o);
  search->add_option("--samples", o.samples, "Monte-Carlo samples per candidate")->required();
  search->add_option("--seed", o.seed, "Master seed")->required();
  add_threads_flags(search, o);
  add_output_flags(search, o);

  auto* fig3 = app.add_subcommand("sweep-fig3", "Required n_ru versus n for several ncmax (CSV)");
  o.d_list = {100};
  o.ncmax_list = {0, 1, 2, 3};
  o.methods = {"closed_form", "numeric"};
  fig3->add_option("--d", o.d_list, "Interfering devices (comma list)")->delimiter(',')->capture_default_str();
  fig3->add_option("--pf", o.pf, "Target failure probability")->capture_default_str();
  fig3->add_option("--ncmax", o.ncmax_list, "Resolvable collisions (comma list)")->delimiter(',')->capture_default_str();
  fig3->add_option("--n-min", o.n_min, "Smallest n")->capture_default_str();
  fig3->add_option("--n-max", o.n_max, "Largest n")->capture_default_str();
  fig3->add_option("--methods", o.methods, "closed_form,numeric,montecarlo")
      ->delimiter(',')
      ->check(CLI::IsMember({"closed_form", "numeric", "montecarlo"}))
      ->capture_default_str();
  fig3->add_option("--mc-pf", o.mc_pf, "Relaxed target used by the montecarlo rows")->capture_default_str();
  fig3->add_option("--samples", o.samples, "Monte-Carlo samples per candidate");
  fig3->add_option("--seed", o.seed, "Master seed");
  add_mode_flag(fig3, o);
  add_threads_flags(fig3, o);
  add_output_flags(fig3, o);

  auto* fig4 = app.add_subcommand("sweep-fig4", "Asymptotic versus reference minimum n_ru over d (CSV)");
  std::vector<std::int64_t> fig4_d = {10, 20, 50, 100, 200, 500, 1000};
  std::vector<std::int64_t> fig4_ncmax = {0, 1};
  fig4->add_option("--d", fig4_d, "Interfering devices (comma list)")->delimiter(',')->capture_default_str();
  fig4->add_option("--pf", o.pf, "Target failure probability")->capture_default_str();
  fig4->add_option("--ncmax", fig4_ncmax, "0 and/or 1 (comma list)")->delimiter(',')->capture_default_str();
  fig4->add_option("--ref-d", o.ref_d, "Scenario whose optimal n is reused for every d")->capture_default_str();
  add_output_flags(fig4, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    Output result;
    if (*failure) {
      result = cmd_failure(o, failure_flags);
    } else if (*required) {
      result = cmd_required_ru(o);
    } else if (*min_ru) {
      result = cmd_min_ru(o);
    } else if (*opt_reps) {
      result = cmd_opt_reps(o, opt_flags);
    } else if (*invert) {
      result = cmd_invert(o);
    } else if (*simulate) {
      result = cmd_simulate(o, simulate_flags);
    } else if (*search) {
      result = cmd_search(o);
    } else if (*fig3) {
      result = cmd_sweep_fig3(o);
    } else {
      o.d_list = fig4_d;
      o.ncmax_list = fig4_ncmax;
      result = cmd_sweep_fig4(o);
    }
    emit(result, o, out);
    return kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const StatisticalPreconditionError& e) {
    err << "statistical precondition failed: " << e.what() << "\n";
    return kStatistical;
  } catch (const PreconditionError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const RangeError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace hopdim::cli
