#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ordexp/bank.hpp"
#include "ordexp/error.hpp"
#include "ordexp/kernel.hpp"
#include "ordexp/mcrisk.hpp"
#include "ordexp/model.hpp"
#include "ordexp/report.hpp"
#include "ordexp/svg.hpp"

namespace {

using namespace ordexp;

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::validation: return 2;
    case ErrorCategory::domain: return 3;
    case ErrorCategory::degenerate: return 4;
    case ErrorCategory::numeric: return 5;
    case ErrorCategory::bracket: return 6;
    case ErrorCategory::io: return 7;
    case ErrorCategory::internal: return 8;
  }
  return 8;
}

void report_error(const char* category, const std::string& message) {
  std::cerr << "error[" << category << "]: " << message << '\n';
}

/// key: value lines describing the resolved run, each prefixed with '#'.
class Echo {
 public:
  template <class T>
  Echo& add(const std::string& key, const T& value) {
    std::ostringstream s;
    s << value;
    lines_.emplace_back(key, s.str());
    return *this;
  }
  void print(std::ostream& out) const {
    for (const auto& [k, v] : lines_) out << "# " << k << ": " << v << '\n';
  }

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

template <class T, class F>
std::string join(const std::vector<T>& items, F f) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + std::string(f(items[i]));
  return out;
}

std::vector<LossSpec> parse_losses(const std::vector<std::string>& names) {
  std::vector<LossSpec> out;
  for (const auto& n : names) out.push_back(LossSpec::parse(n));
  return out;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void check_written(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

// Applies a key=value config file to options not given on the command line.
void apply_config(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  sub->parse_from_stream(in);
}

struct SimFlags {
  int p1 = 6;
  int p2 = 6;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double sigma2 = 1.0;
  std::vector<double> eta;
  double k = 2.0;
  long reps = 90000;
  std::uint64_t seed = 20240601;
  int threads = 0;

  void attach(CLI::App* app) {
    app->add_option("--p1", p1, "size of sample 1")->capture_default_str();
    app->add_option("--p2", p2, "size of sample 2")->capture_default_str();
    app->add_option("--mu1", mu1, "location of population 1")->capture_default_str();
    app->add_option("--mu2", mu2, "location of population 2")->capture_default_str();
    app->add_option("--sigma2", sigma2, "reference scale of population 2")->capture_default_str();
    app->add_option("--eta", eta, "eta grid, comma separated (default: 20 points on [0.05,1])")
        ->delimiter(',');
    app->add_option("--k", k, "power of the scale")->capture_default_str();
    app->add_option("--reps", reps, "replications per eta")->capture_default_str();
    app->add_option("--seed", seed, "64-bit seed")->capture_default_str();
    app->add_option("--threads", threads, "worker threads (0: all cores; ORDEXP_THREADS caps)")
        ->capture_default_str();
  }

  mc::SimConfig config() const {
    mc::SimConfig c;
    c.p1 = p1;
    c.p2 = p2;
    c.mu1 = mu1;
    c.mu2 = mu2;
    c.sigma2 = sigma2;
    if (!eta.empty()) c.eta_grid = eta;
    c.k = k;
    c.reps = reps;
    c.seed = seed;
    c.threads = threads;
    return c;
  }

  void echo(Echo& e, const mc::SimConfig& c) const {
    e.add("p1", c.p1).add("p2", c.p2).add("mu1", c.mu1).add("mu2", c.mu2).add("sigma2", c.sigma2);
    e.add("eta", join(c.eta_grid, [](double x) { return format_number(x); }));
    e.add("k", c.k).add("reps", c.reps).add("seed", c.seed);
    e.add("threads", mc::resolve_thread_count(c.threads));
  }
};

// --- constants --------------------------------------------------------------

struct ConstantsCmd {
  int p1 = 6;
  int p2 = 6;
  double k = 2.0;
  std::vector<std::string> losses{"squared", "entropy", "symmetric"};
  bool json = false;
  int precision = kDefaultPrecision;

  int run() const {
    EstimationConfig{k, LossSpec::quadratic()}.validate();
    Echo echo;
    echo.add("command", "constants").add("p1", p1).add("p2", p2).add("k", k);
    echo.add("losses", join(losses, [](const std::string& s) { return s; }));
    echo.add("precision", precision);
    std::ostream& out = std::cout;
    echo.print(json ? std::cerr : out);

    nlohmann::json doc = nlohmann::json::array();
    for (const LossSpec& loss : parse_losses(losses)) {
      const EstimatorBank bank(p1, p2, EstimationConfig{k, loss});
      const auto& s1 = bank.sigma1();
      const auto& s2 = bank.sigma2();
      std::vector<std::pair<std::string, const CheckedConstant*>> checked = {
          {"d01", &s1.checked_d01()},       {"alpha1", &s1.checked_alpha1()},
          {"alpha2", &s1.checked_alpha2()}, {"alpha3", &s1.checked_alpha2()},
          {"alpha4", &s1.checked_alpha4()}, {"d02", &s2.checked_d02()},
          {"beta1", &s2.checked_beta1()},   {"beta2", &s2.checked_beta2()}};
      std::vector<std::pair<std::string, double>> plain = {
          {"umvue1", umvue_constant(p1, k)},
          {"umvue2", umvue_constant(p2, k)},
          {"pooled_median", s1.pooled_median()},
          {"pcaee1", s1.m01()},
          {"pcaee2", s2.m02()}};
      if (json) {
        nlohmann::json entry;
        entry["loss"] = loss.name();
        for (const auto& [name, c] : checked) {
          entry[name] = c->ok() ? nlohmann::json(round_significant(c->value(), precision))
                                : nlohmann::json(nullptr);
          if (!c->ok()) entry["diagnostics"][name] = c->diagnostic();
        }
        for (const auto& [name, v] : plain) entry[name] = round_significant(v, precision);
        if (s2.checked_d02().ok() && s2.checked_beta1().ok()) {
          entry["expansion_dominates"] = s2.constants().expansion_dominates();
        }
        doc.push_back(entry);
      } else {
        out << "loss " << loss.name() << '\n';
        for (const auto& [name, c] : checked) {
          out << "  " << std::left << std::setw(16) << name
              << (c->ok() ? format_number(c->value(), precision) : "n/a (" + c->diagnostic() + ")")
              << '\n';
        }
        for (const auto& [name, v] : plain) {
          out << "  " << std::left << std::setw(16) << name << format_number(v, precision) << '\n';
        }
        if (s2.checked_d02().ok() && s2.checked_beta1().ok()) {
          out << "  " << std::left << std::setw(16) << "beta1<d02"
              << (s2.constants().expansion_dominates() ? "yes" : "no") << '\n';
        }
      }
    }
    if (json) out << doc.dump(2) << '\n';
    return 0;
  }
};

// --- estimate ---------------------------------------------------------------

struct EstimateCmd {
  std::string input;
  double k = 2.0;
  std::vector<std::string> losses{"squared", "entropy", "symmetric"};
  std::string format = "text";
  int precision = kDefaultPrecision;

  int run() const {
    const RawDataset data = read_dataset_csv(input);
    const SufficientStats stats = summarize(data);
    const auto loss_specs = parse_losses(losses);
    EstimationConfig{k, LossSpec::quadratic()}.validate();

    Echo echo;
    echo.add("command", "estimate").add("input", input).add("k", k);
    echo.add("losses", join(loss_specs, [](const LossSpec& l) { return l.name(); }));
    echo.add("format", format).add("precision", precision);
    echo.add("p1", stats.p1).add("p2", stats.p2);
    echo.add("x1", format_number(stats.x1, precision)).add("x2", format_number(stats.x2, precision));
    echo.add("s1", format_number(stats.s1, precision)).add("s2", format_number(stats.s2, precision));
    echo.add("mle_rate1", format_number(mle_rate(stats, 1), precision));
    echo.add("mle_rate2", format_number(mle_rate(stats, 2), precision));
    echo.print(format == "text" ? std::cout : std::cerr);

    const EstimateDocument doc = build_estimate_document(stats, k, loss_specs);
    if (format == "json") {
      std::cout << estimates_to_json(doc, precision) << '\n';
    } else if (format == "csv") {
      write_estimates_csv(std::cout, doc, precision);
    } else {
      std::cout << '\n';
      write_estimates_text(std::cout, doc, precision);
    }
    return 0;
  }
};

// --- simulate ---------------------------------------------------------------

struct SimulateCmd {
  SimFlags sim;
  std::vector<std::string> losses{"squared"};
  std::vector<std::string> estimators;
  std::string out_csv;
  std::string out_svg;
  int precision = kDefaultPrecision;

  int run() const {
    mc::SimConfig cfg = sim.config();
    cfg.losses = parse_losses(losses);
    if (estimators.empty() || (estimators.size() == 1 && estimators[0] == "all")) {
      for (Target t : {Target::sigma1, Target::sigma2})
        for (EstimatorId id : table_estimators(t)) cfg.estimators.push_back(id);
    } else {
      for (const auto& e : estimators) cfg.estimators.push_back(parse_estimator(e));
    }
    cfg.validate();

    std::ostream& log = out_csv.empty() ? std::cerr : std::cout;
    Echo echo;
    echo.add("command", "simulate");
    sim.echo(echo, cfg);
    echo.add("losses", join(cfg.losses, [](const LossSpec& l) { return l.name(); }));
    echo.add("estimators", join(cfg.estimators, [](EstimatorId id) { return to_string(id); }));
    echo.add("out", out_csv.empty() ? "-" : out_csv).add("svg", out_svg.empty() ? "-" : out_svg);
    echo.add("precision", precision);
    echo.print(log);

    const mc::RiskTable table = mc::simulate_risk(cfg);
    if (out_csv.empty()) {
      write_risk_csv(std::cout, table.rows, precision);
    } else {
      auto f = open_output(out_csv);
      write_risk_csv(f, table.rows, precision);
      check_written(f, out_csv);
    }
    if (!out_svg.empty()) {
      std::ostringstream buf;
      write_risk_csv(buf, table.rows, precision);
      std::istringstream back(buf.str());  // plot exactly what the CSV holds
      auto f = open_output(out_svg);
      f << render_rri_svg(read_risk_csv(back), "Relative risk improvement over the BAEE");
      check_written(f, out_svg);
    }
    log << "# rows: " << table.rows.size() << '\n';
    log << "# degenerate_resamples: " << table.degenerate_resamples << '\n';
    return 0;
  }
};

// --- gpc --------------------------------------------------------------------

struct GpcCmd {
  SimFlags sim;
  std::string a;
  std::string b;
  std::string loss = "squared";
  std::string out_csv;
  int precision = kDefaultPrecision;

  int run() const {
    mc::SimConfig cfg = sim.config();
    const LossSpec spec = LossSpec::parse(loss);
    cfg.losses = {spec};
    const EstimatorId ea = parse_estimator(a);
    const EstimatorId eb = parse_estimator(b);
    cfg.estimators = {ea, eb};
    cfg.validate();

    std::ostream& log = out_csv.empty() ? std::cerr : std::cout;
    Echo echo;
    echo.add("command", "gpc");
    sim.echo(echo, cfg);
    echo.add("a", to_string(ea)).add("b", to_string(eb)).add("loss", spec.name());
    echo.add("out", out_csv.empty() ? "-" : out_csv).add("precision", precision);
    echo.print(log);

    const auto points = mc::gpc_estimate(cfg, ea, eb, spec);
    if (out_csv.empty()) {
      write_gpc_csv(std::cout, points, precision);
    } else {
      auto f = open_output(out_csv);
      write_gpc_csv(f, points, precision);
      check_written(f, out_csv);
    }
    return 0;
  }
};

// --- gof --------------------------------------------------------------------

struct GofCmd {
  std::string input;
  int population = 1;
  double location = 0.0;
  double rate = 1.0;
  double alpha = 0.05;
  int precision = kDefaultPrecision;

  int run() const {
    if (population != 1 && population != 2) throw ValidationError("population must be 1 or 2");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
    const RawDataset data = read_dataset_csv(input);
    const auto& sample = population == 1 ? data.pop1 : data.pop2;

    Echo echo;
    echo.add("command", "gof").add("input", input).add("population", population);
    echo.add("location", location).add("rate", rate).add("alpha", alpha).add("n", sample.size());
    echo.print(std::cout);

    const KsResult r = ks_test(sample, location, rate);
    std::cout << "D        " << format_number(r.statistic, precision) << '\n';
    std::cout << "p-value  " << format_number(r.p_value, precision) << '\n';
    std::cout << "verdict  " << (r.p_value > alpha ? "fail to reject" : "reject") << " at alpha = "
              << format_number(alpha, precision) << '\n';
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Improved estimation of ordered exponential scale powers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ordexp 1.0.0");

  std::string config_path;
  auto add_common = [&](CLI::App* sub, int& precision) {
    sub->add_option("--config", config_path, "key=value file mirroring the flags; flags win");
    sub->add_option("--precision", precision, "significant digits")
        ->capture_default_str()
        ->check(CLI::Range(1, 17));
    sub->allow_config_extras(CLI::config_extras_mode::error);
  };
  auto loss_check = CLI::Validator(
      [](std::string& s) -> std::string {
        try {
          LossSpec::parse(s);
          return {};
        } catch (const ordexp::Error& e) {
          return e.what();
        }
      },
      "squared|entropy|symmetric|linex:<a>", "loss");

  ConstantsCmd constants;
  auto* c_app = app.add_subcommand("constants", "print the multiplier constants");
  c_app->add_option("--p1", constants.p1)->capture_default_str();
  c_app->add_option("--p2", constants.p2)->capture_default_str();
  c_app->add_option("--k", constants.k)->capture_default_str();
  c_app->add_option("--loss", constants.losses, "one or more losses")->delimiter(',')->check(loss_check);
  c_app->add_flag("--json", constants.json, "JSON output");
  add_common(c_app, constants.precision);

  EstimateCmd estimate;
  auto* e_app = app.add_subcommand("estimate", "estimate sigma1^k and sigma2^k from a dataset");
  e_app->add_option("--input", estimate.input, "CSV with header population,value")->required();
  e_app->add_option("--k", estimate.k)->capture_default_str();
  e_app->add_option("--loss", estimate.losses, "one or more losses")->delimiter(',')->check(loss_check);
  e_app->add_option("--format", estimate.format)
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  add_common(e_app, estimate.precision);

  SimulateCmd simulate;
  auto* s_app = app.add_subcommand("simulate", "Monte Carlo risk and RRI over an eta grid");
  simulate.sim.attach(s_app);
  s_app->add_option("--loss", simulate.losses, "one or more losses")->delimiter(',')->check(loss_check);
  s_app->add_option("--estimators", simulate.estimators, "estimator ids or 'all'")->delimiter(',');
  s_app->add_option("--out", simulate.out_csv, "RiskRow CSV path (default stdout)");
  s_app->add_option("--svg", simulate.out_svg, "SVG chart path");
  add_common(s_app, simulate.precision);

  GpcCmd gpc;
  auto* g_app = app.add_subcommand("gpc", "Monte Carlo Pitman closeness of two estimators");
  gpc.sim.attach(g_app);
  g_app->add_option("--a", gpc.a, "estimator A")->required();
  g_app->add_option("--b", gpc.b, "estimator B")->required();
  g_app->add_option("--loss", gpc.loss)->check(loss_check)->capture_default_str();
  g_app->add_option("--out", gpc.out_csv, "CSV path (default stdout)");
  add_common(g_app, gpc.precision);

  GofCmd gof;
  auto* k_app = app.add_subcommand("gof", "Kolmogorov-Smirnov fit of one population");
  k_app->add_option("--input", gof.input, "CSV with header population,value")->required();
  k_app->add_option("--population", gof.population, "which population to test (1 or 2)")->capture_default_str();
  k_app->add_option("--location", gof.location, "location of the fitted exponential")->required();
  k_app->add_option("--rate", gof.rate, "rate of the fitted exponential")->required();
  k_app->add_option("--alpha", gof.alpha, "significance level")->capture_default_str();
  add_common(k_app, gof.precision);

  try {
    app.parse(argc, argv);
    for (CLI::App* sub : app.get_subcommands()) apply_config(sub, config_path);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("validation", e.what());
    return 2;
  } catch (const ordexp::Error& e) {
    report_error(to_string(e.category()), e.what());
    return exit_code(e.category());
  }

  try {
    if (c_app->parsed()) return constants.run();
    if (e_app->parsed()) return estimate.run();
    if (s_app->parsed()) return simulate.run();
    if (g_app->parsed()) return gpc.run();
    if (k_app->parsed()) return gof.run();
  } catch (const ordexp::Error& e) {
    report_error(to_string(e.category()), e.what());
    return exit_code(e.category());
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return 8;
  }
  return 0;
}
