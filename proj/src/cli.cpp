#include "pdeid/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "pdeid/classify.hpp"
#include "pdeid/emit.hpp"
#include "pdeid/harness.hpp"
#include "pdeid/sweep_config.hpp"

namespace pdeid::cli {

namespace {

// Bad input from the user: exit 1.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

nlohmann::json threshold_json(const Threshold& t) { return t ? nlohmann::json(*t) : nlohmann::json(nullptr); }

nlohmann::json settings_json(const SweepConfig& c) {
  const auto d = grid_domain(c.grid);
  nlohmann::json fns = nlohmann::json::array();
  for (auto f : c.functions) fns.push_back(to_string(f));
  return {
      {"grid", {{"n_t", c.grid.n_t}, {"n_x", c.grid.n_x}, {"t_min", d[0]}, {"t_max", d[1]}, {"x_min", d[2]}, {"x_max", d[3]}}},
      {"noise", {{"levels", c.noise_levels}, {"delta", c.delta}, {"convention", to_string(c.noise_convention)}}},
      {"sweep",
       {{"functions", fns},
        {"fd_orders", c.fd_orders},
        {"seeds_per_cell", c.seeds_per_cell},
        {"master_seed", c.master_seed},
        {"method", c.method ? std::string(to_string(*c.method)) : std::string("auto")},
        {"features", c.features.to_string()},
        {"a", c.a},
        {"b", c.b},
        {"threads", c.threads}}},
      {"constants",
       {{"C", c.policy.C},
        {"c1_low_factor", c.policy.c1_low_factor},
        {"c1_up_factor", c.policy.c1_up_factor},
        {"cn_factor", c.policy.cn_factor},
        {"c_xi", c.policy.c_xi},
        {"fallback_c_u", c.policy.fallback_c_u ? nlohmann::json(*c.policy.fallback_c_u) : nlohmann::json(nullptr)},
        {"rounding_guard", c.policy.rounding_guard}}},
  };
}

// Options shared by analyze and sweep that land in a SweepConfig.
struct CommonOptions {
  std::string config_path;
  std::string grid;
  std::string domain;
  std::string features;
  std::string method;
  std::string convention;
  double delta = 0.0;
  double a = 0.0;
  double b = 0.0;
  CLI::Option* delta_opt = nullptr;
  CLI::Option* a_opt = nullptr;
  CLI::Option* b_opt = nullptr;

  void attach(CLI::App& app) {
    app.add_option("--config", config_path, "Config file with [grid], [noise], [sweep], [constants] sections")
        ->check(CLI::ExistingFile);
    app.add_option("--grid", grid, "Grid points as NTxNX, e.g. 64x64");
    app.add_option("--domain", domain, "t_min,t_max,x_min,x_max");
    app.add_option("--features", features, "Feature list, e.g. \"u, u_x\"");
    app.add_option("--method", method, "franco, jrc or auto (by PDE class)")
        ->check(CLI::IsMember({"franco", "jrc", "auto"}));
    app.add_option("--noise-convention", convention, "paper (std = a^2 |u|^2) or linear (std = a |u|)")
        ->check(CLI::IsMember({"paper", "linear"}));
    delta_opt = app.add_option("--delta", delta, "Failure probability of the noise bound")->check(CLI::Range(0.0, 1.0));
    a_opt = app.add_option("--a", a, "Shape parameter a of the test functions");
    b_opt = app.add_option("--b", b, "Shape parameter b of lin_affine_exp");
  }

  // defaults < config file < flags
  SweepConfig resolve() const {
    SweepConfig cfg;
    try {
      if (!config_path.empty()) cfg = load_sweep_config(config_path, cfg);
      if (!grid.empty() || !domain.empty()) {
        auto [n_t, n_x] = std::pair{cfg.grid.n_t, cfg.grid.n_x};
        if (!grid.empty()) std::tie(n_t, n_x) = parse_grid_size(grid);
        const auto dom = domain.empty() ? grid_domain(cfg.grid) : parse_domain(domain);
        cfg.grid = make_grid(n_t, n_x, dom);
      }
      if (!features.empty()) cfg.features = FeatureSpec::parse(features);
      if (!method.empty()) {
        if (method == "auto") cfg.method.reset();
        else cfg.method = parse_method(method);
      }
      if (!convention.empty()) cfg.noise_convention = parse_noise_convention(convention);
      if (delta_opt->count()) cfg.delta = delta;
      if (a_opt->count()) cfg.a = a;
      if (b_opt->count()) cfg.b = b;
      cfg.validate();
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
    return cfg;
  }
};

// --- stencil -----------------------------------------------------------------

struct StencilCmd {
  int order = 0;
  int deriv = 0;
  double h = 1.0;
  double epsilon = 0.0;
  double c_u = 1.0;
  double c_xi = 1.0;
  bool json = false;

  void attach(CLI::App& app) {
    app.add_option("--order", order, "Even accuracy order n >= 2")->required();
    app.add_option("--deriv", deriv, "Derivative order l, 1 <= l <= min(3, n)")->required();
    app.add_option("--h", h, "Grid spacing")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--epsilon", epsilon, "Noise bound for the e_fd components")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app.add_option("--c-u", c_u, "Bound on the higher derivatives of u")->capture_default_str()->check(CLI::NonNegativeNumber);
    app.add_option("--c-xi", c_xi, "Bound on the xi-derivative factors")->capture_default_str()->check(CLI::NonNegativeNumber);
    app.add_flag("--json", json, "Machine-readable output");
  }

  int run(std::ostream& out) const {
    Stencil st;
    try {
      st = lagrange_stencil(order, deriv, h);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const BoundConstants bc{c_u, c_xi};
    const double truncation = truncation_bound(order, deriv, h, bc);
    const double amplification = noise_amplification(order, deriv, h);
    const double total = e_fd(order, deriv, h, epsilon, bc);
    if (json) {
      nlohmann::json offsets = nlohmann::json::array();
      nlohmann::json unit = nlohmann::json::array();
      for (std::size_t k = 0; k < st.size(); ++k) {
        offsets.push_back(static_cast<int>(k) - st.half_width());
        unit.push_back(st.unit_weights[k].str());
      }
      out << nlohmann::json{{"order", st.order},
                            {"deriv", st.deriv},
                            {"h", st.h},
                            {"offsets", offsets},
                            {"weights", st.weights},
                            {"unit_weights", unit},
                            {"e_fd",
                             {{"epsilon", epsilon},
                              {"c_u", c_u},
                              {"c_xi", c_xi},
                              {"truncation", truncation},
                              {"noise_amplification", amplification},
                              {"total", total}}}}
                 .dump(2)
          << '\n';
      return kExitOk;
    }
    for (std::size_t k = 0; k < st.size(); ++k) out << (k ? " " : "") << format_real(st.weights[k]);
    out << "\nunit weights (h = 1):";
    for (const auto& w : st.unit_weights) out << ' ' << w.str();
    out << "\ntruncation bound     " << format_real(truncation) << "  (C_u = " << format_real(c_u)
        << ", C_xi = " << format_real(c_xi) << ")\n"
        << "noise amplification  " << format_real(amplification) << "\n"
        << "e_fd                 " << format_real(total) << "  (epsilon = " << format_real(epsilon) << ")\n";
    return kExitOk;
  }
};

// --- analyze -----------------------------------------------------------------

struct AnalyzeCmd {
  CommonOptions common;
  std::string function;
  int fd_order = 8;
  double noise = 0.0;
  std::uint64_t seed = 1;
  bool json = false;

  void attach(CLI::App& app) {
    common.attach(app);
    app.add_option("--function", function, "Test function id (lin_exp, ..., ana_arcsin)")->required();
    app.add_option("--fd-order", fd_order, "Even FD accuracy order")->capture_default_str();
    app.add_option("--noise", noise, "Noise level alpha >= 0")->capture_default_str()->check(CLI::NonNegativeNumber);
    app.add_option("--seed", seed, "Noise seed")->capture_default_str();
    app.add_flag("--json", json, "Machine-readable output");
  }

  int run(std::ostream& out) const {
    const SweepConfig cfg = common.resolve();
    const auto id = parse_function_id(function);
    if (!id) throw UsageError("unknown function '" + function + "'; expected one of lin_exp, lin_cos, lin_sin, "
                              "lin_affine_exp, alg_inv, alg_invsqrt, ana_arccos, ana_arcsin");
    if (fd_order < 2 || fd_order % 2 != 0) throw UsageError("--fd-order must be an even integer >= 2");

    const TestFunction fn{*id, cfg.a, cfg.b};
    const Method method = cfg.method_for(*id);
    const Field clean = sample(fn, cfg.grid);
    const NoiseModel nm = NoiseModel::calibrate(clean, noise, seed, cfg.delta, cfg.noise_convention);
    const Field noisy = add_noise(clean, nm);
    const double realized = (noisy.values - clean.values).cwiseAbs().maxCoeff();

    AnalysisRequest req;
    req.method = method;
    req.pde_class = fn.pde_class();
    req.features = cfg.features;
    req.fd_order = fd_order;
    req.noise_epsilon = nm.epsilon;
    req.policy = cfg.policy;
    const AnalysisResult res = analyze(noisy, req);
    const Verdict& v = res.verdict;
    std::optional<Label> truth;
    if (cfg.features.is_value_and_ux()) truth = to_label(fn.truth());

    if (json) {
      nlohmann::json constants{{"c_u", res.bounds.c_u}, {"c_xi", res.bounds.c_xi}, {"c1_low", nullptr}, {"c1_up", nullptr},
                               {"c_n", nullptr}};
      if (res.constants) {
        constants["c1_low"] = res.constants->c1_low;
        constants["c1_up"] = res.constants->c1_up;
        constants["c_n"] = res.constants->c_n;
      }
      const bool franco = method == Method::Franco;
      nlohmann::json j{
          {"function", to_string(*id)},
          {"pde_class", to_string(fn.pde_class())},
          {"method", to_string(method)},
          {"fd_order", fd_order},
          {"noise_level", noise},
          {"seed", seed},
          {"label", to_string(v.label)},
          {"truth", truth ? nlohmann::json(to_string(*truth)) : nlohmann::json(nullptr)},
          {"rho", v.rho_max()},
          {"rho_min", v.rho_min()},
          {"t_nonunique", threshold_json(v.t_nonunique_summary())},
          {"t_unique", threshold_json(v.t_unique_summary())},
          {"eps_G", franco ? nlohmann::json(res.eps_budget) : nlohmann::json(nullptr)},
          {"eps_JG", franco ? nlohmann::json(nullptr) : nlohmann::json(res.eps_budget)},
          {"epsilon", res.epsilon},
          {"noise", {{"sigma", nm.sigma}, {"epsilon", nm.epsilon}, {"realized_max", realized}, {"bound_held", realized <= nm.epsilon}}},
          {"constants", constants},
          {"points", v.rho_values.size()},
          {"witness_count", v.witness_count},
          {"flags", v.flags},
          {"settings", settings_json(cfg)},
      };
      out << j.dump(2) << '\n';
      return kExitOk;
    }
    auto thr = [](const Threshold& t) { return t ? format_real(*t) : std::string("invalid"); };
    out << "function     " << to_string(*id) << " (" << to_string(fn.pde_class()) << ")\n"
        << "method       " << to_string(method) << ", fd_order " << fd_order << "\n"
        << "noise        level " << format_real(noise) << ", seed " << seed << ", epsilon " << format_real(nm.epsilon)
        << (realized <= nm.epsilon ? " (held)" : " (exceeded)") << "\n"
        << "rho          " << format_real(v.rho_max());
    if (method == Method::Jrc) out << " (max over " << v.rho_values.size() << " points, min " << format_real(v.rho_min()) << ")";
    out << "\n"
        << "t_nonunique  " << thr(v.t_nonunique_summary()) << "\n"
        << "t_unique     " << thr(v.t_unique_summary()) << "\n"
        << (method == Method::Franco ? "eps_G        " : "eps_JG       ") << format_real(res.eps_budget) << "\n"
        << "label        " << to_string(v.label);
    if (truth) out << " (truth " << to_string(*truth) << ")";
    out << "\n";
    if (!v.flags.empty()) {
      out << "flags       ";
      for (const auto& f : v.flags) out << ' ' << f;
      out << "\n";
    }
    return kExitOk;
  }
};

// --- sweep -------------------------------------------------------------------

void print_counts(std::ostream& out, const CountGrid& grid, const std::vector<double>& levels) {
  out << std::left << std::setw(14) << "method/order";
  for (double l : levels) out << std::setw(8) << format_real(l);
  out << "\n";
  std::optional<std::pair<Method, int>> current;
  for (const auto& c : grid.cells) {
    if (!current || current->first != c.method || current->second != c.fd_order) {
      if (current) out << "\n";
      current = {c.method, c.fd_order};
      out << std::setw(14) << (std::string(to_string(c.method)) + "/" + std::to_string(c.fd_order));
    }
    out << std::setw(8) << (std::to_string(c.correct) + "/" + std::to_string(c.total));
  }
  out << "\n";
}

struct SweepCmd {
  CommonOptions common;
  std::string out_path;
  std::string svg_dir;
  std::string summary_path;
  std::string functions;
  std::string fd_orders;
  std::string noise_levels;
  int seeds_per_cell = 0;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
  bool timings = false;
  bool json = false;
  CLI::Option* seeds_opt = nullptr;
  CLI::Option* master_opt = nullptr;
  CLI::Option* threads_opt = nullptr;

  void attach(CLI::App& app) {
    common.attach(app);
    app.add_option("--out", out_path, "Result CSV path (stdout when omitted and --json is off)");
    app.add_option("--svg", svg_dir, "Directory for one SVG per function");
    app.add_option("--summary", summary_path, "Correct-count CSV path");
    app.add_option("--functions", functions, "Comma-separated function ids or 'all'");
    app.add_option("--fd-orders", fd_orders, "Comma-separated even FD orders");
    app.add_option("--noise-levels", noise_levels, "Comma-separated ascending noise levels");
    seeds_opt = app.add_option("--seeds-per-cell", seeds_per_cell, "Seeds per (function, order, noise) cell")
                    ->check(CLI::PositiveNumber);
    master_opt = app.add_option("--master-seed", master_seed, "Master seed for all per-case streams");
    threads_opt = app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--timings", timings, "Fill the wall_time column (output is then not reproducible)");
    app.add_flag("--json", json, "Print run metadata and the count grid as JSON");
  }

  int run(std::ostream& out, std::ostream& err) const {
    SweepConfig cfg = common.resolve();
    try {
      if (!functions.empty()) cfg.functions = parse_function_list(functions);
      if (!fd_orders.empty()) cfg.fd_orders = parse_int_list(fd_orders);
      if (!noise_levels.empty()) cfg.noise_levels = parse_real_list(noise_levels);
      if (seeds_opt->count()) cfg.seeds_per_cell = seeds_per_cell;
      if (master_opt->count()) cfg.master_seed = master_seed;
      if (threads_opt->count()) cfg.threads = threads;
      if (timings) cfg.record_timings = true;
      cfg.validate();
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }

    const ResultTable table = run_sweep(cfg);
    const CountGrid grid = summarize(table);
    if (!out_path.empty()) {
      write_text_file(out_path, to_csv(table));
    } else if (!json) {
      write_csv(out, table);
    }
    if (!summary_path.empty()) {
      std::ostringstream os;
      write_counts_csv(os, grid);
      write_text_file(summary_path, os.str());
    }
    if (!svg_dir.empty()) {
      std::filesystem::create_directories(svg_dir);
      for (FunctionId f : cfg.functions) {
        const auto path = (std::filesystem::path(svg_dir) / (std::string(to_string(f)) + ".svg")).string();
        try {
          write_text_file(path, render_svg_lines(table, f));
        } catch (const std::invalid_argument& e) {
          err << "pde-ident sweep: skipped " << path << ": " << e.what() << "\n";
        }
      }
    }

    std::size_t errors = 0;
    std::size_t wrong_with_bound = 0;
    for (const auto& r : table) {
      if (r.status == CaseStatus::Error) ++errors;
      if (r.correct == Correct::No && r.noise_bound_held) ++wrong_with_bound;
    }
    if (json) {
      out << nlohmann::json{{"rows", table.size()},
                            {"errors", errors},
                            {"wrong_with_bound_held", wrong_with_bound},
                            {"out", out_path.empty() ? nlohmann::json(nullptr) : nlohmann::json(out_path)},
                            {"settings", settings_json(cfg)},
                            {"counts", to_json(grid)}}
                 .dump(2)
          << '\n';
    } else if (!out_path.empty()) {
      out << table.size() << " rows written to " << out_path << " (" << errors << " errors)\n";
      print_counts(out, grid, cfg.noise_levels);
    }
    for (const auto& r : table) {
      if (r.status == CaseStatus::Error) {
        err << "pde-ident sweep: " << to_string(r.function_id) << " order " << r.fd_order << " noise "
            << format_real(r.noise_level) << ": " << r.message << "\n";
      }
    }
    return errors ? kExitFailure : kExitOk;
  }
};

// --- plot --------------------------------------------------------------------

struct PlotCmd {
  std::string in_path;
  std::string out_path;
  std::string function;

  void attach(CLI::App& app) {
    app.add_option("--in", in_path, "Result CSV from `sweep`")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "SVG path")->required();
    app.add_option("--function", function, "Function whose rows are plotted")->required();
  }

  int run(std::ostream& out) const {
    const auto id = parse_function_id(function);
    if (!id) throw UsageError("unknown function '" + function + "'");
    std::ifstream in(in_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + in_path + "'");
    ResultTable table;
    try {
      table = read_csv(in);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(in_path + ": " + e.what());
    }
    write_text_file(out_path, render_svg_lines(table, *id));
    out << "wrote " << out_path << "\n";
    return kExitOk;
  }
};

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Identifiability of learned PDEs from noisy gridded data", "pde-ident"};
  app.require_subcommand(1);
  app.fallthrough(false);

  StencilCmd stencil;
  AnalyzeCmd analyze_cmd;
  SweepCmd sweep;
  PlotCmd plot;
  auto* stencil_app = app.add_subcommand("stencil", "Print central finite-difference weights");
  // --h is the step size here, so help keeps only its long form
  stencil_app->set_help_flag("--help", "Print this help message and exit");
  auto* analyze_app = app.add_subcommand("analyze", "Classify one noisy test function");
  auto* sweep_app = app.add_subcommand("sweep", "Run an experiment sweep and write result rows");
  auto* plot_app = app.add_subcommand("plot", "Render rho and thresholds from a result CSV as SVG");
  stencil.attach(*stencil_app);
  analyze_cmd.attach(*analyze_app);
  sweep.attach(*sweep_app);
  plot.attach(*plot_app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "pde-ident: " << e.what() << "\n";
    if (app.get_subcommands().empty()) err << app.help();
    else err << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (stencil_app->parsed()) return stencil.run(out);
    if (analyze_app->parsed()) return analyze_cmd.run(out);
    if (sweep_app->parsed()) return sweep.run(out, err);
    if (plot_app->parsed()) return plot.run(out);
  } catch (const UsageError& e) {
    err << "pde-ident: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "pde-ident: " << e.what() << "\n";
    return kExitFailure;
  }
  err << app.help();
  return kExitUsage;
}

} // namespace pdeid::cli
