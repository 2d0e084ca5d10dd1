#include "cli.hpp"

#include <cstdlib>
#include <iomanip>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>

#include "fast/error.hpp"

namespace fast::cli {

namespace {

void add_solver_flags(CLI::App* sub, Command& cmd) {
  sub->add_option("--tol", cmd.solver.tol, "bisection tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--max-iters", cmd.solver.max_iters, "iteration cap per bisection loop")
      ->check(CLI::Range(1, 1000000));
}

void add_format_flag(CLI::App* sub, std::string& format) {
  sub->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

Command parse_args(const std::vector<std::string>& argv) {
  Command cmd;
  std::string format = "csv";
  std::string axis;
  std::vector<std::string> methods;
  std::string out;

  CLI::App app{"Energy-optimal transmission strategies for width-scalable semantic models", "fast"};
  app.require_subcommand(1);

  auto* fit = app.add_subcommand("fit", "fit the fidelity curve to measured (pi, fidelity) samples");
  fit->add_option("--samples", cmd.samples, "samples file with a 'pi,fidelity' header")->required();
  fit->add_option("--out", out, "curve document to write")->required();
  fit->add_option("--pi-min", cmd.pi_min, "lower end of the curve's validity window")->check(CLI::Range(0.0, 1.0));
  fit->add_option("--rms-ceiling", cmd.rms_ceiling, "reject fits with a larger residual RMS")
      ->check(CLI::PositiveNumber);

  auto* solve = app.add_subcommand("solve", "optimal strategy for one scenario");
  solve->add_option("--scenario", cmd.scenario, "scenario file")->required();
  solve->add_option("--out", out, "result file (one row)");
  add_format_flag(solve, format);
  add_solver_flags(solve, cmd);

  auto* sweep = app.add_subcommand("sweep", "sweep one scenario parameter across methods");
  sweep->add_option("--scenario", cmd.scenario, "scenario file")->required();
  sweep->add_option("--axis", axis, "distance, eps_scale, T_max or phi_min")
      ->required()
      ->check(CLI::IsMember({"distance", "eps_scale", "T_max", "phi_min"}));
  sweep->add_option("--values", cmd.values, "comma-separated axis values")->required()->delimiter(',');
  sweep->add_option("--methods", methods, "comma-separated methods (fast, raw, prune, quant, jpeg)")
      ->delimiter(',')
      ->check(CLI::IsMember({"fast", "raw", "prune", "quant", "jpeg"}));
  sweep->add_option("--out", out, "result table file")->required();
  add_format_flag(sweep, format);
  add_solver_flags(sweep, cmd);

  auto* compare = app.add_subcommand("compare", "FAST against the baselines at matched fidelity targets");
  compare->add_option("--scenario", cmd.scenario, "scenario file")->required();
  compare->add_option("--fidelities", cmd.fidelities, "comma-separated fidelity targets")->delimiter(',');
  compare->add_option("--out", out, "result table file")->required();
  add_format_flag(compare, format);
  add_solver_flags(compare, cmd);

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  if (!args.empty()) args.pop_back();  // program name
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help(), true);
  } catch (const CLI::CallForAllHelp&) {
    throw UsageError(app.help("", CLI::AppFormatMode::All), true);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (auto* sub : app.get_subcommands()) msg += "\n\n" + sub->help();
    throw UsageError(msg);
  }

  if (fit->parsed()) cmd.verb = Verb::fit;
  if (solve->parsed()) cmd.verb = Verb::solve;
  if (sweep->parsed()) cmd.verb = Verb::sweep;
  if (compare->parsed()) cmd.verb = Verb::compare;

  if (!out.empty()) cmd.out = out;
  cmd.format = parse_export_format(format);
  if (!axis.empty()) cmd.axis = parse_sweep_axis(axis);
  if (!methods.empty()) {
    cmd.methods.clear();
    for (const auto& m : methods) cmd.methods.push_back(parse_method(m));
  }
  if (cmd.verb == Verb::fit && !(cmd.pi_min > 0.0)) throw UsageError("--pi-min must be > 0");
  if (cmd.verb == Verb::compare && cmd.fidelities.empty()) throw UsageError("--fidelities needs at least one value");
  return cmd;
}

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err, const char* fast_log) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
  auto log = std::make_shared<spdlog::logger>("fast", sink);
  log->set_pattern("[%l] %v");
  const std::string level = fast_log ? fast_log : "info";
  if (level == "quiet") {
    log->set_level(spdlog::level::off);
  } else if (level == "debug") {
    log->set_level(spdlog::level::debug);
  } else {
    log->set_level(spdlog::level::info);
    if (level != "info") log->warn("FAST_LOG='{}' not recognised; using info", level);
  }
  return log;
}

namespace {

void print_summary(const ScenarioResult& r, std::ostream& out) {
  out << "method      " << r.method << '\n' << "status      " << to_string(r.status) << '\n';
  if (!r.detail.empty()) out << "detail      " << r.detail << '\n';
  if (!r.feasible()) return;
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::setprecision(6);
  if (r.pi) out << "pi          " << *r.pi << '\n';
  if (r.fidelity) out << "fidelity    " << *r.fidelity << '\n';
  if (r.strategy) {
    out << "f_e         " << r.strategy->f_e << " Hz\n"
        << "f_d         " << r.strategy->f_d << " Hz\n"
        << "P           " << r.strategy->P << " W\n";
  }
  if (r.cost) {
    const auto& c = *r.cost;
    out << "data        " << c.data_bits << " bits\n"
        << "T_cmp       " << c.T_cmp << " s\n"
        << "T_com       " << c.T_com << " s\n"
        << "T_tot       " << c.T_tot << " s\n"
        << "E_cmp       " << c.E_cmp << " J\n"
        << "E_com       " << c.E_com << " J\n"
        << "E_tot       " << c.E_tot << " J\n";
  }
  if (r.solve) {
    out << "lambda*     " << r.solve->lambda_star << '\n'
        << "iterations  " << r.solve->outer_iters << " outer, " << r.solve->total_inner_iters << " inner\n";
  }
  out.flags(flags);
  out.precision(prec);
}

int table_status(const ResultTable& table) {
  bool any_ok = false, any_infeasible = false;
  for (const auto& r : table) {
    any_ok = any_ok || r.status == Status::ok;
    any_infeasible = any_infeasible || r.status == Status::fidelity_infeasible || r.status == Status::latency_infeasible;
  }
  return (!any_ok && any_infeasible) ? ExitCode::infeasible : ExitCode::ok;
}

}  // namespace

int dispatch(const Command& cmd, std::ostream& out, spdlog::logger& log) {
  switch (cmd.verb) {
    case Verb::fit: {
      log.info("fitting fidelity curve to {}", cmd.samples.string());
      const auto samples = read_samples(cmd.samples);
      const auto fit = fit_curve(samples, ScalingFactor{cmd.pi_min}, FitOptions{cmd.rms_ceiling});
      write_curve(fit, *cmd.out);
      out << curve_to_json(fit).dump(2) << '\n';
      log.info("wrote curve ({} samples, rms {:.3g}) to {}", samples.size(), fit.rms, cmd.out->string());
      return ExitCode::ok;
    }
    case Verb::solve: {
      const Scenario s = load_scenario(cmd.scenario);
      log.debug("scenario {} loaded", cmd.scenario.string());
      const ScenarioResult r = run_fast(s, cmd.solver);
      print_summary(r, out);
      if (cmd.out) {
        export_results({r}, *cmd.out, cmd.format);
        log.info("wrote result to {}", cmd.out->string());
      }
      if (r.status == Status::fidelity_infeasible || r.status == Status::latency_infeasible) {
        return ExitCode::infeasible;
      }
      if (r.status == Status::error) return ExitCode::numeric;
      return ExitCode::ok;
    }
    case Verb::sweep: {
      const Scenario s = load_scenario(cmd.scenario);
      log.info("sweeping {} over {} values x {} methods", to_string(cmd.axis), cmd.values.size(), cmd.methods.size());
      const auto table = sweep(s, cmd.axis, cmd.values, cmd.methods, cmd.solver);
      export_results(table, *cmd.out, cmd.format);
      log.info("wrote {} rows to {}", table.size(), cmd.out->string());
      return table_status(table);
    }
    case Verb::compare: {
      const Scenario s = load_scenario(cmd.scenario);
      const auto table = compare(s, cmd.fidelities, cmd.solver);
      export_results(table, *cmd.out, cmd.format);
      log.info("wrote {} rows to {}", table.size(), cmd.out->string());
      return table_status(table);
    }
  }
  return ExitCode::usage;
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  auto log = make_logger(err, std::getenv("FAST_LOG"));
  Command cmd;
  try {
    cmd = parse_args(argv);
  } catch (const UsageError& e) {
    if (e.help()) {
      out << e.what();
      return ExitCode::ok;
    }
    err << "usage error: " << e.what() << '\n';
    return ExitCode::usage;
  } catch (const Error& e) {
    err << "usage error: " << e.what() << '\n';
    return ExitCode::usage;
  }
  try {
    return dispatch(cmd, out, *log);
  } catch (const Error& e) {
    log->error("{}", e.what());
    switch (e.kind()) {
      case ErrorKind::config:
        return ExitCode::config;
      case ErrorKind::infeasible:
        return ExitCode::infeasible;
      case ErrorKind::numeric:
        return ExitCode::numeric;
      case ErrorKind::io:
        return ExitCode::io;
    }
  }
  return ExitCode::numeric;
}

}  // namespace fast::cli
