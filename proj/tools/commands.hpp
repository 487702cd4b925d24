#pragma once

// Subcommands of revolve-cli. Each returns a process exit code; run_cli
// parses argv and dispatches. Kept in a header so tests can drive it.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "revolve/revolve.hpp"
#include "revolve/wave/demo.hpp"

namespace revolve::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInvalid = 3;
inline constexpr int kExitNumerical = 4;
inline constexpr int kExitInternal = 1;

enum class Format { Text, Json, Csv };

inline const std::map<std::string, Format> kFormats = {
    {"text", Format::Text}, {"json", Format::Json}, {"csv", Format::Csv}};

// Taylor acceptance bands for the demo report.
inline constexpr double kOrder0Lo = 0.9, kOrder0Hi = 1.1;
inline constexpr double kOrder1Lo = 1.75, kOrder1Hi = 2.25;

struct ScheduleArgs {
  step_t steps = 0;
  step_t snaps = 0;
  Format format = Format::Text;
};

struct CostArgs {
  step_t steps = 0;
  std::optional<step_t> snaps;
  std::optional<step_t> max_snaps;
  Format format = Format::Text;
};

struct AdjustArgs {
  step_t steps = 0;
  Format format = Format::Text;
};

struct ValidateArgs {
  std::string file;
  step_t steps = 0;
  step_t snaps = 0;
};

struct DemoArgs {
  std::size_t nx = 201;
  step_t nt = 500;
  std::optional<step_t> snaps;
  bool full_storage = false;
  bool online = false;
  std::string report;
  std::string trace;
};

/// Maps library exceptions to exit codes.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const OverflowError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInternal;
  }
}

inline std::string csv_check(const Action& a) {
  return a.check ? std::to_string(*a.check) : std::string();
}

inline nlohmann::json summary_json(const ScheduleReport& r) {
  return {{"actions", r.actions.size()},    {"advances", r.advance_count},
          {"takeshots", r.takeshot_count},  {"restores", r.restore_count},
          {"adjointSteps", r.adjoint_count}, {"peakSlotsUsed", r.peak_slots_used}};
}

/// text: compact sequence then a summary line. json and csv: the actions on
/// stdout, the summary on stderr so the stream stays machine-readable.
inline int cmd_schedule(const ScheduleArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScheduleReport r = generate_schedule(args.steps, args.snaps);
    switch (args.format) {
      case Format::Text:
        out << compact(r.actions) << '\n';
        out << "actions=" << r.actions.size() << " advances=" << r.advance_count
            << " takeshots=" << r.takeshot_count << " restores=" << r.restore_count
            << " adjoint_steps=" << r.adjoint_count << " peak_slots=" << r.peak_slots_used
            << '\n';
        break;
      case Format::Json:
        write_jsonl(out, r.actions);
        err << summary_json(r).dump() << '\n';
        break;
      case Format::Csv:
        out << "kind,oldCapo,capo,check\n";
        for (const auto& a : r.actions) {
          out << to_string(a.kind) << ',' << a.old_capo << ',' << a.capo << ',' << csv_check(a)
              << '\n';
        }
        err << summary_json(r).dump() << '\n';
        break;
    }
    return kExitOk;
  });
}

inline double recompute_factor(step_t advances, step_t steps) {
  return static_cast<double>(advances) / static_cast<double>(steps);
}

inline int cmd_cost(const CostArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.snaps.has_value() == args.max_snaps.has_value()) {
      throw ConfigError("cost: give exactly one of --snaps and --max-snaps");
    }
    if (args.snaps) {
      const step_t adv = min_advances(args.steps, *args.snaps);
      const double factor = recompute_factor(adv, args.steps);
      if (args.format == Format::Json) {
        out << nlohmann::json{{"steps", args.steps},
                              {"snaps", *args.snaps},
                              {"advances", adv},
                              {"recomputeFactor", factor}}
                   .dump()
            << '\n';
      } else if (args.format == Format::Csv) {
        out << "snaps,advances,recompute_factor\n" << *args.snaps << ',' << adv << ','
            << factor << '\n';
      } else {
        out << adv << '\n';
      }
      return kExitOk;
    }
    const step_t max_snaps = *args.max_snaps;
    detail::require_positive(args.steps, max_snaps, "cost");
    if (args.format != Format::Json) {
      out << "snaps,advances,recompute_factor\n";
    }
    for (step_t c = 1; c <= max_snaps; ++c) {
      const step_t adv = min_advances(args.steps, c);
      const double factor = recompute_factor(adv, args.steps);
      if (args.format == Format::Json) {
        out << nlohmann::json{{"snaps", c}, {"advances", adv}, {"recomputeFactor", factor}}.dump()
            << '\n';
      } else {
        out << c << ',' << adv << ',' << factor << '\n';
      }
    }
    return kExitOk;
  });
}

inline int cmd_adjust(const AdjustArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const step_t snaps = adjust(args.steps);
    const step_t adv = min_advances(args.steps, snaps);
    const step_t objective = detail::checked_mul(snaps, adv, "adjust objective");
    if (args.format == Format::Json) {
      out << nlohmann::json{{"steps", args.steps},
                            {"snaps", snaps},
                            {"advances", adv},
                            {"objective", objective}}
                 .dump()
          << '\n';
    } else if (args.format == Format::Csv) {
      out << "steps,snaps,advances,objective\n"
          << args.steps << ',' << snaps << ',' << adv << ',' << objective << '\n';
    } else {
      out << "snaps=" << snaps << " advances=" << adv << " objective=" << objective << '\n';
    }
    return kExitOk;
  });
}

inline int cmd_validate(const ValidateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    detail::require_positive(args.steps, args.snaps, "validate");
    std::ifstream in(args.file);
    if (!in) {
      throw ConfigError("cannot open " + args.file);
    }
    std::vector<Action> actions;
    try {
      actions = read_jsonl(in);
    } catch (const ParseError& e) {
      out << "FAIL: " << e.what() << '\n';
      return kExitInvalid;
    }
    const ValidationReport r = validate_schedule(actions, args.steps, args.snaps);
    if (!r.ok()) {
      out << "FAIL at action " << r.violation->index << ": " << r.violation->message << '\n';
      return kExitInvalid;
    }
    out << "PASS actions=" << actions.size() << " advances=" << r.advance_count
        << " adjoint_steps=" << r.adjoint_count << " peak_live_slots=" << r.peak_live_slots
        << '\n';
    return kExitOk;
  });
}

inline bool within(const std::optional<double>& v, double lo, double hi) {
  return v && *v >= lo && *v <= hi;
}

inline int cmd_demo(const DemoArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.full_storage && args.online) {
      throw ConfigError("demo: --full-storage and --online are mutually exclusive");
    }
    if (args.full_storage && args.snaps) {
      throw ConfigError("demo: --snaps has no meaning with --full-storage");
    }
    wave::DemoConfig cfg;
    cfg.nx = args.nx;
    cfg.nt = args.nt;
    std::unique_ptr<std::ofstream> trace;
    if (!args.trace.empty()) {
      if (args.full_storage) {
        throw ConfigError("demo: --trace needs a checkpointed run");
      }
      trace = std::make_unique<std::ofstream>(args.trace);
      if (!*trace) {
        throw ConfigError("cannot write " + args.trace);
      }
    }
    const auto mode = args.full_storage ? wave::DemoMode::FullStorage
                      : args.online     ? wave::DemoMode::Online
                                        : wave::DemoMode::Checkpointed;
    wave::DemoOutcome res = wave::run_demo(cfg, mode, args.snaps, trace.get());
    const bool pass = within(res.taylor.order0, kOrder0Lo, kOrder0Hi) &&
                      within(res.taylor.order1, kOrder1Lo, kOrder1Hi);
    res.report["taylor"]["withinTolerance"] = pass;
    if (!args.report.empty()) {
      std::ofstream file(args.report);
      if (!file) {
        throw ConfigError("cannot write " + args.report);
      }
      file << res.report.dump(2) << '\n';
    }
    out << res.report.dump(2) << '\n';
    return kExitOk;
  });
}

/// Parses argv and runs one subcommand.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Binomial checkpointing schedules, cost tables and the 1D wave adjoint demo",
               "revolve-cli"};
  app.require_subcommand(1);

  ScheduleArgs sch;
  auto* s = app.add_subcommand("schedule", "Print the optimal action sequence");
  s->add_option("--steps", sch.steps, "Number of time steps")->required();
  s->add_option("--snaps", sch.snaps, "Number of checkpoint slots")->required();
  s->add_option("--format", sch.format, "Output format: text, json (JSON lines) or csv")
      ->transform(CLI::CheckedTransformer(kFormats))
      ->capture_default_str();

  CostArgs cost;
  auto* c = app.add_subcommand("cost", "Minimal number of advance steps");
  c->add_option("--steps", cost.steps, "Number of time steps")->required();
  auto* c_snaps = c->add_option("--snaps", cost.snaps, "Single slot count");
  auto* c_max = c->add_option("--max-snaps", cost.max_snaps, "Table for slot counts 1..C");
  c_snaps->excludes(c_max);
  c->add_option("--format", cost.format, "Output format: text, json or csv")
      ->transform(CLI::CheckedTransformer(kFormats))
      ->capture_default_str();

  AdjustArgs adj;
  auto* a = app.add_subcommand("adjust", "Slot count minimising slots x advances");
  a->add_option("--steps", adj.steps, "Number of time steps")->required();
  a->add_option("--format", adj.format, "Output format: text, json or csv")
      ->transform(CLI::CheckedTransformer(kFormats))
      ->capture_default_str();

  ValidateArgs val;
  auto* v = app.add_subcommand("validate", "Check a JSON-lines schedule");
  v->add_option("--file", val.file, "Schedule file, one JSON action per line")->required();
  v->add_option("--steps", val.steps, "Number of time steps")->required();
  v->add_option("--snaps", val.snaps, "Number of checkpoint slots")->required();

  DemoArgs demo;
  auto* d = app.add_subcommand("demo", "Gradient of the two-layer 1D wave problem");
  d->add_option("--nx", demo.nx, "Grid points")->capture_default_str();
  d->add_option("--nt", demo.nt, "Time steps")->capture_default_str();
  d->add_option("--snaps", demo.snaps, "Checkpoint slots (default: adjust(nt))");
  d->add_flag("--full-storage", demo.full_storage, "Keep every forward state instead");
  d->add_flag("--online", demo.online, "Withhold nt from the scheduler");
  d->add_option("--report", demo.report, "Also write the JSON report to this file");
  d->add_option("--trace", demo.trace, "Write executed actions as JSON lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (s->parsed()) return cmd_schedule(sch, out, err);
  if (c->parsed()) return cmd_cost(cost, out, err);
  if (a->parsed()) return cmd_adjust(adj, out, err);
  if (v->parsed()) return cmd_validate(val, out, err);
  return cmd_demo(demo, out, err);
}

}  // namespace revolve::cli
