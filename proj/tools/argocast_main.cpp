#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "argocast/config.hpp"
#include "argocast/errors.hpp"
#include "argocast/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

argocast::config::RunConfig load_or_die(const std::string& path) {
  return argocast::config::load_config(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"argocast: search-signal hospitalization forecasting"};
  app.require_subcommand(1);

  std::string config_path;
  int jobs = 0;
  std::string cv_mode;
  bool fresh = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "path to the JSON config file")->required();
  };

  CLI::App* validate = app.add_subcommand("validate", "check a config file and its inputs");
  add_common(validate);
  CLI::App* prepare = app.add_subcommand("prepare", "select query terms and optimal lags");
  add_common(prepare);
  CLI::App* backtest = app.add_subcommand("backtest", "run the rolling weekly backtest");
  add_common(backtest);
  backtest->add_option("--jobs", jobs, "worker threads for the fit grid (default: hardware)");
  backtest->add_option("--cv", cv_mode, "cross-validation folds: blocked | random");
  backtest->add_flag("--fresh", fresh, "ignore any existing checkpoint");
  CLI::App* report = app.add_subcommand("report", "score forecasts and render tables/charts");
  add_common(report);

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = load_or_die(config_path);
    if (validate->parsed()) {
      return argocast::pipeline::cmd_validate(cfg) == 0 ? kExitOk : kExitValidation;
    }
    const auto violations = argocast::config::validate_config(cfg);
    if (!violations.empty()) {
      for (const auto& v : violations) std::fprintf(stderr, "violation: %s\n", v.c_str());
      return kExitValidation;
    }
    if (prepare->parsed()) {
      argocast::pipeline::cmd_prepare(cfg);
    } else if (backtest->parsed()) {
      if (jobs > 0) {
        cfg.backtest.jobs = jobs;
      } else if (cfg.backtest.jobs <= 0) {
        cfg.backtest.jobs = static_cast<int>(std::thread::hardware_concurrency());
      }
      if (cv_mode == "random") {
        cfg.backtest.solver.cv_mode = argocast::solver::CvMode::Random;
      } else if (cv_mode == "blocked") {
        cfg.backtest.solver.cv_mode = argocast::solver::CvMode::Blocked;
      } else if (!cv_mode.empty()) {
        std::fprintf(stderr, "unknown --cv mode '%s'\n", cv_mode.c_str());
        return kExitValidation;
      }
      argocast::pipeline::cmd_backtest(cfg, fresh);
    } else if (report->parsed()) {
      argocast::pipeline::cmd_report(cfg);
    }
    return kExitOk;
  } catch (const argocast::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const argocast::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
}
