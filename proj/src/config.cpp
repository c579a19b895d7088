#include "argocast/config.hpp"

#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "argocast/errors.hpp"

namespace argocast::config {

namespace {

using nlohmann::json;

SeriesLayout layout_from_string(const std::string& s) {
  if (s == "wide") return SeriesLayout::WideByRegion;
  if (s == "long") return SeriesLayout::LongFormat;
  throw ParseError("layout must be 'wide' or 'long', got '" + s + "'");
}

std::string layout_to_string(SeriesLayout l) {
  return l == SeriesLayout::WideByRegion ? "wide" : "long";
}

// Accepts either "path.csv" or {"path": "...", "layout": "wide"|"long"}.
DataInput parse_input(const json& j, const std::filesystem::path& base) {
  DataInput in;
  if (j.is_string()) {
    in.path = j.get<std::string>();
  } else {
    in.path = j.at("path").get<std::string>();
    if (j.contains("layout")) in.layout = layout_from_string(j.at("layout").get<std::string>());
  }
  if (in.path.is_relative()) in.path = base / in.path;
  return in;
}

Date parse_date(const json& j, const char* what) {
  try {
    return Date::parse(j.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ParseError("config parse error in " + path.string() + ": " + e.what());
  }

  RunConfig cfg;
  cfg.config_path = path;
  const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : ".";

  try {
    const json& data = j.at("data");
    cfg.hospitalizations = parse_input(data.at("hospitalizations"), base);
    cfg.cases = parse_input(data.at("cases"), base);
    cfg.vaccination = parse_input(data.at("vaccination"), base);
    cfg.queries_path = data.at("queries").get<std::string>();
    if (cfg.queries_path.is_relative()) cfg.queries_path = base / cfg.queries_path;
    cfg.adjacency_path = data.at("adjacency").get<std::string>();
    if (cfg.adjacency_path.is_relative()) cfg.adjacency_path = base / cfg.adjacency_path;
    if (data.contains("external_forecasts")) {
      std::filesystem::path p = data.at("external_forecasts").get<std::string>();
      if (p.is_relative()) p = base / p;
      cfg.external_forecasts = p;
    }

    if (j.contains("selection")) {
      const json& s = j.at("selection");
      if (s.contains("window_start")) cfg.selection.window_start = parse_date(s.at("window_start"), "selection.window_start");
      if (s.contains("window_end")) cfg.selection.window_end = parse_date(s.at("window_end"), "selection.window_end");
      if (s.contains("threshold")) cfg.selection.threshold = s.at("threshold").get<double>();
      if (s.contains("k_max")) cfg.selection.k_max = s.at("k_max").get<int>();
      if (s.contains("lag_min")) cfg.selection.lag_min = s.at("lag_min").get<int>();
      if (s.contains("lag_max")) cfg.selection.lag_max = s.at("lag_max").get<int>();
      if (s.contains("iqr_window")) cfg.selection.iqr_window = s.at("iqr_window").get<int>();
      if (s.contains("iqr_k_sd")) cfg.selection.iqr_k_sd = s.at("iqr_k_sd").get<double>();
      if (s.contains("ma_window")) cfg.selection.ma_window = s.at("ma_window").get<int>();
    }

    auto& bt = cfg.backtest;
    bt.start = Date::from_ymd(2021, 1, 4);
    bt.end = Date::from_ymd(2021, 12, 27);
    if (j.contains("backtest")) {
      const json& b = j.at("backtest");
      if (b.contains("start")) bt.start = parse_date(b.at("start"), "backtest.start");
      if (b.contains("end")) bt.end = parse_date(b.at("end"), "backtest.end");
      if (b.contains("window")) bt.window = b.at("window").get<int>();
      if (b.contains("omega")) bt.omega = b.at("omega").get<double>();
      if (b.contains("seed")) bt.seed = b.at("seed").get<std::uint64_t>();
      if (b.contains("jobs")) bt.jobs = b.at("jobs").get<int>();
      if (b.contains("regions")) {
        for (const auto& r : b.at("regions")) {
          bt.regions.push_back(RegionId::parse(r.get<std::string>()));
        }
      }
      if (b.contains("methods")) {
        bt.methods.clear();
        for (const auto& m : b.at("methods")) {
          bt.methods.push_back(backtest::method_from_string(m.get<std::string>()));
        }
      }
      if (b.contains("write_daily")) cfg.write_daily = b.at("write_daily").get<bool>();
    }

    if (j.contains("solver")) {
      const json& s = j.at("solver");
      auto& sv = bt.solver;
      if (s.contains("omega")) bt.omega = s.at("omega").get<double>();
      if (s.contains("tol")) sv.tol = s.at("tol").get<double>();
      if (s.contains("max_iter")) sv.max_iter = s.at("max_iter").get<int>();
      if (s.contains("grid_size")) sv.grid_size = s.at("grid_size").get<int>();
      if (s.contains("grid_min_ratio")) sv.grid_min_ratio = s.at("grid_min_ratio").get<double>();
      if (s.contains("folds")) sv.folds = s.at("folds").get<int>();
      if (s.contains("seed")) bt.seed = s.at("seed").get<std::uint64_t>();
      if (s.contains("cv_mode")) {
        const std::string mode = s.at("cv_mode").get<std::string>();
        if (mode == "blocked") {
          sv.cv_mode = solver::CvMode::Blocked;
        } else if (mode == "random") {
          sv.cv_mode = solver::CvMode::Random;
        } else {
          throw ParseError("solver.cv_mode must be 'blocked' or 'random'");
        }
      }
      if (s.contains("lambda_policy")) {
        const std::string policy = s.at("lambda_policy").get<std::string>();
        if (policy == "per_fit") {
          sv.lambda_policy = backtest::LambdaPolicy::PerFit;
        } else if (policy == "first_fit") {
          sv.lambda_policy = backtest::LambdaPolicy::FirstFit;
        } else {
          throw ParseError("solver.lambda_policy must be 'per_fit' or 'first_fit'");
        }
      }
    }

    if (j.contains("dump_fits")) cfg.dump_fits = j.at("dump_fits").get<bool>();
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError("config error in " + path.string() + ": " + e.what());
  }

  if (const char* env = std::getenv("ARGOCAST_OUTPUT_DIR"); env && *env) {
    cfg.output_dir = env;
  } else if (cfg.output_dir.is_relative()) {
    cfg.output_dir = base / cfg.output_dir;
  }
  return cfg;
}

std::vector<std::string> validate_config(const RunConfig& cfg) {
  std::vector<std::string> violations;
  auto need_file = [&](const std::filesystem::path& p, const char* what) {
    if (p.empty() || !std::filesystem::exists(p)) {
      violations.push_back(std::string(what) + " file not found: " + p.string());
    }
  };
  need_file(cfg.hospitalizations.path, "hospitalizations");
  need_file(cfg.cases.path, "cases");
  need_file(cfg.vaccination.path, "vaccination");
  need_file(cfg.queries_path, "queries");
  need_file(cfg.adjacency_path, "adjacency");
  if (cfg.external_forecasts) need_file(*cfg.external_forecasts, "external forecasts");

  if (cfg.selection.window_end < cfg.selection.window_start) {
    violations.push_back("selection window ends before it starts");
  }
  if (cfg.backtest.end < cfg.backtest.start) {
    violations.push_back("backtest range ends before it starts");
  }
  if (cfg.selection.window_end >= cfg.backtest.start) {
    violations.push_back("selection/backtest overlap: selection window must end before " +
                         cfg.backtest.start.to_iso());
  }
  if (cfg.backtest.window < 2) violations.push_back("training window must be >= 2");
  if (cfg.backtest.omega <= 0.0 || cfg.backtest.omega > 1.0) {
    violations.push_back("omega must be in (0, 1]");
  }
  if (cfg.backtest.solver.folds < 2) violations.push_back("folds must be >= 2");
  if (cfg.backtest.solver.grid_size < 1) violations.push_back("grid_size must be >= 1");
  if (cfg.selection.lag_min < 0 || cfg.selection.lag_max < cfg.selection.lag_min) {
    violations.push_back("lag range is invalid");
  }
  if (cfg.selection.iqr_window < 2) violations.push_back("iqr_window must be >= 2");
  if (cfg.selection.ma_window < 1) violations.push_back("ma_window must be >= 1");
  return violations;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  json j;
  j["data"]["hospitalizations"] = {{"path", cfg.hospitalizations.path.string()},
                                   {"layout", layout_to_string(cfg.hospitalizations.layout)}};
  j["data"]["cases"] = {{"path", cfg.cases.path.string()},
                        {"layout", layout_to_string(cfg.cases.layout)}};
  j["data"]["vaccination"] = {{"path", cfg.vaccination.path.string()},
                              {"layout", layout_to_string(cfg.vaccination.layout)}};
  j["data"]["queries"] = cfg.queries_path.string();
  j["data"]["adjacency"] = cfg.adjacency_path.string();
  if (cfg.external_forecasts) j["data"]["external_forecasts"] = cfg.external_forecasts->string();

  j["selection"] = {{"window_start", cfg.selection.window_start.to_iso()},
                    {"window_end", cfg.selection.window_end.to_iso()},
                    {"threshold", cfg.selection.threshold},
                    {"k_max", cfg.selection.k_max},
                    {"lag_min", cfg.selection.lag_min},
                    {"lag_max", cfg.selection.lag_max},
                    {"iqr_window", cfg.selection.iqr_window},
                    {"iqr_k_sd", cfg.selection.iqr_k_sd},
                    {"ma_window", cfg.selection.ma_window}};

  json regions = json::array();
  for (const auto& r : cfg.backtest.regions) regions.push_back(r.code());
  json methods = json::array();
  for (auto m : cfg.backtest.methods) methods.push_back(backtest::to_string(m));
  j["backtest"] = {{"start", cfg.backtest.start.to_iso()},
                   {"end", cfg.backtest.end.to_iso()},
                   {"window", cfg.backtest.window},
                   {"omega", cfg.backtest.omega},
                   {"seed", cfg.backtest.seed},
                   {"jobs", cfg.backtest.jobs},
                   {"regions", regions},
                   {"methods", methods},
                   {"write_daily", cfg.write_daily}};

  const auto& sv = cfg.backtest.solver;
  j["solver"] = {{"tol", sv.tol},
                 {"max_iter", sv.max_iter},
                 {"grid_size", sv.grid_size},
                 {"grid_min_ratio", sv.grid_min_ratio},
                 {"folds", sv.folds},
                 {"cv_mode", sv.cv_mode == solver::CvMode::Blocked ? "blocked" : "random"},
                 {"lambda_policy",
                  sv.lambda_policy == backtest::LambdaPolicy::PerFit ? "per_fit" : "first_fit"}};
  j["dump_fits"] = cfg.dump_fits;
  j["output_dir"] = cfg.output_dir.string();
  return j;
}

}  // namespace argocast::config
