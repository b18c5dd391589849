#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "logsweep/logsweep.hpp"

namespace {

using logsweep::ExperimentConfig;

struct RunOptions {
  std::string preset;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string grid;
  std::optional<std::size_t> replicates;
  std::string out;
  unsigned threads = 1;
};

std::vector<std::int64_t> parse_grid(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const double v = logsweep::parse_double(item);
    if (v != std::floor(v) || v < 2) throw logsweep::PreconditionError("bad grid value '" + item + "'");
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

std::string default_out() {
  const char* env = std::getenv("LOGSWEEP_OUT");
  return env && *env ? env : "logsweep-out";
}

void print_verdicts(const logsweep::ResultTable& t, const std::vector<logsweep::Verdict>& vs) {
  for (const auto& w : t.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& r : t.rows) {
    std::cout << t.experiment << " N=" << r.n << ' ' << r.statistic << " median=" << logsweep::format_double(r.summary.median)
              << " se=" << logsweep::format_double(r.summary.se) << '\n';
  }
  for (const auto& v : vs) {
    std::cout << (v.pass ? "PASS " : "FAIL ") << t.experiment << ' ' << v.statistic
              << " final_gap=" << logsweep::format_double(v.final_gap)
              << " threshold=" << logsweep::format_double(v.threshold);
    if (!v.reason.empty()) std::cout << " (" << v.reason << ')';
    std::cout << '\n';
  }
}

int run(const std::string& command, const RunOptions& o) {
  std::vector<ExperimentConfig> configs;
  if (!o.config.empty()) {
    configs.push_back(logsweep::load_config(o.config));
    if (configs.back().command.empty()) configs.back().command = command;
  } else if (o.preset == "all") {
    for (const auto& id : logsweep::preset_ids(command)) configs.push_back(logsweep::preset(id));
  } else if (!o.preset.empty()) {
    configs.push_back(logsweep::preset(o.preset));
  } else {
    throw logsweep::PreconditionError("give --preset or --config");
  }
  bool all_pass = true;
  for (auto& c : configs) {
    if (c.command != command) {
      throw logsweep::PreconditionError("experiment '" + c.experiment + "' belongs to '" + c.command + "'");
    }
    if (o.seed) c.seed = *o.seed;
    if (!o.grid.empty()) c.grid = parse_grid(o.grid);
    if (o.replicates) c.replicates = *o.replicates;
    c.out = o.out.empty() ? (o.config.empty() ? default_out() : c.out) : o.out;
    const auto table = logsweep::run_experiment(c, o.threads);
    std::vector<logsweep::Verdict> verdicts;
    if (c.grid.size() >= 3 && c.replicates > 0) {
      verdicts = logsweep::convergence_report(table, c.checks);
    } else if (!c.checks.empty()) {
      std::cerr << "warning: " << c.experiment << ": fewer than 3 grid points or no replicates, no verdicts\n";
      all_pass = false;
    }
    logsweep::persist(c, table, verdicts);
    print_verdicts(table, verdicts);
    for (const auto& v : verdicts) all_pass = all_pass && v.pass;
  }
  return all_pass ? 0 : 1;
}

int report(const std::vector<std::string>& inputs, const std::string& out) {
  std::vector<std::filesystem::path> files;
  if (inputs.empty()) {
    const std::string dir = out.empty() ? default_out() : out;
    if (!std::filesystem::is_directory(dir)) throw logsweep::Error("no output directory '" + dir + "'");
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
      if (e.path().extension() == ".json") files.push_back(e.path());
    }
  } else {
    for (const auto& f : inputs) files.emplace_back(f);
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw logsweep::Error("no summaries to report on");
  bool all_pass = true;
  for (const auto& f : files) {
    std::ifstream in(f);
    nlohmann::json j;
    in >> j;
    const auto& verdicts = j.at("verdicts");
    if (verdicts.empty()) all_pass = false;
    for (const auto& v : verdicts) {
      const bool pass = v.at("pass").get<bool>();
      all_pass = all_pass && pass;
      std::cout << (pass ? "PASS " : "FAIL ") << j.at("experiment").get<std::string>() << ' '
                << v.at("statistic").get<std::string>() << " [" << j.at("statement").get<std::string>() << "]";
      const auto reason = v.at("reason").get<std::string>();
      if (!reason.empty()) std::cout << " (" << reason << ')';
      std::cout << '\n';
    }
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Log-scale selective sweep experiments"};
  app.require_subcommand(1);
  RunOptions opts;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"sweep", "Moran sweep shape and fixation time"},
      {"phases", "branching-process phase statistics"},
      {"m1", "M1 metric checks and embedded walks"},
      {"walks", "discrete walk fluctuation statistics"},
      {"clonal", "clonal interference against the trajectory system"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--preset", opts.preset, "preset id, or 'all'");
    sub->add_option("--config", opts.config, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--seed", opts.seed, "master seed");
    sub->add_option("--grid", opts.grid, "comma-separated N values");
    sub->add_option("--replicates", opts.replicates, "replicates per grid point");
    sub->add_option("--out", opts.out, "output directory (default $LOGSWEEP_OUT or logsweep-out)");
    sub->add_option("--threads", opts.threads, "worker threads (0: all cores)");
    subs.push_back(sub);
  }
  std::vector<std::string> inputs;
  std::string report_out;
  auto* rep = app.add_subcommand("report", "verdicts of saved summaries");
  rep->add_option("files", inputs, "summary JSON files");
  rep->add_option("--out", report_out, "directory to scan when no files are given");
  std::string preset_dir;
  auto* pre = app.add_subcommand("presets", "write every preset config as JSON");
  pre->add_option("dir", preset_dir, "target directory")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) return run(commands[i].first, opts);
    }
    if (rep->parsed()) return report(inputs, report_out);
    if (pre->parsed()) {
      std::filesystem::create_directories(preset_dir);
      for (const auto& id : logsweep::preset_ids()) {
        std::ofstream out(std::filesystem::path(preset_dir) / (id + ".json"));
        out << logsweep::to_json(logsweep::preset(id)).dump(2) << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
