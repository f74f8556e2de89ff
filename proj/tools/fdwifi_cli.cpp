// Command-line front end: scenario runs, sweeps and model reports.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fdwifi/commands.hpp"
#include "fdwifi/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Full-duplex 802.11 MAC simulator and self-interference model"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 0;
  int threads = 0;

  struct Entry {
    fdwifi::Command cmd;
    const char* help;
  };
  const Entry entries[] = {
      {fdwifi::Command::Run, "run one scenario"},
      {fdwifi::Command::SweepCancellation, "goodput against cancellation and rate"},
      {fdwifi::Command::SweepPacketSize, "goodput for uplink sizes 40, 500, 1000, 1500 B"},
      {fdwifi::Command::SweepNodes, "goodput for 1, 2, 4 and 8 stations"},
      {fdwifi::Command::Theory, "closed-form normalized goodputs"},
      {fdwifi::Command::Rates, "ergodic rate of full and half duplex against SNR"},
      {fdwifi::Command::CancelCdf, "distribution of per-stage and total cancellation"},
  };
  std::vector<std::pair<CLI::App*, fdwifi::Command>> subs;
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(std::string(fdwifi::command_name(e.cmd)), e.help);
    sub->add_option("--config", config_path, "key = value scenario file");
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--seed", seed, "override sim.seed");
    sub->add_option("--format", format, "csv or text")->check(CLI::IsMember({"csv", "text"}));
    sub->add_option("--threads", threads, "worker threads for sweeps (0: all cores)");
    subs.emplace_back(sub, e.cmd);
  }

  CLI11_PARSE(app, argc, argv);

  fdwifi::ScenarioConfig cfg;
  try {
    if (!config_path.empty()) cfg = fdwifi::load_scenario(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  for (const auto& [sub, cmd] : subs) {
    if (!sub->parsed()) continue;
    if (sub->count("--seed")) cfg.seed = seed;
    fdwifi::CommandOptions opt;
    opt.format = format == "text" ? fdwifi::Format::Text : fdwifi::Format::Csv;
    opt.out_path = out_path;
    opt.threads = threads;
    return fdwifi::run_command(cmd, cfg, opt, std::cout, std::cerr);
  }
  return 1;
}
