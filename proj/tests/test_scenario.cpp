#include "doctest.h"

#include <clocale>
#include <set>
#include <sstream>

#include "fdwifi/commands.hpp"
#include "fdwifi/report.hpp"
#include "fdwifi/scenario.hpp"

using namespace fdwifi;

namespace {

std::string error_key(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults describe the single full-duplex pair") {
  const auto c = parse_scenario("");
  CHECK(c.n_fd == 1);
  CHECK(c.n_hd == 0);
  CHECK(c.variant() == "fd");
  CHECK(c.cancellation_db == 85.0);
  CHECK(c.sim_time_s == 10.0);
  const auto ln = link_numbers(c);
  CHECK(ln.path_loss_db == doctest::Approx(62.97).epsilon(1e-3));
  CHECK(ln.hd_sinr_db == doctest::Approx(36.03).epsilon(1e-3));
}

TEST_CASE("parsing keys, aliases and comments") {
  const auto c = parse_scenario(
      "# mixed cell\n"
      "nodes.fd = 2\n"
      "nodes.hd = 2   # trailing comment\n"
      "nodes.hd_kind = modified\n"
      "cancellation = inf\n"
      "seed = 18446744073709551615\n"
      "phy.rssi_override_dbm = -60.5\n"
      "mac.politeness = polite\n");
  CHECK(c.n_fd == 2);
  CHECK(c.hd_kind == HdKind::Modified);
  CHECK(c.cancellation_db == std::numeric_limits<double>::infinity());
  CHECK(c.seed == 18446744073709551615ull);
  REQUIRE(c.rssi_override_dbm);
  CHECK(*c.rssi_override_dbm == -60.5);
  CHECK(c.variant() == "mixed-modified-polite");
}

TEST_CASE("config text round trips") {
  ScenarioConfig c;
  c.n_fd = 3;
  c.n_hd = 2;
  c.uplink_bytes = 40;
  c.cancellation_db = 72.25;
  c.rssi_override_dbm = -55.0;
  c.access = Access::Scheduled;
  c.cancellation_mode = CancellationMode::Sampled;
  c.seed = 123456789012345ull;
  c.freq_hz = 5.18e9;
  const auto back = parse_scenario(config_text(c));
  CHECK(config_text(back) == config_text(c));
  CHECK(back.variant() == "mixed-legacy-sched");
}

TEST_CASE("errors name the offending key") {
  CHECK(error_key("nodes.fdd = 1") == "nodes.fdd");
  CHECK(error_key("nodes.fd = two") == "nodes.fd");
  CHECK(error_key("nodes.fd = -1") == "nodes.fd");
  CHECK(error_key("phy.rate_mbps = 11") == "phy.rate_mbps");
  CHECK(error_key("traffic.uplink_bytes = 1501") == "traffic.uplink_bytes");
  CHECK(error_key("mac.rts_cts = maybe") == "mac.rts_cts");
  CHECK(error_key("phy.distance_m = nan") == "phy.distance_m");
  CHECK(error_key("sim.time_s = 1,5") == "sim.time_s");
  CHECK(error_key("just words") == "line 1");
  // cross-field: full duplex needs the handshake
  CHECK(error_key("mac.rts_cts = false") == "mac.rts_cts");
  CHECK(error_key("rates.snr_min_db = 30\nrates.snr_max_db = 10") == "rates.snr_max_db");
  CHECK(error_key("nodes.fd = 0") == "nodes.fd");
}

TEST_CASE("variants") {
  auto c = parse_scenario("nodes.fd = 0\nnodes.hd = 4\nmac.rts_cts = false");
  CHECK(c.variant() == "hd-basic");
  c.rts_cts = true;
  CHECK(c.variant() == "hd-rts");
}

TEST_CASE("engine setup follows the population") {
  auto c = parse_scenario("nodes.fd = 2\nnodes.hd = 1\nnodes.hd_kind = legacy");
  const auto s = engine_setup(c);
  REQUIRE(s.nodes.size() == 4);
  CHECK(s.nodes[0] == mac::NodeKind::AccessPoint);
  CHECK(s.nodes[1] == mac::NodeKind::FdStation);
  CHECK(s.nodes[3] == mac::NodeKind::HdLegacyStation);
  CHECK(s.ap_full_duplex);
  CHECK(s.link.fd_sinr_samples_db.empty());
  auto h = parse_scenario("nodes.fd = 0\nnodes.hd = 2");
  CHECK_FALSE(engine_setup(h).ap_full_duplex);
  auto sampled = parse_scenario("phy.cancellation_mode = sampled\nsi.samples = 50");
  CHECK(engine_setup(sampled).link.fd_sinr_samples_db.size() == 50);
}

TEST_CASE("CSV row layout") {
  RunResult r;
  r.config.id = "x";
  r.report.dl_fd_mbps = 12.74999;
  r.report.ul_fd_mbps = 12.75001;
  r.report.rts_collision_pct = 10.8;
  const auto out = emit_report(r, Format::Csv);
  std::istringstream in(out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == kRunCsvHeader);
  CHECK(row == "x,1,1,0,fd,25.5000,0.0000,12.7500,12.7500,0.0000,10.80,0.00");
  CHECK(fixed(1.0 / 3.0, 3) == "0.333");
  CHECK(fixed(-2.5, 1) == "-2.5");
}

TEST_CASE("formatting ignores the C locale") {
  const char* old = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = old ? old : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") || std::setlocale(LC_NUMERIC, "fr_FR.UTF-8")) {
    CHECK(fixed(3.25, 2) == "3.25");
    CHECK(parse_scenario("sim.time_s = 2.5").sim_time_s == 2.5);
  } else {
    MESSAGE("no comma-decimal locale installed; checked the C locale only");
    CHECK(fixed(3.25, 2) == "3.25");
  }
  std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST_CASE("sweep grids") {
  ScenarioConfig base;
  const auto nodes = nodes_grid(base);
  CHECK(nodes.size() == 12);
  std::set<std::uint64_t> seeds;
  for (const auto& c : nodes) seeds.insert(c.seed);
  CHECK(seeds.size() == nodes.size());
  CHECK(nodes[0].variant() == "fd");
  CHECK(nodes[1].variant() == "hd-rts");
  CHECK(nodes[2].variant() == "hd-basic");
  CHECK(nodes[11].n_hd == 8);

  const auto sizes = packet_size_grid(base);
  CHECK(sizes.size() == 12);
  std::set<std::uint32_t> ul;
  for (const auto& c : sizes) {
    ul.insert(c.uplink_bytes);
    CHECK(c.downlink_bytes == 1500);
  }
  CHECK(ul == std::set<std::uint32_t>{40, 500, 1000, 1500});

  const auto canc = cancellation_grid(base);
  CHECK(canc.size() == 6 * 11);
  // same base seed gives the same grid
  CHECK(nodes_grid(base)[5].seed == nodes[5].seed);
}

TEST_CASE("command names") {
  for (auto c : {Command::Run, Command::SweepCancellation, Command::SweepPacketSize,
                 Command::SweepNodes, Command::Theory, Command::Rates, Command::CancelCdf})
    CHECK(parse_command(command_name(c)) == c);
  CHECK_FALSE(parse_command("sweep"));
}

TEST_CASE("batch results do not depend on thread count") {
  ScenarioConfig base;
  base.sim_time_s = 0.2;
  auto grid = nodes_grid(base);
  grid.resize(4);
  const auto a = run_batch(grid, 1);
  const auto b = run_batch(grid, 4);
  CHECK(emit_report(a, Format::Csv) == emit_report(b, Format::Csv));
}
