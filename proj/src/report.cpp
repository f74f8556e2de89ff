#include "fdwifi/report.hpp"

#include <charconv>
#include <cmath>

namespace fdwifi {

const char* const kRunCsvHeader =
    "scenario_id,seed,n_fd,n_hd,variant,sum_goodput_mbps,dl_hd,dl_fd,ul_fd,ul_hd,"
    "rts_collision_pct,data_collision_pct";

std::string fixed(double v, int decimals) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  return std::string(buf, p);
}

std::string csv_row(const RunResult& r) {
  const auto& m = r.report;
  const auto& c = r.config;
  // Class columns are rounded first so the sum column matches them exactly.
  auto round4 = [](double v) { return std::round(v * 1e4) / 1e4; };
  const double dl_hd = round4(m.dl_hd_mbps), dl_fd = round4(m.dl_fd_mbps);
  const double ul_fd = round4(m.ul_fd_mbps), ul_hd = round4(m.ul_hd_mbps);
  std::string s;
  s += c.id + ',' + std::to_string(c.seed) + ',' + std::to_string(c.n_fd) + ',' +
       std::to_string(c.n_hd) + ',' + c.variant() + ',';
  s += fixed(dl_hd + dl_fd + ul_fd + ul_hd, 4) + ',';
  s += fixed(dl_hd, 4) + ',' + fixed(dl_fd, 4) + ',' + fixed(ul_fd, 4) + ',' + fixed(ul_hd, 4) + ',';
  s += fixed(m.rts_collision_pct, 2) + ',' + fixed(m.data_collision_pct, 2);
  return s;
}

namespace {

std::string text_block(const RunResult& r) {
  const auto& m = r.report;
  std::string s;
  s += "scenario " + r.config.id + " (" + r.config.variant() + "), seed " +
       std::to_string(r.config.seed) + "\n";
  s += "  sum goodput        " + fixed(m.sum_goodput_mbps, 3) + " Mbps\n";
  s += "  hd downlink total  " + fixed(m.dl_hd_mbps, 3) + "\n";
  s += "  fd downlink total  " + fixed(m.dl_fd_mbps, 3) + "\n";
  s += "  fd uplink total    " + fixed(m.ul_fd_mbps, 3) + "\n";
  s += "  hd uplink total    " + fixed(m.ul_hd_mbps, 3) + "\n";
  s += "  rts collisions     " +
       (m.rts_collision_defined ? fixed(m.rts_collision_pct, 2) + " %" : std::string("n/a")) + "\n";
  s += "  data collisions    " +
       (m.data_collision_defined ? fixed(m.data_collision_pct, 2) + " %" : std::string("n/a")) +
       "\n";
  s += "  packets delivered  " + std::to_string(m.packets_delivered) + ", dropped " +
       std::to_string(m.packets_dropped) + ", events " + std::to_string(m.events) + "\n";
  s += "  per node (Mbps)\n";
  for (const auto& g : m.per_node)
    s += "    node " + std::to_string(g.id) + " " + std::string(mac::to_string(g.kind)) + "  up " +
         fixed(g.uplink_mbps, 3) + "  down " + fixed(g.downlink_mbps, 3) + "\n";
  s += "  config\n";
  const std::string cfg = config_text(r.config);
  std::size_t pos = 0;
  while (pos < cfg.size()) {
    const auto nl = cfg.find('\n', pos);
    s += "    " + cfg.substr(pos, nl - pos) + "\n";
    pos = nl + 1;
  }
  return s;
}

}  // namespace

std::string emit_report(const std::vector<RunResult>& runs, Format format) {
  std::string out;
  if (format == Format::Csv) {
    out += kRunCsvHeader;
    out += '\n';
    for (const auto& r : runs) out += csv_row(r) + '\n';
  } else {
    for (std::size_t i = 0; i < runs.size(); ++i) {
      if (i) out += '\n';
      out += text_block(runs[i]);
    }
  }
  return out;
}

}  // namespace fdwifi
