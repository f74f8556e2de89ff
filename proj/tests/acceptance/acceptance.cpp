// Acceptance harness: one PASS/FAIL line per criterion, with the measured
// numbers underneath. Exit status is the number of failing criteria unless
// --report is given, in which case it is 0 whenever the harness itself ran.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <string>
#include <vector>

#include "fdwifi/analytics.hpp"
#include "fdwifi/commands.hpp"
#include "fdwifi/rate_model.hpp"
#include "fdwifi/report.hpp"
#include "fdwifi/scenario.hpp"
#include "fdwifi/si_chain.hpp"
#include "fdwifi/units.hpp"

using namespace fdwifi;

namespace {

constexpr int kSeeds = 5;
constexpr double kSimTime = 10.0;

struct Check {
  bool ok;
  std::string text;
};

class Criterion {
 public:
  Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {}

  // |got - want| <= tol
  void abs(const std::string& what, double got, double want, double tol) {
    const bool ok = std::fabs(got - want) <= tol;
    add(ok, what + fmt(" %.4f  target %.4f +-%.4f", got, want, tol));
  }
  // |got - want| <= rel * |want|
  void rel(const std::string& what, double got, double want, double rel) {
    const bool ok = std::fabs(got - want) <= rel * std::fabs(want);
    add(ok, what + fmt(" %.4f  target %.4f +-%.1f%%", got, want, rel * 100));
  }
  void truth(const std::string& what, bool ok) { add(ok, what); }

  bool print() const {
    bool ok = true;
    for (const auto& c : checks_) ok = ok && c.ok;
    std::printf("criterion %d %s  %s\n", id_, ok ? "PASS" : "FAIL", title_.c_str());
    for (const auto& c : checks_) std::printf("    [%s] %s\n", c.ok ? " ok " : "miss", c.text.c_str());
    std::fflush(stdout);
    return ok;
  }

 private:
  static std::string fmt(const char* f, double a, double b, double c) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
  }
  void add(bool ok, std::string text) { checks_.push_back({ok, std::move(text)}); }

  int id_;
  std::string title_;
  std::vector<Check> checks_;
};

// Seed-averaged figures of one scenario.
struct Mean {
  double sum = 0, rts_pct = 0;
  double dl_hd = 0, ul_hd = 0, dl_fd = 0, ul_fd = 0;  // per station
};

class Bench {
 public:
  // Registers a scenario; all scenarios run together in one batch.
  void want(const std::string& key, ScenarioConfig cfg, int seeds = kSeeds) {
    cfg.id = key;
    cfg.sim_time_s = kSimTime;
    for (int s = 1; s <= seeds; ++s) {
      cfg.seed = static_cast<std::uint64_t>(s);
      cfgs_.push_back(cfg);
    }
  }

  void run() {
    for (const auto& r : run_batch(cfgs_)) {
      auto& m = acc_[r.config.id];
      auto& n = count_[r.config.id];
      m.sum += r.report.sum_goodput_mbps;
      m.rts_pct += r.report.rts_collision_pct;
      m.dl_hd += r.report.per_node_dl_hd();
      m.ul_hd += r.report.per_node_ul_hd();
      m.dl_fd += r.report.per_node_dl_fd();
      m.ul_fd += r.report.per_node_ul_fd();
      ++n;
    }
    for (auto& [k, m] : acc_) {
      const double n = count_[k];
      m.sum /= n;
      m.rts_pct /= n;
      m.dl_hd /= n;
      m.ul_hd /= n;
      m.dl_fd /= n;
      m.ul_fd /= n;
    }
  }

  const Mean& operator[](const std::string& key) const { return acc_.at(key); }

 private:
  std::vector<ScenarioConfig> cfgs_;
  std::map<std::string, Mean> acc_;
  std::map<std::string, int> count_;
};

ScenarioConfig population(int n_fd, int n_hd, HdKind kind = HdKind::Legacy) {
  ScenarioConfig c;
  c.n_fd = n_fd;
  c.n_hd = n_hd;
  c.hd_kind = kind;
  return c;
}

std::string key(const char* tag, int n) { return std::string(tag) + "-" + std::to_string(n); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <class F>
std::vector<double> field(const std::vector<si::ChainSample>& s, F f) {
  std::vector<double> out;
  out.reserve(s.size());
  for (const auto& x : s) out.push_back(f(x));
  return out;
}

const int kNodes[] = {1, 2, 4, 8};
const std::uint32_t kUplink[] = {1500, 1000, 500, 40};
const int kMixed[] = {1, 2, 4};

void queue_all(Bench& b) {
  // single pair and node scaling
  for (int n : kNodes) {
    b.want(key("fd", n), population(n, 0));
    b.want(key("hd", n), population(0, n));
    auto basic = population(0, n);
    basic.rts_cts = false;
    b.want(key("basic", n), basic);
  }
  // uplink packet size
  for (auto up : kUplink) {
    auto fd = population(1, 0);
    auto hd = population(0, 1);
    fd.uplink_bytes = hd.uplink_bytes = up;
    b.want(key("fd-up", static_cast<int>(up)), fd);
    b.want(key("hd-up", static_cast<int>(up)), hd);
  }
  // coexistence
  for (int m : kMixed) {
    b.want(key("mod", m), population(m, m, HdKind::Modified));
    b.want(key("leg", m), population(m, m, HdKind::Legacy));
  }
  auto polite_fd = population(8, 0);
  polite_fd.politeness = mac::Politeness::PoliteEifs;
  b.want("polite-fd-8", polite_fd);
  auto polite_mix = population(4, 4, HdKind::Legacy);
  polite_mix.politeness = mac::Politeness::PoliteEifs;
  b.want("polite-leg-4", polite_mix);
  // scheduled access, collision free
  for (int n : kNodes) {
    auto fd = population(n, 0);
    auto hd = population(0, n);
    fd.access = hd.access = Access::Scheduled;
    b.want(key("sched-fd", n), fd, 1);
    b.want(key("sched-hd", n), hd, 1);
  }
  for (int m : kMixed) {
    auto mix = population(m, m, HdKind::Modified);
    mix.access = Access::Scheduled;
    b.want(key("sched-mod", m), mix, 1);
  }
}

bool single_pair(const Bench& b) {
  Criterion c(1, "single pair goodput");
  c.rel("fd sum", b["fd-1"].sum, 25.62, 0.05);
  c.rel("hd rts sum", b["hd-1"].sum, 12.80, 0.05);
  c.rel("hd basic sum", b["basic-1"].sum, 13.69, 0.05);
  c.abs("fd / hd rts", b["fd-1"].sum / b["hd-1"].sum, 2.00, 0.05);
  return c.print();
}

bool asymmetry(const Bench& b) {
  Criterion c(2, "uplink packet size");
  const double fd_want[] = {25.62, 21.34, 17.07, 13.14};
  const double gain_want[] = {2.00, 1.76, 1.52, 1.30};
  for (int i = 0; i < 4; ++i) {
    const int up = static_cast<int>(kUplink[i]);
    const auto& fd = b[key("fd-up", up)];
    const auto& hd = b[key("hd-up", up)];
    c.rel("uplink " + std::to_string(up) + " B fd sum", fd.sum, fd_want[i], 0.07);
    c.abs("uplink " + std::to_string(up) + " B gain", fd.sum / hd.sum, gain_want[i], 0.08);
  }
  return c.print();
}

bool scaling(const Bench& b) {
  Criterion c(3, "node scaling");
  const double ratio_want[] = {2.00, 2.03, 2.03, 2.02};
  const double fd_coll[] = {10.8, 8.1, 18.2, 32.3};
  const double hd_coll[] = {11.1, 17.8, 26.9, 40.0};
  for (int i = 0; i < 4; ++i) {
    const int n = kNodes[i];
    const auto& fd = b[key("fd", n)];
    const auto& hd = b[key("hd", n)];
    const auto& basic = b[key("basic", n)];
    const std::string at = "n=" + std::to_string(n) + " ";
    c.abs(at + "fd / hd rts", fd.sum / hd.sum, ratio_want[i], 0.1);
    if (n >= 4) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "rts %.3f > basic %.3f", hd.sum, basic.sum);
      c.truth(at + buf, hd.sum > basic.sum);
    }
    c.abs(at + "fd rts collisions %", fd.rts_pct, fd_coll[i], 5.0);
    c.abs(at + "hd rts collisions %", hd.rts_pct, hd_coll[i], 5.0);
  }
  return c.print();
}

bool coexistence_modified(const Bench& b) {
  Criterion c(4, "mixed with modified half-duplex stations");
  const double sum_want[] = {1.39, 1.42, 1.45};
  const double dl_want[] = {1.8, 2.05, 2.5};
  for (int i = 0; i < 3; ++i) {
    const int m = kMixed[i];
    const auto& mix = b[key("mod", m)];
    const auto& base = b[key("hd", 2 * m)];
    const std::string at = "m=" + std::to_string(m) + " ";
    c.abs(at + "sum gain", mix.sum / base.sum, sum_want[i], 0.05);
    c.rel(at + "hd downlink gain", mix.dl_hd / base.dl_hd, dl_want[i], 0.15);
  }
  return c.print();
}

bool coexistence_legacy(const Bench& b) {
  Criterion c(5, "mixed with legacy stations");
  // uplink of a legacy station next to full-duplex peers, against the same
  // station in a half-duplex-only cell of equal size
  c.rel("m=2 hd uplink / hd-only uplink", b["leg-2"].ul_hd / b["hd-4"].ul_hd, 1.07 / 2.53, 0.15);
  c.rel("polite fd-only n=8 sum", b["polite-fd-8"].sum, 25.05, 0.05);
  c.rel("polite mixed m=4 sum", b["polite-leg-4"].sum, 17.12, 0.05);
  return c.print();
}

bool analytics_oracle(const Bench& b) {
  using namespace analytics;
  Criterion c(6, "closed form against scheduled access");
  for (int n : kNodes) {
    const double cap = b[key("sched-hd", n)].sum;
    const auto hd = normalized_goodputs({0, n}, Scenario::HdOnly);
    const auto fd = normalized_goodputs({n, 0}, Scenario::FdOnly);
    const std::string at = "n=" + std::to_string(n) + " ";
    c.rel(at + "hd-only downlink share", b[key("sched-hd", n)].dl_hd / cap, to_double(hd.hd_downlink), 0.03);
    c.rel(at + "hd-only uplink share", b[key("sched-hd", n)].ul_hd / cap, to_double(hd.hd_uplink), 0.03);
    c.rel(at + "fd-only sum", b[key("sched-fd", n)].sum / cap, to_double(fd.sum), 0.03);
    c.rel(at + "fd-only per direction", b[key("sched-fd", n)].dl_fd / cap, to_double(fd.fd_duplex), 0.03);
  }
  for (int m : kMixed) {
    const auto& sim = b[key("sched-mod", m)];
    const double cap = b[key("sched-hd", 2 * m)].sum;
    const auto g = normalized_goodputs({m, m}, Scenario::MixedCase1);
    const std::string at = "mixed m=" + std::to_string(m) + " ";
    c.rel(at + "sum", sim.sum / cap, to_double(g.sum), 0.03);
    c.rel(at + "hd downlink", sim.dl_hd / cap, to_double(g.hd_downlink), 0.03);
    c.rel(at + "hd uplink", sim.ul_hd / cap, to_double(g.hd_uplink), 0.03);
    c.rel(at + "fd per direction", sim.dl_fd / cap, to_double(g.fd_duplex), 0.03);
    c.truth(at + "sum is 1 + m/(2m+1) exactly", g.sum == Fraction(1) + Fraction(m, 2 * m + 1));
  }
  for (int n : kNodes) {
    const auto hd = normalized_goodputs({0, n}, Scenario::HdOnly);
    const auto fd = normalized_goodputs({n, 0}, Scenario::FdOnly);
    const auto gain = improvement_factors(n);
    const std::string at = "n=" + std::to_string(n) + " ";
    c.truth(at + "hd-only sum is 1 exactly", hd.sum == Fraction(1));
    c.truth(at + "fd-only sum is 2 exactly", fd.sum == Fraction(2));
    c.truth(at + "sum gain is 2 exactly", gain.sum == Fraction(2));
  }
  return c.print();
}

bool si_properties() {
  using namespace si;
  Criterion c(7, "cancellation chain properties");

  // (a) exact estimates leave only rounding noise
  double worst = -kInf;
  for (int i = 0; i < 100; ++i) {
    SiChainConfig cfg;
    cfg.pilot_snr_db = kInf;
    cfg.wire_pilot_snr_db = kInf;
    Rng rng(mix_seed(2024, static_cast<std::uint64_t>(i)));
    const auto h = synth_si_channel(cfg, rng);
    const auto w = make_wire(cfg.subcarriers, 0.001, rng);
    const auto coeffs = analog_coeffs(estimate_channel(h, kInf, rng), estimate_channel(w, kInf, rng),
                                      CoeffMode::PerSubcarrier);
    std::vector<cplx> x(cfg.subcarriers);
    for (auto& v : x) v = cn01(rng);
    const auto y = residual_after_analog(std::span(&h, 1), w, std::span(&coeffs, 1), std::span(&x, 1));
    std::vector<cplx> si_in(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) si_in[k] = h.gains[k] * x[k];
    worst = std::max(worst, linear_to_db(payload_power(y) / payload_power(si_in)));
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "noiseless residual, worst of 100 channels %.1f dB <= -100 dB", worst);
  c.truth(buf, worst <= -100.0);

  // (b) per-subcarrier against flat cancellers on the calibrated channels
  const SiChainConfig base;
  constexpr int kDraws = 2000;
  ChainOptions per, f1, f2;
  f1.mode = CoeffMode::Ffc1;
  f2.mode = CoeffMode::Ffc2;
  const auto s_per = sample_chain(base, kDraws, per);
  const auto s_f1 = sample_chain(base, kDraws, f1);
  const auto s_f2 = sample_chain(base, kDraws, f2);
  const auto analog = [](const ChainSample& s) { return s.analog_db; };
  const double med_per = median(field(s_per, analog));
  c.abs("median p2p of calibrated channels dB", median(field(s_per, [](const ChainSample& s) { return s.p2p_db; })),
        9.0, 1.0);
  c.abs("analog gain over ffc1 dB", med_per - median(field(s_f1, analog)), 5.0, 3.0);
  c.abs("analog gain over ffc2 dB", med_per - median(field(s_f2, analog)), 5.0, 3.0);

  // (c) more passive suppression, less analog cancellation; more analog
  // cancellation, less digital cancellation
  constexpr int kSweepSeeds = 500;
  std::string trace = "passive 60..80 -> analog median";
  bool down = true;
  double prev = kInf;
  for (double p : {60.0, 65.0, 70.0, 75.0, 80.0}) {
    SiChainConfig cfg;
    cfg.passive_suppression_db = p;
    const double m = median(field(sample_chain(cfg, kSweepSeeds), analog));
    std::snprintf(buf, sizeof buf, " %.2f", m);
    trace += buf;
    down = down && m < prev;
    prev = m;
  }
  c.truth(trace + " strictly falling", down);

  trace = "analog range 10..30 -> analog/digital medians";
  bool analog_up = true, digital_down = true;
  double prev_a = -kInf, prev_d = kInf;
  for (double dr : {10.0, 15.0, 20.0, 25.0, 30.0}) {
    SiChainConfig cfg;
    cfg.analog_dynamic_range_db = dr;
    const auto s = sample_chain(cfg, kSweepSeeds);
    const double a = median(field(s, analog));
    const double d = median(field(s, [](const ChainSample& x) { return x.digital_db; }));
    std::snprintf(buf, sizeof buf, " %.1f/%.1f", a, d);
    trace += buf;
    analog_up = analog_up && a > prev_a;
    digital_down = digital_down && d < prev_d;
    prev_a = a;
    prev_d = d;
  }
  c.truth(trace + " analog rising, digital falling", analog_up && digital_down);

  // (d) total cancellation distribution
  const auto total = field(s_per, [](const ChainSample& s) { return s.total_db; });
  const double inside = static_cast<double>(std::count_if(total.begin(), total.end(),
                                                          [](double t) { return t >= 70 && t <= 100; })) /
                        static_cast<double>(total.size());
  c.abs("median total cancellation dB", median(total), 85.0, 2.0);
  std::snprintf(buf, sizeof buf, "share of draws in [70, 100] dB %.3f >= 0.95", inside);
  c.truth(buf, inside >= 0.95);
  return c.print();
}

bool rate_properties() {
  Criterion c(8, "ergodic rate comparison");
  std::vector<double> grid;
  for (double s = 0; s <= 40; s += 5) grid.push_back(s);
  const rate::RateConfig rc;
  constexpr int kPackets = 2000;

  const auto strong = rate::rate_sweep(grid, rc, si::SiChainConfig{}, kPackets, 11);
  const auto weak = rate::rate_sweep(grid, rc, si::weak_isolation_preset(), kPackets, 11);
  char buf[128];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double snr = grid[i];
    if (snr >= 20) {
      const auto& r = strong[i].rates;
      std::snprintf(buf, sizeof buf, "calibrated chain snr %2.0f: fd %.3f > hd %.3f", snr, r.er_fd, r.er_hd);
      c.truth(buf, r.er_fd > r.er_hd);
    }
    if (snr <= 30) {
      const auto& r = weak[i].rates;
      std::snprintf(buf, sizeof buf, "weak chain snr %2.0f: fd %.3f < hd %.3f", snr, r.er_fd, r.er_hd);
      c.truth(buf, r.er_fd < r.er_hd);
    }
  }
  bool exact = true;
  for (const auto& p : rate::rate_sweep(grid, rc, kInf, 50, 3))
    exact = exact && p.rates.er_fd == 2.0 * p.rates.er_hd;
  c.truth("infinite cancellation doubles the rate exactly at every grid point", exact);
  return c.print();
}

bool determinism() {
  Criterion c(9, "repeatable output");
  std::vector<ScenarioConfig> cfgs;
  auto a = population(4, 0);
  auto m = population(2, 2, HdKind::Legacy);
  m.politeness = mac::Politeness::PoliteEifs;
  m.cancellation_mode = CancellationMode::Sampled;
  auto h = population(0, 3);
  h.rts_cts = false;
  h.uplink_bytes = 500;
  for (auto* x : {&a, &m, &h}) {
    x->sim_time_s = 2.0;
    x->seed = 42;
  }
  for (const auto& cfg : {a, m, h}) {
    const auto first = emit_report(run_scenario(cfg), Format::Csv);
    const auto second = emit_report(run_scenario(cfg), Format::Csv);
    c.truth("scenario " + cfg.variant() + " csv identical", first == second);
  }
  auto sweep = population(1, 0);
  sweep.sim_time_s = 1.0;
  const auto one = command_output(Command::SweepNodes, sweep, Format::Csv, 1);
  const auto many = command_output(Command::SweepNodes, sweep, Format::Csv, 4);
  c.truth("node sweep csv identical on 1 and 4 threads", one == many);
  return c.print();
}

}  // namespace

int main(int argc, char** argv) {
  bool report_only = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--report") == 0) {
      report_only = true;
    } else {
      std::fprintf(stderr, "usage: %s [--report]\n", argv[0]);
      return 2;
    }
  }

  Bench bench;
  queue_all(bench);
  bench.run();

  int failed = 0;
  failed += !single_pair(bench);
  failed += !asymmetry(bench);
  failed += !scaling(bench);
  failed += !coexistence_modified(bench);
  failed += !coexistence_legacy(bench);
  failed += !analytics_oracle(bench);
  failed += !si_properties();
  failed += !rate_properties();
  failed += !determinism();

  std::printf("%d of 9 criteria failed\n", failed);
  return report_only ? 0 : failed;
}
