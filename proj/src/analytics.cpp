#include "fdwifi/analytics.hpp"

#include <stdexcept>

namespace fdwifi::analytics {

Goodputs normalized_goodputs(const Population& pop, Scenario s) {
  if (pop.n_fd < 0 || pop.n_hd < 0 || pop.n() < 1)
    throw std::invalid_argument("population needs at least one station");
  const long long n = pop.n();
  Goodputs g{};
  switch (s) {
    case Scenario::HdOnly:
      if (pop.n_fd != 0) throw std::invalid_argument("half-duplex scenario with full-duplex stations");
      g.sum = 1;
      g.hd_uplink = Fraction(1, n + 1);
      g.hd_downlink = Fraction(1, n * (n + 1));
      break;
    case Scenario::FdOnly:
      if (pop.n_hd != 0) throw std::invalid_argument("full-duplex scenario with half-duplex stations");
      g.sum = 2;
      g.fd_duplex = Fraction(1, n);
      break;
    case Scenario::MixedCase1: {
      if (pop.n_fd != pop.n_hd) throw std::invalid_argument("mixed scenario needs equal counts");
      const long long m = pop.n_fd;
      g.sum = 1 + Fraction(m, n + 1);
      g.hd_downlink = Fraction(1, m * (n + 1));
      g.fd_duplex = Fraction(1, n + 1);
      g.hd_uplink = Fraction(1, n + 1);
      break;
    }
  }
  return g;
}

Gains improvement_factors(int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  return {Fraction(n + 1, n), Fraction(n + 1), Fraction(2)};
}

std::string to_string(const Fraction& f) {
  if (f.denominator() == 1) return std::to_string(f.numerator());
  return std::to_string(f.numerator()) + "/" + std::to_string(f.denominator());
}

}  // namespace fdwifi::analytics
