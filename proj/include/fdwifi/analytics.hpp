#pragma once

#include <string>

#include <boost/rational.hpp>

namespace fdwifi::analytics {

using Fraction = boost::rational<long long>;

struct Population {
  int n_fd = 0;
  int n_hd = 0;
  int n() const { return n_fd + n_hd; }
};

enum class Scenario { FdOnly, HdOnly, MixedCase1 };

// Collision-free channel shares, normalized to the half-duplex capacity of
// the channel. Per-station values; absent classes are zero.
struct Goodputs {
  Fraction sum;
  Fraction hd_downlink;
  Fraction fd_duplex;  // each direction of one full-duplex station
  Fraction hd_uplink;
};

// Throws std::invalid_argument when the population does not fit the scenario.
Goodputs normalized_goodputs(const Population& pop, Scenario s);

// Full-duplex-only over half-duplex-only with n stations.
struct Gains {
  Fraction uplink;
  Fraction downlink;
  Fraction sum;
};

Gains improvement_factors(int n);

inline double to_double(const Fraction& f) {
  return static_cast<double>(f.numerator()) / static_cast<double>(f.denominator());
}

std::string to_string(const Fraction& f);

}  // namespace fdwifi::analytics
