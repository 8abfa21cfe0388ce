#pragma once

#include <optional>
#include <vector>

#include "spotsim/money.hpp"
#include "spotsim/time_util.hpp"
#include "spotsim/trace.hpp"

namespace spotsim {

// Discrete distribution of the time from launch to an out-of-bid failure.
// mass[k] covers [k*bucket_width, (k+1)*bucket_width); tail_mass is the
// probability of surviving past everything observed.
struct FailurePdf {
  Seconds bucket_width = 1;
  std::vector<double> mass;
  double tail_mass = 0.0;

  // P(failure bucket >= bucket), including the tail.
  double survival_from(std::size_t bucket) const;

  // Throws ValidationError unless masses are non-negative and sum to 1 (1e-9).
  void validate() const;
};

struct EetInputs {
  Seconds w = 0;  // job length
  Seconds r = 0;  // restart overhead paid after every failure
};

// Histogram of availability-interval lengths at `bid`. An interval cut off by
// the trace horizon counts toward tail_mass. Throws InfeasibleError when the
// trace is never available at this bid, ConfigError on bucket_width <= 0.
FailurePdf estimate_pdf(const PriceTrace& trace, Money bid, Seconds bucket_width);

// Expected wall time to finish a job of length w that restarts from scratch
// after each failure. std::nullopt means the job never finishes (failure
// before w is certain).
std::optional<double> eet(const FailurePdf& pdf, const EetInputs& inputs);

// Conditional probability of failing within [uptime, uptime + window) given
// survival to uptime, at bucket resolution. Returns 1 when no probability
// mass remains at uptime.
double hazard(const FailurePdf& pdf, Seconds uptime, Seconds window);

}  // namespace spotsim
