#include "spotsim/failure.hpp"

#include <algorithm>
#include <cmath>

#include "spotsim/error.hpp"

namespace spotsim {

double FailurePdf::survival_from(std::size_t bucket) const {
  double s = tail_mass;
  for (std::size_t k = bucket; k < mass.size(); ++k) s += mass[k];
  return s;
}

void FailurePdf::validate() const {
  if (bucket_width <= 0) throw ValidationError("failure pdf bucket width must be positive");
  if (tail_mass < 0.0) throw ValidationError("negative tail mass");
  double total = tail_mass;
  for (double m : mass) {
    if (m < 0.0) throw ValidationError("negative bucket mass");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("failure pdf does not sum to 1");
}

FailurePdf estimate_pdf(const PriceTrace& trace, Money bid, Seconds bucket_width) {
  if (bucket_width <= 0) throw ConfigError("bucket width must be positive");
  const auto intervals = availability(trace, bid);
  if (intervals.empty()) throw InfeasibleError("never available at this bid");

  std::vector<std::size_t> counts;
  std::size_t censored = 0;
  for (const auto& iv : intervals) {
    if (iv.end == trace.horizon_end()) {
      ++censored;
      continue;
    }
    const auto k = static_cast<std::size_t>(iv.length() / bucket_width);
    if (counts.size() <= k) counts.resize(k + 1, 0);
    ++counts[k];
  }

  const double n = static_cast<double>(intervals.size());
  FailurePdf pdf;
  pdf.bucket_width = bucket_width;
  pdf.mass.reserve(counts.size());
  for (std::size_t c : counts) pdf.mass.push_back(static_cast<double>(c) / n);
  pdf.tail_mass = static_cast<double>(censored) / n;
  return pdf;
}

std::optional<double> eet(const FailurePdf& pdf, const EetInputs& inputs) {
  pdf.validate();
  if (inputs.w <= 0) throw ConfigError("job length must be positive");
  if (inputs.r < 0) throw ConfigError("restart overhead must be non-negative");

  const double width = static_cast<double>(pdf.bucket_width);
  const auto buckets = static_cast<std::size_t>(ceil_to_multiple(inputs.w, pdf.bucket_width) / pdf.bucket_width);

  // Failures in buckets below `buckets` restart the job; the rest finish it.
  double failure_cost = 0.0;
  for (std::size_t k = 0; k < std::min(buckets, pdf.mass.size()); ++k)
    failure_cost += ((static_cast<double>(k) + 0.5) * width + static_cast<double>(inputs.r)) * pdf.mass[k];
  const double success = pdf.survival_from(buckets);
  if (success <= 0.0) return std::nullopt;
  return (static_cast<double>(inputs.w) * success + failure_cost) / success;
}

double hazard(const FailurePdf& pdf, Seconds uptime, Seconds window) {
  const auto first = static_cast<std::size_t>(uptime / pdf.bucket_width);
  const auto last = static_cast<std::size_t>(ceil_to_multiple(uptime + window, pdf.bucket_width) / pdf.bucket_width);
  const double alive = pdf.survival_from(first);
  if (alive <= 0.0) return 1.0;
  double fail = 0.0;
  for (std::size_t k = first; k < std::min(last, pdf.mass.size()); ++k) fail += pdf.mass[k];
  return std::min(1.0, fail / alive);
}

}  // namespace spotsim
