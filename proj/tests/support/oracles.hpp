#pragma once

// Independent reference computations and random input generators shared by
// the unit and acceptance suites. Nothing here calls the code path it checks.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "spotsim/billing.hpp"
#include "spotsim/engine.hpp"
#include "spotsim/failure.hpp"
#include "spotsim/trace.hpp"

namespace spotsim::testing {

// Walks the lifetime one second at a time: an hour opens (and is charged at
// the current price) whenever a whole number of hours has elapsed since
// launch; an out-of-bid end refunds an hour that had not run in full.
inline Money per_second_bill(const InstanceLifetime& life, const PriceTrace& trace) {
  Money total;
  Money last_rate;
  Seconds last_open = life.launch_time;
  for (Seconds s = life.launch_time; s < life.end_time; ++s) {
    if ((s - life.launch_time) % 3600 == 0) {
      last_rate = trace.price_at(s);
      last_open = s;
      total += last_rate;
    }
  }
  const bool partial = life.end_time - last_open < 3600;
  if (partial && life.end_cause == EndCause::provider_out_of_bid) total -= last_rate;
  return total;
}

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

// Simulates the restart process directly: draw a failure bucket, finish if it
// is at or past the job length, otherwise pay the bucket midpoint plus the
// restart overhead and try again.
inline MonteCarloEstimate monte_carlo_eet(const FailurePdf& pdf, Seconds w, Seconds r, std::size_t runs,
                                          std::uint64_t seed) {
  std::vector<double> cdf;
  double acc = 0.0;
  for (double m : pdf.mass) cdf.push_back(acc += m);
  const auto job_buckets = static_cast<std::size_t>((w + pdf.bucket_width - 1) / pdf.bucket_width);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < runs; ++i) {
    double total = 0.0;
    for (;;) {
      const double x = u(rng);
      std::size_t k = 0;
      while (k < cdf.size() && x >= cdf[k]) ++k;  // k == cdf.size() means the tail
      if (k >= job_buckets) {
        total += static_cast<double>(w);
        break;
      }
      total += (static_cast<double>(k) + 0.5) * static_cast<double>(pdf.bucket_width) + static_cast<double>(r);
    }
    sum += total;
    sum_sq += total * total;
  }
  const double n = static_cast<double>(runs);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return {mean, std::sqrt(var / n)};
}

// Per-bucket hazard h up to `buckets` buckets, remaining mass in the tail.
inline FailurePdf geometric_pdf(double h, std::size_t buckets, Seconds width) {
  FailurePdf pdf;
  pdf.bucket_width = width;
  double survive = 1.0;
  for (std::size_t k = 0; k < buckets; ++k) {
    pdf.mass.push_back(survive * h);
    survive *= 1.0 - h;
  }
  pdf.tail_mass = survive;
  return pdf;
}

inline FailurePdf random_pdf(std::mt19937_64& rng, Seconds width) {
  std::uniform_int_distribution<int> len(1, 40);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FailurePdf pdf;
  pdf.bucket_width = width;
  const int n = len(rng);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double m = u(rng) < 0.3 ? 0.0 : u(rng);
    pdf.mass.push_back(m);
    total += m;
  }
  const double tail = u(rng) < 0.2 ? 0.0 : u(rng);
  total += tail;
  if (total == 0.0) {
    pdf.tail_mass = 1.0;
    return pdf;
  }
  for (double& m : pdf.mass) m /= total;
  pdf.tail_mass = tail / total;
  return pdf;
}

// Random square-wave or random-walk trace around a bid of 0.40.
inline PriceTrace random_trace(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coin(0, 1);
  auto pick = [&](Seconds lo, Seconds hi) { return std::uniform_int_distribution<Seconds>(lo, hi)(rng); };
  const std::uint64_t seed = rng();
  if (coin(rng) == 0) {
    SquareWaveModel m;
    m.low = Money::from_micros(pick(200'000, 390'000));
    m.high = Money::from_micros(pick(400'000, 700'000));
    m.low_duration = pick(300, 9000);
    m.high_duration = pick(60, 4000);
    m.phase = pick(0, m.low_duration + m.high_duration - 1);
    m.start = 1'317'427'200;  // 2011-10-01
    m.duration = pick(40'000, 160'000);
    return gen_trace(m, seed);
  }
  RandomWalkModel m;
  m.start_price = Money::from_micros(pick(330'000, 420'000));
  m.step = Money::from_micros(pick(1, 30) * 1000);
  m.period = pick(1, 40) * 60 + pick(0, 1) * pick(1, 59);
  m.floor = Money::from_micros(pick(0, 300'000));
  m.start = 1'317'427'200;
  m.duration = pick(40'000, 160'000);
  return gen_trace(m, seed);
}

inline JobSpec random_job(std::mt19937_64& rng) {
  auto pick = [&](Seconds lo, Seconds hi) { return std::uniform_int_distribution<Seconds>(lo, hi)(rng); };
  JobSpec job;
  job.w = pick(1, 30'000);
  job.t_c = pick(0, 1) == 0 ? pick(0, 5) : pick(30, 600);
  job.t_w = pick(0, 30);
  if (job.t_c + job.t_w == 0) job.t_w = 1;
  job.r = pick(0, 900);
  const Seconds deltas[] = {300, 600, 900, 1200};
  job.adapt_delta = deltas[pick(0, 3)];
  job.relaunch_poll = pick(1, 300);
  return job;
}

}  // namespace spotsim::testing
