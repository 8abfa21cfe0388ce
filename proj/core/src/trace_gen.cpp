#include <algorithm>
#include <cmath>
#include <random>

#include "spotsim/error.hpp"
#include "spotsim/trace.hpp"

namespace spotsim {

namespace {

// mt19937_64 output is fixed by the standard; map it to [0, 1) ourselves so
// traces do not depend on the library's distribution implementations.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

PriceTrace square_wave(const SquareWaveModel& m, const std::string& zone, const std::string& type) {
  if (m.low_duration <= 0 || m.high_duration <= 0) throw ConfigError("square-wave durations must be positive");
  if (m.duration <= 0) throw ConfigError("square-wave trace duration must be positive");
  if (m.phase < 0) throw ConfigError("square-wave phase must be non-negative");
  if (m.low < Money{} || m.high < Money{}) throw ConfigError("square-wave prices must be non-negative");

  const Seconds cycle = m.low_duration + m.high_duration;
  const Seconds end = m.start + m.duration;
  Seconds pos = m.phase % cycle;
  std::vector<PricePoint> points;
  for (Seconds t = m.start; t < end;) {
    const bool low = pos < m.low_duration;
    points.push_back({t, low ? m.low : m.high});
    const Seconds remaining = low ? m.low_duration - pos : cycle - pos;
    t += remaining;
    pos = (pos + remaining) % cycle;
  }
  return PriceTrace(type, zone, std::move(points), end);
}

PriceTrace random_walk(const RandomWalkModel& m, std::uint64_t seed, const std::string& zone,
                       const std::string& type) {
  if (m.period <= 0) throw ConfigError("random-walk step period must be positive");
  if (m.duration <= 0) throw ConfigError("random-walk duration must be positive");
  if (m.floor < Money{}) throw ConfigError("random-walk floor must be non-negative");
  if (m.step < Money{}) throw ConfigError("random-walk step must be non-negative");

  std::mt19937_64 rng(seed);
  const Seconds steps = m.duration / m.period;
  std::vector<PricePoint> points;
  points.reserve(static_cast<std::size_t>(steps) + 1);
  Money price = std::max(m.start_price, m.floor);
  for (Seconds k = 0; k <= steps; ++k) {
    if (k > 0) {
      price = (rng() >> 63) ? price + m.step : price - m.step;
      price = std::max(price, m.floor);
    }
    points.push_back({m.start + k * m.period, price});
  }
  return PriceTrace(type, zone, std::move(points), m.start + (steps + 1) * m.period);
}

PriceTrace replay_jitter(const ReplayJitterModel& m, std::uint64_t seed) {
  if (!(m.jitter >= 0.0)) throw ConfigError("jitter fraction must be non-negative");
  std::mt19937_64 rng(seed);
  std::vector<PricePoint> points = m.base.points();
  for (auto& p : points) {
    const double u = 2.0 * unit(rng) - 1.0;
    const double scaled = static_cast<double>(p.price.micros()) * (1.0 + u * m.jitter);
    p.price = Money::from_micros(std::max<std::int64_t>(0, std::llround(scaled)));
  }
  return PriceTrace(m.base.instance_type(), m.base.zone(), std::move(points), m.base.horizon_end());
}

}  // namespace

PriceTrace gen_trace(const GeneratorSpec& model, std::uint64_t seed, const std::string& zone,
                     const std::string& instance_type) {
  if (const auto* sq = std::get_if<SquareWaveModel>(&model)) return square_wave(*sq, zone, instance_type);
  if (const auto* rw = std::get_if<RandomWalkModel>(&model)) return random_walk(*rw, seed, zone, instance_type);
  return replay_jitter(std::get<ReplayJitterModel>(model), seed);
}

}  // namespace spotsim
