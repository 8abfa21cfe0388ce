#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spotsim/money.hpp"
#include "spotsim/time_util.hpp"

namespace spotsim {

struct PricePoint {
  Seconds timestamp = 0;
  Money price;

  friend bool operator==(const PricePoint&, const PricePoint&) = default;
};

// Piecewise-constant spot-price history for one (zone, instance type).
// Immutable once built; the constructor enforces every invariant.
class PriceTrace {
 public:
  // Throws ValidationError on an empty point list, non-increasing timestamps,
  // a negative price or horizon_end <= last timestamp. A missing horizon
  // defaults to one hour past the last point.
  PriceTrace(std::string instance_type, std::string zone, std::vector<PricePoint> points,
             std::optional<Seconds> horizon_end = std::nullopt);

  const std::string& instance_type() const { return instance_type_; }
  const std::string& zone() const { return zone_; }
  const std::vector<PricePoint>& points() const { return points_; }

  Seconds start() const { return points_.front().timestamp; }
  Seconds horizon_end() const { return horizon_end_; }
  Money max_price() const { return max_price_; }

  // Price of the latest point with timestamp <= t. Throws OutOfRangeError
  // unless start() <= t < horizon_end().
  Money price_at(Seconds t) const;

  // Index of the point in effect at t (same range rule as price_at).
  std::size_t index_at(Seconds t) const;

  friend bool operator==(const PriceTrace&, const PriceTrace&) = default;

 private:
  std::string instance_type_;
  std::string zone_;
  std::vector<PricePoint> points_;
  Seconds horizon_end_ = 0;
  Money max_price_;
};

// Half-open [start, end).
struct AvailabilityInterval {
  Seconds start = 0;
  Seconds end = 0;

  Seconds length() const { return end - start; }
  friend bool operator==(const AvailabilityInterval&, const AvailabilityInterval&) = default;
};

// Maximal intervals where price_at(t) < bid, clipped to the trace span.
// A price equal to the bid is unavailable.
std::vector<AvailabilityInterval> availability(const PriceTrace& trace, Money bid);

// Rows for other (zone, type) pairs are skipped. Empty fields match anything,
// but then the stream must hold exactly one pair.
struct TraceSelector {
  std::string zone;
  std::string instance_type;
};

// Reads the trace CSV format:
//   timestamp,zone,instance_type,price
// with an optional header row and '#' comment lines. A comment of the form
// "#horizon_end=<timestamp>" sets the horizon explicitly.
PriceTrace parse_trace(std::istream& in, const TraceSelector& selector = {});

// Writes the format parse_trace reads, including the horizon comment.
void write_trace(std::ostream& out, const PriceTrace& trace);

// --- synthetic traces -------------------------------------------------------

struct SquareWaveModel {
  Money low;
  Money high;
  Seconds low_duration = 0;
  Seconds high_duration = 0;
  Seconds phase = 0;  // offset into the low/high cycle at `start`
  Seconds start = 0;
  Seconds duration = 0;  // horizon_end = start + duration
};

// Each period the price moves one step up or down (fair coin), never below floor.
struct RandomWalkModel {
  Money start_price;
  Money step;
  Seconds period = 0;
  Money floor;
  Seconds start = 0;
  Seconds duration = 0;  // points at start + k*period for k = 0..duration/period
};

// Multiplies every price of `base` by (1 + u*jitter), u uniform in [-1, 1].
struct ReplayJitterModel {
  PriceTrace base;
  double jitter = 0.0;
};

using GeneratorSpec = std::variant<SquareWaveModel, RandomWalkModel, ReplayJitterModel>;

// Deterministic for a fixed (model, seed). Throws ConfigError on non-positive
// durations or periods.
PriceTrace gen_trace(const GeneratorSpec& model, std::uint64_t seed,
                     const std::string& zone = "sim-zone", const std::string& instance_type = "sim.type");

}  // namespace spotsim
