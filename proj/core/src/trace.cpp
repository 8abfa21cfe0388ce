#include "spotsim/trace.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "spotsim/error.hpp"

namespace spotsim {

PriceTrace::PriceTrace(std::string instance_type, std::string zone, std::vector<PricePoint> points,
                       std::optional<Seconds> horizon_end)
    : instance_type_(std::move(instance_type)), zone_(std::move(zone)), points_(std::move(points)) {
  if (points_.empty()) throw ValidationError("price trace has no points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].price < Money{})
      throw ValidationError("negative price at " + format_iso8601(points_[i].timestamp));
    if (i > 0 && points_[i].timestamp <= points_[i - 1].timestamp)
      throw ValidationError("timestamps not strictly increasing at " + format_iso8601(points_[i].timestamp));
    max_price_ = std::max(max_price_, points_[i].price);
  }
  horizon_end_ = horizon_end.value_or(points_.back().timestamp + kHour);
  if (horizon_end_ <= points_.back().timestamp)
    throw ValidationError("horizon_end must be after the last price point");
}

std::size_t PriceTrace::index_at(Seconds t) const {
  if (t < start() || t >= horizon_end_)
    throw OutOfRangeError("time " + std::to_string(t) + " outside trace span [" + std::to_string(start()) + ", " +
                          std::to_string(horizon_end_) + ")");
  auto it = std::upper_bound(points_.begin(), points_.end(), t,
                             [](Seconds value, const PricePoint& p) { return value < p.timestamp; });
  return static_cast<std::size_t>(it - points_.begin()) - 1;
}

Money PriceTrace::price_at(Seconds t) const { return points_[index_at(t)].price; }

std::vector<AvailabilityInterval> availability(const PriceTrace& trace, Money bid) {
  std::vector<AvailabilityInterval> out;
  const auto& pts = trace.points();
  std::optional<Seconds> open;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const bool up = pts[i].price < bid;
    if (up && !open) {
      open = pts[i].timestamp;
    } else if (!up && open) {
      out.push_back({*open, pts[i].timestamp});
      open.reset();
    }
  }
  if (open) out.push_back({*open, trace.horizon_end()});
  return out;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Row {
  Seconds timestamp;
  std::string zone;
  std::string type;
  Money price;
  std::size_t line;
};

}  // namespace

PriceTrace parse_trace(std::istream& in, const TraceSelector& selector) {
  std::vector<Row> rows;
  std::optional<Seconds> horizon;
  std::string line;
  std::size_t line_no = 0;
  bool first_row = true;
  constexpr std::string_view kHorizonTag = "#horizon_end=";

  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.rfind(kHorizonTag, 0) == 0) {
        try {
          horizon = parse_iso8601(trim(line.substr(kHorizonTag.size())));
        } catch (const ParseError& e) {
          throw ParseError(line_no, e.what());
        }
      }
      continue;
    }
    auto fields = split_csv(line);
    for (auto& f : fields) f = trim(f);
    if (first_row) {
      first_row = false;
      if (!fields.empty() && !fields[0].empty() && (fields[0][0] < '0' || fields[0][0] > '9')) continue;  // header
    }
    if (fields.size() != 4)
      throw ParseError(line_no, "expected 4 columns, got " + std::to_string(fields.size()));

    Row row{0, fields[1], fields[2], Money{}, line_no};
    try {
      row.timestamp = parse_iso8601(fields[0]);
      row.price = Money::parse(fields[3]);
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.what());
    }
    if (row.price < Money{}) throw ValidationError("line " + std::to_string(line_no) + ": negative price");
    if (!selector.zone.empty() && row.zone != selector.zone) continue;
    if (!selector.instance_type.empty() && row.type != selector.instance_type) continue;
    rows.push_back(std::move(row));
  }

  if (rows.empty()) throw ParseError(0, "no data rows");

  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& r : rows) pairs.emplace(r.zone, r.type);
  if (pairs.size() > 1)
    throw ValidationError("stream holds " + std::to_string(pairs.size()) +
                          " (zone, instance_type) pairs; select one");

  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.timestamp < b.timestamp; });
  std::vector<PricePoint> points;
  points.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].timestamp == rows[i - 1].timestamp)
      throw ValidationError("line " + std::to_string(rows[i].line) + ": duplicate timestamp " +
                            format_iso8601(rows[i].timestamp));
    points.push_back({rows[i].timestamp, rows[i].price});
  }
  return PriceTrace(rows.front().type, rows.front().zone, std::move(points), horizon);
}

namespace {

// Three decimals when exact, six otherwise.
std::string format_price(Money m) { return m.micros() % 1000 == 0 ? m.to_string(3) : m.to_string(6); }

}  // namespace

void write_trace(std::ostream& out, const PriceTrace& trace) {
  out << "timestamp,zone,instance_type,price\n";
  for (const auto& p : trace.points())
    out << format_iso8601(p.timestamp) << ',' << trace.zone() << ',' << trace.instance_type() << ','
        << format_price(p.price) << '\n';
  out << "#horizon_end=" << format_iso8601(trace.horizon_end()) << '\n';
}

}  // namespace spotsim
