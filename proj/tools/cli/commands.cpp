#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "spotsim/app_definition.hpp"
#include "spotsim/engine.hpp"
#include "spotsim/error.hpp"
#include "spotsim/framework.hpp"
#include "spotsim/trace.hpp"

namespace spotsim::cli {
namespace {

namespace fs = std::filesystem;

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

PriceTrace load_trace(const std::string& path, const TraceSelector& selector) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file '" + path + "'");
  try {
    return parse_trace(in, selector);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
}

std::string trace_id(const std::string& path) { return fs::path(path).stem().string(); }

// Sends output to --out FILE when given, else to the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw ConfigError("cannot write '" + path + "'");
    os_ = file_.get();
  }
  std::ostream& get() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

struct JobFlags {
  Seconds job_minutes = 0;
  Seconds checkpoint = 0;
  Seconds restart = 0;
  Seconds query = 0;
  Seconds adapt_delta = 600;
  Seconds poll = 60;

  JobSpec job() const {
    JobSpec j{job_minutes * 60, checkpoint, restart, query, adapt_delta, poll};
    j.validate();
    return j;
  }
};

void add_job_flags(CLI::App* cmd, JobFlags& f) {
  cmd->add_option("--job-minutes", f.job_minutes, "Job length in minutes of compute")->required();
  cmd->add_option("--checkpoint-secs", f.checkpoint, "Checkpoint write time t_c")->required();
  cmd->add_option("--restart-secs", f.restart, "Restart overhead r after a relaunch")->required();
  cmd->add_option("--query-secs", f.query, "Spot-price query wait t_w")->required();
  cmd->add_option("--adapt-delta", f.adapt_delta, "ADAPT decision interval in seconds")->capture_default_str();
  cmd->add_option("--poll", f.poll, "ACC relaunch polling period in seconds")->capture_default_str();
}

Money money_flag(const std::string& text, const char* flag) {
  try {
    return Money::parse(text);
  } catch (const ParseError&) {
    throw ConfigError(std::string(flag) + ": '" + text + "' is not a decimal amount");
  }
}

std::string report_row(const std::string& trace, SchemeId scheme, Money bid, const SimResult& r) {
  std::ostringstream o;
  o << trace << ',' << to_string(scheme) << ',' << bid.to_string(6) << ',' << r.completion_time << ','
    << r.total_cost.to_string(6) << ',' << fixed(r.cost_time_product, 6) << ',' << (r.completed ? "true" : "false")
    << ',' << r.checkpoints_taken << ',' << r.work_lost;
  return o.str();
}

// --- simulate ---------------------------------------------------------------

struct SimulateFlags {
  std::string trace;
  std::string zone;
  std::string type;
  std::string scheme;
  std::string bid;
  std::string sbid;
  std::string app;
  std::string out;
  JobFlags job;
};

int cmd_simulate(const SimulateFlags& f, std::ostream& out) {
  std::optional<ApplicationDefinition> app;
  if (!f.app.empty()) {
    std::ifstream in(f.app);
    if (!in) throw ConfigError("cannot open application definition '" + f.app + "'");
    app = parse_app_definition(in);
  }

  std::string type = f.type;
  if (type.empty() && app) type = app->instance_type();
  const PriceTrace trace = load_trace(f.trace, {f.zone, type});

  if (f.scheme.empty() && !app) throw ConfigError("--scheme is required");
  const SchemeId scheme = f.scheme.empty() ? SchemeId::acc : parse_scheme(f.scheme);

  BidConfig cfg;
  cfg.scheme = scheme;
  if (!f.bid.empty())
    cfg.a_bid = money_flag(f.bid, "--bid");
  else if (app)
    cfg.a_bid = app->a_bid();
  else
    throw ConfigError("--bid is required");

  if (!f.sbid.empty())
    cfg.s_bid = money_flag(f.sbid, "--sbid");
  else if (app && app->s_bid())
    cfg.s_bid = *app->s_bid();
  else
    cfg.s_bid = default_provider_bid(trace);

  const SimResult result = simulate(trace, f.job.job(), cfg);
  Sink sink(f.out, out);
  sink.get() << kReportHeader << '\n' << report_row(trace_id(f.trace), scheme, cfg.a_bid, result) << '\n';
  return result.completed ? kOk : kIncomplete;
}

// --- sweep ------------------------------------------------------------------

struct SweepFlags {
  std::vector<std::string> traces;
  std::string zone;
  std::string type;
  std::string schemes = "none,opt,hour,edge,adapt,acc";
  std::string bid_min;
  std::string bid_max;
  std::string bid_step = "0.001";
  std::string sbid;
  int parallel = 0;
  std::string out;
  JobFlags job;
};

struct SweepPoint {
  std::size_t trace = 0;
  SchemeId scheme = SchemeId::none;
  Money bid;
};

struct PointResult {
  bool completed = false;
  Seconds completion_time = 0;
  Money cost;
  double product = 0.0;
  std::string row;
};

std::vector<SchemeId> parse_scheme_list(const std::string& text) {
  std::vector<SchemeId> picked;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const SchemeId id = parse_scheme(item);
    if (std::find(picked.begin(), picked.end(), id) == picked.end()) picked.push_back(id);
  }
  if (picked.empty()) throw ConfigError("--schemes lists no scheme");
  std::sort(picked.begin(), picked.end());
  return picked;
}

int default_parallelism() {
  if (const char* env = std::getenv("SPOTSIM_PARALLEL")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::string pct_delta(double value, std::optional<double> base) {
  if (!base || *base == 0.0) return "";
  return fixed((value - *base) / *base * 100.0, 2);
}

int cmd_sweep(const SweepFlags& f, std::ostream& out) {
  const Money lo = money_flag(f.bid_min, "--bid-min");
  const Money hi = money_flag(f.bid_max, "--bid-max");
  const Money step = money_flag(f.bid_step, "--bid-step");
  if (lo < Money{} || hi < lo) throw ConfigError("need 0 <= --bid-min <= --bid-max");
  if (step <= Money{}) throw ConfigError("--bid-step must be positive");
  const std::vector<SchemeId> schemes = parse_scheme_list(f.schemes);
  const JobSpec job = f.job.job();

  std::vector<PriceTrace> traces;
  std::vector<std::string> ids;
  for (const auto& path : f.traces) {
    traces.push_back(load_trace(path, {f.zone, f.type}));
    ids.push_back(trace_id(path));
  }

  std::vector<SweepPoint> points;
  const std::int64_t count = (hi.micros() - lo.micros()) / step.micros() + 1;
  for (std::size_t t = 0; t < traces.size(); ++t)
    for (SchemeId s : schemes)
      for (std::int64_t k = 0; k < count; ++k) points.push_back({t, s, lo + step * k});

  std::vector<BidConfig> base(traces.size());
  for (std::size_t t = 0; t < traces.size(); ++t)
    base[t].s_bid = f.sbid.empty() ? default_provider_bid(traces[t]) : money_flag(f.sbid, "--sbid");

  std::vector<PointResult> results(points.size());
  std::vector<std::exception_ptr> failures(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      const SweepPoint& p = points[i];
      try {
        BidConfig cfg = base[p.trace];
        cfg.a_bid = p.bid;
        cfg.scheme = p.scheme;
        const SimResult r = simulate(traces[p.trace], job, cfg);
        results[i] = {r.completed, r.completion_time, r.total_cost, r.cost_time_product,
                      report_row(ids[p.trace], p.scheme, p.bid, r)};
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(f.parallel > 0 ? f.parallel : default_parallelism(),
                                                static_cast<int>(points.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : failures)
    if (e) std::rethrow_exception(e);

  struct Means {
    std::size_t completed = 0;
    std::size_t total = 0;
    double time = 0.0;
    double cost = 0.0;
    double product = 0.0;
  };
  std::map<SchemeId, Means> means;
  for (std::size_t i = 0; i < points.size(); ++i) {
    Means& m = means[points[i].scheme];
    ++m.total;
    if (!results[i].completed) continue;
    ++m.completed;
    m.time += static_cast<double>(results[i].completion_time);
    m.cost += results[i].cost.usd();
    m.product += results[i].product;
  }
  for (auto& [id, m] : means) {
    if (m.completed == 0) continue;
    const double n = static_cast<double>(m.completed);
    m.time /= n;
    m.cost /= n;
    m.product /= n;
  }

  std::optional<Means> opt;
  if (auto it = means.find(SchemeId::opt); it != means.end() && it->second.completed > 0) opt = it->second;

  Sink sink(f.out, out);
  std::ostream& os = sink.get();
  os << kReportHeader << '\n';
  for (const auto& r : results) os << r.row << '\n';
  // summary,<scheme>,<completed>/<points>,mean time,mean cost,mean product,
  // then time/cost/product deltas against OPT in percent.
  for (SchemeId s : schemes) {
    const Means& m = means[s];
    os << "summary," << to_string(s) << ',' << m.completed << '/' << m.total << ',';
    if (m.completed == 0) {
      os << ",,,,,\n";
      continue;
    }
    os << fixed(m.time, 1) << ',' << fixed(m.cost, 6) << ',' << fixed(m.product, 6) << ','
       << pct_delta(m.time, opt ? std::optional(opt->time) : std::nullopt) << ','
       << pct_delta(m.cost, opt ? std::optional(opt->cost) : std::nullopt) << ','
       << pct_delta(m.product, opt ? std::optional(opt->product) : std::nullopt) << '\n';
  }
  return kOk;
}

// --- select -----------------------------------------------------------------

struct SelectFlags {
  std::string offers;
  std::string sla;
  Seconds job_minutes = 0;
  Seconds restart = 0;
  Seconds bucket = 60;
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const auto a = field.find_first_not_of(" \t\r");
    fields.push_back(a == std::string::npos ? "" : field.substr(a, field.find_last_not_of(" \t\r") - a + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double capability_value(const std::string& column, const std::string& text, std::size_t line) {
  static const std::map<std::string, double> io_levels = {{"low", 1}, {"moderate", 2}, {"high", 3}};
  if (auto it = io_levels.find(text); it != io_levels.end()) return it->second;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0') throw ParseError(line, "column " + column + ": '" + text + "' is not a number");
  return v;
}

std::vector<ServiceOffer> load_offers(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open offers file '" + path + "'");
  const fs::path dir = fs::path(path).parent_path();

  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    header = split_csv(line);
  }
  const char* required[] = {"provider", "instance_type", "zone", "on_demand_rate", "trace_file"};
  for (const char* col : required)
    if (std::find(header.begin(), header.end(), col) == header.end())
      throw ParseError(lineno, path + ": offers header lacks column '" + col + "'");

  std::map<std::string, std::shared_ptr<const PriceTrace>> cache;
  std::vector<ServiceOffer> offers;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    const auto fields = split_csv(line);
    if (fields.size() != header.size())
      throw ParseError(lineno, path + ": expected " + std::to_string(header.size()) + " fields");
    ServiceOffer o;
    std::string trace_file;
    for (std::size_t i = 0; i < header.size(); ++i) {
      const std::string& col = header[i];
      if (col == "provider") o.provider = fields[i];
      else if (col == "instance_type") o.instance_type = fields[i];
      else if (col == "zone") o.zone = fields[i];
      else if (col == "on_demand_rate") o.on_demand_rate = money_flag(fields[i], "on_demand_rate");
      else if (col == "trace_file") trace_file = (dir / fields[i]).string();
      else o.capabilities[col] = capability_value(col, fields[i], lineno);
    }
    const std::string key = trace_file + '|' + o.zone + '|' + o.instance_type;
    auto& hist = cache[key];
    if (!hist) hist = std::make_shared<const PriceTrace>(load_trace(trace_file, {o.zone, o.instance_type}));
    o.history = hist;
    offers.push_back(std::move(o));
  }
  return offers;
}

int cmd_select(const SelectFlags& f, std::ostream& out) {
  const std::vector<ServiceOffer> offers = load_offers(f.offers);
  const Selection s = select_bid_and_type(offers, parse_sla(f.sla), f.job_minutes * 60, f.restart, f.bucket);
  out << "a_bid," << s.a_bid.to_string(6) << '\n';
  out << "instance_type," << s.instance_type << '\n';
  out << "type,eet_s\n";
  for (const auto& [type, value] : s.eet_table) out << type << ',' << (value ? fixed(*value, 3) : "never") << '\n';
  return kOk;
}

// --- gen-trace --------------------------------------------------------------

struct GenFlags {
  std::string model;
  std::uint64_t seed = 0;
  std::string start = "2011-10-01T00:00:00Z";
  Seconds duration = 0;
  std::string zone = "sim-zone";
  std::string type = "sim.type";
  std::string low = "0.30";
  std::string high = "0.50";
  Seconds low_secs = 3000;
  Seconds high_secs = 1200;
  Seconds phase = 0;
  std::string start_price = "0.40";
  std::string step = "0.01";
  Seconds period = 300;
  std::string floor = "0";
  std::string base;
  double jitter = 0.05;
  std::string out;
};

int cmd_gen_trace(const GenFlags& f, std::ostream& out) {
  GeneratorSpec spec = SquareWaveModel{};
  const Seconds start = parse_iso8601(f.start);
  if (f.model == "square") {
    spec = SquareWaveModel{money_flag(f.low, "--low"), money_flag(f.high, "--high"), f.low_secs, f.high_secs,
                           f.phase, start, f.duration};
  } else if (f.model == "walk") {
    spec = RandomWalkModel{money_flag(f.start_price, "--start-price"), money_flag(f.step, "--step"), f.period,
                           money_flag(f.floor, "--floor"), start, f.duration};
  } else if (f.model == "jitter") {
    if (f.base.empty()) throw ConfigError("--model jitter needs --base FILE");
    spec = ReplayJitterModel{load_trace(f.base, {}), f.jitter};
  } else {
    throw ConfigError("unknown --model '" + f.model + "' (square, walk or jitter)");
  }
  const PriceTrace trace = gen_trace(spec, f.seed, f.zone, f.type);
  Sink sink(f.out, out);
  write_trace(sink.get(), trace);
  return kOk;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spot-instance checkpointing simulator"};
  app.require_subcommand(1);

  SimulateFlags sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run one job under one scheme and bid");
  simulate_cmd->add_option("--trace", sim.trace, "Price trace CSV")->required();
  simulate_cmd->add_option("--zone", sim.zone, "Availability zone to select");
  simulate_cmd->add_option("--type", sim.type, "Instance type to select");
  simulate_cmd->add_option("--scheme", sim.scheme, "none, opt, hour, edge, adapt or acc");
  simulate_cmd->add_option("--bid", sim.bid, "Application bid in USD/hour");
  simulate_cmd->add_option("--sbid", sim.sbid, "Provider bid for ACC (default: twice the trace maximum)");
  simulate_cmd->add_option("--app", sim.app, "Application definition JSON supplying bids and type");
  simulate_cmd->add_option("--out", sim.out, "Write the CSV here instead of stdout");
  add_job_flags(simulate_cmd, sim.job);

  SweepFlags sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run every scheme over a grid of bids");
  sweep_cmd->add_option("--trace", sweep.traces, "Price trace CSV (repeatable)")->required();
  sweep_cmd->add_option("--zone", sweep.zone, "Availability zone to select");
  sweep_cmd->add_option("--type", sweep.type, "Instance type to select");
  sweep_cmd->add_option("--schemes", sweep.schemes, "Comma-separated scheme list")->capture_default_str();
  sweep_cmd->add_option("--bid-min", sweep.bid_min, "Lowest bid")->required();
  sweep_cmd->add_option("--bid-max", sweep.bid_max, "Highest bid")->required();
  sweep_cmd->add_option("--bid-step", sweep.bid_step, "Bid increment")->capture_default_str();
  sweep_cmd->add_option("--sbid", sweep.sbid, "Provider bid for ACC (default: twice the trace maximum)");
  sweep_cmd->add_option("--parallel", sweep.parallel, "Worker threads (default: SPOTSIM_PARALLEL or core count)");
  sweep_cmd->add_option("--out", sweep.out, "Write the CSV here instead of stdout");
  add_job_flags(sweep_cmd, sweep.job);

  SelectFlags sel;
  auto* select_cmd = app.add_subcommand("select", "Pick the application bid and instance type");
  select_cmd->add_option("--offers", sel.offers, "Offers CSV")->required();
  select_cmd->add_option("--sla", sel.sla, "Minimum capabilities, e.g. vcpu=4,ram_gb=15");
  select_cmd->add_option("--job-minutes", sel.job_minutes, "Job length in minutes")->required();
  select_cmd->add_option("--restart-secs", sel.restart, "Restart overhead r")->required();
  select_cmd->add_option("--bucket-secs", sel.bucket, "Failure histogram bucket width")->capture_default_str();

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen-trace", "Write a synthetic price trace");
  gen_cmd->add_option("--model", gen.model, "square, walk or jitter")->required();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--start", gen.start, "First timestamp")->capture_default_str();
  gen_cmd->add_option("--duration-secs", gen.duration, "Trace length (square, walk)");
  gen_cmd->add_option("--zone", gen.zone)->capture_default_str();
  gen_cmd->add_option("--type", gen.type)->capture_default_str();
  gen_cmd->add_option("--low", gen.low)->capture_default_str();
  gen_cmd->add_option("--high", gen.high)->capture_default_str();
  gen_cmd->add_option("--low-secs", gen.low_secs)->capture_default_str();
  gen_cmd->add_option("--high-secs", gen.high_secs)->capture_default_str();
  gen_cmd->add_option("--phase-secs", gen.phase)->capture_default_str();
  gen_cmd->add_option("--start-price", gen.start_price)->capture_default_str();
  gen_cmd->add_option("--step", gen.step)->capture_default_str();
  gen_cmd->add_option("--period-secs", gen.period)->capture_default_str();
  gen_cmd->add_option("--floor", gen.floor)->capture_default_str();
  gen_cmd->add_option("--base", gen.base, "Trace to replay (jitter)");
  gen_cmd->add_option("--jitter", gen.jitter, "Relative jitter amplitude (jitter)")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Write the CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (!app.get_subcommands().empty()) err << app.get_subcommands().front()->help();
    else err << app.help();
    return kError;
  }

  try {
    if (*simulate_cmd) return cmd_simulate(sim, out);
    if (*sweep_cmd) return cmd_sweep(sweep, out);
    if (*select_cmd) return cmd_select(sel, out);
    return cmd_gen_trace(gen, out);
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> storage{"spotsim"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace spotsim::cli
