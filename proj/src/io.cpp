#include "dmt/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <tuple>

#include "json.hpp"

namespace dmt::io {

namespace {

double parse_double(std::string_view s, std::string_view what) {
  const std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size() || !std::isfinite(v))
    throw DomainError(std::string(what) + ": '" + tmp + "' is not a finite number");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<double> parse_snr_range(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3)
    throw DomainError("--snr-db: expected start:stop:step, got '" + std::string(text) + "'");
  const double start = parse_double(parts[0], "--snr-db start");
  const double stop = parse_double(parts[1], "--snr-db stop");
  const double step = parse_double(parts[2], "--snr-db step");
  if (!(step > 0.0)) throw DomainError("--snr-db: step must be > 0");
  if (stop < start) throw DomainError("--snr-db: stop must be >= start");
  const double span = (stop - start) / step;
  if (span > 1e6) throw DomainError("--snr-db: too many points");
  const auto n = static_cast<std::size_t>(std::floor(span + 1e-9));
  std::vector<double> out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

ScheduleRule parse_rule(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const bool has_arg = colon != std::string_view::npos;
  auto arg = [&] {
    const double f = parse_double(text.substr(colon + 1), "--rule");
    (void)Schedule(f);
    return f;
  };
  if (name == "fixed" && has_arg) return FixedRule{arg()};
  if (name == "blind") return has_arg ? BlindRule{arg()} : BlindRule{};
  if (!has_arg && name == "global") return GlobalRule{};
  if (!has_arg && name == "local") return LocalRule{};
  throw DomainError("--rule: expected fixed:<f>, global, local or blind[:<f>], got '" + std::string(text) + "'");
}

CsvDocument parse_csv(std::string_view text) {
  CsvDocument doc;
  bool have_header = false;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (!line.empty() && line.front() == '#') {
      doc.lines.push_back({true, std::string(line), {}});
      continue;
    }
    std::vector<std::string> fields;
    for (auto f : split(line, ',')) fields.emplace_back(f);
    if (!have_header) {
      doc.header = std::move(fields);
      have_header = true;
    } else {
      if (fields.size() != doc.header.size())
        throw DomainError("csv: row has " + std::to_string(fields.size()) + " fields, header has " +
                          std::to_string(doc.header.size()));
      doc.lines.push_back({false, {}, std::move(fields)});
    }
  }
  return doc;
}

std::string serialize_csv(const CsvDocument& doc) {
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ',';
      s += v[i];
    }
    return s;
  };
  std::string out = join(doc.header) + '\n';
  for (const auto& l : doc.lines) out += (l.comment ? l.text : join(l.fields)) + '\n';
  return out;
}

std::string curves_to_csv(std::vector<TradeoffCurve> curves) {
  struct Row {
    std::string_view strategy;
    double eta, r, d;
  };
  std::vector<Row> rows;
  for (const auto& c : curves)
    for (const auto& p : c.points) rows.push_back({to_string(c.strategy), c.eta, p.r, p.d});
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.strategy, a.eta, a.r) < std::tie(b.strategy, b.eta, b.r);
  });
  CsvDocument doc;
  doc.header = {"strategy", "eta", "r", "d"};
  for (const auto& r : rows)
    doc.lines.push_back({false, {}, {std::string(r.strategy), format_number(r.eta), format_number(r.r), format_number(r.d)}});
  return serialize_csv(doc);
}

std::string outage_to_csv(const std::vector<OutageEstimate>& estimates, const std::optional<SlopeFit>& slope) {
  CsvDocument doc;
  doc.header = {"snr_db", "p_out", "n_samples", "n_outages", "ci95"};
  for (const auto& e : estimates)
    doc.lines.push_back({false,
                         {},
                         {format_number(e.snr_db), format_number(e.p_out), std::to_string(e.n_samples),
                          std::to_string(e.n_outages), format_number(e.ci95_halfwidth)}});
  if (slope)
    doc.lines.push_back(
        {true, "# slope d_hat=" + format_number(slope->d_hat) + " stderr=" + format_number(slope->slope_stderr), {}});
  return serialize_csv(doc);
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["parameters"] = parameters;
  j["tool_version"] = tool_version;
  j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
  j["timestamp"] = timestamp;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
  m.tool_version = j.at("tool_version").get<std::string>();
  if (!j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
  m.timestamp = j.at("timestamp").get<std::string>();
  return m;
}

std::string iso8601_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string_view tool_version() { return DMT_VERSION; }

}  // namespace dmt::io
