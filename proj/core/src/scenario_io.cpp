#include <cmath>
#include <fstream>
#include <sstream>

#include "apnet/io.hpp"
#include "json.hpp"

namespace apnet {

namespace {

using nlohmann::json;

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw ValidationError(origin_ + ": " + (path.empty() ? "<root>" : path) + ": " + what);
  }

  const json& member(const json& obj, const std::string& path, const char* key) const {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing required field '") + key + "'");
    return *it;
  }

  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "expected a finite number");
    return x;
  }

  int integer(const json& v, const std::string& path) const {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<int>();
  }

  std::string string(const json& v, const std::string& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  const json& array(const json& v, const std::string& path) const {
    if (!v.is_array()) fail(path, "expected an array");
    return v;
  }

  const json& object(const json& v, const std::string& path) const {
    if (!v.is_object()) fail(path, "expected an object");
    return v;
  }

  double number_field(const json& obj, const std::string& path, const char* key) const {
    return number(member(obj, path, key), join(path, key));
  }

  std::vector<double> numbers(const json& v, const std::string& path) const {
    std::vector<double> out;
    for (std::size_t k = 0; k < array(v, path).size(); ++k) out.push_back(number(v[k], index(path, k)));
    return out;
  }

  std::vector<int> integers(const json& v, const std::string& path) const {
    std::vector<int> out;
    for (std::size_t k = 0; k < array(v, path).size(); ++k) out.push_back(integer(v[k], index(path, k)));
    return out;
  }

  static std::string join(const std::string& path, const char* key) {
    return path.empty() ? std::string(key) : path + "." + key;
  }

  static std::string index(const std::string& path, std::size_t k) {
    return path + "[" + std::to_string(k) + "]";
  }

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
};

Road read_road(const Reader& r, const json& j, const std::string& path) {
  r.object(j, path);
  Road road;
  road.id = r.integer(r.member(j, path, "id"), Reader::join(path, "id"));
  road.length = r.number_field(j, path, "length");
  road.cells = r.integer(r.member(j, path, "cells"), Reader::join(path, "cells"));
  road.c0 = r.number_field(j, path, "c0");
  const std::string ppath = Reader::join(path, "profile");
  const json& prof = r.array(r.member(j, path, "profile"), ppath);
  for (std::size_t k = 0; k < prof.size(); ++k) {
    const std::string sp = Reader::index(ppath, k);
    r.object(prof[k], sp);
    road.profile.push_back({r.number_field(prof[k], sp, "from"), r.number_field(prof[k], sp, "to"),
                            r.number_field(prof[k], sp, "rho"), r.number_field(prof[k], sp, "w")});
  }
  try {
    road.validate();
  } catch (const ValidationError& e) {
    r.fail(path, e.what());
  }
  return road;
}

Junction read_junction(const Reader& r, const json& j, const std::string& path) {
  r.object(j, path);
  Junction jn;
  jn.id = r.integer(r.member(j, path, "id"), Reader::join(path, "id"));
  jn.incoming = r.integers(r.member(j, path, "incoming"), Reader::join(path, "incoming"));
  jn.outgoing = r.integers(r.member(j, path, "outgoing"), Reader::join(path, "outgoing"));
  jn.priorities = r.numbers(r.member(j, path, "priorities"), Reader::join(path, "priorities"));
  if (auto it = j.find("distribution"); it != j.end()) {
    const std::string dpath = Reader::join(path, "distribution");
    for (std::size_t k = 0; k < r.array(*it, dpath).size(); ++k) {
      jn.distribution.push_back(r.numbers((*it)[k], Reader::index(dpath, k)));
    }
  } else if (jn.outgoing.size() == 1) {
    jn.distribution = {std::vector<double>(jn.incoming.size(), 1.0)};
  } else {
    r.fail(path, "distribution is required when a junction has more than one outgoing road");
  }
  try {
    jn.validate();
  } catch (const ValidationError& e) {
    r.fail(path, e.what());
  }
  return jn;
}

BoundarySpec read_boundary(const Reader& r, const json& j, const std::string& path) {
  r.object(j, path);
  BoundarySpec b;
  b.road = r.integer(r.member(j, path, "road"), Reader::join(path, "road"));
  const std::string end = r.string(r.member(j, path, "end"), Reader::join(path, "end"));
  if (end == "start") {
    b.end = RoadEnd::Start;
  } else if (end == "end") {
    b.end = RoadEnd::End;
  } else {
    r.fail(Reader::join(path, "end"), "expected \"start\" or \"end\"");
  }
  const std::string type = r.string(r.member(j, path, "type"), Reader::join(path, "type"));
  if (type == "inflow-series") {
    b.type = BoundaryType::InflowSeries;
    const std::string spath = Reader::join(path, "series");
    const json& series = r.array(r.member(j, path, "series"), spath);
    for (std::size_t k = 0; k < series.size(); ++k) {
      const std::string sp = Reader::index(spath, k);
      r.object(series[k], sp);
      b.series.push_back({r.number_field(series[k], sp, "t"), r.number_field(series[k], sp, "rho"),
                          r.number_field(series[k], sp, "w")});
    }
  } else if (type == "free-outflow") {
    b.type = BoundaryType::FreeOutflow;
    if (auto it = j.find("supply"); it != j.end()) b.supply = r.number(*it, Reader::join(path, "supply"));
  } else {
    r.fail(Reader::join(path, "type"), "expected \"inflow-series\" or \"free-outflow\"");
  }
  return b;
}

}  // namespace

ParsedScenario parse_scenario_text(std::string_view text, const std::string& origin) {
  Reader r(origin);
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(origin + ": malformed JSON at byte " + std::to_string(e.byte));
  }
  r.object(doc, "");

  ParsedScenario out;
  Network& net = out.network;
  if (auto it = doc.find("name"); it != doc.end()) net.name = r.string(*it, "name");
  net.gamma = r.number_field(doc, "", "gamma");

  const json& roads = r.array(r.member(doc, "", "roads"), "roads");
  if (roads.empty()) r.fail("roads", "at least one road is required");
  for (std::size_t k = 0; k < roads.size(); ++k) net.roads.push_back(read_road(r, roads[k], Reader::index("roads", k)));

  if (auto it = doc.find("junctions"); it != doc.end()) {
    for (std::size_t k = 0; k < r.array(*it, "junctions").size(); ++k) {
      net.junctions.push_back(read_junction(r, (*it)[k], Reader::index("junctions", k)));
    }
  }
  if (auto it = doc.find("boundaries"); it != doc.end()) {
    for (std::size_t k = 0; k < r.array(*it, "boundaries").size(); ++k) {
      net.boundaries.push_back(read_boundary(r, (*it)[k], Reader::index("boundaries", k)));
    }
  }

  const json& time = r.object(r.member(doc, "", "time"), "time");
  net.time.horizon = r.number_field(time, "time", "horizon");
  net.time.dt_ratio = r.number_field(time, "time", "dt_ratio");
  if (auto it = time.find("output_every"); it != time.end()) {
    net.time.output_every = r.integer(*it, "time.output_every");
  }
  if (auto it = time.find("dx"); it != time.end()) {
    const double dx = r.number(*it, "time.dx");
    if (!(dx > 0.0)) r.fail("time.dx", "must be positive");
    net.set_cell_size(dx);
  }

  if (auto it = doc.find("scheme"); it != doc.end()) {
    auto s = parse_scheme(r.string(*it, "scheme"));
    if (!s) r.fail("scheme", "expected \"te\" or \"godunov\"");
    net.scheme = *s;
  }
  if (auto it = doc.find("model"); it != doc.end()) {
    auto m = parse_model(r.string(*it, "model"));
    if (!m) r.fail("model", "expected \"ap\" or \"lwr\"");
    net.model = *m;
  }

  try {
    out.warnings = net.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(origin + ": " + e.what());
  }
  return out;
}

ParsedScenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string() + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path.string());
}

std::string emit_scenario(const Network& net) {
  json doc = json::object();
  doc["name"] = net.name;
  doc["gamma"] = net.gamma;
  doc["scheme"] = to_string(net.scheme);
  doc["model"] = to_string(net.model);
  doc["time"] = {{"horizon", net.time.horizon},
                 {"dt_ratio", net.time.dt_ratio},
                 {"output_every", net.time.output_every}};

  json roads = json::array();
  for (const auto& road : net.roads) {
    json prof = json::array();
    for (const auto& seg : road.profile) {
      prof.push_back({{"from", seg.from}, {"to", seg.to}, {"rho", seg.rho}, {"w", seg.w}});
    }
    roads.push_back({{"id", road.id}, {"length", road.length}, {"cells", road.cells}, {"c0", road.c0},
                     {"profile", prof}});
  }
  doc["roads"] = roads;

  json junctions = json::array();
  for (const auto& jn : net.junctions) {
    junctions.push_back({{"id", jn.id},
                         {"incoming", jn.incoming},
                         {"outgoing", jn.outgoing},
                         {"priorities", jn.priorities},
                         {"distribution", jn.distribution}});
  }
  doc["junctions"] = junctions;

  json boundaries = json::array();
  for (const auto& b : net.boundaries) {
    json e = {{"road", b.road},
              {"end", b.end == RoadEnd::Start ? "start" : "end"},
              {"type", b.type == BoundaryType::InflowSeries ? "inflow-series" : "free-outflow"}};
    if (b.type == BoundaryType::InflowSeries) {
      json series = json::array();
      for (const auto& p : b.series) series.push_back({{"t", p.t}, {"rho", p.rho}, {"w", p.w}});
      e["series"] = series;
    } else if (std::isfinite(b.supply)) {
      e["supply"] = b.supply;
    }
    boundaries.push_back(e);
  }
  doc["boundaries"] = boundaries;
  return doc.dump(2) + "\n";
}

}  // namespace apnet
