#include "webgeo/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "webgeo/errors.hpp"

namespace webgeo {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                    "#e377c2", "#bcbd22", "#17becf", "#393b79", "#637939", "#8c6d31",
                                    "#843c39", "#7b4173", "#3182bd", "#e6550d", "#31a354", "#756bb1"};
constexpr const char* kUnknownColor = "#9e9e9e";

Json provenance_json(const Provenance& prov) {
  Json j;
  j["tool"] = "webgeo";
  j["version"] = std::string(tool_version());
  j["command"] = prov.command;
  j["config_digest"] = prov.config_digest;
  j["seed"] = prov.seed;
  return j;
}

Json node_json(const Embedding& emb, std::size_t i) {
  Json n;
  n["label"] = emb.labels[i];
  n["r"] = emb.coords[i].r;
  n["theta"] = emb.coords[i].theta;
  n["degree"] = i < emb.degrees.size() ? emb.degrees[i] : 0;
  n["entity"] = i < emb.meta.size() ? emb.meta[i].entity : std::string(kUnknown);
  n["activity"] = i < emb.meta.size() ? emb.meta[i].activity : std::string(kUnknown);
  return n;
}

template <typename T>
T field(const Json& obj, const char* key, const char* where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw SchemaError(std::string("embedding document: ") + where + " lacks '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SchemaError(std::string("embedding document: ") + where + "." + key + " has the wrong type");
  }
}

}  // namespace

std::string_view tool_version() {
#ifdef WEBGEO_VERSION
  return WEBGEO_VERSION;
#else
  return "0.0.0";
#endif
}

std::string provenance_line(const Provenance& prov) {
  std::ostringstream os;
  os << "# webgeo " << tool_version() << " command=" << prov.command << " config=" << prov.config_digest
     << " seed=" << prov.seed;
  return os.str();
}

std::string digest_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_embedding_json(std::ostream& out, const Embedding& emb, const Provenance& prov,
                          const EmbeddingReport* report) {
  Json doc;
  doc["provenance"] = provenance_json(prov);
  Json g;
  g["level"] = std::string(to_string(emb.level));
  g["N"] = emb.size();
  g["R"] = emb.radius;
  g["T"] = emb.temperature;
  g["log_likelihood"] = emb.log_likelihood;
  g["seed"] = emb.seed;
  g["gamma"] = emb.gamma;
  g["converged"] = emb.converged;
  doc["global"] = g;
  if (report) {
    Json d;
    d["gamma_reliable"] = report->gamma_reliable;
    d["observed_clustering"] = report->observed_clustering;
    d["model_clustering"] = report->model_clustering;
    d["temperature_converged"] = report->temperature_converged;
    d["calibration_iterations"] = report->calibration.iterations;
    d["degree_max_relative_error"] = report->calibration.max_relative_error;
    d["kappa_min"] = report->calibration.kappa_min;
    d["mu"] = report->calibration.mu;
    d["initial_log_likelihood"] = report->initial_log_likelihood;
    d["sweep_log_likelihood"] = report->sweep_log_likelihood;
    d["saturated_pairs"] = report->saturated_pairs;
    doc["diagnostics"] = d;
  }
  Json nodes = Json::array();
  for (std::size_t i = 0; i < emb.size(); ++i) nodes.push_back(node_json(emb, i));
  doc["nodes"] = std::move(nodes);
  out << doc.dump(1) << '\n';
}

Embedding read_embedding_json(std::istream& in) {
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("embedding document is not valid JSON: ") + e.what());
  }
  const Json& g = doc.contains("global") ? doc["global"] : Json();
  Embedding emb;
  emb.level = parse_level(field<std::string>(g, "level", "global"));
  emb.radius = field<double>(g, "R", "global");
  emb.temperature = field<double>(g, "T", "global");
  emb.log_likelihood = field<double>(g, "log_likelihood", "global");
  emb.seed = field<std::uint64_t>(g, "seed", "global");
  if (g.contains("gamma")) emb.gamma = field<double>(g, "gamma", "global");
  if (g.contains("converged")) emb.converged = field<bool>(g, "converged", "global");
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) throw SchemaError("embedding document lacks 'nodes'");
  for (const auto& n : doc["nodes"]) {
    emb.labels.push_back(field<std::string>(n, "label", "node"));
    emb.coords.push_back({field<double>(n, "r", "node"), field<double>(n, "theta", "node")});
    emb.degrees.push_back(field<std::size_t>(n, "degree", "node"));
    emb.meta.push_back({field<std::string>(n, "entity", "node"), field<std::string>(n, "activity", "node")});
  }
  if (field<std::size_t>(g, "N", "global") != emb.size()) throw DataError("embedding document: N does not match nodes");
  emb.reindex();
  return emb;
}

void write_map_json(std::ostream& out, const Embedding& emb, const DomainNetwork& net, const Provenance& prov) {
  Json doc;
  doc["provenance"] = provenance_json(prov);
  doc["global"] = Json{{"N", emb.size()}, {"R", emb.radius}, {"T", emb.temperature}};
  Json nodes = Json::array();
  std::set<std::string> activities;
  for (std::size_t i = 0; i < emb.size(); ++i) {
    nodes.push_back(node_json(emb, i));
    if (i < emb.meta.size()) activities.insert(emb.meta[i].activity);
  }
  doc["nodes"] = std::move(nodes);
  Json edges = Json::array();
  for (auto [u, v] : net.edges()) {
    if (!emb.find(net.label(u)) || !emb.find(net.label(v))) {
      throw DataError("edge endpoint '" + (emb.find(net.label(u)) ? net.label(v) : net.label(u)) +
                      "' is not embedded");
    }
    edges.push_back(Json::array({net.label(u), net.label(v)}));
  }
  doc["edges"] = std::move(edges);
  Json palette = Json::object();
  std::size_t next = 0;
  for (const auto& a : activities) {
    if (a == kUnknown) {
      palette[a] = kUnknownColor;
    } else {
      palette[a] = kPalette[next++ % std::size(kPalette)];
    }
  }
  doc["category_palette"] = std::move(palette);
  out << doc.dump(1) << '\n';
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw ConfigError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace webgeo
