#include "webgeo/cli.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "webgeo/association.hpp"
#include "webgeo/csv.hpp"
#include "webgeo/discovery.hpp"
#include "webgeo/embedding.hpp"
#include "webgeo/errors.hpp"
#include "webgeo/ingest.hpp"
#include "webgeo/io.hpp"
#include "webgeo/navigation.hpp"
#include "webgeo/network.hpp"
#include "webgeo/synthetic.hpp"
#include "webgeo/topology.hpp"

namespace webgeo::cli {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
  std::string command;
  std::string input, suffix_rules, fqdn_map, entities, cohosting, mergings, regions, edges, embedding;
  std::string out = "out";
  std::string level = "tld1";
  std::uint64_t seed = 0;
  std::optional<double> bin_width;
  std::optional<std::size_t> sample;
  std::size_t sweeps = 30;
  double tolerance = 1e-3;
  std::size_t candidates = 32;
  std::string delimiter = "comma";
  std::string contributor = "country";
  std::int64_t window = 60;
  bool private_suffixes = false;
  std::size_t nodes = 500;
  double gamma = 2.3;
  double temperature = 0.4;
  double mean_degree = 10.0;
};

char delimiter_of(const RunConfig& cfg) {
  if (cfg.delimiter == "comma" || cfg.delimiter == ",") return ',';
  if (cfg.delimiter == "tab" || cfg.delimiter == "\\t" || cfg.delimiter == "\t") return '\t';
  throw ConfigError("unknown delimiter '" + cfg.delimiter + "' (comma or tab)");
}

std::string default_suffix_rules() {
#ifdef WEBGEO_DATA_DIR
  return std::string(WEBGEO_DATA_DIR) + "/public_suffix_list.dat";
#else
  return "data/public_suffix_list.dat";
#endif
}

std::string file_digest(const std::string& path) {
  if (path.empty()) return "-";
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return digest_hex(ss.str());
}

// Digest over every setting that can change an artifact. Paths enter through
// their content so identical runs from other directories agree; --out is left
// out on purpose.
std::string config_digest(const RunConfig& c) {
  std::ostringstream os;
  os << "command=" << c.command << ";level=" << c.level << ";seed=" << c.seed
     << ";bins=" << (c.bin_width ? csv::number(*c.bin_width) : "default")
     << ";sample=" << (c.sample ? std::to_string(*c.sample) : "all") << ";sweeps=" << c.sweeps
     << ";tolerance=" << csv::number(c.tolerance) << ";candidates=" << c.candidates
     << ";delimiter=" << c.delimiter << ";contributor=" << c.contributor << ";window=" << c.window
     << ";private_suffixes=" << c.private_suffixes << ";nodes=" << c.nodes << ";gamma=" << csv::number(c.gamma)
     << ";temperature=" << csv::number(c.temperature) << ";mean_degree=" << csv::number(c.mean_degree);
  for (const auto* p : {&c.input, &c.suffix_rules, &c.fqdn_map, &c.entities, &c.cohosting, &c.mergings,
                        &c.regions, &c.edges}) {
    os << ";" << file_digest(*p);
  }
  // commands reading an embedding depend on its content too
  if (c.command == "analyze" || c.command == "route" || c.command == "export-map") {
    const std::string emb =
        c.embedding.empty() ? (fs::path(c.out) / ("embedding-" + c.level + ".json")).string() : c.embedding;
    os << ";" << (fs::is_regular_file(emb) ? file_digest(emb) : "-");
  }
  return digest_hex(os.str());
}

std::ifstream open_input(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open " + path);
  return f;
}

class Session {
 public:
  Session(RunConfig cfg, std::ostream& log) : cfg_(std::move(cfg)), log_(log) {
    for (const auto* p : {&cfg_.input, &cfg_.suffix_rules, &cfg_.fqdn_map, &cfg_.entities, &cfg_.cohosting,
                          &cfg_.mergings, &cfg_.regions, &cfg_.edges}) {
      if (!p->empty() && !fs::is_regular_file(*p)) throw ConfigError("input file not found: " + *p);
    }
    level_ = parse_level(cfg_.level);
    delim_ = delimiter_of(cfg_);
    prov_ = {cfg_.command, config_digest(cfg_), cfg_.seed};
  }

  const RunConfig& cfg() const { return cfg_; }
  Level level() const { return level_; }
  const Provenance& provenance() const { return prov_; }
  std::string header() const { return provenance_line(prov_) + "\n"; }

  const ParseResult& records() {
    if (!records_) {
      if (cfg_.input.empty()) throw ConfigError(cfg_.command + " needs --input");
      ColumnSchema schema;
      schema.delimiter = delim_;
      static const std::set<std::string, std::less<>> builtin = {"country", "first_party", "request_type"};
      if (!builtin.count(cfg_.contributor)) schema.keep_columns.push_back(cfg_.contributor);
      auto f = open_input(cfg_.input);
      records_ = parse_interactions(f, schema);
      log_ << "records=" << records_->records.size() << " malformed=" << records_->malformed
           << " invalid_ip=" << records_->invalid_ip << '\n';
    }
    return *records_;
  }

  const Tld1Map& tld1_map() {
    if (!tld1_map_) {
      auto rules = PublicSuffixRules::load(cfg_.suffix_rules, !cfg_.private_suffixes);
      if (!cfg_.fqdn_map.empty()) {
        auto f = open_input(cfg_.fqdn_map);
        tld1_map_ = Tld1Map::load_fqdn_table(f, delim_, std::move(rules));
      } else {
        tld1_map_ = Tld1Map(std::move(rules));
      }
    }
    return *tld1_map_;
  }

  const Metadata& metadata() {
    if (!meta_) {
      std::optional<std::ifstream> e, c, m;
      if (!cfg_.entities.empty()) e = open_input(cfg_.entities);
      if (!cfg_.cohosting.empty()) c = open_input(cfg_.cohosting);
      if (!cfg_.mergings.empty()) m = open_input(cfg_.mergings);
      meta_ = load_metadata(e ? &*e : nullptr, c ? &*c : nullptr, m ? &*m : nullptr, delim_);
      for (const auto& w : meta_->warnings) log_ << "warning: " << w << '\n';
      entity_map_ = EntityMap(meta_->entities);
    }
    return *meta_;
  }

  const EntityMap& entity_map() {
    metadata();
    return entity_map_;
  }

  DomainNetwork network(Level level, BuildStats* stats = nullptr) {
    if (!cfg_.edges.empty()) {
      auto f = open_input(cfg_.edges);
      auto net = read_edge_list(f, level);
      for (NodeId u = 0; u < net.size(); ++u) {
        if (level == Level::tld1) {
          if (const auto* rec = entity_map().find(net.label(u))) net.set_meta(u, {rec->entity, rec->activity});
        }
      }
      if (!net.is_connected()) net = net.largest_component();
      return net;
    }
    auto tld1 = build_tld1_network(records().records, tld1_map(), entity_map(), stats);
    if (level == Level::tld1) return tld1;
    return project_entity_network(tld1, entity_map());
  }

  std::string embedding_path() const {
    if (!cfg_.embedding.empty()) return cfg_.embedding;
    return (fs::path(cfg_.out) / ("embedding-" + std::string(to_string(level_)) + ".json")).string();
  }

  Embedding embedding() {
    const std::string path = embedding_path();
    if (!fs::is_regular_file(path)) {
      throw ConfigError("no embedding artifact at " + path + "; run embed first");
    }
    auto f = open_input(path);
    auto emb = read_embedding_json(f);
    if (emb.level != level_) throw ConfigError("embedding level does not match --level");
    return emb;
  }

  void emit(const std::string& name, std::string content) { artifacts_[name] = std::move(content); }

  void flush() {
    for (const auto& [name, content] : artifacts_) write_file_atomic(fs::path(cfg_.out) / name, content);
  }

 private:
  RunConfig cfg_;
  std::ostream& log_;
  Level level_ = Level::tld1;
  char delim_ = ',';
  Provenance prov_;
  std::optional<ParseResult> records_;
  std::optional<Tld1Map> tld1_map_;
  std::optional<Metadata> meta_;
  EntityMap entity_map_;
  std::map<std::string, std::string> artifacts_;
};

std::string curve_csv(const std::string& header, const std::vector<CurvePoint>& pts) {
  std::ostringstream os;
  os << header << "x,y\n";
  for (const auto& p : pts) os << csv::number(p.x) << ',' << csv::number(p.y) << '\n';
  return os.str();
}

std::string level_name(Level l) { return std::string(to_string(l)); }

int cmd_build(Session& s) {
  BuildStats stats;
  auto tld1 = s.network(Level::tld1, &stats);
  auto entity = project_entity_network(tld1, s.entity_map());
  for (const auto* net : {&tld1, &entity}) {
    std::ostringstream os;
    write_edge_list(os, *net, s.header());
    s.emit("edges-" + level_name(net->level()) + ".tsv", os.str());
  }
  const auto& rec = s.records();
  auto coh = derive_cohosting_pairs(rec.records, s.tld1_map(), s.entity_map());
  {
    std::ostringstream os;
    os << s.header() << "domain_a,domain_b,entity_a,entity_b,ip\n";
    for (const auto& p : coh.pairs.pairs()) {
      csv::write_row(os, {p.a, p.b, p.entity_a.value_or(""), p.entity_b.value_or(""), p.ip.value_or("")}, ',');
    }
    s.emit("cohosting-derived.csv", os.str());
  }
  std::ostringstream os;
  os << s.header() << "key,value\n"
     << "records," << rec.records.size() << "\nmalformed_rows," << rec.malformed << "\ninvalid_ip," << rec.invalid_ip
     << "\nqualifying_records," << stats.qualifying << "\ntld1_nodes_before_component,"
     << stats.nodes_before_component << "\ntld1_nodes," << tld1.size() << "\ntld1_edges," << tld1.edge_count()
     << "\nentity_nodes," << entity.size() << "\nentity_edges," << entity.edge_count()
     << "\nentity_discarded_nodes," << entity.discarded_nodes() << "\ncohosting_pairs," << coh.pairs.size()
     << "\nrecords_with_ip," << coh.records_with_ip << '\n';
  s.emit("build-report.csv", os.str());
  return kOk;
}

int cmd_stats(Session& s) {
  std::vector<DomainNetwork> nets;
  if (!s.cfg().edges.empty()) {
    nets.push_back(s.network(s.level()));
  } else {
    nets.push_back(s.network(Level::tld1));
    nets.push_back(project_entity_network(nets.front(), s.entity_map()));
  }
  std::ostringstream table;
  table << s.header()
        << "level,N,edges,mean_degree,max_degree,mean_clustering,gamma,gamma_k_min,gamma_reliable,"
           "mean_distance,max_distance\n";
  for (const auto& net : nets) {
    const auto p = topology_profile(net);
    const std::string lv = level_name(net.level());
    table << lv << ',' << p.n_nodes << ',' << p.n_edges << ',' << csv::number(p.mean_degree) << ','
          << p.max_degree << ',' << csv::number(p.mean_clustering) << ','
          << (p.gamma ? csv::number(*p.gamma) : std::string()) << ',' << p.gamma_k_min << ','
          << (p.gamma_reliable ? 1 : 0) << ',' << csv::number(p.mean_distance) << ',' << p.max_distance << '\n';
    s.emit(lv + "-degree_distribution.csv", curve_csv(s.header(), p.degree_distribution));
    s.emit(lv + "-clustering_by_degree.csv", curve_csv(s.header(), p.clustering_by_degree));
    s.emit(lv + "-neighbor_degree_by_degree.csv", curve_csv(s.header(), p.neighbor_degree_by_degree));
    s.emit(lv + "-distance_distribution.csv", curve_csv(s.header(), p.distance_distribution));
    s.emit(lv + "-betweenness_by_degree.csv", curve_csv(s.header(), p.betweenness_by_degree));
  }
  s.emit("topology.csv", table.str());

  if (!s.cfg().input.empty()) {
    const auto curve = discovery_curve(s.records().records, s.cfg().contributor, s.tld1_map());
    std::ostringstream os;
    os << s.header() << "# contributor_key=" << s.cfg().contributor << '\n'
       << "contributors,contributor,nodes,links\n";
    for (std::size_t i = 0; i < curve.contributors.size(); ++i) {
      os << i + 1 << ',' << csv::quote(curve.contributors[i], ',') << ',' << csv::number(curve.nodes[i]) << ','
         << csv::number(curve.links[i]) << '\n';
    }
    s.emit("discovery.csv", os.str());
  }
  if (!s.cfg().regions.empty()) {
    auto f = open_input(s.cfg().regions);
    const auto regions = load_region_map(f, delimiter_of(s.cfg()));
    const auto ov = regional_overlap(s.records().records, regions, s.tld1_map(), s.entity_map());
    auto matrix = [&](const std::vector<std::vector<double>>& m) {
      std::ostringstream os;
      os << s.header() << "# unmapped_records=" << ov.unmapped_records << '\n' << "region";
      for (const auto& r : ov.regions) os << ',' << csv::quote(r, ',');
      os << '\n';
      for (std::size_t i = 0; i < ov.regions.size(); ++i) {
        os << csv::quote(ov.regions[i], ',');
        for (double v : m[i]) os << ',' << csv::number(v);
        os << '\n';
      }
      return os.str();
    };
    s.emit("overlap-nodes.csv", matrix(ov.node_overlap));
    s.emit("overlap-links.csv", matrix(ov.link_overlap));
  }
  return kOk;
}

int cmd_embed(Session& s, std::ostream& err) {
  const auto net = s.network(s.level());
  EmbeddingConfig ec;
  ec.seed = s.cfg().seed;
  ec.sweeps = s.cfg().sweeps;
  ec.tolerance = s.cfg().tolerance;
  ec.candidate_count = s.cfg().candidates;
  EmbeddingReport report;
  const auto emb = infer_embedding(net, ec, &report);
  if (report.saturated_pairs > 0) {
    err << "warning: " << report.saturated_pairs << " pair terms hit the exponent cap; likelihood is a bounded penalty\n";
  }
  std::ostringstream os;
  write_embedding_json(os, emb, s.provenance(), &report);
  s.emit("embedding-" + level_name(s.level()) + ".json", os.str());
  if (!emb.converged) {
    s.flush();
    std::ostringstream msg;
    msg << "calibration did not converge (degree error " << csv::number(report.calibration.max_relative_error)
        << ", clustering " << csv::number(report.model_clustering) << " vs "
        << csv::number(report.observed_clustering) << "); best-effort embedding written";
    err << "error category=convergence command=embed: " << msg.str() << '\n';
    return kConvergence;
  }
  return kOk;
}

int cmd_analyze(Session& s, std::ostream& err) {
  const auto emb = s.embedding();
  const auto& meta = s.metadata();
  const auto binning = make_binning(emb, s.cfg().bin_width);
  const std::string lv = level_name(s.level());

  std::vector<std::pair<AssociationKind, PositiveSet>> sets;
  if (!s.cfg().entities.empty()) sets.emplace_back(AssociationKind::grouping, grouping_positives(emb, s.entity_map()));
  if (!s.cfg().mergings.empty()) {
    sets.emplace_back(AssociationKind::merging, positives_from_pairs(emb, meta.merging, s.entity_map()));
  }
  if (!s.cfg().cohosting.empty()) {
    sets.emplace_back(AssociationKind::cohosting, positives_from_pairs(emb, meta.cohosting, s.entity_map()));
  } else if (!s.cfg().input.empty()) {
    const auto coh = derive_cohosting_pairs(s.records().records, s.tld1_map(), s.entity_map());
    sets.emplace_back(AssociationKind::cohosting, positives_from_pairs(emb, coh.pairs, s.entity_map()));
  }

  std::ostringstream summary;
  summary << s.header() << "kind,total_pairs,positives,baseline,bin_width,bins,suppressed_bins,dropped_positives,spearman\n";
  std::size_t produced = 0;
  for (const auto& [kind, set] : sets) {
    const std::string name(to_string(kind));
    if (set.pairs.empty()) {
      err << "warning: no " << name << " positives among embedded nodes; curve skipped\n";
      continue;
    }
    const auto curve = binned_association_curve(emb, set, kind, binning);
    std::ostringstream os;
    os << s.header();
    write_curve_csv(os, curve);
    s.emit(name + "-" + lv + ".csv", os.str());

    std::ostringstream rel;
    rel << s.header();
    write_relation_csv(rel, relation_histogram(emb, set, s.entity_map(), binning));
    s.emit("relations-" + name + "-" + lv + ".csv", rel.str());

    std::vector<double> x, y;
    for (const auto& b : curve.bins) {
      if (!b.probability) continue;
      x.push_back(0.5 * (b.left + b.right));
      y.push_back(*b.probability);
    }
    const double rho = x.size() >= 2 ? spearman(x, y) : std::numeric_limits<double>::quiet_NaN();
    summary << name << ',' << curve.total_pairs << ',' << curve.total_positives << ','
            << csv::number(curve.baseline) << ',' << csv::number(curve.bin_width) << ',' << curve.bins.size() << ','
            << curve.suppressed_bins.size() << ',' << curve.dropped_positives << ',' << csv::number(rho) << '\n';
    ++produced;
  }
  if (produced == 0) {
    throw DataError("no association curve could be computed (supply --entities, --mergings or --cohosting)");
  }
  s.emit("analyze-" + lv + ".csv", summary.str());
  return kOk;
}

int cmd_route(Session& s) {
  const auto net = s.network(s.level());
  const auto emb = s.embedding();
  PairSelection sel;
  sel.sample = s.cfg().sample;
  sel.seed = s.cfg().seed;
  const auto rep = navigability_report(net, emb, sel);
  std::ostringstream os;
  os << s.header();
  write_route_csv(os, net, rep);
  s.emit("route-" + level_name(s.level()) + ".csv", os.str());
  return kOk;
}

int cmd_paths(Session& s) {
  PathOptions opt;
  opt.level = s.level();
  opt.window_gap = s.cfg().window;
  const auto ex = extract_interaction_paths(s.records().records, s.tld1_map(), s.entity_map(), opt);
  const auto net = s.network(s.level());
  const auto prof = path_profile(ex.paths, net);
  const std::string lv = level_name(s.level());
  {
    std::ostringstream os;
    os << s.header() << "# window_gap=" << opt.window_gap << " windows=" << ex.windows
       << " chains=" << ex.paths.size() << " distinct=" << ex.distinct
       << " truncated_windows=" << ex.truncated_windows << '\n';
    write_path_profile_csv(os, prof);
    s.emit("paths-" + lv + ".csv", os.str());
  }
  std::ostringstream os;
  os << s.header() << "first_party\ttimestamp\thops\tnodes\n";
  for (const auto& p : ex.paths) {
    os << p.first_party << '\t' << p.timestamp << '\t' << p.hops() << '\t';
    for (std::size_t i = 0; i < p.nodes.size(); ++i) os << (i ? " " : "") << p.nodes[i];
    os << '\n';
  }
  s.emit("paths-" + lv + "-chains.tsv", os.str());
  return kOk;
}

int cmd_synth(Session& s) {
  const auto syn = generate_synthetic(s.cfg().nodes, s.cfg().gamma, s.cfg().temperature, s.cfg().mean_degree,
                                      s.cfg().seed);
  std::ostringstream edges;
  write_edge_list(edges, syn.network, s.header() + "# generated_nodes=" + std::to_string(syn.generated_nodes) + "\n");
  s.emit("synthetic-edges.tsv", edges.str());
  std::ostringstream truth;
  write_embedding_json(truth, syn.truth, s.provenance());
  s.emit("synthetic-truth.json", truth.str());
  return kOk;
}

int cmd_export_map(Session& s) {
  const auto net = s.network(s.level());
  const auto emb = s.embedding();
  std::ostringstream os;
  write_map_json(os, emb, net, s.provenance());
  s.emit("map-" + level_name(s.level()) + ".json", os.str());
  return kOk;
}

std::string one_line(std::string text) {
  for (char& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

std::string_view category_name(Error::Category c) {
  switch (c) {
    case Error::Category::config: return "config";
    case Error::Category::data: return "data";
    case Error::Category::convergence: return "convergence";
  }
  return "data";
}

int exit_code(Error::Category c) {
  switch (c) {
    case Error::Category::config: return kConfig;
    case Error::Category::data: return kData;
    case Error::Category::convergence: return kConvergence;
  }
  return kData;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  cfg.suffix_rules = default_suffix_rules();
  CLI::App app{"Third-party domain networks in the hyperbolic plane", "webgeo"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"build", "edge lists of the TLD+1 and legal-entity networks"},
      {"stats", "topology summary, curves, discovery curve and regional overlaps"},
      {"embed", "maximum-likelihood hyperbolic embedding"},
      {"analyze", "grouping, merging and co-hosting probability curves"},
      {"route", "greedy-routing navigability"},
      {"paths", "interaction-path extraction and profile"},
      {"synth", "synthetic hyperbolic network with ground-truth coordinates"},
      {"export-map", "JSON document for the map viewer"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--input", cfg.input, "interaction log (delimited, with header)");
    sub->add_option("--level", cfg.level, "aggregation level")->check(CLI::IsMember({"tld1", "entity"}));
    sub->add_option("--seed", cfg.seed, "seed for every random draw");
    sub->add_option("--bins", cfg.bin_width, "distance bin width (default: max distance / 40)");
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--suffix-rules", cfg.suffix_rules, "public-suffix rule file");
    sub->add_option("--fqdn-map", cfg.fqdn_map, "explicit fqdn,tld1 table consulted before the rules");
    sub->add_option("--entities", cfg.entities, "tld1,entity,activity table");
    sub->add_option("--cohosting", cfg.cohosting, "co-hosting pair table");
    sub->add_option("--mergings", cfg.mergings, "future-merging pair table");
    sub->add_option("--regions", cfg.regions, "country,region table");
    sub->add_option("--sample", cfg.sample, "route this many random ordered pairs instead of all");
    sub->add_option("--edges", cfg.edges, "read the network from an edge list instead of --input");
    sub->add_option("--embedding", cfg.embedding, "embedding document (default: <out>/embedding-<level>.json)");
    sub->add_option("--sweeps", cfg.sweeps, "maximum refinement sweeps");
    sub->add_option("--tolerance", cfg.tolerance, "log-likelihood gain that ends refinement");
    sub->add_option("--candidates", cfg.candidates, "candidate angles per node visit");
    sub->add_option("--delimiter", cfg.delimiter, "comma or tab");
    sub->add_option("--contributor", cfg.contributor, "contributor column for the discovery curve");
    sub->add_option("--window", cfg.window, "page-visit inactivity gap in seconds");
    sub->add_flag("--private-suffixes", cfg.private_suffixes, "also honor the private public-suffix section");
    sub->add_option("--nodes", cfg.nodes, "synthetic node count");
    sub->add_option("--gamma", cfg.gamma, "synthetic degree exponent");
    sub->add_option("--temperature", cfg.temperature, "synthetic temperature");
    sub->add_option("--mean-degree", cfg.mean_degree, "synthetic mean degree");
  }

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error category=config command=-: " << one_line(e.what()) << '\n';
    return kConfig;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

  try {
    Session s(cfg, err);
    int code = kOk;
    if (cfg.command == "build") code = cmd_build(s);
    else if (cfg.command == "stats") code = cmd_stats(s);
    else if (cfg.command == "embed") code = cmd_embed(s, err);
    else if (cfg.command == "analyze") code = cmd_analyze(s, err);
    else if (cfg.command == "route") code = cmd_route(s);
    else if (cfg.command == "paths") code = cmd_paths(s);
    else if (cfg.command == "synth") code = cmd_synth(s);
    else if (cfg.command == "export-map") code = cmd_export_map(s);
    if (code == kOk) s.flush();
    return code;
  } catch (const Error& e) {
    err << "error category=" << category_name(e.category()) << " command=" << cfg.command << ": "
        << one_line(e.what()) << '\n';
    return exit_code(e.category());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error category=config command=" << cfg.command << ": " << one_line(e.what()) << '\n';
    return kConfig;
  }
}

}  // namespace webgeo::cli
