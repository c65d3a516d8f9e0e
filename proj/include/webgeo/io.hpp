#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>

#include "webgeo/embedding.hpp"
#include "webgeo/hyperbolic.hpp"
#include "webgeo/network.hpp"

namespace webgeo {

std::string_view tool_version();

struct Provenance {
  std::string command;
  std::string config_digest;  // hex FNV-1a of the canonical configuration
  std::uint64_t seed = 0;
};

// "# webgeo <version> command=<c> config=<digest> seed=<s>"
std::string provenance_line(const Provenance& prov);

std::string digest_hex(std::string_view text);

// Embedding document (JSON): provenance, global parameters, one record per node.
void write_embedding_json(std::ostream& out, const Embedding& emb, const Provenance& prov,
                          const EmbeddingReport* report = nullptr);
Embedding read_embedding_json(std::istream& in);

// Rendering contract: provenance, global {N, R, T}, nodes, edges as label
// pairs and an activity -> color palette.
void write_map_json(std::ostream& out, const Embedding& emb, const DomainNetwork& net, const Provenance& prov);

// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace webgeo
