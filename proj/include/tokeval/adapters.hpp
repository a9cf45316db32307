#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tokeval/metrics.hpp"

namespace tokeval {

// TSV rows "id<TAB>ref phonemes<TAB>hyp phonemes", phonemes space-separated.
struct PhonemeTable {
  std::map<std::string,
           std::pair<std::vector<std::string>, std::vector<std::string>>>
      entries;
};

PhonemeTable load_phoneme_table(std::istream& in, const std::string& source = "");
PhonemeTable load_phoneme_table_file(const std::string& path);

// JSON-lines {"id": ..., "ref": [...], "hyp": [...]}; all vectors share one
// dimension and contain only finite values.
struct EmbeddingTable {
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>>
      entries;
  std::size_t dimension = 0;
};

EmbeddingTable load_embedding_table(std::istream& in,
                                    const std::string& source = "");
EmbeddingTable load_embedding_table_file(const std::string& path);
void write_embedding_table(const EmbeddingTable& table, std::ostream& out);

// Rule-table grapheme-to-phoneme stand-in for tests and plumbing; one
// placeholder symbol per grapheme, identity fallback. Not a real G2P.
std::vector<std::string> naive_g2p(const std::string& word);

// Fill the optional EvalPair fields; DataError names the first id a table
// does not cover.
void attach_phonemes(std::vector<EvalPair>& pairs, const PhonemeTable& table);
void attach_embeddings(std::vector<EvalPair>& pairs, const EmbeddingTable& table);
void attach_g2p_phonemes(std::vector<EvalPair>& pairs);

inline constexpr const char* kEmbedEndpointEnv = "TOKEVAL_EMBED_ENDPOINT";

struct EmbeddingClientConfig {
  std::string endpoint;  // http://host:port[/prefix]
  int timeout_seconds = 30;
  int max_retries = 3;  // transport errors only, exponential backoff
  std::size_t batch_size = 16;
  std::size_t max_in_flight = 4;
};

// POST {endpoint}/embed with {"texts": [...]}, expecting {"embeddings":
// [[...], ...]}, one vector per text in request order.
class EmbeddingClient {
 public:
  explicit EmbeddingClient(EmbeddingClientConfig config);

  std::vector<std::vector<double>> fetch(
      const std::vector<std::string>& texts) const;

 private:
  EmbeddingClientConfig config_;
  std::string base_;  // scheme://host:port
  std::string path_;  // request path, default "/embed"
};

std::vector<std::vector<double>> fetch_embeddings(
    const std::string& endpoint, const std::vector<std::string>& texts);

// Fetches reference and hypothesis embeddings for every pair.
void attach_fetched_embeddings(std::vector<EvalPair>& pairs,
                               const EmbeddingClient& client);

}  // namespace tokeval
