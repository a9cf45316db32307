#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "tokeval/adapters.hpp"
#include "tokeval/errors.hpp"

namespace tokeval {

EmbeddingClient::EmbeddingClient(EmbeddingClientConfig config)
    : config_(std::move(config)) {
  if (config_.endpoint.empty())
    throw UsageError("embedding endpoint is empty");
  if (config_.batch_size == 0 || config_.max_in_flight == 0)
    throw UsageError("embedding batch size and in-flight limit must be positive");
  std::string ep = config_.endpoint;
  while (!ep.empty() && ep.back() == '/') ep.pop_back();
  std::size_t scheme = ep.find("://");
  std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
  std::size_t slash = ep.find('/', host_start);
  if (slash == std::string::npos) {
    base_ = ep;
    path_ = "/embed";
  } else {
    base_ = ep.substr(0, slash);
    path_ = ep.substr(slash) + "/embed";
  }
}

std::vector<std::vector<double>> EmbeddingClient::fetch(
    const std::vector<std::string>& texts) const {
  if (texts.empty()) throw UsageError("no texts to embed");

  const std::size_t n_batches =
      (texts.size() + config_.batch_size - 1) / config_.batch_size;
  std::vector<std::vector<double>> results(texts.size());
  std::atomic<std::size_t> next_batch{0};
  std::mutex error_mutex;
  std::string error;

  auto record_error = [&](const std::string& message) {
    std::lock_guard<std::mutex> lock(error_mutex);
    if (error.empty()) error = message;
  };
  auto has_error = [&] {
    std::lock_guard<std::mutex> lock(error_mutex);
    return !error.empty();
  };

  auto worker = [&] {
    httplib::Client client(base_);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    client.set_write_timeout(config_.timeout_seconds, 0);

    while (true) {
      const std::size_t b = next_batch.fetch_add(1);
      if (b >= n_batches || has_error()) return;
      const std::size_t begin = b * config_.batch_size;
      const std::size_t end = std::min(begin + config_.batch_size, texts.size());

      nlohmann::json body;
      body["texts"] =
          std::vector<std::string>(texts.begin() + static_cast<std::ptrdiff_t>(begin),
                                   texts.begin() + static_cast<std::ptrdiff_t>(end));
      const std::string payload = body.dump();

      httplib::Result res;
      for (int attempt = 0;; ++attempt) {
        res = client.Post(path_, payload, "application/json");
        if (res) break;  // got a response; status handled below, never retried
        if (attempt >= config_.max_retries) {
          record_error("embedding endpoint transport error after " +
                       std::to_string(attempt) + " retries: " +
                       httplib::to_string(res.error()));
          return;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(100L << attempt));
      }

      if (res->status < 200 || res->status >= 300) {
        record_error("embedding endpoint returned status " +
                     std::to_string(res->status));
        return;
      }
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::exception& e) {
        record_error(std::string("embedding endpoint sent malformed JSON: ") +
                     e.what());
        return;
      }
      if (!doc.is_object() || !doc.contains("embeddings") ||
          !doc["embeddings"].is_array()) {
        record_error("embedding endpoint response lacks 'embeddings' array");
        return;
      }
      const nlohmann::json& embeddings = doc["embeddings"];
      if (embeddings.size() != end - begin) {
        record_error("embedding count mismatch: sent " +
                     std::to_string(end - begin) + " texts, got " +
                     std::to_string(embeddings.size()) + " vectors");
        return;
      }
      for (std::size_t i = 0; i < embeddings.size(); ++i) {
        const nlohmann::json& vec = embeddings[i];
        if (!vec.is_array() || vec.empty()) {
          record_error("embedding endpoint sent an empty vector");
          return;
        }
        std::vector<double> v;
        v.reserve(vec.size());
        for (const auto& x : vec) {
          if (!x.is_number() || !std::isfinite(x.get<double>())) {
            record_error("embedding endpoint sent a non-finite component");
            return;
          }
          v.push_back(x.get<double>());
        }
        results[begin + i] = std::move(v);
      }
    }
  };

  const std::size_t n_threads = std::min(config_.max_in_flight, n_batches);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }

  if (!error.empty()) throw DataError(error);
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].size() != results[0].size())
      throw DataError("embedding endpoint sent inconsistent dimensions (" +
                      std::to_string(results[0].size()) + " vs " +
                      std::to_string(results[i].size()) + ")");
  return results;
}

std::vector<std::vector<double>> fetch_embeddings(
    const std::string& endpoint, const std::vector<std::string>& texts) {
  EmbeddingClientConfig config;
  config.endpoint = endpoint;
  return EmbeddingClient(std::move(config)).fetch(texts);
}

void attach_fetched_embeddings(std::vector<EvalPair>& pairs,
                               const EmbeddingClient& client) {
  if (pairs.empty()) throw UsageError("no evaluation pairs to embed");
  std::vector<std::string> texts;
  texts.reserve(pairs.size() * 2);
  for (const EvalPair& pair : pairs) texts.push_back(pair.reference);
  for (const EvalPair& pair : pairs) texts.push_back(pair.hypothesis);
  std::vector<std::vector<double>> vectors = client.fetch(texts);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    pairs[i].ref_embedding = std::move(vectors[i]);
    pairs[i].hyp_embedding = std::move(vectors[pairs.size() + i]);
  }
}

}  // namespace tokeval
