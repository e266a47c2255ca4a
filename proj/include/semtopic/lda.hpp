#pragma once

/**
 * Latent Dirichlet Allocation by collapsed Gibbs sampling.
 *
 * Notation used in comments:
 *   n(d,k)  tokens of document d assigned to topic k
 *   n(k,w)  occurrences of term w assigned to topic k
 *   n(k)    tokens assigned to topic k
 *   V       vocabulary size, K number of topics
 *
 * Every sweep visits each token in corpus order, removes it from the counts
 * and redraws its topic from
 *
 *   p(z = k | rest) ∝ (n(d,k) + alpha) * (n(k,w) + beta) / (n(k) + V * beta)
 *
 * Estimates after the last sweep:
 *   topic_term[k][w] = (n(k,w) + beta) / (n(k) + V * beta)
 *   doc_topic[d][k]  = (n(d,k) + alpha) / (len(d) + K * alpha)
 *
 * Randomness comes from std::mt19937_64 (fully specified by the standard);
 * uniform reals use the top 53 bits, so a seed reproduces bit-identical
 * assignments on every conforming platform.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "semtopic/error.hpp"
#include "semtopic/lda_config.hpp"
#include "semtopic/preprocess.hpp"

namespace semtopic {

inline constexpr std::string_view kRngAlgorithm = "mt19937_64/u53-v1";

struct Corpus {
  std::vector<std::string> doc_ids;
  std::vector<std::string> vocab;      // first-occurrence order
  std::vector<std::vector<int>> docs;  // term ids
  std::size_t total_tokens = 0;
};

inline Corpus build_corpus(const std::vector<TokenizedDoc>& docs) {
  Corpus c;
  std::unordered_map<std::string, int> ids;
  for (const auto& d : docs) {
    c.doc_ids.push_back(d.document_id);
    auto& row = c.docs.emplace_back();
    row.reserve(d.tokens.size());
    for (const auto& t : d.tokens) {
      auto [it, inserted] = ids.emplace(t, static_cast<int>(c.vocab.size()));
      if (inserted) c.vocab.push_back(t);
      row.push_back(it->second);
    }
    c.total_tokens += d.tokens.size();
  }
  return c;
}

class GibbsSampler {
 public:
  GibbsSampler(Corpus corpus, const LdaConfig& cfg)
      : corpus_(std::move(corpus)),
        cfg_(cfg),
        K_(static_cast<std::size_t>(cfg.num_topics)),
        V_(corpus_.vocab.size()),
        rng_(cfg.seed),
        ndk_(corpus_.docs.size(), std::vector<int>(K_, 0)),
        nkw_(K_, std::vector<int>(V_, 0)),
        nk_(K_, 0),
        z_(corpus_.docs.size()) {
    cfg_.validate();
    for (std::size_t d = 0; d < corpus_.docs.size(); ++d) {
      z_[d].resize(corpus_.docs[d].size());
      for (std::size_t i = 0; i < corpus_.docs[d].size(); ++i) {
        const auto k = std::min<std::size_t>(static_cast<std::size_t>(uniform01() * static_cast<double>(K_)), K_ - 1);
        z_[d][i] = static_cast<int>(k);
        add(d, corpus_.docs[d][i], k);
      }
    }
    probs_.resize(K_);
  }

  void sweep() {
    const double vbeta = static_cast<double>(V_) * cfg_.beta;
    for (std::size_t d = 0; d < corpus_.docs.size(); ++d) {
      const auto& doc = corpus_.docs[d];
      for (std::size_t i = 0; i < doc.size(); ++i) {
        const int w = doc[i];
        remove(d, w, static_cast<std::size_t>(z_[d][i]));
        double total = 0.0;
        for (std::size_t k = 0; k < K_; ++k) {
          total += (ndk_[d][k] + cfg_.alpha) * (nkw_[k][w] + cfg_.beta) / (nk_[k] + vbeta);
          probs_[k] = total;
        }
        const double u = uniform01() * total;
        std::size_t k = 0;
        while (k + 1 < K_ && probs_[k] <= u) ++k;
        z_[d][i] = static_cast<int>(k);
        add(d, w, k);
      }
    }
    ++sweeps_;
  }

  // Normalized full conditional of token i of document d, with that token's
  // own assignment excluded from the counts.
  std::vector<double> full_conditional(std::size_t d, std::size_t i) const {
    const int w = corpus_.docs.at(d).at(i);
    const auto own = static_cast<std::size_t>(z_[d][i]);
    const double vbeta = static_cast<double>(V_) * cfg_.beta;
    std::vector<double> p(K_);
    double total = 0.0;
    for (std::size_t k = 0; k < K_; ++k) {
      const int excl = k == own ? 1 : 0;
      p[k] = (ndk_[d][k] - excl + cfg_.alpha) * (nkw_[k][w] - excl + cfg_.beta) / (nk_[k] - excl + vbeta);
      total += p[k];
    }
    for (auto& x : p) x /= total;
    return p;
  }

  // The count tables agree with the assignments: per-document topic counts
  // sum to document length, per-topic term counts sum to the topic total, and
  // every table equals a recount from z.
  bool counts_consistent() const {
    std::vector<std::vector<int>> ndk(corpus_.docs.size(), std::vector<int>(K_, 0));
    std::vector<std::vector<int>> nkw(K_, std::vector<int>(V_, 0));
    std::vector<int> nk(K_, 0);
    for (std::size_t d = 0; d < corpus_.docs.size(); ++d) {
      long row = 0;
      for (std::size_t k = 0; k < K_; ++k) row += ndk_[d][k];
      if (row != static_cast<long>(corpus_.docs[d].size())) return false;
      for (std::size_t i = 0; i < corpus_.docs[d].size(); ++i) {
        const auto k = static_cast<std::size_t>(z_[d][i]);
        ++ndk[d][k];
        ++nkw[k][corpus_.docs[d][i]];
        ++nk[k];
      }
    }
    for (std::size_t k = 0; k < K_; ++k) {
      long row = 0;
      for (std::size_t w = 0; w < V_; ++w) row += nkw_[k][w];
      if (row != nk_[k]) return false;
    }
    return ndk == ndk_ && nkw == nkw_ && nk == nk_;
  }

  std::vector<std::vector<double>> topic_term_weights() const {
    const double vbeta = static_cast<double>(V_) * cfg_.beta;
    std::vector<std::vector<double>> phi(K_, std::vector<double>(V_));
    for (std::size_t k = 0; k < K_; ++k)
      for (std::size_t w = 0; w < V_; ++w) phi[k][w] = (nkw_[k][w] + cfg_.beta) / (nk_[k] + vbeta);
    return phi;
  }

  std::vector<std::vector<double>> doc_topic_weights() const {
    const double kalpha = static_cast<double>(K_) * cfg_.alpha;
    std::vector<std::vector<double>> theta(corpus_.docs.size(), std::vector<double>(K_));
    for (std::size_t d = 0; d < corpus_.docs.size(); ++d) {
      const double len = static_cast<double>(corpus_.docs[d].size());
      for (std::size_t k = 0; k < K_; ++k) theta[d][k] = (ndk_[d][k] + cfg_.alpha) / (len + kalpha);
    }
    return theta;
  }

  const Corpus& corpus() const { return corpus_; }
  const LdaConfig& config() const { return cfg_; }
  const std::vector<std::vector<int>>& assignments() const { return z_; }
  const std::vector<std::vector<int>>& doc_topic_counts() const { return ndk_; }
  const std::vector<std::vector<int>>& topic_term_counts() const { return nkw_; }
  const std::vector<int>& topic_counts() const { return nk_; }
  int sweeps() const { return sweeps_; }

 private:
  double uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  void add(std::size_t d, int w, std::size_t k) {
    ++ndk_[d][k];
    ++nkw_[k][w];
    ++nk_[k];
  }
  void remove(std::size_t d, int w, std::size_t k) {
    --ndk_[d][k];
    --nkw_[k][w];
    --nk_[k];
  }

  Corpus corpus_;
  LdaConfig cfg_;
  std::size_t K_;
  std::size_t V_;
  std::mt19937_64 rng_;
  std::vector<std::vector<int>> ndk_;
  std::vector<std::vector<int>> nkw_;
  std::vector<int> nk_;
  std::vector<std::vector<int>> z_;
  std::vector<double> probs_;
  int sweeps_ = 0;
};

struct TopicModel {
  LdaConfig config;
  std::string rng_algorithm = std::string(kRngAlgorithm);
  std::vector<std::string> doc_ids;
  std::vector<std::string> vocab;
  std::vector<std::vector<double>> topic_term_weights;  // K x V
  std::vector<std::vector<double>> doc_topic_weights;   // D x K
  std::vector<std::vector<int>> assignments;
  std::vector<int> topic_counts;
  std::size_t total_tokens = 0;

  std::size_t num_topics() const { return topic_term_weights.size(); }
};

using SweepObserver = std::function<void(const GibbsSampler&)>;

inline TopicModel fit(const std::vector<TokenizedDoc>& docs, const LdaConfig& cfg, Warnings* warnings = nullptr,
                      const SweepObserver& on_sweep = {}) {
  cfg.validate();
  if (docs.empty()) throw InputError("cannot fit a topic model on an empty corpus");
  Corpus corpus = build_corpus(docs);
  if (corpus.total_tokens == 0) throw InputError("cannot fit a topic model: the corpus has no tokens");
  if (static_cast<std::size_t>(cfg.num_topics) > corpus.total_tokens && warnings)
    warnings->add("num_topics (" + std::to_string(cfg.num_topics) + ") exceeds the token count (" +
                  std::to_string(corpus.total_tokens) + ")");

  GibbsSampler sampler(std::move(corpus), cfg);
  std::vector<std::vector<double>> phi_sum;
  std::vector<std::vector<double>> theta_sum;
  int averaged = 0;
  const auto accumulate = [](std::vector<std::vector<double>>& acc, const std::vector<std::vector<double>>& x) {
    if (acc.empty()) {
      acc = x;
      return;
    }
    for (std::size_t r = 0; r < x.size(); ++r)
      for (std::size_t c = 0; c < x[r].size(); ++c) acc[r][c] += x[r][c];
  };
  for (int it = 0; it < cfg.iterations; ++it) {
    sampler.sweep();
    if (on_sweep) on_sweep(sampler);
    if (cfg.average_samples && it >= cfg.burn_in) {
      accumulate(phi_sum, sampler.topic_term_weights());
      accumulate(theta_sum, sampler.doc_topic_weights());
      ++averaged;
    }
  }

  TopicModel model;
  model.config = cfg;
  model.doc_ids = sampler.corpus().doc_ids;
  model.vocab = sampler.corpus().vocab;
  model.assignments = sampler.assignments();
  model.topic_counts = sampler.topic_counts();
  model.total_tokens = sampler.corpus().total_tokens;
  if (averaged > 0) {
    for (auto* m : {&phi_sum, &theta_sum})
      for (auto& row : *m)
        for (auto& x : row) x /= averaged;
    model.topic_term_weights = std::move(phi_sum);
    model.doc_topic_weights = std::move(theta_sum);
  } else {
    model.topic_term_weights = sampler.topic_term_weights();
    model.doc_topic_weights = sampler.doc_topic_weights();
  }
  return model;
}

struct WeightedTerm {
  std::string term;
  double weight = 0.0;

  friend bool operator==(const WeightedTerm&, const WeightedTerm&) = default;
};

// The n heaviest terms of topic k; equal weights order by term.
inline std::vector<WeightedTerm> top_terms(const TopicModel& model, std::size_t k, std::size_t n) {
  if (k >= model.num_topics())
    throw IndexError("topic " + std::to_string(k) + " out of range (model has " +
                     std::to_string(model.num_topics()) + " topics)");
  const auto& row = model.topic_term_weights[k];
  std::vector<std::size_t> idx(row.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  const std::size_t take = std::min(n, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (row[a] != row[b]) return row[a] > row[b];
                      return model.vocab[a] < model.vocab[b];
                    });
  std::vector<WeightedTerm> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back({model.vocab[idx[i]], row[idx[i]]});
  return out;
}

struct Perplexity {
  double value = 0.0;
  std::size_t scored_tokens = 0;
  std::size_t skipped_tokens = 0;  // not in the model vocabulary
};

// exp(-sum log p(w|d) / N), p(w|d) = sum_k doc_topic[d][k] * topic_term[k][w].
// Documents pair with the model's documents by position.
inline Perplexity perplexity(const TopicModel& model, const std::vector<TokenizedDoc>& corpus) {
  if (corpus.size() != model.doc_topic_weights.size())
    throw ValidationError("perplexity: corpus has " + std::to_string(corpus.size()) + " documents, model has " +
                          std::to_string(model.doc_topic_weights.size()));
  std::unordered_map<std::string, std::size_t> ids;
  for (std::size_t i = 0; i < model.vocab.size(); ++i) ids.emplace(model.vocab[i], i);
  Perplexity out;
  double log_sum = 0.0;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (const auto& t : corpus[d].tokens) {
      const auto it = ids.find(t);
      if (it == ids.end()) {
        ++out.skipped_tokens;
        continue;
      }
      double p = 0.0;
      for (std::size_t k = 0; k < model.num_topics(); ++k)
        p += model.doc_topic_weights[d][k] * model.topic_term_weights[k][it->second];
      log_sum += std::log(p);
      ++out.scored_tokens;
    }
  }
  if (out.scored_tokens == 0) throw InputError("perplexity is undefined: no token of the corpus is in the model");
  out.value = std::exp(-log_sum / static_cast<double>(out.scored_tokens));
  return out;
}

inline nlohmann::json to_json(const TopicModel& m) {
  const auto& c = m.config;
  return {
      {"format", "semtopic-model/1"},
      {"config",
       {{"num_topics", c.num_topics},
        {"alpha", c.alpha},
        {"beta", c.beta},
        {"iterations", c.iterations},
        {"burn_in", c.burn_in},
        {"seed", c.seed},
        {"top_n", c.top_n},
        {"average_samples", c.average_samples}}},
      {"rng", m.rng_algorithm},
      {"total_tokens", m.total_tokens},
      {"doc_ids", m.doc_ids},
      {"vocab", m.vocab},
      {"topic_counts", m.topic_counts},
      {"topic_term_weights", m.topic_term_weights},
      {"doc_topic_weights", m.doc_topic_weights},
      {"assignments", m.assignments},
  };
}

inline TopicModel model_from_json(const nlohmann::json& j) {
  try {
    TopicModel m;
    const auto& c = j.at("config");
    m.config.num_topics = c.at("num_topics").get<int>();
    m.config.alpha = c.at("alpha").get<double>();
    m.config.beta = c.at("beta").get<double>();
    m.config.iterations = c.at("iterations").get<int>();
    m.config.burn_in = c.at("burn_in").get<int>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.config.top_n = c.at("top_n").get<int>();
    m.config.average_samples = c.value("average_samples", false);
    m.rng_algorithm = j.at("rng").get<std::string>();
    m.total_tokens = j.at("total_tokens").get<std::size_t>();
    m.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
    m.vocab = j.at("vocab").get<std::vector<std::string>>();
    m.topic_counts = j.at("topic_counts").get<std::vector<int>>();
    m.topic_term_weights = j.at("topic_term_weights").get<std::vector<std::vector<double>>>();
    m.doc_topic_weights = j.at("doc_topic_weights").get<std::vector<std::vector<double>>>();
    m.assignments = j.at("assignments").get<std::vector<std::vector<int>>>();
    for (const auto& row : m.topic_term_weights)
      if (row.size() != m.vocab.size()) throw ValidationError("model JSON: weight row does not match vocabulary");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("model JSON: ") + e.what());
  }
}

}  // namespace semtopic
