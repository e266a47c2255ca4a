#pragma once

#include <cstdint>
#include <string>

#include "semtopic/error.hpp"

namespace semtopic {

struct LdaConfig {
  int num_topics = 2;
  double alpha = 0.1;  // symmetric document-topic prior
  double beta = 0.01;  // symmetric topic-word prior
  int iterations = 1000;
  int burn_in = 0;
  std::uint64_t seed = 42;
  int top_n = 15;
  // Average the weight estimates over every sweep after burn_in instead of
  // reading them off the final state.
  bool average_samples = false;

  void validate() const {
    if (num_topics < 1) throw ValidationError("num_topics must be >= 1");
    if (!(alpha > 0.0)) throw ValidationError("alpha must be > 0");
    if (!(beta > 0.0)) throw ValidationError("beta must be > 0");
    if (iterations < 1) throw ValidationError("iterations must be >= 1");
    if (burn_in < 0 || burn_in >= iterations)
      throw ValidationError("burn_in must satisfy 0 <= burn_in < iterations");
    if (top_n < 1) throw ValidationError("top_n must be >= 1");
  }
};

}  // namespace semtopic
