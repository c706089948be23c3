// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#include "parqc/config.hpp"

#include <stdexcept>
#include <string>

namespace parqc {

void Config::validate() const {
  if (max_success < 1) throw std::invalid_argument("max_success must be >= 1");
  if (max_size < 1) throw std::invalid_argument("max_size must be >= 1");
  if (max_discard_ratio < 1) {
    throw std::invalid_argument("max_discard_ratio must be >= 1");
  }
  if (num_testers < 1) throw std::invalid_argument("num_testers must be >= 1");
  if (num_testers > max_success) {
    throw std::invalid_argument("num_testers (" + std::to_string(num_testers) +
                                ") must not exceed max_success (" +
                                std::to_string(max_success) + ")");
  }
  if (progress_period_ms < 1) {
    throw std::invalid_argument("progress_period_ms must be >= 1");
  }
  if (replay && replay->size < 0) {
    throw std::invalid_argument("replay size must be >= 0");
  }
}

}  // namespace parqc
