// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#include "parqc/run_report.hpp"

namespace parqc {

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Success:
      return "Success";
    case Verdict::GaveUp:
      return "GaveUp";
    case Verdict::Failure:
      return "Failure";
    case Verdict::InternalError:
      return "InternalError";
  }
  return "Unknown";
}

}  // namespace parqc
