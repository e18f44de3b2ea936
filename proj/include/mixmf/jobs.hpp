#pragma once

// Job runners behind the command-line front end: each takes a validated
// config, writes artifacts into the configured output directory, and
// reports an exit status (0 ok/pass, 2 verdict fail, 3 non-informative).

#include <string>
#include <vector>

#include "mixmf/config.hpp"

namespace mixmf {

struct JobOutcome {
  int exit_code = 0;
  std::vector<std::string> files;  // paths written, in order
};

JobOutcome run_job(const JobConfig& cfg);

}  // namespace mixmf
