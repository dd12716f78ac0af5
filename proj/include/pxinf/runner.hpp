#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>

namespace pxinf {

struct RunOptions {
  std::string command;  // solve | sweep | oracle1d | check | feasibility
  std::optional<std::filesystem::path> config_path;
  std::optional<std::string> preset;
  std::map<std::string, std::string> params;  // preset parameter overrides
  std::filesystem::path out_dir;
  std::optional<int> n;           // solve / oracle1d: truncation level
  std::optional<int> resolution;  // samples: oracle curve, interface, contact
  std::optional<std::string> expect;  // feasibility: nonempty | empty
};

// Exit codes: 0 done, 1 bad usage or bad config, 2 run failed,
// 3 a --expect claim was contradicted by the verdict.
int run_command(const RunOptions& opt, std::ostream& log);

}  // namespace pxinf
