#pragma once

#include "arcszego/error.hpp"
#include "arcszego/experiments.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace arcszego::cli {

// Configuration problem tied to a line of the config text (0 if unknown).
class ConfigError : public DomainError {
 public:
  ConfigError(const std::string& msg, int line) : DomainError(msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Parses a config document. Errors carry the line of the offending key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config(const nlohmann::json& j, const std::string& text);

// "poly(1,0,0.5)", "jacobi(0.5,-0.5)", "one", ...
DensitySpec parse_density(const std::string& s);

// Line of the key at the end of a dotted path ("measure.atoms"), found by
// walking the path components through the text. 0 if not found.
int locate_key(const std::string& text, const std::string& path);

std::uint64_t fnv1a(const std::string& bytes);

nlohmann::json report_json(const ConvergenceReport& rep);
// n,lambda,widom_sq,limit_A,limit_B,err_abs,err_rel,l2_err,sup_err with 17
// significant digits.
std::string series_csv(const ConvergenceReport& rep);

// Full command line front end; returns the exit status.
//   0 all verdicts pass, 1 some verdict fails, 2 bad input, 3 numerical failure.
int run(int argc, char** argv);

}  // namespace arcszego::cli
