#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gl3/afe.hpp"
#include "gl3/arith.hpp"
#include "gl3/coeffs.hpp"

namespace gl3::cli {

enum class Command {
  constants,
  chain_verify,
  delta_enum,
  mollifier,
  afe_check,
  first_moment,
  second_moment,
  zeros,
  littlewood,
  arith_selftest,
};

enum class Format { json, csv };

struct SourceSpec {
  SourceKind kind = SourceKind::eisenstein;
  std::string path;
  std::uint64_t seed = 1;
};

struct RunConfig {
  Command command = Command::constants;
  std::optional<SourceSpec> source;
  std::complex<double> v1{1.0 / 3.0, 0.0}, v2{1.0 / 3.0, 0.0};
  double T = 200.0;
  double k = 1.0;
  double alpha = 0.5;
  std::optional<double> X;
  std::optional<double> sigma0;
  std::optional<double> omega_cap;
  OmegaMode omega_mode = OmegaMode::with_multiplicity;
  u64 prime_limit = 1'000'000;
  std::optional<u64> support_bound;
  u64 bound = 20;
  double quad_tol = 1e-6;
  std::optional<double> sigma;
  double t = 20.0;
  double T1 = 10.0;
  double T2 = 50.0;
  AfeConfig afe;
  std::optional<u64> l_terms;
  std::string output;
  Format format = Format::json;
  unsigned threads = 0;
};

const char* to_string(Command c);

// Flags override the JSON config file (--config), which overrides defaults.
// Throws usage_error naming the offending field.
RunConfig parse_config(const std::vector<std::string>& args);

// Executes the command and writes the report; returns the process status.
int run(const RunConfig& cfg, std::ostream& log);

// Pretty JSON with sorted keys and 17 significant digits for doubles.
std::string serialize(const nlohmann::json& value);

// FNV-1a 64 of the serialized report without its timestamp and hash fields.
std::string determinism_hash(const nlohmann::json& report);

int main_entry(int argc, char** argv);

}  // namespace gl3::cli
