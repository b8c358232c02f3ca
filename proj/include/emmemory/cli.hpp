#pragma once
//! \file cli.hpp
//! \brief Configuration resolution and subcommand dispatch for the `emm` tool.
//!
//! Values resolve as defaults < config file (--config PATH, JSON) < flags.
//! Config files are parsed strictly: keys the subcommand does not know are
//! rejected. Exit codes: 0 ok, 2 config, 3 I/O, 4 invariant, 5 residual.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "emmemory/bns.hpp"
#include "emmemory/detector.hpp"
#include "emmemory/waveform.hpp"

namespace emm::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitIo = 3,
  kExitInvariant = 4,
  kExitResidual = 5,
};

enum class Command { kGenerate, kMemory, kDetector, kOrderCheck, kMassloss, kBnsEnergy, kValidate };

const char* to_string(Command c);

// Raised by parse_config for --help / --version; the message is the text to
// print and the exit status is 0.
struct HelpRequested : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct B0Sweep {
  double min = 0.0;
  double max = 0.0;
  int count = 0;
};

struct RunConfig {
  Command command = Command::kValidate;
  int l_max = 8;
  std::uint64_t seed = 0;
  UGrid u{-12.0, 0.05, 481};
  std::vector<PulseSpec> xi_pulses;
  std::vector<PulseSpec> af_pulses;
  std::optional<std::filesystem::path> xi_path;
  std::optional<std::filesystem::path> af_path;
  DetectorConfig detector;
  NullFieldAmplitudes amplitudes;
  std::vector<double> radii;
  bns::Scenario scenario;
  std::optional<B0Sweep> b0_sweep;
  std::filesystem::path output_dir = ".";

  // Provenance echoed into the manifest.
  nlohmann::json file_values = nlohmann::json::object();
  nlohmann::json flag_values = nlohmann::json::object();
  nlohmann::json resolved = nlohmann::json::object();
};

// `args` excludes the program name. Throws ConfigError.
RunConfig parse_config(const std::vector<std::string>& args);

// Executes a resolved configuration; throws the emm error types.
void run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Reports the in-flight exception on `err` and returns its exit code.
// std::invalid_argument counts as a config error; anything else is 1.
int exit_code_for(std::exception_ptr error, std::ostream& out, std::ostream& err);

// Full entry point: parse, run, map exceptions to exit codes.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

PulseSpec parse_pulse(const std::string& text);

}  // namespace emm::cli
