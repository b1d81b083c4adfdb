#pragma once
// Command-line front end: synth, train, reconstruct, evaluate, ablate.
//
// Exit codes: 0 success, 1 internal failure, 2 usage, 3 data,
// 4 compatibility. Every subcommand writes "<out>.manifest" (key=value,
// loadable with --manifest) before doing heavy work.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sanp::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kDataError = 3,
  kCompatibility = 4,
};

inline constexpr const char* kToolVersion = "0.1.0";

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);
int run(int argc, const char* const* argv);

std::uint64_t fnv1a64(std::span<const char> bytes);
std::uint64_t file_checksum(const std::filesystem::path& path);

}  // namespace sanp::cli
