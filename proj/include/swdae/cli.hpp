#pragma once
//
// Command dispatch behind the `swdae` executable.
//

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace swdae::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidInput = 1,
    kNumericalFailure = 2,
    kPropertyFailure = 3,
};

struct RunConfig {
    std::string command;  // check|reform|reach|obs|gramians|reduce|simulate|verify
    std::filesystem::path model;
    std::filesystem::path signal;
    std::filesystem::path input;
    double tol_rank{1e-10};
    double tol_check{1e-8};
    double tol_solver{1e-10};
    double dt{0.01};
    std::optional<long> order;
    std::uint64_t seed{42};
    bool restrict_differential{false};
    std::filesystem::path out_dir{"."};

    // Throws InvalidArgument on unknown commands, non-positive tolerances or
    // dt, order < 1, or missing files required by the command.
    void validate() const;
};

const std::vector<std::string>& commands();

// Parses argv-style arguments (without the program name). Returns the exit
// code to use directly when parsing ends the run (help, usage errors).
struct ParseOutcome {
    RunConfig config;
    std::optional<int> exit_code;
};
ParseOutcome parse_arguments(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Executes the command; reports go to `out`, diagnostics to `err`, files to
// config.out_dir.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace swdae::cli
