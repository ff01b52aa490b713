#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "welltris/estimator.hpp"

namespace welltris::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 2,
    kEmptyJoin = 3,
    kOracleGuard = 4,
};

// The encoding file written next to an index: `<index>.enc`.
std::filesystem::path encoding_path(const std::filesystem::path& index);

int cmd_preprocess(const std::vector<std::filesystem::path>& csvs, const std::filesystem::path& index_out,
                   std::ostream& err);

struct EstimateOptions {
    std::filesystem::path index;
    double epsilon = 0.5;
    double delta = 0.1;
    std::uint64_t seed = 0;
    std::optional<std::size_t> k;
};

// One JSON line: estimate, epsilon, delta, seed, iterations, boxes_in_E, samples_drawn, k_used, wall_ms.
int cmd_estimate(const EstimateOptions& opts, std::ostream& out, std::ostream& err);
std::string estimate_json(const Estimate& est, double wall_ms);

// CSV: header of global attribute names, then q decoded rows.
int cmd_sample(const std::filesystem::path& index, std::size_t q, std::uint64_t seed, std::ostream& out,
               std::ostream& err);

// One JSON line {"z": ...}; with `rows`, also "attributes" and the decoded "rows".
int cmd_exact(const std::vector<std::filesystem::path>& csvs, bool rows, std::size_t max_rows, std::ostream& out,
              std::ostream& err);

// Parses argv and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace welltris::cli
