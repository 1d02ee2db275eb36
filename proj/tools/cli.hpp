#pragma once

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace msflow::cli {

enum ExitStatus : int { exit_ok = 0, exit_input_error = 1, exit_refused = 2 };

/// Outcome of one command. Both renderings are produced from `facts`, so the
/// human and the structured output carry the same information.
struct Report {
    std::string command;
    std::vector<std::string> inputs;
    nlohmann::ordered_json facts = nlohmann::ordered_json::object();
    int exit_status = exit_ok;
};

std::string render_text(const Report& report);
std::string render_json(const Report& report);

/// Input path lookup: the path itself if it exists, otherwise the same path
/// under $MSFLOW_FIXTURES (or the built-in fixture directory).
std::string resolve_input(const std::string& path);
std::string fixture_dir();

Report cmd_validate(const std::string& file, bool strict);
Report cmd_complex(const std::string& file);
Report cmd_d2(const std::string& file);
Report cmd_homology(const std::string& file);

struct PerturbOptions {
    std::string orbit;
    bool all = false;
    std::string choice_file;
    std::string out;  // directory for --all, file for --choice (optional)
};
Report cmd_perturb(const std::string& file, const PerturbOptions& options);

Report cmd_poset(const std::string& file);
Report cmd_compare(const std::string& file_a, const std::string& file_b);
Report cmd_census(const std::vector<std::string>& files);

/// Entry point shared by the executable and the tests. Library errors are
/// reported on `err` and mapped to exit status 1.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace msflow::cli
