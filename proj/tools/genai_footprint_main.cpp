// genai-footprint: sustainability accounting for generative-AI usage logs.
//
//   genai-footprint audit    --config run.json [--out dir] [--format md,json,csv]
//   genai-footprint classify --config run.json
//   genai-footprint factors  --list | --validate table.json
//
// Exit codes: 0 clean, 1 warnings, 2 budget overage (enforce mode),
// 3 hard error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "footprint/config.hpp"
#include "footprint/errors.hpp"
#include "footprint/pipeline.hpp"
#include "footprint/version.hpp"

namespace {

using namespace footprint;

std::vector<std::string> split_formats(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string default_config_path(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* dir = std::getenv("GENAI_FOOTPRINT_CONFIG_DIR"))
        return (std::filesystem::path(dir) / "run.json").string();
    return "run.json";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw AuditError(AuditError::Kind::IoError, "cannot write '" + path.string() + "'");
    out << content;
}

int emit(const AuditOutcome& outcome, const std::string& out_dir,
         const std::vector<std::string>& formats) {
    if (outcome.exit_code == ExitCode::Error) {
        std::cerr << "error: " << outcome.error << "\n";
        return static_cast<int>(ExitCode::Error);
    }
    RenderedArtifacts artifacts = render_artifacts(outcome.report, formats);
    if (out_dir.empty()) {
        if (artifacts.markdown) std::cout << *artifacts.markdown;
        else if (artifacts.json) std::cout << *artifacts.json;
        else if (artifacts.csv) std::cout << *artifacts.csv;
    } else {
        std::filesystem::create_directories(out_dir);
        std::filesystem::path dir(out_dir);
        if (artifacts.markdown) write_file(dir / "report.md", *artifacts.markdown);
        if (artifacts.json) write_file(dir / "report.json", *artifacts.json);
        if (artifacts.csv) write_file(dir / "report.csv", *artifacts.csv);
    }
    return static_cast<int>(outcome.exit_code);
}

int cmd_factors(bool list, const std::string& validate_path) {
    if (list) {
        EnergyFactorTable table = EnergyFactorTable::defaults();
        std::cout << "platform  kind              kWh/image  provenance\n";
        for (const auto& [key, entry] : table.entries()) {
            std::cout << key.first << "  " << key.second << "  " << entry.kwh_per_image.str()
                      << "  " << entry.provenance << "\n";
        }
        return 0;
    }
    std::ifstream in(validate_path);
    if (!in) {
        std::cerr << "error: cannot open '" << validate_path << "'\n";
        return static_cast<int>(ExitCode::Error);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        EnergyFactorTable table = parse_factor_table(buf.str());
        std::cout << "valid: " << table.entries().size() << " factor entr"
                  << (table.entries().size() == 1 ? "y" : "ies") << "\n";
        return 0;
    } catch (const AuditError& e) {
        std::cerr << "invalid: " << e.what() << "\n";
        return static_cast<int>(ExitCode::Error);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy accounting for generative-AI usage logs"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string formats = "md";
    bool strict_flag = false, lenient_flag = false, dedupe = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Run configuration file (JSON)");
        cmd->add_flag("--strict", strict_flag, "Abort on malformed rows and unknown config keys");
        cmd->add_flag("--lenient", lenient_flag, "Skip-and-count malformed rows");
        cmd->add_flag("--dedupe", dedupe, "Collapse identical author+timestamp+content rows");
    };

    CLI::App* audit = app.add_subcommand("audit", "Full pipeline: parse, classify, account");
    add_common(audit);
    audit->add_option("--out", out_dir, "Directory for report artifacts (default: stdout)");
    audit->add_option("--format", formats, "Comma-separated outputs: md,json,csv");

    CLI::App* classify = app.add_subcommand("classify", "Parse and classify only");
    add_common(classify);

    CLI::App* factors = app.add_subcommand("factors", "Inspect or validate factor tables");
    bool list = false;
    std::string validate_path;
    factors->add_flag("--list", list, "Print the built-in factor table");
    factors->add_option("--validate", validate_path, "Validate a factor table file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (factors->parsed()) {
            if (!list && validate_path.empty()) {
                std::cerr << "error: factors needs --list or --validate <path>\n";
                return static_cast<int>(ExitCode::Error);
            }
            return cmd_factors(list, validate_path);
        }

        std::optional<bool> strict_override;
        if (strict_flag) strict_override = true;
        if (lenient_flag) strict_override = false;
        // An audit must not silently drop data: strict is the audit
        // default unless --lenient is given.
        if (audit->parsed() && !lenient_flag) strict_override = true;

        RunConfig config = load_config(default_config_path(config_path), strict_override);
        if (dedupe) config.dedupe = true;

        if (classify->parsed()) {
            AuditOutcome outcome = run_classify(config);
            return emit(outcome, "", {"md"});
        }
        AuditOutcome outcome = run_audit(config);
        return emit(outcome, out_dir, split_formats(formats));
    } catch (const AuditError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::Error);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::Error);
    }
}
