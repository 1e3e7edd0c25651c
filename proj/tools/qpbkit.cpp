#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qpbkit/suites.hpp"

namespace {

int run_command(const std::string& suite, const std::string& input_path,
                const std::string& format, const std::string& golden_path) {
    std::ifstream in(input_path);
    if (!in) {
        std::cerr << "error: cannot open input file '" << input_path << "'\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string raw = buf.str();

    qpbkit::Report report;
    try {
        qpbkit::textio::InputFile file = qpbkit::textio::parse_input(raw);
        report = qpbkit::run_suite(suite, file, raw);
    } catch (const qpbkit::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        // structural failures while running the suite count as failed checks
        report.add_check("suite." + suite + ".completed", false, e.what());
    }

    if (format == "json") {
        std::cout << qpbkit::report_to_json(report).dump(2) << "\n";
    } else {
        std::cout << qpbkit::report_to_text(report);
    }

    if (!golden_path.empty()) {
        std::ifstream gin(golden_path);
        if (!gin) {
            std::cerr << "error: cannot open golden file '" << golden_path << "'\n";
            return 2;
        }
        nlohmann::ordered_json golden;
        try {
            gin >> golden;
        } catch (const std::exception& e) {
            std::cerr << "golden parse error: " << e.what() << "\n";
            return 2;
        }
        qpbkit::GoldenDiff diff =
            qpbkit::diff_golden(qpbkit::report_to_json(report), golden);
        if (!diff.equal) {
            std::cerr << "golden mismatch:\n";
            for (const auto& d : diff.differences) std::cerr << "  " << d << "\n";
            return 1;
        }
    }
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification suites for quantum principal bundles"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a verification suite on an input file");
    std::string suite, input, format = "text", golden;
    run->add_option("--suite", suite, "suite name")->required();
    run->add_option("--input", input, "input description file")->required();
    run->add_option("--format", format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    run->add_option("--golden", golden, "golden JSON report to compare against");

    auto* list = app.add_subcommand("list-suites", "print the available suite names");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        for (const auto& name : qpbkit::suite_names()) std::cout << name << "\n";
        return 0;
    }
    bool known = false;
    for (const auto& name : qpbkit::suite_names())
        if (name == suite) known = true;
    if (!known) {
        std::cerr << "error: unknown suite '" << suite << "'\n";
        return 2;
    }
    return run_command(suite, input, format, golden);
}
