#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "fcrystal/errors.hpp"

namespace {

using namespace fcrystal;

unsigned long long env_element_cap() {
    const char* v = std::getenv("NEWTON_STRATA_MAX_ELEMENTS");
    if (!v || !*v) return 0;
    return std::strtoull(v, nullptr, 10);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Newton points, polygons and strata of monomial sigma-linear operators"};
    app.require_subcommand(1);

    std::string format = "text";
    app.add_option("--format", format, "output format: text, csv, jsonl")
        ->check(CLI::IsMember({"text", "csv", "jsonl"}));
    bool vertices = false;
    app.add_flag("--vertices", vertices, "include polygon vertex lists");
    int threads = 1;
    app.add_option("--threads", threads, "worker threads (merges stay deterministic)")
        ->check(CLI::PositiveNumber);

    std::string strata_path;
    bool full = false;
    auto* cmd_strata = app.add_subcommand("strata", "Newton strata of a group spec");
    cmd_strata->add_option("spec", strata_path, "group-spec JSON file")->required();
    cmd_strata->add_flag("--full,!--composite", full,
                         "enumerate all |W1|^n tuples instead of composites");

    std::string polygon_path;
    auto* cmd_polygon =
        app.add_subcommand("polygon", "slope polygon and decomposition of an operator");
    cmd_polygon->add_option("operator", polygon_path, "monomial-operator JSON file")
        ->required();

    std::string basic_path;
    auto* cmd_basic = app.add_subcommand("basic", "construct and verify a basic element");
    cmd_basic->add_option("spec", basic_path, "group-spec JSON file")->required();

    std::string check_name;
    cli::CheckParams params;
    params.max_elements = env_element_cap();
    auto* cmd_verify = app.add_subcommand("verify", "run a named verification check");
    cmd_verify->add_option("name", check_name, "check name (see --list)")->required();
    cmd_verify->add_option("--max-rank", params.max_rank, "rank bound override");
    cmd_verify->add_option("--seed", params.seed, "seed for randomized checks");
    cmd_verify->add_option("--samples", params.samples, "sample count override");

    std::string split_path;
    int split_precision = 0;
    auto* cmd_split = app.add_subcommand("split", "run the slope-splitting iteration");
    cmd_split->add_option("problem", split_path, "split-problem JSON file")->required();
    cmd_split->add_option("--target-precision", split_precision,
                          "verify/report precision (defaults to the problem's)");

    bool list_checks = false;
    app.add_flag("--list-checks", list_checks, "list verification check names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    cli::EmitOptions emit;
    emit.vertices = vertices;

    try {
        emit.format = cli::format_from_name(format);

        if (list_checks) {
            for (const auto& n : cli::check_names()) std::cout << n << "\n";
            return 0;
        }

        if (*cmd_strata) {
            auto [datum, mu] = cli::parse_group_spec(strata_path);
            StrataOptions opt;
            opt.composite = !full;
            opt.threads = threads;
            opt.max_elements = env_element_cap();
            auto result = strata(datum, mu, opt);
            cli::emit_strata(datum, result, emit, std::cout);
            return 0;
        }

        if (*cmd_polygon) {
            auto record = cli::parse_monomial_operator(polygon_path);
            cli::emit_polygon(record, emit, std::cout);
            return 0;
        }

        if (*cmd_basic) {
            auto [datum, mu] = cli::parse_group_spec(basic_path);
            auto w = construct_basic_element(datum);
            auto nu = newton_point(datum, mu, w);
            std::cout << "element: " << w.str() << "\n";
            std::cout << "nu: " << cli::nu_string(nu) << "\n";
            std::cout << "basic: " << (is_basic(datum, mu, w) ? "yes" : "no") << "\n";
            return is_basic(datum, mu, w) ? 0 : 1;
        }

        if (*cmd_verify) {
            params.threads = threads;
            auto report = cli::run_check(check_name, params);
            cli::print_report(report, std::cout, std::cerr);
            return report.pass ? 0 : 1;
        }

        if (*cmd_split) {
            auto problem = cli::parse_split_problem(split_path);
            int target = split_precision ? split_precision : problem.precision;
            auto h = split_slopes(problem, target);
            for (int i = 0; i < h.n; ++i) {
                for (int j = 0; j < h.n; ++j)
                    std::cout << (j ? " " : "") << h.at(i, j).str();
                std::cout << "\n";
            }
            int residual = verify_conjugation(h, problem.u, problem.phi, target);
            std::cout << "residual-valuation: " << residual
                      << (residual >= target ? " (>= target)" : "") << "\n";
            return residual >= target ? 0 : 1;
        }
    } catch (const resource_limit_error& e) {
        std::cerr << "resource bound exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
