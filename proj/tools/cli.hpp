#pragma once

/**
 * Frontend plumbing shared by the newton-strata binary and the test
 * suites: structured-record ingestion, the named verification checks, and
 * the strata table emitters.
 */

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fcrystal/isocrystal.hpp"
#include "fcrystal/newton.hpp"
#include "fcrystal/padic.hpp"
#include "fcrystal/rootdata.hpp"

namespace fcrystal::cli {

struct OperatorRecord {
    MonomialOperator op;
    std::optional<PairingSpec> pairing;
};

std::pair<GroupDatum, MinusculeSpec> parse_group_spec(const std::string& path);
std::pair<GroupDatum, MinusculeSpec> parse_group_spec_text(const std::string& text);

OperatorRecord parse_monomial_operator(const std::string& path);
OperatorRecord parse_monomial_operator_text(const std::string& text);

SplitProblem parse_split_problem(const std::string& path);
SplitProblem parse_split_problem_text(const std::string& text);

PadicApprox parse_padic_entry(long long p, int precision, const std::string& text);

enum class Format { Text, Csv, JsonLines };
Format format_from_name(const std::string& name);

/// Compact coordinate string for tables: factors joined by ';', coordinates
/// by ':', similitude appended as a final "s<value>" group.
std::string nu_string(const RationalCoweight& nu);

struct EmitOptions {
    Format format = Format::Text;
    bool vertices = false;
};

void emit_strata(const GroupDatum& datum, const StrataResult& result,
                 const EmitOptions& options, std::ostream& out);

void emit_polygon(const OperatorRecord& record, const EmitOptions& options,
                  std::ostream& out);

struct CheckParams {
    int max_rank = 0; // 0: per-check default
    unsigned long long seed = 9001;
    long long samples = 0; // 0: per-check default
    int threads = 1;
    unsigned long long max_elements = 0;
};

struct CheckReport {
    std::string name;
    bool pass = true;
    unsigned long long elements_scanned = 0;
    unsigned long long strata_found = 0;
    std::string expected;
    std::string actual;
    std::string counterexample; // w and its nu, on failure
    std::vector<std::string> lines;
    double wall_ms = 0;
};

std::vector<std::string> check_names();

/// Runs one named verification check. Throws std::invalid_argument for an
/// unknown name; resource_limit_error propagates.
CheckReport run_check(const std::string& name, const CheckParams& params);

void print_report(const CheckReport& report, std::ostream& out, std::ostream& err);

} // namespace fcrystal::cli
