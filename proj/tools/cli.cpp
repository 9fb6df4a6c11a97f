#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace fcrystal::cli {

using nlohmann::ordered_json;

namespace {

ordered_json load_json(const std::string& text, const char* what) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string(what) + ": " + e.what());
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::pair<GroupDatum, MinusculeSpec> parse_group_spec_text(const std::string& text) {
    ordered_json j = load_json(text, "group spec");
    if (!j.is_object()) throw std::invalid_argument("group spec: expected an object");
    for (auto& [key, value] : j.items()) {
        (void)value;
        if (key != "family" && key != "rank" && key != "factors" && key != "twist" &&
            key != "mu")
            throw std::invalid_argument("group spec: unknown key '" + key + "'");
    }
    if (!j.contains("family") || !j.contains("rank"))
        throw std::invalid_argument("group spec: 'family' and 'rank' are required");
    Family fam = family_from_name(j.at("family").get<std::string>());
    int rank = j.at("rank").get<int>();
    int factors = j.value("factors", 1);
    int twist = j.value("twist", 1);
    GroupDatum datum = make_group_datum(fam, rank, factors, twist);

    if (!j.contains("mu")) throw std::invalid_argument("group spec: 'mu' is required");
    const auto& m = j.at("mu");
    MinusculeSpec mu = [&] {
        if (m.is_string()) {
            if (m.get<std::string>() == "siegel") return MinusculeSpec::siegel(datum);
            throw std::invalid_argument("group spec: unknown mu shorthand '" +
                                        m.get<std::string>() + "'");
        }
        if (m.is_object() && m.contains("l"))
            return MinusculeSpec::from_l(datum, m.at("l").get<int>());
        if (m.is_object() && m.contains("weights")) {
            auto weights = m.at("weights").get<std::vector<std::vector<long long>>>();
            std::optional<long long> sim;
            if (m.contains("similitude")) sim = m.at("similitude").get<long long>();
            return MinusculeSpec::explicit_weights(datum, std::move(weights), sim);
        }
        throw std::invalid_argument(
            "group spec: mu must be {\"l\":k}, {\"weights\":[...]} or \"siegel\"");
    }();
    validate_minuscule(datum, mu);
    return {datum, mu};
}

std::pair<GroupDatum, MinusculeSpec> parse_group_spec(const std::string& path) {
    return parse_group_spec_text(slurp(path));
}

OperatorRecord parse_monomial_operator_text(const std::string& text) {
    ordered_json j = load_json(text, "operator record");
    OperatorRecord rec;
    rec.op.size = j.at("size").get<int>();
    for (int image : j.at("permutation").get<std::vector<int>>())
        rec.op.perm.push_back(image - 1); // 1-based on the wire
    rec.op.exp = j.at("exponents").get<std::vector<long long>>();
    rec.op.validate();
    if (j.contains("pairing")) {
        PairingSpec p;
        for (int partner : j.at("pairing").get<std::vector<int>>())
            p.partner.push_back(partner - 1);
        if (j.contains("pairing_slope")) {
            const auto& c = j.at("pairing_slope");
            p.similitude_slope =
                c.is_string() ? Rat::parse(c.get<std::string>()) : Rat(c.get<long long>());
        }
        p.validate();
        rec.pairing = std::move(p);
    }
    return rec;
}

OperatorRecord parse_monomial_operator(const std::string& path) {
    return parse_monomial_operator_text(slurp(path));
}

PadicApprox parse_padic_entry(long long p, int precision, const std::string& text) {
    auto caret = text.find('^');
    if (caret == std::string::npos)
        return PadicApprox::from_integer(p, std::stoll(text), precision);
    std::string base = text.substr(0, caret);
    if (base != "p" && base != std::to_string(p))
        throw std::invalid_argument("p-adic entry '" + text + "': base must be the prime");
    auto star = text.find('*', caret);
    int v = std::stoi(text.substr(caret + 1, star == std::string::npos
                                                  ? std::string::npos
                                                  : star - caret - 1));
    long long unit = star == std::string::npos ? 1 : std::stoll(text.substr(star + 1));
    return PadicApprox::from_integer(p, unit, precision).shifted(v);
}

SplitProblem parse_split_problem_text(const std::string& text) {
    ordered_json j = load_json(text, "split problem");
    SplitProblem pb;
    pb.p = j.at("p").get<long long>();
    pb.precision = j.at("precision").get<int>();
    pb.block_sizes = j.at("block_sizes").get<std::vector<int>>();
    pb.block_slopes = j.at("block_slopes").get<std::vector<long long>>();
    auto read_matrix = [&](const char* key) {
        const auto& rows = j.at(key);
        int n = int(rows.size());
        PadicMatrix m = PadicMatrix::zero_matrix(pb.p, pb.precision, n);
        for (int i = 0; i < n; ++i) {
            if (int(rows[i].size()) != n)
                throw std::invalid_argument(std::string(key) + " must be square");
            for (int k = 0; k < n; ++k) {
                const auto& cell = rows[i][k];
                m.at(i, k) = cell.is_string()
                                 ? parse_padic_entry(pb.p, pb.precision,
                                                     cell.get<std::string>())
                                 : PadicApprox::from_integer(pb.p, cell.get<long long>(),
                                                             pb.precision);
            }
        }
        return m;
    };
    pb.phi = read_matrix("phi");
    pb.u = read_matrix("u");
    pb.validate();
    return pb;
}

SplitProblem parse_split_problem(const std::string& path) {
    return parse_split_problem_text(slurp(path));
}

Format format_from_name(const std::string& name) {
    if (name == "text") return Format::Text;
    if (name == "csv") return Format::Csv;
    if (name == "jsonl") return Format::JsonLines;
    throw std::invalid_argument("unknown format '" + name + "'");
}

std::string nu_string(const RationalCoweight& nu) {
    std::string out;
    for (size_t s = 0; s < nu.factors.size(); ++s) {
        if (s) out += ';';
        for (size_t i = 0; i < nu.factors[s].size(); ++i) {
            if (i) out += ':';
            out += nu.factors[s][i].str();
        }
    }
    if (nu.similitude) out += ";s" + nu.similitude->str();
    return out;
}

namespace {

std::string vertices_string(const NewtonPolygon& polygon) {
    std::string out;
    for (const auto& [x, y] : polygon.vertices()) {
        if (!out.empty()) out += ';';
        out += std::to_string(x) + ":" + y.str();
    }
    return out;
}

} // namespace

void emit_strata(const GroupDatum& datum, const StrataResult& result,
                 const EmitOptions& options, std::ostream& out) {
    (void)datum;
    switch (options.format) {
        case Format::Csv: {
            out << "nu,polygon,representative,count";
            if (options.vertices) out << ",vertices";
            out << "\n";
            for (const auto& st : result.strata) {
                out << nu_string(st.nu) << ',' << st.polygon.str() << ','
                    << st.representative.str() << ',' << st.count;
                if (options.vertices) out << ',' << vertices_string(st.polygon);
                out << "\n";
            }
            return;
        }
        case Format::JsonLines: {
            for (const auto& st : result.strata) {
                ordered_json j;
                j["nu"] = nu_string(st.nu);
                j["polygon"] = st.polygon.str();
                j["representative"] = st.representative.str();
                j["count"] = st.count;
                if (options.vertices) j["vertices"] = vertices_string(st.polygon);
                out << j.dump() << "\n";
            }
            return;
        }
        case Format::Text: {
            size_t wn = 2, wp = 7, wr = 14;
            for (const auto& st : result.strata) {
                wn = std::max(wn, nu_string(st.nu).size());
                wp = std::max(wp, st.polygon.str().size());
                wr = std::max(wr, st.representative.str().size());
            }
            out << std::left << std::setw(int(wn) + 2) << "nu" << std::setw(int(wp) + 2)
                << "polygon" << std::setw(int(wr) + 2) << "representative"
                << "count\n";
            for (const auto& st : result.strata) {
                out << std::left << std::setw(int(wn) + 2) << nu_string(st.nu)
                    << std::setw(int(wp) + 2) << st.polygon.str() << std::setw(int(wr) + 2)
                    << st.representative.str() << st.count;
                if (options.vertices) out << "  " << vertices_string(st.polygon);
                out << "\n";
            }
            return;
        }
    }
}

void emit_polygon(const OperatorRecord& record, const EmitOptions& options,
                  std::ostream& out) {
    NewtonPolygon poly = slope_polygon(record.op);
    SlopeDecomposition dec = slope_decomposition(record.op);
    auto indices_str = [](const std::vector<int>& v) {
        std::string s;
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) s += ':';
            s += std::to_string(v[i] + 1);
        }
        return s;
    };
    switch (options.format) {
        case Format::Csv: {
            out << "slope,multiplicity,indices\n";
            for (const auto& piece : dec.pieces)
                out << piece.slope.str() << ',' << piece.indices.size() << ','
                    << indices_str(piece.indices) << "\n";
            return;
        }
        case Format::JsonLines: {
            ordered_json j;
            j["polygon"] = poly.str();
            j["height"] = poly.height();
            j["degree"] = poly.degree().str();
            ordered_json parts = ordered_json::array();
            for (const auto& piece : dec.pieces) {
                ordered_json pj;
                pj["slope"] = piece.slope.str();
                pj["indices"] = indices_str(piece.indices);
                parts.push_back(pj);
            }
            j["decomposition"] = parts;
            if (options.vertices) j["vertices"] = vertices_string(poly);
            if (record.pairing)
                j["pairing_symmetric"] = pairing_symmetry_check(record.op, *record.pairing);
            out << j.dump() << "\n";
            return;
        }
        case Format::Text: {
            out << "polygon: " << poly.str() << "\n";
            out << "height:  " << poly.height() << "\n";
            out << "degree:  " << poly.degree().str() << "\n";
            if (options.vertices) out << "vertices: " << vertices_string(poly) << "\n";
            for (const auto& piece : dec.pieces)
                out << "M[" << piece.slope.str() << "] = {" << indices_str(piece.indices)
                    << "}\n";
            for (const auto& piece : dec.pieces)
                out << "W>=[" << piece.slope.str() << "] = {"
                    << indices_str(dec.upper(piece.slope)) << "}  W<=["
                    << piece.slope.str() << "] = {" << indices_str(dec.lower(piece.slope))
                    << "}\n";
            if (record.pairing)
                out << "pairing symmetric: "
                    << (pairing_symmetry_check(record.op, *record.pairing) ? "yes" : "no")
                    << "\n";
            return;
        }
    }
}

void print_report(const CheckReport& report, std::ostream& out, std::ostream& err) {
    out << (report.pass ? "PASS" : "FAIL") << " " << report.name;
    if (!report.expected.empty())
        out << " expected=" << report.expected << " actual=" << report.actual;
    out << " (" << report.elements_scanned << " elements";
    if (report.strata_found) out << ", " << report.strata_found << " strata";
    out << ")\n";
    for (const auto& line : report.lines) out << "  " << line << "\n";
    if (!report.counterexample.empty())
        out << "  counterexample: " << report.counterexample << "\n";
    err << "# " << report.name << ": " << report.wall_ms << " ms\n";
}

} // namespace fcrystal::cli
