#include "cli.hpp"

#include "msflow/ej_complex.hpp"
#include "msflow/flow_system.hpp"
#include "msflow/msf_format.hpp"
#include "msflow/perturb.hpp"
#include "msflow/poset.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef MSFLOW_DEFAULT_FIXTURE_DIR
#define MSFLOW_DEFAULT_FIXTURE_DIR "fixtures"
#endif

namespace msflow::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Fact builders

Json violations_json(const std::vector<flow::Violation>& violations) {
    Json out = Json::array();
    for (const auto& v : violations) {
        out.push_back({{"rule", v.rule}, {"elements", v.elements}, {"message", v.message}});
    }
    return out;
}

Json d2_json(const std::vector<ej::D2Violation>& violations) {
    Json out = Json::array();
    for (const auto& v : violations) {
        out.push_back({{"degree", v.degree}, {"source", v.source.label()}, {"target", v.target.label()}});
    }
    return out;
}

Json choice_json(const perturb::ChoiceDescriptor& d) {
    return {{"orbit", d.orbit}, {"p", d.p_name}, {"q", d.q_name}, {"pout", d.p_out},
            {"qout", d.q_out},  {"pin", d.p_in}, {"qin", d.q_in}};
}

Json claim_json(const perturb::ClaimOutcome& c) {
    return {{"pass", c.passed()}, {"witnesses", c.witnesses}};
}

Json claims_json(const std::optional<perturb::ClaimsReport>& claims) {
    if (!claims) {
        return nullptr;
    }
    return {{"form", claims->mirrored ? "attractor" : "repeller"},
            {"zero_line", claim_json(claims->zero_line)},
            {"same_matrix", claim_json(claims->same_matrix)},
            {"single_line", claim_json(claims->single_line)},
            {"products_equal", claims->products_equal},
            {"products_zero", claims->products_zero}};
}

Json mapping_json(const std::optional<std::vector<std::pair<std::string, std::string>>>& mapping) {
    if (!mapping) {
        return nullptr;
    }
    Json out = Json::array();
    for (const auto& [a, b] : *mapping) {
        out.push_back({a, b});
    }
    return out;
}

std::vector<std::string> labels_of(const std::vector<ej::BasisElement>& basis) {
    std::vector<std::string> out;
    for (const auto& b : basis) out.push_back(b.label());
    return out;
}

flow::FlowSystem load_system(const std::string& file) {
    return flow::load_msf(resolve_input(file));
}

bool is_pos_file(const std::string& file) {
    return fs::path(file).extension() == ".pos";
}

Report error_report(std::string command, std::vector<std::string> inputs, const std::string& message) {
    Report r{std::move(command), std::move(inputs), Json::object(), exit_input_error};
    r.facts["error"] = message;
    return r;
}

Report invalid_report(std::string command, std::vector<std::string> inputs, const flow::InvalidSystem& e) {
    auto r = error_report(std::move(command), std::move(inputs), "invalid system");
    r.facts["violations"] = violations_json(e.violations());
    return r;
}

// ---------------------------------------------------------------------------
// Text rendering helpers

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::vector<std::string> strings(const Json& array) {
    std::vector<std::string> out;
    for (const auto& v : array) out.push_back(v.get<std::string>());
    return out;
}

std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

void render_matrix(std::ostream& out, const Json& m) {
    const auto rows = strings(m["rows"]);
    const auto cols = strings(m["cols"]);
    const int k = m["degree"].get<int>();
    out << "d_" << k << " : C_" << k << " -> C_" << k - 1 << '\n';
    if (rows.empty() || cols.empty()) {
        out << "  (zero map, " << rows.size() << "x" << cols.size() << ")\n";
        return;
    }
    std::size_t row_w = 0;
    for (const auto& r : rows) row_w = std::max(row_w, r.size());
    std::vector<std::size_t> col_w;
    for (const auto& c : cols) col_w.push_back(std::max<std::size_t>(c.size(), 1));

    out << "  " << std::string(row_w, ' ');
    for (std::size_t c = 0; c < cols.size(); ++c) out << ' ' << pad_left(cols[c], col_w[c]);
    out << '\n';
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out << "  " << pad_right(rows[r], row_w);
        for (std::size_t c = 0; c < cols.size(); ++c) {
            out << ' ' << pad_left(std::to_string(m["entries"][r][c].get<int>()), col_w[c]);
        }
        out << '\n';
    }
}

std::string count_map_text(const Json& m) {
    std::vector<std::string> parts;
    for (const auto& [name, count] : m.items()) {
        parts.push_back(name + ":" + std::to_string(count.get<int>()));
    }
    return "{" + join(parts, ", ") + "}";
}

std::string choice_text(const Json& c) {
    std::string out = c["orbit"].get<std::string>() + " -> " + c["p"].get<std::string>() + "," +
                      c["q"].get<std::string>();
    for (const char* key : {"pout", "qout", "pin", "qin"}) {
        if (!c[key].empty()) out += " " + std::string(key) + " " + count_map_text(c[key]);
    }
    return out;
}

std::string betti_text(const Json& betti) {
    std::vector<std::string> parts;
    for (std::size_t k = 0; k < betti.size(); ++k) {
        parts.push_back("b" + std::to_string(k) + "=" + std::to_string(betti[k].get<int>()));
    }
    return join(parts, " ");
}

std::string numbers_text(const Json& numbers) {
    std::vector<std::string> parts;
    for (const auto& v : numbers) parts.push_back(std::to_string(v.get<int>()));
    return join(parts, " ");
}

void render_d2_list(std::ostream& out, const Json& violations) {
    for (const auto& v : violations) {
        out << "  degree " << v["degree"].get<int>() << ": " << v["source"].get<std::string>() << " -> "
            << v["target"].get<std::string>() << '\n';
    }
}

void render_claims(std::ostream& out, const Json& claims) {
    if (claims.is_null()) {
        out << "  claims: not applicable\n";
        return;
    }
    out << "  claims (" << claims["form"].get<std::string>() << " form):";
    for (const char* key : {"zero_line", "same_matrix", "single_line"}) {
        out << ' ' << key << '=' << (claims[key]["pass"].get<bool>() ? "pass" : "FAIL");
    }
    out << " products_equal=" << (claims["products_equal"].get<bool>() ? "yes" : "no") << '\n';
    for (const char* key : {"zero_line", "same_matrix", "single_line"}) {
        for (const auto& w : claims[key]["witnesses"]) {
            out << "    " << key << ": " << w.get<std::string>() << '\n';
        }
    }
}

void render_body(std::ostream& out, const Report& r) {
    const auto& f = r.facts;
    if (r.command == "validate") {
        const auto& v = f["violations"];
        out << f["file"].get<std::string>() << ": ";
        if (v.empty()) {
            out << "valid" << (f["strict"].get<bool>() ? " (strict)" : "") << '\n';
        } else {
            out << v.size() << (v.size() == 1 ? " violation" : " violations") << '\n';
            for (const auto& x : v) {
                out << "  " << x["rule"].get<std::string>() << ": " << x["message"].get<std::string>() << '\n';
            }
        }
    } else if (r.command == "complex") {
        for (auto it = f["bases"].rbegin(); it != f["bases"].rend(); ++it) {
            out << "C_" << (*it)["degree"].get<int>() << " = <" << join(strings((*it)["basis"]), ", ") << ">\n";
        }
        for (auto it = f["boundaries"].rbegin(); it != f["boundaries"].rend(); ++it) {
            out << '\n';
            render_matrix(out, *it);
        }
    } else if (r.command == "d2") {
        const auto& v = f["violations"];
        if (v.empty()) {
            out << "d^2 = 0\n";
        } else {
            out << "d^2 != 0 (" << v.size() << " nonzero " << (v.size() == 1 ? "entry" : "entries") << ")\n";
            render_d2_list(out, v);
        }
    } else if (r.command == "homology") {
        if (f.value("refused", false)) {
            out << "refused: boundary does not square to zero\n";
            render_d2_list(out, f["violations"]);
            return;
        }
        out << betti_text(f["betti"]) << '\n';
        out << "euler characteristic " << f["euler_characteristic"].get<int>() << '\n';
        if (!f["expected_betti"].is_null()) {
            if (f["matches_expected"].get<bool>()) {
                out << "matches expect-betti " << numbers_text(f["expected_betti"]) << '\n';
            } else {
                out << "note: does not match expect-betti " << numbers_text(f["expected_betti"]) << '\n';
            }
        }
    } else if (r.command == "perturb") {
        const auto& results = f["results"];
        out << "orbit " << f["orbit"].get<std::string>() << ": " << results.size()
            << (results.size() == 1 ? " resolution" : " resolutions") << '\n';
        for (const auto& res : results) {
            out << "#" << res["index"].get<int>() << ' ' << choice_text(res["choice"]);
            out << " (attaching degree " << res["attaching_degree"].get<int>() << ")";
            if (!res["file"].is_null()) out << " -> " << res["file"].get<std::string>();
            out << '\n';
            render_claims(out, res["claims"]);
            if (res.contains("system")) {
                out << res["system"].get<std::string>();
            }
        }
    } else if (r.command == "poset") {
        std::vector<std::string> nodes;
        for (const auto& n : f["nodes"]) {
            nodes.push_back(n["name"].get<std::string>() + ":" + std::to_string(n["label"].get<int>()));
        }
        out << "nodes: " << join(nodes, " ") << '\n' << "covers:\n";
        for (const auto& c : f["covers"]) {
            out << "  " << c[0].get<std::string>() << " < " << c[1].get<std::string>() << '\n';
        }
    } else if (r.command == "compare") {
        out << f["verdict"].get<std::string>() << '\n';
        if (!f["certificate"].is_null()) {
            out << "certificate: " << f["certificate"].get<std::string>() << '\n';
        }
        if (!f["mapping"].is_null()) {
            std::vector<std::string> pairs;
            for (const auto& m : f["mapping"]) {
                pairs.push_back(m[0].get<std::string>() + "->" + m[1].get<std::string>());
            }
            out << "mapping: " << join(pairs, " ") << '\n';
        }
    } else if (r.command == "census") {
        out << f["resolution_count"].get<int>() << " resolutions, " << f["class_count"].get<int>()
            << (f["class_count"].get<int>() == 1 ? " class" : " classes") << '\n';
        int k = 0;
        for (const auto& cls : f["classes"]) {
            out << "class " << ++k << ":\n";
            for (const auto& m : cls["members"]) {
                out << "  " << m["source"].get<std::string>() << "#" << m["index"].get<int>();
                std::vector<std::string> choices;
                for (const auto& c : m["choices"]) choices.push_back(choice_text(c));
                if (!choices.empty()) out << "  " << join(choices, "; ");
                out << '\n';
            }
        }
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Rendering

std::string render_text(const Report& report) {
    std::ostringstream out;
    if (report.facts.contains("error")) {
        out << "error: " << report.facts["error"].get<std::string>() << '\n';
        if (report.facts.contains("violations")) {
            for (const auto& v : report.facts["violations"]) {
                out << "  " << v["rule"].get<std::string>() << ": " << v["message"].get<std::string>() << '\n';
            }
        }
        if (report.facts.contains("failures")) {
            for (const auto& v : report.facts["failures"]) out << "  " << v.get<std::string>() << '\n';
        }
        if (report.facts.contains("hint")) {
            out << "hint: " << report.facts["hint"].get<std::string>() << '\n';
        }
        return out.str();
    }
    render_body(out, report);
    return out.str();
}

std::string render_json(const Report& report) {
    Json j;
    j["command"] = report.command;
    j["inputs"] = report.inputs;
    j["exit_status"] = report.exit_status;
    j["facts"] = report.facts;
    return j.dump(2) + "\n";
}

std::string fixture_dir() {
    if (const char* env = std::getenv("MSFLOW_FIXTURES"); env && *env) {
        return env;
    }
    return MSFLOW_DEFAULT_FIXTURE_DIR;
}

std::string resolve_input(const std::string& path) {
    if (fs::exists(path)) {
        return path;
    }
    const fs::path candidate = fs::path(fixture_dir()) / path;
    if (fs::exists(candidate)) {
        return candidate.string();
    }
    throw Error("cannot open '" + path + "' (also looked in " + fixture_dir() + ")");
}

// ---------------------------------------------------------------------------
// Commands

Report cmd_validate(const std::string& file, bool strict) {
    const auto s = load_system(file);
    const auto violations = flow::validate(s, strict);
    Report r{"validate", {file}, Json::object(), violations.empty() ? exit_ok : exit_input_error};
    r.facts["file"] = file;
    r.facts["strict"] = strict;
    r.facts["valid"] = violations.empty();
    r.facts["violations"] = violations_json(violations);
    return r;
}

Report cmd_complex(const std::string& file) {
    const auto s = load_system(file);
    ej::ChainComplexGF2 c;
    try {
        c = ej::build_complex(s);
    } catch (const flow::InvalidSystem& e) {
        return invalid_report("complex", {file}, e);
    }
    Report r{"complex", {file}, Json::object(), exit_ok};
    r.facts["dimension"] = c.top_degree();
    Json bases = Json::array();
    Json boundaries = Json::array();
    for (int k = 0; k <= c.top_degree(); ++k) {
        bases.push_back({{"degree", k}, {"basis", labels_of(c.basis(k))}});
        if (k >= 1) {
            boundaries.push_back({{"degree", k},
                                  {"rows", labels_of(c.basis(k - 1))},
                                  {"cols", labels_of(c.basis(k))},
                                  {"entries", c.boundary(k).to_rows()}});
        }
    }
    r.facts["bases"] = std::move(bases);
    r.facts["boundaries"] = std::move(boundaries);
    return r;
}

Report cmd_d2(const std::string& file) {
    const auto s = load_system(file);
    ej::ChainComplexGF2 c;
    try {
        c = ej::build_complex(s);
    } catch (const flow::InvalidSystem& e) {
        return invalid_report("d2", {file}, e);
    }
    const auto violations = ej::check_d2(c);
    Report r{"d2", {file}, Json::object(), exit_ok};
    r.facts["chain_complex"] = violations.empty();
    r.facts["violations"] = d2_json(violations);
    return r;
}

Report cmd_homology(const std::string& file) {
    const auto s = load_system(file);
    ej::ChainComplexGF2 c;
    try {
        c = ej::build_complex(s);
    } catch (const flow::InvalidSystem& e) {
        return invalid_report("homology", {file}, e);
    }
    Report r{"homology", {file}, Json::object(), exit_ok};
    try {
        const auto b = ej::betti(c);
        r.facts["betti"] = b;
        r.facts["euler_characteristic"] = ej::euler_characteristic(c);
        if (s.expected_betti) {
            r.facts["expected_betti"] = *s.expected_betti;
            r.facts["matches_expected"] = (*s.expected_betti == b);
        } else {
            r.facts["expected_betti"] = nullptr;
            r.facts["matches_expected"] = nullptr;
        }
    } catch (const ej::NotAChainComplex& e) {
        r.facts["refused"] = true;
        r.facts["violations"] = d2_json(e.violations());
        r.exit_status = exit_refused;
    }
    return r;
}

Report cmd_perturb(const std::string& file, const PerturbOptions& options) {
    const auto s = load_system(file);
    if (options.all == !options.choice_file.empty()) {
        return error_report("perturb", {file}, "exactly one of --all and --choice is required");
    }
    std::vector<perturb::ChoiceDescriptor> choices;
    std::string orbit = options.orbit;
    try {
        flow::require_valid(s);
        if (options.all) {
            if (orbit.empty()) {
                return error_report("perturb", {file}, "--all needs --orbit");
            }
            choices = perturb::enumerate_choices_2d(s, orbit);
        } else {
            auto d = perturb::load_choice(resolve_input(options.choice_file));
            if (!orbit.empty() && d.orbit != orbit) {
                return error_report("perturb", {file, options.choice_file},
                                    "descriptor is for orbit '" + d.orbit + "', not '" + orbit + "'");
            }
            orbit = d.orbit;
            choices.push_back(std::move(d));
        }
    } catch (const flow::InvalidSystem& e) {
        return invalid_report("perturb", {file}, e);
    }

    std::vector<std::string> inputs{file};
    if (!options.choice_file.empty()) inputs.push_back(options.choice_file);
    Report r{"perturb", inputs, Json::object(), exit_ok};
    r.facts["orbit"] = orbit;
    r.facts["mode"] = options.all ? "all" : "choice";

    if (options.all) {
        const std::string dir = options.out.empty() ? "." : options.out;
        fs::create_directories(dir);
    }
    Json results = Json::array();
    for (std::size_t i = 0; i < choices.size(); ++i) {
        perturb::PerturbationResult result;
        try {
            result = perturb::apply_choice(s, choices[i]);
        } catch (const perturb::ChoiceError& e) {
            auto err = error_report("perturb", inputs, "invalid choice descriptor");
            err.facts["failures"] = e.failures();
            return err;
        }
        Json entry;
        entry["index"] = i + 1;
        entry["choice"] = choice_json(result.choice);
        entry["attaching_degree"] = result.attaching_degree;
        entry["claims"] = claims_json(result.claims);

        std::ostringstream body;
        body << "# " << orbit << " resolution " << i + 1 << " of " << choices.size() << " from "
             << fs::path(file).filename().string() << '\n';
        std::istringstream choice_lines(perturb::serialize_choice(result.choice));
        for (std::string line; std::getline(choice_lines, line);) {
            body << "# choice: " << line << '\n';
        }
        body << flow::serialize_msf(result.system);

        std::string target;
        if (options.all) {
            std::string number = std::to_string(i + 1);
            if (number.size() < 2) number.insert(0, "0");
            const std::string suffix = "-" + number + ".msf";
            target = (fs::path(options.out.empty() ? "." : options.out) /
                      (fs::path(file).stem().string() + "-" + orbit + suffix))
                         .string();
        } else if (!options.out.empty()) {
            target = options.out;
        }
        if (!target.empty()) {
            std::ofstream out(target, std::ios::binary);
            if (!out) {
                return error_report("perturb", inputs, "cannot write '" + target + "'");
            }
            out << body.str();
            entry["file"] = target;
        } else {
            entry["file"] = nullptr;
            entry["system"] = body.str();
        }
        results.push_back(std::move(entry));
    }
    r.facts["results"] = std::move(results);
    return r;
}

Report cmd_poset(const std::string& file) {
    poset::LabeledPoset p;
    if (is_pos_file(file)) {
        p = poset::load_pos(resolve_input(file));
    } else {
        const auto s = load_system(file);
        if (s.has_orbits()) {
            auto r = error_report("poset", {file}, "system contains closed orbits");
            r.facts["hint"] = "run 'msflow perturb' first to obtain gradient-like systems";
            return r;
        }
        try {
            flow::require_valid(s);
        } catch (const flow::InvalidSystem& e) {
            return invalid_report("poset", {file}, e);
        }
        p = poset::face_poset(s);
    }
    Report r{"poset", {file}, Json::object(), exit_ok};
    Json nodes = Json::array();
    for (std::size_t i = 0; i < p.size(); ++i) {
        nodes.push_back({{"name", p.name(i)}, {"label", p.label(i)}});
    }
    Json covers = Json::array();
    for (const auto& [a, b] : p.hasse()) {
        covers.push_back({p.name(a), p.name(b)});
    }
    r.facts["nodes"] = std::move(nodes);
    r.facts["covers"] = std::move(covers);
    return r;
}

Report cmd_compare(const std::string& file_a, const std::string& file_b) {
    const std::vector<std::string> inputs{file_a, file_b};
    Report r{"compare", inputs, Json::object(), exit_ok};

    if (!is_pos_file(file_a) && !is_pos_file(file_b)) {
        const auto a = load_system(file_a);
        const auto b = load_system(file_b);
        for (const auto* s : {&a, &b}) {
            if (s->has_orbits()) {
                auto err = error_report("compare", inputs,
                                        (s == &a ? file_a : file_b) + " contains closed orbits");
                err.facts["hint"] = "run 'msflow perturb' first to obtain gradient-like systems";
                return err;
            }
            try {
                flow::require_valid(*s);
            } catch (const flow::InvalidSystem& e) {
                return invalid_report("compare", inputs, e);
            }
        }
        const auto v = poset::cell_equivalence_verdict(a, b);
        r.facts["kind"] = "flow";
        r.facts["isomorphic"] = v.mapping.has_value();
        r.facts["verdict"] = v.headline();
        r.facts["certificate"] = v.certificate;
        r.facts["mapping"] = mapping_json(v.mapping);
        return r;
    }

    const auto load_any = [&](const std::string& file) {
        if (is_pos_file(file)) {
            return poset::load_pos(resolve_input(file));
        }
        const auto s = load_system(file);
        if (s.has_orbits()) {
            throw Error(file + " contains closed orbits; run 'msflow perturb' first");
        }
        return poset::face_poset(s);
    };
    const auto iso = poset::is_isomorphic(load_any(file_a), load_any(file_b));
    r.facts["kind"] = "poset";
    r.facts["isomorphic"] = iso.isomorphic;
    r.facts["verdict"] = iso.isomorphic ? "isomorphic" : "not isomorphic";
    r.facts["certificate"] = iso.certificate ? Json(*iso.certificate) : Json(nullptr);
    r.facts["mapping"] = mapping_json(iso.mapping);
    return r;
}

Report cmd_census(const std::vector<std::string>& files) {
    std::vector<perturb::Resolution> all;
    std::vector<std::pair<std::string, std::size_t>> origin;
    for (const auto& file : files) {
        const auto s = load_system(file);
        try {
            flow::require_valid(s);
        } catch (const flow::InvalidSystem& e) {
            return invalid_report("census", files, e);
        }
        auto resolutions = perturb::resolve_all_with_choices(s);
        for (std::size_t i = 0; i < resolutions.size(); ++i) {
            origin.emplace_back(file, i + 1);
            all.push_back(std::move(resolutions[i]));
        }
    }
    const auto report = poset::census_of(std::move(all));

    Report r{"census", files, Json::object(), exit_ok};
    r.facts["resolution_count"] = report.resolutions.size();
    r.facts["class_count"] = report.classes.size();
    Json classes = Json::array();
    for (const auto& cls : report.classes) {
        Json members = Json::array();
        for (std::size_t m : cls.members) {
            Json choices = Json::array();
            for (const auto& c : report.resolutions[m].choices) choices.push_back(choice_json(c));
            members.push_back({{"source", origin[m].first}, {"index", origin[m].second}, {"choices", choices}});
        }
        classes.push_back({{"representative", {{"source", origin[cls.representative].first},
                                                {"index", origin[cls.representative].second}}},
                           {"members", std::move(members)}});
    }
    r.facts["classes"] = std::move(classes);
    return r;
}

// ---------------------------------------------------------------------------
// Entry point

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Combinatorial Morse-Smale flows: chain complexes, orbit removal and face posets", "msflow"};
    app.require_subcommand(1);
    bool json = false;
    app.add_flag("--json", json, "Structured JSON output");
    app.fallthrough();

    std::string file;
    std::string file_b;
    std::vector<std::string> files;
    bool strict = false;
    PerturbOptions perturb_options;

    auto* validate = app.add_subcommand("validate", "Check a .msf system against the structural rules");
    validate->add_option("file", file, "System file (.msf)")->required();
    validate->add_flag("--strict", strict, "Apply the 2D saddle degree rule");

    auto* complex = app.add_subcommand("complex", "Print the Eidi-Jost complex over GF(2)");
    complex->add_option("file", file, "System file (.msf)")->required();

    auto* d2 = app.add_subcommand("d2", "List nonzero entries of the squared boundary");
    d2->add_option("file", file, "System file (.msf)")->required();

    auto* homology = app.add_subcommand("homology", "GF(2) Betti numbers (exit 2 when d^2 != 0)");
    homology->add_option("file", file, "System file (.msf)")->required();

    auto* perturb_cmd = app.add_subcommand("perturb", "Replace a closed orbit by a rest-point pair");
    perturb_cmd->add_option("file", file, "System file (.msf)")->required();
    perturb_cmd->add_option("--orbit", perturb_options.orbit, "Orbit to remove");
    perturb_cmd->add_flag("--all", perturb_options.all, "Write every enumerated resolution (2D only)");
    perturb_cmd->add_option("--choice", perturb_options.choice_file, "Choice descriptor (.msc)");
    perturb_cmd->add_option("--out", perturb_options.out, "Output directory (--all) or file (--choice)");

    auto* poset_cmd = app.add_subcommand("poset", "Print the face poset of a gradient-like system or .pos file");
    poset_cmd->add_option("file", file, "System (.msf) or poset (.pos) file")->required();

    auto* compare = app.add_subcommand("compare", "Cell-equivalence necessary conditions / poset isomorphism");
    compare->add_option("a", file, "First file")->required();
    compare->add_option("b", file_b, "Second file")->required();

    auto* census_cmd = app.add_subcommand("census", "Group all resolutions by face-poset isomorphism");
    census_cmd->add_option("files", files, "System files (.msf)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_input_error;
    }

    Report report;
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    try {
        if (sub == validate) report = cmd_validate(file, strict);
        else if (sub == complex) report = cmd_complex(file);
        else if (sub == d2) report = cmd_d2(file);
        else if (sub == homology) report = cmd_homology(file);
        else if (sub == perturb_cmd) report = cmd_perturb(file, perturb_options);
        else if (sub == poset_cmd) report = cmd_poset(file);
        else if (sub == compare) report = cmd_compare(file, file_b);
        else report = cmd_census(files);
    } catch (const std::exception& e) {
        std::vector<std::string> inputs = files.empty() ? std::vector<std::string>{file} : files;
        if (!file_b.empty()) inputs.push_back(file_b);
        report = error_report(name, inputs, e.what());
    }

    if (json) {
        out << render_json(report);
    } else if (report.facts.contains("error")) {
        err << render_text(report);
    } else {
        out << render_text(report);
    }
    return report.exit_status;
}

} // namespace msflow::cli
