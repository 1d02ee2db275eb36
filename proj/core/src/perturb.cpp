#include "msflow/perturb.hpp"

#include "msflow/msf_format.hpp"
#include "text_lines.hpp"

#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <stdexcept>

namespace msflow::perturb {

using flow::CriticalElement;
using flow::FlowSystem;

// ---------------------------------------------------------------------------
// .msc format

ChoiceDescriptor parse_choice(std::string_view text) {
    ChoiceDescriptor d;
    bool have_orbit = false;
    bool have_new = false;
    std::set<std::pair<std::string, std::string>> seen;

    detail::for_each_directive(text, [&](std::size_t line, const std::vector<std::string_view>& words,
                                         std::string_view) {
        const auto directive = words.front();
        const auto name_at = [&](std::size_t i) {
            if (!flow::is_valid_name(words[i])) {
                throw ParseError(line, "invalid name '" + std::string(words[i]) + "'");
            }
            return std::string(words[i]);
        };
        if (directive == "orbit") {
            if (words.size() != 2) throw ParseError(line, "expected 'orbit <name>'");
            if (have_orbit) throw ParseError(line, "duplicate orbit directive");
            d.orbit = name_at(1);
            have_orbit = true;
        } else if (directive == "new") {
            if (words.size() != 3) throw ParseError(line, "expected 'new <p-name> <q-name>'");
            if (have_new) throw ParseError(line, "duplicate new directive");
            d.p_name = name_at(1);
            d.q_name = name_at(2);
            have_new = true;
        } else if (directive == "pout" || directive == "qout" || directive == "pin" || directive == "qin") {
            if (words.size() != 3) {
                throw ParseError(line, "expected '" + std::string(directive) + " <name> <count>'");
            }
            auto name = name_at(1);
            const long count = detail::parse_integer(words[2], line, "count");
            if (count <= 0) {
                throw ParseError(line, "non-positive count " + std::to_string(count));
            }
            if (!seen.insert({std::string(directive), name}).second) {
                throw ParseError(line, "duplicate " + std::string(directive) + " line for '" + name + "'");
            }
            auto& target = directive == "pout" ? d.p_out
                           : directive == "qout" ? d.q_out
                           : directive == "pin"  ? d.p_in
                                                 : d.q_in;
            target[name] = static_cast<int>(count);
        } else {
            throw ParseError(line, "unknown directive '" + std::string(directive) + "'");
        }
    });
    if (!have_orbit) throw ParseError(0, "missing orbit directive");
    if (!have_new) throw ParseError(0, "missing new directive");
    return d;
}

ChoiceDescriptor load_choice(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_choice(text);
}

std::string serialize_choice(const ChoiceDescriptor& d) {
    std::ostringstream out;
    out << "orbit " << d.orbit << '\n' << "new " << d.p_name << ' ' << d.q_name << '\n';
    const auto emit = [&](const char* directive, const CountMap& m) {
        for (const auto& [name, count] : m) {
            out << directive << ' ' << name << ' ' << count << '\n';
        }
    };
    emit("pout", d.p_out);
    emit("qout", d.q_out);
    emit("pin", d.p_in);
    emit("qin", d.q_in);
    return out.str();
}

// ---------------------------------------------------------------------------
// Descriptor checks and application

ChoiceError::ChoiceError(std::vector<std::string> failures)
    : Error([&] {
          std::string msg = "invalid choice descriptor";
          for (const auto& f : failures) {
              msg += "\n  " + f;
          }
          return msg;
      }()),
      failures_(std::move(failures)) {}

std::vector<std::string> check_choice(const FlowSystem& s, const ChoiceDescriptor& d) {
    std::vector<std::string> failures;
    const auto* gamma = s.find(d.orbit);
    if (!gamma) {
        failures.push_back("orbit: no element named '" + d.orbit + "'");
        return failures;
    }
    if (!gamma->is_orbit()) {
        failures.push_back("orbit: '" + d.orbit + "' is a rest point, not a closed orbit");
        return failures;
    }
    for (const auto* name : {&d.p_name, &d.q_name}) {
        if (!flow::is_valid_name(*name)) {
            failures.push_back("names: invalid name '" + *name + "'");
        } else if (s.find(*name)) {
            failures.push_back("names: '" + *name + "' collides with an existing element");
        }
    }
    if (d.p_name == d.q_name) {
        failures.push_back("names: p and q are both named '" + d.p_name + "'");
    }

    std::set<std::string> downstream;
    std::set<std::string> upstream;
    for (const auto& link : flow::direct_downstream(s, d.orbit)) downstream.insert(link.name);
    for (const auto& link : flow::direct_upstream(s, d.orbit)) upstream.insert(link.name);

    const auto p = CriticalElement::rest(d.p_name, gamma->index + 1);
    const auto q = CriticalElement::rest(d.q_name, gamma->index);
    const int n = s.dimension;

    const auto check_map = [&](const char* field, const CountMap& m, const std::set<std::string>& allowed,
                               const CriticalElement& fresh, bool outgoing) {
        for (const auto& [name, count] : m) {
            if (count <= 0) {
                failures.push_back(std::string(field) + ": non-positive count " + std::to_string(count) + " for '" +
                                   name + "'");
            }
            if (!allowed.count(name)) {
                failures.push_back(std::string("support: ") + field + " names '" + name + "', which is not " +
                                   (outgoing ? "downstream" : "upstream") + " of " + d.orbit);
                continue;
            }
            const auto& other = s.at(name);
            const bool ok = outgoing ? flow::dimension_rule_allows(fresh, other, n)
                                     : flow::dimension_rule_allows(other, fresh, n);
            if (!ok) {
                const auto& src = outgoing ? fresh : other;
                const auto& dst = outgoing ? other : fresh;
                failures.push_back(std::string("dimension: ") + field + " connection " + src.name + " -> " +
                                   dst.name + " needs u+s >= " + std::to_string(n + 1) + ", has " +
                                   std::to_string(src.unstable_dim() + dst.stable_dim(n)));
            }
        }
    };
    check_map("pout", d.p_out, downstream, p, true);
    check_map("qout", d.q_out, downstream, q, true);
    check_map("pin", d.p_in, upstream, p, false);
    check_map("qin", d.q_in, upstream, q, false);

    for (const auto& name : downstream) {
        if (!d.p_out.count(name) && !d.q_out.count(name)) {
            failures.push_back("coverage: downstream element '" + name + "' assigned to neither p nor q");
        }
    }
    for (const auto& name : upstream) {
        if (!d.p_in.count(name) && !d.q_in.count(name)) {
            failures.push_back("coverage: upstream element '" + name + "' assigned to neither p nor q");
        }
    }
    return failures;
}

namespace {

bool is_repelling_orbit(const CriticalElement& e, int n) { return e.index == n - 1; }

PerturbationResult apply_impl(const FlowSystem& s, const ChoiceDescriptor& d, bool with_claims) {
    const auto& gamma = s.at(d.orbit);
    auto failures = check_choice(s, d);
    if (!failures.empty()) {
        throw ChoiceError(std::move(failures));
    }
    auto skeleton = flow::remove_orbit_stub(s, d.orbit, d.p_name, d.q_name);
    auto& conns = skeleton.system.connections;
    for (const auto& [name, count] : d.p_out) conns.set(d.p_name, name, count);
    for (const auto& [name, count] : d.q_out) conns.set(d.q_name, name, count);
    for (const auto& [name, count] : d.p_in) conns.set(name, d.p_name, count);
    for (const auto& [name, count] : d.q_in) conns.set(name, d.q_name, count);

    PerturbationResult result{std::move(skeleton.system), d, skeleton.attaching_degree, std::nullopt};
    if (with_claims && (is_repelling_orbit(gamma, s.dimension) || gamma.index == 0)) {
        try {
            result.claims = verify_franks_claims(s, result);
        } catch (const flow::InvalidSystem&) {
            result.claims.reset();
        }
    }
    return result;
}

std::vector<CountMap> size_two_multisets(const std::vector<std::string>& pool) {
    std::vector<CountMap> out;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (std::size_t j = i; j < pool.size(); ++j) {
            CountMap m;
            ++m[pool[i]];
            ++m[pool[j]];
            out.push_back(std::move(m));
        }
    }
    return out;
}

CountMap to_counts(const std::vector<flow::Link>& links) {
    CountMap m;
    for (const auto& link : links) {
        m[link.name] = link.count;
    }
    return m;
}

} // namespace

PerturbationResult apply_choice(const FlowSystem& s, const ChoiceDescriptor& d) {
    return apply_impl(s, d, true);
}

std::vector<ChoiceDescriptor> enumerate_choices_2d(const FlowSystem& s, const std::string& orbit) {
    return enumerate_choices_2d(s, orbit, "p_" + orbit, "q_" + orbit);
}

std::vector<ChoiceDescriptor> enumerate_choices_2d(const FlowSystem& s, const std::string& orbit,
                                                   const std::string& p_name, const std::string& q_name) {
    if (s.dimension != 2) {
        throw Error("choice enumeration is only supported for n=2 (system has n=" + std::to_string(s.dimension) +
                    "); supply an explicit descriptor");
    }
    const auto& gamma = s.at(orbit);
    if (!gamma.is_orbit()) {
        throw Error("'" + orbit + "' is a rest point, not a closed orbit");
    }
    if (gamma.index != 0 && gamma.index != 1) {
        throw Error("orbit '" + orbit + "' has index " + std::to_string(gamma.index) + ", outside 0..1");
    }
    const auto downstream = flow::direct_downstream(s, orbit);
    const auto upstream = flow::direct_upstream(s, orbit);
    const auto p = CriticalElement::rest(p_name, gamma.index + 1);
    const auto q = CriticalElement::rest(q_name, gamma.index);

    std::vector<ChoiceDescriptor> out;
    if (gamma.index == 1) {
        if (!upstream.empty()) {
            throw Error("repelling orbit '" + orbit + "' has incoming connections");
        }
        std::vector<std::string> sinks;
        for (const auto& link : downstream) {
            if (flow::dimension_rule_allows(q, s.at(link.name), 2)) {
                sinks.push_back(link.name);
            }
        }
        for (auto& q_out : size_two_multisets(sinks)) {
            out.push_back({orbit, p_name, q_name, to_counts(downstream), std::move(q_out), {}, {}});
        }
    } else {
        if (!downstream.empty()) {
            throw Error("attracting orbit '" + orbit + "' has outgoing connections");
        }
        std::vector<std::string> sources;
        for (const auto& link : upstream) {
            if (flow::dimension_rule_allows(s.at(link.name), p, 2)) {
                sources.push_back(link.name);
            }
        }
        for (auto& p_in : size_two_multisets(sources)) {
            out.push_back({orbit, p_name, q_name, {}, {}, std::move(p_in), to_counts(upstream)});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Claim verification

namespace {

ClaimOutcome zero_row(const ej::ChainComplexGF2& c, int k, const std::string& label, const char* which) {
    ClaimOutcome out;
    const auto row = c.find(k - 1, label);
    if (row == ej::ChainComplexGF2::npos) {
        out.status = ClaimStatus::fail;
        out.witnesses.push_back(std::string(which) + ": no basis element " + label + " in degree " +
                                std::to_string(k - 1));
        return out;
    }
    const auto& d = c.boundary(k);
    for (std::size_t col = 0; col < d.cols(); ++col) {
        if (d.get(row, col)) {
            out.status = ClaimStatus::fail;
            out.witnesses.push_back(std::string(which) + ": d" + std::to_string(k) + "[" + label + ", " +
                                    c.basis(k)[col].label() + "] = 1");
        }
    }
    return out;
}

ClaimOutcome zero_col(const ej::ChainComplexGF2& c, int k, const std::string& label, const char* which) {
    ClaimOutcome out;
    const auto col = c.find(k, label);
    if (col == ej::ChainComplexGF2::npos) {
        out.status = ClaimStatus::fail;
        out.witnesses.push_back(std::string(which) + ": no basis element " + label + " in degree " +
                                std::to_string(k));
        return out;
    }
    const auto& d = c.boundary(k);
    for (std::size_t row = 0; row < d.rows(); ++row) {
        if (d.get(row, col)) {
            out.status = ClaimStatus::fail;
            out.witnesses.push_back(std::string(which) + ": d" + std::to_string(k) + "[" +
                                    c.basis(k - 1)[row].label() + ", " + label + "] = 1");
        }
    }
    return out;
}

void merge(ClaimOutcome& into, const ClaimOutcome& from) {
    if (!from.passed()) into.status = ClaimStatus::fail;
    into.witnesses.insert(into.witnesses.end(), from.witnesses.begin(), from.witnesses.end());
}

std::string cell_text(const ej::DiffCell& cell) {
    return "d" + std::to_string(cell.degree) + "[" + cell.row + ", " + cell.col + "] " + (cell.in_a ? "1" : "0") +
           " vs " + (cell.in_b ? "1" : "0");
}

// Product d_low * d_high of each complex, compared entrywise under the
// label correspondence (rows of degree low-1, columns of degree high).
bool products_match(const ej::ChainComplexGF2& a, const ej::ChainComplexGF2& b, int high,
                    const ej::BasisCorrespondence& corr, bool& both_zero) {
    const int low = high - 1;
    const auto pa = gf2::multiply(a.boundary(low), a.boundary(high));
    const auto pb = gf2::multiply(b.boundary(low), b.boundary(high));
    both_zero = pa.is_zero() && pb.is_zero();
    const auto mapped = [&](int k, std::size_t i) {
        const auto label = a.basis(k)[i].label();
        const auto it = corr.find(label);
        return b.find(k, it == corr.end() ? label : it->second);
    };
    for (std::size_t c = 0; c < pa.cols(); ++c) {
        for (std::size_t r = 0; r < pa.rows(); ++r) {
            if (pa.get(r, c) != pb.get(mapped(low - 1, r), mapped(high, c))) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

ClaimsReport verify_franks_claims(const FlowSystem& before, const PerturbationResult& after) {
    const auto& d = after.choice;
    const auto& gamma = before.at(d.orbit);
    const int n = before.dimension;
    const int k = gamma.index;
    const bool repeller = is_repelling_orbit(gamma, n);
    if (!gamma.is_orbit() || (!repeller && k != 0)) {
        throw std::invalid_argument("claims apply to repelling or attracting orbits only; '" + d.orbit +
                                    "' has index " + std::to_string(k) + " in dimension " + std::to_string(n));
    }

    const auto a = ej::build_complex(before);
    const auto b = ej::build_complex(after.system);
    const std::string minus = d.orbit + "-";
    const std::string plus = d.orbit + "+";
    const ej::BasisCorrespondence corr{{plus, d.p_name}, {minus, d.q_name}};
    const auto diff = ej::compare_matrices(a, b, corr);

    ClaimsReport report;
    report.mirrored = !repeller;
    if (repeller) {
        merge(report.zero_line, zero_row(a, k + 1, minus, "before"));
        merge(report.zero_line, zero_row(b, k + 1, d.q_name, "after"));
        for (const auto& cell : diff.by_degree.at(k + 1)) {
            report.same_matrix.status = ClaimStatus::fail;
            report.same_matrix.witnesses.push_back(cell_text(cell));
        }
        if (k >= 1) {
            for (const auto& cell : diff.by_degree.at(k)) {
                if (cell.col != minus) {
                    report.single_line.status = ClaimStatus::fail;
                    report.single_line.witnesses.push_back(cell_text(cell));
                }
            }
        }
        report.products_equal = k >= 1 ? products_match(a, b, k + 1, corr, report.products_zero) : true;
        if (k < 1) report.products_zero = true;
    } else {
        merge(report.zero_line, zero_col(a, 1, plus, "before"));
        merge(report.zero_line, zero_col(b, 1, d.p_name, "after"));
        for (const auto& cell : diff.by_degree.at(1)) {
            report.same_matrix.status = ClaimStatus::fail;
            report.same_matrix.witnesses.push_back(cell_text(cell));
        }
        if (n >= 2) {
            for (const auto& cell : diff.by_degree.at(2)) {
                if (cell.row != plus) {
                    report.single_line.status = ClaimStatus::fail;
                    report.single_line.witnesses.push_back(cell_text(cell));
                }
            }
            report.products_equal = products_match(a, b, 2, corr, report.products_zero);
        } else {
            report.products_equal = true;
            report.products_zero = true;
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Full resolution

namespace {

void resolve_rec(const FlowSystem& current, const std::vector<std::string>& orbits, std::size_t next,
                 std::vector<ChoiceDescriptor>& path, const std::map<std::string, ChoiceDescriptor>& explicit_choices,
                 std::vector<Resolution>& out) {
    if (next == orbits.size()) {
        out.push_back({current, path});
        return;
    }
    const auto& orbit = orbits[next];
    std::vector<ChoiceDescriptor> choices;
    if (const auto it = explicit_choices.find(orbit); it != explicit_choices.end()) {
        choices.push_back(it->second);
    } else if (current.dimension == 2) {
        choices = enumerate_choices_2d(current, orbit);
    } else {
        throw Error("enumeration unsupported for n=" + std::to_string(current.dimension) +
                    "; supply an explicit descriptor for orbit '" + orbit + "'");
    }
    for (const auto& choice : choices) {
        auto result = apply_impl(current, choice, false);
        path.push_back(choice);
        resolve_rec(result.system, orbits, next + 1, path, explicit_choices, out);
        path.pop_back();
    }
}

} // namespace

std::vector<Resolution> resolve_all_with_choices(const FlowSystem& s,
                                                 const std::map<std::string, ChoiceDescriptor>& explicit_choices) {
    std::vector<std::string> orbits;
    for (const auto& e : s.elements) {
        if (e.is_orbit()) {
            orbits.push_back(e.name);
        }
    }
    for (const auto& [name, d] : explicit_choices) {
        if (d.orbit != name) {
            throw Error("descriptor keyed by '" + name + "' describes orbit '" + d.orbit + "'");
        }
        const auto* e = s.find(name);
        if (!e || !e->is_orbit()) {
            throw Error("descriptor given for '" + name + "', which is not an orbit of the system");
        }
    }
    std::vector<Resolution> out;
    std::vector<ChoiceDescriptor> path;
    resolve_rec(s, orbits, 0, path, explicit_choices, out);
    return out;
}

std::vector<FlowSystem> resolve_all(const FlowSystem& s,
                                    const std::map<std::string, ChoiceDescriptor>& explicit_choices) {
    std::vector<FlowSystem> out;
    for (auto& r : resolve_all_with_choices(s, explicit_choices)) {
        out.push_back(std::move(r.system));
    }
    return out;
}

} // namespace msflow::perturb
