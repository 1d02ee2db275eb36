#include "msflow/msf_format.hpp"

#include "text_lines.hpp"

#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace msflow::flow {

using detail::parse_integer;

bool is_valid_name(std::string_view name) {
    if (name.empty()) {
        return false;
    }
    const auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
    const auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(name.front())) {
        return false;
    }
    for (char c : name.substr(1)) {
        if (!alpha(c) && !digit(c) && c != '_') {
            return false;
        }
    }
    return true;
}

namespace {

struct PendingConn {
    std::size_t line;
    std::string source;
    std::string target;
    int count;
};

void expect_arity(std::size_t line, const std::vector<std::string_view>& words, std::size_t n,
                  std::string_view usage) {
    if (words.size() != n) {
        throw ParseError(line, "expected '" + std::string(usage) + "'");
    }
}

std::string checked_name(std::size_t line, std::string_view word) {
    if (!is_valid_name(word)) {
        throw ParseError(line, "invalid name '" + std::string(word) + "'");
    }
    return std::string(word);
}

} // namespace

FlowSystem parse_msf(std::string_view text) {
    FlowSystem s;
    bool have_dim = false;
    std::set<std::string> names;
    std::set<std::pair<std::string, std::string>> conn_seen;
    std::vector<PendingConn> conns;

    detail::for_each_directive(text, [&](std::size_t line, const std::vector<std::string_view>& words,
                                         std::string_view content) {
        const auto directive = words.front();
        if (directive == "dim") {
            expect_arity(line, words, 2, "dim <n>");
            if (have_dim) {
                throw ParseError(line, "duplicate dim directive");
            }
            s.dimension = static_cast<int>(parse_integer(words[1], line, "dimension"));
            have_dim = true;
        } else if (directive == "label") {
            if (s.label) {
                throw ParseError(line, "duplicate label directive");
            }
            s.label = std::string(detail::trim(content.substr(5)));
        } else if (directive == "expect-betti") {
            if (s.expected_betti) {
                throw ParseError(line, "duplicate expect-betti directive");
            }
            std::vector<int> betti;
            for (std::size_t i = 1; i < words.size(); ++i) {
                const long b = parse_integer(words[i], line, "Betti number");
                if (b < 0) {
                    throw ParseError(line, "negative Betti number");
                }
                betti.push_back(static_cast<int>(b));
            }
            s.expected_betti = std::move(betti);
        } else if (directive == "rest" || directive == "orbit") {
            const bool orbit = directive == "orbit";
            expect_arity(line, words, orbit ? 4 : 3,
                         orbit ? "orbit <name> <index> <twisted|untwisted>" : "rest <name> <index>");
            auto name = checked_name(line, words[1]);
            if (!names.insert(name).second) {
                throw ParseError(line, "duplicate element name '" + name + "'");
            }
            const int index = static_cast<int>(parse_integer(words[2], line, "index"));
            if (orbit) {
                if (words[3] != "twisted" && words[3] != "untwisted") {
                    throw ParseError(line, "expected 'twisted' or 'untwisted', got '" + std::string(words[3]) + "'");
                }
                s.elements.push_back(CriticalElement::orbit(std::move(name), index, words[3] == "twisted"));
            } else {
                s.elements.push_back(CriticalElement::rest(std::move(name), index));
            }
        } else if (directive == "conn") {
            expect_arity(line, words, 4, "conn <source> <target> <count>");
            auto source = checked_name(line, words[1]);
            auto target = checked_name(line, words[2]);
            const long count = parse_integer(words[3], line, "count");
            if (count <= 0) {
                throw ParseError(line, "non-positive count " + std::to_string(count));
            }
            if (source == target) {
                throw ParseError(line, "self-connection on '" + source + "'");
            }
            if (!conn_seen.insert({source, target}).second) {
                throw ParseError(line, "duplicate conn line for " + source + " -> " + target);
            }
            conns.push_back({line, std::move(source), std::move(target), static_cast<int>(count)});
        } else {
            throw ParseError(line, "unknown directive '" + std::string(directive) + "'");
        }
    });

    if (!have_dim) {
        throw ParseError(0, "missing dim directive");
    }
    for (const auto& c : conns) {
        for (const auto* name : {&c.source, &c.target}) {
            if (!names.count(*name)) {
                throw ParseError(c.line, "unknown element '" + *name + "'");
            }
        }
        s.connections.set(c.source, c.target, c.count);
    }
    return s;
}

FlowSystem parse_msf(std::istream& in) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_msf(text);
}

FlowSystem load_msf(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    return parse_msf(in);
}

std::string serialize_msf(const FlowSystem& s) {
    std::ostringstream out;
    out << "dim " << s.dimension << '\n';
    if (s.label) {
        out << "label " << *s.label << '\n';
    }
    if (s.expected_betti) {
        out << "expect-betti";
        for (int b : *s.expected_betti) {
            out << ' ' << b;
        }
        out << '\n';
    }
    for (const auto& e : s.elements) {
        if (e.is_orbit()) {
            out << "orbit " << e.name << ' ' << e.index << ' ' << (e.twisted ? "twisted" : "untwisted") << '\n';
        } else {
            out << "rest " << e.name << ' ' << e.index << '\n';
        }
    }
    for (const auto& [key, count] : s.connections) {
        out << "conn " << key.first << ' ' << key.second << ' ' << count << '\n';
    }
    return out.str();
}

} // namespace msflow::flow
