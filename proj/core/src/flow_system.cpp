#include "msflow/flow_system.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace msflow::flow {

CriticalElement CriticalElement::rest(std::string name, int index) {
    return CriticalElement{std::move(name), ElementKind::rest_point, index, false};
}

CriticalElement CriticalElement::orbit(std::string name, int index, bool twisted) {
    return CriticalElement{std::move(name), ElementKind::closed_orbit, index, twisted};
}

int ConnectionMap::count(const std::string& source, const std::string& target) const {
    const auto it = pairs_.find(Key{source, target});
    return it == pairs_.end() ? 0 : it->second;
}

void ConnectionMap::set(const std::string& source, const std::string& target, int count) {
    if (source == target) {
        throw std::invalid_argument("self-connection on '" + source + "'");
    }
    if (count < 0) {
        throw std::invalid_argument("negative connection count");
    }
    if (count == 0) {
        pairs_.erase(Key{source, target});
    } else {
        pairs_[Key{source, target}] = count;
    }
}

void ConnectionMap::erase(const std::string& source, const std::string& target) {
    pairs_.erase(Key{source, target});
}

ConnectionMap::Storage ConnectionMap::remove_touching(const std::string& name) {
    Storage removed;
    for (auto it = pairs_.begin(); it != pairs_.end();) {
        if (it->first.first == name || it->first.second == name) {
            removed.insert(*it);
            it = pairs_.erase(it);
        } else {
            ++it;
        }
    }
    return removed;
}

const CriticalElement* FlowSystem::find(const std::string& name) const {
    const auto it = std::find_if(elements.begin(), elements.end(),
                                 [&](const CriticalElement& e) { return e.name == name; });
    return it == elements.end() ? nullptr : &*it;
}

const CriticalElement& FlowSystem::at(const std::string& name) const {
    if (const auto* e = find(name)) {
        return *e;
    }
    throw UnknownElement(name);
}

std::optional<std::size_t> FlowSystem::position(const std::string& name) const {
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (elements[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

bool FlowSystem::has_orbits() const {
    return std::any_of(elements.begin(), elements.end(),
                       [](const CriticalElement& e) { return e.is_orbit(); });
}

int FlowSystem::alternating_rest_count() const {
    int total = 0;
    for (const auto& e : elements) {
        if (e.is_rest()) {
            total += (e.index % 2 == 0) ? 1 : -1;
        }
    }
    return total;
}

bool same_structure(const FlowSystem& a, const FlowSystem& b) {
    return a.dimension == b.dimension && a.elements == b.elements && a.connections == b.connections;
}

std::string to_string(const Violation& v) {
    std::string out = v.rule + ": " + v.message;
    return out;
}

InvalidSystem::InvalidSystem(std::vector<Violation> violations)
    : Error([&] {
          std::string msg = "invalid system (" + std::to_string(violations.size()) + " violation";
          msg += violations.size() == 1 ? ")" : "s)";
          if (!violations.empty()) {
              msg += ": " + to_string(violations.front());
          }
          return msg;
      }()),
      violations_(std::move(violations)) {}

void require_valid(const FlowSystem& s, bool strict) {
    auto violations = validate(s, strict);
    if (!violations.empty()) {
        throw InvalidSystem(std::move(violations));
    }
}

bool dimension_rule_allows(const CriticalElement& source, const CriticalElement& target, int n) {
    return source.unstable_dim() + target.stable_dim(n) >= n + 1;
}

namespace {

std::string describe(const CriticalElement& e) {
    return std::string(e.is_orbit() ? "orbit " : "rest point ") + e.name + " (index " +
           std::to_string(e.index) + ")";
}

bool is_attractor(const CriticalElement& e) { return e.index == 0; }

bool is_repeller(const CriticalElement& e, int n) {
    return e.is_rest() ? e.index == n : e.index == n - 1;
}

std::vector<std::string> cycle_in(const FlowSystem& s) {
    // Colors: 0 unvisited, 1 on the DFS stack, 2 finished.
    const std::size_t count = s.elements.size();
    std::vector<std::vector<std::size_t>> adj(count);
    for (const auto& [key, c] : s.connections) {
        const auto from = s.position(key.first);
        const auto to = s.position(key.second);
        if (from && to) {
            adj[*from].push_back(*to);
        }
    }
    std::vector<int> color(count, 0);
    std::vector<std::size_t> stack;
    std::vector<std::string> cycle;

    std::function<bool(std::size_t)> visit = [&](std::size_t v) {
        color[v] = 1;
        stack.push_back(v);
        for (std::size_t w : adj[v]) {
            if (color[w] == 1) {
                auto it = std::find(stack.begin(), stack.end(), w);
                for (; it != stack.end(); ++it) {
                    cycle.push_back(s.elements[*it].name);
                }
                return true;
            }
            if (color[w] == 0 && visit(w)) {
                return true;
            }
        }
        stack.pop_back();
        color[v] = 2;
        return false;
    };
    for (std::size_t v = 0; v < count; ++v) {
        if (color[v] == 0 && visit(v)) {
            break;
        }
    }
    return cycle;
}

} // namespace

std::vector<std::string> find_cycle(const FlowSystem& s) { return cycle_in(s); }

std::vector<Violation> validate(const FlowSystem& s, bool strict) {
    std::vector<Violation> out;
    const int n = s.dimension;

    if (n < 1) {
        out.push_back({"dimension", {}, "manifold dimension must be positive, got " + std::to_string(n)});
    }

    std::set<std::string> seen;
    for (const auto& e : s.elements) {
        if (!seen.insert(e.name).second) {
            out.push_back({"duplicate-name", {e.name}, "element name '" + e.name + "' declared twice"});
        }
        const int max_index = e.is_rest() ? n : n - 1;
        if (e.index < 0 || e.index > max_index) {
            out.push_back({"index-range", {e.name},
                           describe(e) + " outside 0.." + std::to_string(max_index)});
        }
        if (e.is_rest() && e.twisted) {
            out.push_back({"twisted-rest-point", {e.name}, "rest point " + e.name + " carries a twisted flag"});
        }
    }

    if (s.expected_betti && s.expected_betti->size() != static_cast<std::size_t>(n + 1)) {
        out.push_back({"expect-betti-length", {},
                       "expect-betti lists " + std::to_string(s.expected_betti->size()) +
                           " numbers, dimension " + std::to_string(n) + " needs " + std::to_string(n + 1)});
    }

    bool references_ok = true;
    for (const auto& [key, c] : s.connections) {
        const auto& [src_name, dst_name] = key;
        const auto* src = s.find(src_name);
        const auto* dst = s.find(dst_name);
        if (!src || !dst) {
            references_ok = false;
            out.push_back({"unknown-element", {src ? dst_name : src_name},
                           "connection " + src_name + " -> " + dst_name + " references an undeclared element"});
            continue;
        }
        const std::string pair = "c(" + src_name + "," + dst_name + ")=" + std::to_string(c);
        if (!dimension_rule_allows(*src, *dst, n)) {
            const int u = src->unstable_dim();
            const int st = dst->stable_dim(n);
            out.push_back({"dimension-rule", {src_name, dst_name},
                           pair + " but u(" + src_name + ")+s(" + dst_name + ")=" + std::to_string(u) + "+" +
                               std::to_string(st) + "=" + std::to_string(u + st) + " < " + std::to_string(n + 1)});
        }
        if (is_attractor(*src)) {
            out.push_back({"attractor-rule", {src_name, dst_name},
                           pair + " leaves attractor " + describe(*src)});
        }
        if (is_repeller(*dst, n)) {
            out.push_back({"repeller-rule", {src_name, dst_name},
                           pair + " enters repeller " + describe(*dst)});
        }
    }

    if (references_ok) {
        const auto cycle = cycle_in(s);
        if (!cycle.empty()) {
            std::string path;
            for (const auto& name : cycle) {
                path += name + " -> ";
            }
            path += cycle.front();
            out.push_back({"cycle", cycle, "cyclic chain of connections " + path});
        }
    }

    if (strict && n == 2) {
        for (const auto& e : s.elements) {
            if (!e.is_rest() || e.index != 1) {
                continue;
            }
            int outgoing = 0;
            int incoming = 0;
            for (const auto& [key, c] : s.connections) {
                if (key.first == e.name) outgoing += c;
                if (key.second == e.name) incoming += c;
            }
            if (outgoing != 2 || incoming != 2) {
                out.push_back({"saddle-degree", {e.name},
                               "saddle " + e.name + " has outgoing multiplicity " + std::to_string(outgoing) +
                                   " and incoming multiplicity " + std::to_string(incoming) + ", expected 2 and 2"});
            }
        }
    }
    return out;
}

std::vector<Link> direct_downstream(const FlowSystem& s, const std::string& name) {
    s.at(name);
    std::vector<Link> out;
    for (const auto& e : s.elements) {
        if (const int c = s.connections.count(name, e.name); c > 0) {
            out.push_back({e.name, c});
        }
    }
    return out;
}

std::vector<Link> direct_upstream(const FlowSystem& s, const std::string& name) {
    s.at(name);
    std::vector<Link> out;
    for (const auto& e : s.elements) {
        if (const int c = s.connections.count(e.name, name); c > 0) {
            out.push_back({e.name, c});
        }
    }
    return out;
}

Reachability::Reachability(const FlowSystem& s) {
    const std::size_t count = s.elements.size();
    names_.reserve(count);
    for (const auto& e : s.elements) {
        names_.push_back(e.name);
    }
    reach_.assign(count, std::vector<bool>(count, false));
    for (std::size_t i = 0; i < count; ++i) {
        reach_[i][i] = true;
    }
    for (const auto& [key, c] : s.connections) {
        const auto from = s.position(key.first);
        const auto to = s.position(key.second);
        if (from && to) {
            reach_[*from][*to] = true;
        }
    }
    // Warshall closure.
    for (std::size_t k = 0; k < count; ++k) {
        for (std::size_t i = 0; i < count; ++i) {
            if (!reach_[i][k]) {
                continue;
            }
            for (std::size_t j = 0; j < count; ++j) {
                if (reach_[k][j]) {
                    reach_[i][j] = true;
                }
            }
        }
    }
}

std::size_t Reachability::index_of(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
        throw UnknownElement(name);
    }
    return static_cast<std::size_t>(it - names_.begin());
}

bool Reachability::geq(const std::string& upper, const std::string& lower) const {
    return reach_[index_of(upper)][index_of(lower)];
}

std::vector<std::string> Reachability::below(const std::string& name) const {
    const std::size_t i = index_of(name);
    std::vector<std::string> out;
    for (std::size_t j = 0; j < names_.size(); ++j) {
        if (reach_[i][j]) {
            out.push_back(names_[j]);
        }
    }
    return out;
}

Reachability reachability(const FlowSystem& s) { return Reachability(s); }

FlowSystemSkeleton remove_orbit_stub(const FlowSystem& s, const std::string& orbit,
                                     const std::string& p_name, const std::string& q_name) {
    const auto pos = s.position(orbit);
    if (!pos) {
        throw UnknownElement(orbit);
    }
    const CriticalElement gamma = s.elements[*pos];
    if (!gamma.is_orbit()) {
        throw Error("'" + orbit + "' is a rest point, not a closed orbit");
    }
    for (const auto& name : {p_name, q_name}) {
        if (s.find(name)) {
            throw Error("name collision: '" + name + "' already names an element");
        }
    }
    if (p_name == q_name) {
        throw Error("name collision: new rest points both named '" + p_name + "'");
    }

    FlowSystemSkeleton out;
    out.orbit = orbit;
    out.p_name = p_name;
    out.q_name = q_name;
    out.attaching_degree = gamma.twisted ? 2 : 0;
    out.system = s;

    auto& elements = out.system.elements;
    elements.erase(elements.begin() + static_cast<std::ptrdiff_t>(*pos));
    elements.insert(elements.begin() + static_cast<std::ptrdiff_t>(*pos),
                    {CriticalElement::rest(p_name, gamma.index + 1), CriticalElement::rest(q_name, gamma.index)});

    for (const auto& [key, c] : out.system.connections.remove_touching(orbit)) {
        out.pending.push_back({key.first, key.second, c});
    }
    out.system.connections.set(p_name, q_name, 2);
    return out;
}

} // namespace msflow::flow
