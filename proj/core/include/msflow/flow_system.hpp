#pragma once

#include "msflow/error.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace msflow::flow {

enum class ElementKind { rest_point, closed_orbit };

/// A rest point or a closed orbit of a Morse-Smale field.
///
/// `index` is the unstable dimension for rest points; a closed orbit of
/// index k has a (k+1)-dimensional unstable manifold. `twisted` is only
/// meaningful for closed orbits.
struct CriticalElement {
    std::string name;
    ElementKind kind = ElementKind::rest_point;
    int index = 0;
    bool twisted = false;

    static CriticalElement rest(std::string name, int index);
    static CriticalElement orbit(std::string name, int index, bool twisted = false);

    bool is_orbit() const noexcept { return kind == ElementKind::closed_orbit; }
    bool is_rest() const noexcept { return kind == ElementKind::rest_point; }

    int unstable_dim() const noexcept { return is_orbit() ? index + 1 : index; }
    int stable_dim(int n) const noexcept { return n - index; }

    friend bool operator==(const CriticalElement&, const CriticalElement&) = default;
};

/// Sparse map of connection counts c(source, target) > 0.
///
/// A missing pair has count 0. Self-pairs are rejected. Iteration is
/// ordered by (source name, target name).
class ConnectionMap {
public:
    using Key = std::pair<std::string, std::string>;
    using Storage = std::map<Key, int>;

    int count(const std::string& source, const std::string& target) const;
    bool contains(const std::string& source, const std::string& target) const {
        return count(source, target) > 0;
    }

    /// Sets c(source, target). A count of 0 erases the pair; negative counts
    /// and self-pairs throw std::invalid_argument.
    void set(const std::string& source, const std::string& target, int count);
    void erase(const std::string& source, const std::string& target);

    /// Removes every pair touching `name` and returns the removed entries.
    Storage remove_touching(const std::string& name);

    std::size_t size() const noexcept { return pairs_.size(); }
    bool empty() const noexcept { return pairs_.empty(); }
    Storage::const_iterator begin() const noexcept { return pairs_.begin(); }
    Storage::const_iterator end() const noexcept { return pairs_.end(); }

    friend bool operator==(const ConnectionMap&, const ConnectionMap&) = default;

private:
    Storage pairs_;
};

/// The unit of input and output: dimension, critical elements and counts.
struct FlowSystem {
    int dimension = 0;
    std::optional<std::string> label;
    std::vector<CriticalElement> elements;
    ConnectionMap connections;
    std::optional<std::vector<int>> expected_betti;

    const CriticalElement* find(const std::string& name) const;
    const CriticalElement& at(const std::string& name) const;  // throws UnknownElement
    std::optional<std::size_t> position(const std::string& name) const;

    bool has_orbits() const;
    bool is_gradient_like() const { return !has_orbits(); }

    /// Rest points weighted by (-1)^index.
    int alternating_rest_count() const;

    friend bool operator==(const FlowSystem&, const FlowSystem&) = default;
};

/// Same elements (in order) and same connections; label and Betti
/// expectations are ignored.
bool same_structure(const FlowSystem& a, const FlowSystem& b);

/// A diagnosed invariant failure. Violations are data; validate never throws.
struct Violation {
    std::string rule;
    std::vector<std::string> elements;
    std::string message;
};

std::string to_string(const Violation& v);

/// Checks every structural rule; strict additionally applies the 2D saddle
/// degree rule (two separatrices in, two out).
std::vector<Violation> validate(const FlowSystem& s, bool strict = false);

class InvalidSystem : public Error {
public:
    explicit InvalidSystem(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// Throws InvalidSystem when validate(s, strict) is non-empty.
void require_valid(const FlowSystem& s, bool strict = false);

/// Whether c(source, target) > 0 is allowed by unstable/stable dimensions,
/// i.e. u(source) + s(target) >= n + 1.
bool dimension_rule_allows(const CriticalElement& source, const CriticalElement& target, int n);

struct Link {
    std::string name;
    int count = 0;

    friend bool operator==(const Link&, const Link&) = default;
};

/// Elements reached directly from `name` (c(name, x) > 0), declaration order.
std::vector<Link> direct_downstream(const FlowSystem& s, const std::string& name);
/// Elements flowing directly into `name` (c(x, name) > 0), declaration order.
std::vector<Link> direct_upstream(const FlowSystem& s, const std::string& name);

/// Reflexive-transitive closure of the direct-connection relation.
///
/// geq(a, b) holds when b is reachable from a by a chain of connections,
/// i.e. b sits at or below a in the flow order.
class Reachability {
public:
    explicit Reachability(const FlowSystem& s);

    const std::vector<std::string>& names() const noexcept { return names_; }
    bool geq(const std::string& upper, const std::string& lower) const;
    bool geq(std::size_t upper, std::size_t lower) const { return reach_[upper][lower]; }
    std::size_t index_of(const std::string& name) const;

    /// Names at or below `name`.
    std::vector<std::string> below(const std::string& name) const;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<bool>> reach_;
};

Reachability reachability(const FlowSystem& s);

/// Names along a directed cycle of connections, empty when acyclic.
std::vector<std::string> find_cycle(const FlowSystem& s);

struct PendingConnection {
    std::string source;
    std::string target;
    int count = 0;
};

/// A system with one orbit cut out and replaced by an unwired rest-point
/// pair; the orbit's former connections await reassignment.
struct FlowSystemSkeleton {
    FlowSystem system;
    std::string orbit;
    std::string p_name;
    std::string q_name;
    int attaching_degree = 0;  // 0 untwisted, 2 twisted
    std::vector<PendingConnection> pending;
};

/// Deletes orbit `orbit` of index k, inserts rest points p (index k+1) and
/// q (index k) in its place with c(p, q) = 2, and reports the orbit's
/// removed connections as pending.
FlowSystemSkeleton remove_orbit_stub(const FlowSystem& s, const std::string& orbit,
                                     const std::string& p_name, const std::string& q_name);

} // namespace msflow::flow
