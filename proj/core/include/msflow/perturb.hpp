#pragma once

#include "msflow/ej_complex.hpp"
#include "msflow/error.hpp"
#include "msflow/flow_system.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace msflow::perturb {

using CountMap = std::map<std::string, int>;

/// How the connections of a removed orbit are redistributed onto the new
/// rest points p (index k+1) and q (index k).
struct ChoiceDescriptor {
    std::string orbit;
    std::string p_name;
    std::string q_name;
    CountMap p_out;
    CountMap q_out;
    CountMap p_in;
    CountMap q_in;

    friend bool operator==(const ChoiceDescriptor&, const ChoiceDescriptor&) = default;
};

/// .msc text form:
///   orbit <name>
///   new <p-name> <q-name>
///   pout|qout <target> <count>
///   pin|qin <source> <count>
ChoiceDescriptor parse_choice(std::string_view text);
ChoiceDescriptor load_choice(const std::string& path);
std::string serialize_choice(const ChoiceDescriptor& d);

/// Every failed descriptor constraint, one message each.
class ChoiceError : public Error {
public:
    explicit ChoiceError(std::vector<std::string> failures);
    const std::vector<std::string>& failures() const noexcept { return failures_; }

private:
    std::vector<std::string> failures_;
};

/// Descriptor constraint check against the orbit's neighbourhood in s;
/// empty when the descriptor is admissible.
std::vector<std::string> check_choice(const flow::FlowSystem& s, const ChoiceDescriptor& d);

enum class ClaimStatus { pass, fail };

struct ClaimOutcome {
    ClaimStatus status = ClaimStatus::pass;
    std::vector<std::string> witnesses;

    bool passed() const noexcept { return status == ClaimStatus::pass; }
};

/// Outcome of the three local claims relating the complexes before and after
/// replacing an orbit, under the bijection orbit+ <-> p, orbit- <-> q.
///
/// Repeller (index n-1) form, with k the orbit index:
///   zero_line:     row orbit- of d_{k+1} and row q of d'_{k+1} vanish
///   same_matrix:   d_{k+1} == d'_{k+1}
///   single_line:   d_k and d'_k differ at most in column orbit- / q
/// Attractor (index 0) form swaps rows and columns:
///   zero_line:     column orbit+ of d_1 and column p of d'_1 vanish
///   same_matrix:   d_1 == d'_1
///   single_line:   d_2 and d'_2 differ at most in row orbit+ / p
/// products_equal: d_k d_{k+1} == d'_k d'_{k+1} (attractor: d_1 d_2).
struct ClaimsReport {
    bool mirrored = false;  // attractor form
    ClaimOutcome zero_line;
    ClaimOutcome same_matrix;
    ClaimOutcome single_line;
    bool products_equal = false;
    bool products_zero = false;

    bool all_pass() const noexcept {
        return zero_line.passed() && same_matrix.passed() && single_line.passed();
    }
};

struct PerturbationResult {
    flow::FlowSystem system;
    ChoiceDescriptor choice;
    int attaching_degree = 0;
    /// Present when the orbit is a repeller or attractor and both systems
    /// admit a complex.
    std::optional<ClaimsReport> claims;
};

/// Replaces the descriptor's orbit by p and q in its declaration slot,
/// copies every connection not touching the orbit, installs the descriptor's
/// connections and c(p, q) = 2. Throws ChoiceError listing every failed
/// constraint, UnknownElement for a missing orbit.
PerturbationResult apply_choice(const flow::FlowSystem& s, const ChoiceDescriptor& d);

/// Every combinatorially admissible choice for an orbit of a 2D system.
///
/// Repeller: p inherits all outgoing counts, q gets each size-2 multiset of
/// index-0 targets. Attractor: q inherits all incoming counts, p gets each
/// size-2 multiset of repelling sources and flows only into q. New names
/// default to p_<orbit> and q_<orbit>.
std::vector<ChoiceDescriptor> enumerate_choices_2d(const flow::FlowSystem& s, const std::string& orbit);
std::vector<ChoiceDescriptor> enumerate_choices_2d(const flow::FlowSystem& s, const std::string& orbit,
                                                   const std::string& p_name, const std::string& q_name);

/// Throws std::invalid_argument unless the orbit of after.choice is an
/// attractor or a repeller of `before`.
ClaimsReport verify_franks_claims(const flow::FlowSystem& before, const PerturbationResult& after);

struct Resolution {
    flow::FlowSystem system;
    std::vector<ChoiceDescriptor> choices;  // one per removed orbit, in order
};

/// All gradient-like resolutions: the product of per-orbit choices, orbits
/// taken in declaration order. Explicit descriptors (keyed by orbit) replace
/// enumeration; without one, orbits are only enumerable in dimension 2.
std::vector<Resolution> resolve_all_with_choices(const flow::FlowSystem& s,
                                                 const std::map<std::string, ChoiceDescriptor>& explicit_choices = {});
std::vector<flow::FlowSystem> resolve_all(const flow::FlowSystem& s,
                                          const std::map<std::string, ChoiceDescriptor>& explicit_choices = {});

} // namespace msflow::perturb
