#pragma once

#include "msflow/error.hpp"
#include "msflow/flow_system.hpp"
#include "msflow/perturb.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace msflow::poset {

/// How integer labels are spoken about in certificates: as cell dimensions
/// ("2-cell") or as rest-point roles of an n-dimensional flow ("sink").
struct LabelVocabulary {
    enum class Kind { cells, rest_points };
    Kind kind = Kind::cells;
    int dimension = 0;

    std::string name(int label) const;
};

/// Finite poset with integer-labelled nodes, stored as its full order
/// relation (reflexive, transitive, antisymmetric).
class LabeledPoset {
public:
    LabeledPoset() = default;

    /// Closes `relations` (pairs a <= b) transitively. Throws Error on
    /// duplicate node names, unknown nodes, or a cycle.
    static LabeledPoset from_relations(std::vector<std::pair<std::string, int>> nodes,
                                       const std::vector<std::pair<std::string, std::string>>& relations,
                                       LabelVocabulary vocabulary = {});

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    int label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const LabelVocabulary& vocabulary() const noexcept { return vocabulary_; }

    std::optional<std::size_t> find(const std::string& name) const;
    std::size_t index_of(const std::string& name) const;  // throws UnknownElement

    bool leq(std::size_t a, std::size_t b) const { return leq_[a][b]; }
    bool less(std::size_t a, std::size_t b) const { return a != b && leq_[a][b]; }
    /// b covers a: a < b with nothing strictly between.
    bool covers(std::size_t a, std::size_t b) const;

    /// Cover pairs (a, b) in node order.
    std::vector<std::pair<std::size_t, std::size_t>> hasse() const;

private:
    std::vector<std::string> names_;
    std::vector<int> labels_;
    std::vector<std::vector<bool>> leq_;
    LabelVocabulary vocabulary_;
};

/// Rest points labelled by index, ordered by q <= p iff p reaches q.
/// Throws Error if the system still contains closed orbits.
LabeledPoset face_poset(const flow::FlowSystem& s);

/// .pos text form: "node <name> <label>" and "lt <a> <b>" (b covers a).
LabeledPoset parse_pos(std::string_view text);
LabeledPoset load_pos(const std::string& path);

/// Downset {e' : e' <= e}, in node order.
std::vector<std::string> base(const LabeledPoset& p, const std::string& node);

/// Per-node isomorphism invariant.
struct NodeSignature {
    int label = 0;
    std::size_t downset_size = 0;
    std::size_t upset_size = 0;
    std::map<int, std::size_t> down_by_label;  // strict downset, per label
    std::map<int, std::size_t> up_by_label;    // strict upset, per label

    friend auto operator<=>(const NodeSignature&, const NodeSignature&) = default;
};

/// Canonical (sorted) multiset of node signatures plus per-label counts.
/// Equal profiles are necessary for isomorphism.
struct Profile {
    std::map<int, std::size_t> label_counts;
    std::vector<NodeSignature> signatures;

    friend bool operator==(const Profile&, const Profile&) = default;
};

NodeSignature signature(const LabeledPoset& p, std::size_t node);
Profile invariant_profile(const LabeledPoset& p);

/// For every node with label `lower`, the number of label-`upper` nodes
/// above it; sorted ascending. {1,2,3,4} for sinks vs saddles of one
/// resolution and {1,3,3,3} for another distinguishes them.
std::vector<std::size_t> incidence_counts(const LabeledPoset& p, int lower, int upper);

struct IsoVerdict {
    bool isomorphic = false;
    /// Node of a -> node of b, in a's node order.
    std::optional<std::vector<std::pair<std::string, std::string>>> mapping;
    std::optional<std::string> certificate;
};

/// Label-preserving order isomorphism: profile comparison first, then
/// backtracking over signature-compatible candidates.
IsoVerdict is_isomorphic(const LabeledPoset& a, const LabeledPoset& b);

struct Verdict {
    enum class Kind { not_cell_equivalent, inconclusive };
    Kind kind = Kind::inconclusive;
    std::string certificate;  // why NOT, or a note on the passed checks
    std::optional<std::vector<std::pair<std::string, std::string>>> mapping;

    std::string headline() const;
};

/// Necessary-condition check only: equal per-index rest point counts and
/// isomorphic face posets. Never asserts cell equivalence.
Verdict cell_equivalence_verdict(const flow::FlowSystem& a, const flow::FlowSystem& b);

struct CensusClass {
    std::size_t representative = 0;     // index into resolutions
    std::vector<std::size_t> members;   // indices into resolutions
};

struct CensusReport {
    std::vector<perturb::Resolution> resolutions;
    std::vector<CensusClass> classes;
};

/// Groups resolutions into classes of isomorphic face posets, in the order
/// they are produced.
CensusReport census_of(std::vector<perturb::Resolution> resolutions);

/// All 2D resolutions of s grouped by face-poset isomorphism.
CensusReport census(const flow::FlowSystem& s);

} // namespace msflow::poset
