#include "msflow/poset.hpp"

#include "msflow/msf_format.hpp"
#include "text_lines.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <sstream>

namespace msflow::poset {

std::string LabelVocabulary::name(int label) const {
    if (kind == Kind::cells) {
        return std::to_string(label) + "-cell";
    }
    if (label == 0) return "sink";
    if (label == dimension) return "source";
    if (dimension == 2 && label == 1) return "saddle";
    return "index-" + std::to_string(label) + " saddle";
}

LabeledPoset LabeledPoset::from_relations(std::vector<std::pair<std::string, int>> nodes,
                                          const std::vector<std::pair<std::string, std::string>>& relations,
                                          LabelVocabulary vocabulary) {
    LabeledPoset p;
    p.vocabulary_ = vocabulary;
    for (auto& [name, label] : nodes) {
        if (p.find(name)) {
            throw Error("duplicate node '" + name + "'");
        }
        p.names_.push_back(std::move(name));
        p.labels_.push_back(label);
    }
    const std::size_t n = p.names_.size();
    p.leq_.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        p.leq_[i][i] = true;
    }
    for (const auto& [lo, hi] : relations) {
        p.leq_[p.index_of(lo)][p.index_of(hi)] = true;
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!p.leq_[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (p.leq_[k][j]) p.leq_[i][j] = true;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (p.leq_[i][j] && p.leq_[j][i]) {
                throw Error("relation is not antisymmetric: '" + p.names_[i] + "' and '" + p.names_[j] +
                            "' lie on a cycle");
            }
        }
    }
    return p;
}

std::optional<std::size_t> LabeledPoset::find(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - names_.begin());
}

std::size_t LabeledPoset::index_of(const std::string& name) const {
    if (const auto i = find(name)) {
        return *i;
    }
    throw UnknownElement(name);
}

bool LabeledPoset::covers(std::size_t a, std::size_t b) const {
    if (!less(a, b)) {
        return false;
    }
    for (std::size_t m = 0; m < size(); ++m) {
        if (less(a, m) && less(m, b)) {
            return false;
        }
    }
    return true;
}

std::vector<std::pair<std::size_t, std::size_t>> LabeledPoset::hasse() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < size(); ++a) {
        for (std::size_t b = 0; b < size(); ++b) {
            if (covers(a, b)) {
                out.emplace_back(a, b);
            }
        }
    }
    return out;
}

LabeledPoset face_poset(const flow::FlowSystem& s) {
    if (s.has_orbits()) {
        throw Error("face poset needs a gradient-like system; remove closed orbits first");
    }
    std::vector<std::pair<std::string, int>> nodes;
    for (const auto& e : s.elements) {
        nodes.emplace_back(e.name, e.index);
    }
    std::vector<std::pair<std::string, std::string>> relations;
    for (const auto& [key, count] : s.connections) {
        relations.emplace_back(key.second, key.first);
    }
    return LabeledPoset::from_relations(std::move(nodes), relations,
                                        {LabelVocabulary::Kind::rest_points, s.dimension});
}

LabeledPoset parse_pos(std::string_view text) {
    std::vector<std::pair<std::string, int>> nodes;
    std::vector<std::pair<std::string, std::string>> relations;
    std::vector<std::size_t> relation_lines;
    std::set<std::string> names;

    detail::for_each_directive(text, [&](std::size_t line, const std::vector<std::string_view>& words,
                                         std::string_view) {
        const auto checked = [&](std::string_view w) {
            if (!flow::is_valid_name(w)) {
                throw ParseError(line, "invalid name '" + std::string(w) + "'");
            }
            return std::string(w);
        };
        if (words.front() == "node") {
            if (words.size() != 3) throw ParseError(line, "expected 'node <name> <label>'");
            auto name = checked(words[1]);
            if (!names.insert(name).second) {
                throw ParseError(line, "duplicate node '" + name + "'");
            }
            nodes.emplace_back(std::move(name), static_cast<int>(detail::parse_integer(words[2], line, "label")));
        } else if (words.front() == "lt") {
            if (words.size() != 3) throw ParseError(line, "expected 'lt <a> <b>'");
            relations.emplace_back(checked(words[1]), checked(words[2]));
            relation_lines.push_back(line);
        } else {
            throw ParseError(line, "unknown directive '" + std::string(words.front()) + "'");
        }
    });
    for (std::size_t i = 0; i < relations.size(); ++i) {
        for (const auto* name : {&relations[i].first, &relations[i].second}) {
            if (!names.count(*name)) {
                throw ParseError(relation_lines[i], "unknown node '" + *name + "'");
            }
        }
        if (relations[i].first == relations[i].second) {
            throw ParseError(relation_lines[i], "'lt' relates '" + relations[i].first + "' to itself");
        }
    }
    return LabeledPoset::from_relations(std::move(nodes), relations);
}

LabeledPoset load_pos(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_pos(text);
}

std::vector<std::string> base(const LabeledPoset& p, const std::string& node) {
    const std::size_t e = p.index_of(node);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.leq(i, e)) {
            out.push_back(p.name(i));
        }
    }
    return out;
}

NodeSignature signature(const LabeledPoset& p, std::size_t node) {
    NodeSignature sig;
    sig.label = p.label(node);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.leq(i, node)) ++sig.downset_size;
        if (p.leq(node, i)) ++sig.upset_size;
        if (p.less(i, node)) ++sig.down_by_label[p.label(i)];
        if (p.less(node, i)) ++sig.up_by_label[p.label(i)];
    }
    return sig;
}

Profile invariant_profile(const LabeledPoset& p) {
    Profile profile;
    for (std::size_t i = 0; i < p.size(); ++i) {
        ++profile.label_counts[p.label(i)];
        profile.signatures.push_back(signature(p, i));
    }
    std::sort(profile.signatures.begin(), profile.signatures.end());
    return profile;
}

std::vector<std::size_t> incidence_counts(const LabeledPoset& p, int lower, int upper) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.label(i) != lower) continue;
        std::size_t count = 0;
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (p.label(j) == upper && p.less(i, j)) ++count;
        }
        out.push_back(count);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::string multiset_text(const std::vector<std::size_t>& values) {
    std::string out = "{";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(values[i]);
    }
    return out + "}";
}

template <typename Fn>
std::vector<std::size_t> per_label(const LabeledPoset& p, int label, Fn&& value) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.label(i) == label) out.push_back(value(i));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// First invariant that separates a from b, as a readable certificate.
std::optional<std::string> profile_certificate(const LabeledPoset& a, const LabeledPoset& b) {
    const auto& vocab = a.vocabulary();
    if (a.size() != b.size()) {
        return "node counts " + std::to_string(a.size()) + " vs " + std::to_string(b.size());
    }
    const auto pa = invariant_profile(a);
    const auto pb = invariant_profile(b);
    std::set<int> labels;
    for (const auto& [l, c] : pa.label_counts) labels.insert(l);
    for (const auto& [l, c] : pb.label_counts) labels.insert(l);
    const auto count_of = [](const Profile& p, int l) {
        const auto it = p.label_counts.find(l);
        return it == p.label_counts.end() ? std::size_t{0} : it->second;
    };
    for (int l : labels) {
        if (count_of(pa, l) != count_of(pb, l)) {
            return vocab.name(l) + " counts " + std::to_string(count_of(pa, l)) + " vs " +
                   std::to_string(count_of(pb, l));
        }
    }
    for (int l : labels) {
        const auto da = per_label(a, l, [&](std::size_t i) { return signature(a, i).downset_size; });
        const auto db = per_label(b, l, [&](std::size_t i) { return signature(b, i).downset_size; });
        if (da != db) {
            return "downset sizes " + multiset_text(da) + " vs " + multiset_text(db) + " for " + vocab.name(l) +
                   " nodes";
        }
    }
    for (int lower : labels) {
        for (int upper : labels) {
            if (lower == upper) continue;
            const auto ia = incidence_counts(a, lower, upper);
            const auto ib = incidence_counts(b, lower, upper);
            if (ia != ib) {
                return vocab.name(lower) + "-" + vocab.name(upper) + " incidence " + multiset_text(ia) + " vs " +
                       multiset_text(ib);
            }
        }
    }
    for (int l : labels) {
        const auto ua = per_label(a, l, [&](std::size_t i) { return signature(a, i).upset_size; });
        const auto ub = per_label(b, l, [&](std::size_t i) { return signature(b, i).upset_size; });
        if (ua != ub) {
            return "upset sizes " + multiset_text(ua) + " vs " + multiset_text(ub) + " for " + vocab.name(l) +
                   " nodes";
        }
    }
    if (pa != pb) {
        return "per-node order signatures differ";
    }
    return std::nullopt;
}

} // namespace

IsoVerdict is_isomorphic(const LabeledPoset& a, const LabeledPoset& b) {
    IsoVerdict verdict;
    if (auto cert = profile_certificate(a, b)) {
        verdict.certificate = std::move(*cert);
        return verdict;
    }

    const std::size_t n = a.size();
    std::vector<NodeSignature> sig_a;
    std::vector<NodeSignature> sig_b;
    for (std::size_t i = 0; i < n; ++i) {
        sig_a.push_back(signature(a, i));
        sig_b.push_back(signature(b, i));
    }
    // Candidates per node of a; a same-named candidate goes first so that a
    // poset compared with itself maps by the identity.
    std::vector<std::vector<std::size_t>> candidates(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (sig_a[i] == sig_b[j]) {
                candidates[i].push_back(j);
            }
        }
        const auto same = std::find_if(candidates[i].begin(), candidates[i].end(),
                                       [&](std::size_t j) { return b.name(j) == a.name(i); });
        if (same != candidates[i].end()) {
            std::rotate(candidates[i].begin(), same, same + 1);
        }
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return candidates[x].size() < candidates[y].size(); });

    constexpr std::size_t unassigned = static_cast<std::size_t>(-1);
    std::vector<std::size_t> map(n, unassigned);
    std::vector<bool> used(n, false);

    std::function<bool(std::size_t)> extend = [&](std::size_t depth) {
        if (depth == n) return true;
        const std::size_t i = order[depth];
        for (std::size_t j : candidates[i]) {
            if (used[j]) continue;
            bool consistent = true;
            for (std::size_t d = 0; d < depth && consistent; ++d) {
                const std::size_t i2 = order[d];
                const std::size_t j2 = map[i2];
                consistent = a.leq(i, i2) == b.leq(j, j2) && a.leq(i2, i) == b.leq(j2, j);
            }
            if (!consistent) continue;
            map[i] = j;
            used[j] = true;
            if (extend(depth + 1)) return true;
            used[j] = false;
            map[i] = unassigned;
        }
        return false;
    };

    if (!extend(0)) {
        verdict.certificate = "no label- and order-preserving bijection exists (exhaustive search)";
        return verdict;
    }
    verdict.isomorphic = true;
    std::vector<std::pair<std::string, std::string>> mapping;
    for (std::size_t i = 0; i < n; ++i) {
        mapping.emplace_back(a.name(i), b.name(map[i]));
    }
    verdict.mapping = std::move(mapping);
    return verdict;
}

std::string Verdict::headline() const {
    return kind == Kind::not_cell_equivalent ? "NOT cell equivalent" : "necessary conditions pass (inconclusive)";
}

Verdict cell_equivalence_verdict(const flow::FlowSystem& a, const flow::FlowSystem& b) {
    if (a.has_orbits() || b.has_orbits()) {
        throw Error("cell equivalence check needs gradient-like systems; remove closed orbits first");
    }
    const auto pa = face_poset(a);
    const auto pb = face_poset(b);

    Verdict v;
    std::map<int, std::pair<std::size_t, std::size_t>> counts;
    for (const auto& e : a.elements) ++counts[e.index].first;
    for (const auto& e : b.elements) ++counts[e.index].second;
    for (const auto& [index, c] : counts) {
        if (c.first != c.second) {
            v.kind = Verdict::Kind::not_cell_equivalent;
            v.certificate = "count mismatch: " + pa.vocabulary().name(index) + " counts " + std::to_string(c.first) +
                            " vs " + std::to_string(c.second);
            return v;
        }
    }
    if (a.dimension != b.dimension) {
        v.kind = Verdict::Kind::not_cell_equivalent;
        v.certificate = "dimension mismatch: " + std::to_string(a.dimension) + " vs " + std::to_string(b.dimension);
        return v;
    }
    auto iso = is_isomorphic(pa, pb);
    if (!iso.isomorphic) {
        v.kind = Verdict::Kind::not_cell_equivalent;
        v.certificate = *iso.certificate;
        return v;
    }
    v.kind = Verdict::Kind::inconclusive;
    v.certificate = "equal cell counts and isomorphic face posets";
    v.mapping = std::move(iso.mapping);
    return v;
}

CensusReport census_of(std::vector<perturb::Resolution> resolutions) {
    CensusReport report;
    report.resolutions = std::move(resolutions);
    std::vector<LabeledPoset> reps;
    for (std::size_t r = 0; r < report.resolutions.size(); ++r) {
        auto poset = face_poset(report.resolutions[r].system);
        bool placed = false;
        for (std::size_t c = 0; c < report.classes.size() && !placed; ++c) {
            if (is_isomorphic(reps[c], poset).isomorphic) {
                report.classes[c].members.push_back(r);
                placed = true;
            }
        }
        if (!placed) {
            report.classes.push_back({r, {r}});
            reps.push_back(std::move(poset));
        }
    }
    return report;
}

CensusReport census(const flow::FlowSystem& s) {
    if (s.dimension != 2 && s.has_orbits()) {
        throw Error("census enumerates choices in dimension 2 only (system has n=" + std::to_string(s.dimension) +
                    ")");
    }
    return census_of(perturb::resolve_all_with_choices(s));
}

} // namespace msflow::poset
