#pragma once

#include "msflow/flow_system.hpp"
#include "msflow/msf_format.hpp"
#include "msflow/poset.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#ifndef MSFLOW_TEST_FIXTURES
#error "MSFLOW_TEST_FIXTURES must point at the fixture directory"
#endif

namespace msflow::testing {

inline std::string fixture(const std::string& name) {
    return std::string(MSFLOW_TEST_FIXTURES) + "/" + name;
}

inline flow::FlowSystem load_fixture(const std::string& name) {
    return flow::load_msf(fixture(name));
}

inline const std::vector<std::string>& flow_fixture_names() {
    static const std::vector<std::string> names{"fig3.msf",    "fig3-X1.msf", "fig3-X2.msf", "fig4.msf",
                                                "fig4-X1.msf", "fig4-X2.msf", "fig4-X3.msf", "fig5.msf",
                                                "fig6.msf"};
    return names;
}

/// Rank as log2 of the size of the row span, found by XOR-ing every subset
/// of rows. Rows are bitmasks of at most 5 columns.
inline std::size_t span_rank(const std::vector<std::uint32_t>& rows) {
    const std::size_t subsets = std::size_t{1} << rows.size();
    std::array<std::uint32_t, 32> sum{};
    std::uint32_t seen = 1;  // the empty sum, value 0
    for (std::size_t mask = 1; mask < subsets; ++mask) {
        const auto low = static_cast<std::size_t>(std::countr_zero(mask));
        sum[mask] = sum[mask & (mask - 1)] ^ rows[low];
        seen |= std::uint32_t{1} << sum[mask];
    }
    return static_cast<std::size_t>(std::bit_width(static_cast<unsigned>(std::popcount(seen)))) - 1;
}

/// Random system that satisfies every non-strict validation rule.
///
/// Connections respect the dimension rule, skip attractor sources and
/// repeller targets, and only run forward in a hidden random order, so the
/// direct-connection digraph is acyclic.
inline flow::FlowSystem random_valid_system(std::mt19937& rng) {
    std::uniform_int_distribution<int> dim_dist(2, 3);
    const int n = dim_dist(rng);
    std::uniform_int_distribution<int> count_dist(3, 9);
    const int count = count_dist(rng);

    flow::FlowSystem s;
    s.dimension = n;
    std::bernoulli_distribution is_orbit(0.25);
    std::bernoulli_distribution coin(0.5);
    for (int i = 0; i < count; ++i) {
        const std::string name = "e" + std::to_string(i);
        if (is_orbit(rng)) {
            s.elements.push_back(flow::CriticalElement::orbit(name, std::uniform_int_distribution<int>(0, n - 1)(rng),
                                                              coin(rng)));
        } else {
            s.elements.push_back(flow::CriticalElement::rest(name, std::uniform_int_distribution<int>(0, n)(rng)));
        }
    }

    std::vector<std::size_t> order(s.elements.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> rank_of(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank_of[order[i]] = i;

    const auto attractor = [](const flow::CriticalElement& e) { return e.index == 0; };
    const auto repeller = [n](const flow::CriticalElement& e) {
        return e.is_orbit() ? e.index == n - 1 : e.index == n;
    };
    std::bernoulli_distribution connect(0.45);
    std::uniform_int_distribution<int> multiplicity(1, 3);
    for (std::size_t a = 0; a < s.elements.size(); ++a) {
        for (std::size_t b = 0; b < s.elements.size(); ++b) {
            const auto& src = s.elements[a];
            const auto& dst = s.elements[b];
            if (a == b || rank_of[a] > rank_of[b] || attractor(src) || repeller(dst) ||
                !flow::dimension_rule_allows(src, dst, n) || !connect(rng)) {
                continue;
            }
            s.connections.set(src.name, dst.name, multiplicity(rng));
        }
    }
    return s;
}

/// Random labelled poset: labels in 0..3, relations only from a lower
/// label to a strictly higher one.
inline poset::LabeledPoset random_poset(std::mt19937& rng, std::size_t max_nodes = 10) {
    const auto size = std::uniform_int_distribution<std::size_t>(1, max_nodes)(rng);
    std::vector<std::pair<std::string, int>> nodes;
    for (std::size_t i = 0; i < size; ++i) {
        nodes.emplace_back("v" + std::to_string(i), std::uniform_int_distribution<int>(0, 3)(rng));
    }
    std::bernoulli_distribution relate(0.35);
    std::vector<std::pair<std::string, std::string>> relations;
    for (const auto& lo : nodes) {
        for (const auto& hi : nodes) {
            if (lo.second < hi.second && relate(rng)) relations.emplace_back(lo.first, hi.first);
        }
    }
    return poset::LabeledPoset::from_relations(nodes, relations);
}

/// Same poset with renamed nodes presented in a random order.
inline poset::LabeledPoset shuffled(const poset::LabeledPoset& p, std::mt19937& rng) {
    std::vector<std::size_t> perm(p.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto renamed = [](const std::string& name) { return "w_" + name; };
    std::vector<std::pair<std::string, int>> nodes;
    for (auto i : perm) nodes.emplace_back(renamed(p.name(i)), p.label(i));
    std::vector<std::pair<std::string, std::string>> relations;
    for (auto [lo, hi] : p.hasse()) relations.emplace_back(renamed(p.name(lo)), renamed(p.name(hi)));
    std::shuffle(relations.begin(), relations.end(), rng);
    return poset::LabeledPoset::from_relations(nodes, relations, p.vocabulary());
}

} // namespace msflow::testing
