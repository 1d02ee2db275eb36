#include "msflow/error.hpp"
#include "msflow/msf_format.hpp"
#include "msflow/poset.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

namespace {

using namespace msflow;
using poset::LabeledPoset;
using msflow::testing::fixture;
using msflow::testing::load_fixture;

using Mapping = std::vector<std::pair<std::string, std::string>>;

// A mapping is an isomorphism when it is a label-preserving bijection that
// preserves and reflects the order.
bool is_valid_isomorphism(const LabeledPoset& a, const LabeledPoset& b, const Mapping& m) {
    if (a.size() != b.size() || m.size() != a.size()) return false;
    std::vector<std::size_t> image(a.size());
    std::vector<bool> hit(b.size(), false);
    for (const auto& [from, to] : m) {
        const auto i = a.index_of(from);
        const auto j = b.index_of(to);
        if (hit[j] || a.label(i) != b.label(j)) return false;
        hit[j] = true;
        image[i] = j;
    }
    for (std::size_t x = 0; x < a.size(); ++x) {
        for (std::size_t y = 0; y < a.size(); ++y) {
            if (a.leq(x, y) != b.leq(image[x], image[y])) return false;
        }
    }
    return true;
}

// Tries every permutation; only for small posets.
bool isomorphic_by_permutations(const LabeledPoset& a, const LabeledPoset& b) {
    if (a.size() != b.size()) return false;
    std::vector<std::size_t> perm(a.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t x = 0; x < a.size() && ok; ++x) {
            ok = a.label(x) == b.label(perm[x]);
            for (std::size_t y = 0; y < a.size() && ok; ++y) ok = a.leq(x, y) == b.leq(perm[x], perm[y]);
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

perturb::Resolution as_resolution(const flow::FlowSystem& s) { return {s, {}}; }

TEST(Poset, Fig2Bases) {
    const auto y = poset::load_pos(fixture("fig2-Y.pos"));
    const auto yp = poset::load_pos(fixture("fig2-Yprime.pos"));
    EXPECT_EQ(poset::base(y, "d"), (std::vector<std::string>{"a", "d"}));
    EXPECT_EQ(poset::base(y, "c"), (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(poset::base(yp, "d_p"), (std::vector<std::string>{"a_p", "b_p", "c_p", "d_p"}));
    EXPECT_THROW((void)poset::base(y, "zz"), UnknownElement);
}

TEST(Poset, Fig2IsNotIsomorphic) {
    const auto v = poset::is_isomorphic(poset::load_pos(fixture("fig2-Y.pos")),
                                        poset::load_pos(fixture("fig2-Yprime.pos")));
    EXPECT_FALSE(v.isomorphic);
    EXPECT_FALSE(v.mapping.has_value());
    EXPECT_EQ(v.certificate, "downset sizes {2} vs {4} for 2-cell nodes");
}

TEST(Poset, HasseDiagram) {
    const auto yp = poset::load_pos(fixture("fig2-Yprime.pos"));
    std::vector<std::pair<std::string, std::string>> covers;
    for (auto [a, b] : yp.hasse()) covers.emplace_back(yp.name(a), yp.name(b));
    EXPECT_EQ(covers, (Mapping{{"a_p", "c_p"}, {"b_p", "c_p"}, {"c_p", "d_p"}}));
    EXPECT_TRUE(yp.less(yp.index_of("a_p"), yp.index_of("d_p")));
    EXPECT_FALSE(yp.covers(yp.index_of("a_p"), yp.index_of("d_p")));
}

TEST(Poset, PosFormatErrors) {
    EXPECT_THROW((void)poset::parse_pos("node a 0\nlt a b\n"), ParseError);
    EXPECT_THROW((void)poset::parse_pos("node a 0\nnode a 1\n"), ParseError);
    EXPECT_THROW((void)poset::parse_pos("node a 0\nlt a a\n"), ParseError);
    EXPECT_THROW((void)poset::parse_pos("vertex a 0\n"), ParseError);
    EXPECT_THROW((void)poset::parse_pos("node a 0\nnode b 1\nlt a b\nlt b a\n"), Error);
}

TEST(Poset, Vocabulary) {
    const poset::LabelVocabulary flow2{poset::LabelVocabulary::Kind::rest_points, 2};
    const poset::LabelVocabulary flow3{poset::LabelVocabulary::Kind::rest_points, 3};
    EXPECT_EQ(flow2.name(0), "sink");
    EXPECT_EQ(flow2.name(1), "saddle");
    EXPECT_EQ(flow2.name(2), "source");
    EXPECT_EQ(flow3.name(2), "index-2 saddle");
    EXPECT_EQ(poset::LabelVocabulary{}.name(1), "1-cell");
}

TEST(FacePoset, LabelsDecreaseAlongTheOrder) {
    for (const auto& name : msflow::testing::flow_fixture_names()) {
        const auto s = load_fixture(name);
        if (s.has_orbits()) {
            EXPECT_THROW((void)poset::face_poset(s), Error) << name;
            continue;
        }
        const auto p = poset::face_poset(s);
        for (std::size_t a = 0; a < p.size(); ++a) {
            for (std::size_t b = 0; b < p.size(); ++b) {
                if (p.less(a, b)) EXPECT_LT(p.label(a), p.label(b)) << name;
            }
        }
    }
}

TEST(FacePoset, IncidenceProfiles) {
    using Counts = std::vector<std::size_t>;
    EXPECT_EQ(poset::incidence_counts(poset::face_poset(load_fixture("fig4-X1.msf")), 0, 1), (Counts{1, 2, 3, 4}));
    EXPECT_EQ(poset::incidence_counts(poset::face_poset(load_fixture("fig4-X2.msf")), 0, 1), (Counts{1, 2, 3, 4}));
    EXPECT_EQ(poset::incidence_counts(poset::face_poset(load_fixture("fig4-X3.msf")), 0, 1), (Counts{1, 3, 3, 3}));
}

TEST(Isomorphism, SelfComparisonIsIdentity) {
    const auto p = poset::face_poset(load_fixture("fig4-X1.msf"));
    const auto v = poset::is_isomorphic(p, p);
    ASSERT_TRUE(v.isomorphic);
    for (const auto& [a, b] : *v.mapping) EXPECT_EQ(a, b);
    EXPECT_FALSE(v.certificate.has_value());
}

TEST(Isomorphism, EquivalenceRelationOnFixtures) {
    std::vector<LabeledPoset> ps;
    for (const auto& name : msflow::testing::flow_fixture_names()) {
        const auto s = load_fixture(name);
        if (!s.has_orbits()) ps.push_back(poset::face_poset(s));
    }
    for (const char* name : {"fig2-Y.pos", "fig2-Yprime.pos"}) ps.push_back(poset::load_pos(fixture(name)));
    for (const auto& a : ps) {
        for (const auto& b : ps) {
            const auto ab = poset::is_isomorphic(a, b);
            EXPECT_EQ(ab.isomorphic, poset::is_isomorphic(b, a).isomorphic);
            EXPECT_NE(ab.mapping.has_value(), ab.certificate.has_value());
            if (ab.mapping) EXPECT_TRUE(is_valid_isomorphism(a, b, *ab.mapping));
            for (const auto& c : ps) {
                if (ab.isomorphic && poset::is_isomorphic(b, c).isomorphic) {
                    EXPECT_TRUE(poset::is_isomorphic(a, c).isomorphic);
                }
            }
        }
    }
}

TEST(Isomorphism, Fig3ResolutionsSwapTwoSinks) {
    const auto v = poset::is_isomorphic(poset::face_poset(load_fixture("fig3-X1.msf")),
                                        poset::face_poset(load_fixture("fig3-X2.msf")));
    ASSERT_TRUE(v.isomorphic);
    for (const auto& [a, b] : *v.mapping) {
        if (a == "q1") EXPECT_EQ(b, "q2");
        else if (a == "q2") EXPECT_EQ(b, "q1");
        else EXPECT_EQ(a, b);
    }
}

TEST(IsomorphismProperty, ShuffledPosetsAreIsomorphic) {
    std::mt19937 rng(41);
    for (int i = 0; i < 200; ++i) {
        const auto p = msflow::testing::random_poset(rng);
        const auto q = msflow::testing::shuffled(p, rng);
        const auto v = poset::is_isomorphic(p, q);
        ASSERT_TRUE(v.isomorphic);
        EXPECT_TRUE(is_valid_isomorphism(p, q, *v.mapping));
        EXPECT_EQ(poset::invariant_profile(p), poset::invariant_profile(q));
    }
}

TEST(IsomorphismProperty, AgreesWithPermutationSearch) {
    std::mt19937 rng(42);
    int positives = 0;
    for (int i = 0; i < 400; ++i) {
        const auto a = msflow::testing::random_poset(rng, 6);
        const auto b = msflow::testing::random_poset(rng, 6);
        const bool expected = isomorphic_by_permutations(a, b);
        const auto v = poset::is_isomorphic(a, b);
        ASSERT_EQ(v.isomorphic, expected);
        if (v.isomorphic) {
            ++positives;
            EXPECT_TRUE(is_valid_isomorphism(a, b, *v.mapping));
        }
    }
    EXPECT_GT(positives, 0);
}

TEST(IsomorphismProperty, BaseIsTheDownset) {
    std::mt19937 rng(43);
    for (int i = 0; i < 100; ++i) {
        const auto p = msflow::testing::random_poset(rng);
        for (std::size_t e = 0; e < p.size(); ++e) {
            const auto b = poset::base(p, p.name(e));
            EXPECT_NE(std::find(b.begin(), b.end(), p.name(e)), b.end());
            for (const auto& name : b) {
                const auto x = p.index_of(name);
                EXPECT_TRUE(p.leq(x, e));
                for (std::size_t y = 0; y < p.size(); ++y) {
                    if (p.leq(y, x)) EXPECT_NE(std::find(b.begin(), b.end(), p.name(y)), b.end());
                }
            }
        }
    }
}

TEST(Verdict, Fig4) {
    const auto x1 = load_fixture("fig4-X1.msf");
    const auto same = poset::cell_equivalence_verdict(x1, x1);
    EXPECT_EQ(same.headline(), "necessary conditions pass (inconclusive)");
    EXPECT_EQ(same.certificate, "equal cell counts and isomorphic face posets");
    ASSERT_TRUE(same.mapping.has_value());

    const auto v = poset::cell_equivalence_verdict(x1, load_fixture("fig4-X3.msf"));
    EXPECT_EQ(v.headline(), "NOT cell equivalent");
    EXPECT_EQ(v.certificate, "sink-saddle incidence {1,2,3,4} vs {1,3,3,3}");
    EXPECT_FALSE(v.mapping.has_value());
}

TEST(Verdict, CountMismatchAndOrbitInputs) {
    const auto v = poset::cell_equivalence_verdict(load_fixture("fig4-X1.msf"), load_fixture("fig3-X1.msf"));
    EXPECT_EQ(v.kind, poset::Verdict::Kind::not_cell_equivalent);
    EXPECT_EQ(v.certificate, "count mismatch: sink counts 4 vs 3");
    EXPECT_THROW((void)poset::cell_equivalence_verdict(load_fixture("fig3.msf"), load_fixture("fig3-X1.msf")), Error);
}

TEST(Census, Fig3ResolvedFixturesShareAClass) {
    const auto report = poset::census(load_fixture("fig3.msf"));
    ASSERT_EQ(report.resolutions.size(), 6u);
    const auto x1 = load_fixture("fig3-X1.msf");
    const auto x2 = load_fixture("fig3-X2.msf");
    std::optional<std::size_t> class1, class2;
    for (std::size_t c = 0; c < report.classes.size(); ++c) {
        for (auto m : report.classes[c].members) {
            if (flow::same_structure(report.resolutions[m].system, x1)) class1 = c;
            if (flow::same_structure(report.resolutions[m].system, x2)) class2 = c;
        }
    }
    ASSERT_TRUE(class1 && class2);
    EXPECT_EQ(*class1, *class2);
}

TEST(Census, Fig4FixturesFormTwoClasses) {
    const auto report = poset::census_of({as_resolution(load_fixture("fig4-X1.msf")),
                                          as_resolution(load_fixture("fig4-X2.msf")),
                                          as_resolution(load_fixture("fig4-X3.msf"))});
    ASSERT_EQ(report.classes.size(), 2u);
    EXPECT_EQ(report.classes[0].members, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(report.classes[1].members, (std::vector<std::size_t>{2}));
}

TEST(Census, GradientInputHasOneClass) {
    const auto report = poset::census(load_fixture("fig4-X3.msf"));
    EXPECT_EQ(report.resolutions.size(), 1u);
    EXPECT_EQ(report.classes.size(), 1u);
}

TEST(Census, ClassesPartitionTheResolutions) {
    const auto report = poset::census(load_fixture("fig4.msf"));
    std::vector<std::size_t> all;
    for (const auto& c : report.classes) {
        EXPECT_EQ(c.members.front(), c.representative);
        all.insert(all.end(), c.members.begin(), c.members.end());
        for (auto m : c.members) {
            EXPECT_TRUE(poset::is_isomorphic(poset::face_poset(report.resolutions[c.representative].system),
                                             poset::face_poset(report.resolutions[m].system))
                            .isomorphic);
        }
    }
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expected(report.resolutions.size());
    std::iota(expected.begin(), expected.end(), 0);
    EXPECT_EQ(all, expected);
}

} // namespace
