#include "msflow/ej_complex.hpp"
#include "msflow/error.hpp"
#include "msflow/msf_format.hpp"
#include "msflow/perturb.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

namespace {

using namespace msflow;
using perturb::ChoiceDescriptor;
using perturb::CountMap;
using msflow::testing::fixture;
using msflow::testing::load_fixture;

// Two sources feeding a saddle and an attracting orbit.
constexpr const char* attractor_system =
    "dim 2\n"
    "rest z 0\n"
    "orbit g 0 untwisted\n"
    "rest s 1\n"
    "rest p1 2\n"
    "rest p2 2\n"
    "conn s z 1\n"
    "conn s g 1\n"
    "conn p1 s 1\n"
    "conn p2 s 1\n"
    "conn p1 g 1\n"
    "conn p2 g 1\n"
    "conn p1 z 1\n"
    "conn p2 z 1\n";

// Two repelling orbits over the same pair of sinks.
constexpr const char* two_orbit_system =
    "dim 2\n"
    "rest z1 0\n"
    "rest z2 0\n"
    "orbit g1 1 untwisted\n"
    "orbit g2 1 twisted\n"
    "conn g1 z1 1\n"
    "conn g1 z2 1\n"
    "conn g2 z1 1\n"
    "conn g2 z2 1\n";

std::size_t orbit_count(const flow::FlowSystem& s) {
    return static_cast<std::size_t>(
        std::count_if(s.elements.begin(), s.elements.end(), [](const auto& e) { return e.is_orbit(); }));
}

std::vector<std::string> messages_of(const flow::FlowSystem& s, const ChoiceDescriptor& d) {
    try {
        (void)perturb::apply_choice(s, d);
    } catch (const perturb::ChoiceError& e) {
        return e.failures();
    }
    return {};
}

bool has_prefix(const std::vector<std::string>& messages, const std::string& prefix) {
    return std::any_of(messages.begin(), messages.end(), [&](const auto& m) { return m.rfind(prefix, 0) == 0; });
}

TEST(Enumerate, CountsAreSizeTwoMultisetsOfSinks) {
    // m sinks give m(m+1)/2 multisets.
    EXPECT_EQ(perturb::enumerate_choices_2d(load_fixture("fig3.msf"), "gamma").size(), 6u);
    EXPECT_EQ(perturb::enumerate_choices_2d(load_fixture("fig4.msf"), "gamma").size(), 10u);
    EXPECT_EQ(perturb::enumerate_choices_2d(load_fixture("fig5.msf"), "gamma").size(), 10u);
}

TEST(Enumerate, RepellerChoiceShape) {
    const auto choices = perturb::enumerate_choices_2d(load_fixture("fig3.msf"), "gamma");
    const CountMap inherited{{"q0", 1}, {"q1", 1}, {"q2", 1}, {"s", 2}};
    for (const auto& d : choices) {
        EXPECT_EQ(d.p_out, inherited);
        EXPECT_TRUE(d.p_in.empty() && d.q_in.empty());
        int total = 0;
        for (const auto& [name, count] : d.q_out) total += count;
        EXPECT_EQ(total, 2);
    }
    EXPECT_EQ(choices.front().q_out, (CountMap{{"q0", 2}}));
    EXPECT_EQ(choices.back().q_out, (CountMap{{"q2", 2}}));
    EXPECT_EQ(choices.front().p_name, "p_gamma");
    EXPECT_EQ(choices.front().q_name, "q_gamma");
}

TEST(Enumerate, AttractorChoiceShape) {
    const auto s = flow::parse_msf(attractor_system);
    ASSERT_TRUE(flow::validate(s).empty());
    const auto choices = perturb::enumerate_choices_2d(s, "g", "x", "y");
    ASSERT_EQ(choices.size(), 3u);
    for (const auto& d : choices) {
        EXPECT_EQ(d.q_in, (CountMap{{"s", 1}, {"p1", 1}, {"p2", 1}}));
        EXPECT_TRUE(d.p_out.empty() && d.q_out.empty());
    }
    EXPECT_EQ(choices[1].p_in, (CountMap{{"p1", 1}, {"p2", 1}}));
}

TEST(Enumerate, Errors) {
    EXPECT_THROW((void)perturb::enumerate_choices_2d(load_fixture("fig6.msf"), "gamma"), Error);
    EXPECT_THROW((void)perturb::enumerate_choices_2d(load_fixture("fig3.msf"), "s"), Error);
    EXPECT_THROW((void)perturb::enumerate_choices_2d(load_fixture("fig3.msf"), "nope"), UnknownElement);
}

TEST(ApplyChoice, ReproducesResolvedFixture) {
    const auto s = load_fixture("fig3.msf");
    const ChoiceDescriptor d{"gamma", "p_gamma", "q_gamma", {{"q0", 1}, {"q1", 1}, {"q2", 1}, {"s", 2}},
                             {{"q0", 1}, {"q1", 1}}, {}, {}};
    const auto result = perturb::apply_choice(s, d);
    EXPECT_TRUE(flow::same_structure(result.system, load_fixture("fig3-X1.msf")));
    EXPECT_EQ(result.attaching_degree, 0);
    ASSERT_TRUE(result.claims.has_value());
    EXPECT_TRUE(result.claims->all_pass());
    EXPECT_TRUE(result.claims->products_equal);
}

TEST(ApplyChoice, EveryEnumeratedChoiceIsLocalAndValid) {
    for (const std::string name : {"fig3.msf", "fig4.msf", "fig5.msf"}) {
        const auto s = load_fixture(name);
        for (const auto& d : perturb::enumerate_choices_2d(s, "gamma")) {
            const auto r = perturb::apply_choice(s, d);
            EXPECT_TRUE(flow::validate(r.system, true).empty()) << name;
            EXPECT_EQ(orbit_count(r.system), orbit_count(s) - 1);
            EXPECT_EQ(r.system.connections.count(d.p_name, d.q_name), 2);
            for (const auto& [key, count] : s.connections) {
                if (key.first != "gamma" && key.second != "gamma") {
                    EXPECT_EQ(r.system.connections.count(key.first, key.second), count);
                }
            }
            for (const auto& [key, count] : r.system.connections) {
                const bool touches_new = key.first == d.p_name || key.first == d.q_name ||
                                         key.second == d.p_name || key.second == d.q_name;
                if (!touches_new) EXPECT_EQ(s.connections.count(key.first, key.second), count);
            }
            // Two flow lines from p to q cancel mod 2.
            const auto c = ej::build_complex(r.system);
            const auto k = s.at("gamma").index;
            EXPECT_FALSE(c.boundary(k + 1).get(c.find(k, d.q_name), c.find(k + 1, d.p_name)));
            ASSERT_TRUE(r.claims.has_value());
            EXPECT_TRUE(r.claims->all_pass()) << name;
        }
    }
}

TEST(ApplyChoice, AttractorClaimsUseMirroredForm) {
    const auto s = flow::parse_msf(attractor_system);
    for (const auto& d : perturb::enumerate_choices_2d(s, "g")) {
        const auto r = perturb::apply_choice(s, d);
        EXPECT_TRUE(flow::validate(r.system).empty());
        ASSERT_TRUE(r.claims.has_value());
        EXPECT_TRUE(r.claims->mirrored);
        EXPECT_TRUE(r.claims->all_pass());
        EXPECT_TRUE(r.claims->products_equal);
    }
}

TEST(ApplyChoice, NonInheritingChoiceFailsSameMatrixClaim) {
    // p keeps only one of the two flow lines to s, so d'_2 gains an entry.
    const auto s = load_fixture("fig3.msf");
    const ChoiceDescriptor d{"gamma", "p_gamma", "q_gamma", {{"q0", 1}, {"q1", 1}, {"q2", 1}, {"s", 1}},
                             {{"q0", 2}}, {}, {}};
    const auto r = perturb::apply_choice(s, d);
    ASSERT_TRUE(r.claims.has_value());
    EXPECT_TRUE(r.claims->zero_line.passed());
    EXPECT_FALSE(r.claims->same_matrix.passed());
    EXPECT_FALSE(r.claims->same_matrix.witnesses.empty());
    EXPECT_FALSE(r.claims->products_equal);
    EXPECT_FALSE(r.claims->all_pass());
}

TEST(ApplyChoice, ReportsEveryFailedConstraint) {
    const auto s = load_fixture("fig3.msf");
    ChoiceDescriptor d{"gamma", "s", "q_gamma", {{"q0", 1}, {"nope", 1}}, {{"s", 1}}, {}, {}};
    const auto failures = messages_of(s, d);
    EXPECT_TRUE(has_prefix(failures, "names: 's' collides"));
    EXPECT_TRUE(has_prefix(failures, "support: pout names 'nope'"));
    EXPECT_TRUE(has_prefix(failures, "dimension: qout connection q_gamma -> s"));
    EXPECT_TRUE(has_prefix(failures, "coverage: downstream element 'q1'"));

    d = {"s", "p", "q", {}, {}, {}, {}};
    EXPECT_TRUE(has_prefix(messages_of(s, d), "orbit: 's' is a rest point"));
    d = {"gamma", "p", "p", {{"q0", 1}, {"q1", 1}, {"q2", 1}, {"s", 2}}, {{"q0", -1}}, {}, {}};
    const auto more = messages_of(s, d);
    EXPECT_TRUE(has_prefix(more, "names: p and q are both named 'p'"));
    EXPECT_TRUE(has_prefix(more, "qout: non-positive count -1"));
}

TEST(ApplyChoice, TwistedOrbitOnlyChangesAttachingDegree) {
    const auto s = flow::parse_msf(two_orbit_system);
    const auto d1 = perturb::enumerate_choices_2d(s, "g1").front();
    const auto d2 = perturb::enumerate_choices_2d(s, "g2").front();
    EXPECT_EQ(perturb::apply_choice(s, d1).attaching_degree, 0);
    EXPECT_EQ(perturb::apply_choice(s, d2).attaching_degree, 2);
}

TEST(Claims, RequireRepellerOrAttractor) {
    const auto s = flow::parse_msf("dim 3\nrest z 0\nrest a 1\norbit g 1 untwisted\nrest p 3\n"
                                   "conn g z 1\nconn p g 1\nconn a z 2\nconn p a 1\n");
    ASSERT_TRUE(flow::validate(s).empty());
    const ChoiceDescriptor d{"g", "x", "y", {{"z", 1}}, {}, {{"p", 1}}, {}};
    const auto r = perturb::apply_choice(s, d);
    EXPECT_FALSE(r.claims.has_value());
    EXPECT_THROW((void)perturb::verify_franks_claims(s, r), std::invalid_argument);
}

TEST(ChoiceFormat, RoundTripAndErrors) {
    const ChoiceDescriptor d{"gamma", "p_gamma", "q_gamma", {{"q0", 1}, {"s", 2}}, {{"q1", 2}}, {}, {{"a", 3}}};
    EXPECT_EQ(perturb::parse_choice(perturb::serialize_choice(d)), d);
    EXPECT_THROW((void)perturb::parse_choice("new p q\n"), ParseError);
    EXPECT_THROW((void)perturb::parse_choice("orbit g\nnew p q\npout a 0\n"), ParseError);
    EXPECT_THROW((void)perturb::parse_choice("orbit g\nnew p q\npout a 1\npout a 1\n"), ParseError);
    EXPECT_THROW((void)perturb::parse_choice("orbit g\nnew p q\nfoo\n"), ParseError);
    EXPECT_NO_THROW((void)perturb::load_choice(fixture("fig6-gamma.msc")));
}

TEST(ResolveAll, GradientInputIsASingleton) {
    const auto s = load_fixture("fig4-X1.msf");
    const auto all = perturb::resolve_all(s);
    ASSERT_EQ(all.size(), 1u);
    EXPECT_EQ(all.front(), s);
}

TEST(ResolveAll, ProductOverOrbits) {
    const auto s = flow::parse_msf(two_orbit_system);
    const auto all = perturb::resolve_all_with_choices(s);
    ASSERT_EQ(all.size(), 9u);  // three choices per orbit
    for (const auto& r : all) {
        EXPECT_EQ(orbit_count(r.system), 0u);
        EXPECT_EQ(r.choices.size(), 2u);
        EXPECT_TRUE(flow::validate(r.system, true).empty());
        EXPECT_TRUE(ej::check_d2(ej::build_complex(r.system)).empty());
    }
}

TEST(ResolveAll, FixturesResolveToChainComplexes) {
    for (const std::string name : {"fig3.msf", "fig4.msf", "fig5.msf"}) {
        for (const auto& r : perturb::resolve_all(load_fixture(name))) {
            EXPECT_TRUE(flow::validate(r).empty()) << name;
            EXPECT_TRUE(ej::check_d2(ej::build_complex(r)).empty()) << name;
        }
    }
}

TEST(ResolveAll, ThreeDimensionsNeedExplicitDescriptors) {
    const auto s = load_fixture("fig6.msf");
    try {
        (void)perturb::resolve_all(s);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(),
                     "enumeration unsupported for n=3; supply an explicit descriptor for orbit 'gamma'");
    }
    const auto d = perturb::load_choice(fixture("fig6-gamma.msc"));
    const auto all = perturb::resolve_all(s, {{"gamma", d}});
    ASSERT_EQ(all.size(), 1u);
    EXPECT_TRUE(flow::validate(all.front()).empty());
    EXPECT_THROW((void)perturb::resolve_all(s, {{"s1", d}}), Error);
}

} // namespace
