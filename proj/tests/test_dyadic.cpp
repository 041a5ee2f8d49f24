#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fha/dyadic.hpp"

using namespace fha;

namespace {

bool nested_or_disjoint(const Cube& a, const Cube& b) {
    std::vector<int> inter;
    std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                          std::back_inserter(inter));
    if (inter.empty()) return true;
    return inter.size() == a.members.size() || inter.size() == b.members.size();
}

} // namespace

TEST_CASE("cycle hierarchy matches the hand construction") {
    Space c8 = build_space(SpaceKind::cycle, 8);
    // scales 8,4,2,1
    DyadicTree tree = christ_decomposition(c8, -3, 0);

    const auto& top = tree.cubes_at_level(-3);
    REQUIRE(top.size() == 1);
    CHECK(top[0].members.size() == 8);

    const auto& bottom = tree.cubes_at_level(0);
    REQUIRE(bottom.size() == 8);
    for (const Cube& q : bottom) CHECK(q.members.size() == 1);

    // counts nonincreasing toward coarser levels
    size_t prev = 9;
    for (int nu = -3; nu <= 0; ++nu) {
        size_t cnt = tree.cubes_at_level(nu).size();
        CHECK(cnt >= 1);
        CHECK(cnt <= 8);
        if (nu > -3) CHECK(cnt >= prev);
        prev = cnt;
    }
}

TEST_CASE("two-point space hierarchy") {
    Space p2 = build_space(SpaceKind::path, 2);
    DyadicTree tree = christ_decomposition(p2, -1, 0);
    CHECK(tree.cubes_at_level(-1).size() == 1);
    CHECK(tree.cubes_at_level(0).size() == 2);
}

TEST_CASE("levels partition the space exactly") {
    Space s = build_space(SpaceKind::grid2d, 16);
    DyadicTree tree = christ_decomposition(s, -3, 1);
    for (int nu = tree.level_min(); nu <= tree.level_max(); ++nu) {
        std::vector<int> seen;
        double mass = 0.0;
        for (const Cube& q : tree.cubes_at_level(nu)) {
            REQUIRE(!q.members.empty());
            CHECK(std::binary_search(q.members.begin(), q.members.end(), q.center));
            seen.insert(seen.end(), q.members.begin(), q.members.end());
            mass += tree.cube_measure(q);
        }
        std::sort(seen.begin(), seen.end());
        REQUIRE(static_cast<int>(seen.size()) == s.size());
        for (int i = 0; i < s.size(); ++i) CHECK(seen[i] == i);
        CHECK(mass == doctest::Approx(s.total_measure()));
    }
}

TEST_CASE("nesting trichotomy and unique ancestors") {
    Space s = build_space(SpaceKind::cycle, 24);
    DyadicTree tree = christ_decomposition(s, -4, 1);
    std::vector<const Cube*> all;
    for (int nu = tree.level_min(); nu <= tree.level_max(); ++nu)
        for (const Cube& q : tree.cubes_at_level(nu)) all.push_back(&q);

    for (const Cube* a : all)
        for (const Cube* b : all) CHECK(nested_or_disjoint(*a, *b));

    // each cube reaches exactly one cube at every coarser level via parents,
    // and that ancestor contains it
    for (const Cube* q : all) {
        const Cube* cur = q;
        for (int nu = q->level - 1; nu >= tree.level_min(); --nu) {
            cur = &tree.parent_of(*cur);
            CHECK(cur->level == nu);
            CHECK(std::includes(cur->members.begin(), cur->members.end(), q->members.begin(),
                                q->members.end()));
            int containing = 0;
            for (const Cube& cand : tree.cubes_at_level(nu))
                if (std::includes(cand.members.begin(), cand.members.end(), q->members.begin(),
                                  q->members.end()))
                    ++containing;
            CHECK(containing == 1);
        }
    }
}

TEST_CASE("measured constants certify the geometry") {
    Space s = build_space(SpaceKind::grid2d, 36);
    DyadicTree tree = christ_decomposition(s, -4, 1);
    CHECK(tree.kappa0() > 0.0);
    CHECK(tree.kappa0() <= 4.0 * s.quasi_const());
    CHECK(tree.a0_achieved() > 0.0);

    for (int nu = tree.level_min(); nu <= tree.level_max(); ++nu) {
        for (const Cube& q : tree.cubes_at_level(nu)) {
            double scale = q.sidelength();
            for (int a : q.members)
                for (int b : q.members) CHECK(s.d(a, b) <= tree.kappa0() * scale + 1e-12);
            // inner ball: B(center, a0 * scale) inside the cube
            for (int y = 0; y < s.size(); ++y)
                if (s.d(q.center, y) < tree.a0_achieved() * scale)
                    CHECK(std::binary_search(q.members.begin(), q.members.end(), y));
        }
    }
}

TEST_CASE("construction is deterministic and exports json") {
    Space s = build_space(SpaceKind::cycle, 12);
    DyadicTree t1 = christ_decomposition(s, -3, 0);
    DyadicTree t2 = christ_decomposition(s, -3, 0);
    CHECK(t1.to_json() == t2.to_json());

    nlohmann::json j = t1.to_json();
    CHECK(j.contains("kappa0"));
    CHECK(j.contains("a0_achieved"));
    REQUIRE(j.contains("cubes"));
    CHECK(!j["cubes"].empty());
    for (const auto& c : j["cubes"]) {
        CHECK(c.contains("level"));
        CHECK(c.contains("id"));
        CHECK(c.contains("center"));
        CHECK(c.contains("members"));
        CHECK(c.contains("parent"));
    }
}

TEST_CASE("coarsest scale must cover the diameter") {
    Space s = build_space(SpaceKind::cycle, 12); // diameter 6
    CHECK_THROWS(christ_decomposition(s, -2, 0));
    CHECK_THROWS(christ_decomposition(s, 1, 0));
}
