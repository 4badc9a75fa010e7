#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "poikit/cluster.hpp"
#include "poikit/geo.hpp"
#include "poikit/trajectory.hpp"
#include "test_support.hpp"

using namespace poikit;
using testsupport::fix;

TEST_CASE("haversine frozen values") {
    CHECK(haversine_m({46.52, 6.58}, {46.52, 6.58}) == 0.0);

    // one degree of longitude along the equator is an exact arc of R*pi/180
    const double one_degree = kEarthRadiusM * std::numbers::pi / 180.0;
    CHECK(haversine_m({0, 0}, {0, 1}) == doctest::Approx(one_degree).epsilon(1e-12));
    CHECK(haversine_m({0, 0}, {0, 1}) == doctest::Approx(111'194.9).epsilon(1e-5));

    // antipodal along the equator: half circumference
    CHECK(haversine_m({0, 0}, {0, 180}) ==
          doctest::Approx(kEarthRadiusM * std::numbers::pi).epsilon(1e-12));
    CHECK(std::abs(haversine_m({0, 0}, {0, 180}) - 20'015'086.8) < 1.0);

    CHECK(haversine_m({0, 0}, {90, 0}) ==
          doctest::Approx(kEarthRadiusM * std::numbers::pi / 2.0).epsilon(1e-12));
}

TEST_CASE("euclidean_deg frozen values") {
    CHECK(euclidean_deg({1, 1}, {1, 1}) == 0.0);
    CHECK(euclidean_deg({0, 0}, {3, 4}) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(euclidean_deg({46.5, 6.5}, {46.5, 6.503}) == doctest::Approx(0.003).epsilon(1e-9));
}

TEST_CASE("centroid") {
    const LatLon single = centroid(std::vector<LatLon>{{46.5, 6.5}});
    CHECK(single == LatLon{46.5, 6.5});

    const LatLon mid = centroid(std::vector<LatLon>{{0, 0}, {2, 2}});
    CHECK(mid.lat == doctest::Approx(1.0));
    CHECK(mid.lon == doctest::Approx(1.0));

    const LatLon mean =
        centroid(std::vector<LatLon>{{46.50, 6.50}, {46.52, 6.54}, {46.54, 6.58}});
    CHECK(mean.lat == doctest::Approx(46.52).epsilon(1e-12));
    CHECK(mean.lon == doctest::Approx(6.54).epsilon(1e-12));

    CHECK_THROWS_WITH_AS(centroid({}), "empty point set", std::invalid_argument);
}

TEST_CASE("centroid is permutation invariant") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 200; ++round) {
        auto pts = testsupport::random_positions(rng, 1 + rng() % 40);
        const LatLon a = centroid(pts);
        std::shuffle(pts.begin(), pts.end(), rng);
        const LatLon b = centroid(pts);
        CHECK(a.lat == doctest::Approx(b.lat).epsilon(1e-12));
        CHECK(a.lon == doctest::Approx(b.lon).epsilon(1e-12));
    }
}

TEST_CASE("speed_between") {
    const auto a = fix("u", 0, 46.52, 6.58);
    const auto b = fix("u", 60, 46.52, 6.58);
    CHECK(speed_between(a, b) == 0.0);

    // 1000 m east along the equator in 3600 s is exactly 1 km/h
    const double deg_1000m = 1000.0 / kMetersPerDegLat;
    CHECK(speed_between(fix("u", 0, 0, 0), fix("u", 3600, 0, deg_1000m)) ==
          doctest::Approx(1.0).epsilon(1e-9));

    // 25 m in 60 s is 1.5 km/h
    const double deg_25m = 25.0 / kMetersPerDegLat;
    CHECK(speed_between(fix("u", 0, 0, 0), fix("u", 60, 0, deg_25m)) ==
          doctest::Approx(1.5).epsilon(1e-9));

    CHECK_THROWS_WITH_AS(speed_between(b, a), "non-positive time delta", std::invalid_argument);
    CHECK_THROWS_WITH_AS(speed_between(a, a), "non-positive time delta", std::invalid_argument);
}

TEST_CASE("distance functions satisfy metric properties on random triples") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> lat(-89.0, 89.0);
    std::uniform_real_distribution<double> lon(-179.0, 179.0);
    for (int round = 0; round < 1000; ++round) {
        const LatLon a{lat(rng), lon(rng)};
        const LatLon b{lat(rng), lon(rng)};
        const LatLon c{lat(rng), lon(rng)};
        for (auto dist : {haversine_m, euclidean_deg}) {
            const double ab = dist(a, b);
            const double bc = dist(b, c);
            const double ac = dist(a, c);
            REQUIRE(dist(a, a) == 0.0);
            REQUIRE(ab == dist(b, a));
            REQUIRE(ab >= 0.0);
            REQUIRE(ac <= ab + bc + 1e-6 * (ab + bc + 1.0));
        }
    }
}

TEST_CASE("trajectory construction sorts and deduplicates") {
    std::vector<TrajectoryPoint> pts = {
        fix("u", 300, 46.52, 6.58),
        fix("u", 100, 46.53, 6.59),
        fix("u", 300, 46.52, 6.58),  // exact duplicate
        fix("u", 200, 46.54, 6.60),
    };
    const Trajectory traj = make_trajectory("u", pts);
    REQUIRE(traj.size() == 3);
    CHECK(traj.points[0].timestamp == 100);
    CHECK(traj.points[1].timestamp == 200);
    CHECK(traj.points[2].timestamp == 300);

    // near-duplicates are kept
    pts = {fix("u", 100, 46.52, 6.58), fix("u", 100, 46.52, 6.5800001)};
    CHECK(make_trajectory("u", pts).size() == 2);

    CHECK_THROWS_AS(make_trajectory("u", {fix("other", 0, 1, 1)}), std::invalid_argument);
    CHECK_THROWS_AS(make_trajectory("u", {fix("u", 0, 91.0, 0)}), std::invalid_argument);
    CHECK_THROWS_AS(make_trajectory("u", {fix("u", 0, 0, -180.5)}), std::invalid_argument);

    TrajectoryPoint bad = fix("u", 0, 0, 0);
    bad.speed = -1.0;
    CHECK_THROWS_AS(make_trajectory("u", {bad}), std::invalid_argument);
}

TEST_CASE("cluster radius round-trips from members") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 300; ++round) {
        const auto pos = testsupport::random_positions(rng, 2 + rng() % 30);
        const Trajectory traj = testsupport::traj_from_positions(pos);
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < pos.size(); ++i) {
            if (rng() % 2 == 0) {
                members.push_back(i);
            }
        }
        if (members.empty()) {
            members.push_back(0);
        }
        const Cluster c = make_cluster(traj, members, 1);
        REQUIRE(c.radius_m == cluster_radius_m(traj, c.members, c.centroid));
        REQUIRE(c.first_seen <= c.last_seen);
        REQUIRE(!c.members.empty());
    }
}
