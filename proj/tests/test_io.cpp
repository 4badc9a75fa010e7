#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "poikit/io.hpp"
#include "test_support.hpp"

using namespace poikit;
using testsupport::ScratchDir;
using testsupport::read_file;
using testsupport::write_file;

namespace {

constexpr const char* kTrajHeader = "user_id,timestamp,lat,lon,alt,speed,h_acc,v_acc\n";
constexpr const char* kGtHeader = "user_id,gt_id,lat,lon,validated,category,other_text\n";

}  // namespace

TEST_CASE("read_trajectories handles the vacuous and happy paths") {
    ScratchDir dir;
    const auto path = dir.file("traj.csv");

    write_file(path, kTrajHeader);
    CHECK(read_trajectories(path).empty());

    // one exact duplicate plus out-of-order timestamps
    write_file(path, std::string(kTrajHeader) +
                         "u1,300,46.52,6.58,,,,\n"
                         "u1,100,46.53,6.59,400,12.5,8,3\n"
                         "u1,300,46.52,6.58,,,,\n");
    const auto data = read_trajectories(path);
    REQUIRE(data.size() == 1);
    const Trajectory& traj = data.at("u1");
    REQUIRE(traj.size() == 2);
    CHECK(traj.points[0].timestamp == 100);
    CHECK(traj.points[0].alt == 400.0);
    CHECK(traj.points[0].speed == 12.5);
    CHECK(traj.points[1].timestamp == 300);
    CHECK(!traj.points[1].alt.has_value());
}

TEST_CASE("read_trajectories sorts rows by timestamp") {
    ScratchDir dir;
    const auto path = dir.file("traj.csv");
    std::mt19937_64 rng(4242);
    std::string body(kTrajHeader);
    std::vector<std::int64_t> stamps;
    for (int i = 0; i < 50; ++i) {
        const auto ts = static_cast<std::int64_t>(rng() % 100'000);
        stamps.push_back(ts);
        body += "u," + std::to_string(ts) + ",46.5,6.5,,,,\n";
    }
    write_file(path, body);
    const auto traj = read_trajectories(path).at("u");
    std::sort(stamps.begin(), stamps.end());
    stamps.erase(std::unique(stamps.begin(), stamps.end()), stamps.end());  // dedup same fix
    REQUIRE(traj.size() == stamps.size());
    for (std::size_t i = 0; i < stamps.size(); ++i) {
        REQUIRE(traj.points[i].timestamp == stamps[i]);
    }
}

TEST_CASE("read_trajectories truncates fractional timestamps") {
    ScratchDir dir;
    const auto path = dir.file("traj.csv");
    write_file(path, std::string(kTrajHeader) + "u,1519862400.75,46.5,6.5,,,,\n");
    CHECK(read_trajectories(path).at("u").points[0].timestamp == 1519862400);
}

TEST_CASE("read_trajectories rejects malformed input all-or-nothing") {
    ScratchDir dir;
    const auto path = dir.file("traj.csv");

    write_file(path, "user,timestamp,lat,lon\nu,0,46.5,6.5,,,,\n");
    CHECK_THROWS_WITH_AS(read_trajectories(path), doctest::Contains("bad header"), ParseError);

    write_file(path, std::string(kTrajHeader) + "u,1,46.5,6.5,,,,\nu,2,abc,6.5,,,,\n");
    CHECK_THROWS_WITH_AS(read_trajectories(path),
                         doctest::Contains("row 3: parse error"), ParseError);

    write_file(path, std::string(kTrajHeader) + "u,1,95.0,6.5,,,,\n");
    CHECK_THROWS_WITH_AS(read_trajectories(path),
                         doctest::Contains("row 2: coordinate out of range"), ParseError);

    write_file(path, std::string(kTrajHeader) + "u,1,46.5,6.5,,-3,,\n");
    CHECK_THROWS_AS(read_trajectories(path), ParseError);

    CHECK_THROWS_AS(read_trajectories(dir.file("missing.csv")), IoError);
}

TEST_CASE("trajectory write/read is idempotent") {
    ScratchDir dir;
    std::mt19937_64 rng(777);
    std::map<std::string, Trajectory> data;
    for (const std::string user : {"a", "bb"}) {
        std::vector<TrajectoryPoint> pts;
        for (int i = 0; i < 40; ++i) {
            auto p = testsupport::fix(user, static_cast<std::int64_t>(rng() % 50'000),
                                      46.0 + (rng() % 1000) * 1e-4, 6.0 + (rng() % 1000) * 1e-4);
            if (rng() % 2) {
                p.speed = (rng() % 300) * 0.1;
            }
            if (rng() % 3 == 0) {
                p.h_acc = (rng() % 100) * 0.5;
            }
            pts.push_back(std::move(p));
        }
        data.emplace(user, make_trajectory(user, std::move(pts)));
    }
    const auto first = dir.file("first.csv");
    const auto second = dir.file("second.csv");
    write_trajectories(data, first);
    write_trajectories(read_trajectories(first), second);
    CHECK(read_file(first) == read_file(second));
}

TEST_CASE("read_ground_truth parses and validates the closed vocabulary") {
    ScratchDir dir;
    const auto path = dir.file("gt.csv");

    write_file(path, std::string(kGtHeader) +
                         "u1,0,46.5,6.5,YES,sustenance,\n"
                         "u1,1,46.6,6.6,no,,\n"
                         "u2,0,46.7,6.7,Yes,other,climbing gym\n");
    const auto gt = read_ground_truth(path);
    REQUIRE(gt.size() == 2);
    REQUIRE(gt.at("u1").size() == 2);
    CHECK(gt.at("u1")[0].validated);
    CHECK(gt.at("u1")[0].category == Category::kSustenance);
    CHECK(!gt.at("u1")[1].validated);
    CHECK(!gt.at("u1")[1].category.has_value());
    CHECK(gt.at("u2")[0].category == Category::kOther);
    CHECK(gt.at("u2")[0].other_text == "climbing gym");

    write_file(path, std::string(kGtHeader) + "u1,0,46.5,6.5,yes,restaurant,\n");
    CHECK_THROWS_WITH_AS(read_ground_truth(path),
                         doctest::Contains("row 2: unknown category"), ParseError);

    write_file(path, std::string(kGtHeader) +
                         "u1,0,46.5,6.5,yes,work,\n"
                         "u1,0,46.6,6.6,no,,\n");
    CHECK_THROWS_WITH_AS(read_ground_truth(path),
                         doctest::Contains("row 3: duplicate gt_id"), ParseError);

    write_file(path, std::string(kGtHeader) + "u1,0,46.5,6.5,maybe,,\n");
    CHECK_THROWS_AS(read_ground_truth(path), ParseError);

    write_file(path, std::string(kGtHeader) + "u1,0,46.5,6.5,yes,work,stray text\n");
    CHECK_THROWS_AS(read_ground_truth(path), ParseError);
}

TEST_CASE("ground truth with quoted free text round-trips") {
    ScratchDir dir;
    std::map<std::string, std::vector<GroundTruthPoint>> gt;
    GroundTruthPoint g;
    g.gt_id = 0;
    g.lat = 46.5;
    g.lon = 6.5;
    g.validated = true;
    g.category = Category::kOther;
    g.other_text = "cafe \"Le Central\", old town";
    gt["u"].push_back(g);

    const auto path = dir.file("gt.csv");
    write_ground_truth(gt, path);
    const auto back = read_ground_truth(path);
    REQUIRE(back.at("u").size() == 1);
    CHECK(back.at("u")[0].other_text == g.other_text);

    const auto again = dir.file("gt2.csv");
    write_ground_truth(back, again);
    CHECK(read_file(path) == read_file(again));
}

TEST_CASE("cluster document schema and round-trip") {
    ScratchDir dir;
    const auto path = dir.file("clusters.json");

    write_clusters({}, path);
    CHECK(read_file(path) == "[]\n");
    CHECK(read_clusters(path).empty());

    // one cluster: all nine keys present
    std::mt19937_64 seed_rng(1);
    std::map<std::string, std::vector<Cluster>> clusters;
    const Trajectory traj =
        testsupport::traj_from_positions(testsupport::random_positions(seed_rng, 5));
    clusters["u"].push_back(make_cluster(traj, {0, 1, 2}, 2));
    write_clusters(clusters, path);
    const std::string text = read_file(path);
    for (const char* key : {"user_id", "cluster_id", "centroid_lat", "centroid_lon", "radius_m",
                            "visit_count", "first_seen", "last_seen", "member_count"}) {
        CHECK(text.find(std::string("\"") + key + "\"") != std::string::npos);
    }

    // 100 clusters, write -> read -> write: structurally identical
    std::mt19937_64 rng(88);
    clusters.clear();
    for (int u = 0; u < 5; ++u) {
        const std::string user = "user" + std::to_string(u);
        const Trajectory t =
            testsupport::traj_from_positions(testsupport::random_positions(rng, 60), 60, user);
        for (int c = 0; c < 20; ++c) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (rng() % 3 == 0) {
                    members.push_back(i);
                }
            }
            if (members.empty()) {
                members.push_back(static_cast<std::size_t>(rng() % t.size()));
            }
            auto cluster = make_cluster(t, std::move(members), static_cast<int>(1 + rng() % 5));
            cluster.id = c;
            clusters[user].push_back(std::move(cluster));
        }
    }
    write_clusters(clusters, path);
    const auto records = read_clusters(path);
    std::size_t total = 0;
    for (const auto& [user, recs] : records) {
        total += recs.size();
        for (const ClusterRecord& r : recs) {
            const Cluster& src = clusters.at(user)[static_cast<std::size_t>(r.cluster_id)];
            REQUIRE(r.centroid_lat == src.centroid.lat);
            REQUIRE(r.centroid_lon == src.centroid.lon);
            REQUIRE(r.radius_m == src.radius_m);
            REQUIRE(r.visit_count == src.visit_count);
            REQUIRE(r.member_count == static_cast<std::int64_t>(src.members.size()));
        }
    }
    CHECK(total == 100);

    write_file(path, "{\"not\": \"an array\"}");
    CHECK_THROWS_AS(read_clusters(path), ParseError);
    write_file(path, "[{\"user_id\": \"u\"}]");
    CHECK_THROWS_WITH_AS(read_clusters(path), doctest::Contains("missing key"), ParseError);
}

TEST_CASE("roc csv round-trips at full precision") {
    ScratchDir dir;
    const auto path = dir.file("roc.csv");

    write_roc({}, path);
    CHECK(read_file(path) == "parameter_label,fpr,tpr\n");

    std::vector<RocPoint> points;
    for (int k : {10, 30, 100, 200, 300, 1000}) {
        points.push_back({"k=" + std::to_string(k), 1.0 / (k + 7.0), 1.0 - 1.0 / (3.0 * k)});
    }
    write_roc(points, path);
    const std::string text = read_file(path);
    CHECK(std::count(text.begin(), text.end(), '\n') == 7);

    const auto back = read_roc(path);
    REQUIRE(back.size() == points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        CHECK(back[i].parameter_label == points[i].parameter_label);
        CHECK(back[i].fpr == points[i].fpr);  // shortest-form doubles are exact
        CHECK(back[i].tpr == points[i].tpr);
    }
}
