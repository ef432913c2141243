#include <doctest.h>

#include <random>

#include "mapforge/geometry.hpp"
#include "test_support.hpp"

TEST_SUITE_BEGIN("geometry");

using namespace mapforge;
using namespace mapforge::geometry;
using mapforge::testing::nominal_intrinsics;
using mapforge::testing::random_pose;
using mapforge::testing::random_vec3;

TEST_CASE("pose compose: identity and inverse") {
    std::mt19937_64 rng(7);
    const Pose T = random_pose(rng);

    const Pose left = Pose::identity() * T;
    CHECK(rotation_angle_between(left, T) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK((left.t - T.t).norm() < 1e-12);

    const Pose round = T * T.inverse();
    CHECK(so3_log(round.q).norm() < 1e-9);
    CHECK(round.t.norm() < 1e-9);
}

TEST_CASE("pose compose matches rotation-matrix oracle") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const Pose a = random_pose(rng);
        const Pose b = random_pose(rng);
        const Pose c = a * b;

        // Independent oracle: plain 3x3 matrix product and affine chain.
        const Eigen::Matrix3d Rc = a.rotation() * b.rotation();
        const Eigen::Vector3d tc = a.rotation() * b.t + a.t;
        CHECK((c.rotation() - Rc).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((c.t - tc).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(c.q.norm() - 1.0) < 1e-9);
    }
}

TEST_CASE("so3 exp/log roundtrip and right-jacobian-inverse sanity") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        // Principal branch: exp/log is the identity only for |w| <= pi.
        Eigen::Vector3d w = random_vec3(rng, trial % 2 ? 1.0 : 1e-7);
        if (w.norm() > 3.1) w *= 3.1 / w.norm();
        const Eigen::Vector3d back = so3_log(so3_exp(w));
        CHECK((back - w).norm() < 1e-9 * (1.0 + w.norm()));
    }
    // J_r^{-1}(0) = I
    CHECK((so3_right_jacobian_inverse(Eigen::Vector3d::Zero()) - Eigen::Matrix3d::Identity())
              .norm() < 1e-12);
}

TEST_CASE("project: canonical camera and direct formula") {
    Intrinsics K;
    K.fx = K.fy = 1.0;
    K.cx = K.cy = 0.0;
    K.width = K.height = 2.0;
    auto px = project({0, 0, 1}, Pose::identity(), K);
    REQUIRE(px.has_value());
    CHECK(px->norm() < 1e-15);

    Intrinsics K2;
    K2.fx = K2.fy = 100.0;
    K2.cx = 320.0;
    K2.cy = 240.0;
    K2.width = 640.0;
    K2.height = 480.0;
    auto px2 = project({1, 0, 2}, Pose::identity(), K2);
    REQUIRE(px2.has_value());
    CHECK(px2->x() == doctest::Approx(370.0).epsilon(1e-12));
    CHECK(px2->y() == doctest::Approx(240.0).epsilon(1e-12));

    CHECK(!project({0, 0, -1}, Pose::identity(), K2).has_value());
    CHECK(!project({0, 0, 0.05}, Pose::identity(), K2).has_value());
}

TEST_CASE("project/backproject roundtrip on random poses") {
    std::mt19937_64 rng(11);
    const Intrinsics K = nominal_intrinsics();
    std::uniform_real_distribution<double> upix_u(0.0, K.width);
    std::uniform_real_distribution<double> upix_v(0.0, K.height);
    std::uniform_real_distribution<double> udepth(0.5, 100.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const Pose T = random_pose(rng);
        const Eigen::Vector2d px(upix_u(rng), upix_v(rng));
        const double z = udepth(rng);
        const Eigen::Vector3d p_cam((px.x() - K.cx) / K.fx * z, (px.y() - K.cy) / K.fy * z, z);
        const Eigen::Vector3d p_world = T * p_cam;
        auto back = project(p_world, T, K);
        REQUIRE(back.has_value());
        CHECK((*back - px).norm() < 1e-9);
    }
}

namespace {

Pose nadir_camera(double height) {
    // Looking straight down: camera +z is world -z, camera +x is world +x.
    Eigen::Matrix3d R_wc;
    R_wc.col(0) = Eigen::Vector3d(1, 0, 0);
    R_wc.col(1) = Eigen::Vector3d(0, -1, 0);
    R_wc.col(2) = Eigen::Vector3d(0, 0, -1);
    return Pose(Eigen::Quaterniond(R_wc), Eigen::Vector3d(0, 0, height));
}

} // namespace

TEST_CASE("ground homography: nadir geometry") {
    Intrinsics K;
    K.fx = K.fy = 1.0;
    K.cx = K.cy = 0.0;
    K.width = K.height = 2.0;
    const Pose cam = nadir_camera(10.0);
    const Eigen::Matrix3d H = ground_homography(cam, K, 0.0);
    const Eigen::Vector3d h = H * Eigen::Vector3d(3.0, 4.0, 1.0);
    const Eigen::Vector2d px(h.x() / h.z(), h.y() / h.z());
    CHECK(std::abs(px.x()) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(std::abs(px.y()) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("ground homography agrees with project on random plane points") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    const Intrinsics K = nominal_intrinsics();
    const double plane_z = -0.5;

    int checked = 0;
    while (checked < 100) {
        // Camera above the plane with a generic attitude.
        Pose cam = random_pose(rng, 5.0);
        cam.t.z() = 3.0 + std::abs(cam.t.z());
        try {
            const Eigen::Matrix3d H = ground_homography(cam, K, plane_z);
            for (int i = 0; i < 20 && checked < 100; ++i) {
                const Eigen::Vector3d p(u(rng), u(rng), plane_z);
                auto px = project(p, cam, K);
                if (!px.has_value()) continue;
                const Eigen::Vector3d h = H * Eigen::Vector3d(p.x(), p.y(), 1.0);
                REQUIRE(std::abs(h.z()) > 1e-12);
                CHECK((Eigen::Vector2d(h.x() / h.z(), h.y() / h.z()) - *px).norm() < 1e-9);
                ++checked;
            }
        } catch (const DegenerateView&) {
            continue;
        }
    }
}

TEST_CASE("ground homography degenerate cases") {
    const Intrinsics K = nominal_intrinsics();
    // Horizon view: +z of camera along world +x (axis parallel to plane).
    Eigen::Matrix3d R_wc;
    R_wc.col(0) = Eigen::Vector3d(0, -1, 0);
    R_wc.col(1) = Eigen::Vector3d(0, 0, -1);
    R_wc.col(2) = Eigen::Vector3d(1, 0, 0);
    const Pose horizon(Eigen::Quaterniond(R_wc), Eigen::Vector3d(0, 0, 2.0));
    CHECK_THROWS_AS(ground_homography(horizon, K, 0.0), DegenerateView);

    // Camera below the plane.
    CHECK_THROWS_AS(ground_homography(nadir_camera(-1.0), K, 0.0), DegenerateView);
}

namespace {

// Forward-facing camera of a ground vehicle: +z camera = +x world (heading),
// pitched down slightly, mounted at the given height.
Pose forward_camera(const Eigen::Vector3d& position, double yaw, double pitch_down) {
    Eigen::Matrix3d R_wc;
    const Eigen::Vector3d heading(std::cos(yaw), std::sin(yaw), 0.0);
    const Eigen::Vector3d left(-std::sin(yaw), std::cos(yaw), 0.0);
    const Eigen::Vector3d axis =
        heading * std::cos(pitch_down) - Eigen::Vector3d(0, 0, 1) * std::sin(pitch_down);
    R_wc.col(2) = axis;
    R_wc.col(0) = -left;
    R_wc.col(1) = axis.cross(-left);
    return Pose(Eigen::Quaterniond(R_wc), position);
}

double monte_carlo_iou(const CameraView& a, const CameraView& b, double plane_z, double max_range,
                       uint64_t seed) {
    const auto member = [&](const CameraView& cam, const Eigen::Vector2d& p) {
        const Eigen::Vector2d ground(cam.T_world_camera.t.x(), cam.T_world_camera.t.y());
        if ((p - ground).norm() > max_range) return false;
        auto px = project(Eigen::Vector3d(p.x(), p.y(), plane_z), cam.T_world_camera,
                          cam.intrinsics);
        return px.has_value() && cam.intrinsics.contains(*px);
    };
    const Eigen::Vector2d ca(a.T_world_camera.t.x(), a.T_world_camera.t.y());
    const Eigen::Vector2d cb(b.T_world_camera.t.x(), b.T_world_camera.t.y());
    const Eigen::Vector2d lo = ca.cwiseMin(cb).array() - max_range;
    const Eigen::Vector2d hi = ca.cwiseMax(cb).array() + max_range;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(lo.x(), hi.x());
    std::uniform_real_distribution<double> uy(lo.y(), hi.y());
    long in_a = 0, in_b = 0, in_both = 0;
    for (int i = 0; i < 400000; ++i) {
        const Eigen::Vector2d p(ux(rng), uy(rng));
        const bool ma = member(a, p);
        const bool mb = member(b, p);
        in_a += ma;
        in_b += mb;
        in_both += ma && mb;
    }
    const long uni = in_a + in_b - in_both;
    return uni > 0 ? double(in_both) / double(uni) : 0.0;
}

} // namespace

TEST_CASE("frustum ground overlap: identical, disjoint, and Monte-Carlo oracle") {
    const Intrinsics K = nominal_intrinsics();
    const CameraView front{forward_camera({0, 0, 1.6}, 0.0, 0.05), K};
    CHECK(frustum_ground_overlap(front, front, 0.0, 30.0) == doctest::Approx(1.0).epsilon(1e-9));

    const CameraView away{forward_camera({500, 0, 1.6}, M_PI, 0.05), K};
    CHECK(frustum_ground_overlap(front, away, 0.0, 50.0) == 0.0);

    const CameraView ahead{forward_camera({10, 0, 1.6}, 0.0, 0.05), K};
    const double score = frustum_ground_overlap(front, ahead, 0.0, 30.0);
    const double mc = monte_carlo_iou(front, ahead, 0.0, 30.0, 99);
    CHECK(std::abs(score - mc) < 0.02);

    // A second, less symmetric pair against the same oracle.
    const CameraView side{forward_camera({6, 3, 1.6}, 0.8, 0.05), K};
    const double score2 = frustum_ground_overlap(front, side, 0.0, 25.0);
    const double mc2 = monte_carlo_iou(front, side, 0.0, 25.0, 123);
    CHECK(std::abs(score2 - mc2) < 0.02);
}

TEST_CASE("frustum ground overlap is symmetric") {
    std::mt19937_64 rng(31);
    const Intrinsics K = nominal_intrinsics();
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    std::uniform_real_distribution<double> yaw(0.0, 2.0 * M_PI);
    for (int i = 0; i < 50; ++i) {
        const CameraView a{forward_camera({u(rng), u(rng), 1.6}, yaw(rng), 0.05), K};
        const CameraView b{forward_camera({u(rng), u(rng), 1.6}, yaw(rng), 0.05), K};
        const double ab = frustum_ground_overlap(a, b, 0.0, 30.0);
        const double ba = frustum_ground_overlap(b, a, 0.0, 30.0);
        CHECK(std::abs(ab - ba) <= 1e-9);
    }
}

TEST_CASE("degenerate view scores zero overlap") {
    const Intrinsics K = nominal_intrinsics();
    const CameraView front{forward_camera({0, 0, 1.6}, 0.0, 0.05), K};
    // Exactly horizontal optical axis.
    const CameraView horizon{forward_camera({5, 0, 1.6}, 0.0, 0.0), K};
    CHECK(frustum_ground_overlap(front, horizon, 0.0, 30.0) == 0.0);
}

TEST_CASE("polyline validation and utilities") {
    Polyline2D p;
    p.points = {{0, 0}};
    CHECK_THROWS_AS(p.validate(), InvalidSpec);
    p.points = {{0, 0}, {0, 0}};
    CHECK_THROWS_AS(p.validate(), InvalidSpec);
    p.points = {{0, 0}, {1, 0}, {2, 0}, {2, 1}};
    CHECK_NOTHROW(p.validate());
    CHECK(polyline_length(p) == doctest::Approx(3.0));

    const auto samples = resample_polyline(p, 0.25);
    CHECK(samples.size() == 13);
    CHECK((samples.front() - Eigen::Vector2d(0, 0)).norm() < 1e-12);
    CHECK((samples.back() - Eigen::Vector2d(2, 1)).norm() < 1e-12);

    Polyline2D wiggly;
    for (int i = 0; i <= 100; ++i)
        wiggly.points.push_back({double(i), 0.001 * ((i % 2) ? 1.0 : -1.0)});
    const auto simple = simplify_polyline(wiggly, 0.01);
    CHECK(simple.points.size() == 2);

    Polyline2D seg;
    seg.points = {{0, 0}, {10, 0}};
    const auto dense = densify_polyline(seg, 1.0);
    CHECK(dense.points.size() == 11);
    CHECK(point_polyline_distance({5.0, 3.0}, seg) == doctest::Approx(3.0));
}

TEST_SUITE_END();
