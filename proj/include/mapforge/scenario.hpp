#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mapforge/geometry.hpp"
#include "mapforge/vector_map.hpp"

namespace mapforge::scenario {

using geometry::CameraRig;
using geometry::Intrinsics;
using geometry::Polyline2D;
using geometry::Pose;
using geometry::Vector2d;
using geometry::Vector3d;

// ---------------------------------------------------------------------------

/// Parameters of the synthetic world. Geometry is fully determined by the
/// fields; the seed only feeds downstream noise streams.
struct WorldSpec {
    std::uint64_t seed = 1;
    double road_length = 300.0;           // m
    int lane_count = 3;
    double lane_width = 3.5;              // m
    std::vector<std::pair<double, double>> curvature_profile = {
        {0.0, 0.0}, {100.0, 0.004}, {200.0, -0.004}, {300.0, 0.0}}; // (s, 1/m)
    double elevation_amplitude = 1.0;     // m
    double elevation_wavelength = 140.0;  // m
    int ped_crossing_count = 3;
    int frame_count = 200;

    void validate() const;
};

struct FramePose {
    int frame_id = 0;
    double timestamp = 0.0; // s
    Pose T_world_body;      // body: x forward, y left, z up, origin on the road
};

using Trajectory = std::vector<FramePose>;

/// Arc-length parameterized road centerline, densely sampled.
struct Centerline {
    double step = 0.0;
    std::vector<Vector2d> xy;
    std::vector<double> heading; // rad
    double length = 0.0;

    Vector2d position(double s) const;
    double heading_at(double s) const;
    Vector2d left_normal(double s) const;
    /// Arc length of the nearest centerline point to (x, y).
    double project(const Vector2d& p) const;
};

struct GroundTruthWorld {
    WorldSpec spec;
    VectorMap map;
    Centerline centerline;
    Trajectory trajectory;

    /// Analytic road elevation: amplitude * sin(2*pi*s/wavelength) with s the
    /// arc length of the nearest centerline point.
    double elevation_at(const Vector2d& xy) const;
    double elevation_at_s(double s) const;

    const FramePose& frame(int frame_id) const;
};

// ---------------------------------------------------------------------------

struct NoiseSpec {
    double gnss_sigma_xy = 0.5;    // m
    double gnss_sigma_z = 1.0;     // m
    double odom_sigma_trans = 0.02; // m per frame
    double odom_sigma_rot = 0.002;  // rad per frame
    double pixel_sigma = 0.5;      // px
    double track_dropout = 0.1;    // probability

    void validate() const;
};

struct GnssFix {
    int frame_id = 0;
    double timestamp = 0.0;
    Vector3d position{0, 0, 0};
    double sigma_xy = 0.0;
    double sigma_z = 0.0;
};

struct OdometryDelta {
    int from_frame = 0;
    int to_frame = 0;  // always from_frame + 1
    Pose delta;        // T_from_to in the body frame
    double sigma_trans = 0.0;
    double sigma_rot = 0.0;
};

struct SensorLog {
    std::vector<GnssFix> gnss;
    std::vector<OdometryDelta> relative_odometry;
};

struct TrackObservation {
    int frame_id = 0;
    std::string camera_id;
    Vector2d pixel{0, 0};
};

struct FeatureTrack {
    int id = 0;
    Vector3d gt_point{0, 0, 0}; // retained for oracles only
    SemClass cls = SemClass::road;
    std::vector<TrackObservation> observations;
};

struct FeatureTrackSet {
    std::vector<FeatureTrack> tracks;
};

struct ObservedInstance {
    ElementClass cls = ElementClass::divider;
    Polyline2D polyline; // image space
};

// ---------------------------------------------------------------------------

GroundTruthWorld generate_world(const WorldSpec& spec);

SensorLog simulate_sensors(const GroundTruthWorld& world, const NoiseSpec& noise,
                           std::uint64_t seed);

inline constexpr double kDefaultObservationRange = 25.0; // m

FeatureTrackSet generate_tracks(const GroundTruthWorld& world, const CameraRig& rig,
                                const NoiseSpec& noise, double density, std::uint64_t seed,
                                double max_observation_range = kDefaultObservationRange);

/// The segmentation-oracle substitute: image-space polylines a perfect 2D
/// instance network would produce for the given frame and camera.
std::vector<ObservedInstance> render_observed_instances(const VectorMap& map,
                                                        const Trajectory& trajectory,
                                                        int frame_id,
                                                        const std::string& camera_id,
                                                        const CameraRig& rig);

/// nuScenes-like default rig: 6 cameras at 60 degree spacing, 1600x900,
/// 70 degree horizontal FoV, mounted 1.6 m above the body origin with a
/// slight downward pitch.
CameraRig default_rig();

/// Splitmix64 stream derivation so that per-frame / per-track substreams are
/// independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace mapforge::scenario
