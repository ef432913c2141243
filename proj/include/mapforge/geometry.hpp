#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mapforge/errors.hpp"

namespace mapforge::geometry {

using Eigen::Matrix3d;
using Eigen::Quaterniond;
using Eigen::Vector2d;
using Eigen::Vector3d;

// ---------------------------------------------------------------------------
// SO(3) helpers shared by the pose type and the solvers.

Matrix3d skew(const Vector3d& v);

/// Rotation vector -> unit quaternion.
Quaterniond so3_exp(const Vector3d& omega);

/// Unit quaternion -> rotation vector (angle in [0, pi]).
Vector3d so3_log(const Quaterniond& q);

/// Inverse of the right Jacobian of SO(3) at phi. Used for the analytic
/// derivatives of log-map residuals.
Matrix3d so3_right_jacobian_inverse(const Vector3d& phi);

// ---------------------------------------------------------------------------

/// Rigid transform. A Pose named T_a_b maps frame-b coordinates to frame a:
/// p_a = R * p_b + t. Quaternion is kept unit-norm after every operation.
struct Pose {
    Quaterniond q{1.0, 0.0, 0.0, 0.0}; // (w, x, y, z)
    Vector3d t{0.0, 0.0, 0.0};

    Pose() = default;
    Pose(const Quaterniond& q_in, const Vector3d& t_in) : q(q_in.normalized()), t(t_in) {}

    static Pose identity() { return Pose{}; }

    Matrix3d rotation() const { return q.toRotationMatrix(); }

    Vector3d apply(const Vector3d& p) const { return q * p + t; }
    Vector3d operator*(const Vector3d& p) const { return apply(p); }

    Pose compose(const Pose& other) const {
        return Pose((q * other.q).normalized(), q * other.t + t);
    }
    Pose operator*(const Pose& other) const { return compose(other); }

    Pose inverse() const {
        const Quaterniond qi = q.conjugate();
        return Pose(qi, -(qi * t));
    }

    /// Left-multiplicative increment: returns Pose(exp(omega), u) * this.
    Pose retract_left(const Vector3d& omega, const Vector3d& u) const {
        return Pose(so3_exp(omega), u).compose(*this);
    }
};

Pose compose(const Pose& a, const Pose& b);
Pose inverse(const Pose& p);

/// Rotation angle (rad) between two poses plus translation distance (m).
double rotation_angle_between(const Pose& a, const Pose& b);

// ---------------------------------------------------------------------------

/// Pinhole intrinsics, no distortion. Pixel origin top-left, +u right, +v down.
struct Intrinsics {
    double fx = 0, fy = 0;
    double cx = 0, cy = 0;
    double width = 0, height = 0;

    void validate() const {
        if (!(fx > 0) || !(fy > 0))
            throw InvalidSpec("intrinsics focal lengths must be positive");
        if (!(cx > 0 && cx < width) || !(cy > 0 && cy < height))
            throw InvalidSpec("intrinsics principal point must lie inside the image");
    }

    bool contains(const Vector2d& px) const {
        return px.x() >= 0.0 && px.x() <= width && px.y() >= 0.0 && px.y() <= height;
    }
};

struct Camera {
    Intrinsics intrinsics;
    Pose T_body_camera;
};

/// Fixed multi-camera rig. Extrinsics never change during a run.
struct CameraRig {
    std::map<std::string, Camera> cameras;

    void validate() const {
        if (cameras.empty()) throw InvalidSpec("camera rig must contain at least one camera");
        for (const auto& [id, cam] : cameras) cam.intrinsics.validate();
    }

    const Camera& at(const std::string& id) const {
        auto it = cameras.find(id);
        if (it == cameras.end()) throw UnknownCamera(id);
        return it->second;
    }
};

// ---------------------------------------------------------------------------

struct Polyline2D {
    std::vector<Vector2d> points;
    bool closed = false;

    void validate() const;
};

struct Polyline3D {
    std::vector<Vector3d> points;
    bool closed = false;

    void validate() const;
};

double polyline_length(const Polyline2D& line);
double polyline_length(const Polyline3D& line);

/// Samples along the polyline at fixed arc-length spacing, always including
/// both endpoints (and the closing vertex for closed lines).
std::vector<Vector2d> resample_polyline(const Polyline2D& line, double step);
std::vector<Vector3d> resample_polyline(const Polyline3D& line, double step);

double point_segment_distance(const Vector2d& p, const Vector2d& a, const Vector2d& b);

/// Distance from p to the nearest segment of the polyline.
double point_polyline_distance(const Vector2d& p, const Polyline2D& line);

/// Douglas-Peucker simplification with absolute tolerance eps. Closed lines
/// keep their closure; endpoints of open lines are always retained.
Polyline2D simplify_polyline(const Polyline2D& line, double eps);

/// Inserts vertices so that no segment is longer than max_seg_len.
Polyline2D densify_polyline(const Polyline2D& line, double max_seg_len);

// ---------------------------------------------------------------------------

inline constexpr double kDefaultZNear = 0.1;

/// Projects a world point through a camera. Returns std::nullopt when the
/// point is at or behind the near plane; pixels outside the image rectangle
/// are returned unclipped.
std::optional<Vector2d> project(const Vector3d& point_world, const Pose& T_world_camera,
                                const Intrinsics& K, double z_near = kDefaultZNear);

/// Homography mapping homogeneous ground coordinates (x, y, 1) on the plane
/// z = plane_z to homogeneous pixels. Throws DegenerateView when the camera
/// center is not strictly above the plane or the optical axis is parallel to
/// it (within 1e-6 rad).
Matrix3d ground_homography(const Pose& T_world_camera, const Intrinsics& K, double plane_z);

struct CameraView {
    Pose T_world_camera;
    Intrinsics intrinsics;
};

/// Convex ground footprint of a camera on the plane z = plane_z, clipped to
/// max_range from the camera's ground point. Empty when the view is
/// degenerate or sees no ground.
std::vector<Vector2d> ground_footprint(const CameraView& cam, double plane_z, double max_range,
                                       double z_near = kDefaultZNear);

/// IoU of the two cameras' ground footprints. Symmetric; 0 when either view
/// is degenerate.
double frustum_ground_overlap(const CameraView& cam_a, const CameraView& cam_b, double plane_z,
                              double max_range);

double convex_polygon_area(const std::vector<Vector2d>& poly);
std::vector<Vector2d> convex_polygon_intersection(const std::vector<Vector2d>& a,
                                                  const std::vector<Vector2d>& b);

/// Densely samples a 3D polyline (sample_step_m arc-length spacing), projects
/// the samples, and splits the result into maximal runs of in-front,
/// in-image samples. Runs shorter than min_px_len pixels are dropped. For
/// closed polylines a run spanning the wrap point is stitched back together.
std::vector<Polyline2D> clip_project_polyline(const Polyline3D& line, const Pose& T_world_camera,
                                              const Intrinsics& K, double sample_step_m,
                                              double min_px_len, double z_near = kDefaultZNear);

} // namespace mapforge::geometry
