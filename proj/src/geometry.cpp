#include "mapforge/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace mapforge::geometry {

Matrix3d skew(const Vector3d& v) {
    Matrix3d m;
    m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
    return m;
}

Quaterniond so3_exp(const Vector3d& omega) {
    const double theta = omega.norm();
    if (theta < 1e-12) {
        Quaterniond q(1.0, 0.5 * omega.x(), 0.5 * omega.y(), 0.5 * omega.z());
        q.normalize();
        return q;
    }
    const double half = 0.5 * theta;
    const Vector3d axis = omega / theta;
    const double s = std::sin(half);
    return Quaterniond(std::cos(half), s * axis.x(), s * axis.y(), s * axis.z());
}

Vector3d so3_log(const Quaterniond& q_in) {
    Quaterniond q = q_in.normalized();
    if (q.w() < 0.0) q.coeffs() *= -1.0; // shortest rotation
    const Vector3d v(q.x(), q.y(), q.z());
    const double sin_half = v.norm();
    if (sin_half < 1e-12) return 2.0 * v;
    const double angle = 2.0 * std::atan2(sin_half, q.w());
    return v * (angle / sin_half);
}

Matrix3d so3_right_jacobian_inverse(const Vector3d& phi) {
    const double theta = phi.norm();
    const Matrix3d S = skew(phi);
    if (theta < 1e-8) {
        return Matrix3d::Identity() + 0.5 * S + (1.0 / 12.0) * S * S;
    }
    const double k = 1.0 / (theta * theta) -
                     (1.0 + std::cos(theta)) / (2.0 * theta * std::sin(theta));
    return Matrix3d::Identity() + 0.5 * S + k * S * S;
}

Pose compose(const Pose& a, const Pose& b) { return a.compose(b); }
Pose inverse(const Pose& p) { return p.inverse(); }

double rotation_angle_between(const Pose& a, const Pose& b) {
    return so3_log((a.q.conjugate() * b.q).normalized()).norm();
}

// ---------------------------------------------------------------------------

void Polyline2D::validate() const {
    if (points.size() < 2) throw InvalidSpec("polyline needs at least 2 points");
    for (size_t i = 1; i < points.size(); ++i)
        if ((points[i] - points[i - 1]).norm() <= 1e-9)
            throw InvalidSpec("polyline has duplicate consecutive points");
}

void Polyline3D::validate() const {
    if (points.size() < 2) throw InvalidSpec("polyline needs at least 2 points");
    for (size_t i = 1; i < points.size(); ++i)
        if ((points[i] - points[i - 1]).norm() <= 1e-9)
            throw InvalidSpec("polyline has duplicate consecutive points");
}

namespace {

template <typename Vec>
double length_impl(const std::vector<Vec>& pts, bool closed) {
    double len = 0.0;
    for (size_t i = 1; i < pts.size(); ++i) len += (pts[i] - pts[i - 1]).norm();
    if (closed && pts.size() > 2) len += (pts.front() - pts.back()).norm();
    return len;
}

template <typename Vec>
std::vector<Vec> resample_impl(const std::vector<Vec>& in, bool closed, double step) {
    std::vector<Vec> pts = in;
    if (closed && pts.size() > 2) pts.push_back(pts.front());
    std::vector<Vec> out;
    if (pts.empty()) return out;
    out.push_back(pts.front());
    double carried = 0.0;
    for (size_t i = 1; i < pts.size(); ++i) {
        const Vec a = pts[i - 1];
        const Vec b = pts[i];
        const double seg = (b - a).norm();
        if (seg <= 0.0) continue;
        double s = step - carried;
        while (s < seg) {
            out.push_back(a + (b - a) * (s / seg));
            s += step;
        }
        carried = seg - (s - step);
        if ((out.back() - b).norm() > 1e-12 && i + 1 == pts.size()) out.push_back(b);
    }
    if (out.size() < 2) out.push_back(pts.back());
    return out;
}

} // namespace

double polyline_length(const Polyline2D& line) { return length_impl(line.points, line.closed); }
double polyline_length(const Polyline3D& line) { return length_impl(line.points, line.closed); }

std::vector<Vector2d> resample_polyline(const Polyline2D& line, double step) {
    return resample_impl(line.points, line.closed, step);
}
std::vector<Vector3d> resample_polyline(const Polyline3D& line, double step) {
    return resample_impl(line.points, line.closed, step);
}

double point_segment_distance(const Vector2d& p, const Vector2d& a, const Vector2d& b) {
    const Vector2d ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 <= 0.0) return (p - a).norm();
    const double u = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + u * ab)).norm();
}

double point_polyline_distance(const Vector2d& p, const Polyline2D& line) {
    double best = std::numeric_limits<double>::infinity();
    const auto& pts = line.points;
    for (size_t i = 1; i < pts.size(); ++i)
        best = std::min(best, point_segment_distance(p, pts[i - 1], pts[i]));
    if (line.closed && pts.size() > 2)
        best = std::min(best, point_segment_distance(p, pts.back(), pts.front()));
    if (pts.size() == 1) best = (p - pts.front()).norm();
    return best;
}

namespace {

void dp_recurse(const std::vector<Vector2d>& pts, size_t lo, size_t hi, double eps,
                std::vector<bool>& keep) {
    if (hi <= lo + 1) return;
    double worst = -1.0;
    size_t worst_i = lo;
    for (size_t i = lo + 1; i < hi; ++i) {
        const double d = point_segment_distance(pts[i], pts[lo], pts[hi]);
        if (d > worst) {
            worst = d;
            worst_i = i;
        }
    }
    if (worst > eps) {
        keep[worst_i] = true;
        dp_recurse(pts, lo, worst_i, eps, keep);
        dp_recurse(pts, worst_i, hi, eps, keep);
    }
}

} // namespace

Polyline2D simplify_polyline(const Polyline2D& line, double eps) {
    if (eps <= 0.0) throw InvalidSpec("simplify tolerance must be positive");
    const auto& pts = line.points;
    if (pts.size() <= 2) return line;

    Polyline2D out;
    out.closed = line.closed;
    if (!line.closed) {
        std::vector<bool> keep(pts.size(), false);
        keep.front() = keep.back() = true;
        dp_recurse(pts, 0, pts.size() - 1, eps, keep);
        for (size_t i = 0; i < pts.size(); ++i)
            if (keep[i]) out.points.push_back(pts[i]);
    } else {
        // Anchor at the two mutually farthest-ish vertices: vertex 0 and the
        // vertex farthest from it, then simplify the two arcs independently.
        size_t far_i = 1;
        double far_d = 0.0;
        for (size_t i = 1; i < pts.size(); ++i) {
            const double d = (pts[i] - pts[0]).squaredNorm();
            if (d > far_d) {
                far_d = d;
                far_i = i;
            }
        }
        std::vector<bool> keep(pts.size(), false);
        keep[0] = keep[far_i] = true;
        dp_recurse(pts, 0, far_i, eps, keep);
        std::vector<Vector2d> arc(pts.begin() + far_i, pts.end());
        arc.push_back(pts[0]);
        std::vector<bool> keep2(arc.size(), false);
        keep2.front() = keep2.back() = true;
        dp_recurse(arc, 0, arc.size() - 1, eps, keep2);
        for (size_t i = 0; i <= far_i; ++i)
            if (keep[i]) out.points.push_back(pts[i]);
        for (size_t i = 1; i + 1 < arc.size(); ++i)
            if (keep2[i]) out.points.push_back(arc[i]);
    }
    if (out.points.size() < 2) out.points = {pts.front(), pts.back()};
    return out;
}

Polyline2D densify_polyline(const Polyline2D& line, double max_seg_len) {
    Polyline2D out;
    out.closed = line.closed;
    const auto& pts = line.points;
    const size_t n = pts.size();
    if (n == 0) return out;
    const size_t seg_count = line.closed ? n : n - 1;
    for (size_t i = 0; i < seg_count; ++i) {
        const Vector2d a = pts[i];
        const Vector2d b = pts[(i + 1) % n];
        out.points.push_back(a);
        const double seg = (b - a).norm();
        const int splits = static_cast<int>(std::ceil(seg / max_seg_len)) - 1;
        for (int k = 1; k <= splits; ++k)
            out.points.push_back(a + (b - a) * (double(k) / double(splits + 1)));
    }
    if (!line.closed) out.points.push_back(pts.back());
    return out;
}

// ---------------------------------------------------------------------------

std::optional<Vector2d> project(const Vector3d& point_world, const Pose& T_world_camera,
                                const Intrinsics& K, double z_near) {
    const Vector3d p_cam = T_world_camera.inverse() * point_world;
    if (p_cam.z() <= z_near) return std::nullopt;
    return Vector2d(K.fx * p_cam.x() / p_cam.z() + K.cx, K.fy * p_cam.y() / p_cam.z() + K.cy);
}

Matrix3d ground_homography(const Pose& T_world_camera, const Intrinsics& K, double plane_z) {
    if (!(T_world_camera.t.z() > plane_z))
        throw DegenerateView("camera center not strictly above the ground plane");
    const Matrix3d R_wc = T_world_camera.rotation();
    // Optical axis (+z of the camera) expressed in world coordinates; parallel
    // to the plane when its z component vanishes.
    if (std::abs(R_wc.col(2).z()) < 1e-6)
        throw DegenerateView("optical axis parallel to the ground plane");

    const Matrix3d R_cw = R_wc.transpose();
    const Vector3d t_cw = -(R_cw * T_world_camera.t);
    Matrix3d Km;
    Km << K.fx, 0, K.cx, 0, K.fy, K.cy, 0, 0, 1;
    Matrix3d plane_to_cam;
    plane_to_cam.col(0) = R_cw.col(0);
    plane_to_cam.col(1) = R_cw.col(1);
    plane_to_cam.col(2) = R_cw.col(2) * plane_z + t_cw;
    return Km * plane_to_cam;
}

namespace {

struct HalfPlane {
    // a*x + b*y + c >= 0
    double a, b, c;
    double eval(const Vector2d& p) const { return a * p.x() + b * p.y() + c; }
};

std::vector<Vector2d> clip_polygon(const std::vector<Vector2d>& poly, const HalfPlane& hp) {
    std::vector<Vector2d> out;
    const size_t n = poly.size();
    if (n == 0) return out;
    for (size_t i = 0; i < n; ++i) {
        const Vector2d& cur = poly[i];
        const Vector2d& nxt = poly[(i + 1) % n];
        const double dc = hp.eval(cur);
        const double dn = hp.eval(nxt);
        if (dc >= 0.0) out.push_back(cur);
        if ((dc >= 0.0) != (dn >= 0.0)) {
            const double u = dc / (dc - dn);
            out.push_back(cur + u * (nxt - cur));
        }
    }
    return out;
}

} // namespace

std::vector<Vector2d> ground_footprint(const CameraView& cam, double plane_z, double max_range,
                                       double z_near) {
    try {
        ground_homography(cam.T_world_camera, cam.intrinsics, plane_z);
    } catch (const DegenerateView&) {
        return {};
    }

    // Start from a regular polygon approximating the max_range disc around the
    // camera ground point, then cut by the linear in-image / in-front
    // conditions. All of them are affine in (x, y) on the plane.
    const Vector2d center(cam.T_world_camera.t.x(), cam.T_world_camera.t.y());
    constexpr int kDiscSides = 64;
    std::vector<Vector2d> poly;
    poly.reserve(kDiscSides);
    for (int i = 0; i < kDiscSides; ++i) {
        const double ang = 2.0 * M_PI * double(i) / double(kDiscSides);
        poly.push_back(center + max_range * Vector2d(std::cos(ang), std::sin(ang)));
    }

    const Matrix3d R_cw = cam.T_world_camera.rotation().transpose();
    const Vector3d t_cw = -(R_cw * cam.T_world_camera.t);
    // Camera coords of plane point (x, y, plane_z): affine in x and y.
    const Vector3d gx = R_cw.col(0);
    const Vector3d gy = R_cw.col(1);
    const Vector3d g0 = R_cw.col(2) * plane_z + t_cw;

    const auto& K = cam.intrinsics;
    std::vector<HalfPlane> conditions;
    // depth: Z >= z_near  ->  gz.x*x + gz.y*y + (g0.z - z_near) >= 0
    conditions.push_back({gx.z(), gy.z(), g0.z() - z_near});
    // u >= 0: fx*X + cx*Z >= 0
    conditions.push_back({K.fx * gx.x() + K.cx * gx.z(), K.fx * gy.x() + K.cx * gy.z(),
                          K.fx * g0.x() + K.cx * g0.z()});
    // u <= w: (w - cx)*Z - fx*X >= 0
    conditions.push_back({-K.fx * gx.x() + (K.width - K.cx) * gx.z(),
                          -K.fx * gy.x() + (K.width - K.cx) * gy.z(),
                          -K.fx * g0.x() + (K.width - K.cx) * g0.z()});
    // v >= 0: fy*Y + cy*Z >= 0
    conditions.push_back({K.fy * gx.y() + K.cy * gx.z(), K.fy * gy.y() + K.cy * gy.z(),
                          K.fy * g0.y() + K.cy * g0.z()});
    // v <= h: (h - cy)*Z - fy*Y >= 0
    conditions.push_back({-K.fy * gx.y() + (K.height - K.cy) * gx.z(),
                          -K.fy * gy.y() + (K.height - K.cy) * gy.z(),
                          -K.fy * g0.y() + (K.height - K.cy) * g0.z()});

    for (const auto& hp : conditions) {
        poly = clip_polygon(poly, hp);
        if (poly.empty()) return {};
    }
    return poly;
}

double convex_polygon_area(const std::vector<Vector2d>& poly) {
    if (poly.size() < 3) return 0.0;
    double acc = 0.0;
    for (size_t i = 0; i < poly.size(); ++i) {
        const Vector2d& a = poly[i];
        const Vector2d& b = poly[(i + 1) % poly.size()];
        acc += a.x() * b.y() - b.x() * a.y();
    }
    return 0.5 * std::abs(acc);
}

std::vector<Vector2d> convex_polygon_intersection(const std::vector<Vector2d>& a,
                                                  const std::vector<Vector2d>& b) {
    if (a.size() < 3 || b.size() < 3) return {};
    std::vector<Vector2d> poly = a;
    // b is convex and counter-clockwise: each edge defines a half-plane.
    for (size_t i = 0; i < b.size() && !poly.empty(); ++i) {
        const Vector2d& p = b[i];
        const Vector2d& q = b[(i + 1) % b.size()];
        const Vector2d e = q - p;
        HalfPlane hp{-e.y(), e.x(), e.y() * p.x() - e.x() * p.y()};
        poly = clip_polygon(poly, hp);
    }
    return poly;
}

namespace {

bool view_less(const CameraView& a, const CameraView& b) {
    const double ka[12] = {a.T_world_camera.t.x(), a.T_world_camera.t.y(), a.T_world_camera.t.z(),
                           a.T_world_camera.q.w(), a.T_world_camera.q.x(), a.T_world_camera.q.y(),
                           a.T_world_camera.q.z(), a.intrinsics.fx, a.intrinsics.fy,
                           a.intrinsics.cx, a.intrinsics.cy, a.intrinsics.width};
    const double kb[12] = {b.T_world_camera.t.x(), b.T_world_camera.t.y(), b.T_world_camera.t.z(),
                           b.T_world_camera.q.w(), b.T_world_camera.q.x(), b.T_world_camera.q.y(),
                           b.T_world_camera.q.z(), b.intrinsics.fx, b.intrinsics.fy,
                           b.intrinsics.cx, b.intrinsics.cy, b.intrinsics.width};
    for (int i = 0; i < 12; ++i) {
        if (ka[i] < kb[i]) return true;
        if (ka[i] > kb[i]) return false;
    }
    return false;
}

} // namespace

std::vector<Polyline2D> clip_project_polyline(const Polyline3D& line, const Pose& T_world_camera,
                                              const Intrinsics& K, double sample_step_m,
                                              double min_px_len, double z_near) {
    const std::vector<Vector3d> samples = resample_polyline(line, sample_step_m);
    std::vector<std::optional<Vector2d>> pixels(samples.size());
    const Pose T_cam_world = T_world_camera.inverse();
    for (size_t i = 0; i < samples.size(); ++i) {
        const Vector3d p_cam = T_cam_world * samples[i];
        if (p_cam.z() <= z_near) continue;
        const Vector2d px(K.fx * p_cam.x() / p_cam.z() + K.cx,
                          K.fy * p_cam.y() / p_cam.z() + K.cy);
        if (K.contains(px)) pixels[i] = px;
    }

    std::vector<Polyline2D> runs;
    Polyline2D cur;
    const auto flush = [&] {
        if (cur.points.size() >= 2 && polyline_length(cur) >= min_px_len)
            runs.push_back(cur);
        cur.points.clear();
    };
    for (const auto& px : pixels) {
        if (px.has_value()) {
            if (cur.points.empty() || (*px - cur.points.back()).norm() > 1e-9)
                cur.points.push_back(*px);
        } else {
            flush();
        }
    }

    // Closed polylines: resampling traverses the ring, so a visible run that
    // wraps past the start shows up as a visible head and tail. Stitch them.
    if (line.closed && !cur.points.empty() && !runs.empty() && pixels.front().has_value() &&
        pixels.back().has_value()) {
        Polyline2D& head = runs.front();
        // The last resampled point coincides with the first; drop the repeat.
        if ((cur.points.back() - head.points.front()).norm() < 1e-9) cur.points.pop_back();
        cur.points.insert(cur.points.end(), head.points.begin(), head.points.end());
        head = cur;
        cur.points.clear();
        if (polyline_length(runs.front()) < min_px_len) runs.erase(runs.begin());
    }
    flush();
    return runs;
}

double frustum_ground_overlap(const CameraView& cam_a, const CameraView& cam_b, double plane_z,
                              double max_range) {
    // Canonical argument order makes the score exactly symmetric.
    const CameraView& first = view_less(cam_b, cam_a) ? cam_b : cam_a;
    const CameraView& second = view_less(cam_b, cam_a) ? cam_a : cam_b;

    const auto fa = ground_footprint(first, plane_z, max_range);
    const auto fb = ground_footprint(second, plane_z, max_range);
    if (fa.size() < 3 || fb.size() < 3) return 0.0;
    const double area_a = convex_polygon_area(fa);
    const double area_b = convex_polygon_area(fb);
    if (area_a <= 0.0 || area_b <= 0.0) return 0.0;
    const double inter = convex_polygon_area(convex_polygon_intersection(fa, fb));
    const double uni = area_a + area_b - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

} // namespace mapforge::geometry
