#include "ssmon/body_model.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ssmon/errors.hpp"

namespace ssmon {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double segment_axis_distance(const Point3& p, double length) {
  const double z = std::clamp(p.z(), 0.0, length);
  return std::sqrt(p.x() * p.x() + p.y() * p.y() +
                   (p.z() - z) * (p.z() - z));
}

Eigen::Vector3d any_orthogonal(const Eigen::Vector3d& z) {
  const Eigen::Vector3d ref = std::abs(z.x()) < 0.9
                                  ? Eigen::Vector3d::UnitX()
                                  : Eigen::Vector3d::UnitY();
  return (ref - ref.dot(z) * z).normalized();
}

struct LocalFrame {
  Point3 origin = Point3::Zero();
  Eigen::Vector3d x = Eigen::Vector3d::UnitX();
  Eigen::Vector3d y = Eigen::Vector3d::UnitY();
  Eigen::Vector3d z = Eigen::Vector3d::UnitZ();

  Point3 to_world(double lx, double ly, double lz) const {
    return origin + lx * x + ly * y + lz * z;
  }
};

// Azimuth reference from the first keypoint (name order) with a component
// off the given axis, so sample placement rotates with the model and the
// compensation coefficients stay rigid-invariant. When every keypoint lies
// on the axis the choice cannot affect any distance.
Eigen::Vector3d azimuth_reference(const std::map<std::string, Point3>& keypoints,
                                  const Point3& origin,
                                  const Eigen::Vector3d& z) {
  for (const auto& [name, p] : keypoints) {
    const Eigen::Vector3d v = p - origin;
    const Eigen::Vector3d perp = v - v.dot(z) * z;
    if (perp.norm() > 1e-9 * (1.0 + v.norm())) return perp.normalized();
  }
  return any_orthogonal(z);
}

LocalFrame capsule_frame(const Capsule& c,
                         const std::map<std::string, Point3>& keypoints) {
  LocalFrame f;
  f.origin = c.a;
  f.z = (c.b - c.a).normalized();
  f.x = azimuth_reference(keypoints, f.origin, f.z);
  f.y = f.z.cross(f.x);
  return f;
}

LocalFrame sphere_frame(const Sphere& s,
                        const std::map<std::string, Point3>& keypoints) {
  LocalFrame f;
  f.origin = s.center;
  f.z = Eigen::Vector3d::UnitZ();
  for (const auto& [name, p] : keypoints) {
    const Eigen::Vector3d v = p - s.center;
    if (v.norm() > 1e-9) {
      f.z = v.normalized();
      break;
    }
  }
  f.x = azimuth_reference(keypoints, f.origin, f.z);
  f.y = f.z.cross(f.x);
  return f;
}

// Interior grid anchored at the local bounding-box corner so halving the
// step keeps every existing sample (coefficients never regress under
// refinement by more than the surface-net spacing).
template <typename Inside>
void emit_volume_grid(const LocalFrame& f, const Eigen::Vector3d& lo,
                      const Eigen::Vector3d& hi, double step, Inside inside,
                      std::vector<Point3>& out) {
  for (int axis = 0; axis < 3; ++axis)
    if (hi[axis] < lo[axis]) return;
  const auto count = [&](int axis) {
    return static_cast<int>(std::floor((hi[axis] - lo[axis]) / step + 1e-12)) + 1;
  };
  const int nx = count(0), ny = count(1), nz = count(2);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k < nz; ++k) {
        const Eigen::Vector3d p(lo.x() + i * step, lo.y() + j * step,
                                lo.z() + k * step);
        if (inside(p)) out.push_back(f.to_world(p.x(), p.y(), p.z()));
      }
}

void emit_cap(const LocalFrame& f, double z0, double direction, double radius,
              double spacing, std::vector<Point3>& out) {
  const int n_lat = std::max(
      2, static_cast<int>(std::ceil(0.5 * std::numbers::pi * radius / spacing)));
  for (int k = 0; k <= n_lat; ++k) {
    const double phi = 0.5 * std::numbers::pi * k / n_lat;
    const double ring_r = radius * std::cos(phi);
    const double ring_z = z0 + direction * radius * std::sin(phi);
    const int n_az =
        std::max(ring_r > 0.0 ? 6 : 1,
                 static_cast<int>(std::ceil(kTwoPi * ring_r / spacing)));
    for (int j = 0; j < n_az; ++j) {
      const double theta = kTwoPi * j / n_az;
      out.push_back(f.to_world(ring_r * std::cos(theta),
                               ring_r * std::sin(theta), ring_z));
    }
  }
}

void sample_capsule(const Capsule& c,
                    const std::map<std::string, Point3>& keypoints, double step,
                    std::vector<Point3>& out) {
  const LocalFrame f = capsule_frame(c, keypoints);
  const double length = (c.b - c.a).norm();
  const double r = c.radius;

  emit_volume_grid(
      f, {-r, -r, -r}, {r, r, length + r}, step,
      [&](const Eigen::Vector3d& p) {
        return segment_axis_distance(p, length) <= r + 1e-12;
      },
      out);

  const double spacing = step / 2.0;
  const int n_axial = std::max(2, static_cast<int>(std::ceil(length / spacing)) + 1);
  const int n_az = std::max(r > 0.0 ? 6 : 1,
                            static_cast<int>(std::ceil(kTwoPi * r / spacing)));
  for (int i = 0; i < n_axial; ++i) {
    const double z = length * i / (n_axial - 1);
    for (int j = 0; j < n_az; ++j) {
      const double theta = kTwoPi * j / n_az;
      out.push_back(f.to_world(r * std::cos(theta), r * std::sin(theta), z));
    }
  }
  emit_cap(f, 0.0, -1.0, r, spacing, out);
  emit_cap(f, length, 1.0, r, spacing, out);
}

void sample_sphere(const Sphere& s,
                   const std::map<std::string, Point3>& keypoints, double step,
                   std::vector<Point3>& out) {
  const LocalFrame f = sphere_frame(s, keypoints);
  const double r = s.radius;

  emit_volume_grid(
      f, {-r, -r, -r}, {r, r, r}, step,
      [&](const Eigen::Vector3d& p) { return p.norm() <= r + 1e-12; }, out);

  if (r == 0.0) {
    out.push_back(s.center);
    return;
  }
  // Fibonacci net with point spacing about step/2.
  const double spacing = step / 2.0;
  const int n = std::max(
      8, static_cast<int>(std::ceil(4.0 * std::numbers::pi * r * r /
                                    (spacing * spacing))));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double zc = 1.0 - 2.0 * (i + 0.5) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - zc * zc));
    const double theta = golden * i;
    out.push_back(f.to_world(r * rho * std::cos(theta),
                             r * rho * std::sin(theta), r * zc));
  }
}

using KeypointIter = std::map<std::string, Point3>::const_iterator;

KeypointIter nearest_keypoint(const Point3& p,
                              const std::map<std::string, Point3>& keypoints) {
  if (keypoints.empty()) throw EmptyModel("model has no keypoints");
  auto best = keypoints.begin();
  double best_sq = (p - best->second).squaredNorm();
  for (auto it = std::next(keypoints.begin()); it != keypoints.end(); ++it) {
    const double sq = (p - it->second).squaredNorm();
    if (sq < best_sq) {  // strict: ties keep the lexicographically first name
      best = it;
      best_sq = sq;
    }
  }
  return best;
}

}  // namespace

void BodyModel::validate() const {
  if (keypoints.empty()) throw EmptyModel("model has no keypoints");
  for (const auto& [name, p] : keypoints)
    if (!p.allFinite())
      throw Error("keypoint '" + name + "' has non-finite coordinates");
  for (const auto& segment : segments) {
    if (const auto* c = std::get_if<Capsule>(&segment.shape)) {
      if (!c->a.allFinite() || !c->b.allFinite() || !std::isfinite(c->radius))
        throw Error("segment '" + segment.name + "' has non-finite geometry");
      if (c->radius < 0.0)
        throw Error("segment '" + segment.name + "' has negative radius");
      if ((c->b - c->a).norm() == 0.0)
        throw Error("segment '" + segment.name +
                    "' capsule endpoints coincide");
    } else {
      const auto& s = std::get<Sphere>(segment.shape);
      if (!s.center.allFinite() || !std::isfinite(s.radius))
        throw Error("segment '" + segment.name + "' has non-finite geometry");
      if (s.radius < 0.0)
        throw Error("segment '" + segment.name + "' has negative radius");
    }
  }
}

CompensationTable::CompensationTable(std::map<std::string, Meters> values,
                                     double sampling_step)
    : values_(std::move(values)), sampling_step_(sampling_step) {}

const Meters* CompensationTable::find(const std::string& keypoint) const {
  for (const auto& candidate : keypoint_lookup_candidates(keypoint)) {
    const auto it = values_.find(candidate);
    if (it != values_.end()) return &it->second;
  }
  return nullptr;
}

Meters CompensationTable::at(const std::string& keypoint) const {
  const Meters* found = find(keypoint);
  if (!found) throw UnknownKeypoint(keypoint, "compensation table");
  return *found;
}

void CompensationTable::set(const std::string& keypoint, Meters coefficient) {
  values_[keypoint] = coefficient;
}

std::string CompensationTable::to_csv() const {
  std::ostringstream out;
  out << "keypoint,coefficient_m\n";
  for (const auto& [name, coefficient] : values_)
    out << name << ',' << coefficient.str() << '\n';
  return out.str();
}

std::string assign_nearest(const Point3& p,
                           const std::map<std::string, Point3>& keypoints) {
  return nearest_keypoint(p, keypoints)->first;
}

CompensationTable compute_compensation(const BodyModel& model,
                                       double sampling_step) {
  model.validate();
  if (sampling_step <= 0.0) throw Error("sampling step must be positive");

  std::map<std::string, double> best;
  for (const auto& [name, p] : model.keypoints) best[name] = 0.0;

  std::vector<Point3> samples;
  for (const auto& segment : model.segments) {
    samples.clear();
    if (const auto* c = std::get_if<Capsule>(&segment.shape))
      sample_capsule(*c, model.keypoints, sampling_step, samples);
    else
      sample_sphere(std::get<Sphere>(segment.shape), model.keypoints,
                    sampling_step, samples);
    for (const auto& sample : samples) {
      const auto it = nearest_keypoint(sample, model.keypoints);
      double& coefficient = best[it->first];
      coefficient =
          std::max(coefficient, (sample - it->second).norm());
    }
  }

  std::map<std::string, Meters> values;
  for (const auto& [name, coefficient] : best)
    values[name] = Meters::from_value(coefficient);
  return CompensationTable(std::move(values), sampling_step);
}

CoverageReport verify_coverage(const BodyModel& model,
                               const CompensationTable& table,
                               std::size_t trials, std::mt19937_64& rng) {
  CoverageReport report;
  if (model.segments.empty() || trials == 0) return report;

  std::vector<double> weight(model.segments.size());
  double total = 0.0;
  for (std::size_t i = 0; i < model.segments.size(); ++i) {
    const auto& segment = model.segments[i];
    if (const auto* c = std::get_if<Capsule>(&segment.shape)) {
      const double length = (c->b - c->a).norm();
      weight[i] = std::numbers::pi * c->radius * c->radius * length +
                  4.0 / 3.0 * std::numbers::pi * std::pow(c->radius, 3);
    } else {
      const double r = std::get<Sphere>(segment.shape).radius;
      weight[i] = 4.0 / 3.0 * std::numbers::pi * std::pow(r, 3);
    }
    total += weight[i];
  }
  if (total == 0.0) {
    // Degenerate model: fall back to axis length, then to bare points.
    for (std::size_t i = 0; i < model.segments.size(); ++i) {
      if (const auto* c = std::get_if<Capsule>(&model.segments[i].shape))
        weight[i] = (c->b - c->a).norm();
      total += weight[i];
    }
    if (total == 0.0) std::fill(weight.begin(), weight.end(), 1.0);
  }

  std::discrete_distribution<std::size_t> pick(weight.begin(), weight.end());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const auto unit_direction = [&] {
    Eigen::Vector3d v;
    do {
      v = {gauss(rng), gauss(rng), gauss(rng)};
    } while (v.norm() < 1e-12);
    return Eigen::Vector3d(v.normalized());
  };
  const auto ball_point = [&](double radius) {
    return Eigen::Vector3d(unit_direction() * radius * std::cbrt(unit(rng)));
  };

  const double allowed_slack = table.sampling_step();
  for (std::size_t t = 0; t < trials; ++t) {
    const auto& segment = model.segments[pick(rng)];
    Point3 p;
    if (const auto* c = std::get_if<Capsule>(&segment.shape)) {
      const Eigen::Vector3d axis = c->b - c->a;
      const double length = axis.norm();
      const double r = c->radius;
      const double v_cyl = std::numbers::pi * r * r * length;
      const double v_caps = 4.0 / 3.0 * std::numbers::pi * std::pow(r, 3);
      if (v_cyl + v_caps == 0.0) {
        p = c->a + unit(rng) * axis;
      } else if (unit(rng) * (v_cyl + v_caps) < v_cyl) {
        const Eigen::Vector3d z = axis / length;
        const Eigen::Vector3d x = any_orthogonal(z);
        const Eigen::Vector3d y = z.cross(x);
        const double rho = r * std::sqrt(unit(rng));
        const double theta = kTwoPi * unit(rng);
        p = c->a + unit(rng) * axis + rho * std::cos(theta) * x +
            rho * std::sin(theta) * y;
      } else {
        const Eigen::Vector3d q = ball_point(r);
        const Eigen::Vector3d z = axis / length;
        p = (q.dot(z) >= 0.0 ? c->b : c->a) + q;
      }
    } else {
      const auto& s = std::get<Sphere>(segment.shape);
      p = s.center + ball_point(s.radius);
    }

    const auto it = nearest_keypoint(p, model.keypoints);
    const double d = (p - it->second).norm();
    const double allowed = table.at(it->first).value() + allowed_slack;
    ++report.trials;
    if (d > allowed) {
      ++report.violations;
      report.max_excess = std::max(report.max_excess, d - allowed);
    }
  }
  return report;
}

}  // namespace ssmon
