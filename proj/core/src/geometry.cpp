#include "ssmon/geometry.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <Eigen/SVD>
#include <array>
#include <cmath>
#include <sstream>

#include "ssmon/errors.hpp"

namespace ssmon {

AffineTransform AffineTransform::rigid(const Eigen::Vector3d& rotation_vector,
                                       const Eigen::Vector3d& translation) {
  AffineTransform t;
  const double angle = rotation_vector.norm();
  if (angle > 0.0) {
    t.linear = Eigen::AngleAxisd(angle, rotation_vector / angle).toRotationMatrix();
  }
  t.translation = translation;
  return t;
}

AffineTransform AffineTransform::compose(const AffineTransform& other) const {
  AffineTransform t;
  t.linear = linear * other.linear;
  t.translation = linear * other.translation + translation;
  return t;
}

AffineTransform AffineTransform::inverse() const {
  validate();
  AffineTransform t;
  t.linear = linear.inverse();
  t.translation = -(t.linear * translation);
  return t;
}

bool AffineTransform::is_rigid(double tol) const {
  const Eigen::Matrix3d gram = linear.transpose() * linear;
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(linear.determinant() - 1.0) <= tol;
}

void AffineTransform::validate() const {
  if (!linear.allFinite() || !translation.allFinite())
    throw Error("transform has non-finite entries");
  if (std::abs(linear.determinant()) <= 1e-12)
    throw Error("transform linear part is singular");
}

namespace {

Eigen::Vector3d centroid_of(const std::vector<Correspondence>& c,
                            bool source) {
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (const auto& p : c) sum += source ? p.source : p.target;
  return sum / static_cast<double>(c.size());
}

AffineTransform fit_rigid(const std::vector<Correspondence>& c) {
  if (c.size() < 3)
    throw DegenerateCorrespondences(
        "rigid fit needs at least 3 correspondences, got " +
        std::to_string(c.size()));

  const Eigen::Vector3d cs = centroid_of(c, true);
  const Eigen::Vector3d ct = centroid_of(c, false);

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : c)
    cov += (p.target - ct) * (p.source - cs).transpose();
  cov /= static_cast<double>(c.size());

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sigma = svd.singularValues();

  // Two near-zero singular values mean the points are collinear and the
  // rotation about that axis is unconstrained.
  const double scale = std::max(sigma(0), 1e-30);
  if (sigma(1) / scale < 1e-9)
    throw DegenerateCorrespondences(
        "rigid fit is underdetermined (collinear points)");

  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0)
    d(2, 2) = -1.0;

  AffineTransform t;
  t.linear = svd.matrixU() * d * svd.matrixV().transpose();
  t.translation = ct - t.linear * cs;
  return t;
}

AffineTransform fit_affine(const std::vector<Correspondence>& c) {
  if (c.size() < 4)
    throw DegenerateCorrespondences(
        "affine fit needs at least 4 correspondences, got " +
        std::to_string(c.size()));

  // Solve for the 3x4 matrix [A | b] minimizing ||A s + b - t||^2 via the
  // normal equations on homogeneous sources.
  Eigen::Matrix4d ata = Eigen::Matrix4d::Zero();
  Eigen::Matrix<double, 4, 3> atb = Eigen::Matrix<double, 4, 3>::Zero();
  for (const auto& p : c) {
    Eigen::Vector4d s(p.source.x(), p.source.y(), p.source.z(), 1.0);
    ata += s * s.transpose();
    atb += s * p.target.transpose();
  }

  Eigen::FullPivLU<Eigen::Matrix4d> lu(ata);
  lu.setThreshold(1e-9);
  if (lu.rank() < 4)
    throw DegenerateCorrespondences(
        "affine fit is underdetermined (coplanar points)");

  const Eigen::Matrix<double, 4, 3> x = lu.solve(atb);
  AffineTransform t;
  t.linear = x.topRows<3>().transpose();
  t.translation = x.row(3).transpose();
  return t;
}

}  // namespace

AffineTransform fit_transform(const std::vector<Correspondence>& correspondences,
                              FitMode mode) {
  for (const auto& p : correspondences)
    if (!p.source.allFinite() || !p.target.allFinite())
      throw Error("correspondence has non-finite coordinates");
  return mode == FitMode::Rigid ? fit_rigid(correspondences)
                                : fit_affine(correspondences);
}

double fit_residual_rms(const AffineTransform& t,
                        const std::vector<Correspondence>& correspondences) {
  if (correspondences.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& p : correspondences)
    sum += (t.apply(p.source) - p.target).squaredNorm();
  return std::sqrt(sum / static_cast<double>(correspondences.size()));
}

double fit_residual_max(const AffineTransform& t,
                        const std::vector<Correspondence>& correspondences) {
  double worst = 0.0;
  for (const auto& p : correspondences)
    worst = std::max(worst, (t.apply(p.source) - p.target).norm());
  return worst;
}

std::vector<Correspondence> parse_correspondences(const std::string& text) {
  std::vector<Correspondence> out;
  std::istringstream stream(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    std::array<double, 6> v{};
    std::size_t pos = 0;
    for (int i = 0; i < 6; ++i) {
      const auto end = line.find(',', pos);
      const std::string field =
          line.substr(pos, end == std::string::npos ? std::string::npos
                                                    : end - pos);
      try {
        std::size_t used = 0;
        v[static_cast<std::size_t>(i)] = std::stod(field, &used);
        while (used < field.size() &&
               (field[used] == ' ' || field[used] == '\t' || field[used] == '\r'))
          ++used;
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw ParseError(line_no, "expected 6 numeric fields");
      }
      if (i < 5) {
        if (end == std::string::npos)
          throw ParseError(line_no, "expected 6 numeric fields");
        pos = end + 1;
      } else if (end != std::string::npos) {
        throw ParseError(line_no, "expected 6 numeric fields");
      }
    }
    if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || !std::isfinite(v[2]) ||
        !std::isfinite(v[3]) || !std::isfinite(v[4]) || !std::isfinite(v[5]))
      throw ParseError(line_no, "non-finite coordinate");
    out.push_back({{v[0], v[1], v[2]}, {v[3], v[4], v[5]}});
  }
  return out;
}

DistanceMatrix pairwise_distances(const KeypointFrame& a,
                                  const KeypointFrame& b) {
  DistanceMatrix m;
  m.row_names = a.names();
  m.col_names = b.names();
  const auto rows = static_cast<Eigen::Index>(m.row_names.size());
  const auto cols = static_cast<Eigen::Index>(m.col_names.size());
  m.distance.setZero(rows, cols);
  m.present.setZero(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Keypoint* ka = a.find(m.row_names[static_cast<std::size_t>(i)]);
    if (!ka) continue;
    for (Eigen::Index j = 0; j < cols; ++j) {
      const Keypoint* kb = b.find(m.col_names[static_cast<std::size_t>(j)]);
      if (!kb) continue;
      m.distance(i, j) = (ka->position - kb->position).norm();
      m.present(i, j) = 1;
    }
  }
  return m;
}

}  // namespace ssmon
