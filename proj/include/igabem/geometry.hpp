#ifndef IGABEM_GEOMETRY_HPP
#define IGABEM_GEOMETRY_HPP

#include <cmath>

namespace igabem {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  // z-component of the cross product with o
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

// Symmetric or general 2x2 tensor with explicit components.
struct Mat2 {
  double xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;

  Mat2 operator+(const Mat2& o) const { return {xx + o.xx, xy + o.xy, yx + o.yx, yy + o.yy}; }
  Mat2 operator-(const Mat2& o) const { return {xx - o.xx, xy - o.xy, yx - o.yx, yy - o.yy}; }
  Mat2 operator*(double s) const { return {xx * s, xy * s, yx * s, yy * s}; }
  Vec2 apply(Vec2 v) const { return {xx * v.x + xy * v.y, yx * v.x + yy * v.y}; }
  double trace() const { return xx + yy; }
  Mat2 transpose() const { return {xx, yx, xy, yy}; }
};

inline Mat2 rotation(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c, -s, s, c};
}

// Q * M * Q^T, the push-forward of a rank-2 tensor under rotation Q.
inline Mat2 rotate_tensor(const Mat2& q, const Mat2& m) {
  const Mat2 qm{q.xx * m.xx + q.xy * m.yx, q.xx * m.xy + q.xy * m.yy,
                q.yx * m.xx + q.yy * m.yx, q.yx * m.xy + q.yy * m.yy};
  return {qm.xx * q.xx + qm.xy * q.xy, qm.xx * q.yx + qm.xy * q.yy,
          qm.yx * q.xx + qm.yy * q.xy, qm.yx * q.yx + qm.yy * q.yy};
}

}  // namespace igabem

#endif
