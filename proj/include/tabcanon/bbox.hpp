#pragma once

#include <optional>
#include <span>

namespace tabcanon {

/// Axis-aligned rectangle in page coordinates (points), y grows downward.
struct BBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  bool valid() const noexcept { return x_min <= x_max && y_min <= y_max; }
  double width() const noexcept { return x_max - x_min; }
  double height() const noexcept { return y_max - y_min; }
  double area() const noexcept { return width() * height(); }

  BBox translated(double dx, double dy) const noexcept {
    return {x_min + dx, y_min + dy, x_max + dx, y_max + dy};
  }
  BBox scaled(double s) const noexcept { return {x_min * s, y_min * s, x_max * s, y_max * s}; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

/// Smallest box containing both.
BBox hull(const BBox& a, const BBox& b) noexcept;

/// Hull of a possibly empty range.
std::optional<BBox> hull(std::span<const BBox> boxes) noexcept;

/// Common region, or nullopt when the boxes are disjoint. Boxes that only
/// touch yield a zero-area box.
std::optional<BBox> intersection(const BBox& a, const BBox& b) noexcept;

double overlap_area(const BBox& a, const BBox& b) noexcept;

/// Intersection over union. Two identical zero-area boxes score 1.
double iou(const BBox& a, const BBox& b) noexcept;

/// Fraction of `child`'s area covered by `parent` (0 for a zero-area child).
double coverage(const BBox& child, const BBox& parent) noexcept;

}  // namespace tabcanon
