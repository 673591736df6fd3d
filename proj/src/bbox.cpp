#include "tabcanon/bbox.hpp"

#include <algorithm>

namespace tabcanon {

BBox hull(const BBox& a, const BBox& b) noexcept {
  return {std::min(a.x_min, b.x_min), std::min(a.y_min, b.y_min), std::max(a.x_max, b.x_max),
          std::max(a.y_max, b.y_max)};
}

std::optional<BBox> hull(std::span<const BBox> boxes) noexcept {
  if (boxes.empty()) return std::nullopt;
  BBox out = boxes.front();
  for (const auto& b : boxes.subspan(1)) out = hull(out, b);
  return out;
}

std::optional<BBox> intersection(const BBox& a, const BBox& b) noexcept {
  BBox r{std::max(a.x_min, b.x_min), std::max(a.y_min, b.y_min), std::min(a.x_max, b.x_max),
         std::min(a.y_max, b.y_max)};
  if (!r.valid()) return std::nullopt;
  return r;
}

double overlap_area(const BBox& a, const BBox& b) noexcept {
  auto r = intersection(a, b);
  return r ? r->area() : 0.0;
}

double iou(const BBox& a, const BBox& b) noexcept {
  const double inter = overlap_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return a == b ? 1.0 : 0.0;
  return inter / uni;
}

double coverage(const BBox& child, const BBox& parent) noexcept {
  const double a = child.area();
  if (a <= 0.0) return 0.0;
  return overlap_area(child, parent) / a;
}

}  // namespace tabcanon
