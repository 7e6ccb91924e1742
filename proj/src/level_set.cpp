#include "robineit/factorization.hpp"

#include <array>
#include <cmath>

namespace reit {

namespace {

Point lerp(Point a, Point b, double va, double vb, double c) {
  const double t = (c - va) / (vb - va);
  return a + (b - a) * t;
}

}  // namespace

std::vector<Segment> level_set(const IndicatorField& field, double c) {
  if (!(c > 0.0 && c < 1.0)) throw DomainError("level must lie in (0, 1)");
  const auto& g = field.grid;
  std::vector<Segment> out;
  for (int j = 0; j + 1 < g.ny(); ++j) {
    for (int i = 0; i + 1 < g.nx(); ++i) {
      if (!g.valid(i, j) || !g.valid(i + 1, j) || !g.valid(i + 1, j + 1) || !g.valid(i, j + 1))
        continue;
      // Corners counter-clockwise from the lower left.
      const std::array<Point, 4> p{g.point(i, j), g.point(i + 1, j), g.point(i + 1, j + 1),
                                   g.point(i, j + 1)};
      const std::array<double, 4> v{field.at(i, j), field.at(i + 1, j), field.at(i + 1, j + 1),
                                    field.at(i, j + 1)};
      std::array<Point, 4> cross;
      std::array<bool, 4> has{};
      int count = 0;
      for (int e = 0; e < 4; ++e) {
        const int a = e, b = (e + 1) % 4;
        if ((v[a] >= c) != (v[b] >= c)) {
          cross[e] = lerp(p[a], p[b], v[a], v[b], c);
          has[e] = true;
          ++count;
        }
      }
      if (count == 2) {
        int first = -1;
        for (int e = 0; e < 4; ++e)
          if (has[e]) {
            if (first < 0) first = e;
            else out.push_back({cross[first], cross[e]});
          }
      } else if (count == 4) {
        // Saddle: the cell-centre average decides which corners connect.
        const bool centre_above = 0.25 * (v[0] + v[1] + v[2] + v[3]) >= c;
        if (centre_above == (v[0] >= c)) {
          out.push_back({cross[0], cross[1]});
          out.push_back({cross[2], cross[3]});
        } else {
          out.push_back({cross[3], cross[0]});
          out.push_back({cross[1], cross[2]});
        }
      }
    }
  }
  return out;
}

ContourStats contour_stats(const std::vector<Segment>& contour) {
  ContourStats s;
  if (contour.empty()) return s;
  double sum = 0.0, sum2 = 0.0;
  for (const auto& seg : contour)
    for (Point q : {seg.a, seg.b}) {
      const double r = q.norm();
      sum += r;
      sum2 += r * r;
      ++s.points;
    }
  s.mean_radius = sum / s.points;
  s.radial_std = std::sqrt(std::max(0.0, sum2 / s.points - s.mean_radius * s.mean_radius));
  return s;
}

std::vector<unsigned char> superlevel_mask(const IndicatorField& field, double c) {
  std::vector<unsigned char> m(field.values.size(), 0);
  for (size_t k = 0; k < m.size(); ++k) m[k] = !std::isnan(field.values[k]) && field.values[k] >= c;
  return m;
}

double jaccard(const std::vector<unsigned char>& a, const std::vector<unsigned char>& b) {
  if (a.size() != b.size()) throw DomainError("masks differ in size");
  size_t inter = 0, uni = 0;
  for (size_t k = 0; k < a.size(); ++k) {
    inter += a[k] && b[k];
    uni += a[k] || b[k];
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace reit
