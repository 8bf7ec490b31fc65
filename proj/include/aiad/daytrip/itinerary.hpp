#pragma once

#include <span>
#include <vector>

namespace aiad::daytrip {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(Point a, Point b);

/// Distance from `p` to the closed segment [a, b].
double point_segment_distance(Point p, Point a, Point b);

/// A closed tour that starts and ends at home. `order` lists indices into the
/// stop span passed to the solver, in visiting order (home excluded).
struct Tour {
    std::vector<int> order;
    double length_km = 0.0;
};

/// Length of home -> stops[order...] -> home.
double tour_length(Point home, std::span<const Point> stops, std::span<const int> order);

/// Shortest tour: exact Held-Karp up to `exact_limit` stops, otherwise the
/// better of 2-opt-refined nearest neighbour and 2-opt-refined
/// `heuristic_tour` (so it never loses to the heuristic).
Tour optimal_tour(Point home, std::span<const Point> stops, int exact_limit = 12);

/// Human-style tour: convex hull of home plus stops, then cheapest insertion
/// of the interior points.
Tour heuristic_tour(Point home, std::span<const Point> stops);

/// Perimeter of the convex hull of home plus stops; a lower bound on any tour.
double hull_perimeter(Point home, std::span<const Point> stops);

/// Minimum distance from `p` to any leg of the tour. An empty tour is just home.
double distance_to_tour(Point p, Point home, std::span<const Point> stops, std::span<const int> order);

/// In-place 2-opt improvement of `order`.
void two_opt(Point home, std::span<const Point> stops, std::vector<int>& order);

}  // namespace aiad::daytrip
