#include "aiad/daytrip/itinerary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace aiad::daytrip {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double point_segment_distance(Point p, Point a, Point b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) return distance(p, a);
    const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
    return distance(p, Point{a.x + t * dx, a.y + t * dy});
}

namespace {

// id -1 is home, otherwise an index into stops.
Point at(Point home, std::span<const Point> stops, int id) { return id < 0 ? home : stops[static_cast<std::size_t>(id)]; }

double cross(Point o, Point a, Point b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

// Andrew's monotone chain over home plus stops; counter-clockwise, without
// collinear points.
std::vector<int> convex_hull(Point home, std::span<const Point> stops) {
    std::vector<int> ids(stops.size() + 1);
    std::iota(ids.begin(), ids.end(), -1);
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        const Point pa = at(home, stops, a);
        const Point pb = at(home, stops, b);
        return pa.x < pb.x || (pa.x == pb.x && (pa.y < pb.y || (pa.y == pb.y && a < b)));
    });
    if (ids.size() < 3) return ids;
    std::vector<int> hull(2 * ids.size());
    std::size_t k = 0;
    for (int id : ids) {
        while (k >= 2 && cross(at(home, stops, hull[k - 2]), at(home, stops, hull[k - 1]), at(home, stops, id)) <= 0) --k;
        hull[k++] = id;
    }
    for (std::size_t i = ids.size() - 1, lower = k + 1; i-- > 0;) {
        const int id = ids[i];
        while (k >= lower && cross(at(home, stops, hull[k - 2]), at(home, stops, hull[k - 1]), at(home, stops, id)) <= 0)
            --k;
        hull[k++] = id;
    }
    hull.resize(k - 1);
    return hull;
}

std::vector<int> rotate_to_home(const std::vector<int>& cycle) {
    auto it = std::find(cycle.begin(), cycle.end(), -1);
    std::vector<int> order;
    order.reserve(cycle.size());
    for (auto jt = std::next(it); jt != cycle.end(); ++jt) order.push_back(*jt);
    for (auto jt = cycle.begin(); jt != it; ++jt) order.push_back(*jt);
    return order;
}

Tour held_karp(Point home, std::span<const Point> stops) {
    const int n = static_cast<int>(stops.size());
    const std::size_t full = (std::size_t{1} << n);
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dp(full * n, inf);
    std::vector<int> parent(full * n, -1);
    for (int j = 0; j < n; ++j) dp[(std::size_t{1} << j) * n + j] = distance(home, stops[j]);
    for (std::size_t mask = 1; mask < full; ++mask) {
        for (int j = 0; j < n; ++j) {
            const double base = dp[mask * n + j];
            if (!(mask & (std::size_t{1} << j)) || base == inf) continue;
            for (int k = 0; k < n; ++k) {
                if (mask & (std::size_t{1} << k)) continue;
                const std::size_t next = mask | (std::size_t{1} << k);
                const double c = base + distance(stops[j], stops[k]);
                if (c < dp[next * n + k]) {
                    dp[next * n + k] = c;
                    parent[next * n + k] = j;
                }
            }
        }
    }
    const std::size_t all = full - 1;
    int last = 0;
    double best = inf;
    for (int j = 0; j < n; ++j) {
        const double c = dp[all * n + j] + distance(stops[j], home);
        if (c < best) {
            best = c;
            last = j;
        }
    }
    std::vector<int> order;
    std::size_t mask = all;
    for (int j = last; j >= 0;) {
        order.push_back(j);
        const int p = parent[mask * n + j];
        mask &= ~(std::size_t{1} << j);
        j = p;
    }
    std::reverse(order.begin(), order.end());
    return Tour{std::move(order), best};
}

std::vector<int> nearest_neighbour(Point home, std::span<const Point> stops) {
    std::vector<int> order;
    std::vector<bool> used(stops.size(), false);
    Point cur = home;
    for (std::size_t step = 0; step < stops.size(); ++step) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < stops.size(); ++k) {
            if (used[k]) continue;
            const double d = distance(cur, stops[k]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(k);
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        order.push_back(best);
        cur = stops[static_cast<std::size_t>(best)];
    }
    return order;
}

}  // namespace

double tour_length(Point home, std::span<const Point> stops, std::span<const int> order) {
    double len = 0.0;
    Point cur = home;
    for (int id : order) {
        len += distance(cur, stops[static_cast<std::size_t>(id)]);
        cur = stops[static_cast<std::size_t>(id)];
    }
    return len + distance(cur, home);
}

void two_opt(Point home, std::span<const Point> stops, std::vector<int>& order) {
    const std::size_t n = order.size();
    if (n < 3) return;
    auto pt = [&](std::size_t pos) { return pos == 0 || pos == n + 1 ? home : stops[static_cast<std::size_t>(order[pos - 1])]; };
    bool improved = true;
    while (improved) {
        improved = false;
        // Positions 0 and n+1 are home; reverse order[i..j] (positions i+1..j+1).
        for (std::size_t i = 0; i + 1 < n + 1; ++i) {
            for (std::size_t j = i + 1; j < n + 1; ++j) {
                const double before = distance(pt(i), pt(i + 1)) + distance(pt(j), pt(j + 1));
                const double after = distance(pt(i), pt(j)) + distance(pt(i + 1), pt(j + 1));
                if (after < before - 1e-12) {
                    std::reverse(order.begin() + static_cast<long>(i), order.begin() + static_cast<long>(j));
                    improved = true;
                }
            }
        }
    }
}

Tour heuristic_tour(Point home, std::span<const Point> stops) {
    if (stops.size() <= 2) {
        std::vector<int> order(stops.size());
        std::iota(order.begin(), order.end(), 0);
        const double len = tour_length(home, stops, order);
        return Tour{std::move(order), len};
    }
    std::vector<int> cycle = convex_hull(home, stops);
    std::vector<bool> placed(stops.size(), false);
    for (int id : cycle)
        if (id >= 0) placed[static_cast<std::size_t>(id)] = true;
    if (std::find(cycle.begin(), cycle.end(), -1) == cycle.end()) {
        // Home is interior: it is inserted like any other point.
        cycle.reserve(stops.size() + 1);
    }
    auto all_placed = [&] {
        return std::all_of(placed.begin(), placed.end(), [](bool b) { return b; }) &&
               std::find(cycle.begin(), cycle.end(), -1) != cycle.end();
    };
    while (!all_placed()) {
        int best_id = 0;
        std::size_t best_edge = 0;
        double best_cost = std::numeric_limits<double>::infinity();
        auto consider = [&](int id) {
            const Point p = at(home, stops, id);
            for (std::size_t e = 0; e < cycle.size(); ++e) {
                const Point a = at(home, stops, cycle[e]);
                const Point b = at(home, stops, cycle[(e + 1) % cycle.size()]);
                const double c = distance(a, p) + distance(p, b) - distance(a, b);
                if (c < best_cost) {
                    best_cost = c;
                    best_id = id;
                    best_edge = e;
                }
            }
        };
        if (std::find(cycle.begin(), cycle.end(), -1) == cycle.end()) consider(-1);
        for (std::size_t k = 0; k < stops.size(); ++k)
            if (!placed[k]) consider(static_cast<int>(k));
        cycle.insert(cycle.begin() + static_cast<long>(best_edge) + 1, best_id);
        if (best_id >= 0) placed[static_cast<std::size_t>(best_id)] = true;
    }
    auto order = rotate_to_home(cycle);
    const double len = tour_length(home, stops, order);
    return Tour{std::move(order), len};
}

Tour optimal_tour(Point home, std::span<const Point> stops, int exact_limit) {
    if (stops.empty()) return Tour{};
    if (static_cast<int>(stops.size()) <= exact_limit) return held_karp(home, stops);
    auto nn = nearest_neighbour(home, stops);
    two_opt(home, stops, nn);
    auto hull = heuristic_tour(home, stops).order;
    two_opt(home, stops, hull);
    const double a = tour_length(home, stops, nn);
    const double b = tour_length(home, stops, hull);
    return a <= b ? Tour{std::move(nn), a} : Tour{std::move(hull), b};
}

double hull_perimeter(Point home, std::span<const Point> stops) {
    const auto hull = convex_hull(home, stops);
    if (hull.size() < 2) return 0.0;
    double len = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i)
        len += distance(at(home, stops, hull[i]), at(home, stops, hull[(i + 1) % hull.size()]));
    return len;
}

double distance_to_tour(Point p, Point home, std::span<const Point> stops, std::span<const int> order) {
    if (order.empty()) return distance(p, home);
    double best = std::numeric_limits<double>::infinity();
    Point cur = home;
    for (int id : order) {
        const Point next = stops[static_cast<std::size_t>(id)];
        best = std::min(best, point_segment_distance(p, cur, next));
        cur = next;
    }
    return std::min(best, point_segment_distance(p, cur, home));
}

}  // namespace aiad::daytrip
