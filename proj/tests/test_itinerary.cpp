#include "aiad/daytrip/itinerary.hpp"
#include "aiad/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace aiad;
using namespace aiad::daytrip;

namespace {

double brute_force_tour(Point home, const std::vector<Point>& stops) {
    std::vector<int> perm(stops.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    do {
        double len = 0.0;
        Point cur = home;
        for (int i : perm) {
            len += std::hypot(stops[static_cast<std::size_t>(i)].x - cur.x, stops[static_cast<std::size_t>(i)].y - cur.y);
            cur = stops[static_cast<std::size_t>(i)];
        }
        len += std::hypot(home.x - cur.x, home.y - cur.y);
        best = std::min(best, len);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::vector<Point> random_points(Rng& rng, std::size_t n) {
    std::vector<Point> pts(n);
    for (auto& p : pts) p = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
    return pts;
}

bool is_permutation_of_stops(const Tour& t, std::size_t n) {
    auto o = t.order;
    std::sort(o.begin(), o.end());
    std::vector<int> expect(n);
    std::iota(expect.begin(), expect.end(), 0);
    return o == expect;
}

}  // namespace

TEST_CASE("optimal tour matches permutation enumeration and heuristic stays within 1.5x") {
    Rng rng(21);
    const Point home{0, 0};
    for (int trial = 0; trial < 100; ++trial) {
        const auto stops = random_points(rng, 1 + rng.index(8));
        const double truth = brute_force_tour(home, stops);
        const auto opt = optimal_tour(home, stops);
        const auto heur = heuristic_tour(home, stops);
        REQUIRE(is_permutation_of_stops(opt, stops.size()));
        REQUIRE(is_permutation_of_stops(heur, stops.size()));
        CHECK(opt.length_km == doctest::Approx(truth).epsilon(1e-9));
        CHECK(tour_length(home, stops, opt.order) == doctest::Approx(opt.length_km));
        CHECK(heur.length_km >= truth - 1e-9);
        CHECK(heur.length_km <= 1.5 * truth + 1e-9);
        CHECK(hull_perimeter(home, stops) <= truth + 1e-9);
        CHECK(heuristic_tour(home, stops).order == heur.order);
    }
}

TEST_CASE("large tours never lose to the heuristic") {
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto stops = random_points(rng, 20);
        const auto opt = optimal_tour({0, 0}, stops, 12);
        CHECK(is_permutation_of_stops(opt, 20));
        CHECK(opt.length_km <= heuristic_tour({0, 0}, stops).length_km + 1e-9);
    }
}

TEST_CASE("tour examples") {
    const Point home{0, 0};
    CHECK(optimal_tour(home, {}).length_km == 0.0);
    const std::vector<Point> two{{3, 0}, {0, 4}};
    CHECK(optimal_tour(home, two).length_km == doctest::Approx(12.0));
    // Points on a convex polygon: the heuristic follows the hull, which is optimal.
    std::vector<Point> ring;
    for (int k = 1; k < 8; ++k) ring.push_back({std::cos(k * M_PI / 4) - 1.0, std::sin(k * M_PI / 4)});
    CHECK(heuristic_tour(home, ring).length_km == doctest::Approx(optimal_tour(home, ring).length_km));
}

TEST_CASE("distance to tour") {
    const Point home{0, 0};
    CHECK(distance_to_tour({3, 4}, home, {}, {}) == doctest::Approx(5.0));
    const std::vector<Point> stops{{1, 0}};
    const std::vector<int> order{0};
    CHECK(distance_to_tour({0.5, 0.5}, home, stops, order) == doctest::Approx(0.5));
    CHECK(point_segment_distance({2, 1}, {0, 0}, {1, 0}) == doctest::Approx(std::sqrt(2.0)));
}
