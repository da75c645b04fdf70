#include "oracles.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <tuple>

namespace oracle {

namespace {

double dist(const Point& a, const Point& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

double meta_contrast(const std::vector<Point>& points, const Labels& labels) {
    std::vector<double> within, between;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            (labels[i] == labels[j] ? within : between).push_back(dist(points[i], points[j]));
    if (within.empty() || between.empty()) return 1.0;
    double w = 0, b = 0;
    for (double d : within) w += d;
    for (double d : between) b += d;
    w /= static_cast<double>(within.size());
    b /= static_cast<double>(between.size());
    if (w == 0) return b > 0 ? std::numeric_limits<double>::infinity() : 1.0;
    return b / w;
}

std::vector<Labels> single_linkage_cuts(const std::vector<Point>& points, const std::vector<std::string>& ids) {
    const int n = static_cast<int>(points.size());
    std::vector<std::set<int>> clusters;
    for (int i = 0; i < n; ++i) clusters.push_back({i});

    auto labels_now = [&] {
        Labels l(static_cast<std::size_t>(n));
        for (std::size_t c = 0; c < clusters.size(); ++c)
            for (int m : clusters[c]) l[static_cast<std::size_t>(m)] = static_cast<int>(c);
        return l;
    };

    std::vector<Labels> cuts{labels_now()};
    while (clusters.size() > 1) {
        std::tuple<double, std::string, std::string> best{std::numeric_limits<double>::infinity(), "", ""};
        std::size_t bi = 0, bj = 0;
        for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
            for (std::size_t cj = ci + 1; cj < clusters.size(); ++cj) {
                for (int a : clusters[ci]) {
                    for (int b : clusters[cj]) {
                        const auto& ia = ids[static_cast<std::size_t>(a)];
                        const auto& ib = ids[static_cast<std::size_t>(b)];
                        std::tuple<double, std::string, std::string> cand{
                            dist(points[static_cast<std::size_t>(a)], points[static_cast<std::size_t>(b)]),
                            std::min(ia, ib), std::max(ia, ib)};
                        if (cand < best) {
                            best = cand;
                            bi = ci;
                            bj = cj;
                        }
                    }
                }
            }
        }
        clusters[bi].insert(clusters[bj].begin(), clusters[bj].end());
        clusters.erase(clusters.begin() + static_cast<long>(bj));
        cuts.push_back(labels_now());
    }
    return cuts;
}

std::vector<Labels> all_partitions(int n) {
    std::vector<Labels> out;
    Labels rgs(static_cast<std::size_t>(n), 0);
    // Enumerate restricted growth strings: rgs[i] <= 1 + max(rgs[0..i-1]).
    std::function<void(int, int)> rec = [&](int i, int max_label) {
        if (i == n) {
            out.push_back(rgs);
            return;
        }
        for (int l = 0; l <= max_label + 1; ++l) {
            rgs[static_cast<std::size_t>(i)] = l;
            rec(i + 1, std::max(max_label, l));
        }
    };
    if (n > 0) {
        rgs[0] = 0;
        rec(1, 0);
    }
    return out;
}

std::vector<Point> random_points(std::mt19937_64& rng, int n, int dim, double scale) {
    std::uniform_real_distribution<double> u(0.0, scale);
    std::vector<Point> pts(static_cast<std::size_t>(n), Point(static_cast<std::size_t>(dim)));
    for (auto& p : pts)
        for (auto& v : p) v = u(rng);
    return pts;
}

}  // namespace oracle
