#ifndef GREENSEG_KDTREE_HPP
#define GREENSEG_KDTREE_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "greenseg/error.hpp"
#include "greenseg/parallel.hpp"
#include "greenseg/point_cloud.hpp"

namespace greenseg {

/// Exact Euclidean k-nearest-neighbor index over 3-D points.
///
/// Queries are deterministic: equidistant candidates are ranked by lower
/// point index. When k exceeds the point count, result rows are padded by
/// repeating the farthest neighbor so downstream pooling stays well defined.
/// The tree is immutable after construction and safe for concurrent queries.
class KdTree {
public:
    explicit KdTree(std::vector<Vec3> points, std::size_t leaf_size = 8)
        : points_(std::move(points)), leaf_size_(std::max<std::size_t>(1, leaf_size)) {
        if (points_.empty()) throw ArgumentError("KdTree: no points");
        for (const Vec3& p : points_)
            if (!p.finite()) throw StateError("KdTree: non-finite point");
        perm_.resize(points_.size());
        std::iota(perm_.begin(), perm_.end(), 0u);
        nodes_.reserve(2 * points_.size() / leaf_size_ + 2);
        build(0, static_cast<std::uint32_t>(points_.size()));
    }

    std::size_t size() const { return points_.size(); }
    const std::vector<Vec3>& points() const { return points_; }

    /// Fills `indices`/`sq_dists` with k entries sorted by (distance, index)
    /// ascending. The first min(k, N) entries are distinct.
    void knn(const Vec3& query, std::size_t k, std::vector<std::uint32_t>& indices,
             std::vector<double>& sq_dists) const {
        if (k == 0) throw ArgumentError("knn: k must be positive");
        const std::size_t keep = std::min(k, points_.size());

        std::vector<Candidate> heap;
        heap.reserve(keep);
        search(0, query, keep, heap);
        std::sort(heap.begin(), heap.end(),
                  [](const Candidate& a, const Candidate& b) {
                      return a.d != b.d ? a.d < b.d : a.idx < b.idx;
                  });

        indices.resize(k);
        sq_dists.resize(k);
        for (std::size_t i = 0; i < keep; ++i) {
            indices[i] = heap[i].idx;
            sq_dists[i] = heap[i].d;
        }
        for (std::size_t i = keep; i < k; ++i) { // pad with the farthest
            indices[i] = heap[keep - 1].idx;
            sq_dists[i] = heap[keep - 1].d;
        }
    }

    std::vector<std::uint32_t> knn(const Vec3& query, std::size_t k) const {
        std::vector<std::uint32_t> idx;
        std::vector<double> d;
        knn(query, k, idx, d);
        return idx;
    }

    /// Row-major M x k index matrix for a batch of queries.
    std::vector<std::uint32_t> knn_batch(std::span<const Vec3> queries, std::size_t k,
                                         int threads = 1) const {
        std::vector<std::uint32_t> out(queries.size() * k);
        parallel_for(queries.size(), threads, [&](std::size_t i) {
            std::vector<std::uint32_t> idx;
            std::vector<double> d;
            knn(queries[i], k, idx, d);
            std::copy(idx.begin(), idx.end(), out.begin() + static_cast<std::ptrdiff_t>(i * k));
        });
        return out;
    }

private:
    struct Candidate {
        double d;
        std::uint32_t idx;
    };
    struct Node {
        std::array<double, 3> lo{}, hi{};
        std::uint32_t begin = 0, end = 0; // leaf range into perm_
        std::int32_t left = -1, right = -1;
        bool leaf() const { return left < 0; }
    };

    // Max-heap order: the worst candidate (largest distance, ties to the
    // larger index) sits at the front so tie-breaking stays deterministic.
    static bool heap_less(const Candidate& a, const Candidate& b) {
        return a.d != b.d ? a.d < b.d : a.idx < b.idx;
    }

    std::uint32_t build(std::uint32_t begin, std::uint32_t end) {
        const std::uint32_t node_id = static_cast<std::uint32_t>(nodes_.size());
        nodes_.emplace_back();
        Node n;
        n.lo = {points_[perm_[begin]].x, points_[perm_[begin]].y, points_[perm_[begin]].z};
        n.hi = n.lo;
        for (std::uint32_t i = begin; i < end; ++i) {
            const Vec3& p = points_[perm_[i]];
            for (int a = 0; a < 3; ++a) {
                n.lo[a] = std::min(n.lo[a], p[a]);
                n.hi[a] = std::max(n.hi[a], p[a]);
            }
        }
        n.begin = begin;
        n.end = end;
        if (end - begin > leaf_size_) {
            int axis = 0;
            double spread = n.hi[0] - n.lo[0];
            for (int a = 1; a < 3; ++a)
                if (n.hi[a] - n.lo[a] > spread) {
                    spread = n.hi[a] - n.lo[a];
                    axis = a;
                }
            if (spread > 0.0) {
                const std::uint32_t mid = begin + (end - begin) / 2;
                std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                                 [&](std::uint32_t a, std::uint32_t b) {
                                     return points_[a][axis] < points_[b][axis];
                                 });
                n.left = static_cast<std::int32_t>(build(begin, mid));
                n.right = static_cast<std::int32_t>(build(mid, end));
            }
        }
        nodes_[node_id] = n;
        return node_id;
    }

    double min_sq_dist(const Node& n, const Vec3& q) const {
        double d = 0.0;
        for (int a = 0; a < 3; ++a) {
            double diff = 0.0;
            if (q[a] < n.lo[a]) diff = n.lo[a] - q[a];
            else if (q[a] > n.hi[a]) diff = q[a] - n.hi[a];
            d += diff * diff;
        }
        return d;
    }

    void consider(const Vec3& q, std::uint32_t idx, std::size_t keep,
                  std::vector<Candidate>& heap) const {
        const double d = squared_distance(q, points_[idx]);
        if (heap.size() < keep) {
            heap.push_back({d, idx});
            std::push_heap(heap.begin(), heap.end(), heap_less);
        } else {
            const Candidate& worst = heap.front();
            if (d < worst.d || (d == worst.d && idx < worst.idx)) {
                std::pop_heap(heap.begin(), heap.end(), heap_less);
                heap.back() = {d, idx};
                std::push_heap(heap.begin(), heap.end(), heap_less);
            }
        }
    }

    void search(std::uint32_t node_id, const Vec3& q, std::size_t keep,
                std::vector<Candidate>& heap) const {
        const Node& n = nodes_[node_id];
        // Prune only on strictly greater distance: a box at exactly the
        // current worst distance may still hold a lower-index tie.
        if (heap.size() == keep && min_sq_dist(n, q) > heap.front().d) return;
        if (n.leaf()) {
            for (std::uint32_t i = n.begin; i < n.end; ++i) consider(q, perm_[i], keep, heap);
            return;
        }
        const double dl = min_sq_dist(nodes_[n.left], q);
        const double dr = min_sq_dist(nodes_[n.right], q);
        if (dl <= dr) {
            search(static_cast<std::uint32_t>(n.left), q, keep, heap);
            search(static_cast<std::uint32_t>(n.right), q, keep, heap);
        } else {
            search(static_cast<std::uint32_t>(n.right), q, keep, heap);
            search(static_cast<std::uint32_t>(n.left), q, keep, heap);
        }
    }

    std::vector<Vec3> points_;
    std::size_t leaf_size_;
    std::vector<std::uint32_t> perm_;
    std::vector<Node> nodes_;
};

/// Builds an exact KNN index (spec-facing alias for the constructor).
inline KdTree build_index(std::vector<Vec3> positions) { return KdTree(std::move(positions)); }

} // namespace greenseg

#endif // GREENSEG_KDTREE_HPP
