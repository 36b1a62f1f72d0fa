#pragma once

// Sampling meshes for the two real models of the quadric.
//
// Torus: the angle chart [0, pi]^2 with (N+1)^2 samples; samples on the far
// edges duplicate those on the near edges (theta ~ theta + pi), so each
// sample knows its topological vertex.
//
// Fields are sampled per topological vertex; a sample's value is its
// vertex value times twist(sample, bidegree), and a zero value counts as
// positive at the vertex before twisting.
//
// Sphere: the integer lattice points on the boundary of the cube
// [-N/2, N/2]^3, projected radially. Quads are the unit squares of the cube
// faces, ordered counterclockwise seen from outside.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <vector>

#include "bipoly.hpp"
#include "errors.hpp"
#include "geometry.hpp"

namespace patchwork {

inline constexpr int kDefaultResolution = 256;
inline constexpr int kMaxResolution = 1024;
inline constexpr int kMinResolution = 32;

struct TraceGrid {
    Model model = Model::Torus;
    int resolution = kDefaultResolution;
};

class Mesh {
public:
    explicit Mesh(const TraceGrid& grid) : model_(grid.model), n_(grid.resolution)
    {
        if (n_ < kMinResolution || n_ % 2 != 0)
            fail(ErrorKind::InvalidArgument, "grid resolution must be even and at least 32");
        if (model_ == Model::Torus)
            build_torus();
        else
            build_sphere();
        build_edges();
    }

    Model model() const { return model_; }
    int resolution() const { return n_; }

    std::size_t sample_count() const { return coords_.size(); }
    int vertex_count() const { return vertex_count_; }
    std::size_t quad_count() const { return quads_.size(); }
    std::size_t edge_count() const { return edge_vertices_.size(); }

    /// Chart coordinates: (theta, phi, 0) on the torus, a unit vector on the sphere.
    const Vec3& coord(int sample) const { return coords_[sample]; }
    int vertex_of(int sample) const { return vertex_of_[sample]; }
    int sample_of_vertex(int vertex) const { return sample_of_vertex_[vertex]; }
    const std::array<int, 4>& quad(std::size_t q) const { return quads_[q]; }
    /// Topological edge of quad q between its corners k and k+1.
    int quad_edge(std::size_t q, int k) const { return quad_edges_[q][k]; }
    const std::array<int, 2>& edge_vertices(int e) const { return edge_vertices_[e]; }
    const std::array<int, 2>& edge_quads(int e) const { return edge_quads_[e]; }

    /// Euclidean size of one cell in chart units (approximate on the sphere).
    double cell_size() const { return model_ == Model::Torus ? kPi / n_ : 2.0 / n_; }

    QuadricPoint point(int sample) const
    {
        const Vec3& c = coords_[sample];
        if (model_ == Model::Torus)
            return QuadricPoint::torus_angles(c[0], c[1]);
        return QuadricPoint::sphere(c);
    }

    double value(const BiPoly& f, int sample) const
    {
        const Vec3& c = coords_[sample];
        return model_ == Model::Torus ? torus_value(f, c[0], c[1]) : sphere_value(f, c);
    }

    /// Values of f at every topological vertex, computed in parallel blocks.
    std::vector<double> vertex_values(const BiPoly& f) const
    {
        std::vector<double> out(static_cast<std::size_t>(vertex_count_));
        const std::size_t total = out.size();
        const unsigned hw = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
        const std::size_t chunk = (total + hw - 1) / hw;
        std::vector<std::thread> workers;
        for (unsigned t = 0; t < hw; ++t) {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(total, lo + chunk);
            if (lo >= hi)
                break;
            workers.emplace_back([&, lo, hi] {
                for (std::size_t v = lo; v < hi; ++v)
                    out[v] = value(f, sample_of_vertex_[v]);
            });
        }
        for (auto& w : workers)
            w.join();
        return out;
    }

    /// +1 or -1: how a bidegree-b value at this sample relates to the value
    /// at its topological vertex (odd bidegree flips across a torus seam).
    int twist(int sample, int bidegree) const
    {
        if (model_ == Model::Sphere || bidegree % 2 == 0)
            return 1;
        return seam_crossings_[sample] % 2 ? -1 : 1;
    }

    /// Topological vertex nearest to a point of the model.
    int locate(const QuadricPoint& p) const
    {
        if (model_ == Model::Torus) {
            const Vec2 a = p.angles();
            auto idx = [this](double angle) {
                long i = std::lround(angle / kPi * n_);
                i %= n_;
                if (i < 0)
                    i += n_;
                return static_cast<int>(i);
            };
            return idx(a[0]) * n_ + idx(a[1]);
        }
        return vertex_of_[locate_sphere(p.n)];
    }

private:
    void build_torus()
    {
        const int n = n_;
        coords_.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                coords_.push_back({kPi * i / n, kPi * j / n, 0.0});
                vertex_of_.push_back((i % n) * n + (j % n));
                seam_crossings_.push_back((i == n ? 1 : 0) + (j == n ? 1 : 0));
            }
        vertex_count_ = n * n;
        sample_of_vertex_.assign(vertex_count_, -1);
        for (int s = 0; s < static_cast<int>(coords_.size()); ++s)
            if (sample_of_vertex_[vertex_of_[s]] < 0)
                sample_of_vertex_[vertex_of_[s]] = s;
        auto sid = [n](int i, int j) { return i * (n + 1) + j; };
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                quads_.push_back({sid(i, j), sid(i + 1, j), sid(i + 1, j + 1), sid(i, j + 1)});
    }

    std::int64_t sphere_key(int x, int y, int z) const
    {
        const int m = n_ / 2;
        const std::int64_t w = n_ + 1;
        return (static_cast<std::int64_t>(x + m) * w + (y + m)) * w + (z + m);
    }

    // Cube face (axis, sign) and its in-face axes u, v.
    static std::array<int, 3> face_axes(int face)
    {
        const int axis = face / 2;
        int u = (axis + 1) % 3, v = (axis + 2) % 3;
        if (face % 2)
            std::swap(u, v);
        return {axis, u, v};
    }

    std::size_t face_slot(int face, int i, int j) const
    {
        return static_cast<std::size_t>(face) * (n_ + 1) * (n_ + 1) + static_cast<std::size_t>(i) * (n_ + 1) + j;
    }

    void build_sphere()
    {
        const int m = n_ / 2;
        coords_.reserve(static_cast<std::size_t>(6 * n_ * n_ + 2));
        quads_.reserve(static_cast<std::size_t>(6 * n_ * n_));
        face_ids_.assign(6 * static_cast<std::size_t>(n_ + 1) * (n_ + 1), -1);
        // Only face-boundary points are shared between faces.
        std::unordered_map<std::int64_t, int> shared;
        for (int face = 0; face < 6; ++face) {
            const auto [axis, u, v] = face_axes(face);
            const int sgn = face % 2 ? -1 : 1;
            auto at = [&](int i, int j) {
                int& slot = face_ids_[face_slot(face, i, j)];
                if (slot >= 0)
                    return slot;
                std::array<int, 3> p{};
                p[axis] = sgn * m;
                p[u] = i - m;
                p[v] = j - m;
                const bool boundary = i == 0 || j == 0 || i == n_ || j == n_;
                if (boundary) {
                    auto it = shared.find(sphere_key(p[0], p[1], p[2]));
                    if (it != shared.end())
                        return slot = it->second;
                }
                slot = static_cast<int>(coords_.size());
                coords_.push_back(normalize(Vec3{double(p[0]), double(p[1]), double(p[2])}));
                if (boundary)
                    shared.emplace(sphere_key(p[0], p[1], p[2]), slot);
                return slot;
            };
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j)
                    quads_.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)});
        }
        vertex_count_ = static_cast<int>(coords_.size());
        vertex_of_.resize(coords_.size());
        sample_of_vertex_.resize(coords_.size());
        seam_crossings_.assign(coords_.size(), 0);
        for (int s = 0; s < vertex_count_; ++s)
            vertex_of_[s] = sample_of_vertex_[s] = s;
    }

    int locate_sphere(const Vec3& n) const
    {
        const int m = n_ / 2;
        int axis = 0;
        for (int k = 1; k < 3; ++k)
            if (std::abs(n[k]) > std::abs(n[axis]))
                axis = k;
        std::array<int, 3> p{};
        for (int k = 0; k < 3; ++k) {
            const double scaled = n[k] * m / std::abs(n[axis]);
            p[k] = std::clamp(static_cast<int>(std::lround(scaled)), -m, m);
        }
        const int face = 2 * axis + (n[axis] > 0 ? 0 : 1);
        const auto [ax, u, v] = face_axes(face);
        return face_ids_[face_slot(face, p[u] + m, p[v] + m)];
    }

    void build_edges()
    {
        // Every vertex has at most four neighbours, so edges are found in
        // small per-vertex slot lists keyed by the lower endpoint.
        constexpr int kSlots = 4;
        std::vector<std::array<std::pair<int, int>, kSlots>> slots(vertex_count_);
        std::vector<unsigned char> used(vertex_count_, 0);
        quad_edges_.resize(quads_.size());
        edge_vertices_.reserve(quads_.size() * 2 + 2);
        edge_quads_.reserve(quads_.size() * 2 + 2);
        for (std::size_t q = 0; q < quads_.size(); ++q)
            for (int k = 0; k < 4; ++k) {
                int a = vertex_of_[quads_[q][k]];
                int b = vertex_of_[quads_[q][(k + 1) % 4]];
                if (a > b)
                    std::swap(a, b);
                int e = -1;
                for (int t = 0; t < used[a]; ++t)
                    if (slots[a][t].first == b)
                        e = slots[a][t].second;
                if (e < 0) {
                    if (used[a] == kSlots)
                        fail(ErrorKind::InvalidArgument, "mesh vertex with more than four neighbours");
                    e = static_cast<int>(edge_vertices_.size());
                    slots[a][used[a]++] = {b, e};
                    edge_vertices_.push_back({a, b});
                    edge_quads_.push_back({static_cast<int>(q), -1});
                } else {
                    edge_quads_[e][1] = static_cast<int>(q);
                }
                quad_edges_[q][k] = e;
            }
    }

    Model model_;
    int n_;
    int vertex_count_ = 0;
    std::vector<Vec3> coords_;
    std::vector<int> vertex_of_;
    std::vector<int> sample_of_vertex_;
    std::vector<int> seam_crossings_;
    std::vector<std::array<int, 4>> quads_;
    std::vector<std::array<int, 4>> quad_edges_;
    std::vector<std::array<int, 2>> edge_vertices_;
    std::vector<std::array<int, 2>> edge_quads_;
    std::vector<int> face_ids_; // sphere: sample id per face grid point
};

/// Meshes are immutable once built; the most recent few are kept for reuse.
inline std::shared_ptr<const Mesh> make_mesh(const TraceGrid& grid)
{
    static std::mutex lock;
    static std::deque<std::shared_ptr<const Mesh>> recent;
    constexpr std::size_t kKeep = 4; // two models at two grids
    {
        std::lock_guard<std::mutex> guard(lock);
        for (const auto& m : recent)
            if (m->model() == grid.model && m->resolution() == grid.resolution)
                return m;
    }
    auto mesh = std::make_shared<const Mesh>(grid);
    std::lock_guard<std::mutex> guard(lock);
    recent.push_front(mesh);
    if (recent.size() > kKeep)
        recent.pop_back();
    return mesh;
}

} // namespace patchwork
