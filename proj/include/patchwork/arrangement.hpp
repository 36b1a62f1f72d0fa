#pragma once

// Signed region decomposition of the model minus two consecutive curves.
//
// Combinatorics: arcs run between intersection points (or form whole loops
// on circles that meet nothing); each vertex carries its four half-arcs in
// counterclockwise order and the region in each quadrant; each region knows
// its boundary cycles as arc traversals with the region on the left.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "bipoly.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "mesh.hpp"
#include "tracer.hpp"

namespace patchwork {

enum class CurveRole { Prev, Next };

constexpr const char* to_string(CurveRole r) { return r == CurveRole::Prev ? "prev" : "next"; }

struct ArcRecord {
    CurveRole curve = CurveRole::Next;
    int circle = -1; // index into LevelArrangement::circles
    int tail = -1, head = -1; // vertex ids; -1 for a loop without vertices
    int left = -1, right = -1; // region ids
    std::vector<Vec3> polyline; // tail to head, lifted (polynomial mode only)
};

struct CircleRecord {
    CurveRole curve = CurveRole::Next;
    int index = -1; // circle index within its curve system
    std::array<int, 2> torus_class{0, 0};
    std::vector<int> arcs; // in circle order
};

struct HalfArc {
    int arc = -1;
    bool outgoing = true; // the arc leaves the vertex (vertex is its tail)
};

struct VertexRecord {
    Vec3 pos{0.0, 0.0, 0.0};
    std::array<HalfArc, 4> rotation{}; // counterclockwise
    std::array<int, 4> quadrants{-1, -1, -1, -1}; // quadrants[i] lies between rotation[i] and rotation[i+1]
};

struct Traversal {
    int arc = -1;
    bool forward = true;
};

struct RegionRecord {
    Sign sign = Sign::Plus;
    int euler_char = 0;
    std::vector<std::vector<Traversal>> boundary; // cycles, region on the left
    int mesh_vertices = 0;
};

struct LevelArrangement {
    int level = 0;
    Model model = Model::Torus;
    int prev_bidegree = 0, next_bidegree = 0;
    std::vector<CircleRecord> circles;
    std::vector<ArcRecord> arcs;
    std::vector<VertexRecord> vertices;
    std::vector<RegionRecord> regions;
    double transversality_margin = 1.0;
    bool reflected = false;

    // Polynomial mode only: region id per topological mesh vertex.
    std::shared_ptr<const Mesh> mesh;
    std::vector<int> vertex_region;

    int vertex_count() const { return static_cast<int>(vertices.size()); }

    int circle_count(CurveRole role) const
    {
        return static_cast<int>(std::count_if(circles.begin(), circles.end(),
                                              [role](const CircleRecord& c) { return c.curve == role; }));
    }

    /// Circle record id for (role, index within the curve), or -1.
    int find_circle(CurveRole role, int index) const
    {
        for (std::size_t c = 0; c < circles.size(); ++c)
            if (circles[c].curve == role && circles[c].index == index)
                return static_cast<int>(c);
        return -1;
    }
};

inline int model_euler_char(Model m) { return m == Model::Torus ? 0 : 2; }

/// Same geometry with every region sign flipped.
inline LevelArrangement reflect_signs(LevelArrangement arr)
{
    for (auto& r : arr.regions)
        r.sign = flip(r.sign);
    arr.reflected = !arr.reflected;
    return arr;
}

namespace detail {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x)
    {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

inline int quadrant_from(const LevelArrangement& arr, const HalfArc& h, bool ccw_side)
{
    const ArcRecord& a = arr.arcs[h.arc];
    // Travelling away from the vertex, the counterclockwise side is the left.
    if (h.outgoing)
        return ccw_side ? a.left : a.right;
    return ccw_side ? a.right : a.left;
}

/// Fills quadrants from the rotation and arc sides; false if inconsistent.
inline bool assign_quadrants(const LevelArrangement& arr, VertexRecord& v)
{
    for (int i = 0; i < 4; ++i) {
        const int from_here = quadrant_from(arr, v.rotation[i], true);
        const int from_next = quadrant_from(arr, v.rotation[(i + 1) % 4], false);
        if (from_here != from_next || from_here < 0)
            return false;
        v.quadrants[i] = from_here;
    }
    return true;
}

inline bool alternates(const LevelArrangement& arr, const VertexRecord& v)
{
    for (int i = 0; i < 4; ++i)
        if (arr.arcs[v.rotation[i].arc].curve == arr.arcs[v.rotation[(i + 1) % 4].arc].curve)
            return false;
    return true;
}

} // namespace detail

/// Region boundary cycles from the rotation system, then the structural
/// checks shared by both input modes: sign alternation across arcs, four
/// alternating half-arcs per vertex, and the Euler identity.
inline void finish_arrangement(LevelArrangement& arr)
{
    // invariant curves always meet an even number of times
    if (arr.vertex_count() % 2 != 0)
        fail(ErrorKind::SpecViolation, "odd number of intersection points");
    const int nr = static_cast<int>(arr.regions.size());
    for (const auto& a : arr.arcs) {
        if (a.left < 0 || a.right < 0 || a.left >= nr || a.right >= nr)
            fail(ErrorKind::SignInconsistent, "arc without regions on both sides");
        if (arr.regions[a.left].sign == arr.regions[a.right].sign)
            fail(ErrorKind::SignInconsistent, "region signs do not alternate across an arc");
    }
    for (auto& v : arr.vertices) {
        if (!detail::alternates(arr, v))
            fail(ErrorKind::SignInconsistent, "half-arcs at a vertex do not alternate between the curves");
        if (!detail::assign_quadrants(arr, v))
            fail(ErrorKind::SignInconsistent, "quadrant regions inconsistent at a vertex");
    }

    // Boundary cycles: leave each traversal's end vertex along the half-arc
    // clockwise next to the one we arrived on.
    const std::size_t na = arr.arcs.size();
    std::vector<std::array<char, 2>> used(na, {0, 0});
    for (auto& r : arr.regions)
        r.boundary.clear();
    for (std::size_t a0 = 0; a0 < na; ++a0)
        for (int side = 0; side < 2; ++side) {
            if (used[a0][side])
                continue;
            const bool forward0 = side == 0; // side 0: left, traversed forward
            const int region = forward0 ? arr.arcs[a0].left : arr.arcs[a0].right;
            std::vector<Traversal> cycle;
            Traversal t{static_cast<int>(a0), forward0};
            for (;;) {
                auto& u = used[t.arc][t.forward ? 0 : 1];
                if (u)
                    break;
                u = 1;
                cycle.push_back(t);
                const ArcRecord& arc = arr.arcs[t.arc];
                const int w = t.forward ? arc.head : arc.tail;
                if (w < 0) {
                    break; // loop without vertices
                }
                const VertexRecord& v = arr.vertices[w];
                int idx = -1;
                for (int i = 0; i < 4; ++i)
                    if (v.rotation[i].arc == t.arc && v.rotation[i].outgoing == !t.forward)
                        idx = i;
                if (idx < 0)
                    fail(ErrorKind::SignInconsistent, "arc missing from its end vertex");
                const HalfArc& nh = v.rotation[(idx + 3) % 4];
                t = {nh.arc, nh.outgoing};
                const ArcRecord& next = arr.arcs[t.arc];
                if ((t.forward ? next.left : next.right) != region)
                    fail(ErrorKind::SignInconsistent, "region boundary does not close up");
            }
            if (cycle.empty())
                continue;
            const Traversal& first = cycle.front();
            const Traversal& back = cycle.back();
            const ArcRecord& fa = arr.arcs[first.arc];
            const ArcRecord& ba = arr.arcs[back.arc];
            const int start_v = first.forward ? fa.tail : fa.head;
            const int end_v = back.forward ? ba.head : ba.tail;
            if (start_v != end_v)
                fail(ErrorKind::SignInconsistent, "region boundary does not close up");
            arr.regions[region].boundary.push_back(std::move(cycle));
        }

    int sum = 0;
    for (const auto& r : arr.regions)
        sum += r.euler_char;
    if (sum != model_euler_char(arr.model) + arr.vertex_count())
        fail(ErrorKind::EulerIdentity, "region Euler characteristics violate the arrangement identity");
}

namespace detail {

inline Vec3 curve_tangent(const BiPoly& g, Model m, const Vec3& p, const Vec3& toward)
{
    const auto [v, grad] = chart::jet(g, m, p);
    Vec3 t = m == Model::Torus ? Vec3{-grad[1], grad[0], 0.0} : cross(p, grad);
    if (dot(t, toward - p) < 0.0)
        t = -1.0 * t;
    return t;
}

struct CircleSplit {
    int vertex;
    int segment;
    double param;
    Vec3 pos;
};

} // namespace detail

/// Arrangement of prev (nullptr for a constant f_prev) and next at one level.
inline LevelArrangement build_arrangement(const CurveSystem* prev, const CurveSystem& next, const BiPoly& f_prev,
                                          const BiPoly& f_next, int level)
{
    const Mesh& mesh = *next.mesh;
    const Model m = mesh.model();
    if (prev && prev->mesh->resolution() != mesh.resolution())
        fail(ErrorKind::InvalidArgument, "curves traced on different grids");
    const RealStructure rs = real_structure_for(m);
    const BiPoly gp = real_form(f_prev, rs);
    const BiPoly gn = real_form(f_next, rs);
    // Bidegree gap check, even when prev is constant.
    (void)ratio_sign(f_prev, f_next, mesh.point(0));

    LevelArrangement arr;
    arr.level = level;
    arr.model = m;
    arr.prev_bidegree = f_prev.bidegree();
    arr.next_bidegree = f_next.bidegree();
    arr.mesh = next.mesh;

    IntersectionSet xs;
    if (prev)
        xs = intersect(*prev, next);
    arr.transversality_margin = xs.transversality_margin;

    // Crossed mesh edges and the region flood fill.
    const std::size_t ne = mesh.edge_count();
    std::vector<char> crossed_prev(ne, 0), crossed_next(ne, 0);
    for (std::size_t q = 0; q < mesh.quad_count(); ++q) {
        const auto& qs = mesh.quad(q);
        for (int k = 0; k < 4; ++k) {
            const int a = qs[k], b = qs[(k + 1) % 4];
            const int e = mesh.quad_edge(q, k);
            if (prev)
                crossed_prev[e] = prev->field.sign[a] != prev->field.sign[b];
            crossed_next[e] = next.field.sign[a] != next.field.sign[b];
        }
    }
    const int nv = mesh.vertex_count();
    detail::UnionFind uf(static_cast<std::size_t>(nv));
    for (std::size_t e = 0; e < ne; ++e)
        if (!crossed_prev[e] && !crossed_next[e]) {
            const auto& ev = mesh.edge_vertices(static_cast<int>(e));
            uf.unite(ev[0], ev[1]);
        }
    // Opposite corners of a cell with equal signs for both curves lie in one
    // region (each curve crosses the cell at most once); their diagonal is an
    // extra edge of the region complex. Thin wedges at shallow crossings
    // stay connected this way.
    auto sign_pair = [&](int s) {
        return std::pair<int, int>{prev ? prev->field.sign[s] : 1, next.field.sign[s]};
    };
    std::vector<std::pair<int, int>> diagonals;
    for (std::size_t q = 0; q < mesh.quad_count(); ++q) {
        const auto& qs = mesh.quad(q);
        for (int k = 0; k < 2; ++k) {
            const int a = qs[k], c = qs[k + 2];
            const int b = qs[k + 1], d = qs[(k + 3) % 4];
            if (sign_pair(a) == sign_pair(c) && sign_pair(b) != sign_pair(a) && sign_pair(d) != sign_pair(a)) {
                diagonals.push_back({mesh.vertex_of(a), mesh.vertex_of(c)});
                uf.unite(mesh.vertex_of(a), mesh.vertex_of(c));
            }
        }
    }
    arr.vertex_region.assign(nv, -1);
    std::vector<int> root_region(nv, -1);
    for (int v = 0; v < nv; ++v) {
        const int r = uf.find(v);
        if (root_region[r] < 0) {
            root_region[r] = static_cast<int>(arr.regions.size());
            arr.regions.emplace_back();
        }
        arr.vertex_region[v] = root_region[r];
    }
    std::vector<int> ve(arr.regions.size(), 0), ee(arr.regions.size(), 0), fe(arr.regions.size(), 0);
    for (int v = 0; v < nv; ++v)
        ++ve[arr.vertex_region[v]];
    for (std::size_t e = 0; e < ne; ++e)
        if (!crossed_prev[e] && !crossed_next[e])
            ++ee[arr.vertex_region[mesh.edge_vertices(static_cast<int>(e))[0]]];
    for (const auto& dg : diagonals)
        ++ee[arr.vertex_region[dg.first]];
    for (std::size_t q = 0; q < mesh.quad_count(); ++q) {
        bool open = true;
        for (int k = 0; k < 4; ++k) {
            const int e = mesh.quad_edge(q, k);
            open = open && !crossed_prev[e] && !crossed_next[e];
        }
        if (open)
            ++fe[arr.vertex_region[mesh.vertex_of(mesh.quad(q)[0])]];
    }

    // Signs: product of vertex values, cross-checked with ratio_sign.
    const std::vector<double> vp = gp.bidegree() == 0 ? std::vector<double>(nv, gp.coeff(0, 0).real())
                                                      : mesh.vertex_values(gp);
    const std::vector<double> vn = mesh.vertex_values(gn);
    std::vector<std::vector<int>> members(arr.regions.size());
    for (int v = 0; v < nv; ++v)
        members[arr.vertex_region[v]].push_back(v);
    for (std::size_t r = 0; r < arr.regions.size(); ++r) {
        RegionRecord& reg = arr.regions[r];
        reg.euler_char = ve[r] - ee[r] + fe[r];
        reg.mesh_vertices = ve[r];
        const auto& mem = members[r];
        if (mem.size() < static_cast<std::size_t>(kMinCircleCells))
            fail(ErrorKind::ResolutionTooCoarse, "a region contains fewer than 8 grid vertices");
        const bool plus = (vp[mem[0]] >= 0.0) == (vn[mem[0]] >= 0.0);
        reg.sign = plus ? Sign::Plus : Sign::Minus;
        for (int s = 0; s < kMinCircleCells; ++s) {
            const int v = mem[(mem.size() - 1) * static_cast<std::size_t>(s) / (kMinCircleCells - 1)];
            const Sign check = ratio_sign(gp, gn, mesh.point(mesh.sample_of_vertex(v)));
            if (check != Sign::OnCurve && check != reg.sign)
                fail(ErrorKind::SignInconsistent, "ratio sign varies within a region");
        }
    }

    // Split circles at the intersection points.
    struct Source {
        const CurveSystem* cs;
        CurveRole role;
        const BiPoly* g;
    };
    std::vector<Source> sources;
    if (prev)
        sources.push_back({prev, CurveRole::Prev, &gp});
    sources.push_back({&next, CurveRole::Next, &gn});
    arr.vertices.resize(xs.size());
    std::vector<std::array<int, 4>> slots(xs.size(), {-1, -1, -1, -1});
    std::vector<int> slot_count(xs.size(), 0);
    std::vector<std::array<double, 4>> angles(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        arr.vertices[i].pos = xs.points[i].pos_a;

    for (const Source& src : sources) {
        const auto& crossed_other = src.role == CurveRole::Prev ? crossed_next : crossed_prev;
        const SampledField* other_field =
            src.role == CurveRole::Prev ? &next.field : (prev ? &prev->field : nullptr);
        for (int ci = 0; ci < static_cast<int>(src.cs->circles.size()); ++ci) {
            const Circle& c = src.cs->circles[ci];
            const int circle_id = static_cast<int>(arr.circles.size());
            CircleRecord rec;
            rec.curve = src.role;
            rec.index = ci;
            rec.torus_class = c.torus_class;
            std::vector<detail::CircleSplit> splits;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const IntersectionPoint& ip = xs.points[i];
                const CurvePosition& at = src.role == CurveRole::Prev ? ip.on_a : ip.on_b;
                if (at.circle == ci)
                    splits.push_back({static_cast<int>(i), at.segment, at.param,
                                      src.role == CurveRole::Prev ? ip.pos_a : ip.pos_b});
            }
            std::sort(splits.begin(), splits.end(), [](const auto& x, const auto& y) {
                return x.segment != y.segment ? x.segment < y.segment : x.param < y.param;
            });
            const int n = static_cast<int>(c.points.size());
            auto point_at = [&](int k) {
                const int r = ((k % n) + n) % n;
                const int wraps = (k - r) / n;
                return c.points[r].pos + static_cast<double>(wraps) * c.period;
            };
            const int ns = static_cast<int>(splits.size());
            const int arcs_here = std::max(ns, 1);
            for (int s = 0; s < arcs_here; ++s) {
                ArcRecord arc;
                arc.curve = src.role;
                arc.circle = circle_id;
                int first_pt = 0, last_pt = n - 1;
                Vec3 shift{0.0, 0.0, 0.0};
                if (ns > 0) {
                    const auto& from = splits[s];
                    const auto& to = splits[(s + 1) % ns];
                    arc.tail = from.vertex;
                    arc.head = to.vertex;
                    first_pt = from.segment + 1;
                    last_pt = to.segment;
                    if (s + 1 == ns)
                        last_pt += n;
                    shift = chart::lift_shift(m, from.pos, point_at(first_pt));
                    arc.polyline.push_back(from.pos + shift);
                }
                if (last_pt < first_pt)
                    fail(ErrorKind::ResolutionTooCoarse, "an arc has no interior samples");
                for (int k = first_pt; k <= last_pt; ++k)
                    arc.polyline.push_back(point_at(k));
                if (ns > 0) {
                    const auto& to = splits[(s + 1) % ns];
                    arc.polyline.push_back(to.pos + chart::lift_shift(m, to.pos, point_at(last_pt)));
                } else {
                    arc.polyline.push_back(c.closing_point());
                }

                // Sides from mesh edges that only this curve crosses.
                int votes = 0;
                for (int k = first_pt; k <= last_pt; ++k) {
                    const CurvePoint& cp = c.points[((k % n) + n) % n];
                    if (crossed_other[cp.edge])
                        continue;
                    // A sample exactly on the other curve sits between two of its
                    // quadrants, so its region says nothing about this arc.
                    if (other_field &&
                        (other_field->value[cp.sample_a] == 0.0 || other_field->value[cp.sample_b] == 0.0))
                        continue;
                    // The sample with positive sign lies on the side the gradient
                    // points to. Geometry alone fails when the curve runs through
                    // a row of samples: the edge then lies along the curve.
                    const Vec3 p = point_at(k);
                    Vec3 t = point_at(k + 1) - point_at(k - 1);
                    for (int j = 2; j < n / 2 && norm(t) < 1e-9; ++j)
                        t = point_at(k + j) - point_at(k - j);
                    // Signs were sampled at unshifted coordinates; odd bidegrees
                    // flip under a half-turn shift, so take the gradient there.
                    const Vec3 q = p - (p - cp.pos + cp.shift);
                    const Vec3 grad = chart::jet(*src.g, m, q).second;
                    const bool grad_left = chart::left_of(m, q, t, q + grad) > 0.0;
                    const bool a_plus = src.cs->field.sign[cp.sample_a] > 0;
                    const int ra = arr.vertex_region[mesh.vertex_of(cp.sample_a)];
                    const int rb = arr.vertex_region[mesh.vertex_of(cp.sample_b)];
                    const int rplus = a_plus ? ra : rb, rminus = a_plus ? rb : ra;
                    const int l = grad_left ? rplus : rminus, r = grad_left ? rminus : rplus;
                    if (votes == 0) {
                        arc.left = l;
                        arc.right = r;
                    } else if (arc.left != l || arc.right != r) {
                        fail(ErrorKind::ResolutionTooCoarse, "arc sides disagree along the arc");
                    }
                    ++votes;
                }
                if (votes == 0)
                    fail(ErrorKind::ResolutionTooCoarse, "arc too short to determine its sides");

                const int arc_id = static_cast<int>(arr.arcs.size());
                if (ns > 0) {
                    const Vec3& head_pos = arc.polyline.back();
                    const Vec3& tail_pos = arc.polyline.front();
                    // Orient toward the first polyline point that has moved off
                    // the vertex; samples on the curve repeat positions.
                    auto away = [&](const Vec3& from, bool forward) {
                        const std::size_t np = arc.polyline.size();
                        for (std::size_t k = 1; k < np; ++k) {
                            const Vec3& w = arc.polyline[forward ? k : np - 1 - k];
                            if (norm(w - from) > 1e-7)
                                return w;
                        }
                        return arc.polyline[forward ? np - 1 : 0];
                    };
                    const Vec3 t_out = detail::curve_tangent(*src.g, m, tail_pos, away(tail_pos, true));
                    const Vec3 t_in = detail::curve_tangent(*src.g, m, head_pos, away(head_pos, false));
                    for (const auto& [vid, out, pos, t] :
                         {std::tuple{arc.tail, true, tail_pos, t_out}, std::tuple{arc.head, false, head_pos, t_in}}) {
                        const int slot = slot_count[vid]++;
                        if (slot >= 4)
                            fail(ErrorKind::ResolutionTooCoarse, "more than four half-arcs at a vertex");
                        arr.vertices[vid].rotation[slot] = {arc_id, out};
                        angles[vid][slot] = chart::direction_angle(m, pos, t);
                    }
                }
                rec.arcs.push_back(arc_id);
                arr.arcs.push_back(std::move(arc));
            }
            arr.circles.push_back(std::move(rec));
        }
    }

    for (std::size_t i = 0; i < arr.vertices.size(); ++i) {
        if (slot_count[i] != 4)
            fail(ErrorKind::ResolutionTooCoarse, "vertex without four half-arcs");
        std::array<int, 4> order{0, 1, 2, 3};
        std::sort(order.begin(), order.end(), [&](int x, int y) { return angles[i][x] < angles[i][y]; });
        const auto rot = arr.vertices[i].rotation;
        for (int k = 0; k < 4; ++k)
            arr.vertices[i].rotation[k] = rot[order[k]];
    }

    try {
        finish_arrangement(arr);
    } catch (const Error& e) {
        // On a traced arrangement these are sampling artefacts.
        if (e.kind() == ErrorKind::EulerIdentity || e.kind() == ErrorKind::SignInconsistent)
            fail(ErrorKind::ResolutionTooCoarse, e.what());
        throw;
    }
    return arr;
}

/// Derives a rotation system for a vertex from arc sides alone (used when a
/// combinatorial input omits rotations): the two orders that alternate
/// between the curves are tried, and the first consistent one is kept.
inline void derive_rotation(const LevelArrangement& arr, VertexRecord& v, const std::array<HalfArc, 4>& halves)
{
    std::array<HalfArc, 2> p{}, q{};
    int np = 0, nq = 0;
    for (const auto& h : halves) {
        if (arr.arcs[h.arc].curve == CurveRole::Prev) {
            if (np == 2)
                fail(ErrorKind::Schema, "vertex needs two half-arcs of each curve");
            p[np++] = h;
        } else {
            if (nq == 2)
                fail(ErrorKind::Schema, "vertex needs two half-arcs of each curve");
            q[nq++] = h;
        }
    }
    if (np != 2 || nq != 2)
        fail(ErrorKind::Schema, "vertex needs two half-arcs of each curve");
    for (const auto& order : {std::array<HalfArc, 4>{p[0], q[0], p[1], q[1]}, std::array<HalfArc, 4>{p[0], q[1], p[1], q[0]}}) {
        VertexRecord trial = v;
        trial.rotation = order;
        if (detail::assign_quadrants(arr, trial)) {
            v = trial;
            return;
        }
    }
    fail(ErrorKind::Schema, "no rotation at a vertex is consistent with the region data");
}

} // namespace patchwork
