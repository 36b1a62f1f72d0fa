#pragma once

// The real diagram as a glued complex of pieces.
//
// Per level and sheet, every arrangement vertex is a complex vertex and every
// arc a complex edge (a loop arc gets one extra vertex). Pieces are open
// 2-cells of known Euler characteristic glued along cycles of edges:
// a membrane per region, a cylinder per curve circle and sheet, and the end
// pieces at level 0 and at infinity. Then chi = V - E + sum of piece chi.

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arrangement.hpp"
#include "bipoly.hpp"
#include "errors.hpp"
#include "levels.hpp"
#include "pgl2.hpp"

namespace patchwork {

/// Sheet + is the fiber point [B], sheet - is [iB]; sheet + carries the Plus regions.
inline constexpr const char* kSheetPlusLabel = "[B]";
inline constexpr const char* kSheetMinusLabel = "[iB]";

/// Sheet carrying the circle end (T2) and the cone point (S2) at level 0.
inline constexpr int kT2CircleEndSheet = +1;
inline constexpr int kS2ConeSheet = +1;

/// Curve data at the level of combinatorics: circle count (and torus classes).
struct CurveSummary {
    int bidegree = 0;
    int circles = 0;
    std::vector<std::array<int, 2>> classes;
};

struct DiagramSpec {
    int degree = 0;
    RealStructure rs = kT2;
    LevelData levels;
    std::vector<CurveSummary> curves; // bidegrees 2,4,..,d or 1,3,..,d
    std::vector<LevelArrangement> arrangements; // one per critical level, in order

    int level_count() const { return degree / 2; }
    bool odd() const { return degree % 2 != 0; }
    /// Curve index paired as prev/next at level l (1-based); -1 for the constant.
    int prev_curve(int l) const { return odd() ? l - 1 : l - 2; }
    int next_curve(int l) const { return odd() ? l : l - 1; }
    /// Level at which curve j is the next (upper) curve; 0 for the coamoeba end.
    int bottom_level(int j) const { return odd() ? j : j + 1; }
    /// Level at which curve j is the prev curve, or -1 for infinity.
    int top_level(int j) const
    {
        const int l = odd() ? j + 1 : j + 2;
        return l <= level_count() ? l : -1;
    }
    int model_euler_char() const { return rs.kind == RealStructureKind::S2 ? 2 : 0; }
};

inline int expected_bidegree(int degree, int j) { return degree % 2 ? 2 * j + 1 : 2 * j + 2; }
inline int expected_curve_count(int degree) { return degree % 2 ? degree / 2 + 1 : degree / 2; }

/// Structural checks of a spec: curve sequence, level count, arrangement pairing.
inline void validate_spec(const DiagramSpec& spec)
{
    if (spec.degree < 1)
        fail(ErrorKind::SpecViolation, "degree must be at least 1");
    if (spec.rs.kind == RealStructureKind::Empty)
        return;
    const int k = spec.level_count();
    if (spec.levels.count() != k)
        fail(ErrorKind::SpecViolation, "need floor(d/2) critical levels");
    if (static_cast<int>(spec.curves.size()) != expected_curve_count(spec.degree))
        fail(ErrorKind::SpecViolation, "wrong number of curves for the degree");
    for (int j = 0; j < static_cast<int>(spec.curves.size()); ++j)
        if (spec.curves[j].bidegree != expected_bidegree(spec.degree, j))
            fail(ErrorKind::SpecViolation, "curve bidegrees must run 2,4,..,d or 1,3,..,d");
    if (static_cast<int>(spec.arrangements.size()) != k)
        fail(ErrorKind::SpecViolation, "need one arrangement per critical level");
    for (int l = 1; l <= k; ++l) {
        const LevelArrangement& arr = spec.arrangements[l - 1];
        const int p = spec.prev_curve(l), n = spec.next_curve(l);
        const int np = p < 0 ? 0 : spec.curves[p].circles;
        if (arr.circle_count(CurveRole::Prev) != np || arr.circle_count(CurveRole::Next) != spec.curves[n].circles)
            fail(ErrorKind::SpecViolation, "arrangement circles do not match the curve data");
        if (p < 0 && arr.vertex_count() != 0)
            fail(ErrorKind::SpecViolation, "the constant first level cannot have vertices");
    }
}

enum class PieceKind { Membrane, Cylinder, InfinityJoin, ConePoint, CoamoebaCircleEnd, CoamoebaRP2 };

constexpr const char* to_string(PieceKind k)
{
    switch (k) {
    case PieceKind::Membrane: return "membrane";
    case PieceKind::Cylinder: return "cylinder";
    case PieceKind::InfinityJoin: return "infinity_join";
    case PieceKind::ConePoint: return "cone_point";
    case PieceKind::CoamoebaCircleEnd: return "coamoeba_circle_end";
    case PieceKind::CoamoebaRP2: return "coamoeba_rp2";
    }
    return "?";
}

struct EdgeUse {
    int edge = -1;
    int dir = +1; // +1 along the edge, -1 against it
};

struct Piece {
    PieceKind kind = PieceKind::Membrane;
    int level = -1; // membrane level; cylinder bottom level
    int top_level = -1; // cylinders: -1 for infinity
    int sheet = 0; // +1 / -1, 0 for pieces spanning both sheets
    int curve = -1, circle = -1, region = -1;
    int euler_char = 0;
    bool orientable = true;
    bool standalone = false;
    std::vector<std::vector<EdgeUse>> boundary;
    int anchor_edge = -1; // pieces without 2-cells (infinity joins) sit on this edge
};

struct ComplexEdge {
    int tail = -1, head = -1;
};

struct ComponentInfo {
    int euler_char = 0;
    bool orientable = true;
    int genus_or_crosscaps = 0;
    std::vector<int> pieces;
};

struct LinkReport {
    bool ok = true;
    int vertices_checked = 0;
    int edges_checked = 0;
    std::vector<std::string> failures;
};

struct PatchworkSurface {
    int vertex_count = 0;
    std::vector<ComplexEdge> edges;
    std::vector<Piece> pieces;
    std::vector<ComponentInfo> components;
    LinkReport link;

    bool empty() const { return pieces.empty(); }
};

namespace detail {

class ComplexBuilder {
public:
    int add_vertex() { return vertex_count_++; }
    int add_edge(int tail, int head)
    {
        edges_.push_back({tail, head});
        return static_cast<int>(edges_.size()) - 1;
    }
    int add_loop()
    {
        const int v = add_vertex();
        return add_edge(v, v);
    }
    int vertex_count() const { return vertex_count_; }
    std::vector<ComplexEdge> take_edges() { return std::move(edges_); }

private:
    int vertex_count_ = 0;
    std::vector<ComplexEdge> edges_;
};

inline int end_vertex(const ComplexEdge& e, int dir) { return dir > 0 ? e.head : e.tail; }
inline int start_vertex(const ComplexEdge& e, int dir) { return dir > 0 ? e.tail : e.head; }

} // namespace detail

/// Link condition: every edge has two sides and every vertex link is one circle.
inline LinkReport check_links(const PatchworkSurface& s)
{
    LinkReport rep;
    const std::size_t ne = s.edges.size();
    std::vector<int> sides(ne, 0);
    // Edge-end id: 2*edge + (0 tail, 1 head). Corners join two edge-ends.
    std::vector<std::vector<int>> adj(2 * ne);
    for (const Piece& p : s.pieces)
        for (const auto& cycle : p.boundary) {
            const std::size_t m = cycle.size();
            for (std::size_t i = 0; i < m; ++i) {
                const EdgeUse& a = cycle[i];
                const EdgeUse& b = cycle[(i + 1) % m];
                ++sides[a.edge];
                const int end_a = 2 * a.edge + (a.dir > 0 ? 1 : 0);
                const int start_b = 2 * b.edge + (b.dir > 0 ? 0 : 1);
                adj[end_a].push_back(start_b);
                adj[start_b].push_back(end_a);
            }
        }
    for (std::size_t e = 0; e < ne; ++e) {
        ++rep.edges_checked;
        if (sides[e] != 2) {
            rep.ok = false;
            rep.failures.push_back("edge " + std::to_string(e) + " has " + std::to_string(sides[e]) + " sides");
        }
    }
    std::vector<std::vector<int>> ends_at(s.vertex_count);
    for (std::size_t e = 0; e < ne; ++e) {
        ends_at[s.edges[e].tail].push_back(static_cast<int>(2 * e));
        ends_at[s.edges[e].head].push_back(static_cast<int>(2 * e + 1));
    }
    std::vector<char> seen(2 * ne, 0);
    for (int v = 0; v < s.vertex_count; ++v) {
        const auto& ends = ends_at[v];
        if (ends.empty())
            continue;
        ++rep.vertices_checked;
        bool ok = true;
        for (int x : ends)
            ok = ok && adj[x].size() == 2;
        if (ok) {
            // Walk the cycle from the first edge-end; it must visit every end.
            std::size_t visited = 0;
            int prev = -1, cur = ends[0];
            do {
                seen[cur] = 1;
                ++visited;
                const int nxt = adj[cur][0] != prev ? adj[cur][0] : adj[cur][1];
                prev = cur;
                cur = nxt;
            } while (cur != ends[0] && visited <= ends.size());
            ok = visited == ends.size();
        }
        if (!ok) {
            rep.ok = false;
            rep.failures.push_back("vertex " + std::to_string(v) + " link is not a single circle");
        }
    }
    return rep;
}

/// Components by shared edges; orientability by propagating piece orientations.
inline std::vector<ComponentInfo> classify(const PatchworkSurface& s)
{
    const int np = static_cast<int>(s.pieces.size());
    // Parity union-find: node parity relative to its root.
    std::vector<int> parent(np), parity(np, 0);
    for (int i = 0; i < np; ++i)
        parent[i] = i;
    std::function<std::pair<int, int>(int)> find = [&](int x) -> std::pair<int, int> {
        if (parent[x] == x)
            return {x, 0};
        auto [r, p] = find(parent[x]);
        parent[x] = r;
        parity[x] ^= p;
        return {r, parity[x]};
    };
    std::vector<char> bad(np, 0);
    std::vector<std::vector<std::pair<int, int>>> uses(s.edges.size());
    for (int i = 0; i < np; ++i)
        for (const auto& cycle : s.pieces[i].boundary)
            for (const auto& u : cycle)
                uses[u.edge].push_back({i, u.dir});
    for (const auto& list : uses) {
        for (std::size_t k = 1; k < list.size(); ++k) {
            const auto [p1, o1] = list[0];
            const auto [p2, o2] = list[k];
            // Induced boundary orientations must be opposite: e1*o1 = -e2*o2.
            const int need = (o1 == o2) ? 1 : 0;
            auto [r1, q1] = find(p1);
            auto [r2, q2] = find(p2);
            if (r1 == r2) {
                if ((q1 ^ q2) != need)
                    bad[r1] = 1;
            } else {
                parent[r2] = r1;
                parity[r2] = q1 ^ q2 ^ need;
                bad[r1] = bad[r1] || bad[r2];
            }
        }
    }
    for (int i = 0; i < np; ++i) {
        const int e = s.pieces[i].anchor_edge;
        if (e < 0 || uses[e].empty())
            continue;
        auto [r1, q1] = find(uses[e][0].first);
        auto [r2, q2] = find(i);
        if (r1 != r2) {
            parent[r2] = r1;
            parity[r2] = q1 ^ q2;
            bad[r1] = bad[r1] || bad[r2];
        }
    }
    std::map<int, int> index;
    std::vector<ComponentInfo> out;
    for (int i = 0; i < np; ++i) {
        const int r = find(i).first;
        auto [it, inserted] = index.emplace(r, static_cast<int>(out.size()));
        if (inserted)
            out.emplace_back();
        ComponentInfo& c = out[it->second];
        c.pieces.push_back(i);
        if (!s.pieces[i].orientable)
            c.orientable = false;
    }
    for (auto& [r, ci] : index)
        if (bad[find(r).first])
            out[ci].orientable = false;
    // Per-component chi: V - E + pieces, each vertex and edge counted once.
    std::vector<int> edge_comp(s.edges.size(), -1);
    for (std::size_t e = 0; e < s.edges.size(); ++e)
        if (!uses[e].empty())
            edge_comp[e] = index.at(find(uses[e][0].first).first);
    std::vector<int> vertex_comp(s.vertex_count, -1);
    for (std::size_t e = 0; e < s.edges.size(); ++e) {
        if (edge_comp[e] < 0)
            continue;
        vertex_comp[s.edges[e].tail] = edge_comp[e];
        vertex_comp[s.edges[e].head] = edge_comp[e];
    }
    for (int v = 0; v < s.vertex_count; ++v)
        if (vertex_comp[v] >= 0)
            ++out[vertex_comp[v]].euler_char;
    for (int c : edge_comp)
        if (c >= 0)
            --out[c].euler_char;
    for (auto& c : out) {
        for (int i : c.pieces)
            c.euler_char += s.pieces[i].euler_char;
        c.genus_or_crosscaps = c.orientable ? (2 - c.euler_char) / 2 : 2 - c.euler_char;
    }
    return out;
}

/// Builds the piece complex of the diagram.
inline PatchworkSurface assemble(const DiagramSpec& spec)
{
    validate_spec(spec);
    PatchworkSurface surf;
    detail::ComplexBuilder cb;

    if (spec.rs.kind == RealStructureKind::Empty) {
        if (spec.odd()) {
            Piece rp2;
            rp2.kind = PieceKind::CoamoebaRP2;
            rp2.euler_char = 1;
            rp2.orientable = false;
            rp2.standalone = true;
            surf.pieces.push_back(rp2);
        }
        surf.components = classify(surf);
        surf.link = check_links(surf);
        return surf;
    }

    const int k = spec.level_count();
    const int nc = static_cast<int>(spec.curves.size());
    // edge_of[l][sheet][arc]
    std::vector<std::array<std::vector<int>, 2>> edge_of(k + 1);
    auto sheet_slot = [](int sheet) { return sheet > 0 ? 0 : 1; };
    for (int l = 1; l <= k; ++l) {
        const LevelArrangement& arr = spec.arrangements[l - 1];
        for (int sheet : {+1, -1}) {
            std::vector<int> vmap(arr.vertices.size());
            for (auto& v : vmap)
                v = cb.add_vertex();
            auto& edges = edge_of[l][sheet_slot(sheet)];
            for (const ArcRecord& a : arr.arcs) {
                if (a.tail < 0)
                    edges.push_back(cb.add_loop());
                else
                    edges.push_back(cb.add_edge(vmap[a.tail], vmap[a.head]));
            }
        }
    }

    // Membranes.
    for (int l = 1; l <= k; ++l) {
        const LevelArrangement& arr = spec.arrangements[l - 1];
        for (int r = 0; r < static_cast<int>(arr.regions.size()); ++r) {
            const RegionRecord& reg = arr.regions[r];
            Piece p;
            p.kind = PieceKind::Membrane;
            p.level = l;
            p.region = r;
            p.sheet = reg.sign == Sign::Plus ? +1 : -1;
            p.euler_char = reg.euler_char;
            const auto& edges = edge_of[l][sheet_slot(p.sheet)];
            for (const auto& cycle : reg.boundary) {
                std::vector<EdgeUse> uses;
                for (const Traversal& t : cycle)
                    uses.push_back({edges[t.arc], t.forward ? +1 : -1});
                p.boundary.push_back(std::move(uses));
            }
            surf.pieces.push_back(std::move(p));
        }
    }

    // Circle edges at a level, in circle order.
    auto circle_edges = [&](int l, CurveRole role, int index, int sheet) {
        const LevelArrangement& arr = spec.arrangements[l - 1];
        const int c = arr.find_circle(role, index);
        if (c < 0)
            fail(ErrorKind::SpecViolation, "a curve circle is missing from a level arrangement");
        std::vector<int> out;
        for (int a : arr.circles[c].arcs)
            out.push_back(edge_of[l][sheet_slot(sheet)][a]);
        return out;
    };

    for (int j = 0; j < nc; ++j) {
        for (int c = 0; c < spec.curves[j].circles; ++c) {
            const int lb = spec.bottom_level(j);
            const int lt = spec.top_level(j);
            int infinity_edge = -1;
            if (lt < 0) {
                infinity_edge = cb.add_loop();
                Piece join;
                join.kind = PieceKind::InfinityJoin;
                join.curve = j;
                join.circle = c;
                join.anchor_edge = infinity_edge;
                surf.pieces.push_back(join);
            }
            for (int sheet : {+1, -1}) {
                Piece cyl;
                cyl.kind = PieceKind::Cylinder;
                cyl.level = lb;
                cyl.top_level = lt;
                cyl.sheet = sheet;
                cyl.curve = j;
                cyl.circle = c;
                std::vector<EdgeUse> bottom, top;
                if (lb == 0) {
                    const int loop = cb.add_loop();
                    bottom.push_back({loop, +1});
                    Piece end;
                    end.sheet = sheet;
                    end.curve = j;
                    end.circle = c;
                    end.level = 0;
                    end.boundary.push_back({{loop, +1}});
                    const bool t2 = spec.rs.kind == RealStructureKind::T2;
                    const bool cone = t2 ? sheet != kT2CircleEndSheet : sheet == kS2ConeSheet;
                    if (cone) {
                        end.kind = PieceKind::ConePoint;
                        end.euler_char = 1;
                    } else {
                        // Moebius band: the circle end, or RP2 minus a disk.
                        end.kind = t2 ? PieceKind::CoamoebaCircleEnd : PieceKind::CoamoebaRP2;
                        end.euler_char = 0;
                        end.orientable = false;
                    }
                    surf.pieces.push_back(std::move(end));
                } else {
                    for (int e : circle_edges(lb, CurveRole::Next, c, sheet))
                        bottom.push_back({e, +1});
                }
                if (lt < 0) {
                    top.push_back({infinity_edge, -1});
                } else {
                    const auto es = circle_edges(lt, CurveRole::Prev, c, sheet);
                    for (auto it = es.rbegin(); it != es.rend(); ++it)
                        top.push_back({*it, -1});
                }
                cyl.boundary.push_back(std::move(bottom));
                cyl.boundary.push_back(std::move(top));
                surf.pieces.push_back(std::move(cyl));
            }
        }
    }

    // An odd S2 diagram whose first curve has no real points ends in a detached RP2.
    if (spec.odd() && spec.rs.kind == RealStructureKind::S2 && spec.curves[0].circles == 0) {
        Piece rp2;
        rp2.kind = PieceKind::CoamoebaRP2;
        rp2.euler_char = 1;
        rp2.orientable = false;
        rp2.standalone = true;
        surf.pieces.push_back(rp2);
    }

    surf.vertex_count = cb.vertex_count();
    surf.edges = cb.take_edges();
    surf.link = check_links(surf);
    if (!surf.link.ok)
        fail(ErrorKind::NonClosedSurface, surf.link.failures.front());
    surf.components = classify(surf);
    return surf;
}

/// Euler characteristic of the glued complex.
inline int euler_complex(const PatchworkSurface& s)
{
    int chi = s.vertex_count - static_cast<int>(s.edges.size());
    for (const auto& p : s.pieces)
        chi += p.euler_char;
    return chi;
}

/// Euler characteristic from vertex counts alone.
inline int euler_formula(const DiagramSpec& spec)
{
    const int d = spec.degree;
    if (spec.rs.kind == RealStructureKind::Empty)
        return d % 2;
    int n = 0;
    for (const auto& arr : spec.arrangements)
        n += arr.vertex_count();
    if (spec.rs.kind == RealStructureKind::T2)
        return (d % 2) - n;
    return d - n;
}

inline int signature_bound(int d) { return d * (4 - d * d) / 3; }

struct BoundClause {
    std::string name;
    bool applicable = true;
    bool pass = true;
    std::string detail;
};

struct BoundReport {
    int degree = 0;
    int sigma = 0;
    int euler_char = 0;
    std::vector<BoundClause> clauses;

    bool pass() const
    {
        return std::all_of(clauses.begin(), clauses.end(), [](const auto& c) { return !c.applicable || c.pass; });
    }
};

/// Range and parity clauses for the Euler characteristic.
inline BoundReport verify_bounds(int degree, const RealStructure& rs, int chi)
{
    BoundReport rep;
    rep.degree = degree;
    rep.sigma = signature_bound(degree);
    rep.euler_char = chi;
    const int d = degree, sg = rep.sigma;
    auto range = [&](int lo, int hi) {
        BoundClause c;
        c.name = "range";
        c.detail = std::to_string(lo) + " <= chi <= " + std::to_string(hi);
        c.applicable = lo <= hi;
        if (!c.applicable)
            c.detail += " (empty interval, not applicable)";
        c.pass = lo <= chi && chi <= hi;
        rep.clauses.push_back(c);
    };
    auto parity = [&](int residue) {
        BoundClause c;
        c.name = "parity";
        c.detail = "chi = " + std::to_string(residue) + " mod 2";
        c.pass = ((chi - residue) % 2 + 2) % 2 == 0;
        rep.clauses.push_back(c);
    };
    switch (rs.kind) {
    case RealStructureKind::T2:
        range(sg, d % 2);
        parity(d % 2);
        break;
    case RealStructureKind::S2:
        range(d + sg, d);
        parity(d % 2);
        break;
    case RealStructureKind::Empty: {
        BoundClause c;
        c.name = "value";
        c.detail = "chi = " + std::to_string(d % 2);
        c.pass = chi == d % 2;
        rep.clauses.push_back(c);
        break;
    }
    }
    return rep;
}

inline BoundReport verify_bounds(const DiagramSpec& spec, const PatchworkSurface& s)
{
    return verify_bounds(spec.degree, spec.rs, euler_complex(s));
}

} // namespace patchwork
