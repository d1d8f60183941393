"""Cellulated tori and disks with classical bond/plaque spins.

Three lattice kinds:

* square-torus  -- w x h periodic square lattice, one spin per bond
  (the model whose Hamiltonian terms all have order 4);
* hex-torus     -- w x h periodic triangular lattice of plaques with
  hexagonal dual cells, one spin per plaque;
* square-disk   -- w x h patch of square cells with fixed boundary
  bond spins.

Domain walls live on the mid lattice separating |+> clusters from
|-> dual clusters; isolated vertices and isolated dual vertices
count as clusters.  extract_walls traces every mid-lattice loop and
classifies it as trivial or essential by its winding pair, measured
as net displacement across the two fundamental periods.
"""

from __future__ import annotations

import json
from collections import deque

from .errors import ComponentCapExceeded, ConfigInvalid

COMPONENT_CAP = 5_000_000

# port indices on a mid-lattice vertex (a bond midpoint)
NE, NW, SW, SE = 0, 1, 2, 3
_PORT_STEP = {NE: (1, 1), NW: (-1, 1), SW: (-1, -1), SE: (1, -1)}
_OPPOSITE = {NE: SW, SW: NE, NW: SE, SE: NW}

# arc pairings at a bond midpoint, keyed by (orientation, spin_is_plus).
# A |+> bond keeps the wall parallel to itself; a |-> bond keeps the
# wall parallel to the crossing dual bond.
_PAIRING = {
    ("h", True): {NW: NE, NE: NW, SW: SE, SE: SW},
    ("h", False): {NW: SW, SW: NW, NE: SE, SE: NE},
    ("v", True): {NE: SE, SE: NE, NW: SW, SW: NW},
    ("v", False): {NW: NE, NE: NW, SW: SE, SE: SW},
}


class WallCensus:
    """Census of one configuration's domain walls and FK clusters."""

    def __init__(self, trivial_loops, essential_loops, clusters,
                 dual_clusters, plus_edges, minus_edges,
                 wrapping_clusters=0, wrapping_dual_clusters=0):
        self.trivial_loops = trivial_loops
        self.essential_loops = list(essential_loops)
        self.clusters = clusters
        self.dual_clusters = dual_clusters
        self.plus_edges = plus_edges
        self.minus_edges = minus_edges
        self.wrapping_clusters = wrapping_clusters
        self.wrapping_dual_clusters = wrapping_dual_clusters

    @property
    def loops(self):
        return self.trivial_loops + len(self.essential_loops)

    def as_dict(self):
        return {
            "loops": self.loops,
            "trivial_loops": self.trivial_loops,
            "essential_loops": [list(wpair) for wpair in self.essential_loops],
            "clusters": self.clusters,
            "dual_clusters": self.dual_clusters,
            "plus_edges": self.plus_edges,
            "minus_edges": self.minus_edges,
            "wrapping_clusters": self.wrapping_clusters,
            "wrapping_dual_clusters": self.wrapping_dual_clusters,
        }

    def __repr__(self):
        return ("WallCensus(L=%d, essential=%r, C=%d, C*=%d, E=%d, E*=%d)"
                % (self.loops, self.essential_loops, self.clusters,
                   self.dual_clusters, self.plus_edges, self.minus_edges))


class SpinConfig:
    """Immutable spin assignment on the free sites of a lattice.

    Bit i set means site i carries |+>.
    """

    __slots__ = ("lattice", "bits")

    def __init__(self, lattice, bits):
        self.lattice = lattice
        self.bits = int(bits)
        if self.bits < 0 or self.bits >> lattice.nsites:
            raise ConfigInvalid("spin bits out of range for lattice")

    def plus(self, site):
        return bool((self.bits >> site) & 1)

    def flip(self, site):
        return SpinConfig(self.lattice, self.bits ^ (1 << site))

    def swap(self):
        """Global |+> <-> |-> interchange."""
        mask = (1 << self.lattice.nsites) - 1
        return SpinConfig(self.lattice, self.bits ^ mask)

    def to_hex(self):
        width = (self.lattice.nsites + 3) // 4
        return format(self.bits, "0%dx" % max(width, 1))

    @classmethod
    def from_hex(cls, lattice, text):
        return cls(lattice, int(text, 16))

    def __eq__(self, other):
        return (isinstance(other, SpinConfig)
                and self.lattice is other.lattice
                and self.bits == other.bits)

    def __hash__(self):
        return hash((id(self.lattice), self.bits))

    def __repr__(self):
        return "SpinConfig(%s)" % self.to_hex()


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb
            return True
        return False

    def count(self):
        return sum(1 for i, p in enumerate(self.parent) if self.find(i) == i)


def _wrapping_components(n_nodes, edges, lifts):
    """Count components and wrapping components of a graph on a torus.

    edges is a list of (a, b); lifts[k] is the displacement of edge k in
    universal-cover coordinates.  A component wraps when some cycle has
    nonzero net displacement.
    """
    adj = [[] for _ in range(n_nodes)]
    for k, (a, b) in enumerate(edges):
        dx, dy = lifts[k]
        adj[a].append((b, dx, dy))
        adj[b].append((a, -dx, -dy))
    seen = [None] * n_nodes
    comps = 0
    wrapping = 0
    for start in range(n_nodes):
        if seen[start] is not None:
            continue
        comps += 1
        wraps = False
        seen[start] = (0, 0)
        queue = deque([start])
        while queue:
            u = queue.popleft()
            ux, uy = seen[u]
            for v, dx, dy in adj[u]:
                pos = (ux + dx, uy + dy)
                if seen[v] is None:
                    seen[v] = pos
                    queue.append(v)
                elif seen[v] != pos:
                    wraps = True
        if wraps:
            wrapping += 1
    return comps, wrapping


class SquareTorusLattice:
    """w x h square lattice on the torus with spins on bonds.

    Bond (0, i, j) is the horizontal bond from vertex (i, j) to
    (i+1, j); bond (1, i, j) is vertical from (i, j) to (i, j+1).
    """

    kind = "square-torus"

    def __init__(self, w, h):
        if w < 1 or h < 1:
            raise ConfigInvalid("torus dimensions must be positive")
        self.w = w
        self.h = h
        self.nsites = 2 * w * h

    def bond_index(self, orient, i, j):
        return 2 * ((j % self.h) * self.w + (i % self.w)) + orient

    def bond_coords(self, site):
        orient = site & 1
        cell = site >> 1
        return orient, cell % self.w, cell // self.w

    def vertex_index(self, i, j):
        return (j % self.h) * self.w + (i % self.w)

    def cell_bonds(self, i, j):
        """The 4 bonds of the square cell with lower-left vertex (i, j),
        counterclockwise from the bottom."""
        return (self.bond_index(0, i, j), self.bond_index(1, i + 1, j),
                self.bond_index(0, i, j + 1), self.bond_index(1, i, j))

    def vertex_bonds(self, i, j):
        """The 4 bonds incident to vertex (i, j), counterclockwise from
        the rightward one."""
        return (self.bond_index(0, i, j), self.bond_index(1, i, j),
                self.bond_index(0, i - 1, j), self.bond_index(1, i, j - 1))

    def cells(self):
        return [(i, j) for j in range(self.h) for i in range(self.w)]

    def vertices(self):
        return [(i, j) for j in range(self.h) for i in range(self.w)]

    def config(self, bits=0):
        return SpinConfig(self, bits)

    def all_plus(self):
        return SpinConfig(self, (1 << self.nsites) - 1)

    def staircase(self, offset=0):
        """Slope-1 staircase diagonal: |+> on one positively sloping
        staircase of bonds, |-> on the complement.  Requires w == h."""
        if self.w != self.h:
            raise ConfigInvalid("staircase needs a square torus")
        bits = 0
        for k in range(self.w):
            i = (k + offset) % self.w
            bits |= 1 << self.bond_index(0, i, k)
            bits |= 1 << self.bond_index(1, i + 1, k)
        return SpinConfig(self, bits)

    def swap_dual(self, config):
        """Global |+> <-> |-> interchange composed with the primal/dual
        lattice identification (half-unit diagonal shift).

        This is the symmetry of the bond model: boxes map to dual boxes
        and clusters trade places with dual clusters.
        """
        bits = 0
        for site in range(self.nsites):
            orient, i, j = self.bond_coords(site)
            if orient == 0:
                image = self.bond_index(1, i + 1, j)
            else:
                image = self.bond_index(0, i, j + 1)
            if not config.plus(site):
                bits |= 1 << image
        return SpinConfig(self, bits)

    # -- mid-lattice geometry -------------------------------------------
    def _midpoint(self, site):
        orient, i, j = self.bond_coords(site)
        if orient == 0:
            return (2 * i + 1, 2 * j)
        return (2 * i, 2 * j + 1)

    def _bond_at(self, x, y):
        """Bond whose midpoint is at half-unit coordinates (x, y)."""
        x %= 2 * self.w
        y %= 2 * self.h
        if x & 1:
            return self.bond_index(0, (x - 1) // 2, y // 2)
        return self.bond_index(1, x // 2, (y - 1) // 2)

    def _spin(self, config, x, y):
        return config.plus(self._bond_at(x, y))

    def _orient_at(self, x, y):
        return "h" if x & 1 else "v"

    def extract_walls(self, config):
        w, h = self.w, self.h
        plus_edges = bin(config.bits).count("1")
        minus_edges = self.nsites - plus_edges

        # clusters of |+> bonds on vertices, with universal-cover lifts
        edges, lifts = [], []
        for j in range(self.h):
            for i in range(self.w):
                if config.plus(self.bond_index(0, i, j)):
                    edges.append((self.vertex_index(i, j),
                                  self.vertex_index(i + 1, j)))
                    lifts.append((1, 0))
                if config.plus(self.bond_index(1, i, j)):
                    edges.append((self.vertex_index(i, j),
                                  self.vertex_index(i, j + 1)))
                    lifts.append((0, 1))
        clusters, wrap_c = _wrapping_components(w * h, edges, lifts)

        # dual clusters across |-> bonds; dual vertex of cell (i, j)
        # sits at (i + 1/2, j + 1/2); horizontal bond (i, j) separates
        # cells (i, j-1) and (i, j), vertical bond (i, j) separates
        # cells (i-1, j) and (i, j)
        def cell_idx(i, j):
            return (j % h) * w + (i % w)

        dedges, dlifts = [], []
        for j in range(self.h):
            for i in range(self.w):
                if not config.plus(self.bond_index(0, i, j)):
                    dedges.append((cell_idx(i, j - 1), cell_idx(i, j)))
                    dlifts.append((0, 1))
                if not config.plus(self.bond_index(1, i, j)):
                    dedges.append((cell_idx(i - 1, j), cell_idx(i, j)))
                    dlifts.append((1, 0))
        dual_clusters, wrap_d = _wrapping_components(w * h, dedges, dlifts)

        trivial, essential = self._trace_loops(config)
        return WallCensus(trivial, essential, clusters, dual_clusters,
                          plus_edges, minus_edges, wrap_c, wrap_d)

    def _trace_loops(self, config):
        """Trace every mid-lattice loop; return (trivial count, windings)."""
        visited = set()
        trivial = 0
        essential = []
        px, py = 2 * self.w, 2 * self.h
        for site in range(self.nsites):
            for port0 in (NE, NW, SW, SE):
                if (site, port0) in visited:
                    continue
                x, y = self._midpoint(site)
                cur, port_in = site, port0
                dx = dy = 0
                while True:
                    orient = "h" if self.bond_coords(cur)[0] == 0 else "v"
                    port_out = _PAIRING[(orient, config.plus(cur))][port_in]
                    visited.add((cur, port_in))
                    visited.add((cur, port_out))
                    sx, sy = _PORT_STEP[port_out]
                    x, y = x + sx, y + sy
                    dx, dy = dx + sx, dy + sy
                    cur = self._bond_at(x, y)
                    port_in = _OPPOSITE[port_out]
                    if cur == site and port_in == port0 and dx % px == 0 \
                            and dy % py == 0:
                        break
                wind = (dx // px, dy // py)
                if wind == (0, 0):
                    trivial += 1
                else:
                    essential.append(wind)
        return trivial, essential

    def local_moves(self, config, model="hprime"):
        """Admissible single-bond flips.

        Returns (site, kind, partner, dexp) where the partner amplitude
        relates to this one by a factor d**dexp in any zero mode: the
        configuration with the extra small loop carries the larger
        amplitude.
        """
        if model != "hprime":
            raise ConfigInvalid("square torus carries the bond model")
        moves = []
        for (i, j) in self.cells():
            bonds = self.cell_bonds(i, j)
            n_plus = sum(config.plus(b) for b in bonds)
            if n_plus == 4:
                # complete box: removing any bond erases the face loop
                for b in set(bonds):
                    moves.append((b, "box", config.flip(b), -1))
            elif n_plus == 3:
                b = next(b for b in bonds if not config.plus(b))
                moves.append((b, "box", config.flip(b), 1))
        for (i, j) in self.vertices():
            bonds = self.vertex_bonds(i, j)
            n_plus = sum(config.plus(b) for b in bonds)
            if n_plus == 0:
                for b in set(bonds):
                    moves.append((b, "dual-box", config.flip(b), -1))
            elif n_plus == 1:
                b = next(b for b in bonds if config.plus(b))
                moves.append((b, "dual-box", config.flip(b), 1))
        return moves

    def spec_dict(self):
        return {"kind": self.kind, "w": self.w, "h": self.h}


class SquareDiskLattice:
    """w x h cells of square lattice on a disk with fixed boundary spins.

    Vertices (i, j) with 0 <= i <= w, 0 <= j <= h.  Bonds on the outer
    rectangle perimeter are fixed to the boundary spin; the remaining
    bonds are the free sites.
    """

    kind = "square-disk"

    def __init__(self, w, h, boundary_plus=False):
        if w < 1 or h < 1:
            raise ConfigInvalid("disk dimensions must be positive")
        self.w = w
        self.h = h
        self.boundary_plus = boundary_plus
        self._free = []
        self._fixed = set()
        for j in range(h + 1):
            for i in range(w):
                if j in (0, h):
                    self._fixed.add(("h", i, j))
                else:
                    self._free.append(("h", i, j))
        for j in range(h):
            for i in range(w + 1):
                if i in (0, w):
                    self._fixed.add(("v", i, j))
                else:
                    self._free.append(("v", i, j))
        self._site_of = {b: k for k, b in enumerate(self._free)}
        self.nsites = len(self._free)

    def config(self, bits=0):
        return SpinConfig(self, bits)

    def bonds(self):
        return list(self._free) + sorted(self._fixed)

    def _bond_plus(self, config, bond):
        if bond in self._site_of:
            return config.plus(self._site_of[bond])
        if bond in self._fixed:
            return self.boundary_plus
        return False  # virtual bond outside the patch

    def _exists(self, bond):
        orient, i, j = bond
        if orient == "h":
            return 0 <= i < self.w and 0 <= j <= self.h
        return 0 <= i <= self.w and 0 <= j < self.h

    def extract_walls(self, config):
        w, h = self.w, self.h
        plus_edges = sum(self._bond_plus(config, b) for b in self.bonds())
        minus_edges = (len(self._free) + len(self._fixed)) - plus_edges

        # vertex clusters across |+> bonds (isolated vertices count)
        nv = (w + 1) * (h + 1)

        def vidx(i, j):
            return j * (w + 1) + i

        uf = _UnionFind(nv)
        for bond in self.bonds():
            if self._bond_plus(config, bond):
                orient, i, j = bond
                if orient == "h":
                    uf.union(vidx(i, j), vidx(i + 1, j))
                else:
                    uf.union(vidx(i, j), vidx(i, j + 1))
        clusters = uf.count()

        # dual clusters across |-> bonds; the outer face is one dual
        # vertex and its component is not counted
        outer = w * h

        def cidx(i, j):
            if 0 <= i < w and 0 <= j < h:
                return j * w + i
            return outer

        duf = _UnionFind(w * h + 1)
        for bond in self.bonds():
            if not self._bond_plus(config, bond):
                orient, i, j = bond
                if orient == "h":
                    duf.union(cidx(i, j - 1), cidx(i, j))
                else:
                    duf.union(cidx(i - 1, j), cidx(i, j))
        outer_root = duf.find(outer)
        roots = {duf.find(k) for k in range(w * h + 1)}
        dual_clusters = len(roots) - (1 if outer_root in roots else 0)

        trivial = self._trace_loops(config)
        return WallCensus(trivial, [], clusters, dual_clusters,
                          plus_edges, minus_edges)

    def _bond_at(self, x, y):
        if x & 1:
            return ("h", (x - 1) // 2, y // 2)
        return ("v", x // 2, (y - 1) // 2)

    def _trace_loops(self, config):
        """Count mid-lattice loops through at least one real bond.

        The patch sits in an all-|-> plane; loops may pass through
        nearby virtual bonds but are seeded only from real ones.
        """
        xmax, ymax = 2 * self.w + 8, 2 * self.h + 8
        visited = set()
        loops = 0
        for bond in self.bonds():
            orient, i, j = bond
            x0, y0 = (2 * i + 1, 2 * j) if orient == "h" else (2 * i, 2 * j + 1)
            for port0 in (NE, NW, SW, SE):
                if (x0, y0, port0) in visited:
                    continue
                x, y, port_in = x0, y0, port0
                while True:
                    bx = self._bond_at(x, y)
                    spin = self._bond_plus(config, bx)
                    o = bx[0]
                    port_out = _PAIRING[(o, spin)][port_in]
                    visited.add((x, y, port_in))
                    visited.add((x, y, port_out))
                    sx, sy = _PORT_STEP[port_out]
                    x, y = x + sx, y + sy
                    assert -8 <= x <= xmax and -8 <= y <= ymax, \
                        "mid-lattice trace escaped the patch region"
                    port_in = _OPPOSITE[port_out]
                    if (x, y, port_in) == (x0, y0, port0):
                        break
                loops += 1
        return loops

    def local_moves(self, config, model="hprime"):
        """Box and dual-box flips, excluding cells and vertices that
        meet the boundary."""
        if model != "hprime":
            raise ConfigInvalid("square disk carries the bond model")
        moves = []
        for j in range(1, self.h - 1):
            for i in range(1, self.w - 1):
                bonds = [("h", i, j), ("v", i + 1, j),
                         ("h", i, j + 1), ("v", i, j)]
                vals = [self._bond_plus(config, b) for b in bonds]
                free = [b for b in bonds if b in self._site_of]
                if sum(vals) == 4:
                    for b in free:
                        s = self._site_of[b]
                        moves.append((s, "box", config.flip(s), -1))
                elif sum(vals) == 3:
                    b = bonds[vals.index(False)]
                    if b in self._site_of:
                        s = self._site_of[b]
                        moves.append((s, "box", config.flip(s), 1))
        for j in range(2, self.h - 1):
            for i in range(2, self.w - 1):
                bonds = [("h", i, j), ("v", i, j),
                         ("h", i - 1, j), ("v", i, j - 1)]
                vals = [self._bond_plus(config, b) for b in bonds]
                free = [b for b in bonds if b in self._site_of]
                if sum(vals) == 0:
                    for b in free:
                        s = self._site_of[b]
                        moves.append((s, "dual-box", config.flip(s), -1))
                elif sum(vals) == 1:
                    b = bonds[vals.index(True)]
                    if b in self._site_of:
                        s = self._site_of[b]
                        moves.append((s, "dual-box", config.flip(s), 1))
        return moves

    def spec_dict(self):
        return {"kind": self.kind, "w": self.w, "h": self.h,
                "boundary": "+" if self.boundary_plus else "-"}


_TRI_NEIGHBORS = ((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1))


class HexTorusLattice:
    """Triangulated torus with spins on plaques (hexagonal dual cells).

    Sites are the w x h vertices of a periodic triangular lattice,
    each carrying one plaque spin; neighbors follow the six offsets
    of the triangular lattice.
    """

    kind = "hex-torus"

    def __init__(self, w, h):
        if w < 3 or h < 3:
            raise ConfigInvalid("hex torus needs w, h >= 3 for distinct "
                                "neighborhoods")
        self.w = w
        self.h = h
        self.nsites = w * h

    def site_index(self, i, j):
        return (j % self.h) * self.w + (i % self.w)

    def site_coords(self, site):
        return site % self.w, site // self.w

    def neighbors(self, site):
        i, j = self.site_coords(site)
        return [self.site_index(i + di, j + dj) for di, dj in _TRI_NEIGHBORS]

    def config(self, bits=0):
        return SpinConfig(self, bits)

    def local_moves(self, config, model="h0"):
        """Single-plaque flips of the plaque model.

        A g-move (isotopy, ratio 1) needs the wall to cross the plaque's
        hexagon in a single arc: the six neighbor spins form exactly one
        |+> run and one |-> run, and the center matches neither side
        completely.  An h-move (ratio d) needs the plaque and all its
        neighbors monochromatic; the flipped side gains a trivial loop.
        """
        if model != "h0":
            raise ConfigInvalid("hex torus carries the plaque model")
        moves = []
        for site in range(self.nsites):
            ring = [config.plus(n) for n in self.neighbors(site)]
            blocks = sum(1 for k in range(6) if ring[k] != ring[k - 1])
            if blocks == 0:
                if ring[0] == config.plus(site):
                    # flipping the center creates a loop around it
                    moves.append((site, "h", config.flip(site), 1))
                else:
                    # minority center: flipping erases its loop
                    moves.append((site, "h", config.flip(site), -1))
            elif blocks == 2:
                moves.append((site, "g", config.flip(site), 0))
        return moves

    def _triangles(self):
        """All (corner triple) triangles, two per lattice site."""
        tris = []
        for j in range(self.h):
            for i in range(self.w):
                tris.append(((i, j), (i + 1, j), (i + 1, j + 1)))
                tris.append(((i, j), (i, j + 1), (i + 1, j + 1)))
        return tris

    def extract_walls(self, config):
        """Domain-wall census of the plaque model.

        Wall segments are hexagon edges dual to triangular-lattice
        edges whose endpoint spins differ; every wall vertex has degree
        0 or 2, so the wall is a disjoint union of loops.
        """
        w, h = self.w, self.h

        def tri_idx(kind, i, j):
            return 2 * ((j % h) * w + (i % w)) + kind

        # wall edges connect the two triangles sharing a lattice edge;
        # centers in units of thirds keep the lifts integral
        def center(kind, i, j):
            if kind == 0:
                return (3 * i + 2, 3 * j + 1)
            return (3 * i + 1, 3 * j + 2)

        adj = [[] for _ in range(2 * w * h)]
        n_edges = 0
        for j in range(h):
            for i in range(w):
                a = config.plus(self.site_index(i, j))
                # edge to (i+1, j): triangles 0@(i,j) and 1@(i,j-1)
                if a != config.plus(self.site_index(i + 1, j)):
                    self._add_wall(adj, tri_idx(0, i, j), center(0, i, j),
                                   tri_idx(1, i, j - 1), center(1, i, j - 1))
                    n_edges += 1
                # edge to (i, j+1): triangles 1@(i,j) and 0@(i-1,j)
                if a != config.plus(self.site_index(i, j + 1)):
                    self._add_wall(adj, tri_idx(1, i, j), center(1, i, j),
                                   tri_idx(0, i - 1, j), center(0, i - 1, j))
                    n_edges += 1
                # edge to (i+1, j+1): triangles 0@(i,j) and 1@(i,j)
                if a != config.plus(self.site_index(i + 1, j + 1)):
                    self._add_wall(adj, tri_idx(0, i, j), center(0, i, j),
                                   tri_idx(1, i, j), center(1, i, j))
                    n_edges += 1

        trivial, essential = self._walk_wall_loops(adj)

        edges, lifts = [], []
        dedges, dlifts = [], []
        for j in range(h):
            for i in range(w):
                a = self.site_index(i, j)
                for di, dj in ((1, 0), (1, 1), (0, 1)):
                    b = self.site_index(i + di, j + dj)
                    if config.plus(a) and config.plus(b):
                        edges.append((a, b))
                        lifts.append((di, dj))
                    elif not config.plus(a) and not config.plus(b):
                        dedges.append((a, b))
                        dlifts.append((di, dj))
        n_plus = sum(config.plus(s) for s in range(self.nsites))
        plus_nodes = [s for s in range(self.nsites) if config.plus(s)]
        minus_nodes = [s for s in range(self.nsites) if not config.plus(s)]
        remap_p = {s: k for k, s in enumerate(plus_nodes)}
        remap_m = {s: k for k, s in enumerate(minus_nodes)}
        clusters, wrap_c = _wrapping_components(
            len(plus_nodes), [(remap_p[a], remap_p[b]) for a, b in edges],
            lifts)
        dual_clusters, wrap_d = _wrapping_components(
            len(minus_nodes), [(remap_m[a], remap_m[b]) for a, b in dedges],
            dlifts)
        return WallCensus(trivial, essential, clusters, dual_clusters,
                          len(edges), len(dedges), wrap_c, wrap_d)

    def _add_wall(self, adj, ta, ca, tb, cb):
        # lift: nearest representative of cb - ca modulo the periods
        pw, ph = 3 * self.w, 3 * self.h
        dx = (cb[0] - ca[0] + pw // 2) % pw - pw // 2
        dy = (cb[1] - ca[1] + ph // 2) % ph - ph // 2
        adj[ta].append((tb, dx, dy))
        adj[tb].append((ta, -dx, -dy))

    def _walk_wall_loops(self, adj):
        pw, ph = 3 * self.w, 3 * self.h
        trivial = 0
        essential = []
        seen = [False] * len(adj)
        for start in range(len(adj)):
            if seen[start] or not adj[start]:
                continue
            # walk the degree-2 cycle
            seen[start] = True
            prev = start
            cur, dx, dy = adj[start][0]
            while cur != start:
                seen[cur] = True
                nxt = [e for e in adj[cur] if e[0] != prev]
                if not nxt:  # two-node loop: come back along the other edge
                    nxt = [e for e in adj[cur] if e != (prev, -dx, -dy)]
                step = nxt[0]
                prev = cur
                cur = step[0]
                dx += step[1]
                dy += step[2]
            assert dx % pw == 0 and dy % ph == 0
            wind = (dx // pw, dy // ph)
            if wind == (0, 0):
                trivial += 1
            else:
                essential.append(wind)
        return trivial, essential

    def spec_dict(self):
        return {"kind": self.kind, "w": self.w, "h": self.h}


class ComponentGraph:
    """One ergodic component under the local moves of a model."""

    def __init__(self, lattice, model, configs, edges, consistent, potentials):
        self.lattice = lattice
        self.model = model
        self.configs = configs          # canonical (sorted by bits)
        self.edges = edges              # (idx_a, idx_b, dexp, kind, site)
        self.consistent = consistent
        self.potentials = potentials    # d-exponent per config, or None

    @property
    def size(self):
        return len(self.configs)

    def index_of(self, config):
        lo, hi = 0, len(self.configs)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.configs[mid].bits < config.bits:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(self.configs) and self.configs[lo].bits == config.bits:
            return lo
        raise KeyError("configuration not in component")


def explore_component(seed, model=None, cap=COMPONENT_CAP):
    """BFS closure of a configuration under the admissible local moves.

    Edge weights are d-exponents; the component is ratio-consistent
    when the exponents are the gradient of a potential (every cycle
    multiplies to one).
    """
    lat = seed.lattice
    if model is None:
        model = "h0" if lat.kind == "hex-torus" else "hprime"
    seen = {seed.bits: 0}
    order = [seed]
    raw_edges = []
    queue = deque([seed])
    while queue:
        cur = queue.popleft()
        for site, kind, partner, dexp in lat.local_moves(cur, model):
            if partner.bits not in seen:
                if len(seen) >= cap:
                    raise ComponentCapExceeded(
                        "component exceeds %d states" % cap)
                seen[partner.bits] = len(order)
                order.append(partner)
                queue.append(partner)
            raw_edges.append((seen[cur.bits], seen[partner.bits],
                              dexp, kind, site))

    # canonical ordering by bits
    perm = sorted(range(len(order)), key=lambda k: order[k].bits)
    rank = [0] * len(order)
    for new, old in enumerate(perm):
        rank[old] = new
    configs = [order[old] for old in perm]
    edges = sorted((rank[a], rank[b], dexp, kind, site)
                   for a, b, dexp, kind, site in raw_edges)

    # ratio-consistency: propagate d-exponent potentials
    pot = [None] * len(configs)
    adj = [[] for _ in range(len(configs))]
    for a, b, dexp, _, _ in edges:
        adj[a].append((b, dexp))
        adj[b].append((a, -dexp))
    consistent = True
    pot[0] = 0
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v, dexp in adj[u]:
            if pot[v] is None:
                pot[v] = pot[u] + dexp
                queue.append(v)
            elif pot[v] != pot[u] + dexp:
                consistent = False
    return ComponentGraph(lat, model, configs, edges, consistent,
                          pot if consistent else None)


def lattice_from_spec(spec):
    """Build a lattice from a JSON-style spec dict (or JSON text)."""
    if isinstance(spec, str):
        spec = json.loads(spec)
    kind = spec.get("kind")
    if kind == "square-torus":
        return SquareTorusLattice(spec["w"], spec["h"])
    if kind == "hex-torus":
        return HexTorusLattice(spec["w"], spec["h"])
    if kind == "square-disk":
        return SquareDiskLattice(spec["w"], spec["h"],
                                 spec.get("boundary", "-") == "+")
    raise ConfigInvalid("unknown lattice kind %r" % kind)


def extract_walls(config):
    return config.lattice.extract_walls(config)


def local_moves(config, model=None):
    lat = config.lattice
    if model is None:
        model = "h0" if lat.kind == "hex-torus" else "hprime"
    return lat.local_moves(config, model)
