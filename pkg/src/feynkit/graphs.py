"""Matchings of flower half-edges, multigraphs with labeled legs, canonical
forms, automorphism orders, bridges and skeleton trees.

Half-edge layout for a profile: the ``N`` external legs come first (one
half-edge each, vertices ``0..N-1``), then the internal flowers in the order
of ``profile.kinds``, each flower owning a consecutive block of half-edges.
A vertex *kind* is a pair ``(valency, tag)``; automorphisms may only permute
internal vertices of the same kind and never move a leg.
"""
from collections import Counter
from fractions import Fraction
from itertools import permutations, product
from math import factorial, prod

from .series import double_factorial


class Profile:
    """Flower content: internal vertex kinds plus N labeled legs."""

    def __init__(self, kinds=(), legs=0):
        if isinstance(kinds, dict):
            flat = []
            for key in sorted(kinds, key=_kind_key):
                kind = key if isinstance(key, tuple) else (key, key)
                flat.extend([kind] * kinds[key])
            kinds = flat
        self.kinds = tuple(sorted((k if isinstance(k, tuple) else (k, k) for k in kinds), key=_kind_key))
        self.legs = legs

    @property
    def valencies(self):
        return [k[0] for k in self.kinds]

    def half_edges(self):
        return self.legs + sum(self.valencies)

    def vertex_of(self):
        """Vertex index for every half-edge."""
        owner = list(range(self.legs))
        for i, v in enumerate(self.valencies):
            owner.extend([self.legs + i] * v)
        return owner

    def degrees(self):
        return [1] * self.legs + self.valencies

    def counts(self):
        return Counter(self.kinds)

    def symmetry(self):
        """prod over kinds of i!^{n_i} n_i!; the size of the flower relabeling group."""
        out = 1
        for (val, _), n in self.counts().items():
            out *= factorial(val) ** n * factorial(n)
        return out

    def __repr__(self):
        return "Profile(%r, legs=%d)" % (self.kinds, self.legs)


def _kind_key(k):
    if isinstance(k, tuple):
        return (k[0], str(k[1]))
    return (k, str(k))


def enumerate_matchings(n):
    """All fixed-point-free involutions of range(n), as partner tuples.

    The smallest unpaired index is paired with each larger free index in
    increasing order.  Odd n yields nothing.
    """
    if n % 2:
        return
    partner = [-1] * n

    def rec(start):
        i = start
        while i < n and partner[i] >= 0:
            i += 1
        if i == n:
            yield tuple(partner)
            return
        for j in range(i + 1, n):
            if partner[j] < 0:
                partner[i] = j
                partner[j] = i
                yield from rec(i + 1)
                partner[i] = -1
                partner[j] = -1

    yield from rec(0)


def matching_count(n):
    return 0 if n % 2 else double_factorial(n - 1)


class Multigraph:
    """Vertices 0..N-1 are legs, N..N+V-1 are internal vertices of the given kinds."""

    def __init__(self, kinds, legs, edges):
        self.kinds = tuple(kinds)
        self.legs = legs
        self.edges = tuple(sorted((min(a, b), max(a, b)) for a, b in edges))
        self._cert = None
        self._aut = None

    @property
    def nvertices(self):
        return self.legs + len(self.kinds)

    def internal(self):
        return range(self.legs, self.nvertices)

    def degree(self):
        deg = [0] * self.nvertices
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def check(self):
        deg = self.degree()
        for i in range(self.legs):
            if deg[i] != 1:
                raise ValueError("leg %d has degree %d" % (i, deg[i]))
        for i, k in enumerate(self.kinds):
            if deg[self.legs + i] != k[0]:
                raise ValueError("vertex %d has degree %d, expected %d" % (i, deg[self.legs + i], k[0]))
        return True

    def loop_number(self):
        """b = #edges - #internal vertices."""
        return len(self.edges) - len(self.kinds)

    def multiplicities(self):
        return Counter(self.edges)

    def loops(self):
        return Counter(a for a, b in self.edges if a == b)

    def profile(self):
        return Profile(self.kinds, self.legs)

    # canonical form and automorphisms
    def _colors(self):
        n = self.nvertices
        adj = [Counter() for _ in range(n)]
        for a, b in self.edges:
            adj[a][b] += 1
            if a != b:
                adj[b][a] += 1
        init = [(0, i, "") for i in range(self.legs)]
        init += [(1, 0, repr(_kind_key(k))) for k in self.kinds]
        color = _compress(init)
        while True:
            sig = [(color[v], tuple(sorted((color[u], m) for u, m in adj[v].items())))
                   for v in range(n)]
            new = _compress(sig)
            if len(set(new)) == len(set(color)):
                return new, adj
            color = new

    def _search(self):
        color, adj = self._colors()
        cells = {}
        for v in self.internal():
            cells.setdefault(color[v], []).append(v)
        order = [cells[c] for c in sorted(cells)]
        best = None
        count = 0
        for choice in product(*[permutations(c) for c in order]):
            new = list(range(self.legs))
            seq = [v for cell in choice for v in cell]
            relabel = {v: i for i, v in enumerate(new)}
            for i, v in enumerate(seq):
                relabel[v] = self.legs + i
            form = tuple(sorted((min(relabel[a], relabel[b]), max(relabel[a], relabel[b]))
                                for a, b in self.edges))
            if best is None or form < best[0]:
                best = (form, seq)
                count = 1
            elif form == best[0]:
                count += 1
        if best is None:
            best = (tuple(self.edges), [])
            count = 1
        kinds = tuple(self.kinds[v - self.legs] for v in best[1])
        return (self.legs, kinds, best[0]), count

    def certificate(self):
        if self._cert is None:
            self._cert, vaut = self._search()
            self._aut = vaut
        return self._cert

    def vertex_automorphisms(self):
        self.certificate()
        return self._aut

    def aut_order(self):
        """|Aut| counting half-edge symmetries: vertex maps, parallel-edge swaps, loop flips."""
        out = self.vertex_automorphisms()
        for (a, b), m in self.multiplicities().items():
            if a == b:
                out *= 2 ** m * factorial(m)
            else:
                out *= factorial(m)
        return out

    def canonical(self):
        legs, kinds, edges = self.certificate()
        return Multigraph(kinds, legs, edges)

    def to_text(self):
        legs, kinds, edges = self.certificate()
        ks = ",".join("%s:%s" % k for k in kinds)
        es = " ".join("%d-%d" % e for e in edges)
        return "legs=%d kinds=[%s] edges=[%s]" % (legs, ks, es)

    def __eq__(self, other):
        return isinstance(other, Multigraph) and self.certificate() == other.certificate()

    def __hash__(self):
        return hash(self.certificate())

    def __repr__(self):
        return "Multigraph(%r, legs=%d, edges=%r)" % (self.kinds, self.legs, self.edges)

    # connectivity
    def components(self):
        parent = list(range(self.nvertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        comps = {}
        for v in range(self.nvertices):
            comps.setdefault(find(v), []).append(v)
        return sorted(comps.values())

    def is_connected(self):
        return len(self.components()) <= 1

    def internal_edges(self):
        return [e for e in self.edges if e[0] >= self.legs and e[1] >= self.legs]

    def bridges(self):
        """Bridges of the amputated graph (legs removed), by low-link search."""
        edges = self.internal_edges()
        nbrs = {v: [] for v in self.internal()}
        for idx, (a, b) in enumerate(edges):
            if a == b:
                continue
            nbrs[a].append((b, idx))
            nbrs[b].append((a, idx))
        disc, low = {}, {}
        out = []
        timer = [0]
        for root in self.internal():
            if root in disc:
                continue
            stack = [(root, -1, iter(nbrs[root]))]
            disc[root] = low[root] = timer[0]
            timer[0] += 1
            while stack:
                v, pe, it = stack[-1]
                advanced = False
                for u, idx in it:
                    if idx == pe:
                        continue
                    if u in disc:
                        low[v] = min(low[v], disc[u])
                    else:
                        disc[u] = low[u] = timer[0]
                        timer[0] += 1
                        stack.append((u, idx, iter(nbrs[u])))
                        advanced = True
                        break
                if not advanced:
                    stack.pop()
                    if stack:
                        p = stack[-1][0]
                        low[p] = min(low[p], low[v])
                        if low[v] > disc[p]:
                            out.append(edges[pe])
        return sorted(out)

    def is_1pi(self):
        if not self.kinds:
            return False
        amputated = Multigraph(self.kinds, 0, [(a - self.legs, b - self.legs) for a, b in self.internal_edges()])
        return amputated.is_connected() and self.is_connected() and not self.bridges()

    def structure(self):
        return {"connected": self.is_connected(), "bridges": self.bridges(),
                "is_1PI": self.is_1pi(), "skeleton": skeleton(self)}


def _compress(sig):
    ranks = {s: i for i, s in enumerate(sorted(set(sig)))}
    return [ranks[s] for s in sig]


class SkeletonTree:
    """Nodes are vertex sets of 1PI pieces; tree edges are the bridges."""

    def __init__(self, graph, nodes, tree_edges):
        self.graph = graph
        self.nodes = nodes
        self.tree_edges = tree_edges

    def pieces(self):
        """Each piece as a Multigraph, bridge ends and original legs becoming its legs."""
        g = self.graph
        out = []
        bridges = [e for _, _, e in self.tree_edges]
        for node in self.nodes:
            verts = sorted(node)
            legs = []
            for a, b in g.edges:
                if a < g.legs and b in node:
                    legs.append(b)
                elif b < g.legs and a in node:
                    legs.append(a)
            for a, b in bridges:
                if a in node:
                    legs.append(a)
                if b in node:
                    legs.append(b)
            nl = len(legs)
            index = {v: nl + i for i, v in enumerate(verts)}
            edges = [(i, index[v]) for i, v in enumerate(legs)]
            edges += [(index[a], index[b]) for a, b in g.internal_edges()
                      if a in node and b in node and (a, b) not in bridges]
            # parallel copies of a bridge cannot occur, so only exact bridges are skipped
            out.append(Multigraph([g.kinds[v - g.legs] for v in verts], nl, edges))
        return out

    def reassemble(self):
        g = self.graph
        edges = [e for e in g.edges if e[0] < g.legs or e[1] < g.legs]
        bridges = [e for _, _, e in self.tree_edges]
        for node in self.nodes:
            edges += [(a, b) for a, b in g.internal_edges() if a in node and b in node]
        edges += bridges
        return Multigraph(g.kinds, g.legs, edges)

    def is_tree(self):
        return len(self.tree_edges) == len(self.nodes) - 1


def skeleton(g):
    bridges = g.bridges()
    bset = Counter(bridges)
    parent = {v: v for v in g.internal()}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in g.internal_edges():
        if bset[(a, b)]:
            continue
        parent[find(a)] = find(b)
    groups = {}
    for v in g.internal():
        groups.setdefault(find(v), set()).add(v)
    nodes = sorted(groups.values(), key=min)
    where = {v: i for i, node in enumerate(nodes) for v in node}
    tree_edges = [(where[a], where[b], (a, b)) for a, b in bridges]
    return SkeletonTree(g, nodes, tree_edges)


def graph_of(matching, profile):
    owner = profile.vertex_of()
    edges = [(owner[h], owner[p]) for h, p in enumerate(matching) if h < p]
    return Multigraph(profile.kinds, profile.legs, edges)


def matchings_by_class(profile):
    """Raw enumeration: certificate -> (representative graph, number of matchings)."""
    out = {}
    for m in enumerate_matchings(profile.half_edges()):
        g = graph_of(m, profile)
        key = g.certificate()
        if key in out:
            out[key][1] += 1
        else:
            out[key] = [g, 1]
    return out


def labeled_graph_counts(profile, connected=False, max_excess=None):
    """Labeled multigraphs on the profile's vertices, each with the number of
    half-edge matchings producing it.

    Vertices are processed in order; the remaining half-edges of the current
    vertex are split into self-loops and edges to later vertices, and the
    number of matchings realising that split is accumulated exactly.
    connected=True drops disconnected graphs early; max_excess bounds the
    number of edges closing a cycle (E - V + #components).
    """
    deg = profile.degrees()
    n = len(deg)
    out = Counter()

    def rec(u, rem, edges, weight, comp, excess):
        while u < n and rem[u] == 0:
            u += 1
        if u == n:
            out[tuple(edges)] += weight
            return
        r = rem[u]
        rem[u] = 0
        later = [v for v in range(u + 1, n) if rem[v] > 0]

        def split(i, left, picks):
            if i == len(later):
                if left % 2:
                    return
                s = left // 2
                extra = s
                c2 = list(comp)
                for v, c in picks:
                    if c2[v] == c2[u]:
                        extra += c
                    else:
                        old = c2[v]
                        c2 = [c2[u] if x == old else x for x in c2]
                        extra += c - 1
                if max_excess is not None and excess + extra > max_excess:
                    return
                for v, c in picks:
                    rem[v] -= c
                if connected and n > 1:
                    # u is now saturated: its component must still have open half-edges
                    members = [x for x in range(n) if c2[x] == c2[u]]
                    if len(members) < n and all(rem[x] == 0 for x in members):
                        for v, c in picks:
                            rem[v] += c
                        return
                # r!/(2^s s! prod c!) ways to split u's half-edges, then ordered picks at v
                w = factorial(r) // (2 ** s * factorial(s) * prod(factorial(c) for _, c in picks))
                new = list(edges) + [(u, u)] * s
                for v, c in picks:
                    new += [(u, v)] * c
                    w *= factorial(rem[v] + c) // factorial(rem[v])
                rec(u + 1, rem, sorted(new), w * weight, c2, excess + extra)
                for v, c in picks:
                    rem[v] += c
                return
            v = later[i]
            for c in range(0, min(left, rem[v]) + 1):
                split(i + 1, left - c, picks + [(v, c)] if c else picks)

        split(0, r, [])
        rem[u] = r

    if connected and n > 1 and 0 in deg:
        return out
    rec(0, list(deg), [], 1, list(range(n)), 0)
    return out


def enumerate_multigraphs(profile):
    """Isomorphism classes for a profile: certificate -> representative.

    Built from symmetric adjacency tables with the prescribed degrees, which is
    independent of the matching bookkeeping in labeled_graph_counts.
    """
    deg = profile.degrees()
    n = len(deg)
    seen = {}
    cells = [(i, j) for i in range(n) for j in range(i, n)]

    def rec(idx, rem, edges):
        if idx == len(cells):
            if all(r == 0 for r in rem):
                g = Multigraph(profile.kinds, profile.legs, edges)
                seen.setdefault(g.certificate(), g)
            return
        i, j = cells[idx]
        if j == i:
            # all entries of row i with column < i are fixed by now; diagonal takes 2 per loop
            top = rem[i] // 2
            for m in range(top, -1, -1):
                rem[i] -= 2 * m
                rec(idx + 1, rem, edges + [(i, i)] * m)
                rem[i] += 2 * m
        else:
            top = min(rem[i], rem[j])
            last_in_row = j == n - 1
            for m in range(top, -1, -1):
                if last_in_row and rem[i] - m != 0:
                    continue
                rem[i] -= m
                rem[j] -= m
                rec(idx + 1, rem, edges + [(i, j)] * m)
                rem[i] += m
                rem[j] += m

    rec(0, list(deg), [])
    return seen


def orbit_size(g):
    """Number of matchings whose graph is isomorphic to g (orbit-stabilizer)."""
    return Fraction(g.profile().symmetry(), g.aut_order())


def degree_sequences(n, total):
    """Non-increasing sequences of n non-negative integers with the given sum."""
    def rec(k, left, cap):
        if k == 0:
            if left == 0:
                yield ()
            return
        for d in range(min(left, cap), -1, -1):
            for rest in rec(k - 1, left - d, d):
                yield (d,) + rest
    yield from rec(n, total, total)


def graphs_with(n, k):
    """All isomorphism classes with n unlabeled vertices and k edges."""
    out = []
    for seq in degree_sequences(n, 2 * k):
        out.extend(enumerate_multigraphs(Profile(list(seq))).values())
    return out


def weighted_graph_count(n, k):
    """Sum over isomorphism classes with n vertices and k edges of 1/|Aut|."""
    return sum((Fraction(1, g.aut_order()) for g in graphs_with(n, k)), Fraction(0))


def weighted_graph_count_formula(n, k):
    if n == 0:
        return Fraction(1 if k == 0 else 0)
    return Fraction(n ** (2 * k), 2 ** k * factorial(k) * factorial(n))
