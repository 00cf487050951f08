"""Stable labeled graphs and the two graph sums.

One set of graphs (genus and fixed-point marking per vertex, heights on all
half-edges, ordered ordinary leaves, unordered dilaton leaves of height >= 2)
feeds both generating functions: the open descendant side with
square-root-discriminant vertex factors, R-matrix edges and dilatons, and
S-matrix open leaves; and the recursion side with the printed prefactor,
h-coefficient vertex factors, Bergman-type edges and the expanded leaves.
Both sums use the psi-intersection numbers as vertex integrals.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from math import factorial

from .amodel import disk_factor
from .bmodel import BranchData
from .frobenius import FrobeniusData
from .hx import HXEngine
from .intersect import psi_number
from .rings import NF_I, NF_ONE, NF_SQRT2, NF_SQRT_M2, NField, Q, nf_s
from .series import QSeries, TSeries, double_factorial, known_zero
from .xlaurent import XLaurent, tensor


@dataclass(frozen=True)
class StableGraph:
    """Vertices carry (genus, marking); edges carry end heights; ordinary
    leaves are ordered (vertex, height) pairs; dilaton leaves unordered."""

    genera: tuple[int, ...]
    markings: tuple[int, ...]
    edges: tuple[tuple[int, int, int, int], ...]  # (u, v, k_u, k_v), u <= v
    leaves: tuple[tuple[int, int], ...]           # ordered: (vertex, height)
    dilatons: tuple[tuple[int, int], ...]         # sorted: (vertex, height)

    def encode(self, perm: tuple[int, ...]):
        nv = len(self.genera)
        inv = [0] * nv
        for old, new in enumerate(perm):
            inv[new] = old
        genera = tuple(self.genera[inv[v]] for v in range(nv))
        markings = tuple(self.markings[inv[v]] for v in range(nv))
        edges = []
        for u, v, ku, kv in self.edges:
            nu, nv2 = perm[u], perm[v]
            if (nu, ku) <= (nv2, kv):
                edges.append((nu, nv2, ku, kv) if nu <= nv2 else (nv2, nu, kv, ku))
            else:
                edges.append((nv2, nu, kv, ku) if nv2 <= nu else (nu, nv2, ku, kv))
        leaves = tuple((perm[v], k) for v, k in self.leaves)
        dils = tuple(sorted((perm[v], k) for v, k in self.dilatons))
        return (genera, markings, tuple(sorted(edges)), leaves, dils)


def _canonical_edge(u, v, ku, kv):
    if (u, ku) <= (v, kv):
        return (u, v, ku, kv)
    return (v, u, kv, ku)


def stable_graph_aut(graph: StableGraph) -> int:
    """Order of the automorphism group: decoration-preserving vertex
    permutations times edge/dilaton multiplicity factors and loop flips."""
    nv = len(graph.genera)
    base = graph.encode(tuple(range(nv)))
    nperm = sum(1 for p in permutations(range(nv)) if graph.encode(p) == base)
    mult: dict[tuple, int] = {}
    loops_sym = 1
    for e in graph.edges:
        mult[e] = mult.get(e, 0) + 1
        u, v, ku, kv = e
        if u == v and ku == kv:
            loops_sym *= 2
    factor = 1
    for m in mult.values():
        factor *= factorial(m)
    dmult: dict[tuple, int] = {}
    for d in graph.dilatons:
        dmult[d] = dmult.get(d, 0) + 1
    for m in dmult.values():
        factor *= factorial(m)
    return nperm * factor * loops_sym


def _connected(nv: int, pairs) -> bool:
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    return len({find(v) for v in range(nv)}) == 1


def _multisets(items: list, size: int):
    if size == 0:
        yield ()
        return
    for i, item in enumerate(items):
        for rest in _multisets(items[i:], size - 1):
            yield (item,) + rest


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _dilaton_heights(budget: int, count: int):
    """Nondecreasing height tuples of length `count`, entries >= 2, sum = budget."""
    def rec(remaining, count, minimum):
        if count == 0:
            if remaining == 0:
                yield ()
            return
        for k in range(minimum, remaining - 2 * (count - 1) + 1):
            for rest in rec(remaining - k, count - 1, k):
                yield (k,) + rest

    yield from rec(budget, count, 2)


def enumerate_stable(g: int, n: int, enforce_budget: bool = True):
    """All stable labeled graphs of genus g with n ordered leaves, with |Aut|.

    With `enforce_budget` every vertex satisfies sum of heights equal to
    3 g_v - 3 + val(v); graphs violating it carry weight zero and are skipped.
    """
    if 2 * g - 2 + n <= 0:
        raise ValueError(f"unstable pair (g, n) = ({g}, {n})")
    seen = set()
    out = []
    max_nv = 2 * g - 2 + n
    for nv in range(1, max_nv + 1):
        pair_choices = [(u, v) for u in range(nv) for v in range(u, nv)]
        for ne in range(nv - 1, g + nv):
            b1 = ne - nv + 1
            if b1 < 0 or b1 > g:
                continue
            gsum = g - b1
            for bare_edges in _multisets(pair_choices, ne):
                if not _connected(nv, bare_edges):
                    continue
                for genera in _compositions(gsum, nv):
                    for markings in product((1, 2), repeat=nv):
                        for leaf_vs in product(range(nv), repeat=n):
                            val0 = [0] * nv
                            for u, v in bare_edges:
                                val0[u] += 1
                                val0[v] += 1
                            for lv in leaf_vs:
                                val0[lv] += 1
                            # dilaton counts per vertex, bounded by the budget
                            dil_ranges = []
                            ok = True
                            for v in range(nv):
                                budget = 3 * genera[v] - 3 + val0[v]
                                top = max(0, budget) if enforce_budget else max(0, budget)
                                dil_ranges.append(range(0, top + 1))
                            if not ok:
                                continue
                            for dil_counts in product(*dil_ranges):
                                vals = [val0[v] + dil_counts[v] for v in range(nv)]
                                if any(2 * genera[v] - 2 + vals[v] <= 0
                                       for v in range(nv)):
                                    continue
                                budgets = [3 * genera[v] - 3 + vals[v]
                                           for v in range(nv)]
                                if any(b < 2 * dil_counts[v]
                                       for v, b in enumerate(budgets)):
                                    continue
                                yield from _assign_heights(
                                    g, n, nv, genera, markings, bare_edges,
                                    leaf_vs, dil_counts, budgets, seen, enforce_budget)


def _assign_heights(g, n, nv, genera, markings, bare_edges, leaf_vs, dil_counts,
                    budgets, seen, enforce_budget):
    # heights on edge ends and leaves per vertex; track slots by vertex
    edge_slots = []  # (edge index, side)
    for i, (u, v) in enumerate(bare_edges):
        edge_slots.append((i, 0, u))
        edge_slots.append((i, 1, v))
    slot_by_vertex = [[] for _ in range(nv)]
    for si, (_, _, v) in enumerate(edge_slots):
        slot_by_vertex[v].append(("e", si))
    for j, lv in enumerate(leaf_vs):
        slot_by_vertex[lv].append(("l", j))

    per_vertex_options = []
    for v in range(nv):
        opts = []
        nslots = len(slot_by_vertex[v])
        for dil_heights in _dilaton_heights(
                budgets[v] - 0, dil_counts[v]) if dil_counts[v] else [()]:
            rest = budgets[v] - sum(dil_heights)
            if rest < 0:
                continue
            for comp in _compositions(rest, nslots):
                opts.append((comp, dil_heights))
        per_vertex_options.append(opts)

    for choice in product(*per_vertex_options):
        edge_heights = {}
        leaf_heights = {}
        dilatons = []
        for v in range(nv):
            comp, dil_heights = choice[v]
            for (kind, idx), k in zip(slot_by_vertex[v], comp):
                if kind == "e":
                    edge_heights[idx] = k
                else:
                    leaf_heights[idx] = k
            for k in dil_heights:
                dilatons.append((v, k))
        edges = []
        for i, (u, v) in enumerate(bare_edges):
            ku = edge_heights[2 * i]
            kv = edge_heights[2 * i + 1]
            edges.append(_canonical_edge(u, v, ku, kv))
        graph = StableGraph(tuple(genera), tuple(markings), tuple(sorted(edges)),
                            tuple((leaf_vs[j], leaf_heights[j]) for j in range(n)),
                            tuple(sorted(dilatons)))
        canon = min(graph.encode(p) for p in permutations(range(nv)))
        if canon in seen:
            continue
        seen.add(canon)
        yield graph, stable_graph_aut(graph)


# ---------------------------------------------------------------------------
# Weights
# ---------------------------------------------------------------------------


class GraphSum:
    """Weight tables shared by the two graph sums, built on one R-matrix."""

    def __init__(self, frob: FrobeniusData, branch: BranchData, engine: HXEngine):
        self.frob = frob
        self.branch = branch
        self.engine = engine
        self.prec = min(frob.prec, branch.prec, engine.prec)
        self.s = nf_s()

    # -- R-matrix edge and dilaton weights -----------------------------------
    @lru_cache(maxsize=None)
    def _edge_table(self, alpha: int, beta: int) -> dict[tuple[int, int], QSeries]:
        """E^{alpha,beta}_{k,l} = [z^k w^l] (delta - sum R(-z) R(-w)) / (z + w)."""
        r = self.branch.r_matrix_entry
        zord = r(1, 1).order
        # numerator coefficients N[a][b]
        N: dict[tuple[int, int], QSeries] = {}
        for a in range(zord):
            for b in range(zord):
                acc = QSeries.zero(self.prec)
                for gamma in (1, 2):
                    ra = r(gamma, alpha).c.get(a)
                    rb = r(gamma, beta).c.get(b)
                    if ra is None or rb is None:
                        continue
                    sign = -1 if (a + b) % 2 else 1
                    acc = acc + (ra * rb).scale(NField.from_int(sign))
                val = -acc
                if a == 0 and b == 0 and alpha == beta:
                    val = val + QSeries.one()
                N[(a, b)] = val
        # divide by (z + w): N_{a,b} = E_{a-1,b} + E_{a,b-1}
        E: dict[tuple[int, int], QSeries] = {}
        for b in range(zord - 1):
            for a in range(zord - 1 - b):
                prev = E.get((a + 1, b - 1), QSeries.zero(None)) if b > 0 \
                    else QSeries.zero(None)
                E[(a, b)] = N[(a + 1, b)] - prev
        # divisibility check: reconstruct N on the known range
        for a in range(zord - 1):
            for b in range(1, zord - 1 - a):
                lhs = E.get((a - 1, b), QSeries.zero(None)) if a > 0 \
                    else QSeries.zero(None)
                resid = N[(a, b)] - lhs - E.get((a, b - 1), QSeries.zero(None))
                if not resid.is_zero_known():
                    raise ArithmeticError(
                        "edge numerator not divisible by z+w (R-matrix defect)")
        return E

    def edge_weight(self, alpha: int, beta: int, k: int, l: int) -> QSeries:
        table = self._edge_table(alpha, beta)
        if (k, l) not in table:
            raise ValueError(f"edge heights ({k},{l}) beyond R-matrix order")
        return table[(k, l)]

    def edge_weight_bergman(self, alpha: int, beta: int, k: int, l: int) -> QSeries:
        """The same edge weight from the Bergman expansion:
        (2k-1)!!(2l-1)!!/2^(k+l+1) B_{2k,2l}."""
        b = self.branch.bergman_coefficient(alpha, beta, 2 * k, 2 * l)
        pref = NField.from_rational(
            Q(double_factorial(2 * k - 1) * double_factorial(2 * l - 1),
              2 ** (k + l + 1)))
        return b.scale(pref)

    def dilaton_A(self, beta: int, k: int) -> QSeries:
        """[z^(k-1)] of -sum_alpha R_alpha^beta(-z)/sqrt(Delta^alpha), k >= 2."""
        if k < 2:
            raise ValueError("dilaton height must be at least 2")
        acc = QSeries.zero(self.prec)
        sign = -1 if (k - 1) % 2 else 1
        for alpha in (1, 2):
            c = self.branch.r_matrix_entry(alpha, beta).c.get(k - 1)
            if c is None:
                continue
            acc = acc + (c * self.frob.inv_sqrt_delta[alpha]).scale(
                NField.from_int(sign))
        return -acc

    def dilaton_B(self, beta: int, k: int) -> QSeries:
        """(-1/sqrt(-2)) h-check^beta_k with
        h-check^beta_k = -2 (2k-1)!! h^beta_{2k-1} / i^(2k-1)."""
        if k < 2:
            raise ValueError("dilaton height must be at least 2")
        h = self.branch.h_coeffs(beta).get(2 * k - 1, QSeries.zero(self.prec))
        hcheck = h.scale(NField.from_int(-2 * double_factorial(2 * k - 1))
                         * NF_I ** (-(2 * k - 1)))
        return hcheck.scale(-(NF_SQRT_M2.inverse()))

    # -- open leaves -----------------------------------------------------------
    @lru_cache(maxsize=None)
    def open_leaf_A(self, beta: int, k: int) -> tuple:
        """A-side open leaf at height k: winding table ((mu, coeff), ...).

        [z^k] of (sum_alpha xi-leaf(z, X) S(phi-hat_gamma, phi_alpha))_+ R(-z).
        """
        out: dict[int, QSeries] = {}
        r = self.branch.r_matrix_entry
        for mu in self.engine._windings():
            alpha = 2 if mu > 0 else 1
            dfac = disk_factor(alpha, abs(mu))
            acc = QSeries.zero(self.prec)
            for gamma in (1, 2):
                tval = self.frob.t_eval(gamma, mu)
                rser = r(gamma, beta)
                for i in range(0, k + 1):
                    rc = rser.c.get(k - i)
                    if rc is None:
                        continue
                    sign = -1 if (k - i) % 2 else 1
                    geo = (NField.from_int(mu) / self.s) ** (i + 2)
                    acc = acc + (tval * rc).scale(geo * dfac * sign)
            if not acc.is_zero_known():
                out[mu] = acc
        return tuple(sorted(out.items()))

    @lru_cache(maxsize=None)
    def open_leaf_B(self, beta: int, k: int) -> tuple:
        """B-side open leaf: (1/sqrt(-2)) times the winding expansion of
        dxi_{beta,k}."""
        pref = NF_SQRT_M2.inverse()
        table = self.engine.hx_dxi(beta, k)
        return tuple(sorted((mu, v.scale(pref)) for mu, v in table.items()))

    # -- vertex factors ----------------------------------------------------------
    def vertex_factor_A(self, genus: int, marking: int, valence: int) -> QSeries:
        power = 2 * genus - 2 + valence
        sd = self.frob.sqrt_delta[marking]
        if power >= 0:
            return sd ** power
        return sd.inverse(prec=self.prec) ** (-power)

    def vertex_factor_B(self, genus: int, marking: int, valence: int) -> QSeries:
        power = 2 - 2 * genus - valence
        base = self.branch.h1[marking].scale(NF_SQRT2.inverse())  # h_1 / sqrt(2)
        if power >= 0:
            return base ** power
        return base.inverse(prec=self.prec) ** (-power)

    # -- assembly ------------------------------------------------------------------
    def assemble(self, g: int, n: int, side: str,
                 enforce_budget: bool = True) -> XLaurent:
        """Graph-sum generating function; side 'A' or 'B'."""
        mmax = self.engine.max_winding
        total = XLaurent(n, mmax, {})
        for graph, aut in enumerate_stable(g, n, enforce_budget=enforce_budget):
            w = self._graph_term(graph, side)
            if w is None:
                continue
            total = total + w.scale(NField.from_rational(Q(1, aut)))
        if side == "B":
            sign = (-1) ** (g - 1 + n)
            total = total.scale(NField.from_int(sign))
        return total

    def _graph_term(self, graph: StableGraph, side: str) -> XLaurent | None:
        nv = len(graph.genera)
        heights = [[] for _ in range(nv)]
        val = [0] * nv
        for u, v, ku, kv in graph.edges:
            heights[u].append(ku)
            heights[v].append(kv)
            val[u] += 1
            val[v] += 1
        for v, k in graph.leaves:
            heights[v].append(k)
            val[v] += 1
        for v, k in graph.dilatons:
            heights[v].append(k)
            val[v] += 1
        scalar = QSeries.one()
        for v in range(nv):
            vertex_int = psi_number(graph.genera[v], tuple(heights[v]))
            if not vertex_int:
                return None
            factor = self.vertex_factor_A(graph.genera[v], graph.markings[v], val[v]) \
                if side == "A" else \
                self.vertex_factor_B(graph.genera[v], graph.markings[v], val[v])
            scalar = scalar * factor.scale(NField.from_rational(vertex_int))
        for u, v, ku, kv in graph.edges:
            a, b = graph.markings[u], graph.markings[v]
            ew = self.edge_weight(a, b, ku, kv) if side == "A" \
                else self.edge_weight_bergman(a, b, ku, kv)
            scalar = scalar * ew
        for v, k in graph.dilatons:
            dw = self.dilaton_A(graph.markings[v], k) if side == "A" \
                else self.dilaton_B(graph.markings[v], k)
            scalar = scalar * dw
        if scalar.is_zero_known():
            return None
        leaf_tables = []
        for v, k in graph.leaves:
            table = self.open_leaf_A(graph.markings[v], k) if side == "A" \
                else self.open_leaf_B(graph.markings[v], k)
            leaf_tables.append(dict(table))
        out = tensor(leaf_tables, self.engine.max_winding)
        return out.scale(scalar)
