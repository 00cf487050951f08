"""A-model pipeline: torus fixed-locus graphs and open invariants.

Two independent evaluation routes are implemented for genus <= 1:

* ``open_invariant`` sums the open localization formula over decorated graphs
  whose half-edges are multiply-covered disks;

* ``descendant_invariant`` cuts the disks off and evaluates the resulting
  closed descendant integral (disk factors times a closed localization sum
  with descendant insertions at the boundary-attachment points).

Both produce exact elements of K and must agree; the generating functions
F_{g,h} are assembled from either with the grading q^(d + sum|mu|/2).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from math import factorial

from .frobenius import bessel_I
from .intersect import hodge_lambda1_number, psi_number
from .rings import NF_ONE, NF_ZERO, NField, Q, nf_s
from .series import QSeries
from .xlaurent import XLaurent


class OracleLimitError(ValueError):
    """Direct localization is limited to vertex genus <= 1 (Hodge support)."""


S = nf_s()


def fixed_point_weight(label: int) -> NField:
    """Tangent weight w(p_1) = -s, w(p_2) = s."""
    return -S if label == 1 else S


def disk_factor(alpha: int, mu: int) -> NField:
    """Fixed multiple-cover disk contribution D^alpha(mu), mu > 0:
    D^2(mu) = mu^(mu-2) / (mu! s^(mu-2)) and D^1(mu) = (-1)^(mu+1) D^2(mu)."""
    if mu <= 0:
        raise ValueError("disk winding must be positive")
    base = NField.from_rational(
        Q(mu ** max(0, mu - 2), factorial(mu) * mu ** max(0, 2 - mu))) * S ** (2 - mu)
    if alpha == 1:
        return base if mu % 2 == 1 else -base
    if alpha == 2:
        return base
    raise ValueError("fixed point label must be 1 or 2")


def edge_factor(d: int) -> NField:
    """Closed multiple-cover edge contribution h(e, d) = (-1)^d d^{2d} / ((d!)^2 s^{2d})."""
    if d <= 0:
        raise ValueError("edge degree must be positive")
    sign = -1 if d % 2 else 1
    return NField.from_rational(Q(sign * d ** (2 * d), factorial(d) ** 2)) / S ** (2 * d)


# ---------------------------------------------------------------------------
# Decorated graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecoratedGraph:
    """A fixed-locus graph: labels/genera per vertex, edges (u, v, degree),
    ordered half-edge attachments, ordered mark attachments."""

    labels: tuple[int, ...]
    genera: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]
    half_vertices: tuple[int, ...]
    mark_vertices: tuple[int, ...]

    def encode(self, perm: tuple[int, ...]):
        inv = tuple(perm)
        labels = tuple(self.labels[_preimage(inv, v)] for v in range(len(self.labels)))
        genera = tuple(self.genera[_preimage(inv, v)] for v in range(len(self.labels)))
        edges = tuple(sorted(
            (min(inv[u], inv[v]), max(inv[u], inv[v]), d) for u, v, d in self.edges))
        halves = tuple(inv[v] for v in self.half_vertices)
        marks = tuple(inv[v] for v in self.mark_vertices)
        return (labels, genera, edges, halves, marks)


def _preimage(perm: tuple[int, ...], v: int) -> int:
    return perm.index(v)


def _edge_multiplicity_factor(edges) -> int:
    mult: dict[tuple[int, int, int], int] = {}
    for e in edges:
        mult[e] = mult.get(e, 0) + 1
    out = 1
    for m in mult.values():
        out *= factorial(m)
    return out


def automorphism_order(graph: DecoratedGraph) -> int:
    nv = len(graph.labels)
    base = graph.encode(tuple(range(nv)))
    count = 0
    for perm in permutations(range(nv)):
        if graph.encode(perm) == base:
            count += 1
    return count * _edge_multiplicity_factor(graph.edges)


def _connected(nv: int, edges) -> bool:
    if nv == 1:
        return True
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    return len({find(v) for v in range(nv)}) == 1


def _edge_structures(pairs, d: int, ne: int):
    """Multisets of (pair_index, degree >= 1) of size ne with total degree d."""
    def rec(start, remaining_edges, remaining_degree, acc):
        if remaining_edges == 0:
            if remaining_degree == 0:
                yield tuple(acc)
            return
        if remaining_degree < remaining_edges:
            return
        for i in range(start, len(pairs)):
            max_deg = remaining_degree - (remaining_edges - 1)
            for deg in range(1, max_deg + 1):
                item = (i, deg)
                if acc and item < acc[-1]:
                    continue
                acc.append(item)
                yield from rec(i, remaining_edges - 1, remaining_degree - deg, acc)
                acc.pop()

    yield from rec(0, ne, d, [])


def _enumerate_graphs(g: int, d: int, half_labels: tuple[int, ...],
                      half_degrees: tuple[int, ...],
                      mark_labels: tuple[int | None, ...]):
    """All decorated graphs with the given half-edge/mark label constraints.

    half_labels[j] forces the vertex label under half-edge j; mark_labels[i]
    (if not None) forces the vertex label under mark i.  Yields
    (graph, |Aut|) pairs without isomorphic duplicates.
    """
    seen = set()
    max_nv = (d + 1) if d > 0 else 1
    for nv in range(1, max_nv + 1):
        for labels in product((1, 2), repeat=nv):
            pairs = [(u, v) for u in range(nv) for v in range(u + 1, nv)
                     if labels[u] != labels[v]]
            ne_lo, ne_hi = nv - 1, d
            for ne in range(ne_lo, ne_hi + 1):
                if ne == 0 and d != 0:
                    continue
                b1 = ne - nv + 1
                gsum = g - b1
                if gsum < 0:
                    continue
                for struct in (_edge_structures(pairs, d, ne) if ne else [()]):
                    edges = tuple(sorted((pairs[i][0], pairs[i][1], deg)
                                         for i, deg in struct))
                    if not _connected(nv, edges):
                        continue
                    for genera in _compositions(gsum, nv):
                        for halves in product(*[
                                [v for v in range(nv) if labels[v] == hl]
                                for hl in half_labels]):
                            for marks in product(*[
                                    [v for v in range(nv)
                                     if ml is None or labels[v] == ml]
                                    for ml in mark_labels]):
                                graph = DecoratedGraph(labels, tuple(genera), edges,
                                                       tuple(halves), tuple(marks))
                                canon = min(graph.encode(p)
                                            for p in permutations(range(nv)))
                                if canon in seen:
                                    continue
                                seen.add(canon)
                                yield graph, automorphism_order(graph)


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_decorated(g: int, n: int, d: int, mu: tuple[int, ...]):
    """Decorated graphs for the open invariant (g, d, mu) with n interior marks."""
    if any(m == 0 for m in mu):
        raise ValueError("windings must be nonzero")
    half_labels = tuple(1 if m < 0 else 2 for m in mu)
    half_degrees = tuple(abs(m) for m in mu)
    return _enumerate_graphs(g, d, half_labels, half_degrees, (None,) * n)


# ---------------------------------------------------------------------------
# Vertex integrals
# ---------------------------------------------------------------------------


def _psi_sum(genus: int, wp: NField, flag_weights, mark_mus) -> NField:
    """Stable vertex integral with resummed flag propagators and descendant marks.

    Flags contribute 1/(w_f - psi); marks contribute the boundary descendant
    series with psi^a coefficient (mu/s)^(a+2).  The genus-1 Hodge part
    subtracts lambda_1 / w(p).
    """
    legs = len(flag_weights) + len(mark_mus)
    if genus >= 2:
        raise OracleLimitError("direct localization supports vertex genus <= 1")
    dim = 3 * genus - 3 + legs

    def leg_coeff(idx: int, k: int) -> NField:
        if idx < len(flag_weights):
            return flag_weights[idx].inverse() ** (k + 1)
        mu = mark_mus[idx - len(flag_weights)]
        return (NField.from_int(mu) / S) ** (k + 2)

    total = NF_ZERO
    if dim >= 0:
        for ks in _compositions(dim, legs):
            val = psi_number(genus, ks)
            if not val:
                continue
            term = NField.from_rational(val)
            for idx, k in enumerate(ks):
                term = term * leg_coeff(idx, k)
            total = total + term
    if genus == 1 and dim >= 1:
        hodge = NF_ZERO
        for ks in _compositions(dim - 1, legs):
            val = hodge_lambda1_number(ks)
            if not val:
                continue
            term = NField.from_rational(val)
            for idx, k in enumerate(ks):
                term = term * leg_coeff(idx, k)
            hodge = hodge + term
        total = total - hodge / wp
    if genus == 0:
        total = total / wp
    return total


def _mark_resummed(mu: int, psi_value: NField) -> NField:
    """The descendant series 1/((s/mu)(s/mu - psi)) evaluated at a psi value."""
    z = S / mu
    return (z * (z - psi_value)).inverse()


def _vertex_integral(genus: int, wp: NField, flag_weights, mark_mus) -> NField:
    """Full vertex package: h(p, g) and flag denominators, unstable cases
    by the localization conventions."""
    legs = len(flag_weights) + len(mark_mus)
    if genus == 0 and legs == 1:
        if flag_weights:
            # unstable convention: the (0,1) integral of 1/(w - psi) is w
            return flag_weights[0] / wp
        raise ValueError("an isolated marked vertex needs the degree-zero path")
    if genus == 0 and legs == 2:
        if len(flag_weights) == 2:
            # unstable convention: 1/((w1 - psi1)(w2 - psi2)) integrates to 1/(w1 + w2)
            return (flag_weights[0] + flag_weights[1]).inverse() / wp
        if len(flag_weights) == 1:
            # unstable convention: psi2^a against 1/(w - psi1) gives (-w)^a, resummed
            return _mark_resummed(mark_mus[0], -flag_weights[0]) / wp
        raise ValueError("two marks with no flags need the degree-zero path")
    return _psi_sum(genus, wp, flag_weights, mark_mus)


def _graph_weight(graph: DecoratedGraph, half_degrees: tuple[int, ...],
                  mark_mus: tuple[int, ...] | None) -> NField:
    """Localization weight of one decorated graph (automorphisms not divided out).

    When ``mark_mus`` is None the half-edges are honest disks (open route);
    otherwise the graph is closed and each mark carries a boundary descendant.
    """
    total = NF_ONE
    for _, _, d in graph.edges:
        total = total * edge_factor(d) / d

    nv = len(graph.labels)
    edge_flags: list[list[NField]] = [[] for _ in range(nv)]
    edge_count = [0] * nv
    for u, v, d in graph.edges:
        edge_flags[u].append(fixed_point_weight(graph.labels[u]) / d)
        edge_flags[v].append(fixed_point_weight(graph.labels[v]) / d)
        edge_count[u] += 1
        edge_count[v] += 1

    half_flags: list[list[NField]] = [[] for _ in range(nv)]
    if mark_mus is None:
        for j, v in enumerate(graph.half_vertices):
            half_flags[v].append(fixed_point_weight(graph.labels[v]) / half_degrees[j])

    marks_at: list[list[int]] = [[] for _ in range(nv)]
    if mark_mus is not None:
        for i, v in enumerate(graph.mark_vertices):
            marks_at[v].append(mark_mus[i])

    for v in range(nv):
        wp = fixed_point_weight(graph.labels[v])
        total = total * wp ** edge_count[v]
        for wh in half_flags[v]:
            total = total / wh
        total = total * _vertex_integral(
            graph.genera[v], wp, edge_flags[v] + half_flags[v], tuple(marks_at[v]))
    return total


def _degree_zero_closed(g: int, mu: tuple[int, ...]) -> NField:
    """Closed descendant integral at degree zero: a single fixed vertex.

    Exists only when all boundary descendants force the same fixed point.
    """
    labels = {1 if m < 0 else 2 for m in mu}
    if len(labels) != 1:
        return NF_ZERO
    label = labels.pop()
    wp = fixed_point_weight(label)
    h = len(mu)
    if g == 0 and h == 1:
        return wp.inverse()  # the one-point convention collapses to int phi
    if g == 0 and h == 2:
        z1, z2 = S / mu[0], S / mu[1]
        return ((z1 * z2 * (z1 + z2)) * wp).inverse()
    if g == 0 and h < 3:
        return NF_ZERO
    return _psi_sum(g, wp, [], tuple(mu))


def open_invariant(g: int, d: int, mu: tuple[int, ...]) -> NField:
    """Open invariant (no interior insertions) by the open localization sum."""
    return _open_invariant_cached(g, d, tuple(mu))


@lru_cache(maxsize=None)
def _open_invariant_cached(g: int, d: int, mu: tuple[int, ...]) -> NField:
    if any(m == 0 for m in mu):
        raise ValueError("windings must be nonzero")
    half_degrees = tuple(abs(m) for m in mu)
    total = NF_ZERO
    for graph, aut in enumerate_decorated(g, 0, d, mu):
        total = total + _graph_weight(graph, half_degrees, None) / aut
    for m in mu:
        total = total * disk_factor(1 if m < 0 else 2, abs(m))
    return total


def descendant_invariant(g: int, d: int, mu: tuple[int, ...]) -> NField:
    """The same open invariant through the closed descendant correspondence."""
    return _descendant_invariant_cached(g, d, tuple(mu))


@lru_cache(maxsize=None)
def _descendant_invariant_cached(g: int, d: int, mu: tuple[int, ...]) -> NField:
    if any(m == 0 for m in mu):
        raise ValueError("windings must be nonzero")
    pref = NF_ONE
    for m in mu:
        pref = pref * disk_factor(1 if m < 0 else 2, abs(m))
    mark_labels = tuple(1 if m < 0 else 2 for m in mu)
    if d == 0:
        return pref * _degree_zero_closed(g, mu)
    total = NF_ZERO
    for graph, aut in _enumerate_graphs(g, d, (), (), mark_labels):
        total = total + _graph_weight(graph, (), mu) / aut
    return pref * total


# ---------------------------------------------------------------------------
# Generating functions
# ---------------------------------------------------------------------------


def _winding_tuples(h: int, max_winding: int, p_max: int):
    rng = [m for m in range(-max_winding, max_winding + 1) if m != 0]
    for mu in product(rng, repeat=h):
        if sum(abs(m) for m in mu) <= p_max:
            yield mu


def assemble_F(g: int, h: int, p_max: int, max_winding: int,
               route: str = "open") -> XLaurent:
    """F_{g,h} = sum over (d, mu) of the invariant times q^(d + sum|mu|/2)."""
    if route == "open":
        invariant = open_invariant
    elif route == "descendant":
        invariant = descendant_invariant
    else:
        raise ValueError(f"unknown route {route!r}")
    coeffs: dict[tuple[int, ...], QSeries] = {}
    for mu in _winding_tuples(h, max_winding, p_max):
        base = sum(abs(m) for m in mu)
        acc: dict[int, NField] = {}
        for d in range(0, (p_max - base) // 2 + 1):
            val = invariant(g, d, mu)
            if not val.is_zero():
                acc[2 * d + base] = val
        coeffs[mu] = QSeries(acc, p_max + 1)
    return XLaurent(h, max_winding, coeffs)


def f01_bessel(p_max: int, max_winding: int) -> XLaurent:
    """Disk generating function from its closed Bessel form:
    F_{0,1} = sum_{d != 0} (s/d^2) I_d(2 sqrt(q) d / s) X^d."""
    coeffs = {}
    for d in range(-max_winding, max_winding + 1):
        if d == 0:
            continue
        coeffs[(d,)] = bessel_I(d, abs(d), p_max + 1).scale(S / d ** 2)
    return XLaurent(1, max_winding, coeffs)


# ---------------------------------------------------------------------------
# Open-leaf building blocks
# ---------------------------------------------------------------------------


def xi_tilde_coeffs(alpha: int, k: int, max_winding: int) -> dict[int, NField]:
    """Winding coefficients of the descendant leaf function at height k >= -2.

    Negative windings for alpha = 1, positive for alpha = 2; the coefficient
    of X^d is (d/s)^(k+2) D^alpha(|d|).
    """
    if k < -2:
        raise ValueError("height must be at least -2")
    out = {}
    rng = range(-max_winding, 0) if alpha == 1 else range(1, max_winding + 1)
    for d in rng:
        out[d] = (NField.from_int(d) / S) ** (k + 2) * disk_factor(alpha, abs(d))
    return out
