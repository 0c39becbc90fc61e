"""Minimal syndrome trellises: construction, shifting, products, census.

The trellis of a generator set is a layered directed multigraph whose
root-to-sink paths are in bijection with the generated group.  Vertices at
depth ``i`` carry partial-syndrome labels; edges of section ``i`` carry the
single-site exponent pair acting at position ``i``.  Construction works for
the full normalizer of a stabilizer code, for one axis of a CSS split, or
for any explicit generator set.
"""
from __future__ import annotations

import json
import struct
from dataclasses import dataclass, replace

import numpy as np

from . import ffield
from .pauli import PauliString
from .code import (
    CssPart,
    StabilizerCode,
    TofGenerators,
    TrellisProfile,
    to_tof,
    profile as tof_profile,
    permute,
)

_MAGIC = b"QTRLS"
_VERSION = 1


class TrellisError(RuntimeError):
    """Structural or format failure in trellis handling."""


class CapacityError(TrellisError):
    """A build was refused because it would exceed the resource cap."""


@dataclass(frozen=True)
class TrellisLayer:
    """One vertex layer: ``p**rank(basis)`` partial-syndrome labels.

    Vertex ``v`` has label ``digits(v) @ basis + offset`` where ``digits``
    are the base-p digits of the index read off at the pivot columns; the
    basis is in reduced row-echelon form so the two views are consistent.
    """

    p: int
    size: int
    basis: np.ndarray | None = None
    pivots: tuple[int, ...] = ()
    offset: np.ndarray | None = None

    def labels(self) -> np.ndarray:
        """All vertex labels in index order, shape (size, label_width)."""
        if self.basis is None:
            raise TrellisError("vertex labels were dropped")
        r, m = self.basis.shape
        idx = np.arange(self.size, dtype=np.int64)
        digits = np.zeros((self.size, r), dtype=np.int64)
        for j in range(r - 1, -1, -1):
            digits[:, j] = idx % self.p
            idx //= self.p
        out = digits @ self.basis % self.p
        if self.offset is not None:
            out = (out + self.offset) % self.p
        return out


@dataclass(frozen=True)
class TrellisSection:
    """Edges of one section, sorted by (target, source, label)."""

    p: int
    source: np.ndarray
    target: np.ndarray
    label: np.ndarray  # shape (size, 2): exponent pairs (a, b)

    @property
    def size(self) -> int:
        return self.source.size


@dataclass(frozen=True)
class Trellis:
    """An immutable built trellis plus the profile it was predicted from."""

    p: int
    n: int
    layers: tuple[TrellisLayer, ...]
    sections: tuple[TrellisSection, ...]
    profile: TrellisProfile
    label_maps: tuple[np.ndarray, ...] | None = None

    @property
    def total_vertices(self) -> int:
        return sum(layer.size for layer in self.layers)

    @property
    def total_edges(self) -> int:
        return sum(sec.size for sec in self.sections)


@dataclass(frozen=True)
class SectionCensus:
    """Edge-configuration classification of every section.

    A configuration ``(s, e, o)`` records the number of generators starting
    at the section, ending at it, and doing both (single-site generators,
    which show up as parallel edges).  ``mergers`` counts incoming-degree
    surplus and ``expansions`` outgoing surplus; both equal Σe − Σv + 1.
    """

    sections: tuple[tuple[int, int, int], ...]
    counts: dict[tuple[int, int, int], int]
    mergers: int
    expansions: int


def _mixed_radix(digits: np.ndarray, p: int) -> np.ndarray:
    """Collapse base-p digit rows (most significant first) to indices."""
    idx = np.zeros(digits.shape[0], dtype=np.int64)
    for j in range(digits.shape[1]):
        idx = idx * p + digits[:, j]
    return idx


def _resolve(source, order):
    """Normalize a build source to (tof, label map matrices, profile).

    Returns the TOF generators, the per-depth label matrices M_i (so that
    the label of g at depth i is sym(g) @ M_i mod p), and the predicted
    profile.  Codes label vertices by partial syndromes against their
    stabilizers, CSS parts against their checks; bare generator sets get
    canonical prefix-reduction labels.
    """
    if isinstance(source, StabilizerCode):
        if order is not None:
            source = permute(source, order)
        tof = source.normalizer_tof()
        checks = source.stabilizers
    elif isinstance(source, CssPart):
        if order is not None:
            raise TrellisError("permute the code before splitting")
        tof = source.tof()
        checks = source.checks
    else:
        if isinstance(source, TofGenerators):
            tof = source
        else:
            gens = list(source)
            if order is not None:
                gens = [
                    PauliString(
                        g.p,
                        g.x[np.array(order) - 1],
                        g.z[np.array(order) - 1],
                    )
                    for g in gens
                ]
            tof = to_tof(gens)
        checks = None
    p, n = tof.p, tof.n
    prof = tof_profile(tof)
    maps = []
    if checks is not None:
        # column c of M computes sym_inner(checks[c], prefix): [-z_c | x_c]
        full = np.zeros((2 * n, len(checks)), dtype=np.int64)
        for c, chk in enumerate(checks):
            full[:n, c] = (-chk.z) % p
            full[n:, c] = chk.x % p
        for i in range(n + 1):
            masked = full.copy()
            masked[i:n] = 0
            masked[n + i :] = 0
            maps.append(masked)
    else:
        # canonical labels: reduce the depth-i prefix modulo the past span
        G = np.zeros((tof.dim, 2 * n), dtype=np.int64)
        for r, g in enumerate(tof.gens):
            G[r, :n] = g.x
            G[r, n:] = g.z
        for i in range(n + 1):
            mask = np.zeros(2 * n, dtype=np.int64)
            mask[:i] = 1
            mask[n : n + i] = 1
            past = G[[j for j in range(tof.dim) if tof.right[j] <= i]] * mask
            M = np.eye(2 * n, dtype=np.int64)
            if past.size:
                red, pivots, rk = ffield.rref(past, p)
                for r, c in enumerate(pivots):
                    M[c] = (M[c] - red[r]) % p
            maps.append((np.diag(mask) @ M) % p)
    return tof, maps, prof


def build(source, order=None, *, max_edges: int = 10**8) -> Trellis:
    """Build the minimal zero-syndrome trellis.

    ``source`` may be a StabilizerCode (trellis of its normalizer), a
    CssPart, a TofGenerators, or a list of Pauli strings.  Refuses with
    CapacityError when the profile predicts more than ``max_edges`` edges.
    """
    tof, maps, prof = _resolve(source, order)
    p, n, dim = tof.p, tof.n, tof.dim
    if prof.total_edges > max_edges:
        raise CapacityError(
            f"predicted {prof.total_edges} edges exceeds cap {max_edges}"
        )
    G = np.zeros((dim, 2 * n), dtype=np.int64)
    for r, g in enumerate(tof.gens):
        G[r, :n] = g.x
        G[r, n:] = g.z
    m = maps[0].shape[1]

    layers = []
    layer_piv = []
    for i in range(n + 1):
        span = G @ maps[i] % p
        red, pivots, rk = ffield.rref(span, p)
        if p**rk != prof.v_count[i]:
            raise TrellisError(f"layer {i} label count {p**rk} != profile")
        layers.append(
            TrellisLayer(p, p**rk, red[:rk], tuple(pivots), np.zeros(m, dtype=np.int64))
        )
        layer_piv.append(tuple(pivots))

    sections = []
    for i in range(1, n + 1):
        site = np.stack([G[:, i - 1], G[:, n + i - 1]], axis=1)
        A = np.hstack([G @ maps[i - 1] % p, site, G @ maps[i] % p]) % p
        red, pivots, rk = ffield.rref(A, p)
        if p**rk != prof.e_count[i - 1]:
            raise TrellisError(f"section {i} edge count {p**rk} != profile")
        basis = red[:rk].astype(np.int16)
        w = 2 * m + 2
        arr = np.zeros((1, w), dtype=np.int16)
        for row in basis:
            arr = (
                arr[:, None, :] + np.arange(p, dtype=np.int16)[None, :, None] * row
            ).reshape(-1, w) % p
        src = _mixed_radix(arr[:, list(layer_piv[i - 1])].astype(np.int64), p)
        tgt = _mixed_radix(
            arr[:, [m + 2 + c for c in layer_piv[i]]].astype(np.int64), p
        )
        lab = arr[:, m : m + 2].astype(np.int64)
        order_idx = np.lexsort((lab[:, 0] * p + lab[:, 1], src, tgt))
        sections.append(
            TrellisSection(p, src[order_idx], tgt[order_idx], lab[order_idx])
        )
    return Trellis(p, n, tuple(layers), tuple(sections), prof, tuple(maps))


def shift(t: Trellis, pure_error: PauliString) -> Trellis:
    """Overlay a syndrome shift: label maps change, structure is shared.

    Vertex labels pick up the pure error's partial syndrome and the edge
    label of section i is multiplied by the error's site-i component.  The
    base trellis is untouched; index arrays are shared, not copied.
    """
    if pure_error.n != t.n or pure_error.p != t.p:
        raise TrellisError("shift string acts on a different system")
    p = t.p
    sym = pure_error.symplectic()
    layers = list(t.layers)
    if t.label_maps is not None:
        new_layers = []
        for i, layer in enumerate(t.layers):
            if layer.basis is None:
                new_layers.append(layer)
                continue
            off = sym @ t.label_maps[i] % p
            base = layer.offset if layer.offset is not None else 0
            new_layers.append(replace(layer, offset=(base + off) % p))
        layers = new_layers
    sections = []
    for i, sec in enumerate(t.sections, start=1):
        a, b = int(pure_error.x[i - 1]), int(pure_error.z[i - 1])
        if a == 0 and b == 0:
            sections.append(sec)
        else:
            sections.append(
                replace(sec, label=(sec.label + np.array([a, b])) % p)
            )
    return replace(t, layers=tuple(layers), sections=tuple(sections))


def _product_profile(p1: TrellisProfile, p2: TrellisProfile) -> TrellisProfile:
    past = tuple(a + b for a, b in zip(p1.dim_past, p2.dim_past))
    future = tuple(a + b for a, b in zip(p1.dim_future, p2.dim_future))
    v = tuple(a * b for a, b in zip(p1.v_count, p2.v_count))
    e = tuple(a * b for a, b in zip(p1.e_count, p2.e_count))
    din = tuple(a * b for a, b in zip(p1.deg_in, p2.deg_in))
    dout = tuple(a * b for a, b in zip(p1.deg_out, p2.deg_out))
    secs = tuple(
        (a[0] + b[0], a[1] + b[1]) for a, b in zip(p1.sections, p2.sections)
    )
    return TrellisProfile(
        p1.p, p1.n, p1.dim + p2.dim, past, future, v, e, din, dout, secs
    )


def product(t1: Trellis, t2: Trellis) -> Trellis:
    """Trellis product: layerwise vertex pairs, label-multiplied edges.

    Refuses when the result would be improper (two edge pairs collapsing
    to the same (source, label, target) triple).
    """
    if t1.p != t2.p or t1.n != t2.n:
        raise TrellisError("trellis product requires equal p and n")
    p, n = t1.p, t1.n
    layers = []
    for l1, l2 in zip(t1.layers, t2.layers):
        if l1.basis is not None and l2.basis is not None:
            m1 = l1.basis.shape[1]
            m2 = l2.basis.shape[1]
            basis = np.zeros((l1.basis.shape[0] + l2.basis.shape[0], m1 + m2), dtype=np.int64)
            basis[: l1.basis.shape[0], :m1] = l1.basis
            basis[l1.basis.shape[0] :, m1:] = l2.basis
            pivots = tuple(l1.pivots) + tuple(m1 + c for c in l2.pivots)
            off1 = l1.offset if l1.offset is not None else np.zeros(m1, dtype=np.int64)
            off2 = l2.offset if l2.offset is not None else np.zeros(m2, dtype=np.int64)
            layers.append(
                TrellisLayer(p, l1.size * l2.size, basis, pivots, np.concatenate([off1, off2]))
            )
        else:
            layers.append(TrellisLayer(p, l1.size * l2.size))
    sections = []
    for i, (s1, s2) in enumerate(zip(t1.sections, t2.sections), start=1):
        v2_prev = t2.layers[i - 1].size
        v2_next = t2.layers[i].size
        src = (s1.source[:, None] * v2_prev + s2.source[None, :]).ravel()
        tgt = (s1.target[:, None] * v2_next + s2.target[None, :]).ravel()
        lab = (s1.label[:, None, :] + s2.label[None, :, :]).reshape(-1, 2) % p
        order_idx = np.lexsort((lab[:, 0] * p + lab[:, 1], src, tgt))
        src, tgt, lab = src[order_idx], tgt[order_idx], lab[order_idx]
        enc = lab[:, 0] * p + lab[:, 1]
        dup = (
            (np.diff(src) == 0) & (np.diff(tgt) == 0) & (np.diff(enc) == 0)
        )
        if dup.any():
            raise TrellisError(f"product is improper at section {i}")
        sections.append(TrellisSection(p, src, tgt, lab))
    maps = None
    if t1.label_maps is not None and t2.label_maps is not None:
        maps = tuple(
            np.hstack([a, b]) for a, b in zip(t1.label_maps, t2.label_maps)
        )
    return Trellis(
        p,
        n,
        tuple(layers),
        tuple(sections),
        _product_profile(t1.profile, t2.profile),
        maps,
    )


def census(t: Trellis) -> SectionCensus:
    """Classify every section's edge configuration and count mergers.

    Verifies that the configuration arithmetic reproduces the section and
    layer cardinalities and that mergers = expansions = Σe − Σv + 1.
    """
    p = t.p
    prof = t.profile
    configs = []
    mergers = 0
    expansions = 0
    for i, sec in enumerate(t.sections, start=1):
        starts = prof.dim_future[i - 1] - prof.dim_future[i]
        ends = prof.dim_past[i] - prof.dim_past[i - 1]
        pairs = len(set(zip(sec.source.tolist(), sec.target.tolist())))
        if pairs == 0 or sec.size % pairs:
            raise TrellisError(f"section {i}: non-uniform parallel edges")
        q = sec.size // pairs
        o = round(np.log(q) / np.log(p))
        if p**o != q or o > min(starts, ends):
            raise TrellisError(f"section {i}: invalid configuration")
        if sec.size != t.layers[i - 1].size * p**starts:
            raise TrellisError(f"section {i}: size mismatch with starts")
        if sec.size != t.layers[i].size * p**ends:
            raise TrellisError(f"section {i}: size mismatch with ends")
        configs.append((starts, ends, o))
        din = np.bincount(sec.target, minlength=t.layers[i].size)
        dout = np.bincount(sec.source, minlength=t.layers[i - 1].size)
        mergers += int((din - 1).sum())
        expansions += int((dout - 1).sum())
    identity = t.total_edges - t.total_vertices + 1
    if mergers != identity or expansions != identity:
        raise TrellisError("merger/expansion identity violated")
    counts: dict[tuple[int, int, int], int] = {}
    for cfg in configs:
        counts[cfg] = counts.get(cfg, 0) + 1
    return SectionCensus(tuple(configs), counts, mergers, expansions)


def validate(t: Trellis, prof: TrellisProfile | None = None) -> list[str]:
    """Structural checks; returns a list of violations (empty = valid)."""
    prof = prof if prof is not None else t.profile
    errors: list[str] = []
    if t.layers[0].size != 1 or t.layers[-1].size != 1:
        errors.append("terminal layers must hold exactly one vertex")
    for i, layer in enumerate(t.layers):
        if layer.size != prof.v_count[i]:
            errors.append(f"layer {i}: {layer.size} vertices, profile says {prof.v_count[i]}")
    for i, sec in enumerate(t.sections, start=1):
        if sec.size != prof.e_count[i - 1]:
            errors.append(f"section {i}: {sec.size} edges, profile says {prof.e_count[i - 1]}")
        enc = (sec.target * (t.layers[i - 1].size + 1) + sec.source) * (t.p**2) + (
            sec.label[:, 0] * t.p + sec.label[:, 1]
        )
        if np.unique(enc).size != sec.size:
            errors.append(f"section {i}: duplicate (source, label, target) triple")
        din = np.bincount(sec.target, minlength=t.layers[i].size)
        dout = np.bincount(sec.source, minlength=t.layers[i - 1].size)
        if din.size == 0 or din.min() < 1:
            errors.append(f"section {i}: uncovered target vertex")
        if dout.size == 0 or dout.min() < 1:
            errors.append(f"section {i}: uncovered source vertex")
        if np.unique(din).size > 1:
            errors.append(f"section {i}: non-uniform in-degree")
        if np.unique(dout).size > 1:
            errors.append(f"section {i}: non-uniform out-degree")
        pair = sec.target * (t.layers[i - 1].size + 1) + sec.source
        _, pair_counts = np.unique(pair, return_counts=True)
        if np.unique(pair_counts).size > 1:
            errors.append(f"section {i}: non-uniform parallel-edge multiplicity")
        if sec.size <= 20000:
            errors.extend(_check_bipartite(sec, i))
    return errors


def _check_bipartite(sec: TrellisSection, i: int) -> list[str]:
    """Exhaustively verify the complete-bipartite block structure."""
    by_target: dict[int, set[int]] = {}
    by_source: dict[int, set[int]] = {}
    for s, tgt in zip(sec.source.tolist(), sec.target.tolist()):
        by_target.setdefault(tgt, set()).add(s)
        by_source.setdefault(s, set()).add(tgt)
    for tgt, sources in by_target.items():
        expect = by_source[next(iter(sources))]
        for s in sources:
            if by_source[s] != expect:
                return [f"section {i}: bipartite block not completely connected"]
        for tgt2 in expect:
            if by_target[tgt2] != sources:
                return [f"section {i}: bipartite block not completely connected"]
    return []


def enumerate_paths(t: Trellis):
    """Yield every root-to-sink path as a PauliString (small trellises)."""
    p, n = t.p, t.n
    adj: list[dict[int, list[tuple[int, int, int]]]] = []
    for sec in t.sections:
        table: dict[int, list[tuple[int, int, int]]] = {}
        for s, tgt, (a, b) in zip(
            sec.source.tolist(), sec.target.tolist(), sec.label.tolist()
        ):
            table.setdefault(s, []).append((int(a), int(b), tgt))
        adj.append(table)

    def walk(depth: int, vertex: int, xs: list[int], zs: list[int]):
        if depth == n:
            yield PauliString(p, np.array(xs), np.array(zs))
            return
        for a, b, tgt in adj[depth].get(vertex, []):
            yield from walk(depth + 1, tgt, xs + [a], zs + [b])

    yield from walk(0, 0, [], [])


# ---------------------------------------------------------------------------
# serialization


def serialize(t: Trellis, *, include_labels: bool = True) -> bytes:
    """Versioned binary encoding; lossless with or without vertex labels."""
    out = bytearray()
    out += _MAGIC
    m = t.label_maps[0].shape[1] if t.label_maps is not None else 0
    has_labels = include_labels and t.label_maps is not None
    out += struct.pack("<HBHIIH", _VERSION, 1 if has_labels else 0, t.p, t.n, m, t.profile.dim)
    out += struct.pack(f"<{t.n + 1}I", *t.profile.dim_past)
    out += struct.pack(f"<{t.n + 1}I", *t.profile.dim_future)
    for layer in t.layers:
        if has_labels and layer.basis is not None:
            r = layer.basis.shape[0]
            out += struct.pack("<QI", layer.size, r)
            out += struct.pack(f"<{r}I", *layer.pivots)
            out += layer.basis.astype(np.int16).tobytes()
            off = layer.offset if layer.offset is not None else np.zeros(m, dtype=np.int64)
            out += off.astype(np.int16).tobytes()
        else:
            out += struct.pack("<QI", layer.size, 0xFFFFFFFF)
    for sec in t.sections:
        out += struct.pack("<Q", sec.size)
        out += sec.source.astype(np.int64).tobytes()
        out += sec.target.astype(np.int64).tobytes()
        out += sec.label.astype(np.int16).tobytes()
    if has_labels:
        for M in t.label_maps:
            out += M.astype(np.int16).tobytes()
    return bytes(out)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, count: int) -> bytes:
        if self.pos + count > len(self.data):
            raise TrellisError("truncated trellis stream")
        chunk = self.data[self.pos : self.pos + count]
        self.pos += count
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def deserialize(data: bytes) -> Trellis:
    """Inverse of :func:`serialize`."""
    r = _Reader(data)
    if r.take(len(_MAGIC)) != _MAGIC:
        raise TrellisError("bad magic: not a trellis stream")
    version, has_labels, p, n, m, dim = r.unpack("<HBHIIH")
    if version != _VERSION:
        raise TrellisError(f"unsupported trellis format version {version}")
    past = r.unpack(f"<{n + 1}I")
    future = r.unpack(f"<{n + 1}I")
    layers = []
    for _ in range(n + 1):
        size, rk = r.unpack("<QI")
        if rk == 0xFFFFFFFF:
            layers.append(TrellisLayer(p, size))
        else:
            pivots = r.unpack(f"<{rk}I")
            basis = np.frombuffer(r.take(2 * rk * m), dtype=np.int16).reshape(rk, m).astype(np.int64)
            offset = np.frombuffer(r.take(2 * m), dtype=np.int16).astype(np.int64)
            layers.append(TrellisLayer(p, size, basis, pivots, offset))
    sections = []
    for _ in range(n):
        (count,) = r.unpack("<Q")
        src = np.frombuffer(r.take(8 * count), dtype=np.int64).copy()
        tgt = np.frombuffer(r.take(8 * count), dtype=np.int64).copy()
        lab = np.frombuffer(r.take(4 * count), dtype=np.int16).reshape(count, 2).astype(np.int64)
        sections.append(TrellisSection(p, src, tgt, lab))
    maps = None
    if has_labels:
        maps = tuple(
            np.frombuffer(r.take(2 * 2 * n * m), dtype=np.int16).reshape(2 * n, m).astype(np.int64)
            for _ in range(n + 1)
        )
    v_count = tuple(layer.size for layer in layers)
    e_count = tuple(sec.size for sec in sections)
    deg_in = tuple(e_count[i - 1] // v_count[i] for i in range(1, n + 1))
    deg_out = tuple(e_count[i - 1] // v_count[i - 1] for i in range(1, n + 1))
    secs = tuple(
        (past[i] - past[i - 1], future[i - 1] - future[i]) for i in range(1, n + 1)
    )
    prof = TrellisProfile(p, n, dim, past, future, v_count, e_count, deg_in, deg_out, secs)
    return Trellis(p, n, tuple(layers), tuple(sections), prof, maps)


def to_json(t: Trellis) -> str:
    """Human-inspectable JSON export of the structure (labels optional)."""
    doc = {
        "p": t.p,
        "n": t.n,
        "layers": [
            {
                "size": layer.size,
                "labels": layer.labels().tolist() if layer.basis is not None else None,
            }
            for layer in t.layers
        ],
        "sections": [
            {
                "edges": [
                    [int(s), [int(a), int(b)], int(tg)]
                    for s, tg, (a, b) in zip(
                        sec.source.tolist(), sec.target.tolist(), sec.label.tolist()
                    )
                ]
            }
            for sec in t.sections
        ],
    }
    return json.dumps(doc)
