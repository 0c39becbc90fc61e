"""Stabilizer-code model.

Covers validation, normalizer and logical-generator computation, the
trellis-oriented form (TOF) of a generator set, structural profiles predicted
from spans, CSS splitting, qudit-order heuristics, built-in codes, and the
text code-file format.
"""
from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field

import numpy as np

from . import ffield
from .pauli import (
    PauliString,
    format_pauli,
    from_symplectic,
    identity,
    mul,
    parse_pauli,
    sym_inner,
)


class CodeError(ValueError):
    """Raised when a stabilizer code fails validation."""


# ---------------------------------------------------------------------------
# symplectic helpers


def _symplectic_matrix(gens: list[PauliString]) -> np.ndarray:
    """Rows are the ``[x | z]`` vectors of ``gens``."""
    return np.array([g.symplectic() for g in gens], dtype=np.int64)


def _commutation_matrix(gens: list[PauliString]) -> np.ndarray:
    """Rows c_j with ``c_j . [x_E | z_E] = sym_inner(gens[j], E)``."""
    rows = []
    for g in gens:
        rows.append(np.concatenate([-g.z, g.x]))
    p = gens[0].p
    return np.array(rows, dtype=np.int64) % p


# ---------------------------------------------------------------------------
# trellis-oriented form


def left_index(P: PauliString) -> int:
    """1-based position of the first non-identity site (0 for the identity)."""
    nz = np.nonzero((P.x != 0) | (P.z != 0))[0]
    return int(nz[0]) + 1 if nz.size else 0


def right_index(P: PauliString) -> int:
    """1-based position of the last non-identity site (0 for the identity)."""
    nz = np.nonzero((P.x != 0) | (P.z != 0))[0]
    return int(nz[-1]) + 1 if nz.size else 0


@dataclass(frozen=True)
class TofGenerators:
    """A generator set in trellis-oriented form with cached span data."""

    p: int
    n: int
    gens: tuple[PauliString, ...]
    left: tuple[int, ...]
    right: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.gens)

    def spans(self) -> list[tuple[int, int]]:
        return list(zip(self.left, self.right))

    def span_length(self) -> int:
        return sum(r - l + 1 for l, r in zip(self.left, self.right))


def _site(vec: np.ndarray, n: int, j: int) -> tuple[int, int]:
    # j is 1-based
    return int(vec[j - 1]), int(vec[n + j - 1])


def to_tof(gens: list[PauliString]) -> TofGenerators:
    """Reduce a generator set to trellis-oriented form.

    The returned set generates the same group, satisfies the left-right
    property (no two members share a left or right index with proportional
    end sites), and has minimal total span length.  Rows are canonicalized
    so the leading site's first nonzero exponent is 1 and sorted by span.
    """
    if not gens:
        raise ValueError("empty generator set")
    p = gens[0].p
    n = gens[0].n
    rows = _symplectic_matrix(gens) % p
    m = rows.shape[0]

    def lidx(v):
        for j in range(1, n + 1):
            if v[j - 1] % p or v[n + j - 1] % p:
                return j
        return 0

    def ridx(v):
        for j in range(n, 0, -1):
            if v[j - 1] % p or v[n + j - 1] % p:
                return j
        return 0

    def reduce_row(u: int, helpers: list[int], j: int) -> bool:
        # clear row u's site j using combinations of the helper rows' sites
        target = np.array(_site(rows[u], n, j), dtype=np.int64)
        mat = np.array([_site(rows[h], n, j) for h in helpers], dtype=np.int64).T
        coeffs = ffield.solve(mat, target, p)
        if coeffs is None:
            return False
        for c, h in zip(coeffs, helpers):
            if c:
                rows[u] = (rows[u] - c * rows[h]) % p
        if not rows[u].any():
            raise CodeError("dependent generators (reduction reached the identity)")
        return True

    # each replacement strictly shrinks one span, so this terminates
    changed = True
    while changed:
        changed = False
        # left ends: clear a row's leading site using group members whose
        # right index does not exceed its own, so its span can only shrink
        for u in range(m):
            lu, ru = lidx(rows[u]), ridx(rows[u])
            helpers = [
                v
                for v in range(m)
                if v != u and lidx(rows[v]) == lu and ridx(rows[v]) <= ru
            ]
            if helpers and reduce_row(u, helpers, lu):
                changed = True
        # right ends, mirrored
        for u in range(m):
            lu, ru = lidx(rows[u]), ridx(rows[u])
            helpers = [
                v
                for v in range(m)
                if v != u and ridx(rows[v]) == ru and lidx(rows[v]) >= lu
            ]
            if helpers and reduce_row(u, helpers, ru):
                changed = True

    # canonical scaling: make the leading site's first nonzero exponent 1
    for i in range(m):
        l = lidx(rows[i])
        a, b = _site(rows[i], n, l)
        scale = ffield.inv_mod(a if a else b, p)
        rows[i] = (rows[i] * scale) % p

    order = sorted(range(m), key=lambda i: (lidx(rows[i]), ridx(rows[i]), rows[i].tolist()))
    rows = rows[order]
    out = tuple(from_symplectic(v, p) for v in rows)
    lefts = tuple(lidx(v) for v in rows)
    rights = tuple(ridx(v) for v in rows)
    return TofGenerators(p, n, out, lefts, rights)


# ---------------------------------------------------------------------------
# structural profile


@dataclass(frozen=True)
class TrellisProfile:
    """Per-depth structure of the minimal trellis of a generator set.

    ``v_count[i]`` and degree entries are exact Python integers since the
    counts grow as ``p**dim``.  Section ``i`` (1-based) lives at list
    offset ``i - 1`` in ``e_count``, ``deg_in``, ``deg_out``, ``sections``.
    """

    p: int
    n: int
    dim: int
    dim_past: tuple[int, ...]
    dim_future: tuple[int, ...]
    v_count: tuple[int, ...]
    e_count: tuple[int, ...]
    deg_in: tuple[int, ...]
    deg_out: tuple[int, ...]
    sections: tuple[tuple[int, int], ...]

    @property
    def total_vertices(self) -> int:
        return sum(self.v_count)

    @property
    def total_edges(self) -> int:
        return sum(self.e_count)


def profile(tof: TofGenerators) -> TrellisProfile:
    """Predict all trellis layer/section sizes from TOF spans."""
    p, n, dim = tof.p, tof.n, tof.dim
    past = tuple(sum(1 for r in tof.right if r <= i) for i in range(n + 1))
    future = tuple(sum(1 for l in tof.left if l >= i + 1) for i in range(n + 1))
    v_count = tuple(p ** (dim - past[i] - future[i]) for i in range(n + 1))
    e_count = tuple(p ** (dim - past[i - 1] - future[i]) for i in range(1, n + 1))
    deg_in = tuple(e_count[i - 1] // v_count[i] for i in range(1, n + 1))
    deg_out = tuple(e_count[i - 1] // v_count[i - 1] for i in range(1, n + 1))
    sections = tuple(
        (past[i] - past[i - 1], future[i - 1] - future[i]) for i in range(1, n + 1)
    )
    return TrellisProfile(
        p, n, dim, past, future, v_count, e_count, deg_in, deg_out, sections
    )


# ---------------------------------------------------------------------------
# the code object


@dataclass(frozen=True)
class StabilizerCode:
    """A validated [[n, k]]_p stabilizer code."""

    p: int
    n: int
    k: int
    stabilizers: tuple[PauliString, ...]
    normalizer_gens: tuple[PauliString, ...]
    logical_gens: tuple[PauliString, ...]
    qudit_order: tuple[int, ...]
    name: str | None = None
    distance: int | None = None

    def stabilizer_tof(self) -> TofGenerators:
        return to_tof(list(self.stabilizers))

    def normalizer_tof(self) -> TofGenerators:
        return to_tof(list(self.stabilizers) + list(self.logical_gens))

    def is_css(self) -> bool:
        return all(
            not (g.x.any() and g.z.any()) for g in self.stabilizers
        )


def _extract_logicals(
    stab_rows: np.ndarray, norm_rows: np.ndarray, p: int, n: int, k: int
) -> list[PauliString]:
    """Pair 2k logical generators out of the normalizer basis.

    Symplectic Gram-Schmidt: repeatedly find a non-commuting pair, scale it
    to inner product 1, then strip its components from everything else.
    """

    def inner(u, v):
        return int((u[:n] @ v[n:] - u[n:] @ v[:n]) % p)

    pool = [v.copy() for v in norm_rows]
    logicals: list[np.ndarray] = []
    while len(logicals) < 2 * k:
        pair = None
        for i in range(len(pool)):
            for j in range(i + 1, len(pool)):
                c = inner(pool[i], pool[j])
                if c:
                    pair = (i, j, c)
                    break
            if pair:
                break
        if pair is None:
            raise CodeError("failed to pair logical generators")
        i, j, c = pair
        u = pool[i]
        v = (pool[j] * ffield.inv_mod(c, p)) % p
        rest = []
        for t, w in enumerate(pool):
            if t in (i, j):
                continue
            w = (w - inner(w, v) * u + inner(w, u) * v) % p
            rest.append(w)
        logicals.extend([u, v])
        pool = rest
    return [from_symplectic(v, p) for v in logicals]


def new_code(
    p: int,
    stabilizers: list[PauliString],
    logicals: list[PauliString] | None = None,
    *,
    name: str | None = None,
    distance: int | None = None,
) -> StabilizerCode:
    """Validate generators and assemble a :class:`StabilizerCode`.

    Computes the normalizer basis as the symplectic kernel of the stabilizer
    matrix and extracts 2k paired logical generators unless provided.
    """
    ffield.check_prime(p)
    if not stabilizers:
        raise CodeError("empty stabilizer set")
    n = stabilizers[0].n
    for g in stabilizers:
        if g.p != p or g.n != n:
            raise CodeError("stabilizers disagree on p or n")
        if g.weight() < 2:
            raise CodeError(f"stabilizer {format_pauli(g)} has weight < 2")
    for i, g in enumerate(stabilizers):
        for h in stabilizers[i + 1 :]:
            if sym_inner(g, h):
                raise CodeError(
                    f"stabilizers do not commute: {format_pauli(g)}, {format_pauli(h)}"
                )
    stab_rows = _symplectic_matrix(stabilizers)
    m = len(stabilizers)
    rk = ffield.rank(stab_rows, p)
    if rk != m:
        raise CodeError(f"dependent stabilizers: rank {rk} < {m}")
    k = n - m
    if k <= 0:
        raise CodeError("k = 0 unsupported")

    comm = _commutation_matrix(stabilizers)
    norm_rows = ffield.kernel(comm, p)
    if norm_rows.shape[0] != n + k:
        raise CodeError("normalizer dimension mismatch")
    normalizer_gens = [from_symplectic(v, p) for v in norm_rows]

    if logicals is None:
        logical_gens = _extract_logicals(stab_rows, norm_rows, p, n, k)
    else:
        if len(logicals) != 2 * k:
            raise CodeError(f"expected {2 * k} logical generators")
        for l in logicals:
            if l.p != p or l.n != n:
                raise CodeError("logicals disagree on p or n")
            for s in stabilizers:
                if sym_inner(s, l):
                    raise CodeError("logical anticommutes with a stabilizer")
        logical_gens = list(logicals)
    full = np.vstack([stab_rows, _symplectic_matrix(logical_gens)])
    if ffield.rank(full, p) != n + k:
        raise CodeError("stabilizers and logicals do not span the normalizer")

    return StabilizerCode(
        p=p,
        n=n,
        k=k,
        stabilizers=tuple(stabilizers),
        normalizer_gens=tuple(normalizer_gens),
        logical_gens=tuple(logical_gens),
        qudit_order=tuple(range(1, n + 1)),
        name=name,
        distance=distance,
    )


def permute(code: StabilizerCode, order: list[int]) -> StabilizerCode:
    """Reorder qudits: new position i holds old qudit ``order[i - 1]``."""
    if sorted(order) != list(range(1, code.n + 1)):
        raise CodeError("order must be a permutation of 1..n")
    idx = np.array(order, dtype=np.int64) - 1

    def perm(P: PauliString) -> PauliString:
        return PauliString(P.p, P.x[idx], P.z[idx])

    return StabilizerCode(
        p=code.p,
        n=code.n,
        k=code.k,
        stabilizers=tuple(perm(g) for g in code.stabilizers),
        normalizer_gens=tuple(perm(g) for g in code.normalizer_gens),
        logical_gens=tuple(perm(g) for g in code.logical_gens),
        qudit_order=tuple(order),
        name=code.name,
        distance=code.distance,
    )


# ---------------------------------------------------------------------------
# CSS splitting


@dataclass(frozen=True)
class CssPart:
    """One axis of a CSS split, ready for building its own trellis.

    ``checks`` are the pure-axis stabilizers; ``gens`` generate the dual-axis
    strings with zero syndrome against the checks (the trellis path set).
    ``weight_axis`` names the single-site label alphabet of this trellis.
    """

    axis: str
    checks: tuple[PauliString, ...]
    gens: tuple[PauliString, ...]
    n: int
    p: int

    @property
    def k_classical(self) -> int:
        return self.n - len(self.checks)

    @property
    def weight_axis(self) -> str:
        # the X-stabilizer trellis carries {I, Z} labels and vice versa
        return "Z" if self.axis == "X" else "X"

    def tof(self) -> TofGenerators:
        return to_tof(list(self.gens))


def css_split(code: StabilizerCode) -> tuple[CssPart, CssPart]:
    """Split a CSS code into its X-check and Z-check parts.

    Raises CodeError("not CSS") when some stabilizer mixes X and Z exponents.
    """
    x_checks, z_checks = [], []
    for g in code.stabilizers:
        if g.x.any() and g.z.any():
            raise CodeError("not CSS")
        if g.x.any():
            x_checks.append(g)
        else:
            z_checks.append(g)
    p, n = code.p, code.n

    def part(checks: list[PauliString], axis: str) -> CssPart:
        h = np.array(
            [(g.x if axis == "X" else g.z) for g in checks], dtype=np.int64
        )
        ker = ffield.kernel(h, p)
        gens = []
        for v in ker:
            if axis == "X":
                gens.append(PauliString(p, np.zeros(n, dtype=np.int64), v))
            else:
                gens.append(PauliString(p, v, np.zeros(n, dtype=np.int64)))
        return CssPart(axis, tuple(checks), tuple(gens), n, p)

    return part(x_checks, "X"), part(z_checks, "Z")


# ---------------------------------------------------------------------------
# qudit numbering heuristic


def greedy_numbering(code: StabilizerCode) -> list[int]:
    """Search for a qudit order that shrinks the trellis.

    From every seed qudit, repeatedly append the qudit minimizing the change
    in the number of active generators (newly activated minus newly
    deactivated), breaking ties by the smaller resulting active count and
    then by index.  The seed whose final order yields the smallest total
    edge count wins; the identity order is kept if nothing beats it.
    """
    n = code.n
    gens = list(code.stabilizers) + list(code.logical_gens)
    supports = [set(np.nonzero((g.x != 0) | (g.z != 0))[0] + 1) for g in gens]

    def build_order(seed: int) -> list[int]:
        placed: set[int] = set()
        order: list[int] = []
        current = seed
        while True:
            placed.add(current)
            order.append(current)
            if len(order) == n:
                return order
            best = None
            for q in range(1, n + 1):
                if q in placed:
                    continue
                trial = placed | {q}
                activated = deactivated = active = 0
                for s in supports:
                    was_active = bool(s & placed) and not s <= placed
                    now_active = bool(s & trial) and not s <= trial
                    active += now_active
                    activated += now_active and not was_active
                    deactivated += was_active and not now_active
                key = (activated - deactivated, active, q)
                if best is None or key < best[0]:
                    best = (key, q)
            current = best[1]

    def total_edges(order: list[int]) -> int:
        permuted = permute(code, order)
        return profile(permuted.normalizer_tof()).total_edges

    best_order = list(range(1, n + 1))
    best_e = total_edges(best_order)
    for seed in range(1, n + 1):
        order = build_order(seed)
        e = total_edges(order)
        if e < best_e:
            best_e, best_order = e, order
    return best_order


# ---------------------------------------------------------------------------
# code file format


def parse_code_file(text: str) -> StabilizerCode:
    """Parse the text code format.

    Line 1 is ``p n k``.  Then either ``n - k`` Pauli strings, optionally
    followed by a ``LOGICALS`` line and 2k more strings, or a ``SYMPLECTIC``
    line followed by rows of 2n comma-separated integers (x block then z
    block).
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise CodeError("empty code file")
    header = lines[0].split()
    if len(header) != 3:
        raise CodeError(f"malformed header {lines[0]!r}: expected 'p n k'")
    try:
        p, n, k = (int(t) for t in header)
    except ValueError as exc:
        raise CodeError(f"malformed header {lines[0]!r}") from exc
    body = lines[1:]
    m = n - k
    symplectic_mode = bool(body) and body[0].upper() == "SYMPLECTIC"
    if symplectic_mode:
        body = body[1:]

    def read_strings(rows: list[str]) -> list[PauliString]:
        out = []
        for ln in rows:
            if symplectic_mode:
                vals = [int(t) for t in ln.split(",")]
                if len(vals) != 2 * n:
                    raise CodeError(f"expected {2 * n} symplectic entries, got {len(vals)}")
                if any(not 0 <= v < p for v in vals):
                    raise CodeError("symplectic entry out of range")
                out.append(from_symplectic(np.array(vals, dtype=np.int64), p))
            else:
                out.append(parse_pauli(ln, p, n))
        return out

    logicals = None
    upper = [ln.upper() for ln in body]
    if "LOGICALS" in upper:
        at = upper.index("LOGICALS")
        stab_rows, log_rows = body[:at], body[at + 1 :]
        if len(log_rows) != 2 * k:
            raise CodeError(f"expected {2 * k} logical lines, got {len(log_rows)}")
        logicals = read_strings(log_rows)
    else:
        stab_rows = body
    if len(stab_rows) != m:
        raise CodeError(f"expected {m} stabilizer lines, got {len(stab_rows)}")
    return new_code(p, read_strings(stab_rows), logicals)


def write_code_file(code: StabilizerCode, include_logicals: bool = True) -> str:
    """Serialize a code in the text format accepted by :func:`parse_code_file`."""
    lines = [f"{code.p} {code.n} {code.k}"]
    lines += [format_pauli(g) for g in code.stabilizers]
    if include_logicals:
        lines.append("LOGICALS")
        lines += [format_pauli(g) for g in code.logical_gens]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# built-in codes

STEANE_H = np.array(
    [
        [1, 1, 0, 1, 1, 0, 0],
        [0, 1, 1, 0, 1, 1, 0],
        [0, 0, 0, 1, 1, 1, 1],
    ],
    dtype=np.int64,
)


def _x_string(n: int, support: list[int]) -> PauliString:
    x = np.zeros(n, dtype=np.int64)
    x[np.array(support) - 1] = 1
    return PauliString(2, x, np.zeros(n, dtype=np.int64))


def _z_string(n: int, support: list[int]) -> PauliString:
    z = np.zeros(n, dtype=np.int64)
    z[np.array(support) - 1] = 1
    return PauliString(2, np.zeros(n, dtype=np.int64), z)


def _rotated_surface(d: int) -> StabilizerCode:
    """Rotated surface code on a d x d grid, row-major numbering from the top.

    The qubit at grid column i, row j (row d-1 on top) carries the label
    ``d*(d - 1 - j) + i + 1``.  Interior faces checker between Z (even
    corner parity) and X; boundary half-faces sit on the left/right edges
    (Z) and the top/bottom edges (X).
    """
    if d < 3 or d % 2 == 0:
        raise CodeError("distance must be odd and >= 3")
    n = d * d

    def label(i: int, j: int) -> int:
        return d * (d - 1 - j) + i + 1

    x_faces: list[list[int]] = []
    z_faces: list[list[int]] = []
    for a in range(d - 1):
        for b in range(d - 1):
            face = [label(a, b), label(a + 1, b), label(a, b + 1), label(a + 1, b + 1)]
            (z_faces if (a + b) % 2 == 0 else x_faces).append(face)
    for b in range(d - 1):
        if b % 2 == 1:
            z_faces.append([label(0, b), label(0, b + 1)])
        else:
            z_faces.append([label(d - 1, b), label(d - 1, b + 1)])
    for a in range(d - 1):
        if a % 2 == 1:
            x_faces.append([label(a, d - 1), label(a + 1, d - 1)])
        else:
            x_faces.append([label(a, 0), label(a + 1, 0)])

    stabs = [_x_string(n, f) for f in sorted(x_faces)]
    stabs += [_z_string(n, f) for f in sorted(z_faces)]
    return new_code(2, stabs, name=f"rotated_surface({d})", distance=d)


def _color_666(d: int) -> StabilizerCode:
    """Triangular 6.6.6 color code of odd distance d, greedy qudit numbering."""
    if d < 3 or d % 2 == 0:
        raise CodeError("distance must be odd and >= 3")
    rmax = 3 * (d - 1) // 2
    sites = [(r, c) for r in range(rmax + 1) for c in range(r + 1)]
    plaq = [(r, c) for (r, c) in sites if (r + c) % 3 == 1]
    qubits = [(r, c) for (r, c) in sites if (r + c) % 3 != 1]
    index = {s: i + 1 for i, s in enumerate(qubits)}
    nbrs = [(-1, -1), (-1, 0), (0, -1), (0, 1), (1, 0), (1, 1)]
    n = len(qubits)
    faces = []
    for (r, c) in plaq:
        face = [index[(r + dr, c + dc)] for dr, dc in nbrs if (r + dr, c + dc) in index]
        faces.append(sorted(face))
    stabs = [_x_string(n, f) for f in faces] + [_z_string(n, f) for f in faces]
    code = new_code(2, stabs, name=f"color_666({d})", distance=d)
    return permute(code, greedy_numbering(code))


def _color_488(d: int) -> StabilizerCode:
    """Triangular 4.8.8 color code of odd distance d, greedy qudit numbering."""
    if d < 3 or d % 2 == 0:
        raise CodeError("distance must be odd and >= 3")
    faces = _color_488_faces(d)
    n = max(max(f) for f in faces)
    stabs = [_x_string(n, f) for f in faces] + [_z_string(n, f) for f in faces]
    code = new_code(2, stabs, name=f"color_488({d})", distance=d)
    return permute(code, greedy_numbering(code))


def _color_488_faces(d: int) -> list[list[int]]:
    """Face supports of the triangular 4.8.8 lattice with d^2 - d + 1 qubits.

    A triangular patch is cut out of the square-octagon tiling.  Faces are
    3-colored (squares one color, octagons checkerboarded in the other two)
    and each side of the triangle is assigned one color: faces truncated by a
    side of their own color are dropped, every other face restricted to the
    patch survives as a stabilizer.  Qubits are numbered along diagonals,
    which keeps the identity ordering close to trellis-minimal.
    """
    y0, b = 1, 2
    a = -2 - 4 * (d - 1)
    side_color = {0: 0, 1: 2, 2: 1}

    def inside(q: tuple[int, int]) -> bool:
        return q[1] >= y0 and q[0] - q[1] >= a and q[0] + q[1] <= b

    supports: set[frozenset[tuple[int, int]]] = set()
    qubits: set[tuple[int, int]] = set()
    rng = 2 * d + 4
    for i in range(-rng, rng):
        for j in range(-rng, rng):
            square = frozenset(
                {(4 * i + 1, 4 * j), (4 * i - 1, 4 * j), (4 * i, 4 * j + 1), (4 * i, 4 * j - 1)}
            )
            octagon = frozenset(
                {
                    (4 * i + 1, 4 * j),
                    (4 * i, 4 * j + 1),
                    (4 * i + 3, 4 * j),
                    (4 * i + 4, 4 * j + 1),
                    (4 * i + 4, 4 * j + 3),
                    (4 * i + 3, 4 * j + 4),
                    (4 * i, 4 * j + 3),
                    (4 * i + 1, 4 * j + 4),
                }
            )
            for color, face in ((0, square), (1 + (i + j) % 2, octagon)):
                kept = frozenset(q for q in face if inside(q))
                if not kept:
                    continue
                qubits |= kept
                if kept != face:
                    cut_sides = set()
                    for q in face - kept:
                        if q[1] < y0:
                            cut_sides.add(0)
                        if q[0] - q[1] < a:
                            cut_sides.add(1)
                        if q[0] + q[1] > b:
                            cut_sides.add(2)
                    if any(side_color[s] == color for s in cut_sides):
                        continue
                if len(kept) >= 2:
                    supports.add(kept)
    order = sorted(qubits, key=lambda q: (q[0] + q[1], q[0] - q[1]))
    index = {q: i + 1 for i, q in enumerate(order)}
    return [sorted(index[q] for q in face) for face in sorted(supports, key=sorted)]


_BUILTIN_FILES = {
    "codetable_20_3_6": "codetable_20_3_6.qcode",
    "codetable_20_4_6": "codetable_20_4_6.qcode",
    "codetable_20_10_4": "codetable_20_10_4.qcode",
    "codetable_20_13_3": "codetable_20_13_3.qcode",
}

_BUILTIN_DISTANCE = {
    "codetable_20_3_6": 6,
    "codetable_20_4_6": 6,
    "codetable_20_10_4": 4,
    "codetable_20_13_3": 3,
}


def _five_one_one() -> StabilizerCode:
    stabs = [parse_pauli(s) for s in ("ZXIII", "XZXII", "IXZXI", "IIXZX")]
    return new_code(2, stabs, name="five_one_one", distance=1)


def _five_one_three() -> StabilizerCode:
    stabs = [parse_pauli(s) for s in ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")]
    return new_code(2, stabs, name="five_one_three", distance=3)


def _steane() -> StabilizerCode:
    stabs = []
    for row in STEANE_H:
        supp = list(np.nonzero(row)[0] + 1)
        stabs.append(_x_string(7, supp))
    for row in STEANE_H:
        supp = list(np.nonzero(row)[0] + 1)
        stabs.append(_z_string(7, supp))
    return new_code(2, stabs, name="steane", distance=3)


def _steane_level2() -> StabilizerCode:
    """[[49,1,9]] level-2 Steane: checks are I (x) H and H (x) all-ones."""
    n = 49
    stabs_x, stabs_z = [], []
    for block in range(7):
        for row in STEANE_H:
            supp = [7 * block + c + 1 for c in np.nonzero(row)[0]]
            stabs_x.append(_x_string(n, supp))
            stabs_z.append(_z_string(n, supp))
    for row in STEANE_H:
        supp = [7 * c + q + 1 for c in np.nonzero(row)[0] for q in range(7)]
        stabs_x.append(_x_string(n, supp))
        stabs_z.append(_z_string(n, supp))
    return new_code(2, stabs_x + stabs_z, name="steane_level2", distance=9)


def builtin(name: str, parameter: int | None = None) -> StabilizerCode:
    """Construct a built-in code by name.

    Parameterized families (``rotated_surface``, ``color_666``,
    ``color_488``) require an odd distance >= 3.
    """
    simple = {
        "five_one_one": _five_one_one,
        "five_one_three": _five_one_three,
        "steane": _steane,
        "steane_level2": _steane_level2,
    }
    if name in simple:
        return simple[name]()
    if name in _BUILTIN_FILES:
        data = (
            importlib.resources.files("qtrellis")
            .joinpath("data", _BUILTIN_FILES[name])
            .read_text()
        )
        code = parse_code_file(data)
        return StabilizerCode(
            p=code.p,
            n=code.n,
            k=code.k,
            stabilizers=code.stabilizers,
            normalizer_gens=code.normalizer_gens,
            logical_gens=code.logical_gens,
            qudit_order=code.qudit_order,
            name=name,
            distance=_BUILTIN_DISTANCE[name],
        )
    if name == "rotated_surface":
        if parameter is None:
            raise CodeError("rotated_surface requires a distance")
        return _rotated_surface(parameter)
    if name == "color_666":
        if parameter is None:
            raise CodeError("color_666 requires a distance")
        return _color_666(parameter)
    if name == "color_488":
        if parameter is None:
            raise CodeError("color_488 requires a distance")
        return _color_488(parameter)
    raise CodeError(f"unknown built-in code {name!r}")
